#pragma once

#include <stdexcept>
#include <string>

namespace exforge {

// Every failure the library raises derives from Error so callers can catch
// one type; the concrete class names the failure.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define EXFORGE_ERROR(Name)                                   \
  struct Name : Error {                                       \
    explicit Name(const std::string& what)                    \
        : Error(std::string(#Name ": ") + what) {}            \
  }

EXFORGE_ERROR(RangeError);
EXFORGE_ERROR(LengthMismatch);
EXFORGE_ERROR(ParseError);
EXFORGE_ERROR(CtxMismatch);
EXFORGE_ERROR(DivisionByZero);
EXFORGE_ERROR(Inconsistent);
EXFORGE_ERROR(DuplicatePoint);
EXFORGE_ERROR(SpaceMismatch);
EXFORGE_ERROR(ExplosionGuard);
EXFORGE_ERROR(RowLengthMismatch);
EXFORGE_ERROR(PlanViolation);
EXFORGE_ERROR(PlanInfeasible);
EXFORGE_ERROR(InsufficientSeed);
EXFORGE_ERROR(CountExceedsUniverse);
EXFORGE_ERROR(FormatError);
EXFORGE_ERROR(NotImplemented);

#undef EXFORGE_ERROR

// Planner failure; `inequality` names the first ledger line that does not hold.
struct Infeasible : Error {
  std::string inequality;
  Infeasible(const std::string& ineq, const std::string& detail)
      : Error("Infeasible: " + ineq + (detail.empty() ? "" : " (" + detail + ")")),
        inequality(ineq) {}
};

}  // namespace exforge
