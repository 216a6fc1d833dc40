#pragma once

#include <stdexcept>
#include <string>

namespace liouville {

// Every failure raised by the library derives from Error so callers (the CLI
// in particular) can map categories onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define LIOUVILLE_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                        \
    public:                                                            \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

LIOUVILLE_DEFINE_ERROR(DecompositionError);
LIOUVILLE_DEFINE_ERROR(GridTooSmall);
LIOUVILLE_DEFINE_ERROR(DomainError);
LIOUVILLE_DEFINE_ERROR(PreconditionError);
LIOUVILLE_DEFINE_ERROR(NoSolution);
LIOUVILLE_DEFINE_ERROR(BlowupError);
LIOUVILLE_DEFINE_ERROR(IntegrationDiverged);
LIOUVILLE_DEFINE_ERROR(OracleRejected);
LIOUVILLE_DEFINE_ERROR(DivisionByZero);
LIOUVILLE_DEFINE_ERROR(OutOfRange);
LIOUVILLE_DEFINE_ERROR(InterpolationError);
LIOUVILLE_DEFINE_ERROR(CocycleViolation);
LIOUVILLE_DEFINE_ERROR(ConfigError);

#undef LIOUVILLE_DEFINE_ERROR

}  // namespace liouville
