#pragma once

#include <stdexcept>
#include <string>

namespace nhdqpt {

// Base of every error raised by the library. Each subclass names one failure
// mode so callers can react to exceptional points and grid singularities
// without parsing messages.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define NHDQPT_DEFINE_ERROR(Name)            \
    class Name : public Error {              \
    public:                                  \
        using Error::Error;                  \
    }

// numeric kernel
NHDQPT_DEFINE_ERROR(NearDefective);
NHDQPT_DEFINE_ERROR(SelfOrthogonal);
NHDQPT_DEFINE_ERROR(ConvergenceFailure);
NHDQPT_DEFINE_ERROR(DimensionMismatch);

// dynamics
NHDQPT_DEFINE_ERROR(EchoZero);

// ssh model
NHDQPT_DEFINE_ERROR(ExceptionalPoint);
NHDQPT_DEFINE_ERROR(GaugeSingular);

// dqpt analysis
NHDQPT_DEFINE_ERROR(DegenerateRatio);
NHDQPT_DEFINE_ERROR(NotCritical);
NHDQPT_DEFINE_ERROR(LogSingular);
NHDQPT_DEFINE_ERROR(Unwrappable);

// cli
NHDQPT_DEFINE_ERROR(ParseError);
NHDQPT_DEFINE_ERROR(ValidationError);

#undef NHDQPT_DEFINE_ERROR

}  // namespace nhdqpt
