#ifndef ISOFLUX_ERRORS_HPP_
#define ISOFLUX_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace isoflux {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AmbiguousProjection : Error {
    using Error::Error;
};

struct OutsideDomain : Error {
    using Error::Error;
};

struct SolverDiverged : Error {
    using Error::Error;
};

struct BoxTooSmall : Error {
    using Error::Error;
};

struct ZeroLength : Error {
    using Error::Error;
};

struct OpenCurve : Error {
    using Error::Error;
};

struct FieldEvaluation : Error {
    using Error::Error;
};

struct InvalidAngles : Error {
    using Error::Error;
};

struct DegenerateCurve : Error {
    using Error::Error;
};

struct MaximalityViolated : Error {
    using Error::Error;
};

struct InvalidEpsilon : Error {
    using Error::Error;
};

}  // namespace isoflux

#endif  // ISOFLUX_ERRORS_HPP_
