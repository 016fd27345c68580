#pragma once

#include <stdexcept>
#include <string>

namespace crane {

struct InvalidParams : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct FieldTooShort : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SingularMassMatrix : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonPositivePhi : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InconsistentVelocityError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ObservationNotFinite : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotStabilizable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when any state magnitude exceeds the instability bound; carries the
// simulation time at which the integrator gave up.
struct NumericalBlowup : std::runtime_error {
    explicit NumericalBlowup(double t_abort, const std::string& what)
        : std::runtime_error(what), t(t_abort) {}
    double t;
};

struct EmptyTrace : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what, int line_no = 0)
        : std::runtime_error(what), line(line_no) {}
    int line;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace crane
