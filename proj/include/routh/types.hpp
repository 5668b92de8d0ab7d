#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace routh {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Error hierarchy. Every failure mode of the library maps to one of these;
// integration errors carry the last time at which the state was still good.

struct NumericalDomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntegrationBlowupError : std::runtime_error {
    double last_good_time;
    IntegrationBlowupError(const std::string& msg, double t)
        : std::runtime_error(msg), last_good_time(t) {}
};

struct ChartSingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularLagrangianError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConstraintViolationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotGRegularError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotInvariantError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct KappaSolveError : std::runtime_error {
    double residual;
    KappaSolveError(const std::string& msg, double r)
        : std::runtime_error(msg), residual(r) {}
};

struct DiagnosticsMissingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GaugeAnchorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ComparisonError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace routh
