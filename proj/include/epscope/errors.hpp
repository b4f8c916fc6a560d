#pragma once

#include <stdexcept>
#include <string>
#include <complex>

namespace epscope {

// Validation problems (bad parameters, malformed configs). CLI maps these
// to exit code 2.
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidFamily : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct DegenerateSlopes : InvalidInput {
    DegenerateSlopes()
        : InvalidInput("degenerate slopes: omega1 == omega2 is not allowed "
                       "(closed-form EP formulas divide by omega1 - omega2)") {}
};

// Numerical failures. CLI maps these to exit code 3.
struct SolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PolyRootFailure : SolverFailure {
    std::complex<double> best_iterate{};
    double best_residual = 0.0;
    PolyRootFailure(const std::string& msg, std::complex<double> it, double res)
        : SolverFailure(msg), best_iterate(it), best_residual(res) {}
};

struct ScanUnreliable : SolverFailure {
    std::size_t failed_cells = 0;
    std::size_t total_cells = 0;
    ScanUnreliable(std::size_t failed, std::size_t total)
        : SolverFailure("grid scan unreliable: " + std::to_string(failed) + "/" +
                        std::to_string(total) + " cells failed to solve"),
          failed_cells(failed), total_cells(total) {}
};

struct RefineFailure : SolverFailure {
    std::complex<double> best_iterate{};
    double best_residual = 0.0;
    RefineFailure(const std::string& msg, std::complex<double> it, double res)
        : SolverFailure(msg), best_iterate(it), best_residual(res) {}
};

struct CoalescenceError : SolverFailure {
    using SolverFailure::SolverFailure;
};

struct InvalidShift : SolverFailure {
    using SolverFailure::SolverFailure;
};

struct GaugeBreakdown : SolverFailure {
    using SolverFailure::SolverFailure;
};

struct NoPassage : SolverFailure {
    using SolverFailure::SolverFailure;
};

struct InvalidEP : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct LoopThroughEP : SolverFailure {
    double min_gap = 0.0;
    double suggested_radius = 0.0;
    LoopThroughEP(double gap, double radius)
        : SolverFailure("loop passes through a near-coalescence (min gap " +
                        std::to_string(gap) + "); try radius " + std::to_string(radius)),
          min_gap(gap), suggested_radius(radius) {}
};

struct ConfigError : InvalidInput {
    std::string field;
    ConfigError(const std::string& where, const std::string& msg)
        : InvalidInput("config error at '" + where + "': " + msg), field(where) {}
};

} // namespace epscope
