#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fraclab {

/// Projected relaxation failed to reach the requested tolerance.
/// Carries the residual history sampled at the solver's check interval.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(std::string what, std::vector<double> history)
        : std::runtime_error(std::move(what)), residual_history(std::move(history)) {}

    std::vector<double> residual_history;
};

/// Dirichlet data lies below the obstacle at a trace boundary node.
class InfeasibleBoundary : public std::runtime_error {
public:
    explicit InfeasibleBoundary(const std::string& what) : std::runtime_error(what) {}
};

/// Surface mass H(r) is below the machine floor; the frequency quotient
/// rD/H is undefined there.
class DegenerateH : public std::runtime_error {
public:
    explicit DegenerateH(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fraclab
