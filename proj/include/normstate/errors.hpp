#pragma once

#include <stdexcept>
#include <string>

namespace normstate {

// Invalid construction parameters (dimension, node count, exponent ranges).
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// The requested quantity cannot be resolved on the current grid
// (truncation tail not converged, scaling collapses the support, ...).
struct resolution_error : std::runtime_error {
    explicit resolution_error(const std::string& msg) : std::runtime_error(msg) {}
};

// An iterative solver failed (no shooting bracket, no fiber root, ...).
struct solver_error : std::runtime_error {
    explicit solver_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input outside the mathematical domain of the operation.
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace normstate
