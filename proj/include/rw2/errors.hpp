#pragma once

#include <stdexcept>
#include <string>

namespace rw2 {

/// Bad user-supplied data (non-finite entries, weight mismatch, non-PSD matrix, ...).
struct input_error : std::invalid_argument {
    explicit input_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// A ray collapsed to the apex (zero RW2 norm); angles are undefined there.
struct degenerate_ray_error : std::domain_error {
    explicit degenerate_ray_error(const std::string& msg) : std::domain_error(msg) {}
};

/// Geometrically infeasible configuration (triangle inequality violated, bad cone coefficients).
struct geometry_error : std::domain_error {
    explicit geometry_error(const std::string& msg) : std::domain_error(msg) {}
};

/// Problem exceeds the configured size cap of the exact solver.
struct size_error : std::length_error {
    explicit size_error(const std::string& msg) : std::length_error(msg) {}
};

/// Stochastic dual ascent diverged (NaN objective or potential blow-up).
struct ascent_error : std::runtime_error {
    explicit ascent_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace rw2
