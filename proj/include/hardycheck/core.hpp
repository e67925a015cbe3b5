// core.hpp
// Error type, tolerance constants and small numeric helpers shared by every module.

#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hardycheck {

inline constexpr double pi = std::numbers::pi;
inline constexpr double ln2 = std::numbers::ln2;

namespace tol {
// Preconditions on caller-supplied states.
inline constexpr double input_norm = 1e-9;
// Postconditions on states and operators we construct.
inline constexpr double constructed = 1e-12;
// Admissibility margin for the non-orthogonal basis angles.
inline constexpr double angle_margin = 1e-9;
// Default exclusion margin for sweep grids (radians).
inline constexpr double sweep_margin = 1e-6;
// Contradiction probabilities at or below this count as vanishing.
inline constexpr double vanishing = 1e-15;
} // namespace tol

enum class errc {
    not_normalized,
    invalid_density,
    not_psd,
    domain_error,
    singular_alpha,
    singular_overlap,
    parallel_states,
    empty_grid,
    spectra_mismatch,
    all_rejected,
    table_invalid,
    invalid_input,
};

inline std::string_view to_string(errc code) {
    switch (code) {
    case errc::not_normalized: return "NotNormalized";
    case errc::invalid_density: return "InvalidDensity";
    case errc::not_psd: return "NotPsd";
    case errc::domain_error: return "DomainError";
    case errc::singular_alpha: return "SingularAlpha";
    case errc::singular_overlap: return "SingularOverlap";
    case errc::parallel_states: return "ParallelStates";
    case errc::empty_grid: return "EmptyGrid";
    case errc::spectra_mismatch: return "SpectraMismatch";
    case errc::all_rejected: return "AllRejected";
    case errc::table_invalid: return "TableInvalid";
    case errc::invalid_input: return "InvalidInput";
    }
    return "Unknown";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

inline double sqr(double x) { return x * x; }

// Wraps an angle difference into (-pi, pi].
inline double wrap_angle(double x) {
    double r = std::remainder(x, 2.0 * pi);
    if (r <= -pi) r += 2.0 * pi;
    return r;
}

} // namespace hardycheck
