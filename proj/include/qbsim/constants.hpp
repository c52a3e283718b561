// constants.hpp: CODATA 2018 physical constants (SI)

#pragma once

#include <numbers>

namespace qbsim::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double h = 6.62607015e-34;          // J s (exact)
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double e = 1.602176634e-19;         // C (exact)
inline constexpr double flux_quantum = h / (2.0 * e); // Wb, Phi0 = h/2e

} // namespace qbsim::constants
