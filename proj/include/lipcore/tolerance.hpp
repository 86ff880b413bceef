#pragma once

#include <cstddef>

namespace lipcore {

// Arithmetic comparison tolerance shared by all modules.
inline constexpr double kNumericTol = 1e-9;

// Pseudo-distances at or below this merge into a single quotient class.
inline constexpr double kCollapseTol = 1e-7;

// Allowed residual when realizing a collapsed pseudo-metric as a tree.
inline constexpr double kTreeTol = 1e-7;

// Two independently computed cores agree if every matched sample is this close.
inline constexpr double kUniqueTol = 1e-6;

// Carnot-Caratheodory distance solver.
inline constexpr double kCcTol = 1e-8;
inline constexpr int kCcIterationCap = 200;

// Upper bound on shortening iterations inside the minimizer.
inline constexpr int kMinimizeCap = 32;

}  // namespace lipcore
