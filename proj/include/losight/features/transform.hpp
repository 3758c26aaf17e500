#pragma once

#include <span>
#include <vector>

namespace losight::features {

inline constexpr double kLogFloor = 1e-30;

/// ln(max(I, 1e-30)) elementwise.
std::vector<double> log_transform(std::span<const double> intensity);

}  // namespace losight::features
