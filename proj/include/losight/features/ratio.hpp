#pragma once

#include <span>
#include <vector>

namespace losight::features {

/// Mean of window i over the mean of its mirror window (n_windows - 1 - i),
/// for i < n_windows / 2. Denominator magnitudes are floored at 1e-30.
std::vector<double> intensity_ratio_features(std::span<const double> signal, int window_len);

}  // namespace losight::features
