#include "losight/features/transform.hpp"

#include <algorithm>
#include <cmath>

namespace losight::features {

std::vector<double> log_transform(std::span<const double> intensity) {
    std::vector<double> out(intensity.size());
    std::transform(intensity.begin(), intensity.end(), out.begin(),
                   [](double v) { return std::log(std::max(v, kLogFloor)); });
    return out;
}

}  // namespace losight::features
