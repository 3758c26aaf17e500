#include "losight/features/ratio.hpp"

#include <cmath>

#include "losight/core/error.hpp"

namespace losight::features {

std::vector<double> intensity_ratio_features(std::span<const double> signal, int window_len) {
    if (window_len < 1) throw UsageError("intensity-ratio window must be positive");
    const auto len = static_cast<std::size_t>(window_len);
    if (signal.size() < 2 * len) throw UsageError("signal shorter than two ratio windows");
    const std::size_t windows = signal.size() / len;

    auto window_mean = [&](std::size_t w) {
        double acc = 0.0;
        for (std::size_t i = w * len; i < (w + 1) * len; ++i) acc += signal[i];
        return acc / static_cast<double>(len);
    };

    std::vector<double> out;
    out.reserve(windows / 2);
    for (std::size_t i = 0; i < windows / 2; ++i) {
        const double num = window_mean(i);
        double den = window_mean(windows - 1 - i);
        if (std::abs(den) < 1e-30) den = std::copysign(1e-30, den);
        out.push_back(num / den);
    }
    return out;
}

}  // namespace losight::features
