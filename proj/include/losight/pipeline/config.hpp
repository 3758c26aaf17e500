#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "losight/features/group.hpp"
#include "losight/ml/blend.hpp"
#include "losight/ml/mlp.hpp"
#include "losight/ml/train.hpp"
#include "losight/physics/forward.hpp"
#include "losight/scenegen/profile.hpp"

namespace losight::pipeline {

/// Environment variable naming the default line list.
inline constexpr const char* kLineDbEnv = "LOSIGHT_LINE_DB";

/// Everything one end-to-end run needs. Stage seeds derive from `seed`.
struct RunConfig {
    std::uint64_t seed = 0;
    std::size_t samples = 2000;
    std::vector<std::filesystem::path> lines;  // empty: environment, then bundled list
    physics::SpectralGrid grid;
    physics::SlitConfig slit;
    scenegen::ProfileConfig profile;
    physics::ForwardOptions forward;
    std::array<double, 3> split{0.70, 0.15, 0.15};
    features::FeatureGroup features{"log", features::Extractor::Polynomial, 3, 50, Index{300}};
    ml::MlpConfig mlp;
    ml::TuningGrid tuning;
    ml::MlpConfig meta_mlp;
    std::filesystem::path output = "losight_out";
    unsigned jobs = 0;  // 0: all available cores

    unsigned resolved_jobs() const;
    void validate() const;
};

/// Stage seed: splitmix64(seed ^ fnv1a(stage)). Stages: "generate", "split",
/// "train", "meta".
std::uint64_t stage_seed(std::uint64_t seed, std::string_view stage);

nlohmann::json config_to_json(const RunConfig& c);
/// `seed` is mandatory; every other field falls back to its default.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Writes the document as indented JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

/// "<output>.config.json" next to an output file.
std::filesystem::path config_echo_path(const std::filesystem::path& output);

}  // namespace losight::pipeline
