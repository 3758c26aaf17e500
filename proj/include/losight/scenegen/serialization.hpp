#pragma once

#include <json.hpp>

#include "losight/physics/forward.hpp"
#include "losight/scenegen/container.hpp"
#include "losight/scenegen/dataset.hpp"

namespace losight::physics {
void to_json(nlohmann::json& j, const SpectralGrid& g);
void from_json(const nlohmann::json& j, SpectralGrid& g);
void to_json(nlohmann::json& j, const SlitConfig& s);
void from_json(const nlohmann::json& j, SlitConfig& s);
}  // namespace losight::physics

namespace losight::scenegen {
void to_json(nlohmann::json& j, const ProfileConfig& c);
void from_json(const nlohmann::json& j, ProfileConfig& c);
void to_json(nlohmann::json& j, const SplitAssignment& s);
void from_json(const nlohmann::json& j, SplitAssignment& s);

/// Spectra go in the data block, segment temperatures in the target block,
/// everything else in the metadata.
Container dataset_to_container(const Dataset& d);
Dataset dataset_from_container(const Container& c);

void save_dataset(const std::filesystem::path& path, const Dataset& d);
Dataset load_dataset(const std::filesystem::path& path);
}  // namespace losight::scenegen
