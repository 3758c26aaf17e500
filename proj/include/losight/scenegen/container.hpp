#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "losight/core/matrix.hpp"

namespace losight::scenegen {

/// LOSD binary container: magic "LOSD", u32 version, then three blocks.
/// Matrix blocks are rows (u64), cols (u64), row-major little-endian f64.
/// The metadata block is a u64 byte length followed by UTF-8 JSON.
struct Container {
    Matrix data;
    Matrix targets;
    nlohmann::json metadata = nlohmann::json::object();
};

inline constexpr std::uint32_t kContainerVersion = 1;

std::string encode_container(const Container& c);
Container decode_container(std::string_view bytes);

void write_container(const std::filesystem::path& path, const Container& c);
Container read_container(const std::filesystem::path& path);

}  // namespace losight::scenegen
