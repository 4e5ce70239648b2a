#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "geoflow/track.hpp"

namespace geoflow {

inline constexpr std::uint32_t kTrackFormatVersion = 1;

/// Binary track layout, all fields little-endian:
///   "MCFT", u32 version, u32 n, u32 N, u32 dims[2], f64 length[2], f64 origin[2],
///   u8 periodic[2], u32 ambient kind, f64 periods[N], f64 lift0[N], f64 lift1[N],
///   u64 snapshot count, then per snapshot f64 time and row-major f64 positions.
std::vector<std::uint8_t> encode_track(const SpaceTimeTrack& track);

/// Throws CorruptTrackError on bad magic, version, layout or size.
SpaceTimeTrack decode_track(std::span<const std::uint8_t> bytes);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path, std::string_view text);

void write_track(const std::filesystem::path& path, const SpaceTimeTrack& track);
SpaceTimeTrack read_track(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

}  // namespace geoflow
