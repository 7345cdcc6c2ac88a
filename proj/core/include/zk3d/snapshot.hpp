#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "zk3d/field.hpp"

namespace zk3d {

/// Binary field snapshot, little-endian:
///   "ZK3D" | u32 version = 1 | u64 n_x n_y n_z | f64 l_x l_y l_z |
///   f64 time | f64 v_x | n_x n_y n_z f64 values (x fastest, then y, z)
struct Snapshot {
  RealField field;
  double time = 0.0;
  double v_x = 0.0;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 72;

std::string encode_snapshot(const RealField& u, double time, double v_x);
/// Throws FormatError on bad magic, version, grid, or payload length.
Snapshot decode_snapshot(const std::string& bytes);

/// Throws IoError when the file cannot be written.
void write_snapshot(const std::filesystem::path& path, const RealField& u, double time = 0.0, double v_x = 0.0);
/// Throws IoError when unreadable and FormatError when malformed.
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace zk3d
