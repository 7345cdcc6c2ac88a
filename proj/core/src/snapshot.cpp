#include "zk3d/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "zk3d/error.hpp"

namespace zk3d {
namespace {

template <class T>
void put(std::string& out, T value) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get(const std::string& in, std::size_t& pos) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  pos += sizeof(T);
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

std::string encode_snapshot(const RealField& u, double time, double v_x) {
  const Grid& g = u.grid();
  std::string out;
  out.reserve(kSnapshotHeaderBytes + 8 * g.size());
  out.append("ZK3D", 4);
  put<std::uint32_t>(out, kSnapshotVersion);
  for (Axis a : kAxes) put<std::uint64_t>(out, g.n(a));
  for (Axis a : kAxes) put<double>(out, g.l(a));
  put<double>(out, time);
  put<double>(out, v_x);
  if constexpr (std::endian::native == std::endian::little) {
    out.append(reinterpret_cast<const char*>(u.data()), 8 * u.size());
  } else {
    for (double v : u.values()) put<double>(out, v);
  }
  return out;
}

Snapshot decode_snapshot(const std::string& bytes) {
  if (bytes.size() < kSnapshotHeaderBytes) throw FormatError("snapshot: truncated header");
  if (bytes.compare(0, 4, "ZK3D") != 0) throw FormatError("snapshot: bad magic");
  std::size_t pos = 4;
  const auto version = get<std::uint32_t>(bytes, pos);
  if (version != kSnapshotVersion) {
    throw FormatError("snapshot: unsupported version " + std::to_string(version));
  }
  Extent3 n{};
  Vec3 l{};
  for (auto& v : n) v = static_cast<std::size_t>(get<std::uint64_t>(bytes, pos));
  for (auto& v : l) v = get<double>(bytes, pos);
  const double time = get<double>(bytes, pos);
  const double v_x = get<double>(bytes, pos);

  Grid grid = [&] {
    try {
      return make_grid(n, l);
    } catch (const InvalidGridError& e) {
      throw FormatError(std::string("snapshot: ") + e.what());
    }
  }();
  const std::size_t payload = bytes.size() - kSnapshotHeaderBytes;
  if (payload != 8 * grid.size()) {
    std::ostringstream msg;
    msg << "snapshot: truncated payload, header declares " << 8 * grid.size() << " bytes but file holds "
        << payload;
    throw FormatError(msg.str());
  }
  AlignedVector<double> values(grid.size());
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(values.data(), bytes.data() + pos, payload);
  } else {
    for (auto& v : values) v = get<double>(bytes, pos);
  }
  return Snapshot{RealField(grid, std::move(values)), time, v_x};
}

void write_snapshot(const std::filesystem::path& path, const RealField& u, double time, double v_x) {
  const std::string bytes = encode_snapshot(u, time, v_x);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

}  // namespace zk3d
