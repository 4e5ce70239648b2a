#include "geoflow/track_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "geoflow/errors.hpp"

namespace geoflow {

namespace {

constexpr char kMagic[4] = {'M', 'C', 'F', 'T'};

class Writer {
 public:
  void raw(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}
  void need(std::size_t n) const {
    if (b_.size() - pos_ < n) throw CorruptTrackError("track file is truncated");
  }
  std::uint8_t u8() {
    need(1);
    return b_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b_[pos_++]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b_[pos_++]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::size_t remaining() const { return b_.size() - pos_; }

 private:
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_track(const SpaceTimeTrack& track) {
  if (track.empty()) throw ArgumentError("cannot encode an empty track");
  const Immersion& first = track.front().imm;
  const auto N = static_cast<std::size_t>(first.ambient_dim);
  Writer w;
  w.raw(kMagic, 4);
  w.u32(kTrackFormatVersion);
  w.u32(static_cast<std::uint32_t>(first.grid.n));
  w.u32(static_cast<std::uint32_t>(first.ambient_dim));
  for (int a = 0; a < 2; ++a) w.u32(static_cast<std::uint32_t>(first.grid.dims[a]));
  for (int a = 0; a < 2; ++a) w.f64(first.grid.length[a]);
  for (int a = 0; a < 2; ++a) w.f64(first.grid.origin[a]);
  for (int a = 0; a < 2; ++a) w.u8(first.grid.periodic[a] ? 1 : 0);
  w.u32(static_cast<std::uint32_t>(first.ambient));
  for (std::size_t c = 0; c < N; ++c) {
    w.f64(c < first.ambient_periods.size() ? first.ambient_periods[c] : 0.0);
  }
  for (const auto& l : first.lift) {
    for (std::size_t c = 0; c < N; ++c) w.f64(l[c]);
  }
  w.u64(track.size());
  for (const Snapshot& s : track) {
    w.f64(s.time);
    for (double v : s.imm.positions) w.f64(v);
  }
  return w.take();
}

SpaceTimeTrack decode_track(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  r.need(4);
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw CorruptTrackError("bad magic bytes");
  for (int i = 0; i < 4; ++i) r.u8();
  const std::uint32_t version = r.u32();
  if (version != kTrackFormatVersion) {
    throw CorruptTrackError("unsupported track format version " + std::to_string(version));
  }
  ParamGrid grid;
  grid.n = static_cast<int>(r.u32());
  const std::uint32_t N = r.u32();
  for (int a = 0; a < 2; ++a) grid.dims[a] = static_cast<int>(r.u32());
  for (int a = 0; a < 2; ++a) grid.length[a] = r.f64();
  for (int a = 0; a < 2; ++a) grid.origin[a] = r.f64();
  for (int a = 0; a < 2; ++a) grid.periodic[a] = r.u8() != 0;
  const std::uint32_t kind = r.u32();
  if (kind > 1) throw CorruptTrackError("unknown ambient kind");
  if (N < 2 || N > kMaxAmbientDim || static_cast<int>(N) <= grid.n) {
    throw CorruptTrackError("invalid ambient dimension");
  }
  try {
    grid.validate();
  } catch (const ArgumentError& e) {
    throw CorruptTrackError(std::string("invalid grid: ") + e.what());
  }

  Immersion proto(grid, static_cast<int>(N));
  proto.ambient = static_cast<AmbientKind>(kind);
  std::vector<double> periods(N);
  for (double& p : periods) p = r.f64();
  if (proto.ambient == AmbientKind::flat_torus) proto.ambient_periods = periods;
  for (auto& l : proto.lift) {
    for (double& v : l) v = r.f64();
  }
  const std::uint64_t count = r.u64();
  const std::uint64_t per = 8 + 8 * static_cast<std::uint64_t>(grid.size()) * N;
  if (count == 0 || r.remaining() / per != count || r.remaining() % per != 0) {
    throw CorruptTrackError("track payload size does not match the snapshot count");
  }

  SpaceTimeTrack track;
  for (std::uint64_t k = 0; k < count; ++k) {
    const double t = r.f64();
    Immersion imm = proto;
    for (double& v : imm.positions) v = r.f64();
    try {
      track.append(t, std::move(imm));
    } catch (const ArgumentError& e) {
      throw CorruptTrackError(std::string("invalid snapshot sequence: ") + e.what());
    }
  }
  return track;
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view text) {
  write_file_atomic(path, std::span<const std::uint8_t>(
                              reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

void write_track(const std::filesystem::path& path, const SpaceTimeTrack& track) {
  write_file_atomic(path, encode_track(track));
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

SpaceTimeTrack read_track(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return decode_track(bytes);
}

}  // namespace geoflow
