#pragma once

#include <cstddef>
#include <vector>

#include "geoflow/immersion.hpp"

namespace geoflow {

struct Snapshot {
  double time = 0.0;
  Immersion imm;

  bool operator==(const Snapshot&) const = default;
};

/// Ordered (time, immersion) samples of a flow. Times strictly increase and
/// every snapshot shares the grid, ambient and lifts of the first one.
class SpaceTimeTrack {
 public:
  SpaceTimeTrack() = default;

  /// Throws ArgumentError on non-increasing time or a layout mismatch.
  void append(double time, Immersion imm);

  std::size_t size() const { return snapshots_.size(); }
  bool empty() const { return snapshots_.empty(); }
  const Snapshot& operator[](std::size_t k) const { return snapshots_[k]; }
  const Snapshot& front() const { return snapshots_.front(); }
  const Snapshot& back() const { return snapshots_.back(); }
  auto begin() const { return snapshots_.begin(); }
  auto end() const { return snapshots_.end(); }

  bool operator==(const SpaceTimeTrack&) const = default;

 private:
  std::vector<Snapshot> snapshots_;
};

}  // namespace geoflow
