#include "geoflow/track.hpp"

#include <cmath>

#include "geoflow/errors.hpp"

namespace geoflow {

void SpaceTimeTrack::append(double time, Immersion imm) {
  if (!std::isfinite(time)) throw ArgumentError("snapshot time must be finite");
  if (!snapshots_.empty()) {
    if (!(time > snapshots_.back().time)) {
      throw ArgumentError("snapshot times must strictly increase");
    }
    if (!snapshots_.front().imm.same_layout(imm)) {
      throw ArgumentError("snapshot layout differs from the first snapshot");
    }
  }
  snapshots_.push_back({time, std::move(imm)});
}

}  // namespace geoflow
