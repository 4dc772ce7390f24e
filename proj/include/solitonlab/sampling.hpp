#ifndef SOLITONLAB_SAMPLING_HPP
#define SOLITONLAB_SAMPLING_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "solitonlab/models.hpp"

namespace soliton {

// Radial bounds for seeded point sampling; model-specific meaning of the
// radial coordinate (chart radius for the cigar family, r for bryant).
struct SampleRegion {
  double r_min;
  double r_max;
};

SampleRegion default_region(const SolitonModel& model);

// Deterministic seeded sample of valid chart points for a model.  The same
// (model, count, seed, region) always yields the same points.
std::vector<ChartPoint> sample_points(const SolitonModel& model, int count, std::uint64_t seed,
                                      std::optional<SampleRegion> region = std::nullopt);

}  // namespace soliton

#endif
