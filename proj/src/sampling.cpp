#include "solitonlab/sampling.hpp"

#include <cmath>
#include <random>

#include "solitonlab/bryant.hpp"
#include "solitonlab/errors.hpp"

namespace soliton {

namespace {

// Uniform double in [0, 1) from the full 64-bit state; the standard
// distributions are implementation-defined, this is reproducible everywhere.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

}  // namespace

SampleRegion default_region(const SolitonModel& model) {
  const std::string& n = model.name();
  if (n == "cigar") return {0.0, 10.0};
  if (n == "cigarxr") return {0.3, 3.0};
  if (n == "bryant") return {1.0, 100.0};
  if (n == "euclidean-quadratic") return {0.5, 1.5};
  return {0.0, 1.0};  // euclidean
}

std::vector<ChartPoint> sample_points(const SolitonModel& model, int count, std::uint64_t seed,
                                      std::optional<SampleRegion> region) {
  const SampleRegion reg = region.value_or(default_region(model));
  std::mt19937_64 rng(seed);
  std::vector<ChartPoint> pts;
  pts.reserve(count);
  const std::string& n = model.name();
  for (int k = 0; k < count; ++k) {
    if (n == "cigar") {
      const double rho = std::sqrt(uniform01(rng)) * (reg.r_max - reg.r_min) + reg.r_min;
      const double ang = uniform(rng, 0.0, 2.0 * M_PI);
      pts.emplace_back(rho * std::cos(ang), rho * std::sin(ang));
    } else if (n == "cigarxr") {
      const double rho = uniform(rng, reg.r_min, reg.r_max);
      const double ang = uniform(rng, 0.0, 2.0 * M_PI);
      const double z = uniform(rng, -2.0, 2.0);
      pts.emplace_back(rho * std::cos(ang), rho * std::sin(ang), z);
    } else if (n == "bryant") {
      const double r = uniform(rng, reg.r_min, reg.r_max);
      const double theta = uniform(rng, 0.4, M_PI - 0.4);
      const double phi = uniform(rng, 0.0, 2.0 * M_PI);
      pts.emplace_back(r, theta, phi);
    } else if (model.dimension() == 2) {
      const double x = uniform(rng, -reg.r_max, reg.r_max);
      const double y = uniform(rng, -reg.r_max, reg.r_max);
      pts.emplace_back(x, y);
    } else {
      const double x = uniform(rng, -reg.r_max, reg.r_max);
      const double y = uniform(rng, -reg.r_max, reg.r_max);
      const double z = uniform(rng, -reg.r_max, reg.r_max);
      pts.emplace_back(x, y, z);
    }
  }
  return pts;
}

}  // namespace soliton
