// Geometric full-band RIR simulation: image-source method for the specular
// part, Monte Carlo ray tracing for the diffuse tail. The two halves split
// cleanly: ISM covers never-scattered paths up to ism_max_order, the ray
// tracer registers only rays that have scattered at least once.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rirforge/rir.hpp"
#include "rirforge/scene.hpp"

namespace rirforge::geo {

struct GeoConfig {
  int ism_max_order = 6;
  int ray_count = 20000;
  int max_ray_bounces = 50;
  double energy_threshold_db = -60.0;  // relative to a ray's initial energy
  double output_rate = 48000.0;
  uint64_t rng_seed = 42;
  double histogram_bin = 32.0 / 48000.0;  // seconds
  bool parallel = true;

  void validate() const;
};

// Receiver registration sphere; energies are converted to pressure with the
// matching direct-path calibration constant.
inline constexpr double kReceiverRadius = 0.1;

struct ImageSource {
  Point3 position;
  int order = 0;
  std::array<double, 6> band_attenuation{};  // product of sqrt(1-alpha) per reflection
};

// All shoebox images up to max_order (L1 lattice enumeration). Obstacles are
// ignored here; occlusion is applied per image path in simulate_geometric.
std::vector<ImageSource> enumerate_images(const Scene& scene, int max_order);

struct BandHistogram {
  double bin_width = 0.0;                        // seconds
  std::array<std::vector<double>, 6> energy{};   // per band, per time bin

  size_t bins() const { return energy[0].size(); }
  double total(int band) const;
};

// Diffuse energy decay histogram. Each ray starts with energy 1/ray_count
// per band; registration happens on receiver-sphere pass-through once the
// ray has scattered. Deterministic for a fixed seed regardless of threads.
BandHistogram trace_diffuse(const Scene& scene, const GeoConfig& cfg);

ImpulseResponse simulate_geometric(const Scene& scene, const GeoConfig& cfg);

}  // namespace rirforge::geo
