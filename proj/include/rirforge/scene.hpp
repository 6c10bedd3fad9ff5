// Scene description consumed by both solvers: shoebox room, axis-aligned box
// obstacles, per-surface banded materials, source/receiver positions.
// Scenes are immutable after construction and safe to share across threads.
#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "rirforge/geometry.hpp"

namespace rirforge {

// Octave band centers used for all banded material data.
inline constexpr std::array<double, 6> kOctaveBandCenters = {125.0,  250.0,  500.0,
                                                             1000.0, 2000.0, 4000.0};
inline constexpr int kNumBands = 6;

struct SurfaceMaterial {
  std::array<double, 6> absorption{};  // energy absorption per band, in [0,1]
  std::array<double, 6> scattering{};  // scattering coefficient per band, in [0,1]

  static SurfaceMaterial uniform(double absorption_coeff, double scattering_coeff = 0.0);
};

// Wall indexing convention: 0:-x 1:+x 2:-y 3:+y 4:floor(-z) 5:ceiling(+z).
struct Scene {
  std::array<double, 3> room_dims{};
  std::vector<AxisAlignedBox> obstacles;
  std::array<SurfaceMaterial, 6> surfaces{};
  std::vector<SurfaceMaterial> obstacle_materials;
  Point3 source;
  Point3 receiver;
  double speed_of_sound = 343.0;
  bool air_absorption_enabled = false;

  // Throws std::invalid_argument naming the violated invariant.
  void validate() const;

  nlohmann::json to_json() const;
  std::string serialize() const;

  // Content hash of the canonical serialized form (FNV-1a, hex).
  std::string digest() const;

  double source_receiver_distance() const { return distance(source, receiver); }
};

// Parses and validates a scene document (JSON object, unknown keys rejected).
Scene parse_scene(const std::string& text);
Scene scene_from_json(const nlohmann::json& doc);

// True iff the source->receiver segment intersects no obstacle.
bool line_of_sight(const Scene& scene);

}  // namespace rirforge
