#include "rirforge/scene.hpp"

#include <cstdint>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rirforge {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

std::array<double, 6> parse_band_values(const json& v, const std::string& what) {
  std::array<double, 6> out{};
  if (v.is_number()) {
    out.fill(v.get<double>());
  } else if (v.is_array() && v.size() == 6) {
    for (int i = 0; i < 6; ++i) {
      if (!v[i].is_number()) fail(what + " must contain numbers");
      out[i] = v[i].get<double>();
    }
  } else {
    fail(what + " must be a number or an array of 6 numbers");
  }
  for (double c : out)
    if (!(c >= 0.0 && c <= 1.0)) fail(what + " coefficient out of [0,1]");
  return out;
}

SurfaceMaterial parse_material(const json& m, const std::string& what) {
  if (!m.is_object()) fail(what + " must be an object");
  for (auto& [key, _] : m.items())
    if (key != "absorption" && key != "scattering") fail("unknown key '" + key + "' in " + what);
  SurfaceMaterial mat;
  if (m.contains("absorption")) mat.absorption = parse_band_values(m["absorption"], what + ".absorption");
  if (m.contains("scattering")) mat.scattering = parse_band_values(m["scattering"], what + ".scattering");
  return mat;
}

Point3 parse_point(const json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number())
    fail(what + " must be an array of 3 numbers");
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

json point_to_json(const Point3& p) { return json::array({p.x, p.y, p.z}); }

json material_to_json(const SurfaceMaterial& m) {
  return json{{"absorption", m.absorption}, {"scattering", m.scattering}};
}

bool inside_room(const Point3& p, const std::array<double, 3>& dims) {
  return p.x > 0.0 && p.x < dims[0] && p.y > 0.0 && p.y < dims[1] && p.z > 0.0 && p.z < dims[2];
}

uint64_t fnv1a(const std::string& data) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

SurfaceMaterial SurfaceMaterial::uniform(double absorption_coeff, double scattering_coeff) {
  SurfaceMaterial m;
  m.absorption.fill(absorption_coeff);
  m.scattering.fill(scattering_coeff);
  return m;
}

void Scene::validate() const {
  for (double d : room_dims)
    if (!(d > 0.0)) fail("room_dims must all be positive");
  if (!inside_room(source, room_dims)) fail("source outside room");
  if (!inside_room(receiver, room_dims)) fail("receiver outside room");
  if (distance(source, receiver) < 0.05) fail("source and receiver closer than 0.05 m");
  if (obstacle_materials.size() != obstacles.size())
    fail("obstacle_materials count must match obstacles");
  for (size_t i = 0; i < obstacles.size(); ++i) {
    const auto& b = obstacles[i];
    for (int axis = 0; axis < 3; ++axis) {
      if (!(b.min_corner[axis] < b.max_corner[axis]))
        fail("obstacle min_corner must be componentwise below max_corner");
      if (b.min_corner[axis] < 0.0 || b.max_corner[axis] > room_dims[axis])
        fail("obstacle not contained in room");
    }
    if (b.contains(source)) fail("source inside obstacle");
    if (b.contains(receiver)) fail("receiver inside obstacle");
  }
  if (!(speed_of_sound > 0.0)) fail("speed_of_sound must be positive");
}

nlohmann::json Scene::to_json() const {
  json doc;
  doc["room_dims"] = room_dims;
  doc["source"] = point_to_json(source);
  doc["receiver"] = point_to_json(receiver);
  json surfs = json::array();
  for (const auto& s : surfaces) surfs.push_back(material_to_json(s));
  doc["surfaces"] = surfs;
  json obs = json::array();
  for (size_t i = 0; i < obstacles.size(); ++i) {
    obs.push_back(json{{"min", point_to_json(obstacles[i].min_corner)},
                       {"max", point_to_json(obstacles[i].max_corner)},
                       {"material", material_to_json(obstacle_materials[i])}});
  }
  doc["obstacles"] = obs;
  doc["speed_of_sound"] = speed_of_sound;
  doc["air_absorption"] = air_absorption_enabled;
  return doc;
}

std::string Scene::serialize() const { return to_json().dump(2); }

std::string Scene::digest() const {
  // nlohmann::json orders object keys, so dump() is canonical.
  std::ostringstream os;
  os << std::hex << fnv1a(to_json().dump());
  return os.str();
}

Scene scene_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) fail("scene document must be a JSON object");
  static const std::set<std::string> known = {"room_dims", "source",         "receiver",
                                              "surfaces",  "obstacles",      "speed_of_sound",
                                              "air_absorption"};
  for (auto& [key, _] : doc.items())
    if (!known.count(key)) fail("unknown key '" + key + "' in scene document");
  for (const char* req : {"room_dims", "source", "receiver", "surfaces"})
    if (!doc.contains(req)) fail(std::string("missing required key '") + req + "'");

  Scene scene;
  const auto& dims = doc["room_dims"];
  if (!dims.is_array() || dims.size() != 3) fail("room_dims must be an array of 3 numbers");
  for (int i = 0; i < 3; ++i) scene.room_dims[i] = dims[i].get<double>();
  scene.source = parse_point(doc["source"], "source");
  scene.receiver = parse_point(doc["receiver"], "receiver");

  const auto& surfs = doc["surfaces"];
  if (surfs.is_object()) {
    // Shorthand: one material applied to all six walls.
    scene.surfaces.fill(parse_material(surfs, "surfaces"));
  } else if (surfs.is_array() && surfs.size() == 6) {
    for (int i = 0; i < 6; ++i) scene.surfaces[i] = parse_material(surfs[i], "surfaces[" + std::to_string(i) + "]");
  } else {
    fail("surfaces must be a material object or an array of 6 materials");
  }

  if (doc.contains("obstacles")) {
    const auto& obs = doc["obstacles"];
    if (!obs.is_array()) fail("obstacles must be an array");
    for (size_t i = 0; i < obs.size(); ++i) {
      const auto& o = obs[i];
      if (!o.is_object()) fail("obstacle must be an object");
      for (auto& [key, _] : o.items())
        if (key != "min" && key != "max" && key != "material")
          fail("unknown key '" + key + "' in obstacle");
      if (!o.contains("min") || !o.contains("max")) fail("obstacle requires 'min' and 'max'");
      AxisAlignedBox box{parse_point(o["min"], "obstacle.min"), parse_point(o["max"], "obstacle.max")};
      scene.obstacles.push_back(box);
      scene.obstacle_materials.push_back(
          o.contains("material") ? parse_material(o["material"], "obstacle.material")
                                 : SurfaceMaterial::uniform(0.5));
    }
  }
  if (doc.contains("speed_of_sound")) scene.speed_of_sound = doc["speed_of_sound"].get<double>();
  if (doc.contains("air_absorption")) scene.air_absorption_enabled = doc["air_absorption"].get<bool>();

  scene.validate();
  return scene;
}

Scene parse_scene(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(std::string("malformed scene document: ") + e.what());
  }
  return scene_from_json(doc);
}

bool line_of_sight(const Scene& scene) {
  for (const auto& box : scene.obstacles)
    if (segment_intersects_box(scene.source, scene.receiver, box)) return false;
  return true;
}

}  // namespace rirforge
