#pragma once

#include <set>
#include <string>

#include "slrel/core/opinion_json.hpp"
#include "slrel/sim/types.hpp"

namespace slrel {

namespace detail {

// Walks one JSON object, remembering its path for diagnostics and rejecting
// keys the schema does not know.
class ConfigReader {
 public:
  ConfigReader(const Json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) {
      throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }
  }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_.contains(key) && !node_.at(key).is_null();
  }

  const Json& child(const std::string& key) {
    if (!has(key)) {
      throw ConfigError(key_path(key), "missing required key");
    }
    return node_.at(key);
  }

  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  double number(const std::string& key) {
    const Json& v = child(key);
    if (!v.is_number()) {
      throw ConfigError(key_path(key), "expected a number");
    }
    return v.get<double>();
  }

  std::uint64_t unsigned_integer(const std::string& key) {
    const Json& v = child(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw ConfigError(key_path(key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::string string(const std::string& key) {
    const Json& v = child(key);
    if (!v.is_string()) {
      throw ConfigError(key_path(key), "expected a string");
    }
    return v.get<std::string>();
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.contains(key)) {
        throw ConfigError(key_path(key), "unknown key");
      }
    }
  }

 private:
  const Json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

inline Vec2 point_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(path, "expected a point [east, north]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Polygon points_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) {
    throw ConfigError(path, "expected a list of points");
  }
  Polygon out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(point_from_json(j[i], path + "." + std::to_string(i)));
  }
  return out;
}

inline Json points_to_json(const std::vector<Vec2>& pts) {
  Json out = Json::array();
  for (Vec2 p : pts) {
    out.push_back(Json::array({p.x, p.y}));
  }
  return out;
}

inline Json point_to_json(Vec2 p) { return Json::array({p.x, p.y}); }

}  // namespace detail

inline Json to_json(const ScenarioConfig& cfg) {
  Json lanes = Json::array();
  for (const auto& lane : cfg.map.lanes) {
    lanes.push_back(Json{{"lane_id", lane.lane_id},
                         {"centerline", detail::points_to_json(lane.centerline)},
                         {"width", lane.width}});
  }
  Json map{{"lanes", lanes}, {"rsu_fov", detail::points_to_json(cfg.map.rsu_fov)}};
  map["blind_spot"] = cfg.map.blind_spot ? detail::points_to_json(*cfg.map.blind_spot) : Json(nullptr);

  Json actors = Json::array();
  for (const auto& a : cfg.actors) {
    actors.push_back(Json{{"lane_id", a.lane_id},
                          {"entry_time", a.entry_time},
                          {"speed", a.speed},
                          {"start_s", a.start_s},
                          {"class_tag", std::string(to_string(a.class_tag))}});
  }

  Json fault{{"kind", std::string(to_string(cfg.fault.kind))},
             {"onset", cfg.fault.onset},
             {"magnitude", cfg.fault.magnitude}};
  fault["target_id"] = cfg.fault.target_id ? Json(*cfg.fault.target_id) : Json(nullptr);
  fault["duration"] = cfg.fault.duration ? Json(*cfg.fault.duration) : Json(nullptr);

  Json out;
  out["seed"] = cfg.seed;
  out["duration"] = cfg.duration;
  out["tick"] = cfg.tick;
  out["map"] = std::move(map);
  out["actors"] = std::move(actors);
  out["ego"] = Json{{"lane_id", cfg.ego.lane_id}, {"speed", cfg.ego.speed}, {"start_s", cfg.ego.start_s}};
  out["fault"] = std::move(fault);
  out["noise"] = Json{{"rsu", cfg.noise.rsu},
                      {"ego_perception", cfg.noise.ego_perception},
                      {"ego_localization", cfg.noise.ego_localization}};
  out["ego_sensor"] =
      Json{{"range", cfg.ego_sensor.range}, {"half_angle_deg", cfg.ego_sensor.half_angle_deg}};
  return out;
}

/// Parses a scenario config; absent optional keys keep their defaults.
/// Throws ConfigError naming the offending key.
inline ScenarioConfig scenario_from_json(const Json& j) {
  detail::ConfigReader root(j, "");
  ScenarioConfig cfg;
  if (root.has("seed")) cfg.seed = root.unsigned_integer("seed");
  cfg.duration = root.number("duration", cfg.duration);
  cfg.tick = root.number("tick", cfg.tick);

  {
    detail::ConfigReader map(root.child("map"), "map");
    const Json& lanes = map.child("lanes");
    if (!lanes.is_array()) {
      throw ConfigError("map.lanes", "expected a list");
    }
    for (std::size_t i = 0; i < lanes.size(); ++i) {
      const std::string path = "map.lanes." + std::to_string(i);
      detail::ConfigReader lane(lanes[i], path);
      LaneGeometry g;
      g.lane_id = lane.string("lane_id");
      g.centerline = detail::points_from_json(lane.child("centerline"), path + ".centerline");
      g.width = lane.number("width", g.width);
      lane.finish();
      cfg.map.lanes.push_back(std::move(g));
    }
    cfg.map.rsu_fov = detail::points_from_json(map.child("rsu_fov"), "map.rsu_fov");
    if (map.has("blind_spot")) {
      cfg.map.blind_spot = detail::points_from_json(map.child("blind_spot"), "map.blind_spot");
    }
    map.finish();
  }

  if (root.has("actors")) {
    const Json& actors = root.child("actors");
    if (!actors.is_array()) {
      throw ConfigError("actors", "expected a list");
    }
    for (std::size_t i = 0; i < actors.size(); ++i) {
      const std::string path = "actors." + std::to_string(i);
      detail::ConfigReader r(actors[i], path);
      ActorSpec a;
      a.lane_id = r.string("lane_id");
      a.entry_time = r.number("entry_time", a.entry_time);
      a.speed = r.number("speed", a.speed);
      a.start_s = r.number("start_s", a.start_s);
      if (r.has("class_tag")) {
        const auto tag = parse_class_tag(r.string("class_tag"));
        if (!tag) {
          throw ConfigError(path + ".class_tag", "expected vehicle or bicycle");
        }
        a.class_tag = *tag;
      }
      r.finish();
      cfg.actors.push_back(std::move(a));
    }
  }

  {
    detail::ConfigReader r(root.child("ego"), "ego");
    cfg.ego.lane_id = r.string("lane_id");
    cfg.ego.speed = r.number("speed", cfg.ego.speed);
    cfg.ego.start_s = r.number("start_s", cfg.ego.start_s);
    r.finish();
  }

  if (root.has("fault")) {
    detail::ConfigReader r(root.child("fault"), "fault");
    if (r.has("kind")) cfg.fault.kind = parse_fault_kind(r.string("kind"));
    cfg.fault.onset = r.number("onset", cfg.fault.onset);
    cfg.fault.magnitude = r.number("magnitude", cfg.fault.magnitude);
    if (r.has("target_id")) cfg.fault.target_id = r.unsigned_integer("target_id");
    if (r.has("duration")) cfg.fault.duration = r.number("duration");
    r.finish();
  }

  if (root.has("noise")) {
    detail::ConfigReader r(root.child("noise"), "noise");
    cfg.noise.rsu = r.number("rsu", cfg.noise.rsu);
    cfg.noise.ego_perception = r.number("ego_perception", cfg.noise.ego_perception);
    cfg.noise.ego_localization = r.number("ego_localization", cfg.noise.ego_localization);
    r.finish();
  }

  if (root.has("ego_sensor")) {
    detail::ConfigReader r(root.child("ego_sensor"), "ego_sensor");
    cfg.ego_sensor.range = r.number("range", cfg.ego_sensor.range);
    cfg.ego_sensor.half_angle_deg = r.number("half_angle_deg", cfg.ego_sensor.half_angle_deg);
    r.finish();
  }
  return cfg;
}

inline Json to_json(const ObjectState& o) {
  return Json{{"object_id", o.object_id},
              {"position", detail::point_to_json(o.position)},
              {"velocity", detail::point_to_json(o.velocity)},
              {"sigma", o.sigma},
              {"timestamp", o.timestamp},
              {"class_tag", std::string(to_string(o.class_tag))}};
}

inline Json to_json(const ObjectList& list) {
  Json objects = Json::array();
  for (const auto& o : list.objects) {
    objects.push_back(to_json(o));
  }
  return Json{{"timestamp", list.timestamp},
              {"source", std::string(to_string(list.source))},
              {"objects", std::move(objects)}};
}

inline Json to_json(const Tick& tick) {
  Json truth = Json::array();
  for (const auto& s : tick.truth) {
    truth.push_back(Json{{"object_id", s.object_id},
                         {"position", detail::point_to_json(s.position)},
                         {"velocity", detail::point_to_json(s.velocity)},
                         {"class_tag", std::string(to_string(s.class_tag))},
                         {"lane_id", s.lane_id}});
  }
  Json out;
  out["record"] = "tick";
  out["tick"] = tick.index;
  out["t"] = tick.t;
  out["ego_pose"] = Json{{"position", detail::point_to_json(tick.ego_pose.position)},
                         {"sigma_ego", tick.ego_pose.sigma_ego},
                         {"timestamp", tick.ego_pose.timestamp}};
  out["rsu"] = to_json(tick.rsu);
  out["ego"] = to_json(tick.ego);
  out["truth"] = std::move(truth);
  return out;
}

namespace detail {

inline Vec2 data_point(const Json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw DataError("expected a point [east, north]");
  }
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

inline ClassTag data_class(const Json& j) {
  const auto tag = parse_class_tag(j.get<std::string>());
  if (!tag) {
    throw DataError("unknown class tag '" + j.get<std::string>() + "'");
  }
  return *tag;
}

inline ObjectList object_list_from_json(const Json& j) {
  ObjectList list;
  list.timestamp = j.at("timestamp").get<double>();
  const std::string source = j.at("source").get<std::string>();
  if (source != "RSU" && source != "EGO") {
    throw DataError("unknown object list source '" + source + "'");
  }
  list.source = source == "RSU" ? Source::rsu : Source::ego;
  for (const auto& o : j.at("objects")) {
    ObjectState s;
    s.object_id = o.at("object_id").get<ObjectId>();
    s.position = data_point(o.at("position"));
    s.velocity = data_point(o.at("velocity"));
    s.sigma = o.at("sigma").get<double>();
    s.timestamp = o.at("timestamp").get<double>();
    s.class_tag = data_class(o.at("class_tag"));
    if (!(s.sigma > 0.0)) {
      throw DataError("object sigma must be positive");
    }
    list.objects.push_back(s);
  }
  return list;
}

}  // namespace detail

/// Parses one tick record; throws DataError on malformed input.
inline Tick tick_from_json(const Json& j) {
  try {
    if (j.at("record") != "tick") {
      throw DataError("expected a tick record");
    }
    Tick tick;
    tick.index = j.at("tick").get<std::size_t>();
    tick.t = j.at("t").get<double>();
    const Json& pose = j.at("ego_pose");
    tick.ego_pose.position = detail::data_point(pose.at("position"));
    tick.ego_pose.sigma_ego = pose.at("sigma_ego").get<double>();
    tick.ego_pose.timestamp = pose.at("timestamp").get<double>();
    tick.rsu = detail::object_list_from_json(j.at("rsu"));
    tick.ego = detail::object_list_from_json(j.at("ego"));
    for (const auto& s : j.at("truth")) {
      TruthState st;
      st.object_id = s.at("object_id").get<ObjectId>();
      st.position = detail::data_point(s.at("position"));
      st.velocity = detail::data_point(s.at("velocity"));
      st.class_tag = detail::data_class(s.at("class_tag"));
      st.lane_id = s.at("lane_id").get<std::string>();
      tick.truth.push_back(std::move(st));
    }
    return tick;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed tick record: ") + e.what());
  }
}

}  // namespace slrel
