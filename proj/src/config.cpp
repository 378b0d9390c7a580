#include "rirtrack/config.hpp"

#include "rirtrack/types.hpp"

#include <json.hpp>

#include <fstream>

namespace rirtrack {

using Json = nlohmann::ordered_json;

namespace {

template <typename T>
void get_if_present(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

Json room_to_json(const RoomConfig& r) {
  return Json{{"dimensions", r.dimensions},
              {"reflection", r.reflection},
              {"speed_of_sound", r.speed_of_sound}};
}

RoomConfig room_from_json(const Json& j) {
  RoomConfig r;
  get_if_present(j, "dimensions", r.dimensions);
  get_if_present(j, "reflection", r.reflection);
  get_if_present(j, "speed_of_sound", r.speed_of_sound);
  return r;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (mode != "synthetic" && mode != "dataset")
    throw ConfigError("mode must be 'synthetic' or 'dataset'");
  if (!(sample_rate > 0)) throw ConfigError("sample_rate must be positive");
  if (rir_length < 1) throw ConfigError("rir_length must be >= 1");
  if (variants.empty()) throw ConfigError("at least one variant is required");
  for (const std::string& v : variants)
    if (v != "kf_alpha" && v != "kf_transition" && v != "li_transition")
      throw ConfigError("unknown variant: " + v);
  if (transition.fill != "identity" && transition.fill != "zero")
    throw ConfigError("transition.fill must be 'identity' or 'zero'");
  if (mode == "synthetic") {
    if (!dataset.path.empty())
      throw ConfigError("synthetic mode must not set a dataset path");
    if (trajectory.waypoints.size() < 2)
      throw ConfigError("synthetic mode needs at least two waypoints");
    if (trajectory.speeds.size() != trajectory.waypoints.size() - 1)
      throw ConfigError("need one speed per trajectory leg");
  } else {
    if (dataset.path.empty()) throw ConfigError("dataset mode needs dataset.path");
    if (dataset.segment_points.size() < 2)
      throw ConfigError("dataset mode needs at least two segment points");
  }
  if (evaluation.ncc_window < 0) throw ConfigError("ncc_window must be >= 0");
  if (evaluation.stride < 1) throw ConfigError("stride must be >= 1");
  if (dtw.min_diag_len < 1) throw ConfigError("min_diag_len must be >= 1");
  if (noise.snr_db && noise.std_dev != 0.0)
    throw ConfigError("set either noise.snr_db or noise.std_dev, not both");
}

ScenarioConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  ScenarioConfig c;
  try {
    get_if_present(j, "mode", c.mode);
    get_if_present(j, "seed", c.seed);
    get_if_present(j, "sample_rate", c.sample_rate);
    get_if_present(j, "rir_length", c.rir_length);
    get_if_present(j, "variants", c.variants);
    if (j.contains("room")) c.room = room_from_json(j.at("room"));
    get_if_present(j, "source_position", c.source_position);
    if (j.contains("trajectory")) {
      const Json& t = j.at("trajectory");
      get_if_present(t, "waypoints", c.trajectory.waypoints);
      get_if_present(t, "speeds", c.trajectory.speeds);
      get_if_present(t, "grid_spacing_m", c.trajectory.grid_spacing_m);
    }
    if (j.contains("noise")) {
      const Json& n = j.at("noise");
      if (n.contains("snr_db") && !n.at("snr_db").is_null())
        c.noise.snr_db = n.at("snr_db").get<double>();
      get_if_present(n, "std_dev", c.noise.std_dev);
    }
    if (j.contains("sim")) {
      const Json& s = j.at("sim");
      get_if_present(s, "max_order", c.sim.max_order);
      get_if_present(s, "sinc_halfwidth", c.sim.sinc_halfwidth);
    }
    if (j.contains("dtw")) get_if_present(j.at("dtw"), "min_diag_len", c.dtw.min_diag_len);
    if (j.contains("transition")) {
      const Json& t = j.at("transition");
      get_if_present(t, "fill", c.transition.fill);
      get_if_present(t, "halfwidth", c.transition.halfwidth);
      get_if_present(t, "epsilon_samples", c.transition.epsilon_samples);
    }
    if (j.contains("kalman")) {
      const Json& k = j.at("kalman");
      get_if_present(k, "observation_noise", c.kalman.observation_noise);
      get_if_present(k, "process_noise", c.kalman.process_noise);
      get_if_present(k, "alpha", c.kalman.alpha);
      get_if_present(k, "initial_covariance", c.kalman.initial_covariance);
    }
    if (j.contains("evaluation")) {
      const Json& e = j.at("evaluation");
      get_if_present(e, "ncc_window", c.evaluation.ncc_window);
      get_if_present(e, "stride", c.evaluation.stride);
    }
    if (j.contains("dataset")) {
      const Json& d = j.at("dataset");
      get_if_present(d, "path", c.dataset.path);
      get_if_present(d, "resample", c.dataset.resample);
      get_if_present(d, "segment_points", c.dataset.segment_points);
    }
    if (j.contains("output")) {
      const Json& o = j.at("output");
      get_if_present(o, "traces", c.output.traces);
      get_if_present(o, "matrices", c.output.matrices);
      get_if_present(o, "estimates", c.output.estimates);
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("malformed config value: ") + e.what());
  }

  c.validate();
  return c;
}

std::string serialize_config(const ScenarioConfig& c) {
  Json j;
  j["mode"] = c.mode;
  j["seed"] = c.seed;
  j["sample_rate"] = c.sample_rate;
  j["rir_length"] = c.rir_length;
  j["variants"] = c.variants;
  j["room"] = room_to_json(c.room);
  j["source_position"] = c.source_position;
  j["trajectory"] = Json{{"waypoints", c.trajectory.waypoints},
                         {"speeds", c.trajectory.speeds},
                         {"grid_spacing_m", c.trajectory.grid_spacing_m}};
  Json noise;
  if (c.noise.snr_db) noise["snr_db"] = *c.noise.snr_db;
  noise["std_dev"] = c.noise.std_dev;
  j["noise"] = noise;
  j["sim"] = Json{{"max_order", c.sim.max_order}, {"sinc_halfwidth", c.sim.sinc_halfwidth}};
  j["dtw"] = Json{{"min_diag_len", c.dtw.min_diag_len}};
  j["transition"] = Json{{"fill", c.transition.fill},
                         {"halfwidth", c.transition.halfwidth},
                         {"epsilon_samples", c.transition.epsilon_samples}};
  j["kalman"] = Json{{"observation_noise", c.kalman.observation_noise},
                     {"process_noise", c.kalman.process_noise},
                     {"alpha", c.kalman.alpha},
                     {"initial_covariance", c.kalman.initial_covariance}};
  j["evaluation"] = Json{{"ncc_window", c.evaluation.ncc_window},
                         {"stride", c.evaluation.stride}};
  j["dataset"] = Json{{"path", c.dataset.path},
                      {"resample", c.dataset.resample},
                      {"segment_points", c.dataset.segment_points}};
  j["output"] = Json{{"traces", c.output.traces},
                     {"matrices", c.output.matrices},
                     {"estimates", c.output.estimates}};
  return j.dump(2) + "\n";
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config(text);
}

void save_config(const ScenarioConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write config file: " + path.string());
  out << serialize_config(config);
}

}  // namespace rirtrack
