#include "core/result_io.hpp"

#include <set>

#include "core/errors.hpp"
#include "json.hpp"

namespace fieldinfer {

std::string result_to_json(const BootstrapResult& result) {
  nlohmann::ordered_json j;
  j["schema"] = "lwmb-result/1";
  j["alpha"] = result.alpha;
  j["mode"] = tau_mode_name(result.mode);
  j["k"] = result.k;
  j["b"] = result.b;
  j["seed"] = result.seed;
  j["replicates"] = result.replicates;
  j["c_quantile"] = result.c_quantile;
  j["t_nm"] = result.t_nm;
  j["b_nm"] = result.b_nm;
  auto positions = nlohmann::ordered_json::array();
  for (const Position& p : result.grid.positions) {
    nlohmann::ordered_json e;
    e["x"] = p.x;
    e["y"] = p.y;
    e["p"] = p.p;
    e["q"] = p.q;
    positions.push_back(std::move(e));
  }
  j["positions"] = std::move(positions);
  j["estimates"] = result.estimates;
  j["half_widths"] = result.half_widths;
  if (result.mode == TauMode::kHeterogeneous) {
    j["sigma"] = result.sigma;
    j["variance_clipped"] = result.variance_clipped;
  }
  if (result.verdict) {
    nlohmann::ordered_json v;
    v["statistic"] = result.verdict->statistic;
    v["reject"] = result.verdict->reject;
    auto flags = nlohmann::ordered_json::array();
    for (uint8_t f : result.verdict->flags) flags.push_back(f ? 1 : 0);
    v["flags"] = std::move(flags);
    j["verdict"] = std::move(v);
  }
  return j.dump(2) + "\n";
}

namespace {

using Json = nlohmann::json;

const Json* find(const Json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

int get_int(const Json& v, const char* key) {
  if (!v.is_number_integer())
    throw ConfigError(std::string("study key \"") + key +
                      "\" must be an integer");
  return v.get<int>();
}

double get_num(const Json& v, const char* key) {
  if (!v.is_number())
    throw ConfigError(std::string("study key \"") + key + "\" must be numeric");
  return v.get<double>();
}

bool get_bool(const Json& v, const char* key) {
  if (!v.is_boolean())
    throw ConfigError(std::string("study key \"") + key + "\" must be boolean");
  return v.get<bool>();
}

std::string get_str(const Json& v, const char* key) {
  if (!v.is_string())
    throw ConfigError(std::string("study key \"") + key + "\" must be a string");
  return v.get<std::string>();
}

}  // namespace

StudySpec parse_study_spec(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("study config is not valid JSON");
  if (!j.is_object()) throw ConfigError("study config must be a JSON object");

  static const std::set<std::string> allowed = {
      "study", "n", "m", "grid", "alpha", "sims", "replicates",
      "k", "b", "auto_k", "auto_b", "k_max", "mean", "noise",
      "modes", "seed", "threads", "kernel_g", "kernel_k", "disc"};
  for (const auto& item : j.items())
    if (!allowed.count(item.key()))
      throw ConfigError("unknown study key \"" + item.key() + "\"");

  StudySpec spec;
  const Json* v = find(j, "study");
  if (!v) throw ConfigError("study config needs a \"study\" key");
  std::string kind = get_str(*v, "study");
  if (kind == "coverage") spec.kind = StudyKind::kCoverage;
  else if (kind == "size-power") spec.kind = StudyKind::kSizePower;
  else
    throw ConfigError("study must be \"coverage\" or \"size-power\", got \"" +
                      kind + "\"");

  StudyConfig& cfg = spec.config;
  if ((v = find(j, "n"))) cfg.n = get_int(*v, "n");
  if ((v = find(j, "m"))) cfg.m = get_int(*v, "m");
  if ((v = find(j, "grid"))) cfg.divisions = get_int(*v, "grid");
  if ((v = find(j, "alpha"))) cfg.alpha = get_num(*v, "alpha");
  if ((v = find(j, "sims"))) cfg.sims = get_int(*v, "sims");
  if ((v = find(j, "replicates"))) cfg.replicates = get_int(*v, "replicates");
  if ((v = find(j, "k"))) cfg.k = get_int(*v, "k");
  if ((v = find(j, "b"))) cfg.b = get_num(*v, "b");
  if ((v = find(j, "auto_k"))) cfg.auto_k = get_bool(*v, "auto_k");
  if ((v = find(j, "auto_b"))) cfg.auto_b = get_bool(*v, "auto_b");
  if ((v = find(j, "k_max"))) cfg.k_max = get_int(*v, "k_max");
  if ((v = find(j, "seed"))) {
    if (!v->is_number_integer())
      throw ConfigError("study key \"seed\" must be an integer");
    cfg.seed = v->get<uint64_t>();
  }
  if ((v = find(j, "threads"))) cfg.threads = get_int(*v, "threads");
  if ((v = find(j, "kernel_g")))
    cfg.g = SmoothingKernel::by_name(get_str(*v, "kernel_g"));
  if ((v = find(j, "kernel_k")))
    cfg.kernel = VarianceKernel::by_name(get_str(*v, "kernel_k"));

  DiscSpec disc;
  if ((v = find(j, "disc"))) {
    if (!v->is_object()) throw ConfigError("study key \"disc\" must be an object");
    for (const auto& item : v->items()) {
      const std::string& key = item.key();
      double value = get_num(item.value(), key.c_str());
      if (key == "height") disc.height = value;
      else if (key == "radius") disc.radius = value;
      else if (key == "cx") disc.cx = value;
      else if (key == "cy") disc.cy = value;
      else throw ConfigError("unknown disc key \"" + key + "\"");
    }
  }
  if ((v = find(j, "mean")))
    cfg.mean = MeanField::by_name(get_str(*v, "mean"), disc);
  else
    cfg.mean.disc = disc;
  cfg.alt_mean = MeanField{MeanField::Kind::kDisc, disc};
  if ((v = find(j, "noise"))) cfg.noise = noise_by_name(get_str(*v, "noise"));

  if ((v = find(j, "modes"))) {
    if (!v->is_array()) throw ConfigError("study key \"modes\" must be an array");
    cfg.modes.clear();
    for (const Json& e : *v)
      cfg.modes.push_back(tau_mode_by_name(get_str(e, "modes")));
    if (cfg.modes.empty()) throw ConfigError("study key \"modes\" is empty");
  }
  return spec;
}

std::string run_study(const StudySpec& spec) {
  if (spec.kind == StudyKind::kCoverage)
    return coverage_csv(spec.config, coverage_study(spec.config));
  return size_power_csv(spec.config, size_power_study(spec.config));
}

}  // namespace fieldinfer
