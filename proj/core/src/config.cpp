#include "tpa/config.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

#include "tpa/rules.hpp"

namespace tpa {
namespace {

using json = nlohmann::json;

template <typename T>
T get_as(const json& j, const char* key, const char* what) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("config: bad value for \"") + key + "\" (" + what + ")");
  }
}

std::array<std::uint64_t, 3> get_triple(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 3) {
    throw std::invalid_argument(std::string("config: \"") + key + "\" must be an array of 3 integers");
  }
  std::array<std::uint64_t, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!v[i].is_number_integer() || v[i].get<std::int64_t>() < 0) {
      throw std::invalid_argument(std::string("config: \"") + key + "\" entries must be nonnegative integers");
    }
    out[i] = v[i].get<std::uint64_t>();
  }
  return out;
}

std::uint64_t get_count(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw std::invalid_argument(std::string("config: \"") + key + "\" must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

}  // namespace

const char* to_string(RuleName name) {
  switch (name) {
    case RuleName::kLinear: return "linear";
    case RuleName::kRps: return "rps";
    case RuleName::kPerturbedRps: return "perturbed_rps";
    case RuleName::kTournament4: return "tournament4";
    case RuleName::kCustom: return "custom";
  }
  return "unknown";
}

std::optional<RuleName> parse_rule_name(std::string_view s) {
  for (auto n : {RuleName::kLinear, RuleName::kRps, RuleName::kPerturbedRps,
                 RuleName::kTournament4, RuleName::kCustom}) {
    if (s == to_string(n)) return n;
  }
  return std::nullopt;
}

RuleTable make_rule(const RuleSpec& spec) {
  switch (spec.name) {
    case RuleName::kLinear: return linear_rule(spec.m);
    case RuleName::kRps: return rps_rule();
    case RuleName::kPerturbedRps: return perturbed_rps_rule(spec.h);
    case RuleName::kTournament4: return tournament_rule();
    case RuleName::kCustom:
      if (spec.table_path.empty()) throw std::invalid_argument("custom rule needs a table_path");
      return load_rule(spec.table_path);
  }
  throw std::invalid_argument("unknown rule");
}

const char* to_string(EngineMode mode) {
  return mode == EngineMode::kGraph ? "graph" : "aggregate";
}

std::optional<EngineMode> parse_engine_mode(std::string_view s) {
  if (s == "aggregate") return EngineMode::kAggregate;
  if (s == "graph") return EngineMode::kGraph;
  return std::nullopt;
}

ModelConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");

  ModelConfig cfg;
  if (doc.contains("rule")) {
    const auto& r = doc["rule"];
    if (!r.is_object()) throw std::invalid_argument("config: \"rule\" must be an object");
    if (r.contains("name")) {
      const auto name = get_as<std::string>(r, "name", "string");
      auto parsed = parse_rule_name(name);
      if (!parsed) throw std::invalid_argument("config: unknown rule name \"" + name + "\"");
      cfg.rule.name = *parsed;
    }
    if (r.contains("h")) cfg.rule.h = get_as<double>(r, "h", "real");
    if (r.contains("m")) cfg.rule.m = get_as<int>(r, "m", "integer");
    if (r.contains("table_path")) cfg.rule.table_path = get_as<std::string>(r, "table_path", "string");
  }
  if (doc.contains("initial")) {
    const auto& init = doc["initial"];
    if (!init.is_object()) throw std::invalid_argument("config: \"initial\" must be an object");
    if (init.contains("vertex_counts")) cfg.initial.vertex_counts = get_triple(init, "vertex_counts");
    if (init.contains("degree_sums")) cfg.initial.degree_sums = get_triple(init, "degree_sums");
  }
  if (doc.contains("steps")) cfg.steps = get_count(doc, "steps");
  if (doc.contains("seed")) cfg.seed = get_count(doc, "seed");
  if (doc.contains("record_interval")) cfg.record_interval = get_count(doc, "record_interval");
  if (doc.contains("mode")) {
    const auto mode = get_as<std::string>(doc, "mode", "string");
    auto parsed = parse_engine_mode(mode);
    if (!parsed) throw std::invalid_argument("config: unknown mode \"" + mode + "\"");
    cfg.mode = *parsed;
  }
  return cfg;
}

ModelConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const ModelConfig& cfg, int indent) {
  json rule{{"name", to_string(cfg.rule.name)}};
  switch (cfg.rule.name) {
    case RuleName::kPerturbedRps: rule["h"] = cfg.rule.h; break;
    case RuleName::kLinear: rule["m"] = cfg.rule.m; break;
    case RuleName::kCustom: rule["table_path"] = cfg.rule.table_path; break;
    default: break;
  }
  json doc{
      {"rule", rule},
      {"initial", {{"vertex_counts", cfg.initial.vertex_counts}, {"degree_sums", cfg.initial.degree_sums}}},
      {"steps", cfg.steps},
      {"seed", cfg.seed},
      {"mode", to_string(cfg.mode)},
      {"record_interval", cfg.record_interval},
  };
  return doc.dump(indent);
}

void validate_config(const ModelConfig& cfg) {
  const auto& ds = cfg.initial.degree_sums;
  const auto& vc = cfg.initial.vertex_counts;
  if (ds[0] + ds[1] + ds[2] == 0) throw std::domain_error("initial degree sums are all zero");
  if (cfg.record_interval == 0) throw std::invalid_argument("record_interval must be positive");
  for (std::size_t i = 0; i < 3; ++i) {
    if (ds[i] > 0 && vc[i] == 0) {
      throw std::invalid_argument("type " + std::to_string(i + 1) +
                                  " has positive degree but no vertices");
    }
  }
  if (cfg.rule.name == RuleName::kPerturbedRps && !(cfg.rule.h >= 0.0 && cfg.rule.h < 1.0)) {
    throw std::invalid_argument("perturbation h must lie in [0, 1)");
  }
}

std::vector<std::string> config_warnings(const ModelConfig& cfg) {
  std::vector<std::string> out;
  static constexpr const char* kNames[] = {"rock", "paper", "scissors"};
  for (std::size_t i = 0; i < 3; ++i) {
    if (cfg.initial.degree_sums[i] == 0) {
      out.push_back(std::string("type ") + kNames[i] +
                    " is absent from the initial graph; it can only appear through the rule");
    }
  }
  return out;
}

}  // namespace tpa
