#ifndef TPA_CONFIG_HPP
#define TPA_CONFIG_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tpa/rule_table.hpp"

namespace tpa {

enum class RuleName { kLinear, kRps, kPerturbedRps, kTournament4, kCustom };

const char* to_string(RuleName name);
std::optional<RuleName> parse_rule_name(std::string_view s);

struct RuleSpec {
  RuleName name = RuleName::kPerturbedRps;
  double h = 0.05;             // perturbed_rps only
  int m = 2;                   // linear only
  std::string table_path;      // custom only
};

// Builds the table a RuleSpec selects. Custom tables are loaded from disk.
RuleTable make_rule(const RuleSpec& spec);

enum class EngineMode { kAggregate, kGraph };

const char* to_string(EngineMode mode);
std::optional<EngineMode> parse_engine_mode(std::string_view s);

// Per-type counts of the initial graph. The default is the complete graph on
// nine vertices, three of each type: every vertex has degree 8.
struct InitialComposition {
  std::array<std::uint64_t, 3> vertex_counts{3, 3, 3};
  std::array<std::uint64_t, 3> degree_sums{24, 24, 24};

  friend bool operator==(const InitialComposition&, const InitialComposition&) = default;
};

struct ModelConfig {
  RuleSpec rule;
  InitialComposition initial;
  std::uint64_t steps = 1'000'000;
  std::uint64_t seed = 1;
  EngineMode mode = EngineMode::kAggregate;
  std::uint64_t record_interval = 1000;
};

// Throws std::invalid_argument with a readable message on bad input. Keys
// absent from the document keep their defaults.
ModelConfig parse_config(std::string_view json_text);
ModelConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ModelConfig& cfg, int indent = 2);

// Hard errors: zero total degree (std::domain_error); zero record interval,
// positive degree without vertices, h outside [0, 1) (std::invalid_argument).
void validate_config(const ModelConfig& cfg);

// Soft problems, e.g. a type absent from the initial graph.
std::vector<std::string> config_warnings(const ModelConfig& cfg);

}  // namespace tpa

#endif  // TPA_CONFIG_HPP
