#ifndef TPA_ENGINE_HPP
#define TPA_ENGINE_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "tpa/config.hpp"
#include "tpa/rng.hpp"
#include "tpa/rule_table.hpp"
#include "tpa/types.hpp"

namespace tpa {

struct TrajectoryRecord {
  std::uint64_t step = 0;
  SimplexPoint vertex;  // A, B, C
  SimplexPoint degree;  // X, Y, Z
  double product27 = 1.0;  // 27 X Y Z
};

// Process state after `step` arrivals. Degree accounting is exact integer
// arithmetic; the simplex views are derived on demand.
//
// Graph mode also keeps the multigraph: `endpoints` holds every edge as two
// consecutive vertex ids, so a uniform index into it is a degree-proportional
// vertex draw, and `vertex_types` holds each vertex's type.
struct EngineState {
  std::array<std::uint64_t, kNumTypes> degree_sums{};
  std::array<std::uint64_t, kNumTypes> vertex_counts{};
  std::uint64_t step = 0;
  std::vector<std::uint32_t> endpoints;
  std::vector<std::uint8_t> vertex_types;
  bool graph_mode = false;

  std::uint64_t total_degree() const { return degree_sums[0] + degree_sums[1] + degree_sums[2]; }
  std::uint64_t total_vertices() const {
    return vertex_counts[0] + vertex_counts[1] + vertex_counts[2];
  }
  TrajectoryRecord record() const;
};

// Builds the starting state. Aggregate mode takes the composition as given;
// graph mode needs a composition that is a complete graph (every vertex of
// degree n-1) and materialises it. Throws std::domain_error for zero total
// degree and std::invalid_argument for a composition graph mode cannot build.
EngineState init_state(const InitialComposition& initial, EngineMode mode);
EngineState init_state(const ModelConfig& cfg);

// Draws the m neighbour types of a new vertex by degree-proportional sampling.
TypeCountVector draw_census(const EngineState& state, int m, Rng& rng);

// Aggregate mode only: adds one vertex whose neighbour census is `u`, with its
// type drawn from the rule. Returns the type.
int step_with_census(EngineState& state, const RuleTable& rule, const TypeCountVector& u,
                     Rng& rng);

// One arrival: census draw, type draw, bookkeeping.
int step(EngineState& state, const RuleTable& rule, Rng& rng);

// `n` arrivals. Throws std::overflow_error if degree sums would overflow.
void advance(EngineState& state, const RuleTable& rule, Rng& rng, std::uint64_t n);

struct RunHooks {
  // Called every `progress_interval` steps with the current step count.
  std::function<void(std::uint64_t)> progress;
  std::uint64_t progress_interval = 10'000'000;
};

struct RunResult {
  std::vector<TrajectoryRecord> records;
  EngineState final_state;
};

// Records step 0, every record_interval-th step and the final step.
// Deterministic in (cfg, rule).
RunResult run_model(const ModelConfig& cfg, const RuleTable& rule, const RunHooks& hooks = {});
std::vector<TrajectoryRecord> run(const ModelConfig& cfg);

// Graph export: one "u v" pair per line, and one type id (1-3) per line.
void write_edge_list(const EngineState& state, std::ostream& out);
void write_vertex_types(const EngineState& state, std::ostream& out);

}  // namespace tpa

#endif  // TPA_ENGINE_HPP
