#include "tpa/engine.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace tpa {
namespace {

inline int type_of_degree_index(const std::array<std::uint64_t, kNumTypes>& sums, std::uint64_t r) {
  return r < sums[0] ? 0 : (r < sums[0] + sums[1] ? 1 : 2);
}

inline void add_vertex(EngineState& s, const TypeCountVector& u, int type, int m) {
  for (std::size_t i = 0; i < kNumTypes; ++i) s.degree_sums[i] += static_cast<std::uint64_t>(u[i]);
  s.degree_sums[static_cast<std::size_t>(type)] += static_cast<std::uint64_t>(m);
  ++s.vertex_counts[static_cast<std::size_t>(type)];
  ++s.step;
}

inline int aggregate_step(EngineState& s, const RuleTable& rule, Rng& rng) {
  const int m = rule.m();
  const std::uint64_t total = s.total_degree();
  int u[3] = {0, 0, 0};
  for (int j = 0; j < m; ++j) ++u[type_of_degree_index(s.degree_sums, rng.bounded(total))];
  const int type = rule.sample_type(count_vector_index(m, u[0], u[1]), rng.uniform01());
  add_vertex(s, {{u[0], u[1], u[2]}}, type, m);
  return type;
}

inline int graph_step(EngineState& s, const RuleTable& rule, Rng& rng) {
  const int m = rule.m();
  const std::uint64_t total = s.endpoints.size();
  if (s.vertex_types.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw std::overflow_error("graph mode vertex ids exhausted");
  }
  const auto self = static_cast<std::uint32_t>(s.vertex_types.size());
  std::uint32_t nbrs[kMaxRuleDegree];
  TypeCountVector u;
  for (int j = 0; j < m; ++j) {
    nbrs[j] = s.endpoints[rng.bounded(total)];
    ++u.u[s.vertex_types[nbrs[j]]];
  }
  const int type = rule.sample_type(count_vector_index(m, u), rng.uniform01());
  for (int j = 0; j < m; ++j) {
    s.endpoints.push_back(self);
    s.endpoints.push_back(nbrs[j]);
  }
  s.vertex_types.push_back(static_cast<std::uint8_t>(type));
  add_vertex(s, u, type, m);
  return type;
}

}  // namespace

TrajectoryRecord EngineState::record() const {
  TrajectoryRecord r;
  r.step = step;
  r.vertex = total_vertices() > 0 ? simplex_from_counts(vertex_counts) : SimplexPoint{};
  r.degree = simplex_from_counts(degree_sums);
  r.product27 = 27.0 * r.degree.product();
  return r;
}

EngineState init_state(const InitialComposition& initial, EngineMode mode) {
  EngineState s;
  s.degree_sums = initial.degree_sums;
  s.vertex_counts = initial.vertex_counts;
  if (s.total_degree() == 0) throw std::domain_error("initial graph has zero total degree");
  if (mode == EngineMode::kAggregate) return s;

  s.graph_mode = true;
  const std::uint64_t n = s.total_vertices();
  for (std::size_t i = 0; i < kNumTypes; ++i) {
    if (initial.degree_sums[i] != initial.vertex_counts[i] * (n - 1)) {
      throw std::invalid_argument(
          "graph mode needs a complete-graph start: type " + std::to_string(i + 1) +
          " should have degree sum " + std::to_string(initial.vertex_counts[i] * (n - 1)));
    }
  }
  for (std::size_t t = 0; t < kNumTypes; ++t) {
    s.vertex_types.insert(s.vertex_types.end(), initial.vertex_counts[t], static_cast<std::uint8_t>(t));
  }
  s.endpoints.reserve(n * (n - 1));
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = a + 1; b < n; ++b) {
      s.endpoints.push_back(a);
      s.endpoints.push_back(b);
    }
  }
  return s;
}

EngineState init_state(const ModelConfig& cfg) {
  validate_config(cfg);
  return init_state(cfg.initial, cfg.mode);
}

TypeCountVector draw_census(const EngineState& state, int m, Rng& rng) {
  TypeCountVector u;
  const std::uint64_t total = state.total_degree();
  for (int j = 0; j < m; ++j) ++u.u[type_of_degree_index(state.degree_sums, rng.bounded(total))];
  return u;
}

int step_with_census(EngineState& state, const RuleTable& rule, const TypeCountVector& u, Rng& rng) {
  if (state.graph_mode) throw std::logic_error("step_with_census is aggregate-only");
  if (u.total() != rule.m()) throw std::invalid_argument("census size differs from m");
  const int type = rule.sample_type(count_vector_index(rule.m(), u), rng.uniform01());
  add_vertex(state, u, type, rule.m());
  return type;
}

int step(EngineState& state, const RuleTable& rule, Rng& rng) {
  return state.graph_mode ? graph_step(state, rule, rng) : aggregate_step(state, rule, rng);
}

void advance(EngineState& state, const RuleTable& rule, Rng& rng, std::uint64_t n) {
  const auto per_step = 2 * static_cast<std::uint64_t>(rule.m());
  if (n > (std::numeric_limits<std::uint64_t>::max() - state.total_degree()) / per_step) {
    throw std::overflow_error("degree sums would overflow 64 bits");
  }
  if (state.graph_mode) {
    state.endpoints.reserve(state.endpoints.size() + n * per_step);
    state.vertex_types.reserve(state.vertex_types.size() + n);
    for (std::uint64_t i = 0; i < n; ++i) graph_step(state, rule, rng);
  } else {
    for (std::uint64_t i = 0; i < n; ++i) aggregate_step(state, rule, rng);
  }
}

RunResult run_model(const ModelConfig& cfg, const RuleTable& rule, const RunHooks& hooks) {
  RunResult result{{}, init_state(cfg)};
  auto& state = result.final_state;
  Rng rng(cfg.seed);

  result.records.reserve(cfg.steps / cfg.record_interval + 2);
  result.records.push_back(state.record());
  const std::uint64_t progress_every =
      hooks.progress && hooks.progress_interval > 0 ? hooks.progress_interval : 0;

  std::uint64_t done = 0;
  while (done < cfg.steps) {
    // Next stop: a record boundary or a progress boundary, whichever is first.
    std::uint64_t next = std::min(cfg.steps, (done / cfg.record_interval + 1) * cfg.record_interval);
    if (progress_every) next = std::min(next, (done / progress_every + 1) * progress_every);
    advance(state, rule, rng, next - done);
    done = next;
    if (done % cfg.record_interval == 0 || done == cfg.steps) result.records.push_back(state.record());
    if (progress_every && done % progress_every == 0) hooks.progress(done);
  }
  return result;
}

std::vector<TrajectoryRecord> run(const ModelConfig& cfg) {
  return run_model(cfg, make_rule(cfg.rule)).records;
}

void write_edge_list(const EngineState& state, std::ostream& out) {
  if (!state.graph_mode) throw std::logic_error("edge list export requires graph mode");
  for (std::size_t i = 0; i + 1 < state.endpoints.size(); i += 2) {
    out << state.endpoints[i] << ' ' << state.endpoints[i + 1] << '\n';
  }
}

void write_vertex_types(const EngineState& state, std::ostream& out) {
  if (!state.graph_mode) throw std::logic_error("vertex type export requires graph mode");
  for (auto t : state.vertex_types) out << static_cast<int>(t) + 1 << '\n';
}

}  // namespace tpa
