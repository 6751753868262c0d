#include "tpa/rules.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace tpa {
namespace {

using json = nlohmann::json;

RuleTable from_rows(int m, const std::vector<RuleEntry>& rows) {
  return RuleTable::from_entries(m, rows);
}

// m = 2 winner for a census: both neighbours' types or the pair's winner.
int rps_winner(const TypeCountVector& u) {
  std::array<int, 2> players{};
  int n = 0;
  for (int t = 0; t < 3; ++t) {
    for (int c = 0; c < u[t]; ++c) players[n++] = t;
  }
  return match_winner(players[0], players[1]);
}

[[noreturn]] void malformed(const std::string& what) {
  throw RuleError({RuleIssueKind::kMalformed, what});
}

}  // namespace

RuleTable linear_rule(int m) {
  if (m < 1 || m > kMaxRuleDegree) throw std::invalid_argument("linear rule needs 1 <= m <= 16");
  std::vector<RuleEntry> rows;
  for (const auto& u : enumerate_count_vectors(m)) {
    const double md = m;
    rows.push_back({u, {{u[0] / md, u[1] / md, u[2] / md}}});
  }
  return from_rows(m, rows);
}

RuleTable rps_rule() { return perturbed_rps_rule(0.0); }

RuleTable perturbed_rps_rule(double h) {
  if (!(h >= 0.0 && h < 1.0)) throw std::domain_error("perturbation h must lie in [0, 1)");
  const double k = h / 3.0;
  std::vector<RuleEntry> rows;
  for (const auto& u : enumerate_count_vectors(2)) {
    const int w = rps_winner(u);
    ProbVector p{{k, k, k}};
    p.p[static_cast<std::size_t>(w)] = 1.0 - 2.0 * k;
    rows.push_back({u, p});
  }
  return from_rows(2, rows);
}

Thirds tournament_entry(const TypeCountVector& u) {
  if (u.total() != 4 || u[0] < 0 || u[1] < 0 || u[2] < 0) {
    throw std::invalid_argument("tournament census must sum to 4");
  }
  // Rows keyed by (u1, u2); type order rock, paper, scissors.
  static constexpr struct {
    int r, p;
    Thirds t;
  } kTable[] = {
      {4, 0, {{3, 0, 0}}}, {3, 0, {{3, 0, 0}}}, {2, 0, {{3, 0, 0}}}, {1, 0, {{3, 0, 0}}},
      {0, 4, {{0, 3, 0}}}, {1, 3, {{0, 3, 0}}}, {2, 2, {{0, 3, 0}}}, {3, 1, {{0, 3, 0}}},
      {0, 0, {{0, 0, 3}}}, {0, 1, {{0, 0, 3}}}, {0, 2, {{0, 0, 3}}}, {0, 3, {{0, 0, 3}}},
      {2, 1, {{1, 2, 0}}}, {1, 2, {{0, 1, 2}}}, {1, 1, {{2, 0, 1}}},
  };
  for (const auto& row : kTable) {
    if (row.r == u[0] && row.p == u[1]) return row.t;
  }
  throw std::logic_error("tournament table incomplete");
}

RuleTable tournament_rule() {
  std::vector<RuleEntry> rows;
  for (const auto& u : enumerate_count_vectors(4)) rows.push_back({u, tournament_entry(u).to_prob()});
  return from_rows(4, rows);
}

Thirds tournament_oracle(const TypeCountVector& u) {
  if (u.total() != 4 || u[0] < 0 || u[1] < 0 || u[2] < 0) {
    throw std::invalid_argument("tournament census must sum to 4");
  }
  std::array<int, 4> players{};
  int n = 0;
  for (int t = 0; t < 3; ++t) {
    for (int c = 0; c < u[t]; ++c) players[n++] = t;
  }
  // Player 0 meets 1, 2 or 3; the other two form the second match.
  static constexpr std::array<std::array<int, 4>, 3> kMatchings{{
      {0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}}};
  Thirds out;
  for (const auto& mm : kMatchings) {
    const int first = match_winner(players[mm[0]], players[mm[1]]);
    const int second = match_winner(players[mm[2]], players[mm[3]]);
    ++out.numerators[static_cast<std::size_t>(match_winner(first, second))];
  }
  return out;
}

RuleTable parse_rule(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    malformed(std::string("rule file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) malformed("rule document must be a JSON object");
  if (!doc.contains("m") || !doc["m"].is_number_integer()) malformed("rule document needs integer \"m\"");
  if (!doc.contains("entries") || !doc["entries"].is_array()) {
    malformed("rule document needs an \"entries\" array");
  }
  const int m = doc["m"].get<int>();
  std::vector<RuleEntry> rows;
  for (const auto& e : doc["entries"]) {
    if (!e.is_object() || !e.contains("u") || !e.contains("p")) {
      malformed("each entry needs \"u\" and \"p\"");
    }
    const auto& u = e["u"];
    const auto& p = e["p"];
    if (!u.is_array() || u.size() != 3 || !p.is_array() || p.size() != 3) {
      malformed("\"u\" and \"p\" must be arrays of length 3");
    }
    RuleEntry row;
    for (std::size_t i = 0; i < 3; ++i) {
      if (!u[i].is_number_integer()) malformed("\"u\" entries must be integers");
      if (!p[i].is_number()) malformed("\"p\" entries must be numbers");
      row.u.u[i] = u[i].get<int>();
      row.p.p[i] = p[i].get<double>();
    }
    rows.push_back(row);
  }
  return RuleTable::from_entries(m, rows);
}

RuleTable load_rule(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) malformed("cannot open rule file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_rule(buf.str());
}

std::string rule_to_json(const RuleTable& table) {
  json doc;
  doc["m"] = table.m();
  doc["entries"] = json::array();
  for (const auto& e : table.entries()) {
    doc["entries"].push_back({{"u", e.u.u}, {"p", e.p.p}});
  }
  return doc.dump(2);
}

}  // namespace tpa
