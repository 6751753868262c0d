#ifndef TPA_RULES_HPP
#define TPA_RULES_HPP

#include <array>
#include <filesystem>
#include <string>
#include <string_view>

#include "tpa/rule_table.hpp"
#include "tpa/types.hpp"

namespace tpa {

// True when type a beats type b under rock-paper-scissors dominance.
constexpr bool beats(int a, int b) { return (a - b + 3) % 3 == 1; }

// Winner of a single match; equal types advance unchanged.
constexpr int match_winner(int a, int b) { return (a == b || beats(a, b)) ? a : b; }

// p_u = u / m.
RuleTable linear_rule(int m);

// m = 2: the neighbours play rock-paper-scissors, the winner's type is taken.
RuleTable rps_rule();

// m = 2: with probability h the new vertex takes a uniformly random type,
// otherwise the rock-paper-scissors winner. Throws std::domain_error unless
// 0 <= h < 1. perturbed_rps_rule(0) == rps_rule().
RuleTable perturbed_rps_rule(double h);

// Distribution with denominator three, stored as exact numerators.
struct Thirds {
  std::array<int, kNumTypes> numerators{};

  ProbVector to_prob() const {
    return {{numerators[0] / 3.0, numerators[1] / 3.0, numerators[2] / 3.0}};
  }
  friend bool operator==(const Thirds&, const Thirds&) = default;
};

// Hard-coded m = 4 knockout tournament table in exact thirds. Throws
// std::invalid_argument unless u sums to 4.
Thirds tournament_entry(const TypeCountVector& u);

// m = 4: the four neighbours are paired uniformly into two matches whose
// winners meet in a final.
RuleTable tournament_rule();

// Independent check of the tournament table: plays every one of the three
// perfect matchings of the four labelled neighbours and counts final winners.
Thirds tournament_oracle(const TypeCountVector& u);

// Custom rule document:
//   { "m": int, "entries": [ { "u": [3 ints], "p": [3 reals] }, ... ] }
// Throws RuleError whose kind() distinguishes malformed input, missing rows,
// bad row sums and negative probabilities.
RuleTable parse_rule(std::string_view json_text);
RuleTable load_rule(const std::filesystem::path& path);
std::string rule_to_json(const RuleTable& table);

}  // namespace tpa

#endif  // TPA_RULES_HPP
