#ifndef TPA_RULE_TABLE_HPP
#define TPA_RULE_TABLE_HPP

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tpa/types.hpp"

namespace tpa {

inline constexpr int kMaxRuleDegree = 16;
inline constexpr double kRuleSumTolerance = 1e-9;

enum class RuleIssueKind {
  kBadDegree,        // m outside [1, kMaxRuleDegree]
  kBadCountVector,   // u has a negative entry or does not sum to m
  kDuplicateEntry,
  kMissingEntry,
  kNegativeProbability,
  kProbabilityAboveOne,
  kBadRowSum,
  kMalformed,        // unparseable document or wrong field shapes
};

const char* to_string(RuleIssueKind kind);

struct RuleIssue {
  RuleIssueKind kind;
  std::string message;
};

class RuleError : public std::runtime_error {
 public:
  explicit RuleError(RuleIssue issue)
      : std::runtime_error(issue.message), kind_(issue.kind) {}
  RuleIssueKind kind() const { return kind_; }

 private:
  RuleIssueKind kind_;
};

struct RuleEntry {
  TypeCountVector u;
  ProbVector p;
};

// Checks an entry list for completeness (one row per count vector summing to
// m) and per-row distribution invariants. Never throws.
std::optional<RuleIssue> validate_rule(int m, std::span<const RuleEntry> entries,
                                       double sum_tol = kRuleSumTolerance);

// Dense total map from neighbour census u (sum m) to the new vertex's type
// distribution p_u, indexed by count_vector_index.
class RuleTable {
 public:
  // Throws RuleError if validate_rule reports an issue.
  static RuleTable from_entries(int m, std::span<const RuleEntry> entries,
                                double sum_tol = kRuleSumTolerance);

  int m() const { return m_; }
  std::size_t size() const { return rows_.size(); }

  const ProbVector& at(const TypeCountVector& u) const;
  const ProbVector& at_index(std::size_t i) const { return rows_[i]; }

  // Samples the new type for census index i from a uniform draw in [0,1).
  int sample_type(std::size_t i, double uniform01) const {
    const auto& c = cumulative_[i];
    return uniform01 < c[0] ? 0 : (uniform01 < c[1] ? 1 : 2);
  }

  std::vector<RuleEntry> entries() const;

  friend bool operator==(const RuleTable& a, const RuleTable& b) {
    return a.m_ == b.m_ && a.rows_ == b.rows_;
  }

 private:
  RuleTable(int m, std::vector<ProbVector> rows);

  int m_;
  std::vector<ProbVector> rows_;
  std::vector<std::array<double, 2>> cumulative_;
};

// Re-checks a built table; always succeeds for tables produced by
// from_entries, kept for symmetry with externally supplied rows.
std::optional<RuleIssue> validate_rule(const RuleTable& table);

}  // namespace tpa

#endif  // TPA_RULE_TABLE_HPP
