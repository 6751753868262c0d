#include "tpa/rule_table.hpp"

#include <cmath>
#include <sstream>

namespace tpa {
namespace {

std::string describe(const TypeCountVector& u) {
  std::ostringstream os;
  os << '(' << u[0] << ',' << u[1] << ',' << u[2] << ')';
  return os.str();
}

}  // namespace

const char* to_string(RuleIssueKind kind) {
  switch (kind) {
    case RuleIssueKind::kBadDegree: return "bad_degree";
    case RuleIssueKind::kBadCountVector: return "bad_count_vector";
    case RuleIssueKind::kDuplicateEntry: return "duplicate_entry";
    case RuleIssueKind::kMissingEntry: return "missing_entry";
    case RuleIssueKind::kNegativeProbability: return "negative_probability";
    case RuleIssueKind::kProbabilityAboveOne: return "probability_above_one";
    case RuleIssueKind::kBadRowSum: return "bad_row_sum";
    case RuleIssueKind::kMalformed: return "malformed";
  }
  return "unknown";
}

std::optional<RuleIssue> validate_rule(int m, std::span<const RuleEntry> entries,
                                       double sum_tol) {
  if (m < 1 || m > kMaxRuleDegree) {
    return RuleIssue{RuleIssueKind::kBadDegree,
                     "m must lie in [1, " + std::to_string(kMaxRuleDegree) +
                         "], got " + std::to_string(m)};
  }
  std::vector<bool> seen(count_vector_cardinality(m), false);
  for (const auto& e : entries) {
    if (e.u[0] < 0 || e.u[1] < 0 || e.u[2] < 0 || e.u.total() != m) {
      return RuleIssue{RuleIssueKind::kBadCountVector,
                       "count vector " + describe(e.u) + " does not sum to m=" +
                           std::to_string(m)};
    }
    const auto idx = count_vector_index(m, e.u);
    if (seen[idx]) {
      return RuleIssue{RuleIssueKind::kDuplicateEntry,
                       "duplicate entry for u=" + describe(e.u)};
    }
    seen[idx] = true;
    double sum = 0.0;
    for (double v : e.p.p) {
      if (!(v >= 0.0)) {
        return RuleIssue{RuleIssueKind::kNegativeProbability,
                         "negative or NaN probability in row u=" + describe(e.u)};
      }
      if (v > 1.0 + sum_tol) {
        return RuleIssue{RuleIssueKind::kProbabilityAboveOne,
                         "probability above one in row u=" + describe(e.u)};
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > sum_tol) {
      std::ostringstream os;
      os << "row u=" << describe(e.u) << " sums to " << sum << ", not 1";
      return RuleIssue{RuleIssueKind::kBadRowSum, os.str()};
    }
  }
  for (const auto& u : enumerate_count_vectors(m)) {
    if (!seen[count_vector_index(m, u)]) {
      return RuleIssue{RuleIssueKind::kMissingEntry, "missing entry for u=" + describe(u)};
    }
  }
  return std::nullopt;
}

RuleTable RuleTable::from_entries(int m, std::span<const RuleEntry> entries, double sum_tol) {
  if (auto issue = validate_rule(m, entries, sum_tol)) throw RuleError(std::move(*issue));
  std::vector<ProbVector> rows(count_vector_cardinality(m));
  for (const auto& e : entries) rows[count_vector_index(m, e.u)] = e.p;
  return RuleTable(m, std::move(rows));
}

RuleTable::RuleTable(int m, std::vector<ProbVector> rows) : m_(m), rows_(std::move(rows)) {
  cumulative_.reserve(rows_.size());
  for (const auto& r : rows_) {
    const double total = r[0] + r[1] + r[2];
    // Thresholds are normalised so a row within tolerance of 1 samples exactly.
    cumulative_.push_back({r[0] / total, (r[0] + r[1]) / total});
  }
}

const ProbVector& RuleTable::at(const TypeCountVector& u) const {
  if (u.total() != m_ || u[0] < 0 || u[1] < 0 || u[2] < 0) {
    throw std::out_of_range("count vector " + describe(u) + " not in table with m=" +
                            std::to_string(m_));
  }
  return rows_[count_vector_index(m_, u)];
}

std::vector<RuleEntry> RuleTable::entries() const {
  std::vector<RuleEntry> out;
  out.reserve(rows_.size());
  for (const auto& u : enumerate_count_vectors(m_)) {
    out.push_back({u, rows_[count_vector_index(m_, u)]});
  }
  return out;
}

std::optional<RuleIssue> validate_rule(const RuleTable& table) {
  const auto rows = table.entries();
  return validate_rule(table.m(), rows);
}

}  // namespace tpa
