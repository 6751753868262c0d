#ifndef TPA_DRIFT_HPP
#define TPA_DRIFT_HPP

#include "tpa/rule_table.hpp"
#include "tpa/types.hpp"

namespace tpa {

// Expected new-vertex type distribution when the m neighbours are drawn
// i.i.d. from x: q_i(x) = sum_u Multinomial(u; m, x) p_u(i).
Vec3 expected_new_type(const RuleTable& rule, const Vec3& x);

// Mean one-step drift of the degree proportions, (q(x) - x) / 2. Coordinates
// are not checked, so callers may evaluate slightly off the simplex.
Vec3 exact_drift(const RuleTable& rule, const Vec3& x);

inline Vec3 exact_drift(const RuleTable& rule, const SimplexPoint& x) {
  return exact_drift(rule, x.coords());
}

}  // namespace tpa

#endif  // TPA_DRIFT_HPP
