#include "tpa/drift.hpp"

#include <array>

namespace tpa {

Vec3 expected_new_type(const RuleTable& rule, const Vec3& x) {
  const int m = rule.m();
  std::array<std::array<double, kMaxRuleDegree + 1>, kNumTypes> pow{};
  for (std::size_t t = 0; t < kNumTypes; ++t) {
    pow[t][0] = 1.0;
    for (int e = 1; e <= m; ++e) pow[t][e] = pow[t][e - 1] * x[t];
  }
  Vec3 q{0.0, 0.0, 0.0};
  for (int a = m; a >= 0; --a) {
    for (int b = m - a; b >= 0; --b) {
      const TypeCountVector u{{a, b, m - a - b}};
      const double weight = static_cast<double>(multinomial_coefficient(u)) * pow[0][u[0]] *
                            pow[1][u[1]] * pow[2][u[2]];
      const auto& p = rule.at_index(count_vector_index(m, u));
      for (std::size_t i = 0; i < kNumTypes; ++i) q[i] += weight * p[i];
    }
  }
  return q;
}

Vec3 exact_drift(const RuleTable& rule, const Vec3& x) {
  const Vec3 q = expected_new_type(rule, x);
  return {(q[0] - x[0]) / 2.0, (q[1] - x[1]) / 2.0, (q[2] - x[2]) / 2.0};
}

}  // namespace tpa
