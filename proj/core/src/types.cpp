#include "tpa/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tpa {

SimplexPoint::SimplexPoint() : coords_{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0} {}

SimplexPoint::SimplexPoint(double x, double y, double z) : coords_{x, y, z} {
  for (double c : coords_) {
    if (!(c >= 0.0)) {
      throw std::domain_error("simplex coordinate must be nonnegative, got " +
                              std::to_string(c));
    }
  }
  const double sum = x + y + z;
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw std::domain_error("simplex coordinates must sum to 1, got " +
                            std::to_string(sum));
  }
}

SimplexPoint simplex_from_weights(double w1, double w2, double w3) {
  if (!(w1 >= 0.0 && w2 >= 0.0 && w3 >= 0.0)) {
    throw std::domain_error("simplex weights must be nonnegative");
  }
  const double total = w1 + w2 + w3;
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw std::domain_error("simplex weights must have a positive finite sum");
  }
  return {w1 / total, w2 / total, w3 / total};
}

SimplexPoint simplex_from_counts(const std::array<std::uint64_t, kNumTypes>& counts) {
  const std::uint64_t total = counts[0] + counts[1] + counts[2];
  if (total == 0) throw std::domain_error("counts must not all be zero");
  const double t = static_cast<double>(total);
  double x = static_cast<double>(counts[0]) / t;
  double y = static_cast<double>(counts[1]) / t;
  // Third coordinate from exact integer remainder keeps the sum tight.
  double z = static_cast<double>(total - counts[0] - counts[1]) / t;
  return {x, y, z};
}

bool ProbVector::is_distribution(double tol) const {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

std::vector<TypeCountVector> enumerate_count_vectors(int m) {
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  std::vector<TypeCountVector> out;
  out.reserve(count_vector_cardinality(m));
  for (int a = m; a >= 0; --a) {
    for (int b = m - a; b >= 0; --b) {
      out.push_back({{a, b, m - a - b}});
    }
  }
  return out;
}

std::uint64_t multinomial_coefficient(const TypeCountVector& u) {
  // Build up as a product of binomials; exact for the m <= 16 range in use.
  auto binom = [](int n, int k) {
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
  };
  return binom(u[0] + u[1], u[1]) * binom(u.total(), u[2]);
}

}  // namespace tpa
