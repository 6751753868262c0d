#ifndef TPA_TYPES_HPP
#define TPA_TYPES_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace tpa {

// Number of vertex types. Both supported models are three-type systems.
inline constexpr std::size_t kNumTypes = 3;

// Type ids. Rock is beaten by paper, paper by scissors, scissors by rock.
enum class Type : std::uint8_t { kRock = 0, kPaper = 1, kScissors = 2 };

using Vec3 = std::array<double, kNumTypes>;

// A point of the 2-simplex: nonnegative coordinates summing to one.
class SimplexPoint {
 public:
  static constexpr double kSumTolerance = 1e-12;

  // The centre (1/3, 1/3, 1/3).
  SimplexPoint();

  // Throws std::domain_error unless every coordinate is >= 0 and the sum is
  // within kSumTolerance of 1.
  SimplexPoint(double x, double y, double z);

  double x() const { return coords_[0]; }
  double y() const { return coords_[1]; }
  double z() const { return coords_[2]; }
  double operator[](std::size_t i) const { return coords_[i]; }
  const Vec3& coords() const { return coords_; }

  double product() const { return coords_[0] * coords_[1] * coords_[2]; }

  friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;

 private:
  Vec3 coords_;
};

// (w1, w2, w3) / (w1 + w2 + w3). Throws std::domain_error on negative input
// or an all-zero vector.
SimplexPoint simplex_from_weights(double w1, double w2, double w3);

// Integer weights are summed exactly before the single division.
SimplexPoint simplex_from_counts(const std::array<std::uint64_t, kNumTypes>& counts);

// Census of neighbour types: u[i] neighbours of type i.
struct TypeCountVector {
  std::array<int, kNumTypes> u{};

  int total() const { return u[0] + u[1] + u[2]; }
  int operator[](std::size_t i) const { return u[i]; }
  friend bool operator==(const TypeCountVector&, const TypeCountVector&) = default;
  friend auto operator<=>(const TypeCountVector&, const TypeCountVector&) = default;
};

// Distribution over the new vertex's type. Plain data; validity is checked by
// RuleTable construction and is_distribution().
struct ProbVector {
  std::array<double, kNumTypes> p{};

  double operator[](std::size_t i) const { return p[i]; }
  bool is_distribution(double tol = 1e-12) const;
  friend bool operator==(const ProbVector&, const ProbVector&) = default;
};

// Number of count vectors with three nonnegative entries summing to m,
// i.e. C(m+2, 2).
constexpr std::size_t count_vector_cardinality(int m) {
  return static_cast<std::size_t>(m + 1) * static_cast<std::size_t>(m + 2) / 2;
}

// Position of u within enumerate_count_vectors(m). Requires u.total() == m.
constexpr std::size_t count_vector_index(int m, int u1, int u2) {
  const int rest = m - u1;
  return static_cast<std::size_t>(rest * (rest + 1) / 2 + (rest - u2));
}

inline std::size_t count_vector_index(int m, const TypeCountVector& u) {
  return count_vector_index(m, u[0], u[1]);
}

// All u with u1 + u2 + u3 = m, in descending lexicographic order:
// (m,0,0), (m-1,1,0), (m-1,0,1), ..., (0,0,m). Throws for m < 1.
std::vector<TypeCountVector> enumerate_count_vectors(int m);

// Multinomial coefficient m! / (u1! u2! u3!).
std::uint64_t multinomial_coefficient(const TypeCountVector& u);

}  // namespace tpa

#endif  // TPA_TYPES_HPP
