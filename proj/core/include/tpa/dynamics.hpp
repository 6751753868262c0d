#ifndef TPA_DYNAMICS_HPP
#define TPA_DYNAMICS_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "tpa/rule_table.hpp"
#include "tpa/types.hpp"

namespace tpa {

// Mean-field vector fields on the simplex. Every field is tangent to the
// simplex: its three components sum to zero.

struct PerturbedField {
  double h = 0.05;
};
struct TournamentField {};
struct RuleField {
  RuleTable rule;
};

using FieldSpec = std::variant<PerturbedField, TournamentField, RuleField>;

// Perturbed rock-paper-scissors field with k = h/3. Coordinates unchecked.
Vec3 field_perturbed(const Vec3& x, double h);
inline Vec3 field_perturbed(const SimplexPoint& x, double h) { return field_perturbed(x.coords(), h); }

// m = 4 knockout tournament field. Coordinates unchecked.
Vec3 field_tournament(const Vec3& x);
inline Vec3 field_tournament(const SimplexPoint& x) { return field_tournament(x.coords()); }

// Generic field of a rule table: the multinomial drift (q(x) - x) / 2.
Vec3 field_from_rule(const RuleTable& rule, const SimplexPoint& x);

Vec3 evaluate(const FieldSpec& spec, const Vec3& x);
inline Vec3 evaluate(const FieldSpec& spec, const SimplexPoint& x) { return evaluate(spec, x.coords()); }

// d(xyz)/dt along the field: yz P1 + xz P2 + xy P3.
double lyapunov_derivative(const FieldSpec& spec, const SimplexPoint& x);

// Factored form of d(xyz)/dt for the two closed-form models:
//   perturbed:  (k/2)(x^2(1-x) + y^2(1-y) + z^2(1-z) - 6xyz)
//   tournament: (xyz/2)(3x^2z + 3xy^2 + 3yz^2 - 3x^2y - 3y^2z - 3xz^2
//                       - 6xyz + 2x^3 + 2y^3 + 2z^3)
// Empty for rule-table fields.
std::optional<double> lyapunov_closed_form(const FieldSpec& spec, const SimplexPoint& x);

// Reduced polynomials f(x, y): d(xyz)/dt with z = 1 - x - y substituted and
// positive factors dropped (k/2 for the perturbed model, xyz/2 for the
// tournament).
enum class Model { kPerturbed, kTournament };

const char* to_string(Model model);

double reduced_f(Model model, double x, double y);

struct Hessian2 {
  double xx = 0.0;  // A
  double xy = 0.0;  // B
  double yy = 0.0;  // C

  double det() const { return xx * yy - xy * xy; }
};

struct FDerivatives {
  std::array<double, 2> gradient{};
  Hessian2 hessian;
};

// Closed-form first and second partial derivatives of reduced_f.
FDerivatives f_gradient_hessian(Model model, double x, double y);

enum class CriticalKind { kMinimum, kMaximum, kSaddle, kDegenerate };
const char* to_string(CriticalKind kind);

// Second-derivative test; |AC - B^2| <= tol is degenerate.
CriticalKind classify_critical(const Hessian2& h, double tol);

struct StationaryPoint {
  SimplexPoint location;
  CriticalKind kind = CriticalKind::kDegenerate;
  Hessian2 hessian;
  double gradient_norm = 0.0;
};

struct StationarySearch {
  std::vector<StationaryPoint> points;  // interior points, sorted by (x, y)
  std::size_t starts = 0;
  std::size_t non_converged = 0;   // Newton failures, skipped
  std::size_t outside_simplex = 0; // converged outside the open simplex
  bool field_identically_zero = false;
};

// Multi-start Newton on grad f from every interior point (i/g, j/g) of a grid
// of density g >= 10. Converged points within 10*tol of one another are
// merged. Throws std::invalid_argument for g < 10.
StationarySearch find_stationary_points(Model model, int grid_density = 40, double tol = 1e-10);

// Closed-form field specs dispatch to the Model overload. A rule-table field
// has no reduced polynomial: if the field vanishes on the whole grid the
// result reports field_identically_zero, otherwise std::invalid_argument.
StationarySearch find_stationary_points(const FieldSpec& spec, int grid_density = 40,
                                        double tol = 1e-10);

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Trajectory {
  std::vector<SimplexPoint> points;  // points[i] is the state at time i*dt
  double dt = 0.0;
  std::size_t renormalizations = 0;
};

inline constexpr double kRenormalizeThreshold = 1e-9;
inline constexpr double kSimplexExitTolerance = 1e-6;

// Classic fourth-order Runge-Kutta in (x, y) with z = 1 - x - y. A state that
// leaves [0,1]^3 by more than kRenormalizeThreshold is clamped and
// renormalised (counted); by more than kSimplexExitTolerance it throws
// IntegrationError. Requires 0 < dt <= 0.1.
Trajectory integrate(const FieldSpec& spec, const SimplexPoint& x0, double dt, std::size_t steps);

// Jacobian of the reduced field (P1, P2)(x, y, 1-x-y) by central differences.
std::array<std::array<double, 2>, 2> reduced_jacobian(const FieldSpec& spec, const SimplexPoint& x,
                                                      double step = 1e-6);

// Eigenvalues of reduced_jacobian, larger real part first.
std::array<std::complex<double>, 2> jacobian_eigen(const FieldSpec& spec, const SimplexPoint& x);

enum class FixedPointKind { kSink, kSource, kSaddle, kCenter, kDegenerate };
const char* to_string(FixedPointKind kind);

FixedPointKind classify_fixed_point(const std::array<std::complex<double>, 2>& eigenvalues,
                                    double tol = 1e-9);

struct GridValue {
  SimplexPoint point;
  double value = 0.0;
};

// d(xyz)/dt at the interior grid points (i/n, j/n), i, j >= 1, i + j <= n-1.
std::vector<GridValue> lyapunov_grid(const FieldSpec& spec, int density);

}  // namespace tpa

#endif  // TPA_DYNAMICS_HPP
