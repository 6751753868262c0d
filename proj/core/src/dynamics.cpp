#include "tpa/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tpa/drift.hpp"

namespace tpa {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using Vec2 = std::array<double, 2>;

Vec2 reduced_field(const FieldSpec& spec, double x, double y) {
  const Vec3 p = evaluate(spec, Vec3{x, y, 1.0 - x - y});
  return {p[0], p[1]};
}

// One Newton run on grad f. Returns the converged point or nothing.
std::optional<Vec2> newton(Model model, Vec2 p, double tol) {
  constexpr int kMaxIter = 60;
  for (int it = 0; it < kMaxIter; ++it) {
    const auto d = f_gradient_hessian(model, p[0], p[1]);
    const double det = d.hessian.det();
    if (std::abs(det) < 1e-14) return std::nullopt;
    const double dx = (d.hessian.yy * d.gradient[0] - d.hessian.xy * d.gradient[1]) / det;
    const double dy = (d.hessian.xx * d.gradient[1] - d.hessian.xy * d.gradient[0]) / det;
    p = {p[0] - dx, p[1] - dy};
    if (!std::isfinite(p[0]) || !std::isfinite(p[1]) || std::abs(p[0]) > 1e3 || std::abs(p[1]) > 1e3) {
      return std::nullopt;
    }
    if (std::hypot(dx, dy) < 1e-15) break;
  }
  const auto d = f_gradient_hessian(model, p[0], p[1]);
  if (std::hypot(d.gradient[0], d.gradient[1]) >= tol) return std::nullopt;
  return p;
}

SimplexPoint project(double x, double y, double z) {
  x = std::clamp(x, 0.0, 1.0);
  y = std::clamp(y, 0.0, 1.0);
  z = std::clamp(z, 0.0, 1.0);
  const double s = x + y + z;
  return {x / s, y / s, z / s};
}

}  // namespace

Vec3 field_perturbed(const Vec3& v, double h) {
  const double x = v[0], y = v[1], z = v[2];
  const double k = h / 3.0;
  return {
      x / 2 * (z - y) + y * (x + z) * k - x * (x + 2 * z) * k + 0.5 * (y * y + z * z) * k,
      y / 2 * (x - z) + z * (x + y) * k - y * (2 * x + y) * k + 0.5 * (x * x + z * z) * k,
      z / 2 * (y - x) + x * (y + z) * k - z * (2 * y + z) * k + 0.5 * (x * x + y * y) * k,
  };
}

Vec3 field_tournament(const Vec3& v) {
  const double x = v[0], y = v[1], z = v[2];
  const double x2 = x * x, y2 = y * y, z2 = z * z;
  return {
      x / 2 * (-3 * x2 * y + x2 * z - 3 * x * y2 - 2 * x * y * z + 3 * x * z2 - y2 * y -
               3 * y2 * z + 5 * y * z2 + 3 * z2 * z),
      y / 2 * (-3 * y2 * z + y2 * x - 3 * y * z2 - 2 * x * y * z + 3 * y * x2 - z2 * z -
               3 * z2 * x + 5 * z * x2 + 3 * x2 * x),
      z / 2 * (-3 * z2 * x + z2 * y - 3 * z * x2 - 2 * x * y * z + 3 * z * y2 - x2 * x -
               3 * x2 * y + 5 * x * y2 + 3 * y2 * y),
  };
}

Vec3 field_from_rule(const RuleTable& rule, const SimplexPoint& x) { return exact_drift(rule, x); }

Vec3 evaluate(const FieldSpec& spec, const Vec3& x) {
  return std::visit(overloaded{
                        [&](const PerturbedField& f) { return field_perturbed(x, f.h); },
                        [&](const TournamentField&) { return field_tournament(x); },
                        [&](const RuleField& f) { return exact_drift(f.rule, x); },
                    },
                    spec);
}

double lyapunov_derivative(const FieldSpec& spec, const SimplexPoint& p) {
  const Vec3 f = evaluate(spec, p);
  const double x = p.x(), y = p.y(), z = p.z();
  return y * z * f[0] + x * z * f[1] + x * y * f[2];
}

std::optional<double> lyapunov_closed_form(const FieldSpec& spec, const SimplexPoint& p) {
  const double x = p.x(), y = p.y(), z = p.z();
  if (const auto* pf = std::get_if<PerturbedField>(&spec)) {
    const double k = pf->h / 3.0;
    return k / 2 * (x * x * (1 - x) + y * y * (1 - y) + z * z * (1 - z) - 6 * x * y * z);
  }
  if (std::holds_alternative<TournamentField>(spec)) {
    const double inner = 3 * x * x * z + 3 * x * y * y + 3 * y * z * z - 3 * x * x * y - 3 * y * y * z -
                         3 * x * z * z - 6 * x * y * z + 2 * x * x * x + 2 * y * y * y + 2 * z * z * z;
    return x * y * z / 2 * inner;
  }
  return std::nullopt;
}

const char* to_string(Model model) {
  return model == Model::kPerturbed ? "perturbed" : "tournament";
}

double reduced_f(Model model, double x, double y) {
  if (model == Model::kPerturbed) {
    return x - x * x + y - y * y - 10 * x * y + 9 * x * x * y + 9 * x * y * y;
  }
  return 2 - 9 * x - 3 * y + 15 * x * x + 6 * x * y - 3 * y * y - 6 * x * x * x - 9 * x * x * y +
         9 * x * y * y + 6 * y * y * y;
}

FDerivatives f_gradient_hessian(Model model, double x, double y) {
  FDerivatives d;
  if (model == Model::kPerturbed) {
    d.gradient = {(9 * y - 1) * (2 * x + y - 1), (9 * x - 1) * (x + 2 * y - 1)};
    d.hessian = {18 * y - 2, 18 * (x + y) - 10, 18 * x - 2};
  } else {
    d.gradient = {3 * (-3 + 10 * x + 2 * y - 6 * x * x - 6 * x * y + 3 * y * y),
                  3 * (-1 + 2 * x - 2 * y - 3 * x * x + 6 * x * y + 6 * y * y)};
    d.hessian = {6 * (5 - 6 * x - 3 * y), 6 * (1 - 3 * x + 3 * y), 6 * (-1 + 3 * x + 6 * y)};
  }
  return d;
}

const char* to_string(CriticalKind kind) {
  switch (kind) {
    case CriticalKind::kMinimum: return "minimum";
    case CriticalKind::kMaximum: return "maximum";
    case CriticalKind::kSaddle: return "saddle";
    case CriticalKind::kDegenerate: return "degenerate";
  }
  return "unknown";
}

CriticalKind classify_critical(const Hessian2& h, double tol) {
  const double det = h.det();
  if (std::abs(det) <= tol) return CriticalKind::kDegenerate;
  if (det < 0) return CriticalKind::kSaddle;
  return h.xx > 0 ? CriticalKind::kMinimum : CriticalKind::kMaximum;
}

StationarySearch find_stationary_points(Model model, int grid_density, double tol) {
  if (grid_density < 10) throw std::invalid_argument("grid density must be at least 10");
  StationarySearch out;
  std::vector<Vec2> found;
  const double g = grid_density;
  for (int i = 1; i < grid_density; ++i) {
    for (int j = 1; i + j < grid_density; ++j) {
      ++out.starts;
      auto p = newton(model, {i / g, j / g}, tol);
      if (!p) {
        ++out.non_converged;
        continue;
      }
      found.push_back(*p);
    }
  }
  std::sort(found.begin(), found.end());

  const double merge = 10 * tol;
  std::vector<Vec2> unique;
  for (const auto& p : found) {
    const bool dup = std::any_of(unique.begin(), unique.end(), [&](const Vec2& q) {
      return std::abs(p[0] - q[0]) <= merge && std::abs(p[1] - q[1]) <= merge;
    });
    if (!dup) unique.push_back(p);
  }

  for (const auto& p : unique) {
    const double z = 1.0 - p[0] - p[1];
    if (p[0] <= tol || p[1] <= tol || z <= tol) {
      ++out.outside_simplex;
      continue;
    }
    const auto d = f_gradient_hessian(model, p[0], p[1]);
    out.points.push_back({SimplexPoint(p[0], p[1], z), classify_critical(d.hessian, tol), d.hessian,
                          std::hypot(d.gradient[0], d.gradient[1])});
  }
  return out;
}

StationarySearch find_stationary_points(const FieldSpec& spec, int grid_density, double tol) {
  if (const auto* pf = std::get_if<PerturbedField>(&spec); pf && pf->h > 0) {
    return find_stationary_points(Model::kPerturbed, grid_density, tol);
  }
  if (std::holds_alternative<TournamentField>(spec)) {
    return find_stationary_points(Model::kTournament, grid_density, tol);
  }
  if (grid_density < 10) throw std::invalid_argument("grid density must be at least 10");
  StationarySearch out;
  const double g = grid_density;
  double worst = 0.0;
  for (int i = 1; i < grid_density; ++i) {
    for (int j = 1; i + j < grid_density; ++j) {
      ++out.starts;
      const Vec3 f = evaluate(spec, Vec3{i / g, j / g, 1.0 - i / g - j / g});
      worst = std::max({worst, std::abs(f[0]), std::abs(f[1]), std::abs(f[2])});
    }
  }
  if (worst > tol) {
    throw std::invalid_argument("no reduced polynomial for this field; stationary analysis needs a "
                                "closed-form model or an identically zero field");
  }
  out.field_identically_zero = true;
  return out;
}

Trajectory integrate(const FieldSpec& spec, const SimplexPoint& x0, double dt, std::size_t steps) {
  if (!(dt > 0.0 && dt <= 0.1)) throw std::invalid_argument("dt must lie in (0, 0.1]");
  Trajectory out;
  out.dt = dt;
  out.points.reserve(steps + 1);
  out.points.push_back(x0);

  double x = x0.x(), y = x0.y();
  for (std::size_t n = 0; n < steps; ++n) {
    const Vec2 k1 = reduced_field(spec, x, y);
    const Vec2 k2 = reduced_field(spec, x + dt / 2 * k1[0], y + dt / 2 * k1[1]);
    const Vec2 k3 = reduced_field(spec, x + dt / 2 * k2[0], y + dt / 2 * k2[1]);
    const Vec2 k4 = reduced_field(spec, x + dt * k3[0], y + dt * k3[1]);
    x += dt / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
    y += dt / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
    const double z = 1.0 - x - y;

    const double low = std::min({x, y, z});
    const double high = std::max({x, y, z});
    if (low < -kSimplexExitTolerance || high > 1.0 + kSimplexExitTolerance) {
      throw IntegrationError("trajectory left the simplex at step " + std::to_string(n + 1) +
                             "; reduce dt");
    }
    SimplexPoint p = (low < 0.0 || high > 1.0) ? project(x, y, z) : SimplexPoint(x, y, z);
    if (low < -kRenormalizeThreshold || high > 1.0 + kRenormalizeThreshold) ++out.renormalizations;
    x = p.x();
    y = p.y();
    out.points.push_back(p);
  }
  return out;
}

std::array<std::array<double, 2>, 2> reduced_jacobian(const FieldSpec& spec, const SimplexPoint& p,
                                                      double step) {
  const double x = p.x(), y = p.y();
  const Vec2 fxp = reduced_field(spec, x + step, y);
  const Vec2 fxm = reduced_field(spec, x - step, y);
  const Vec2 fyp = reduced_field(spec, x, y + step);
  const Vec2 fym = reduced_field(spec, x, y - step);
  return {{{(fxp[0] - fxm[0]) / (2 * step), (fyp[0] - fym[0]) / (2 * step)},
           {(fxp[1] - fxm[1]) / (2 * step), (fyp[1] - fym[1]) / (2 * step)}}};
}

std::array<std::complex<double>, 2> jacobian_eigen(const FieldSpec& spec, const SimplexPoint& x) {
  const auto j = reduced_jacobian(spec, x);
  const double half_trace = (j[0][0] + j[1][1]) / 2;
  const double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
  const std::complex<double> root = std::sqrt(std::complex<double>(half_trace * half_trace - det, 0.0));
  return {half_trace + root, half_trace - root};
}

const char* to_string(FixedPointKind kind) {
  switch (kind) {
    case FixedPointKind::kSink: return "sink";
    case FixedPointKind::kSource: return "source";
    case FixedPointKind::kSaddle: return "saddle";
    case FixedPointKind::kCenter: return "center";
    case FixedPointKind::kDegenerate: return "degenerate";
  }
  return "unknown";
}

FixedPointKind classify_fixed_point(const std::array<std::complex<double>, 2>& ev, double tol) {
  const double a = ev[0].real(), b = ev[1].real();
  if (a > tol && b > tol) return FixedPointKind::kSource;
  if (a < -tol && b < -tol) return FixedPointKind::kSink;
  if ((a > tol && b < -tol) || (a < -tol && b > tol)) return FixedPointKind::kSaddle;
  if (std::abs(a) <= tol && std::abs(b) <= tol && std::abs(ev[0].imag()) > tol) {
    return FixedPointKind::kCenter;
  }
  return FixedPointKind::kDegenerate;
}

std::vector<GridValue> lyapunov_grid(const FieldSpec& spec, int density) {
  if (density < 3) throw std::invalid_argument("grid density must be at least 3");
  std::vector<GridValue> out;
  const double n = density;
  for (int i = 1; i < density; ++i) {
    for (int j = 1; i + j < density; ++j) {
      const int k = density - i - j;
      // z from the integer remainder keeps every grid point on the simplex.
      SimplexPoint p(i / n, j / n, k / n);
      out.push_back({p, lyapunov_derivative(spec, p)});
    }
  }
  return out;
}

}  // namespace tpa
