// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any
// criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tpa/drift.hpp"
#include "tpa/dynamics.hpp"
#include "tpa/ensemble.hpp"
#include "tpa/rules.hpp"

using namespace tpa;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void report(int id, const std::string& title, const std::function<void(Verdict&)>& body) {
  Verdict v;
  const auto t0 = Clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail << " [exception: " << e.what() << "]";
  }
  if (!v.pass) ++failures;
  std::printf("%s %2d %s:%s (%.2fs)\n", v.pass ? "PASS" : "FAIL", id, title.c_str(), v.detail.str().c_str(),
              seconds_since(t0));
  std::fflush(stdout);
}

double euclid(const SimplexPoint& a, const SimplexPoint& b) {
  const double dx = a.x() - b.x(), dy = a.y() - b.y(), dz = a.z() - b.z();
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

const SimplexPoint kCentre{};

struct Summary {
  double mean = 0, sd = 0, median = 0;
};

Summary summarize(std::vector<double> v) {
  Summary s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  for (double x : v) s.sd += (x - s.mean) * (x - s.mean);
  s.sd = std::sqrt(s.sd / static_cast<double>(v.size() - 1));
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  s.median = n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
  return s;
}

ModelConfig mc_config(RuleName rule, double h, std::uint64_t steps, EngineMode mode = EngineMode::kAggregate) {
  ModelConfig cfg;
  cfg.rule.name = rule;
  cfg.rule.h = h;
  cfg.steps = steps;
  cfg.seed = 1;
  cfg.mode = mode;
  cfg.record_interval = steps;
  return cfg;
}

struct McResult {
  std::vector<EnsembleMember> members;
  double seconds = 0;
};

McResult mc(const ModelConfig& cfg, std::size_t runs) {
  const auto t0 = Clock::now();
  McResult r;
  r.members = run_ensemble(cfg, make_rule(cfg.rule), runs, 0);
  r.seconds = seconds_since(t0);
  return r;
}

// Largest |X - 1/3| over the three degree proportions.
double band_deviation(const EnsembleMember& m) {
  const auto& d = m.final_record.degree;
  return std::max({std::abs(d.x() - 1.0 / 3), std::abs(d.y() - 1.0 / 3), std::abs(d.z() - 1.0 / 3)});
}

}  // namespace

int main() {
  constexpr std::size_t kMcRuns = 50;
  constexpr std::uint64_t kMcSteps = 10'000'000;

  report(1, "tournament table equals the knockout enumeration", [](Verdict& v) {
    const auto t0 = Clock::now();
    const auto table = tournament_rule();
    int matched = 0;
    for (const auto& u : enumerate_count_vectors(4)) {
      const Thirds oracle = tournament_oracle(u);
      const bool exact = oracle == tournament_entry(u) && table.at(u) == oracle.to_prob();
      v.require(exact, "row mismatch");
      matched += exact;
    }
    const auto p211 = table.at({{2, 1, 1}});
    v.require(p211[0] == 1.0 / 3 && p211[1] == 2.0 / 3 && p211[2] == 0.0, "p(2,1,1) != (1/3,2/3,0)");
    const double t = seconds_since(t0);
    v.require(t < 1.0, "runtime >= 1 s");
    v.detail << " rows matched " << matched << "/15";
  });

  report(2, "exact drift equals the closed-form fields within 1e-12", [](Verdict& v) {
    const auto t0 = Clock::now();
    Rng rng(2);
    double worst = 0;
    for (double h : {0.0, 0.05, 0.3, 0.9}) {
      const auto rule = perturbed_rps_rule(h);
      for (int i = 0; i < 1000; ++i) {
        const auto x = testing::random_simplex(rng);
        const Vec3 a = exact_drift(rule, x), b = field_perturbed(x, h);
        for (std::size_t c = 0; c < 3; ++c) worst = std::max(worst, std::abs(a[c] - b[c]));
      }
    }
    const auto tour = tournament_rule();
    for (int i = 0; i < 1000; ++i) {
      const auto x = testing::random_simplex(rng);
      const Vec3 a = exact_drift(tour, x), b = field_tournament(x);
      for (std::size_t c = 0; c < 3; ++c) worst = std::max(worst, std::abs(a[c] - b[c]));
    }
    v.require(worst <= 1e-12, "discrepancy above 1e-12");
    v.require(seconds_since(t0) < 5.0, "runtime >= 5 s");
    v.detail << " max discrepancy " << worst;
  });

  report(3, "Lyapunov derivative equals its factored reductions within 1e-12", [](Verdict& v) {
    Rng rng(3);
    double worst = 0;
    for (const FieldSpec& s : {FieldSpec{PerturbedField{0.05}}, FieldSpec{TournamentField{}}}) {
      for (int i = 0; i < 1000; ++i) {
        const auto x = testing::random_simplex(rng);
        worst = std::max(worst, std::abs(lyapunov_derivative(s, x) - *lyapunov_closed_form(s, x)));
      }
    }
    v.require(worst <= 1e-12, "discrepancy above 1e-12");
    v.detail << " max discrepancy " << worst;
  });

  report(4, "stationary points and Hessians of the reduced polynomials", [](Verdict& v) {
    const auto p = find_stationary_points(Model::kPerturbed);
    const std::vector<std::pair<SimplexPoint, CriticalKind>> want = {
        {SimplexPoint(1.0 / 9, 1.0 / 9, 7.0 / 9), CriticalKind::kSaddle},
        {SimplexPoint(1.0 / 9, 7.0 / 9, 1.0 / 9), CriticalKind::kSaddle},
        {kCentre, CriticalKind::kMinimum},
        {SimplexPoint(7.0 / 9, 1.0 / 9, 1.0 / 9), CriticalKind::kSaddle},
    };
    v.require(p.points.size() == want.size(), "perturbed point count != 4");
    for (std::size_t i = 0; i < std::min(p.points.size(), want.size()); ++i) {
      v.require(euclid(p.points[i].location, want[i].first) < 1e-8, "perturbed location");
      v.require(p.points[i].kind == want[i].second, "perturbed classification");
    }
    const auto t = find_stationary_points(Model::kTournament);
    v.require(t.points.size() == 1, "tournament interior point count != 1");
    if (!t.points.empty()) {
      v.require(euclid(t.points[0].location, kCentre) < 1e-8, "tournament location");
      v.require(t.points[0].kind == CriticalKind::kMinimum, "tournament classification");
    }
    const auto hp = f_gradient_hessian(Model::kPerturbed, 1.0 / 3, 1.0 / 3).hessian;
    const auto ht = f_gradient_hessian(Model::kTournament, 1.0 / 3, 1.0 / 3).hessian;
    v.require(std::abs(hp.xx - 4) < 1e-9 && std::abs(hp.xy - 2) < 1e-9 && std::abs(hp.yy - 4) < 1e-9,
              "perturbed Hessian != (4,2,4)");
    // Tournament values are printed in the order f_xx, f_yy, f_xy.
    v.require(std::abs(ht.xx - 12) < 1e-9 && std::abs(ht.yy - 12) < 1e-9 && std::abs(ht.xy - 6) < 1e-9,
              "tournament (f_xx, f_yy, f_xy) != (12,12,6)");
    v.detail << " perturbed " << p.points.size() << " points, tournament " << t.points.size()
             << " point; centre (A,B,C)=(" << hp.xx << ',' << hp.xy << ',' << hp.yy << ") (f_xx,f_yy,f_xy)=("
             << ht.xx << ',' << ht.yy << ',' << ht.xy << ')';
  });

  report(5, "d(xyz)/dt is nonnegative on a 200x200 interior grid", [](Verdict& v) {
    for (const FieldSpec& s : {FieldSpec{PerturbedField{0.05}}, FieldSpec{TournamentField{}}}) {
      const bool tournament = std::holds_alternative<TournamentField>(s);
      double lowest = 1e300, lowest_far = 1e300;
      for (const auto& g : lyapunov_grid(s, 200)) {
        lowest = std::min(lowest, g.value);
        const double edge = std::min({g.point.x(), g.point.y(), g.point.z()});
        const bool far = euclid(g.point, kCentre) > 1e-3 && (!tournament || edge > 1e-3);
        if (far) lowest_far = std::min(lowest_far, g.value);
      }
      v.require(lowest >= -1e-14, "negative value");
      v.require(lowest_far > 1e-12, "non-positive value away from zeros");
      v.detail << (tournament ? " tournament" : " perturbed") << " min " << lowest << " min-away " << lowest_far;
    }
  });

  report(6, "RK4 trajectories converge to the centre with xyz non-decreasing", [](Verdict& v) {
    const auto t0 = Clock::now();
    Rng rng(6);
    double worst_end = 0, worst_drop = 0;
    for (int i = 0; i < 20; ++i) {
      const auto x0 = testing::random_simplex(rng);
      for (const FieldSpec& s : {FieldSpec{PerturbedField{0.05}}, FieldSpec{TournamentField{}}}) {
        const auto tr = integrate(s, x0, 0.01, 100000);
        worst_end = std::max(worst_end, euclid(tr.points.back(), kCentre));
        for (std::size_t k = 1; k < tr.points.size(); ++k)
          worst_drop = std::max(worst_drop, tr.points[k - 1].product() - tr.points[k].product());
      }
    }
    v.require(worst_end < 1e-6, "final distance >= 1e-6");
    v.require(worst_drop <= 1e-12, "xyz decreased");
    v.require(seconds_since(t0) < 10.0, "runtime >= 10 s");
    v.detail << " max final distance " << worst_end << ", max xyz drop " << worst_drop;
  });

  report(7, "tournament corners are saddles", [](Verdict& v) {
    for (const auto& c : {SimplexPoint(1, 0, 0), SimplexPoint(0, 1, 0), SimplexPoint(0, 0, 1)}) {
      const auto ev = jacobian_eigen(TournamentField{}, c);
      const bool mixed = (ev[0].real() > 0 && ev[1].real() < 0) || (ev[0].real() < 0 && ev[1].real() > 0);
      v.require(mixed, "corner not a saddle");
      v.detail << " (" << ev[0].real() << ',' << ev[1].real() << ')';
    }
  });

  // Shared by criteria 8 and 9.
  const auto perturbed = mc(mc_config(RuleName::kPerturbedRps, 0.05, kMcSteps), kMcRuns);

  report(8, "Monte Carlo convergence, 50 seeds x 1e7 steps", [&](Verdict& v) {
    const auto tournament = mc(mc_config(RuleName::kTournament4, 0.0, kMcSteps), kMcRuns);

    std::vector<double> products;
    int p_out = 0, t_out = 0;
    double p_worst = 0, t_worst = 0;
    for (const auto& m : perturbed.members) {
      products.push_back(m.final_record.product27);
      const double d = band_deviation(m);
      p_worst = std::max(p_worst, d);
      p_out += d > 0.05;
    }
    for (const auto& m : tournament.members) {
      const double d = band_deviation(m);
      t_worst = std::max(t_worst, d);
      t_out += d > 0.05;
    }
    const auto s = summarize(products);
    v.require(s.median > 0.95, "(a) median product27 <= 0.95");
    v.require(p_out == 0, "(a) perturbed seeds outside the 0.05 band");
    v.require(t_out == 0, "(b) tournament seeds outside the 0.05 band");

    // Throughput target: one 1e7-step run in under a second, all of it under 10 minutes.
    const double per_run_p = perturbed.seconds / kMcRuns, per_run_t = tournament.seconds / kMcRuns;
    v.require(per_run_p < 1.0 && per_run_t < 1.0, "runtime >= 1 s per 1e7 steps");
    v.require(perturbed.seconds + tournament.seconds < 600, "total runtime >= 10 min");
    v.detail << " (a) median product27 " << s.median << ", " << p_out << "/50 outside band, max dev " << p_worst
             << "; (b) " << t_out << "/50 outside band, max dev " << t_worst << "; s/run " << per_run_p << ", "
             << per_run_t;
  });

  report(9, "h=0 spread exceeds h=0.05 spread by 5x", [&](Verdict& v) {
    const auto flat = mc(mc_config(RuleName::kPerturbedRps, 0.0, kMcSteps), kMcRuns);
    std::vector<double> a, b;
    for (const auto& m : flat.members) a.push_back(m.final_record.product27);
    for (const auto& m : perturbed.members) b.push_back(m.final_record.product27);
    const double sd0 = summarize(a).sd, sd5 = summarize(b).sd;
    v.require(sd0 >= 5 * sd5, "ratio below 5");
    v.detail << " sd(h=0) " << sd0 << ", sd(h=0.05) " << sd5 << ", ratio " << sd0 / sd5;
  });

  report(10, "aggregate and graph modes agree within 3 standard errors", [](Verdict& v) {
    constexpr std::size_t kRuns = 200;
    const auto agg = mc(mc_config(RuleName::kRps, 0.0, 100000, EngineMode::kAggregate), kRuns);
    const auto graph = mc(mc_config(RuleName::kRps, 0.0, 100000, EngineMode::kGraph), kRuns);
    double worst = 0;
    for (std::size_t c = 0; c < 3; ++c) {
      std::vector<double> a, g;
      for (const auto& m : agg.members) a.push_back(m.final_record.degree[c]);
      for (const auto& m : graph.members) g.push_back(m.final_record.degree[c]);
      const auto sa = summarize(a), sg = summarize(g);
      const double se = std::sqrt(sa.sd * sa.sd / kRuns + sg.sd * sg.sd / kRuns);
      const double z = std::abs(sa.mean - sg.mean) / se;
      worst = std::max(worst, z);
      v.require(z < 3, "mean difference >= 3 SE");
    }
    v.detail << " max |diff|/SE " << worst;
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
