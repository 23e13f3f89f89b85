// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "survdom/classical.hpp"
#include "survdom/covariance.hpp"
#include "survdom/dominance.hpp"
#include "survdom/io.hpp"
#include "survdom/mvn.hpp"
#include "survdom/report.hpp"
#include "survdom/simulation.hpp"

using namespace survdom;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, bool ok, const std::string& title, const std::string& detail) {
  std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::pair<SurvivalSample, SurvivalSample> load(const char* file, const char* first, const char* second) {
  return two_samples(read_dataset(std::string(SURVDOM_DATA_DIR) + "/" + file), first, second);
}

void run_guarded(int id, const std::string& title, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, false, title, std::string("exception: ") + e.what());
  }
}

double binom_se(double p, double r) { return std::sqrt(p * (1 - p) / r); }

void criterion_dataset(int id, const char* title, const char* file, const char* t, const char* u, double delta_ref,
                       const std::function<bool(double)>& p_ok, const char* p_rule) {
  run_guarded(id, title, [&] {
    const auto [st, su] = load(file, t, u);
    const auto t0 = Clock::now();
    const auto r = dominance_test(st, su);
    const double secs = seconds_since(t0);
    const bool ok = std::fabs(r.delta - delta_ref) <= 0.02 && p_ok(r.p_upper) && secs < 5.0;
    report(id, ok, title,
           fmt("delta=%.4f (ref %.4f +-0.02), p_upper=%.4f+-%.4f (%s), %.2fs (<5s)", r.delta, delta_ref, r.p_upper,
               r.p_error, p_rule, secs));
  });
}

void criterion_classical(int id, const char* title, const char* file, const char* first, const char* second,
                         const double (&stat)[5], const double* pval) {
  run_guarded(id, title, [&] {
    const auto [a, b] = load(file, first, second);
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < 5; ++i) {
      const auto r = weighted_logrank(a, b, kAllWlrVariants[i]);
      ok = ok && std::fabs(r.statistic - stat[i]) <= 0.05;
      if (pval) ok = ok && std::fabs(r.p - pval[i]) <= 0.0005;
      detail += fmt("%s%s=%.4f(ref %.4f", i ? ", " : "", std::string(to_string(kAllWlrVariants[i])).c_str(),
                    r.statistic, stat[i]);
      detail += pval ? fmt("; p=%.4f ref %.4f)", r.p, pval[i]) : std::string(")");
    }
    report(id, ok, title, detail);
  });
}

void criterion_table3() {
  const char* title = "simulation spot cells, R=500";
  run_guarded(5, title, [&] {
    struct Cell {
      Scenario s;
      double lo, hi;
    };
    const std::vector<Cell> cells{{reference_case(1, CensorTarget::P20, 100), 0.0, 0.01},
                                  {reference_case(2, CensorTarget::P20, 200), 0.0, 0.03},
                                  {reference_case(3, CensorTarget::P20, 200), 0.95, 1.0},
                                  {reference_case(4, CensorTarget::P50, 100), 0.47, 0.61}};
    std::vector<Scenario> scen;
    for (const auto& c : cells) scen.push_back(c.s);
    const std::vector<double> alphas{0.05, 0.01};
    const auto t0 = Clock::now();
    const auto table = rejection_table(scen, 500, 20240501, alphas);
    const double secs = seconds_since(t0);
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const double r = table.rows[i].rates[0];
      ok = ok && r >= cells[i].lo && r <= cells[i].hi;
      detail += fmt("%s%s n=%zu %s rate(0.05)=%.3f in [%.2f,%.2f]", i ? "; " : "", cells[i].s.label.c_str(),
                    cells[i].s.n, std::string(to_string(cells[i].s.censor)).c_str(), r, cells[i].lo, cells[i].hi);
    }
    detail += fmt("; %.0fs", secs);
    report(5, ok, title, detail);
  });
}

Eigen::MatrixXd random_cov(int k, RngStream& rng, bool brownian) {
  Eigen::MatrixXd c(k, k);
  if (brownian) {
    // S(s) S(t) a(min(s, t)) with random decreasing S and increasing a.
    std::vector<double> s(k), a(k);
    double sv = 1.0, av = 0.0;
    for (int i = 0; i < k; ++i) {
      sv *= 1.0 - 0.08 * rng.uniform();
      av += 0.05 + 0.2 * rng.uniform();
      s[i] = sv;
      a[i] = av;
    }
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) c(i, j) = s[i] * s[j] * a[std::min(i, j)];
  } else {
    Eigen::MatrixXd b(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) b(i, j) = rng.normal();
    c = b * b.transpose() / k;
    c.diagonal().array() += 0.05;
  }
  return c;
}

std::string kidney_json(std::uint64_t seed) {
  const auto [t, u] = load("kidney.csv", "percutaneous", "surgical");
  DominanceConfig cfg;
  cfg.seed = seed;
  nlohmann::ordered_json doc;
  doc["config"] = config_json(cfg);
  doc["result"] = to_json(dominance_test(t, u, cfg));
  for (auto v : kAllWlrVariants) doc["classical"].push_back(to_json(weighted_logrank(t, u, v)));
  return doc.dump(2);
}

std::string table_json(std::uint64_t seed) {
  const std::vector<Scenario> cells{reference_case(4, CensorTarget::P50, 60)};
  const std::vector<double> alphas{0.05, 0.01};
  const auto table = rejection_table(cells, 50, seed, alphas);
  std::ostringstream csv;
  write_rejection_csv(csv, table);
  return to_json(table).dump(2) + csv.str();
}

void criterion_properties() {
  const char* title = "property suite";
  run_guarded(6, title, [&] {
    std::vector<std::string> parts;
    bool all = true;
    auto part = [&](const char* name, bool ok, const std::string& info) {
      parts.push_back(fmt("(%s) %s %s", name, ok ? "ok" : "FAILED", info.c_str()));
      all = all && ok;
    };

    {  // (a)
      RngStream rng(601, 1);
      std::size_t bad = 0;
      for (int rep = 0; rep < 500; ++rep) {
        const int n = 1 + static_cast<int>(rng.uniform() * 100);
        std::vector<Observation> obs;
        for (int i = 0; i < n; ++i)
          obs.push_back({std::round(sample_gamma(2.0, 1.0, rng) * 20) / 20 + 0.05, Status::Event});
        const auto km = km_fit(SurvivalSample(obs));
        for (const auto& o : obs) {
          std::size_t le = 0;
          for (const auto& x : obs) le += x.time <= o.time;
          // (n - le) / n is the correctly rounded value of 1 - ECDF.
          if (km(o.time) != static_cast<double>(n - static_cast<int>(le)) / n) ++bad;
        }
      }
      part("a", bad == 0, fmt("%zu mismatches over 500 samples", bad));
    }
    {  // (b)
      RngStream rng(602, 1);
      std::vector<Observation> obs;
      for (int i = 0; i < 2000; ++i) obs.push_back({sample_gamma(2.0, 1.0, rng), Status::Event});
      const SurvivalSample s(obs);
      const auto km = km_fit(s);
      const KmKernelDensity f(s, default_bandwidth(s));
      const auto grid = build_grid(s.max_time(), 100);
      const auto a = a_integral(s, grid, f);
      double worst = 0.0;
      std::size_t checked = 0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.points[i];
        const double sv = km(t);
        if (t < 0.5 || sv < 0.1) continue;  // interior: away from the origin and the sparse tail
        worst = std::max(worst, std::fabs(a[i] / (1.0 / sv - 1.0) - 1.0));
        ++checked;
      }
      part("b", worst <= 0.05 && checked >= 20, fmt("max rel err %.4f over %zu points", worst, checked));
    }
    {  // (c)
      RngStream gen(603, 1), rng(603, 2);
      int bad = 0;
      double worst = 0.0;
      for (int rep = 0; rep < 50; ++rep) {
        const auto c = random_cov(20, gen, rep % 2 == 0);
        const double delta = (0.8 + 1.2 * gen.uniform()) * std::sqrt(c.diagonal().maxCoeff());
        const auto q = mvn_upper_tail_sup(c, delta, rng);
        const auto mc = mc_sup_prob(c, delta, 20000, rng);
        const double se = std::hypot(q.error / kMvnErrorZ, mc.std_error);
        const double z = se > 0 ? std::fabs(q.probability - mc.probability) / se : 0.0;
        worst = std::max(worst, z);
        bad += z > 3.0;
      }
      part("c", bad == 0, fmt("max |z| %.2f over 50 covariances", worst));
    }
    {  // (d)
      RngStream rng(604, 1);
      int bad = 0;
      for (int rep = 0; rep < 20; ++rep) {
        const int k = 2 + rep;
        Eigen::MatrixXd c = Eigen::MatrixXd::Zero(k, k);
        double exact = 1.0;
        const double delta = 0.5 + rng.uniform();
        for (int i = 0; i < k; ++i) {
          c(i, i) = 0.2 + rng.uniform();
          exact *= std_normal_cdf(delta / std::sqrt(c(i, i)));
        }
        const auto r = mvn_upper_tail_sup(c, delta, rng);
        bad += std::fabs(r.probability - (1.0 - exact)) > std::max(r.error, 1e-12);
      }
      part("d", bad == 0, fmt("%d of 20 outside reported error", bad));
    }
    {  // (e)
      bool ok = true;
      for (const auto& [file, g1, g2] : {std::tuple{"lung.csv", "male", "female"},
                                         std::tuple{"kidney.csv", "surgical", "percutaneous"}}) {
        const auto [a, b] = load(file, g1, g2);
        for (auto v : kAllWlrVariants) {
          const auto ab = weighted_logrank(a, b, v), ba = weighted_logrank(b, a, v);
          ok = ok && std::fabs(ab.statistic - ba.statistic) <= 1e-12 * std::max(1.0, ab.statistic) &&
               std::fabs(ab.p - ba.p) <= 1e-12 && std::fabs(ab.score + ba.score) <= 1e-9 * std::max(1.0, std::fabs(ab.score));
        }
      }
      part("e", ok, "10 statistic pairs");
    }
    {  // (f)
      const bool same_single = kidney_json(7) == kidney_json(7);
      const bool same_table = table_json(11) == table_json(11);
      part("f", same_single && same_table, "dominance+classical JSON and rejection table");
    }
    std::string detail;
    for (std::size_t i = 0; i < parts.size(); ++i) detail += (i ? "; " : "") + parts[i];
    report(6, all, title, detail);
  });
}

void criterion_power() {
  const char* title = "power grows with n and falls with censoring (Case 3, R=200)";
  run_guarded(7, title, [&] {
    const std::vector<std::size_t> ns{50, 100, 200};
    const std::vector<CensorTarget> targets{CensorTarget::P20, CensorTarget::P50};
    std::vector<Scenario> scen;
    for (auto c : targets)
      for (auto n : ns) scen.push_back(reference_case(3, c, n));
    const std::vector<double> alphas{0.05};
    constexpr double R = 200;
    const auto t0 = Clock::now();
    const auto table = rejection_table(scen, 200, 20240502, alphas);
    auto rate = [&](std::size_t ci, std::size_t ni) { return table.rows[ci * ns.size() + ni].rates[0]; };

    bool ok = true;
    std::string detail;
    for (std::size_t ci = 0; ci < targets.size(); ++ci) {
      int inversions = 0;
      bool large = false;
      for (std::size_t ni = 0; ni + 1 < ns.size(); ++ni) {
        const double a = rate(ci, ni), b = rate(ci, ni + 1);
        if (b < a) {
          ++inversions;
          large = large || (a - b) > 2 * std::hypot(binom_se(a, R), binom_se(b, R));
        }
      }
      ok = ok && inversions <= 1 && !large;
      detail += fmt("%s %.3f/%.3f/%.3f; ", std::string(to_string(targets[ci])).c_str(), rate(ci, 0), rate(ci, 1),
                    rate(ci, 2));
    }
    for (std::size_t ni = 0; ni < ns.size(); ++ni) {
      const double p20 = rate(0, ni), p50 = rate(1, ni);
      ok = ok && p50 <= p20 + 2 * std::hypot(binom_se(p20, R), binom_se(p50, R));
    }
    detail += fmt("n=50/100/200, %.0fs", seconds_since(t0));
    report(7, ok, title, detail);
  });
}

}  // namespace

int main() {
  criterion_dataset(1, "lung dominance", "lung.csv", "male", "female", -0.0375,
                    [](double p) { return p >= 0.95; }, ">=0.95");
  criterion_dataset(2, "kidney dominance", "kidney.csv", "percutaneous", "surgical", 3.1305,
                    [](double p) { return p <= 0.01; }, "<=0.01");
  const double lung_stat[5] = {10.3267, 12.4721, 12.4555, 12.7078, 12.7091};
  const double lung_p[5] = {0.0013, 0.0004, 0.0004, 0.0003, 0.0003};
  criterion_classical(3, "classical tests, lung", "lung.csv", "male", "female", lung_stat, lung_p);
  const double kidney_stat[5] = {2.5295, 0.0020, 0.4027, 1.3991, 1.2759};
  criterion_classical(4, "classical tests, kidney", "kidney.csv", "surgical", "percutaneous", kidney_stat, nullptr);
  criterion_table3();
  criterion_properties();
  criterion_power();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
