// Acceptance suite. One PASS/FAIL line per criterion, nonzero exit if any
// of them fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "zeig/bench.hpp"
#include "zeig/denselin.hpp"
#include "zeig/iterate.hpp"
#include "zeig/rateth.hpp"
#include "zeig/symtensor.hpp"

using namespace zeig;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& what) {
  std::printf("%s %d: %s\n", ok ? "PASS" : "FAIL", n, what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string dp4(double v) {
  std::string s = fmt("%.4f", v);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int lower_median(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) / 2];
}

// Paper table: per eigenvalue, medians for S, ES, DES, GEAP, DE-GEAP.
struct PaperRow {
  const char* lambda;
  int its[5];
};

struct Setting {
  const char* label;
  SymmetricTensor tensor;
  double alpha;
  double gamma;
  std::vector<PaperRow> table;
  Campaign campaign;
  double seconds = 0.0;
};

std::set<std::string> lambda_set(const TrialSummary& s) {
  std::set<std::string> out;
  for (const auto& r : s.rows) out.insert(dp4(r.lambda));
  return out;
}

std::string join(const std::set<std::string>& s) {
  std::string out = "{";
  for (const auto& v : s) out += (out.size() > 1 ? ", " : "") + v;
  return out + "}";
}

const SummaryRow* find_row(const TrialSummary& s, const std::string& lambda) {
  for (const auto& r : s.rows)
    if (dp4(r.lambda) == lambda) return &r;
  return nullptr;
}

SymMatrix random_psd(std::size_t n, double top, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, top);
  Matrix q(n, n);
  for (double& v : q.data()) v = g(rng);
  const auto basis = eigh(SymMatrix(q + q.transposed())).vectors;
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = u(rng);
  return SymMatrix(basis * d * basis.transposed());
}

SymMatrix to_sym(const oracle::Mat& a) {
  Matrix m(a.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) m(i, j) = a[i][j];
  return SymMatrix(m);
}

std::string graph_path(bool& real) {
  if (const char* env = std::getenv("DOLPHINS_MTX"); env && *env) {
    real = true;
    return env;
  }
  const std::string local = std::string(ZEIG_DATA_DIR) + "/dolphins.mtx";
  real = std::filesystem::exists(local);
  return real ? local : std::string(ZEIG_DATA_DIR) + "/synthetic62.mtx";
}

}  // namespace

int main() {
  constexpr int kTrials = 1000;
  constexpr std::uint64_t kSeed = 42;
  constexpr double kTau = 1e-6;

  std::vector<Setting> settings;
  settings.push_back({"ex1 convex", fixtures::example1(), 1.0, -0.30,
                      {{"0.8730", {29, 20, 18, 13, 11}},
                       {"0.4306", {47, 24, 25, 24, 16}},
                       {"0.0180", {107, 72, 42, 41, 23}},
                       {"-0.0006", {135, 92, 48, 17, 13}}},
                      {}});
  settings.push_back({"ex1 concave", fixtures::example1(), -1.0, -0.50,
                      {{"-0.8730", {29, 27, 18, 13, 10}},
                       {"-0.4306", {47, 31, 25, 24, 16}},
                       {"-0.0180", {107, 36, 41, 41, 22}},
                       {"0.0006", {134, 52, 48, 17, 13}}},
                      {}});
  settings.push_back({"ex2 convex", fixtures::example2(), 2.0, -0.35,
                      {{"0.8893", {52, 29, 26, 32, 20}},
                       {"0.8169", {45, 26, 24, 34, 20}},
                       {"0.3633", {59, 26, 28, 25, 17}}},
                      {}});
  settings.push_back({"ex2 concave", fixtures::example2(), -2.0, -0.20,
                      {{"-0.0451", {34, 24, 20, 18, 13}},
                       {"-0.5629", {19, 15, 14, 17, 13}},
                       {"-1.0954", {20, 15, 15, 17, 13}}},
                      {}});

  for (auto& s : settings) {
    const auto t0 = std::chrono::steady_clock::now();
    s.campaign = run_trials(s.tensor, all_methods(s.alpha, s.gamma, kTau), kTrials, kSeed);
    s.seconds = seconds_since(t0);
    std::printf("# %s: alpha %g gamma %g, %d trials seed %llu, %.2f s\n%s", s.label, s.alpha, s.gamma, kTrials,
                static_cast<unsigned long long>(kSeed), s.seconds,
                render_table(s.campaign.summaries, s.tensor.order()).c_str());
  }

  // 1, 2: eigenvalue sets found by S-SHOPM.
  {
    const std::set<std::string> want[4] = {{"0.8730", "0.4306", "0.0180", "-0.0006"},
                                           {"-0.8730", "-0.4306", "-0.0180", "0.0006"},
                                           {"0.8893", "0.8169", "0.3633"},
                                           {"-0.0451", "-0.5629", "-1.0954"}};
    for (int c = 0; c < 2; ++c) {
      bool ok = true;
      std::string detail;
      for (int k = 2 * c; k < 2 * c + 2; ++k) {
        const auto got = lambda_set(settings[k].campaign.summaries[0]);
        ok = ok && got == want[k];
        detail += fmt("%s %s; ", settings[k].label, join(got).c_str());
      }
      const double secs = settings[2 * c].seconds + settings[2 * c + 1].seconds;
      const double limit = c == 0 ? 60.0 : 90.0;
      ok = ok && secs < limit;
      report(c + 1, ok, detail + fmt("%.2f s (limit %.0f s)", secs, limit));
    }
  }

  // 3: S-SHOPM and ES-SHOPM land in the same class from each start.
  {
    bool ok = true;
    std::string detail;
    for (const auto& s : settings) {
      int both = 0, same = 0;
      const auto& os = s.campaign.outcomes[0];
      const auto& oe = s.campaign.outcomes[1];
      for (int t = 0; t < kTrials; ++t) {
        if (os[t].status != Status::Converged || oe[t].status != Status::Converged) continue;
        ++both;
        if (same_eigen_class(s.tensor.order(), os[t].lambda, oe[t].lambda))
          ++same;
        else
          detail += fmt("(trial %d: S %.4f in %d, ES %.4f in %d) ", t, os[t].lambda, os[t].iterations, oe[t].lambda,
                        oe[t].iterations);
      }
      ok = ok && both > 0 && same == both;
      detail += fmt("%s %d/%d; ", s.label, same, both);
    }
    report(3, ok, detail);
  }

  // 4: iteration ordering and closeness to the tabled medians.
  {
    bool ok = true;
    std::string detail;
    int worst_row = 0;
    double worst = 0.0;
    for (const auto& s : settings) {
      for (const auto& pr : s.table) {
        int med[5];
        bool present = true;
        for (int m = 0; m < 5; ++m) {
          const auto* row = find_row(s.campaign.summaries[m], pr.lambda);
          if (!row) {
            present = false;
            break;
          }
          med[m] = row->median_iterations;
        }
        if (!present) {
          ok = false;
          detail += fmt("%s row %s missing; ", s.label, pr.lambda);
          continue;
        }
        const bool order = med[4] <= med[3] && med[2] <= med[0] && med[1] <= med[0];
        if (!order) {
          ok = false;
          detail += fmt("%s row %s ordering S %d ES %d DES %d GEAP %d DE %d; ", s.label, pr.lambda, med[0], med[1],
                        med[2], med[3], med[4]);
        }
        for (int m = 0; m < 5; ++m) {
          const double rel = std::abs(med[m] - pr.its[m]) / static_cast<double>(pr.its[m]);
          if (rel > worst) {
            worst = rel;
            worst_row = m;
          }
          if (rel > 0.30) {
            ok = false;
            detail += fmt("%s row %s %s median %d vs %d; ", s.label, pr.lambda,
                          s.campaign.summaries[m].method.c_str(), med[m], pr.its[m]);
          }
        }
      }
    }
    detail += fmt("largest median deviation %.1f%% (%s)", 100.0 * worst,
                  settings[0].campaign.summaries[worst_row].method.c_str());
    report(4, ok, detail);
  }

  // 5, 6: measured rates against theory.
  {
    struct Case {
      const char* label;
      SymmetricTensor a;
      double alpha;
      std::vector<double> x0;
    };
    const Case cases[] = {{"ex1", fixtures::example1(), 1.0, fixtures::ex1_start_08730()},
                          {"ex2", fixtures::example2(), 2.0, fixtures::ex2_start_03633()}};
    bool ok5 = true, ok6 = true;
    std::string d5, d6;
    for (const auto& c : cases) {
      RateExperiment ex;
      try {
        ex = rate_experiment(c.a, c.alpha, c.x0);
      } catch (const std::exception& e) {
        ok5 = ok6 = false;
        d5 += fmt("%s: %s; ", c.label, e.what());
        continue;
      }
      d5 += fmt("%s lambda %.4f rho %.6f:", c.label, ex.base.eigenpair.lambda, ex.points.front().rho);
      for (std::size_t i = 0; i < ex.points.size(); ++i) {
        const auto& p = ex.points[i];
        if (!p.converged || !p.measured_rate || !p.predicted) {
          ok5 = false;
          d5 += fmt(" gamma %.4f no rate;", p.gamma);
          continue;
        }
        const double rel = std::abs(*p.measured_rate - *p.predicted) / *p.predicted;
        ok5 = ok5 && rel <= 0.05;
        d5 += fmt(" gamma %.4f measured %.5f predicted %.5f (%.2f%%);", p.gamma, *p.measured_rate, *p.predicted,
                  100.0 * rel);
        if (p.gamma == 0.0) ok5 = ok5 && std::abs(*p.measured_rate - p.rho) <= 0.05 * p.rho;
        if (i + 1 == ex.points.size()) {
          const bool have = p.rho_opt.has_value();
          const double r6 = have ? std::abs(*p.measured_rate - *p.rho_opt) / *p.rho_opt : 1.0;
          ok6 = ok6 && have && r6 <= 0.05;
          d6 += fmt("%s gamma_opt %.5f measured %.5f vs %.5f (%.2f%%); ", c.label, p.gamma, *p.measured_rate,
                    have ? *p.rho_opt : 0.0, 100.0 * r6);
        }
      }
      d5 += " ";
    }
    report(5, ok5, d5);
    report(6, ok6, d6);
  }

  // 7: block matrix spectrum against the closed-form roots.
  {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(7001);
    std::uniform_int_distribution<int> un(1, 8);
    std::uniform_real_distribution<double> ug(-1.0, 0.0);
    double worst_match = 0.0, worst_radius = 0.0;
    for (int t = 0; t < 100; ++t) {
      const std::size_t n = un(rng);
      const SymMatrix j = random_psd(n, 0.99, rng);
      double g = ug(rng);
      if (g <= -1.0) g = 0.0;
      const auto ev = eig_general(augmented_jacobian(j, g));
      std::vector<std::complex<double>> want;
      for (double mu : eigh(j).values)
        for (const auto& r : augmented_roots(mu, g)) want.push_back(r);
      // greedy nearest matching
      std::vector<bool> used(ev.size(), false);
      for (const auto& w : want) {
        double best = 1e300;
        std::size_t at = 0;
        for (std::size_t i = 0; i < ev.size(); ++i)
          if (!used[i] && std::abs(ev[i] - w) < best) {
            best = std::abs(ev[i] - w);
            at = i;
          }
        used[at] = true;
        worst_match = std::max(worst_match, best);
      }
      double radius = 0.0;
      for (const auto& z : ev) radius = std::max(radius, std::abs(z));
      worst_radius = std::max(worst_radius, std::abs(radius - rho_gamma(lambda_max(j), g)));
    }
    const double secs = seconds_since(t0);
    report(7, worst_match <= 1e-9 && worst_radius <= 1e-9 && secs < 10.0,
           fmt("100 cases, worst root error %.2e, worst radius error %.2e, %.3f s", worst_match, worst_radius, secs));
  }

  // 8: gamma = 0 reduces to the plain iteration.
  {
    std::mt19937_64 rng(8008);
    std::uniform_int_distribution<int> um(3, 4), un(2, 6);
    double worst = 0.0;
    bool lengths = true;
    for (int t = 0; t < 50; ++t) {
      const int m = um(rng);
      const std::size_t n = un(rng);
      const auto a = fixtures::random_tensor(m, n, rng);
      const double alpha = suggest_shift(a, 2000, 1000 + t);
      const auto x0 = random_start(n, 8008, t);
      const auto rs = sshopm(a, SolveConfig::sshopm(alpha, x0));
      const auto re = es_sshopm(a, SolveConfig::es_sshopm(alpha, 0.0, x0));
      if (rs.trace.records.size() != re.trace.records.size()) {
        lengths = false;
        continue;
      }
      for (std::size_t k = 0; k < rs.trace.records.size(); ++k)
        worst = std::max(worst, std::abs(rs.trace.records[k].lambda - re.trace.records[k].lambda));
    }
    report(8, lengths && worst <= 1e-15, fmt("50 instances, equal lengths %s, worst step difference %.2e",
                                             lengths ? "yes" : "no", worst));
  }

  // 9: converged pairs satisfy the eigen-equation and are unit vectors.
  {
    double worst_res = 0.0, worst_norm = 0.0;
    int count = 0;
    for (const auto& s : settings)
      for (const auto& per_method : s.campaign.outcomes)
        for (const auto& o : per_method) {
          if (o.status != Status::Converged) continue;
          ++count;
          worst_res = std::max(worst_res, eigen_residual(s.tensor, o.lambda, o.x));
          worst_norm = std::max(worst_norm, std::abs(norm2(o.x) - 1.0));
        }
    report(9, count > 0 && worst_res <= 1e-10 && worst_norm <= 1e-14,
           fmt("%d converged runs, worst residual %.2e, worst norm error %.2e", count, worst_res, worst_norm));
  }

  // 10: adaptive shift keeps the convexity margin at every step.
  {
    double worst = 1e300;
    long steps = 0;
    for (const auto& s : settings) {
      const int m = s.tensor.order();
      const Sense sense = sense_of_shift(s.alpha);
      const double chi = static_cast<double>(static_cast<int>(sense));
      for (int t = 0; t < kTrials; ++t) {
        const auto& x0 = s.campaign.starts[t];
        for (const auto& cfg : {SolveConfig::geap(sense, kTau, x0), SolveConfig::de_geap(sense, kTau, x0)}) {
          const auto r = solve(s.tensor, cfg);
          const auto& rec = r.trace.records;
          for (std::size_t k = 1; k < rec.size(); ++k) {
            const auto c = s.tensor.contract_all(rec[k - 1].x);
            Matrix scaled = (chi * m * (m - 1)) * c.matrix.matrix();
            const double margin = lambda_min(SymMatrix(scaled)) + m * chi * rec[k].alpha;
            worst = std::min(worst, margin - kTau);
            ++steps;
          }
        }
      }
    }
    report(10, steps > 0 && worst >= -1e-12, fmt("%ld steps, smallest margin minus tau %.3e", steps, worst));
  }

  // 11: symmetric eigensolver against independent oracles.
  {
    std::mt19937_64 rng(1111);
    double worst_cubic = 0.0, worst_power = 0.0;
    for (int t = 0; t < 200; ++t) {
      const auto a = oracle::random_symmetric(3, rng);
      const auto ref = oracle::cubic_eigenvalues(a);
      const auto got = eigh(to_sym(a)).values;
      for (int i = 0; i < 3; ++i) worst_cubic = std::max(worst_cubic, std::abs(got[i] - ref[i]));
    }
    std::uniform_int_distribution<int> un(1, 10);
    for (int t = 0; t < 200; ++t) {
      const auto a = oracle::random_symmetric(un(rng), rng);
      const auto [lo, hi] = oracle::power_extremes(a);
      const auto s = to_sym(a);
      worst_power = std::max({worst_power, std::abs(lambda_min(s) - lo), std::abs(lambda_max(s) - hi),
                              std::abs(spectral_radius(s) - std::max(std::abs(lo), std::abs(hi)))});
    }
    report(11, worst_cubic <= 1e-10 && worst_power <= 1e-10,
           fmt("200 cubic cases worst %.2e, 200 power cases worst %.2e", worst_cubic, worst_power));
  }

  // 12: the convex static iteration never decreases lambda.
  {
    double worst = 0.0;
    int runs = 0;
    for (int k = 0; k < 2; ++k) {
      const auto& s = settings[k];
      if (s.alpha <= 0.0) continue;
      for (int t = 0; t < kTrials; ++t) {
        const auto r = sshopm(s.tensor, SolveConfig::sshopm(s.alpha, s.campaign.starts[t]));
        ++runs;
        const auto& rec = r.trace.records;
        for (std::size_t i = 1; i < rec.size(); ++i) worst = std::min(worst, rec[i].lambda - rec[i - 1].lambda);
      }
    }
    report(12, runs > 0 && worst >= -1e-12, fmt("%d runs, most negative step %.3e", runs, worst));
  }

  // 13: triangle tensor of a 62-node graph, and the K3 fixture.
  {
    bool real = false;
    const std::string path = graph_path(real);
    bool ok = true;
    std::string detail;
    try {
      const auto g = read_graph(path);
      const auto a = graph_to_tensor(g);
      const double alpha = suggest_shift(a, 10000, 0);
      detail += fmt("%s (%zu nodes, %zu edges, %zu triangles), alpha %.4f: ",
                    real ? "dolphins" : "synthetic stand-in", g.nodes, g.edges.size(), count_triangles(g), alpha);
      std::vector<int> its_s, its_e;
      int failed = 0;
      for (int t = 0; t < 20; ++t) {
        const auto x0 = random_start(a.dim(), kSeed, t);
        const auto base = sshopm(a, SolveConfig::sshopm(alpha, x0));
        if (base.status() != Status::Converged) {
          ++failed;
          detail += fmt("start %d S-SHOPM %s; ", t, to_string(base.status()).c_str());
          continue;
        }
        const auto rates = predict_rates(a, base.eigenpair, alpha, 0.0);
        if (!rates.gamma_opt) {
          ++failed;
          detail += fmt("start %d rho %.6f outside (0,1); ", t, rates.rho);
          continue;
        }
        const auto es = es_sshopm(a, SolveConfig::es_sshopm(alpha, *rates.gamma_opt, x0));
        if (es.status() != Status::Converged) {
          ++failed;
          detail += fmt("start %d ES-SHOPM %s (gamma %.5f, rho %.6f); ", t, to_string(es.status()).c_str(),
                        *rates.gamma_opt, rates.rho);
          continue;
        }
        its_s.push_back(base.iterations());
        its_e.push_back(es.iterations());
      }
      ok = failed == 0 && !its_s.empty();
      if (failed > 0) detail += fmt("%d of 20 starts failed; ", failed);
      if (!its_s.empty()) {
        const int ms = lower_median(its_s), me = lower_median(its_e);
        ok = ok && me < ms;
        detail += fmt("median iterations over %zu paired runs S-SHOPM %d, ES-SHOPM %d; ", its_s.size(), ms, me);
      }
    } catch (const std::exception& e) {
      ok = false;
      detail += fmt("%s: %s; ", path.c_str(), e.what());
    }
    try {
      const auto k3 = graph_to_tensor(read_graph(std::string(ZEIG_DATA_DIR) + "/k3.mtx"));
      const auto r = sshopm(k3, SolveConfig::sshopm(1.0, fixtures::unit({1.0, 2.0, 3.0})));
      const double s = 1.0 / std::sqrt(3.0);
      double err = std::abs(r.eigenpair.lambda - 2.0 * s);
      for (double v : r.eigenpair.x) err = std::max(err, std::abs(v - s));
      ok = ok && r.status() == Status::Converged && err <= 1e-12;
      detail += fmt("K3 error %.2e", err);
    } catch (const std::exception& e) {
      ok = false;
      detail += fmt("K3: %s", e.what());
    }
    report(13, ok, detail);
  }

  // 14: stability classes.
  {
    bool ok = true;
    std::string detail;
    const auto [pair, st] = refine_and_classify(fixtures::example2(), 0.5105, {0.3598, -0.7780, 0.5150});
    ok = ok && st == Stability::Unstable && dp4(pair.lambda) == "0.5105";
    detail += fmt("lambda %.4f %s; ", pair.lambda, to_string(st).c_str());
    for (const auto& s : settings) {
      const Stability want = s.alpha > 0 ? Stability::NegativeStable : Stability::PositiveStable;
      int total = 0, good = 0;
      for (const auto& per_method : s.campaign.outcomes)
        for (const auto& o : per_method) {
          if (o.status != Status::Converged) continue;
          ++total;
          try {
            good += classify(s.tensor, o.lambda, o.x) == want;
          } catch (const std::exception&) {
          }
        }
      ok = ok && total > 0 && good == total;
      detail += fmt("%s %d/%d %s; ", s.label, good, total, to_string(want).c_str());
    }
    report(14, ok, detail);
  }

  std::printf("%d of 14 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
