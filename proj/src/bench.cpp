#include "zeig/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace zeig {

std::vector<MethodSpec> all_methods(double alpha, double gamma, double tau) {
  const Sense s = sense_of_shift(alpha);
  return {
      {"S-SHOPM", SolveConfig::sshopm(alpha, {})},
      {"ES-SHOPM", SolveConfig::es_sshopm(alpha, gamma, {})},
      {"DES-SHOPM", SolveConfig::des_sshopm(alpha, {})},
      {"GEAP", SolveConfig::geap(s, tau, {})},
      {"DE-GEAP", SolveConfig::de_geap(s, tau, {})},
  };
}

bool same_eigen_class(int order, double lambda_a, double lambda_b, double tol) {
  if (std::abs(lambda_a - lambda_b) < tol) return true;
  return order % 2 == 1 && std::abs(lambda_a + lambda_b) < tol;
}

namespace {

bool row_before(Sense s, double a, double b) { return s == Sense::Convex ? a > b : a < b; }

TrialSummary aggregate(const std::string& name, Sense sense, int order, std::vector<TrialOutcome>& outcomes,
                       std::uint64_t seed) {
  TrialSummary sum;
  sum.method = name;
  sum.total = static_cast<int>(outcomes.size());
  sum.master_seed = seed;
  sum.sense = sense;

  std::vector<std::vector<int>> its;
  for (auto& o : outcomes) {
    if (o.status != Status::Converged) {
      o.row = -1;
      ++sum.non_converged;
      continue;
    }
    std::size_t r = 0;
    while (r < sum.rows.size() && !same_eigen_class(order, sum.rows[r].lambda, o.lambda)) ++r;
    if (r == sum.rows.size()) {
      sum.rows.push_back({o.lambda, o.x, 0, 0});
      its.emplace_back();
    }
    ++sum.rows[r].occurrences;
    its[r].push_back(o.iterations);
    o.row = static_cast<int>(r);
  }
  for (std::size_t r = 0; r < its.size(); ++r) {
    std::sort(its[r].begin(), its[r].end());
    sum.rows[r].median_iterations = its[r][(its[r].size() - 1) / 2];
  }

  std::vector<int> perm(sum.rows.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
    return row_before(sense, sum.rows[a].lambda, sum.rows[b].lambda);
  });
  std::vector<int> where(perm.size());
  std::vector<SummaryRow> sorted;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    where[perm[i]] = static_cast<int>(i);
    sorted.push_back(std::move(sum.rows[perm[i]]));
  }
  sum.rows = std::move(sorted);
  for (auto& o : outcomes)
    if (o.row >= 0) o.row = where[o.row];
  return sum;
}

}  // namespace

Campaign run_trials(const SymmetricTensor& a, const std::vector<MethodSpec>& methods, int trials,
                    std::uint64_t master_seed, unsigned workers) {
  if (trials < 1) throw std::invalid_argument("run_trials: need at least one trial");
  if (methods.empty()) throw std::invalid_argument("run_trials: no methods given");
  const Sense sense = methods.front().config.sense;
  for (const auto& m : methods) {
    if (m.config.sense != sense) throw std::invalid_argument("run_trials: methods disagree on sense");
    m.config.method();
  }

  const std::size_t n = a.dim();
  Campaign out;
  out.starts.reserve(trials);
  for (int t = 0; t < trials; ++t) out.starts.push_back(random_start(n, master_seed, static_cast<std::uint64_t>(t)));
  out.outcomes.assign(methods.size(), std::vector<TrialOutcome>(trials));

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(trials));

  std::atomic<int> next{0};
  auto work = [&] {
    for (int t; (t = next.fetch_add(1)) < trials;) {
      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        TrialOutcome& o = out.outcomes[mi][t];
        SolveConfig cfg = methods[mi].config;
        cfg.x0 = out.starts[t];
        try {
          SolveResult r = solve(a, cfg);
          o.status = r.status();
          o.lambda = r.eigenpair.lambda;
          o.x = std::move(r.eigenpair.x);
          o.iterations = r.iterations();
        } catch (const std::exception&) {
          o.status = Status::Breakdown;
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  for (std::size_t mi = 0; mi < methods.size(); ++mi)
    out.summaries.push_back(aggregate(methods[mi].name, sense, a.order(), out.outcomes[mi], master_seed));
  return out;
}

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string pad(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
}

}  // namespace

std::string render_table(const std::vector<TrialSummary>& summaries, int order) {
  if (summaries.empty()) return {};
  const Sense sense = summaries.front().sense;

  std::vector<double> classes;
  for (const auto& s : summaries)
    for (const auto& r : s.rows) {
      bool seen = false;
      for (double c : classes) seen = seen || same_eigen_class(order, c, r.lambda);
      if (!seen) classes.push_back(r.lambda);
    }
  std::stable_sort(classes.begin(), classes.end(), [&](double x, double y) { return row_before(sense, x, y); });

  constexpr std::size_t lw = 10, cw = 8;
  std::ostringstream os;
  os << std::string(lw, ' ');
  for (const auto& s : summaries) os << pad(s.method, 2 * cw + 2);
  os << '\n' << pad("lambda", lw);
  for (std::size_t i = 0; i < summaries.size(); ++i) os << "  " << pad("Its.", cw) << pad("# Occ.", cw);
  os << '\n';
  for (double c : classes) {
    os << pad(fmt("%.4f", c), lw);
    for (const auto& s : summaries) {
      const SummaryRow* row = nullptr;
      for (const auto& r : s.rows)
        if (same_eigen_class(order, c, r.lambda)) row = &r;
      os << "  " << pad(row ? std::to_string(row->median_iterations) : "-", cw)
         << pad(row ? std::to_string(row->occurrences) : "-", cw);
    }
    os << '\n';
  }
  os << pad("n/c", lw);
  for (const auto& s : summaries) os << "  " << pad("", cw) << pad(std::to_string(s.non_converged), cw);
  os << '\n'
     << "trials " << summaries.front().total << ", seed " << summaries.front().master_seed << '\n';
  return os.str();
}

nlohmann::json to_json(const TrialSummary& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : s.rows)
    rows.push_back({{"lambda", r.lambda},
                    {"lambda_4dp", fmt("%.4f", r.lambda)},
                    {"x", r.x},
                    {"occurrences", r.occurrences},
                    {"median_iterations", r.median_iterations}});
  return {{"method", s.method},     {"sense", to_string(s.sense)},        {"total", s.total},
          {"non_converged", s.non_converged}, {"master_seed", s.master_seed}, {"rows", rows}};
}

nlohmann::json to_json(const SolveConfig& c) {
  nlohmann::json j;
  j["method"] = to_string(c.method());
  if (const auto* st = std::get_if<StaticShift>(&c.shift))
    j["shift"] = {{"type", "static"}, {"alpha", st->alpha}};
  else
    j["shift"] = {{"type", "adaptive"}, {"tau", std::get<AdaptiveShift>(c.shift).tau}};
  if (const auto* g = std::get_if<StaticGamma>(&c.gamma))
    j["gamma"] = {{"type", "static"}, {"gamma", g->gamma}};
  else if (std::holds_alternative<DynamicGamma>(c.gamma))
    j["gamma"] = {{"type", "dynamic"}};
  else
    j["gamma"] = {{"type", "none"}};
  j["sense"] = to_string(c.sense);
  j["tol"] = c.tol;
  j["max_iters"] = c.max_iters;
  j["x0"] = c.x0;
  j["polish"] = c.polish;
  return j;
}

nlohmann::json to_json(const Eigenpair& p) {
  nlohmann::json j = {{"lambda", p.lambda}, {"x", p.x}, {"residual", p.residual}};
  j["classification"] = p.stability ? nlohmann::json(to_string(*p.stability)) : nlohmann::json(nullptr);
  return j;
}

namespace {

template <class T>
nlohmann::json opt(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const RateReport& r) {
  nlohmann::json curve = nlohmann::json::array();
  for (const auto& [g, rho] : r.rho_gamma_curve) curve.push_back({g, rho});
  return {{"alpha", r.alpha},
          {"gamma", r.gamma},
          {"eigenpair", to_json(r.eigenpair)},
          {"rho", r.rho},
          {"gamma_opt", opt(r.gamma_opt)},
          {"rho_opt", opt(r.rho_opt)},
          {"predicted", opt(r.predicted)},
          {"measured_rate", opt(r.measured_rate)},
          {"measured_geometric_mean", opt(r.measured_geometric_mean)},
          {"oscillatory", r.oscillatory},
          {"converged", r.converged},
          {"iterations", r.iterations},
          {"rho_gamma_curve", curve}};
}

RateExperiment rate_experiment(const SymmetricTensor& a, double alpha, std::vector<double> x0,
                               std::vector<double> gamma_grid) {
  RateExperiment ex;
  ex.base = sshopm(a, SolveConfig::sshopm(alpha, x0));
  if (ex.base.status() != Status::Converged)
    throw std::runtime_error("rate_experiment: base S-SHOPM run did not converge (" + to_string(ex.base.status()) + ")");
  const Eigenpair& pair = ex.base.eigenpair;

  if (gamma_grid.empty()) {
    const RateReport probe = predict_rates(a, pair, alpha, 0.0, 0);
    if (!probe.gamma_opt) throw std::runtime_error("rate_experiment: base rate outside (0, 1), no gamma_opt");
    gamma_grid = {0.0, *probe.gamma_opt / 2.0, *probe.gamma_opt};
  }

  for (double g : gamma_grid) {
    RateReport rep = predict_rates(a, pair, alpha, g);
    SolveResult run;
    try {
      run = es_sshopm(a, SolveConfig::es_sshopm(alpha, g, x0));
      rep.converged = run.status() == Status::Converged;
      rep.iterations = run.iterations();
    } catch (const std::exception&) {
      rep.converged = false;
    }
    if (rep.converged) {
      const auto hist = residual_history(run.trace);
      const RateEstimate est = estimate_rate(hist);
      rep.measured_rate = est.rate;
      rep.measured_geometric_mean = est.geometric_mean;
    }
    ex.points.push_back(std::move(rep));
  }
  return ex;
}

GraphSpec parse_graph(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::size_t rows = 0;
  std::set<std::pair<std::size_t, std::size_t>> edges;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    std::istringstream ls(line);
    if (!have_header) {
      std::size_t cols = 0, nnz = 0;
      if (!(ls >> rows >> cols >> nnz)) throw std::runtime_error("graph: bad header on line " + std::to_string(lineno));
      if (rows != cols) throw std::runtime_error("graph: adjacency matrix is not square");
      have_header = true;
      continue;
    }
    long long i = 0, j = 0;
    if (!(ls >> i >> j)) throw std::runtime_error("graph: bad entry on line " + std::to_string(lineno));
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > rows || static_cast<std::size_t>(j) > rows)
      throw std::runtime_error("graph: index out of range on line " + std::to_string(lineno));
    if (i == j) continue;
    const auto u = static_cast<std::size_t>(std::min(i, j) - 1);
    const auto v = static_cast<std::size_t>(std::max(i, j) - 1);
    edges.emplace(u, v);
  }
  if (!have_header) throw std::runtime_error("graph: missing header");
  return {rows, {edges.begin(), edges.end()}};
}

GraphSpec read_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path + ": " + std::strerror(errno));
  return parse_graph(in);
}

namespace {

template <class F>
void for_each_triangle(const GraphSpec& g, F&& f) {
  std::vector<std::vector<std::size_t>> up(g.nodes);
  for (const auto& [u, v] : g.edges) up[u].push_back(v);
  for (auto& l : up) std::sort(l.begin(), l.end());
  for (std::size_t i = 0; i < g.nodes; ++i)
    for (std::size_t j : up[i]) {
      // k > j adjacent to both i and j
      auto a = std::upper_bound(up[i].begin(), up[i].end(), j);
      auto b = up[j].begin();
      while (a != up[i].end() && b != up[j].end()) {
        if (*a < *b) ++a;
        else if (*b < *a) ++b;
        else {
          f(i, j, *a);
          ++a;
          ++b;
        }
      }
    }
}

}  // namespace

std::size_t count_triangles(const GraphSpec& g) {
  std::size_t count = 0;
  for_each_triangle(g, [&](std::size_t, std::size_t, std::size_t) { ++count; });
  return count;
}

SymmetricTensor graph_to_tensor(const GraphSpec& g) {
  EntryList list{3, g.nodes, {}};
  for_each_triangle(g, [&](std::size_t i, std::size_t j, std::size_t k) { list.entries.push_back({{i, j, k}, 1.0}); });
  std::sort(list.entries.begin(), list.entries.end(),
            [](const Entry& a, const Entry& b) { return a.index < b.index; });
  return SymmetricTensor::from_entries(list);
}

namespace {

std::string csv_num(double v) { return std::isnan(v) ? std::string() : fmt("%.17g", v); }

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot open " + p.string() + ": " + std::strerror(errno));
  return f;
}

}  // namespace

void write_trace_csv(std::ostream& out, const SolveTrace& trace) {
  out << "k,lambda,residual,alpha_k,gamma_k\n";
  for (const auto& r : trace.records)
    out << r.k << ',' << csv_num(r.lambda) << ',' << csv_num(r.residual) << ',' << csv_num(r.alpha) << ','
        << csv_num(r.gamma) << '\n';
}

void export_traces(const std::vector<RunRecord>& runs, const std::string& dir) {
  const std::filesystem::path root(dir);
  std::filesystem::create_directories(root);
  for (const auto& run : runs) {
    {
      auto f = open_out(root / (run.name + ".csv"));
      write_trace_csv(f, run.result.trace);
      if (!f) throw std::runtime_error("write failed: " + (root / (run.name + ".csv")).string());
    }
    nlohmann::json side = {{"name", run.name},
                           {"config", to_json(run.config)},
                           {"status", to_string(run.result.status())},
                           {"iterations", run.result.iterations()},
                           {"polish_steps", run.result.polish_steps},
                           {"eigenpair", to_json(run.result.eigenpair)}};
    side["classification"] = side["eigenpair"]["classification"];
    side["rate"] = run.rate ? to_json(*run.rate) : nlohmann::json(nullptr);
    auto f = open_out(root / (run.name + ".json"));
    f << side.dump(2) << '\n';
    if (!f) throw std::runtime_error("write failed: " + (root / (run.name + ".json")).string());
  }
}

}  // namespace zeig
