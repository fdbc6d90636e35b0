// zeig: command-line front end for the Z-eigenpair solvers.
//
//   zeig solve  --tensor T --method M [--alpha A|auto] [--gamma G|opt|dynamic] ...
//   zeig trials --tensor T (--all-methods | --method M) --trials N --seed S ...
//   zeig rate   --tensor T --alpha A --start X [--gamma-grid g1,g2,...]
//   zeig graph  --graph G.mtx [--out-tensor T.tns]
//
// Exit codes: 0 converged / campaign complete, 2 non-convergence, 1 usage or IO error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "zeig/bench.hpp"
#include "zeig/iterate.hpp"
#include "zeig/rateth.hpp"
#include "zeig/symtensor.hpp"

namespace {

using namespace zeig;

constexpr int kBetaSamples = 10000;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CliConfig {
  std::string tensor;
  std::string method = "sshopm";
  std::string alpha;
  std::string gamma;
  std::string sense;
  std::optional<double> tau;
  double tol = 1e-15;
  int max_iters = 1000;
  int trials = 1000;
  std::uint64_t seed = 42;
  std::string start;
  std::string out;
  std::string format = "table";
  bool all_methods = false;
  unsigned workers = 0;
  std::string gamma_grid;
  std::string graph;
  std::string out_tensor;
};

std::string num(double v, const char* f = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string vec(const std::vector<double>& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + num(x[i], "%.6f");
  return s + ")";
}

std::vector<double> parse_list(const std::string& text) {
  std::string t = text;
  for (char& ch : t)
    if (ch == ',' || ch == ';') ch = ' ';
  std::istringstream is(t);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw UsageError("not a number: '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

double parse_real(const std::string& text, const char* what) {
  const auto v = parse_list(text);
  if (v.size() != 1) throw UsageError(std::string(what) + " expects one number, got '" + text + "'");
  return v[0];
}

// Inline list, or a file holding whitespace/comma separated numbers.
std::vector<double> parse_start(const std::string& text, std::size_t n) {
  std::vector<double> x;
  if (std::filesystem::is_regular_file(text)) {
    std::ifstream in(text);
    if (!in) throw std::runtime_error("cannot open " + text);
    std::stringstream ss;
    ss << in.rdbuf();
    x = parse_list(ss.str());
  } else {
    x = parse_list(text);
  }
  if (x.size() != n)
    throw UsageError("start vector has " + std::to_string(x.size()) + " entries, tensor dimension is " +
                     std::to_string(n));
  const double nx = norm2(x);
  if (!(nx > 0.0) || !std::isfinite(nx)) throw UsageError("start vector must be finite and nonzero");
  for (double& xi : x) xi /= nx;
  return x;
}

bool is_static(const std::string& m) { return m == "sshopm" || m == "es" || m == "des"; }

Sense parse_sense(const std::string& s) {
  if (s == "convex" || s == "+1" || s == "1") return Sense::Convex;
  if (s == "concave" || s == "-1") return Sense::Concave;
  throw UsageError("--sense must be convex or concave");
}

void check_method_flags(const CliConfig& c) {
  const std::string& m = c.method;
  if (m != "sshopm" && m != "es" && m != "geap" && m != "des" && m != "degeap")
    throw UsageError("unknown method '" + m + "' (sshopm | es | geap | des | degeap)");
  if (!c.gamma.empty() && (m == "sshopm" || m == "geap"))
    throw UsageError("--gamma does not apply to method " + m);
  if (!c.gamma.empty() && (m == "des" || m == "degeap") && c.gamma != "dynamic")
    throw UsageError("method " + m + " chooses gamma dynamically; only --gamma dynamic is accepted");
  if (m == "es" && c.gamma == "dynamic") throw UsageError("--gamma dynamic is method des (or degeap)");
  if (m == "es" && c.gamma.empty()) throw UsageError("method es needs --gamma");
  if (c.tau && is_static(m)) throw UsageError("--tau does not apply to static-shift method " + m);
  if (is_static(m) && c.alpha.empty()) throw UsageError("method " + m + " needs --alpha");
  if (!is_static(m) && !c.alpha.empty()) throw UsageError("--alpha does not apply to adaptive method " + m);
  if (!is_static(m) && c.sense.empty()) throw UsageError("method " + m + " needs --sense");
}

// Static shift, possibly from the sampled beta bound. The sense flag picks
// the sign of an automatic shift.
double resolve_alpha(const CliConfig& c, const SymmetricTensor& a) {
  if (c.alpha == "auto") {
    const double s = suggest_shift(a, kBetaSamples, c.seed);
    const bool concave = !c.sense.empty() && parse_sense(c.sense) == Sense::Concave;
    const double alpha = concave ? -s : s;
    std::cout << "alpha auto = " << num(alpha) << "  (beta estimate " << num(s / 1.1) << " x 1.1, "
              << kBetaSamples << " samples)\n";
    return alpha;
  }
  const double alpha = parse_real(c.alpha, "--alpha");
  if (!c.sense.empty() && parse_sense(c.sense) != sense_of_shift(alpha))
    throw UsageError("--sense disagrees with the sign of --alpha");
  return alpha;
}

std::string default_out(const CliConfig& c) {
  if (!c.out.empty()) return c.out;
  if (const char* env = std::getenv("ZEIG_OUTPUT_DIR")) return env;
  return {};
}

void check_format(const std::string& f) {
  if (f != "table" && f != "json" && f != "csv") throw UsageError("--format must be csv, json or table");
}

void classify_into(const SymmetricTensor& a, SolveResult& r) {
  if (r.status() != Status::Converged) return;
  try {
    r.eigenpair.stability = classify(a, r.eigenpair.lambda, r.eigenpair.x);
  } catch (const std::exception&) {
  }
}

SolveConfig make_config(const CliConfig& c, double alpha, std::optional<double> static_gamma,
                        std::vector<double> x0) {
  const double tau = c.tau.value_or(1e-6);
  SolveConfig cfg;
  if (c.method == "sshopm") cfg = SolveConfig::sshopm(alpha, std::move(x0));
  else if (c.method == "es") cfg = SolveConfig::es_sshopm(alpha, *static_gamma, std::move(x0));
  else if (c.method == "des") cfg = SolveConfig::des_sshopm(alpha, std::move(x0));
  else if (c.method == "geap") cfg = SolveConfig::geap(parse_sense(c.sense), tau, std::move(x0));
  else cfg = SolveConfig::de_geap(parse_sense(c.sense), tau, std::move(x0));
  cfg.tol = c.tol;
  cfg.max_iters = c.max_iters;
  return cfg;
}

int cmd_solve(const CliConfig& c) {
  check_method_flags(c);
  check_format(c.format);
  const SymmetricTensor a = read_tensor(c.tensor);
  const std::vector<double> x0 = c.start.empty() ? random_start(a.dim(), c.seed, 0) : parse_start(c.start, a.dim());
  const double alpha = is_static(c.method) ? resolve_alpha(c, a) : 0.0;

  std::vector<RunRecord> runs;
  std::optional<double> gamma;
  std::optional<RateReport> base_rate;
  if (c.method == "es") {
    if (c.gamma == "opt") {
      SolveConfig base = SolveConfig::sshopm(alpha, x0);
      base.tol = c.tol;
      base.max_iters = c.max_iters;
      SolveResult br = sshopm(a, base);
      classify_into(a, br);
      if (br.status() != Status::Converged) {
        std::cerr << "zeig: preliminary S-SHOPM run for --gamma opt did not converge (" << to_string(br.status())
                  << ")\n";
        return 2;
      }
      base_rate = predict_rates(a, br.eigenpair, alpha, 0.0);
      base_rate->iterations = br.iterations();
      if (!base_rate->gamma_opt) throw UsageError("--gamma opt: Jacobian spectral radius " + num(base_rate->rho) +
                                                  " is outside (0, 1)");
      gamma = *base_rate->gamma_opt;
      std::cout << "gamma opt = " << num(*gamma) << "  (rho " << num(base_rate->rho) << ", base S-SHOPM run "
                << br.iterations() << " iterations)\n";
      runs.push_back({"base-sshopm", base, std::move(br), base_rate});
    } else {
      gamma = parse_real(c.gamma, "--gamma");
    }
  }

  SolveConfig cfg = make_config(c, alpha, gamma, x0);
  cfg.validate(a.dim());
  SolveResult r = solve(a, cfg);
  classify_into(a, r);
  std::optional<RateReport> rate;
  if (r.status() == Status::Converged && std::holds_alternative<StaticShift>(cfg.shift)) {
    try {
      rate = predict_rates(a, r.eigenpair, alpha, gamma.value_or(0.0));
      const RateEstimate est = estimate_rate(residual_history(r.trace));
      rate->measured_rate = est.rate;
      rate->measured_geometric_mean = est.geometric_mean;
      rate->iterations = r.iterations();
    } catch (const std::exception&) {
      rate.reset();
    }
  }
  runs.push_back({c.method, cfg, r, rate});

  if (c.format == "csv") {
    write_trace_csv(std::cout, r.trace);
  } else if (c.format == "json") {
    nlohmann::json j = {{"config", to_json(cfg)},     {"status", to_string(r.status())},
                        {"iterations", r.iterations()}, {"eigenpair", to_json(r.eigenpair)}};
    j["rate"] = rate ? to_json(*rate) : nlohmann::json(nullptr);
    if (gamma) j["gamma"] = *gamma;
    if (runs.size() == 2) j["base_iterations"] = runs.front().result.iterations();
    std::cout << j.dump(2) << '\n';
  } else {
    const Eigenpair& p = r.eigenpair;
    std::cout << "method " << to_string(r.method) << '\n'
              << "status " << to_string(r.status()) << '\n'
              << "lambda = " << num(p.lambda, "%.4f") << "  (" << num(p.lambda) << ")\n"
              << "x = " << vec(p.x) << '\n'
              << "residual " << num(p.residual, "%.3e") << '\n'
              << "classification " << (p.stability ? to_string(*p.stability) : "n/a") << '\n'
              << "iterations " << r.iterations() << '\n';
    if (rate && rate->predicted)
      std::cout << "rate predicted " << num(*rate->predicted, "%.6f") << ", measured "
                << (rate->measured_rate ? num(*rate->measured_rate, "%.6f") : "n/a") << '\n';
  }

  if (const std::string dir = default_out(c); !dir.empty()) export_traces(runs, dir);
  return r.status() == Status::Converged ? 0 : 2;
}

int cmd_trials(const CliConfig& c) {
  check_format(c.format);
  if (c.trials < 1) throw UsageError("--trials must be at least 1");
  const SymmetricTensor a = read_tensor(c.tensor);
  std::vector<MethodSpec> methods;
  if (c.all_methods) {
    if (c.alpha.empty() || c.gamma.empty()) throw UsageError("--all-methods needs --alpha and --gamma");
    const double alpha = resolve_alpha(c, a);
    methods = all_methods(alpha, parse_real(c.gamma, "--gamma"), c.tau.value_or(1e-6));
  } else {
    check_method_flags(c);
    if (c.gamma == "opt")
      throw UsageError("--gamma " + c.gamma + " is not available for campaigns");
    const double alpha = is_static(c.method) ? resolve_alpha(c, a) : 0.0;
    std::optional<double> gamma;
    if (c.method == "es") gamma = parse_real(c.gamma, "--gamma");
    methods.push_back({to_string(make_config(c, alpha, gamma, {}).method()), make_config(c, alpha, gamma, {})});
  }
  for (auto& m : methods) {
    m.config.tol = c.tol;
    m.config.max_iters = c.max_iters;
  }

  const Campaign camp = run_trials(a, methods, c.trials, c.seed, c.workers);
  if (c.format == "table") {
    std::cout << render_table(camp.summaries, a.order());
  } else if (c.format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& s : camp.summaries) j.push_back(to_json(s));
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "trial,method,status,lambda,iterations\n";
    for (int t = 0; t < c.trials; ++t)
      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        const auto& o = camp.outcomes[mi][t];
        std::cout << t << ',' << methods[mi].name << ',' << to_string(o.status) << ','
                  << (o.status == Status::Converged ? num(o.lambda) : "") << ',' << o.iterations << '\n';
      }
  }
  if (const std::string dir = default_out(c); !dir.empty()) {
    std::filesystem::create_directories(dir);
    std::ofstream f(std::filesystem::path(dir) / "trials.json");
    if (!f) throw std::runtime_error("cannot open " + (std::filesystem::path(dir) / "trials.json").string());
    nlohmann::json j = nlohmann::json::array();
    for (const auto& s : camp.summaries) j.push_back(to_json(s));
    f << j.dump(2) << '\n';
  }
  return 0;
}

int cmd_rate(const CliConfig& c) {
  check_format(c.format);
  if (c.alpha.empty() || c.start.empty()) throw UsageError("rate needs --alpha and --start");
  const SymmetricTensor a = read_tensor(c.tensor);
  const double alpha = resolve_alpha(c, a);
  const std::vector<double> x0 = parse_start(c.start, a.dim());
  const std::vector<double> grid = c.gamma_grid.empty() ? std::vector<double>{} : parse_list(c.gamma_grid);
  RateExperiment ex;
  try {
    ex = rate_experiment(a, alpha, x0, grid);
  } catch (const std::runtime_error& e) {
    std::cerr << "zeig: " << e.what() << '\n';
    return 2;
  }

  if (c.format == "json") {
    nlohmann::json j = {{"base_iterations", ex.base.iterations()}, {"eigenpair", to_json(ex.base.eigenpair)}};
    j["points"] = nlohmann::json::array();
    for (const auto& p : ex.points) j["points"].push_back(to_json(p));
    std::cout << j.dump(2) << '\n';
  } else {
    const auto& first = ex.points.front();
    std::cout << "lambda = " << num(ex.base.eigenpair.lambda, "%.4f") << "  rho(J) = " << num(first.rho, "%.6f");
    if (first.gamma_opt)
      std::cout << "  gamma_opt = " << num(*first.gamma_opt, "%.6f") << "  rho_opt = " << num(*first.rho_opt, "%.6f");
    std::cout << '\n';
    const char* sep = c.format == "csv" ? "," : "  ";
    std::cout << "gamma" << sep << "predicted" << sep << "measured" << sep << "rel_err" << sep << "iterations"
              << sep << "note\n";
    for (const auto& p : ex.points) {
      std::string rel = "";
      if (p.predicted && p.measured_rate) rel = num(std::abs(*p.measured_rate - *p.predicted) / *p.predicted, "%.4f");
      std::cout << num(p.gamma, "%.6f") << sep << (p.predicted ? num(*p.predicted, "%.6f") : "") << sep
                << (p.measured_rate ? num(*p.measured_rate, "%.6f") : "") << sep << rel << sep << p.iterations << sep
                << (!p.converged ? "not converged" : p.oscillatory ? "oscillatory" : "") << '\n';
    }
  }
  if (const std::string dir = default_out(c); !dir.empty()) {
    std::vector<RunRecord> runs{{"base-sshopm", SolveConfig::sshopm(alpha, x0), ex.base, std::nullopt}};
    for (const auto& p : ex.points) {
      const SolveConfig cfg = SolveConfig::es_sshopm(alpha, p.gamma, x0);
      runs.push_back({"es-gamma" + num(p.gamma, "%.6f"), cfg, es_sshopm(a, cfg), p});
    }
    export_traces(runs, dir);
  }
  bool all = true;
  for (const auto& p : ex.points) all = all && p.converged;
  return all ? 0 : 2;
}

int cmd_graph(const CliConfig& c) {
  const GraphSpec g = read_graph(c.graph);
  const std::size_t tri = count_triangles(g);
  std::cout << "nodes " << g.nodes << "\nedges " << g.edges.size() << "\ntriangles " << tri << '\n';
  if (!c.out_tensor.empty()) {
    write_tensor(c.out_tensor, graph_to_tensor(g));
    std::cout << "wrote " << c.out_tensor << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CliConfig c;
  CLI::App app{"Z-eigenpairs of symmetric tensors by shifted power methods"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* s) {
    s->add_option("--tensor", c.tensor, "tensor file")->required();
    s->add_option("--method", c.method, "sshopm | es | geap | des | degeap");
    s->add_option("--alpha", c.alpha, "static shift: number or 'auto'");
    s->add_option("--gamma", c.gamma, "extrapolation weight: number, 'opt' or 'dynamic'");
    s->add_option("--sense", c.sense, "convex | concave");
    s->add_option("--tau", c.tau, "adaptive shift margin");
    s->add_option("--tol", c.tol, "stop when successive eigenvalue estimates differ by less");
    s->add_option("--max-iters", c.max_iters);
    s->add_option("--seed", c.seed, "master seed for every random choice");
    s->add_option("--out", c.out, "output directory for traces (default $ZEIG_OUTPUT_DIR)");
    s->add_option("--format", c.format, "csv | json | table");
  };

  auto* solve_cmd = app.add_subcommand("solve", "solve one instance");
  common(solve_cmd);
  solve_cmd->add_option("--start", c.start, "start vector, inline list or file");

  auto* trials_cmd = app.add_subcommand("trials", "multi-start occurrence table");
  common(trials_cmd);
  trials_cmd->add_option("--trials", c.trials);
  trials_cmd->add_flag("--all-methods", c.all_methods, "run all five methods");
  trials_cmd->add_option("--workers", c.workers, "threads (0 = all cores)");

  auto* rate_cmd = app.add_subcommand("rate", "measured vs predicted convergence rates");
  common(rate_cmd);
  rate_cmd->add_option("--start", c.start, "start vector, inline list or file");
  rate_cmd->add_option("--gamma-grid", c.gamma_grid, "comma separated gammas (default 0, gamma_opt/2, gamma_opt)");

  auto* graph_cmd = app.add_subcommand("graph", "triangle tensor of a graph");
  graph_cmd->add_option("--graph", c.graph, "coordinate-format adjacency matrix")->required();
  graph_cmd->add_option("--out-tensor", c.out_tensor, "write the tensor here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "zeig: " << e.what() << '\n';
    return 1;
  }

  try {
    if (*solve_cmd) return cmd_solve(c);
    if (*trials_cmd) return cmd_trials(c);
    if (*rate_cmd) return cmd_rate(c);
    return cmd_graph(c);
  } catch (const std::exception& e) {
    std::cerr << "zeig: " << e.what() << '\n';
    return 1;
  }
}
