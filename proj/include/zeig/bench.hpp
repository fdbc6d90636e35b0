#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "zeig/iterate.hpp"
#include "zeig/rateth.hpp"
#include "zeig/symtensor.hpp"

namespace zeig {

/// A named solver configuration; its start vector is replaced per trial.
struct MethodSpec {
  std::string name;
  SolveConfig config;
};

/// The five methods with the shift/extrapolation settings of one campaign.
/// The sense of the adaptive methods follows the sign of alpha.
std::vector<MethodSpec> all_methods(double alpha, double gamma, double tau);

struct TrialOutcome {
  Status status = Status::MaxIters;
  double lambda = 0.0;
  std::vector<double> x;
  int iterations = 0;
  int row = -1;  // index into the method's TrialSummary rows, -1 if not converged
};

struct SummaryRow {
  double lambda = 0.0;  // representative (first occurrence)
  std::vector<double> x;
  int occurrences = 0;
  int median_iterations = 0;  // lower median over converged trials
};

struct TrialSummary {
  std::string method;
  std::vector<SummaryRow> rows;
  int total = 0;
  int non_converged = 0;
  std::uint64_t master_seed = 0;
  Sense sense = Sense::Convex;  // rows run descending for convex, ascending for concave
};

struct Campaign {
  std::vector<TrialSummary> summaries;          // one per method
  std::vector<std::vector<TrialOutcome>> outcomes;  // [method][trial]
  std::vector<std::vector<double>> starts;      // [trial]
};

/// Identity of two converged eigenvalues for aggregation: equal within
/// `tol`, or, for odd order, opposite within `tol` since (-lambda, -x) is an
/// eigenpair whenever (lambda, x) is.
bool same_eigen_class(int order, double lambda_a, double lambda_b, double tol = 1e-6);

/// Runs every method from the same random start for each trial. Trial t uses
/// random_start(n, master_seed, t). `workers` = 0 picks the hardware
/// concurrency; results do not depend on it.
Campaign run_trials(const SymmetricTensor& a, const std::vector<MethodSpec>& methods, int trials,
                    std::uint64_t master_seed, unsigned workers = 0);

/// Aligned text table: one line per eigenvalue class, an (Its., # Occ.) column
/// pair per method.
std::string render_table(const std::vector<TrialSummary>& summaries, int order);

nlohmann::json to_json(const TrialSummary& s);
nlohmann::json to_json(const SolveConfig& c);
nlohmann::json to_json(const Eigenpair& p);
nlohmann::json to_json(const RateReport& r);

/// Residual-rate experiment: solve with S-SHOPM from x0 to get the target
/// pair and rho, then run ES-SHOPM once per grid value and compare measured
/// and predicted rates. An empty grid means {0, gamma_opt/2, gamma_opt}.
struct RateExperiment {
  SolveResult base;
  std::vector<RateReport> points;
};

RateExperiment rate_experiment(const SymmetricTensor& a, double alpha, std::vector<double> x0,
                               std::vector<double> gamma_grid = {});

/// Undirected simple graph; edges stored 0-based with first < second.
struct GraphSpec {
  std::size_t nodes = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

/// Coordinate-format sparse matrix text: optional '%' comment lines, a
/// "rows cols nnz" header, then "i j [value]" lines (1-based). Symmetric
/// duplicates are merged and self-loops dropped.
GraphSpec parse_graph(std::istream& in);
GraphSpec read_graph(const std::string& path);

std::size_t count_triangles(const GraphSpec& g);

/// Order-3 tensor with a_ijk = 1 on every permutation of each triangle.
SymmetricTensor graph_to_tensor(const GraphSpec& g);

/// One run for trace export.
struct RunRecord {
  std::string name;
  SolveConfig config;
  SolveResult result;
  std::optional<RateReport> rate;
};

/// Writes <dir>/<name>.csv (k, lambda, residual, alpha_k, gamma_k) and
/// <dir>/<name>.json (config, status, eigenpair, classification, rate) for
/// every record. Creates `dir` if needed.
void export_traces(const std::vector<RunRecord>& runs, const std::string& dir);

void write_trace_csv(std::ostream& out, const SolveTrace& trace);

}  // namespace zeig
