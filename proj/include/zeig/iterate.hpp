#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "zeig/symtensor.hpp"

namespace zeig {

struct StaticShift {
  double alpha = 0.0;
};
/// GEAP-style shift recomputed each iteration to keep a local convexity
/// (or concavity) margin of tau.
struct AdaptiveShift {
  double tau = 1e-6;
};
using ShiftPolicy = std::variant<StaticShift, AdaptiveShift>;

struct NoExtrapolation {};
struct StaticGamma {
  double gamma = 0.0;
};
/// Extrapolation weight chosen every step from the largest eigenvalue of
/// the current-iterate Jacobian.
struct DynamicGamma {};
using GammaPolicy = std::variant<NoExtrapolation, StaticGamma, DynamicGamma>;

enum class Sense { Convex = 1, Concave = -1 };

enum class Method { SSHOPM, ES_SSHOPM, GEAP, DES_SSHOPM, DE_GEAP };

std::string to_string(Method m);
std::string to_string(Sense s);

struct SolveConfig {
  ShiftPolicy shift = StaticShift{};
  GammaPolicy gamma = NoExtrapolation{};
  Sense sense = Sense::Convex;
  double tol = 1e-15;
  int max_iters = 1000;
  std::vector<double> x0;
  /// Newton-refine the final pair after the stopping test fires. The
  /// iteration count and trace are unaffected.
  bool polish = true;

  static SolveConfig sshopm(double alpha, std::vector<double> x0);
  static SolveConfig es_sshopm(double alpha, double gamma, std::vector<double> x0);
  static SolveConfig geap(Sense sense, double tau, std::vector<double> x0);
  static SolveConfig des_sshopm(double alpha, std::vector<double> x0);
  static SolveConfig de_geap(Sense sense, double tau, std::vector<double> x0);

  /// Which of the five methods this configuration describes; throws for
  /// combinations outside them (adaptive shift with a static gamma).
  Method method() const;

  /// Checks ranges and that a static shift agrees with the sense
  /// (chi = +1 iff alpha >= 0). Throws std::invalid_argument.
  void validate(std::size_t dim) const;
};

/// Sense implied by a static shift.
Sense sense_of_shift(double alpha) noexcept;

enum class Status { Converged, MaxIters, Breakdown };
std::string to_string(Status s);

enum class Stability { PositiveStable, NegativeStable, Unstable, Degenerate };
std::string to_string(Stability s);

struct IterRecord {
  int k = 0;
  double lambda = 0.0;    // A x_k^m
  double quotient = 0.0;  // extrapolated Rayleigh quotient; NaN when not formed
  std::vector<double> x;
  double residual = 0.0;  // ||A x_k^{m-1} - lambda x_k||
  double alpha = 0.0;     // shift used to produce x_k (NaN at k = 0)
  double gamma = 0.0;     // extrapolation weight used to produce x_k
  double u_norm = 0.0;    // norm before normalization (NaN at k = 0)
};

struct SolveTrace {
  std::vector<IterRecord> records;
  Status status = Status::MaxIters;

  /// Number of updates performed (records beyond the start).
  int iterations() const noexcept { return records.empty() ? 0 : static_cast<int>(records.size()) - 1; }
};

struct Eigenpair {
  double lambda = 0.0;
  std::vector<double> x;
  double residual = 0.0;
  std::optional<Stability> stability;
};

struct SolveResult {
  Eigenpair eigenpair;
  SolveTrace trace;
  Method method = Method::SSHOPM;
  int polish_steps = 0;

  Status status() const noexcept { return trace.status; }
  int iterations() const noexcept { return trace.iterations(); }
};

SolveResult sshopm(const SymmetricTensor& a, const SolveConfig& cfg);
SolveResult es_sshopm(const SymmetricTensor& a, const SolveConfig& cfg);
SolveResult geap(const SymmetricTensor& a, const SolveConfig& cfg);
SolveResult des_sshopm(const SymmetricTensor& a, const SolveConfig& cfg);
SolveResult de_geap(const SymmetricTensor& a, const SolveConfig& cfg);

/// Dispatches on cfg.method().
SolveResult solve(const SymmetricTensor& a, const SolveConfig& cfg);

/// GEAP shift: chi * max{0, (tau - lambda_min(chi m (m-1) M)) / m} with
/// M = A x^{m-2}.
double adaptive_shift(const SymMatrix& m_matrix, int order, Sense sense, double tau);

/// Dynamic extrapolation weight from the largest Jacobian eigenvalue,
/// (l - 2 + 2 Re sqrt(1 - l)) / l, and 0 when |l| < 1e-12.
double dynamic_gamma(double lambda_max_jacobian) noexcept;

/// ||A x^{m-1} - lambda x||
double eigen_residual(const SymmetricTensor& a, double lambda, std::span<const double> x);

/// Newton iteration on (A x^{m-1} - lambda x, (1 - x^T x)/2), renormalizing
/// each step. Keeps the input when Newton fails to improve it. Returns the
/// refined pair and the number of accepted steps.
std::pair<Eigenpair, int> polish_eigenpair(const SymmetricTensor& a, Eigenpair pair, int max_steps = 8);

/// Uniform draw on [-1,1]^n, normalized, from a counter-based stream keyed by
/// (master_seed, trial). Bit-reproducible across platforms.
std::vector<double> random_start(std::size_t n, std::uint64_t master_seed, std::uint64_t trial);

}  // namespace zeig
