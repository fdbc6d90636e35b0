#include "zeig/rateth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace zeig {

SymMatrix sshopm_jacobian(const SymmetricTensor& a, double lambda, std::span<const double> x, double alpha) {
  if (x.size() != a.dim()) throw std::invalid_argument("sshopm_jacobian: vector length does not match tensor");
  if (std::abs(norm2(x) - 1.0) > 1e-10) throw std::invalid_argument("sshopm_jacobian: vector is not unit length");
  const double denom = lambda + alpha;
  if (std::abs(denom) <= 1e-12) throw std::domain_error("sshopm_jacobian: degenerate shift, lambda + alpha ~ 0");

  const std::size_t n = x.size();
  const int m = a.order();
  const SymMatrix mat = a.contract_all(x).matrix;
  Matrix j(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const double xx = x[r] * x[c];
      j(r, c) = ((m - 1) * (mat(r, c) - lambda * xx) + alpha * ((r == c ? 1.0 : 0.0) - xx)) / denom;
    }
  return SymMatrix(std::move(j));
}

Matrix augmented_jacobian(const SymMatrix& j, double gamma) {
  const std::size_t n = j.dim();
  Matrix out(2 * n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      out(r, c) = (1.0 - gamma) * j(r, c);
      out(r, n + c) = gamma * j(r, c);
    }
    out(n + r, r) = 1.0;
  }
  return out;
}

std::array<std::complex<double>, 2> augmented_roots(double mu, double gamma) {
  const double b = (1.0 - gamma) * mu;
  const std::complex<double> disc = std::sqrt(std::complex<double>(b * b + 4.0 * gamma * mu, 0.0));
  return {(b + disc) / 2.0, (b - disc) / 2.0};
}

namespace {

void require_unit_interval(double rho, const char* who) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::domain_error(std::string(who) + ": base rate must lie in (0, 1)");
}

}  // namespace

double gamma_opt(double rho) {
  require_unit_interval(rho, "gamma_opt");
  return ((rho - 2.0) + 2.0 * std::sqrt(1.0 - rho)) / rho;
}

double rho_opt(double rho) {
  require_unit_interval(rho, "rho_opt");
  return 1.0 - std::sqrt(1.0 - rho);
}

double rho_gamma(double rho, double gamma) {
  require_unit_interval(rho, "rho_gamma");
  if (!(gamma > -1.0 && gamma <= 0.0)) throw std::domain_error("rho_gamma: gamma must lie in (-1, 0]");
  if (gamma < gamma_opt(rho)) return std::sqrt(-gamma * rho);
  const double b = (1.0 - gamma) * rho;
  const double disc = std::max(0.0, b * b + 4.0 * gamma * rho);
  return (b + std::sqrt(disc)) / 2.0;
}

namespace {

struct SampleStream {
  std::uint64_t state;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
};

}  // namespace

double beta_estimate(const SymmetricTensor& a, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("beta_estimate: need at least one sample");
  const std::size_t n = a.dim();
  SampleStream rng{seed ^ 0x5DEECE66DULL};
  std::vector<double> x(n);
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    double nx = 0.0;
    while (nx < 1e-12) {
      for (double& xi : x) xi = rng.normal();
      nx = norm2(x);
    }
    for (double& xi : x) xi /= nx;
    best = std::max(best, (a.order() - 1) * spectral_radius(a.contract_all(x).matrix));
  }
  return best;
}

double suggest_shift(const SymmetricTensor& a, int samples, std::uint64_t seed, double safety) {
  return safety * beta_estimate(a, samples, seed);
}

SymMatrix projected_hessian(const SymmetricTensor& a, double lambda, std::span<const double> x) {
  const std::size_t n = a.dim();
  const Matrix u = ortho_complement(x);
  Matrix h = static_cast<double>(a.order() - 1) * a.contract_all(x).matrix.matrix();
  for (std::size_t i = 0; i < n; ++i) h(i, i) -= lambda;
  return SymMatrix(u.transposed() * h * u);
}

Stability classify(const SymmetricTensor& a, double lambda, std::span<const double> x) {
  if (x.size() != a.dim()) throw std::invalid_argument("classify: vector length does not match tensor");
  const double res = eigen_residual(a, lambda, x);
  if (!(res <= kClassifyResidual))
    throw std::invalid_argument("classify: pair is not an eigenpair (residual " + std::to_string(res) + ")");
  const SymMatrix c = projected_hessian(a, lambda, x);
  if (c.dim() == 0) return Stability::Degenerate;
  const auto values = eigh(c).values;
  bool any_pos = false, any_neg = false;
  for (double v : values) {
    if (std::abs(v) <= kClassifyThreshold) return Stability::Degenerate;
    (v > 0 ? any_pos : any_neg) = true;
  }
  if (any_pos && any_neg) return Stability::Unstable;
  return any_pos ? Stability::PositiveStable : Stability::NegativeStable;
}

std::pair<Eigenpair, Stability> refine_and_classify(const SymmetricTensor& a, double lambda,
                                                    std::vector<double> x) {
  const double nx = norm2(x);
  if (!(nx > 0.0)) throw std::invalid_argument("refine_and_classify: zero vector");
  for (double& xi : x) xi /= nx;
  auto [pair, steps] = polish_eigenpair(a, Eigenpair{lambda, std::move(x), 0.0, std::nullopt}, 20);
  (void)steps;
  const Stability s = classify(a, pair.lambda, pair.x);
  pair.stability = s;
  return {std::move(pair), s};
}

RateEstimate estimate_rate(std::span<const double> residuals, double lower, double upper,
                           std::size_t min_points) {
  RateEstimate out;
  std::size_t start = residuals.size();
  for (std::size_t i = 0; i < residuals.size(); ++i)
    if (residuals[i] <= upper) {
      start = i;
      break;
    }
  std::size_t end = start;
  while (end < residuals.size() && residuals[end] >= lower && residuals[end] > 0.0) ++end;
  out.window_start = start;
  out.window_size = end - start;
  if (out.window_size < std::max<std::size_t>(min_points, 3)) return out;

  const auto w = residuals.subspan(start, out.window_size);
  out.geometric_mean = std::pow(w.back() / w.front(), 1.0 / static_cast<double>(w.size() - 1));

  double log_sum = 0.0;
  for (std::size_t k = 0; k + 2 < w.size(); ++k) {
    const double disc = std::max(0.0, w[k + 1] * w[k + 1] - w[k] * w[k + 2]);
    double est = (w[k + 1] - std::sqrt(disc)) / w[k];
    if (!(est > 0.0)) est = w[k + 1] / w[k];
    log_sum += std::log(est);
  }
  out.rate = std::exp(log_sum / static_cast<double>(w.size() - 2));
  return out;
}

std::vector<double> residual_history(const SolveTrace& trace) {
  std::vector<double> r;
  r.reserve(trace.records.size());
  for (const auto& rec : trace.records) r.push_back(rec.residual);
  return r;
}

RateReport predict_rates(const SymmetricTensor& a, const Eigenpair& pair, double alpha, double gamma,
                         int curve_points) {
  RateReport rep;
  rep.alpha = alpha;
  rep.gamma = gamma;
  rep.eigenpair = pair;
  rep.rho = lambda_max(sshopm_jacobian(a, pair.lambda, pair.x, alpha));
  if (rep.rho > 0.0 && rep.rho < 1.0) {
    rep.gamma_opt = gamma_opt(rep.rho);
    rep.rho_opt = rho_opt(rep.rho);
    if (gamma > -1.0 && gamma <= 0.0) {
      rep.predicted = rho_gamma(rep.rho, gamma);
      rep.oscillatory = gamma < *rep.gamma_opt;
    }
    for (int i = 0; i < curve_points; ++i) {
      const double g = -1.0 + static_cast<double>(i + 1) / curve_points;
      rep.rho_gamma_curve.emplace_back(g, rho_gamma(rep.rho, g));
    }
  }
  return rep;
}

}  // namespace zeig
