#include "zeig/iterate.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace zeig {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kBreakdownNorm = 1e-300;

int chi_of(Sense s) { return s == Sense::Convex ? 1 : -1; }

bool extrapolates(Method m) {
  return m == Method::ES_SSHOPM || m == Method::DES_SSHOPM || m == Method::DE_GEAP;
}

// ((m-1)(M - lambda x x^T) + alpha (I - x x^T)) / (lambda + alpha)
SymMatrix shifted_jacobian(const SymMatrix& mat, int order, double lambda, std::span<const double> x,
                           double alpha) {
  const std::size_t n = x.size();
  const double denom = lambda + alpha;
  Matrix j(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const double xx = x[r] * x[c];
      const double id = r == c ? 1.0 : 0.0;
      j(r, c) = ((order - 1) * (mat(r, c) - lambda * xx) + alpha * (id - xx)) / denom;
    }
  return SymMatrix(std::move(j));
}

std::vector<double> residual_vector(const Contraction& c, double lambda, std::span<const double> x) {
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = c.vector[i] - lambda * x[i];
  return r;
}

SolveResult run(const SymmetricTensor& a, const SolveConfig& cfg, Method method) {
  cfg.validate(a.dim());
  const int order = a.order();
  const std::size_t n = a.dim();
  const double chi = chi_of(cfg.sense);

  SolveResult result;
  result.method = method;
  auto& records = result.trace.records;
  records.reserve(std::min(cfg.max_iters, 4096) + 1);

  std::vector<double> x = cfg.x0;
  Contraction c = a.contract_all(x);
  double lambda = c.scalar;
  records.push_back({0, lambda, kNaN, x, norm2(residual_vector(c, lambda, x)), kNaN, kNaN, kNaN});

  std::vector<double> x_prev;
  std::vector<double> v_prev;
  Status status = Status::MaxIters;

  for (int k = 0; k < cfg.max_iters; ++k) {
    const double alpha = std::holds_alternative<StaticShift>(cfg.shift)
                             ? std::get<StaticShift>(cfg.shift).alpha
                             : adaptive_shift(c.matrix, order, cfg.sense, std::get<AdaptiveShift>(cfg.shift).tau);

    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = chi * (c.vector[i] + alpha * x[i]);

    // The first update of every method is a plain shifted power step.
    double gamma = 0.0;
    if (k > 0) {
      if (const auto* sg = std::get_if<StaticGamma>(&cfg.gamma)) {
        gamma = sg->gamma;
      } else if (std::holds_alternative<DynamicGamma>(cfg.gamma)) {
        if (std::abs(lambda + alpha) > 1e-12) {
          gamma = dynamic_gamma(lambda_max(shifted_jacobian(c.matrix, order, lambda, x, alpha)));
        }
      }
    }

    std::vector<double> u = v;
    if (k > 0 && gamma != 0.0)
      for (std::size_t i = 0; i < n; ++i) u[i] = (1.0 - gamma) * v[i] + gamma * v_prev[i];

    const double u_norm = norm2(u);
    if (!(u_norm >= kBreakdownNorm) || !std::isfinite(u_norm)) {
      status = Status::Breakdown;
      break;
    }

    double quotient = kNaN;
    if (extrapolates(method) && k > 0) {
      std::vector<double> xg(n);
      for (std::size_t i = 0; i < n; ++i) xg[i] = (1.0 - gamma) * x[i] + gamma * x_prev[i];
      const double xg_sq = dot(xg, xg);
      if (!(std::sqrt(xg_sq) >= kBreakdownNorm)) {
        status = Status::Breakdown;
        break;
      }
      quotient = dot(u, xg) / xg_sq;
    }

    std::vector<double> x_next(n);
    for (std::size_t i = 0; i < n; ++i) x_next[i] = u[i] / u_norm;
    c = a.contract_all(x_next);
    const double lambda_next = c.scalar;
    if (!std::isfinite(lambda_next)) {
      status = Status::Breakdown;
      break;
    }
    records.push_back({k + 1, lambda_next, quotient, x_next, norm2(residual_vector(c, lambda_next, x_next)), alpha,
                       gamma, u_norm});

    const bool done = std::abs(lambda_next - lambda) < cfg.tol;
    x_prev = std::move(x);
    x = std::move(x_next);
    v_prev = std::move(v);
    lambda = lambda_next;
    if (done) {
      status = Status::Converged;
      break;
    }
  }

  result.trace.status = status;
  const IterRecord& last = records.back();
  result.eigenpair = Eigenpair{last.lambda, last.x, last.residual, std::nullopt};
  if (status == Status::Converged && cfg.polish) {
    auto [pair, steps] = polish_eigenpair(a, result.eigenpair);
    result.eigenpair = std::move(pair);
    result.polish_steps = steps;
  }
  return result;
}

void require_method(const SolveConfig& cfg, Method want, const char* name) {
  if (cfg.method() != want)
    throw std::invalid_argument(std::string(name) + ": configuration describes " + to_string(cfg.method()));
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::SSHOPM: return "S-SHOPM";
    case Method::ES_SSHOPM: return "ES-SHOPM";
    case Method::GEAP: return "GEAP";
    case Method::DES_SSHOPM: return "DES-SHOPM";
    case Method::DE_GEAP: return "DE-GEAP";
  }
  return "?";
}

std::string to_string(Sense s) { return s == Sense::Convex ? "convex" : "concave"; }

std::string to_string(Status s) {
  switch (s) {
    case Status::Converged: return "Converged";
    case Status::MaxIters: return "MaxIters";
    case Status::Breakdown: return "Breakdown";
  }
  return "?";
}

std::string to_string(Stability s) {
  switch (s) {
    case Stability::PositiveStable: return "PositiveStable";
    case Stability::NegativeStable: return "NegativeStable";
    case Stability::Unstable: return "Unstable";
    case Stability::Degenerate: return "Degenerate";
  }
  return "?";
}

Sense sense_of_shift(double alpha) noexcept { return alpha >= 0.0 ? Sense::Convex : Sense::Concave; }

SolveConfig SolveConfig::sshopm(double alpha, std::vector<double> x0) {
  SolveConfig c;
  c.shift = StaticShift{alpha};
  c.sense = sense_of_shift(alpha);
  c.x0 = std::move(x0);
  return c;
}

SolveConfig SolveConfig::es_sshopm(double alpha, double gamma, std::vector<double> x0) {
  SolveConfig c = sshopm(alpha, std::move(x0));
  c.gamma = StaticGamma{gamma};
  return c;
}

SolveConfig SolveConfig::geap(Sense sense, double tau, std::vector<double> x0) {
  SolveConfig c;
  c.shift = AdaptiveShift{tau};
  c.sense = sense;
  c.x0 = std::move(x0);
  return c;
}

SolveConfig SolveConfig::des_sshopm(double alpha, std::vector<double> x0) {
  SolveConfig c = sshopm(alpha, std::move(x0));
  c.gamma = DynamicGamma{};
  return c;
}

SolveConfig SolveConfig::de_geap(Sense sense, double tau, std::vector<double> x0) {
  SolveConfig c = geap(sense, tau, std::move(x0));
  c.gamma = DynamicGamma{};
  return c;
}

Method SolveConfig::method() const {
  const bool adaptive = std::holds_alternative<AdaptiveShift>(shift);
  if (std::holds_alternative<NoExtrapolation>(gamma)) return adaptive ? Method::GEAP : Method::SSHOPM;
  if (std::holds_alternative<DynamicGamma>(gamma)) return adaptive ? Method::DE_GEAP : Method::DES_SSHOPM;
  if (adaptive) throw std::invalid_argument("a static extrapolation weight requires a static shift");
  return Method::ES_SSHOPM;
}

void SolveConfig::validate(std::size_t dim) const {
  method();
  if (const auto* s = std::get_if<StaticShift>(&shift)) {
    if (!std::isfinite(s->alpha)) throw std::invalid_argument("shift alpha must be finite");
    if (sense_of_shift(s->alpha) != sense)
      throw std::invalid_argument("static shift sign must match the sense (convex iff alpha >= 0)");
  } else {
    const double tau = std::get<AdaptiveShift>(shift).tau;
    if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("adaptive shift tau must be positive");
  }
  if (const auto* g = std::get_if<StaticGamma>(&gamma)) {
    if (!(g->gamma > -1.0 && g->gamma <= 0.0)) throw std::invalid_argument("static gamma must lie in (-1, 0]");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  if (x0.size() != dim) throw std::invalid_argument("start vector length does not match tensor dimension");
  for (double v : x0)
    if (!std::isfinite(v)) throw std::invalid_argument("start vector has non-finite entries");
  if (std::abs(norm2(x0) - 1.0) > 1e-12) throw std::invalid_argument("start vector must have unit norm");
}

double adaptive_shift(const SymMatrix& m_matrix, int order, Sense sense, double tau) {
  const double chi = chi_of(sense);
  Matrix h = (chi * order * (order - 1)) * m_matrix.matrix();
  const double lmin = lambda_min(SymMatrix(std::move(h)));
  return chi * std::max(0.0, (tau - lmin) / order);
}

double dynamic_gamma(double l) noexcept {
  if (std::abs(l) < 1e-12) return 0.0;
  const double re_sqrt = std::sqrt(std::complex<double>(1.0 - l, 0.0)).real();
  return (l - 2.0 + 2.0 * re_sqrt) / l;
}

double eigen_residual(const SymmetricTensor& a, double lambda, std::span<const double> x) {
  return norm2(residual_vector(a.contract_all(x), lambda, x));
}

std::pair<Eigenpair, int> polish_eigenpair(const SymmetricTensor& a, Eigenpair pair, int max_steps) {
  const std::size_t n = a.dim();
  const int order = a.order();
  int accepted = 0;

  Contraction c = a.contract_all(pair.x);
  pair.lambda = c.scalar;
  pair.residual = norm2(residual_vector(c, pair.lambda, pair.x));

  for (int step = 0; step < max_steps; ++step) {
    if (pair.residual <= 1e-15 * std::max(1.0, std::abs(pair.lambda))) break;
    Matrix jac(n + 1, n + 1);
    std::vector<double> rhs(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) jac(i, j) = (order - 1) * c.matrix(i, j);
      jac(i, i) -= pair.lambda;
      jac(i, n) = -pair.x[i];
      jac(n, i) = -pair.x[i];
      rhs[i] = -(c.vector[i] - pair.lambda * pair.x[i]);
    }
    rhs[n] = -0.5 * (1.0 - dot(pair.x, pair.x));

    std::vector<double> delta;
    try {
      delta = solve_linear(std::move(jac), std::move(rhs));
    } catch (const std::runtime_error&) {
      break;
    }

    std::vector<double> x(n);
    double step_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = pair.x[i] + delta[i];
      step_norm += delta[i] * delta[i];
    }
    if (!(std::sqrt(step_norm) < 1e-3)) break;
    const double nx = norm2(x);
    for (double& xi : x) xi /= nx;

    Contraction cn = a.contract_all(x);
    const double res = norm2(residual_vector(cn, cn.scalar, x));
    if (!(res < pair.residual)) break;
    pair.x = std::move(x);
    pair.lambda = cn.scalar;
    pair.residual = res;
    c = std::move(cn);
    ++accepted;
  }
  return {std::move(pair), accepted};
}

SolveResult sshopm(const SymmetricTensor& a, const SolveConfig& cfg) {
  require_method(cfg, Method::SSHOPM, "sshopm");
  return run(a, cfg, Method::SSHOPM);
}

SolveResult es_sshopm(const SymmetricTensor& a, const SolveConfig& cfg) {
  require_method(cfg, Method::ES_SSHOPM, "es_sshopm");
  return run(a, cfg, Method::ES_SSHOPM);
}

SolveResult geap(const SymmetricTensor& a, const SolveConfig& cfg) {
  require_method(cfg, Method::GEAP, "geap");
  return run(a, cfg, Method::GEAP);
}

SolveResult des_sshopm(const SymmetricTensor& a, const SolveConfig& cfg) {
  require_method(cfg, Method::DES_SSHOPM, "des_sshopm");
  return run(a, cfg, Method::DES_SSHOPM);
}

SolveResult de_geap(const SymmetricTensor& a, const SolveConfig& cfg) {
  require_method(cfg, Method::DE_GEAP, "de_geap");
  return run(a, cfg, Method::DE_GEAP);
}

SolveResult solve(const SymmetricTensor& a, const SolveConfig& cfg) { return run(a, cfg, cfg.method()); }

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::vector<double> random_start(std::size_t n, std::uint64_t master_seed, std::uint64_t trial) {
  std::uint64_t key = master_seed;
  std::uint64_t state = splitmix64(key) ^ (trial * 0xD1B54A32D192ED03ULL);
  std::vector<double> x(n);
  while (true) {
    for (double& xi : x) {
      const double unit = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
      xi = 2.0 * unit - 1.0;
    }
    const double nx = norm2(x);
    if (nx > 1e-8) {
      for (double& xi : x) xi /= nx;
      return x;
    }
  }
}

}  // namespace zeig
