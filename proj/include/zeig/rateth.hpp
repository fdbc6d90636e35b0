#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "zeig/denselin.hpp"
#include "zeig/iterate.hpp"
#include "zeig/symtensor.hpp"

namespace zeig {

/// Jacobian of the normalized shifted map at an eigenpair,
///   J = [(m-1)(A x^{m-2} - lambda x x^T) + alpha (I - x x^T)] / (lambda + alpha).
/// Throws std::domain_error when |lambda + alpha| <= 1e-12.
SymMatrix sshopm_jacobian(const SymmetricTensor& a, double lambda, std::span<const double> x, double alpha);

/// Two-step extrapolation Jacobian [(1-gamma) J, gamma J; I, 0].
Matrix augmented_jacobian(const SymMatrix& j, double gamma);

/// Roots of a^2 - (1-gamma) mu a - gamma mu = 0, the two eigenvalues of the
/// augmented Jacobian attached to an eigenvalue mu of J.
std::array<std::complex<double>, 2> augmented_roots(double mu, double gamma);

/// Extrapolation weight minimizing the augmented spectral radius,
/// ((rho - 2) + 2 sqrt(1 - rho)) / rho. Requires rho in (0, 1).
double gamma_opt(double rho);

/// Rate obtained at gamma_opt: 1 - sqrt(1 - rho).
double rho_opt(double rho);

/// Spectral radius of the augmented Jacobian for base rate rho. Real branch
/// for gamma in [gamma_opt, 0], sqrt(-gamma rho) below gamma_opt.
double rho_gamma(double rho, double gamma);

/// Sampled lower bound on beta(A) = (m-1) max_{|x|=1} rho(A x^{m-2}).
double beta_estimate(const SymmetricTensor& a, int samples, std::uint64_t seed);

/// beta_estimate scaled by a safety factor, as a candidate convex shift.
double suggest_shift(const SymmetricTensor& a, int samples, std::uint64_t seed, double safety = 1.1);

/// U^T ((m-1) A x^{m-2} - lambda I) U with U an orthonormal basis of x-perp.
SymMatrix projected_hessian(const SymmetricTensor& a, double lambda, std::span<const double> x);

inline constexpr double kClassifyThreshold = 1e-8;
inline constexpr double kClassifyResidual = 1e-10;

/// Stability from the signs of the projected Hessian eigenvalues. Rejects
/// pairs whose residual exceeds kClassifyResidual.
Stability classify(const SymmetricTensor& a, double lambda, std::span<const double> x);

/// Polishes an approximate eigenpair with Newton's method and classifies the
/// result. Useful for pairs known only to a few digits.
std::pair<Eigenpair, Stability> refine_and_classify(const SymmetricTensor& a, double lambda,
                                                    std::vector<double> x);

/// Asymptotic rate measured from a residual history.
///
/// The window starts at the first residual <= `upper` and runs while the
/// residual stays >= `lower`. `rate` is the geometric mean over the window
/// of the second-order estimate
///   (s1 - sqrt(max(0, s1^2 - s0 s2))) / s0,
/// which is exact both for c rho^k and for the (c + d k) rho^k decay of a
/// defective dominant eigenvalue (the extrapolated iteration at gamma_opt).
/// `geometric_mean` is the plain mean of successive ratios over the same
/// window. Both are empty when the window has fewer than `min_points`.
struct RateEstimate {
  std::optional<double> rate;
  std::optional<double> geometric_mean;
  std::size_t window_start = 0;
  std::size_t window_size = 0;
};

RateEstimate estimate_rate(std::span<const double> residuals, double lower = 1e-12, double upper = 1e-4,
                           std::size_t min_points = 5);

std::vector<double> residual_history(const SolveTrace& trace);

struct RateReport {
  double alpha = 0.0;
  double gamma = 0.0;
  Eigenpair eigenpair;
  double rho = 0.0;
  std::optional<double> gamma_opt;
  std::optional<double> rho_opt;
  std::optional<double> predicted;  // rho_gamma(rho, gamma)
  std::vector<std::pair<double, double>> rho_gamma_curve;
  std::optional<double> measured_rate;
  std::optional<double> measured_geometric_mean;
  bool oscillatory = false;  // gamma < gamma_opt
  bool converged = true;
  int iterations = 0;
};

/// Fills the theoretical part of a report for a converged eigenpair under
/// static shift alpha: rho = lambda_max(J), gamma_opt, rho_opt and a
/// `curve_points`-point rho_gamma curve over (-1, 0]. Rate claims are skipped
/// (optional fields left empty) when rho is outside (0, 1).
RateReport predict_rates(const SymmetricTensor& a, const Eigenpair& pair, double alpha, double gamma,
                         int curve_points = 101);

}  // namespace zeig
