#include "zeig/denselin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace zeig {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::max_abs() const {
  double mx = 0.0;
  for (double v : data_) mx = std::max(mx, std::abs(v));
  return mx;
}

double Matrix::frobenius() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: dimension mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix sum: dimension mismatch");
  Matrix c = a;
  auto cd = c.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < cd.size(); ++i) cd[i] += bd[i];
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) { return a + (-1.0) * b; }

Matrix operator*(double s, const Matrix& a) {
  Matrix c = a;
  for (double& v : c.data()) v *= s;
  return c;
}

std::vector<double> operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("matrix-vector product: dimension mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

SymMatrix::SymMatrix(Matrix a) : m_(std::move(a)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("SymMatrix: matrix is not square");
  const std::size_t n = m_.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (m_(i, j) + m_(j, i));
      m_(i, j) = avg;
      m_(j, i) = avg;
    }
}

double asymmetry(const Matrix& a) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - a(j, i)));
  return d;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

namespace {

double off_diagonal_mass(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

int first_nonzero_sign(const Matrix& v, std::size_t col) {
  for (std::size_t i = 0; i < v.rows(); ++i) {
    if (v(i, col) > 0.0) return 1;
    if (v(i, col) < 0.0) return -1;
  }
  return 0;
}

}  // namespace

Spectrum eigh(const SymMatrix& sym) {
  const std::size_t n = sym.dim();
  Matrix a = sym.matrix();
  for (double v : a.data())
    if (!std::isfinite(v)) throw std::invalid_argument("eigh: non-finite matrix entry");

  Matrix v = Matrix::identity(n);
  const double scale = a.frobenius();
  constexpr int kMaxSweeps = 100;

  double off = off_diagonal_mass(a);
  int sweep = 0;
  while (off > 1e-14 * scale) {
    if (sweep++ == kMaxSweeps)
      throw ConvergenceError("eigh: Jacobi sweep cap reached", off);
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    off = off_diagonal_mass(a);
  }

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t i, std::size_t j) {
    if (a(i, i) != a(j, j)) return a(i, i) < a(j, j);
    return first_nonzero_sign(v, i) < first_nonzero_sign(v, j);
  });

  Spectrum out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(perm[j], perm[j]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, perm[j]);
  }
  return out;
}

double lambda_min(const SymMatrix& a) {
  if (a.dim() == 0) throw std::invalid_argument("lambda_min: empty matrix");
  return eigh(a).values.front();
}

double lambda_max(const SymMatrix& a) {
  if (a.dim() == 0) throw std::invalid_argument("lambda_max: empty matrix");
  return eigh(a).values.back();
}

double spectral_radius(const SymMatrix& a) {
  if (a.dim() == 0) return 0.0;
  const auto spec = eigh(a);
  return std::max(std::abs(spec.values.front()), std::abs(spec.values.back()));
}

namespace {

// Elimination with pivoting to upper Hessenberg form (1-based indexing over a
// 0-based matrix through `h`).
void reduce_to_hessenberg(Matrix& a) {
  const std::size_t n = a.rows();
  auto h = [&](std::size_t i, std::size_t j) -> double& { return a(i - 1, j - 1); };
  for (std::size_t m = 2; m < n; ++m) {
    double x = 0.0;
    std::size_t piv = m;
    for (std::size_t j = m; j <= n; ++j) {
      if (std::abs(h(j, m - 1)) > std::abs(x)) {
        x = h(j, m - 1);
        piv = j;
      }
    }
    if (piv != m) {
      for (std::size_t j = m - 1; j <= n; ++j) std::swap(h(piv, j), h(m, j));
      for (std::size_t j = 1; j <= n; ++j) std::swap(h(j, piv), h(j, m));
    }
    if (x != 0.0) {
      for (std::size_t i = m + 1; i <= n; ++i) {
        double y = h(i, m - 1);
        if (y == 0.0) continue;
        y /= x;
        h(i, m - 1) = y;
        for (std::size_t j = m; j <= n; ++j) h(i, j) -= y * h(m, j);
        for (std::size_t j = 1; j <= n; ++j) h(j, m) += y * h(j, i);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j + 1 < i; ++j) a(i, j) = 0.0;
}

double with_sign(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

// Francis double-shift QR on an upper Hessenberg matrix.
std::vector<std::complex<double>> hessenberg_eigenvalues(Matrix& a) {
  const int n = static_cast<int>(a.rows());
  auto h = [&](int i, int j) -> double& { return a(i - 1, j - 1); };
  std::vector<double> wr(n + 1, 0.0), wi(n + 1, 0.0);

  double anorm = 0.0;
  for (int i = 1; i <= n; ++i)
    for (int j = std::max(i - 1, 1); j <= n; ++j) anorm += std::abs(h(i, j));

  int nn = n;
  double t = 0.0;
  constexpr int kMaxIts = 60;
  while (nn >= 1) {
    int its = 0;
    int l = 0;
    do {
      for (l = nn; l >= 2; --l) {
        double s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(h(l, l - 1)) + s == s) {
          h(l, l - 1) = 0.0;
          break;
        }
      }
      double x = h(nn, nn);
      if (l == nn) {
        wr[nn] = x + t;
        wi[nn--] = 0.0;
      } else {
        double y = h(nn - 1, nn - 1);
        double w = h(nn, nn - 1) * h(nn - 1, nn);
        if (l == nn - 1) {
          const double p = 0.5 * (y - x);
          const double q = p * p + w;
          double z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + with_sign(z, p);
            wr[nn - 1] = wr[nn] = x + z;
            if (z != 0.0) wr[nn] = x - w / z;
            wi[nn - 1] = wi[nn] = 0.0;
          } else {
            wr[nn - 1] = wr[nn] = x + p;
            wi[nn - 1] = -(wi[nn] = z);
          }
          nn -= 2;
        } else {
          if (its == kMaxIts) throw std::runtime_error("eig_general: QR iteration did not converge");
          if (its == 10 || its == 20 || its == 40) {
            t += x;
            for (int i = 1; i <= nn; ++i) h(i, i) -= x;
            const double s = std::abs(h(nn, nn - 1)) + std::abs(h(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m = nn - 2;
          double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
          for (; m >= l; --m) {
            z = h(m, m);
            r = x - z;
            double s = y - z;
            p = (r * s - w) / h(m + 1, m) + h(m, m + 1);
            q = h(m + 1, m + 1) - z - r - s;
            r = h(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const double u = std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v = std::abs(p) * (std::abs(h(m - 1, m - 1)) + std::abs(z) + std::abs(h(m + 1, m + 1)));
            if (u + v == v) break;
          }
          for (int i = m + 2; i <= nn; ++i) {
            h(i, i - 2) = 0.0;
            if (i != m + 2) h(i, i - 3) = 0.0;
          }
          for (int k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = h(k, k - 1);
              q = h(k + 1, k - 1);
              r = 0.0;
              if (k != nn - 1) r = h(k + 2, k - 1);
              if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            const double s = with_sign(std::sqrt(p * p + q * q + r * r), p);
            if (s != 0.0) {
              if (k == m) {
                if (l != m) h(k, k - 1) = -h(k, k - 1);
              } else {
                h(k, k - 1) = -s * x;
              }
              p += s;
              x = p / s;
              y = q / s;
              z = r / s;
              q /= p;
              r /= p;
              for (int j = k; j <= nn; ++j) {
                p = h(k, j) + q * h(k + 1, j);
                if (k != nn - 1) {
                  p += r * h(k + 2, j);
                  h(k + 2, j) -= p * z;
                }
                h(k + 1, j) -= p * y;
                h(k, j) -= p * x;
              }
              const int mmin = nn < k + 3 ? nn : k + 3;
              for (int i = l; i <= mmin; ++i) {
                p = x * h(i, k) + y * h(i, k + 1);
                if (k != nn - 1) {
                  p += z * h(i, k + 2);
                  h(i, k + 2) -= p * r;
                }
                h(i, k + 1) -= p * q;
                h(i, k) -= p;
              }
            }
          }
        }
      }
    } while (l < nn - 1);
  }

  std::vector<std::complex<double>> out;
  out.reserve(n);
  for (int i = 1; i <= n; ++i) out.emplace_back(wr[i], wi[i]);
  return out;
}

}  // namespace

std::vector<std::complex<double>> eig_general(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eig_general: matrix is not square");
  for (double v : a.data())
    if (!std::isfinite(v)) throw std::invalid_argument("eig_general: non-finite matrix entry");
  if (a.rows() == 0) return {};
  Matrix h = a;
  reduce_to_hessenberg(h);
  return hessenberg_eigenvalues(h);
}

Matrix ortho_complement(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) throw std::invalid_argument("ortho_complement: empty vector");
  if (std::abs(norm2(x) - 1.0) > 1e-12)
    throw std::invalid_argument("ortho_complement: vector is not unit length");

  // w = e_1 - s x with s = -sign(x_1) keeps |w_1| >= 1.
  const double s = x[0] >= 0.0 ? -1.0 : 1.0;
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = -s * x[i];
  w[0] += 1.0;
  const double ww = dot(w, w);

  Matrix u(n, n - 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 1; j < n; ++j)
      u(i, j - 1) = (i == j ? 1.0 : 0.0) - 2.0 * w[i] * w[j] / ww;
  return u;
}

std::vector<double> solve_linear(Matrix a, std::vector<double> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw std::invalid_argument("solve_linear: dimension mismatch");
  const double scale = std::max(a.max_abs(), 1e-300);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (std::abs(a(piv, k)) <= 1e-14 * scale) throw std::runtime_error("solve_linear: singular matrix");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  std::vector<double> y(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * y[j];
    y[i] = s / a(i, i);
  }
  return y;
}

}  // namespace zeig
