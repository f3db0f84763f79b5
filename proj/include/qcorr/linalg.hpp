#pragma once

// Dense complex kernel for the small (2x2, 3x3, 4x4) Hermitian operators that
// show up in two-qubit problems. Nothing here is tuned for large dimensions.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qcorr/error.hpp"

namespace qcorr {

using cplx = std::complex<double>;

inline constexpr double kHermitianTol = 1e-12;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  explicit ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {}

  ComplexMatrix(std::size_t dim, std::vector<cplx> entries) : dim_(dim), entries_(std::move(entries)) {
    if (entries_.size() != dim_ * dim_) {
      throw Error(ErrorKind::DomainError, "entry count " + std::to_string(entries_.size()) +
                                              " does not match dim^2 = " + std::to_string(dim_ * dim_));
    }
  }

  /// Row-major initializer: `ComplexMatrix{{a, b}, {c, d}}`.
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) : dim_(rows.size()) {
    entries_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
      if (row.size() != dim_) throw Error(ErrorKind::DomainError, "matrix initializer is not square");
      entries_.insert(entries_.end(), row.begin(), row.end());
    }
  }

  static ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> diag) {
    ComplexMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
  }

  static ComplexMatrix diagonal(std::initializer_list<double> diag) {
    return diagonal(std::span<const double>(diag.begin(), diag.size()));
  }

  std::size_t dim() const noexcept { return dim_; }
  std::span<const cplx> entries() const noexcept { return entries_; }

  cplx& operator()(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }
  const cplx& operator()(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  /// Entrywise complex conjugate (not the adjoint).
  ComplexMatrix conjugate() const {
    ComplexMatrix out(dim_);
    std::transform(entries_.begin(), entries_.end(), out.entries_.begin(),
                   [](const cplx& z) { return std::conj(z); });
    return out;
  }

  cplx trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& rhs) {
    check_same_dim(rhs);
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += rhs.entries_[k];
    return *this;
  }

  ComplexMatrix& operator-=(const ComplexMatrix& rhs) {
    check_same_dim(rhs);
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= rhs.entries_[k];
    return *this;
  }

  ComplexMatrix& operator*=(cplx scale) {
    for (auto& z : entries_) z *= scale;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
  friend ComplexMatrix operator*(ComplexMatrix lhs, cplx scale) { return lhs *= scale; }
  friend ComplexMatrix operator*(cplx scale, ComplexMatrix rhs) { return rhs *= scale; }

  friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    lhs.check_same_dim(rhs);
    const std::size_t n = lhs.dim_;
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const cplx a = lhs(i, k);
        if (a == cplx{}) continue;
        for (std::size_t j = 0; j < n; ++j) out(i, j) += a * rhs(k, j);
      }
    return out;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  void check_same_dim(const ComplexMatrix& rhs) const {
    if (rhs.dim_ != dim_) {
      throw Error(ErrorKind::DomainError,
                  "dimension mismatch " + std::to_string(dim_) + " vs " + std::to_string(rhs.dim_));
    }
  }

  std::size_t dim_ = 0;
  std::vector<cplx> entries_;
};

/// max_jk |a_jk - b_jk|
inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) return INFINITY;
  double worst = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k)
    worst = std::max(worst, std::abs(a.entries()[k] - b.entries()[k]));
  return worst;
}

/// max_jk |A_jk - conj(A_kj)|
inline double hermiticity_deviation(const ComplexMatrix& a) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i; j < a.dim(); ++j) worst = std::max(worst, std::abs(a(i, j) - std::conj(a(j, i))));
  return worst;
}

inline bool is_hermitian(const ComplexMatrix& a) { return hermiticity_deviation(a) < kHermitianTol; }

// Pauli matrices in the basis (|1>, |0>) where |1> is the sigma_z = +1 state.
namespace pauli {
inline ComplexMatrix identity() { return ComplexMatrix::identity(2); }
inline ComplexMatrix x() { return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix y() { return ComplexMatrix{{0.0, cplx(0.0, -1.0)}, {cplx(0.0, 1.0), 0.0}}; }
inline ComplexMatrix z() { return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}}; }

/// sigma_1, sigma_2, sigma_3 for index 0, 1, 2.
inline ComplexMatrix by_index(std::size_t i) {
  switch (i) {
    case 0: return x();
    case 1: return y();
    case 2: return z();
    default: throw Error(ErrorKind::DomainError, "Pauli index out of range: " + std::to_string(i));
  }
}
}  // namespace pauli

/// Kronecker product: (A (x) B)(i*n + p, j*n + q) = A(i, j) * B(p, q).
inline ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t m = a.dim();
  const std::size_t n = b.dim();
  ComplexMatrix out(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) out(i * n + p, j * n + q) = a(i, j) * b(p, q);
  return out;
}

enum class Subsystem { A, B };

/// Reduced 2x2 state of a 4x4 operator; `keep` names the qubit that survives.
inline ComplexMatrix partial_trace(const ComplexMatrix& rho, Subsystem keep) {
  if (rho.dim() != 4) throw Error(ErrorKind::DomainError, "partial_trace expects a 4x4 matrix");
  ComplexMatrix out(2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) {
        if (keep == Subsystem::A) {
          out(i, j) += rho(i * 2 + k, j * 2 + k);
        } else {
          out(i, j) += rho(k * 2 + i, k * 2 + j);
        }
      }
  return out;
}

struct HermitianEigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column k pairs with eigenvalues[k]

  std::vector<cplx> eigenvector(std::size_t k) const {
    std::vector<cplx> v(eigenvectors.dim());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = eigenvectors(i, k);
    return v;
  }
};

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (i != j) sum += std::norm(a(i, j));
  return std::sqrt(sum);
}

inline double frobenius_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (const auto& z : a.entries()) sum += std::norm(z);
  return std::sqrt(sum);
}

}  // namespace detail

inline constexpr double kJacobiTol = 1e-14;
inline constexpr int kJacobiMaxSweeps = 100;

/// Cyclic complex Jacobi. Each (p, q) rotation first removes the phase of
/// a_pq and then applies a real symmetric Jacobi rotation, so the transform
/// stays unitary and the diagonal stays real.
///
/// Eigenvalues come back ascending (stable order for ties) and each
/// eigenvector is rotated so its first largest-modulus component is real and
/// non-negative.
inline HermitianEigenDecomposition hermitian_eigen(const ComplexMatrix& input) {
  const double dev = hermiticity_deviation(input);
  if (!(dev < kHermitianTol)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "max |A_jk - conj(A_kj)| = %.3e exceeds %.0e", dev, kHermitianTol);
    throw Error(ErrorKind::NotHermitian, buf);
  }

  const std::size_t n = input.dim();
  ComplexMatrix a = input;
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = detail::frobenius_norm(a);
  const double target = kJacobiTol * std::max(scale, 1.0);
  bool converged = detail::off_diagonal_norm(a) <= target;

  for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r == 0.0) continue;
        const cplx phase = a(p, q) / r;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // G = diag(1, e^{-i phi}) * [[c, s], [-s, c]] restricted to (p, q).
        const cplx gpp = c;
        const cplx gpq = s;
        const cplx gqp = -s * std::conj(phase);
        const cplx gqq = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();

        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = vkp * gpp + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * gqq;
        }
      }
    }
    converged = detail::off_diagonal_norm(a) <= target;
  }
  if (!converged) {
    throw Error(ErrorKind::NumericalFailure,
                "Jacobi eigensolver did not converge in " + std::to_string(kJacobiMaxSweeps) + " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return a(l, l).real() < a(r, r).real(); });

  HermitianEigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n);
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t src = order[col];
    out.eigenvalues[col] = a(src, src).real();

    double biggest = 0.0;
    for (std::size_t i = 0; i < n; ++i) biggest = std::max(biggest, std::abs(v(i, src)));
    std::size_t pivot = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(v(i, src)) >= biggest - 1e-12) {
        pivot = i;
        break;
      }
    }
    const cplx unphase = std::conj(v(pivot, src)) / std::abs(v(pivot, src));
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, col) = v(i, src) * unphase;
    out.eigenvectors(pivot, col) = std::abs(v(pivot, src));
  }
  return out;
}

/// Singular values in descending order, by one-sided Jacobi on the columns.
/// Small singular values keep absolute accuracy near machine epsilon times
/// the norm, unlike square roots of eigenvalues of A^dagger A.
inline std::vector<double> singular_values(const ComplexMatrix& input) {
  ComplexMatrix a = input;
  const std::size_t n = a.dim();
  bool converged = n < 2;
  for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0;
        cplx gamma = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          alpha += std::norm(a(i, p));
          beta += std::norm(a(i, q));
          gamma += std::conj(a(i, p)) * a(i, q);
        }
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= 1e-15 * std::sqrt(alpha * beta)) continue;
        converged = false;
        const cplx unphase = std::conj(gamma) / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < n; ++i) {
          const cplx ap = a(i, p);
          const cplx aq = a(i, q) * unphase;
          a(i, p) = c * ap - s * aq;
          a(i, q) = s * ap + c * aq;
        }
      }
    }
  }
  if (!converged) throw Error(ErrorKind::NumericalFailure, "singular value iteration did not converge");

  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += std::norm(a(i, j));
    out[j] = std::sqrt(sum);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

/// V diag(f(lambda)) V^dagger. `f` maps double to double or to cplx.
template <typename Fn>
ComplexMatrix matrix_function_hermitian(const ComplexMatrix& a, Fn&& f) {
  const auto eig = hermitian_eigen(a);
  const std::size_t n = a.dim();
  std::vector<cplx> fvals(n);
  for (std::size_t k = 0; k < n; ++k) fvals[k] = cplx(f(eig.eigenvalues[k]));

  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx sum = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        sum += eig.eigenvectors(i, k) * fvals[k] * std::conj(eig.eigenvectors(j, k));
      out(i, j) = sum;
    }
  return out;
}

inline constexpr double kEntropyTraceTol = 1e-8;
inline constexpr double kEntropyNegativeTol = 1e-10;

/// Shannon entropy in bits of a probability vector; entries in
/// (-1e-10, 0) count as zero.
inline double shannon_entropy_bits(std::span<const double> probabilities) {
  double s = 0.0;
  for (double p : probabilities) {
    if (p < -kEntropyNegativeTol) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "eigenvalue %.3e below -%.0e", p, kEntropyNegativeTol);
      throw Error(ErrorKind::NotAState, buf);
    }
    if (p > 0.0) s -= p * std::log2(p);
  }
  return s;
}

/// -tr(rho log2 rho)
inline double von_neumann_entropy(const ComplexMatrix& rho) {
  const double tr = rho.trace().real();
  if (!(std::abs(tr - 1.0) <= kEntropyTraceTol)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "trace %.12g deviates from 1 by %.3e", tr, std::abs(tr - 1.0));
    throw Error(ErrorKind::NotAState, buf);
  }
  const auto eig = hermitian_eigen(rho);
  return shannon_entropy_bits(eig.eigenvalues);
}

/// (1/2) ||a - b||_1 for Hermitian a, b.
inline double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  const auto eig = hermitian_eigen(a - b);
  double sum = 0.0;
  for (double lambda : eig.eigenvalues) sum += std::abs(lambda);
  return 0.5 * sum;
}

}  // namespace qcorr
