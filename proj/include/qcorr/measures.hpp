#pragma once

// Correlation quantifiers for two-qubit density matrices: concurrence, the
// Horodecki Bell-CHSH quantity, measurement-induced disturbance (MID) and
// geometric quantum discord (GQD).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <utility>

#include "qcorr/error.hpp"
#include "qcorr/linalg.hpp"

namespace qcorr {

inline constexpr double kStateTraceTol = 1e-10;
inline constexpr double kStateNegativeTol = 1e-10;
inline constexpr double kDegenerateGap = 1e-10;

/// A validated two-qubit state: 4x4, Hermitian, unit trace, PSD.
/// Only `validate_state` creates one.
class DensityMatrix {
 public:
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  cplx operator()(std::size_t i, std::size_t j) const { return matrix_(i, j); }

 private:
  explicit DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {}
  friend DensityMatrix validate_state(const ComplexMatrix& matrix);

  ComplexMatrix matrix_;
};

inline DensityMatrix validate_state(const ComplexMatrix& matrix) {
  char buf[128];
  if (matrix.dim() != 4) {
    throw Error(ErrorKind::DomainError, "two-qubit state must be 4x4, got dim " + std::to_string(matrix.dim()));
  }
  const double herm = hermiticity_deviation(matrix);
  if (!(herm < kHermitianTol)) {
    std::snprintf(buf, sizeof buf, "max |rho_jk - conj(rho_kj)| = %.3e exceeds %.0e", herm, kHermitianTol);
    throw Error(ErrorKind::NotHermitian, buf);
  }
  const double tr = matrix.trace().real();
  if (!(std::abs(tr - 1.0) <= kStateTraceTol)) {
    std::snprintf(buf, sizeof buf, "trace %.12g deviates from 1 by %.3e", tr, std::abs(tr - 1.0));
    throw Error(ErrorKind::TraceNotOne, buf);
  }
  const auto eig = hermitian_eigen(matrix);
  if (eig.eigenvalues.front() < -kStateNegativeTol) {
    std::snprintf(buf, sizeof buf, "smallest eigenvalue %.6e is below -%.0e", eig.eigenvalues.front(),
                  kStateNegativeTol);
    throw Error(ErrorKind::NotPositive, buf);
  }
  return DensityMatrix(matrix);
}

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

inline double squared_norm(const Vec3& v) { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; }

inline double squared_frobenius(const Mat3& m) {
  double s = 0.0;
  for (const auto& row : m) s += squared_norm(row);
  return s;
}

inline Mat3 transpose(const Mat3& m) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[j][i] = m[i][j];
  return out;
}

inline Mat3 multiply(const Mat3& a, const Mat3& b) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

/// Eigenvalues of a real symmetric 3x3 matrix, descending.
inline Vec3 symmetric_eigenvalues_desc(const Mat3& m) {
  ComplexMatrix c(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) c(i, j) = 0.5 * (m[i][j] + m[j][i]);
  const auto eig = hermitian_eigen(c);
  return {eig.eigenvalues[2], eig.eigenvalues[1], eig.eigenvalues[0]};
}

/// rho = 1/4 [I(x)I + sum x_i s_i(x)I + sum y_i I(x)s_i + sum t_ij s_i(x)s_j]
struct BlochDecomposition {
  Vec3 x{};
  Vec3 y{};
  Mat3 t{};
};

inline BlochDecomposition bloch_decompose(const DensityMatrix& rho) {
  const auto& m = rho.matrix();
  const auto expect = [&](const ComplexMatrix& op) { return (m * op).trace().real(); };
  const auto id = pauli::identity();

  BlochDecomposition out;
  std::array<ComplexMatrix, 3> sigma{pauli::x(), pauli::y(), pauli::z()};
  for (std::size_t i = 0; i < 3; ++i) {
    out.x[i] = expect(tensor_product(sigma[i], id));
    out.y[i] = expect(tensor_product(id, sigma[i]));
    for (std::size_t j = 0; j < 3; ++j) out.t[i][j] = expect(tensor_product(sigma[i], sigma[j]));
  }
  return out;
}

/// Inverse of `bloch_decompose`.
inline ComplexMatrix bloch_reconstruct(const BlochDecomposition& b) {
  const auto id = pauli::identity();
  ComplexMatrix out = ComplexMatrix::identity(4);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto si = pauli::by_index(i);
    out += b.x[i] * tensor_product(si, id);
    out += b.y[i] * tensor_product(id, si);
    for (std::size_t j = 0; j < 3; ++j) out += b.t[i][j] * tensor_product(si, pauli::by_index(j));
  }
  return out * 0.25;
}

struct BellQuantities {
  Vec3 u{};  // eigenvalues of T^t T, descending
  double m = 0.0;
  double violation = 0.0;
};

inline BellQuantities bell_quantities(const BlochDecomposition& bloch) {
  BellQuantities out;
  out.u = symmetric_eigenvalues_desc(multiply(transpose(bloch.t), bloch.t));
  out.m = out.u[0] + out.u[1];
  out.violation = std::max(0.0, out.m - 1.0);
  return out;
}

inline BellQuantities bell_quantities(const DensityMatrix& rho) { return bell_quantities(bloch_decompose(rho)); }

struct ConcurrenceQuantities {
  std::array<double, 4> lambdas{};  // descending
  double concurrence = 0.0;
};

/// Wootters concurrence with S = sigma_y (x) sigma_y. `lambdas` are the
/// square roots of the eigenvalues of rho S rho* S.
inline ConcurrenceQuantities concurrence(const DensityMatrix& rho) {
  const auto& m = rho.matrix();
  const auto spin_flip = tensor_product(pauli::y(), pauli::y());
  const auto sqrt_rho = matrix_function_hermitian(m, [](double l) { return std::sqrt(std::max(l, 0.0)); });
  // The square roots of the eigenvalues of rho S rho* S are the singular
  // values of sqrt(rho) S sqrt(rho)*.
  const auto sv = singular_values(sqrt_rho * spin_flip * sqrt_rho.conjugate());

  ConcurrenceQuantities out;
  for (std::size_t k = 0; k < 4; ++k) out.lambdas[k] = sv[k];
  const double sum = out.lambdas[0] + out.lambdas[1] + out.lambdas[2] + out.lambdas[3];
  out.concurrence = std::clamp(2.0 * out.lambdas[0] - sum, 0.0, 1.0);
  return out;
}

inline double mutual_information(const DensityMatrix& rho) {
  const auto& m = rho.matrix();
  return von_neumann_entropy(partial_trace(m, Subsystem::A)) + von_neumann_entropy(partial_trace(m, Subsystem::B)) -
         von_neumann_entropy(m);
}

struct LocalBasis {
  std::array<double, 2> spectrum{};          // descending
  std::array<ComplexMatrix, 2> projectors;   // paired with spectrum
  bool degenerate = false;
};

/// Eigenprojectors of a 2x2 marginal, ordered by descending eigenvalue.
/// Falls back to the computational basis when the spectral gap is below
/// `kDegenerateGap`, since the resolution is then not unique.
inline LocalBasis marginal_basis(const ComplexMatrix& marginal) {
  const auto eig = hermitian_eigen(marginal);
  LocalBasis out;
  out.spectrum = {eig.eigenvalues[1], eig.eigenvalues[0]};
  out.degenerate = (eig.eigenvalues[1] - eig.eigenvalues[0]) < kDegenerateGap;
  for (std::size_t k = 0; k < 2; ++k) {
    ComplexMatrix proj(2);
    if (out.degenerate) {
      proj(k, k) = 1.0;
    } else {
      const std::size_t col = 1 - k;
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
          proj(i, j) = eig.eigenvectors(i, col) * std::conj(eig.eigenvectors(j, col));
    }
    out.projectors[k] = std::move(proj);
  }
  return out;
}

struct ClassicalProjection {
  DensityMatrix projected;
  LocalBasis basis_a;
  LocalBasis basis_b;
};

/// Pi(rho) = sum_ij (P_i^a (x) P_j^b) rho (P_i^a (x) P_j^b), with P^a, P^b the
/// spectral projectors of the marginals.
inline ClassicalProjection classical_projection(const DensityMatrix& rho) {
  const auto& m = rho.matrix();
  auto basis_a = marginal_basis(partial_trace(m, Subsystem::A));
  auto basis_b = marginal_basis(partial_trace(m, Subsystem::B));

  ComplexMatrix projected(4);
  for (const auto& pa : basis_a.projectors)
    for (const auto& pb : basis_b.projectors) {
      const auto p = tensor_product(pa, pb);
      projected += p * m * p;
    }
  return ClassicalProjection{validate_state(projected), std::move(basis_a), std::move(basis_b)};
}

struct MidQuantities {
  std::array<double, 2> marginal_spectrum_a{};
  std::array<double, 2> marginal_spectrum_b{};
  DensityMatrix projected;
  double total_mi = 0.0;
  double classical_mi = 0.0;
  double raw_mid = 0.0;  // I(rho) - I(Pi(rho)), unclamped
  double mid = 0.0;      // max(0, raw_mid)
  bool degenerate_a = false;
  bool degenerate_b = false;
};

inline MidQuantities mid(const DensityMatrix& rho) {
  auto proj = classical_projection(rho);
  const double total = mutual_information(rho);
  const double classical = mutual_information(proj.projected);
  const double raw = total - classical;
  return MidQuantities{proj.basis_a.spectrum,
                       proj.basis_b.spectrum,
                       std::move(proj.projected),
                       total,
                       classical,
                       raw,
                       std::max(0.0, raw),
                       proj.basis_a.degenerate,
                       proj.basis_b.degenerate};
}

struct GqdQuantities {
  double k_max = 0.0;  // top eigenvalue of x x^t + T T^t
  double gqd = 0.0;
};

inline GqdQuantities gqd(const BlochDecomposition& bloch) {
  Mat3 k = multiply(bloch.t, transpose(bloch.t));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) k[i][j] += bloch.x[i] * bloch.x[j];
  GqdQuantities out;
  out.k_max = symmetric_eigenvalues_desc(k)[0];
  out.gqd = std::max(0.0, 0.25 * (squared_norm(bloch.x) + squared_frobenius(bloch.t) - out.k_max));
  return out;
}

inline GqdQuantities gqd(const DensityMatrix& rho) { return gqd(bloch_decompose(rho)); }

struct MeasureReport {
  BlochDecomposition bloch;
  BellQuantities bell;
  ConcurrenceQuantities conc;
  MidQuantities mid;
  GqdQuantities gqd;
};

inline MeasureReport full_report(const DensityMatrix& rho) {
  auto bloch = bloch_decompose(rho);
  auto bell = bell_quantities(bloch);
  auto g = gqd(bloch);
  return MeasureReport{bloch, bell, concurrence(rho), mid(rho), g};
}

}  // namespace qcorr
