#pragma once

// Two-site spin models and their thermal states.
//
// Basis convention for every 4x4 operator in this file:
//   index 0 = |1,1>, 1 = |1,0>, 2 = |0,1>, 3 = |0,0>
// where |1> is the sigma_z = +1 state of a site and the first label is site 1.
// With this ordering the Kronecker product of the standard Pauli matrices
// (pauli::x/y/z) acts directly in the same basis.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <type_traits>
#include <variant>

#include "qcorr/error.hpp"
#include "qcorr/linalg.hpp"
#include "qcorr/measures.hpp"

namespace qcorr {

/// H = 1/2 [J (sx sx + sy sy) + Jz sz sz + (B + b) sz_1 + (B - b) sz_2]
struct XxzParams {
  double J = 0.0;
  double Jz = 0.0;
  double B = 0.0;
  double b = 0.0;
  double T = 1.0;
};

/// H = J/2 [s1 . s2 + D (s1 x s2)_z]
struct XxxDmParams {
  double J = 0.0;
  double D = 0.0;
  double T = 1.0;
};

struct XxzThermalIntermediates {
  double eta = 0.0;  // sqrt(b^2 + J^2)
  double m = 1.0;    // cosh(eta / T)
  double n = 0.0;    // b sinh(eta / T) / eta
  double s = 0.0;    // e^{Jz / 2T} J sinh(eta / T) / eta
  double Z = 0.0;
};

struct XxxDmThermalIntermediates {
  double delta = 0.0;  // 2 J sqrt(1 + D^2)
  double Z = 0.0;
  double L_plus = 0.0;   // e^{(J + delta) / 2T}
  double L_minus = 0.0;  // e^{(J - delta) / 2T}
  double M_plus = 0.0;   // 1 + e^{delta / T}
  double M_minus = 0.0;  // -1 + e^{delta / T}
  double theta = 0.0;    // arg(1 + iD)
};

struct HamiltonianSpec {
  ComplexMatrix matrix;
  std::string label;
};

inline constexpr double kExponentLimit = 700.0;

namespace detail {

inline void check_temperature(double T) {
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw Error(ErrorKind::DomainError, "temperature must be positive and finite, got " + std::to_string(T));
  }
}

inline void check_finite(std::initializer_list<double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::DomainError, std::string("non-finite parameter in ") + what);
  }
}

inline void check_exponents(std::initializer_list<double> exponents) {
  for (double e : exponents) {
    if (e > kExponentLimit) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "Boltzmann exponent %.6g exceeds %.0f", e, kExponentLimit);
      throw Error(ErrorKind::Overflow, buf);
    }
  }
}

}  // namespace detail

inline HamiltonianSpec xxz_hamiltonian(const XxzParams& p) {
  const auto id = pauli::identity();
  const auto sx = pauli::x();
  const auto sy = pauli::y();
  const auto sz = pauli::z();
  ComplexMatrix h = p.J * (tensor_product(sx, sx) + tensor_product(sy, sy));
  h += p.Jz * tensor_product(sz, sz);
  h += (p.B + p.b) * tensor_product(sz, id);
  h += (p.B - p.b) * tensor_product(id, sz);
  return {h * 0.5, "xxz"};
}

inline HamiltonianSpec xxx_dm_hamiltonian(const XxxDmParams& p) {
  const auto sx = pauli::x();
  const auto sy = pauli::y();
  const auto sz = pauli::z();
  ComplexMatrix h = tensor_product(sx, sx) + tensor_product(sy, sy) + tensor_product(sz, sz);
  h += p.D * (tensor_product(sx, sy) - tensor_product(sy, sx));
  return {h * (0.5 * p.J), "xxx_dm"};
}

/// e^{-H/T} / Z, evaluated with energies measured from the ground state.
inline DensityMatrix gibbs_state(const HamiltonianSpec& h, double T) {
  detail::check_temperature(T);
  const auto eig = hermitian_eigen(h.matrix);
  const double ground = eig.eigenvalues.front();
  const std::size_t n = h.matrix.dim();

  std::vector<double> weights(n);
  double z = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    weights[k] = std::exp(-(eig.eigenvalues[k] - ground) / T);
    z += weights[k];
  }
  if (!std::isfinite(z) || !(z > 0.0)) {
    throw Error(ErrorKind::Overflow, "partition sum is not finite at T = " + std::to_string(T));
  }

  ComplexMatrix rho(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx sum = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        sum += eig.eigenvectors(i, k) * (weights[k] / z) * std::conj(eig.eigenvectors(j, k));
      rho(i, j) = sum;
    }
  return validate_state(rho);
}

/// Closed-form thermal state of the XXZ model. The matrix is assembled from
/// Boltzmann factors shifted by the largest exponent; the intermediates are
/// the unshifted textbook quantities.
inline std::pair<DensityMatrix, XxzThermalIntermediates> xxz_thermal_analytic(const XxzParams& p) {
  detail::check_temperature(p.T);
  detail::check_finite({p.J, p.Jz, p.B, p.b}, "XxzParams");
  const double T = p.T;
  const double eta = std::hypot(p.b, p.J);

  const double e11 = -(p.Jz + 2.0 * p.B) / (2.0 * T);
  const double e00 = -(p.Jz - 2.0 * p.B) / (2.0 * T);
  const double e_mid = p.Jz / (2.0 * T);
  const double e_hi = e_mid + eta / T;
  const double e_lo = e_mid - eta / T;
  detail::check_exponents({e11, e00, e_hi});

  // b / eta and J / eta; b = 0 is taken as the limit (n = 0, eta = |J|).
  double b_ratio = 0.0;
  double j_ratio = 0.0;
  if (eta > 0.0) {
    b_ratio = (p.b == 0.0) ? 0.0 : p.b / eta;
    j_ratio = (p.b == 0.0) ? std::copysign(1.0, p.J) : p.J / eta;
    if (p.J == 0.0) j_ratio = 0.0;
  }

  const double shift = std::max({e11, e00, e_hi});
  const double w11 = std::exp(e11 - shift);
  const double w00 = std::exp(e00 - shift);
  const double hi = std::exp(e_hi - shift);
  const double lo = std::exp(e_lo - shift);
  const double c = 0.5 * (hi + lo);  // e^{Jz/2T} cosh(eta/T), shifted
  const double s = 0.5 * (hi - lo);  // e^{Jz/2T} sinh(eta/T), shifted
  const double z = w11 + w00 + 2.0 * c;

  ComplexMatrix rho(4);
  rho(0, 0) = w11 / z;
  rho(1, 1) = (c - b_ratio * s) / z;
  rho(2, 2) = (c + b_ratio * s) / z;
  rho(3, 3) = w00 / z;
  rho(1, 2) = -j_ratio * s / z;
  rho(2, 1) = rho(1, 2);

  XxzThermalIntermediates mid;
  mid.eta = eta;
  mid.m = std::cosh(eta / T);
  const double sinh_ratio = (eta > 0.0) ? std::sinh(eta / T) / eta : 1.0 / T;
  mid.n = (p.b == 0.0) ? 0.0 : p.b * sinh_ratio;
  mid.s = std::exp(e_mid) * p.J * sinh_ratio;
  mid.Z = std::exp(e11) + std::exp(e00) + 2.0 * mid.m * std::exp(e_mid);

  return {validate_state(rho), mid};
}

/// Closed-form thermal state of the XXX model with a z-axis DM term.
inline std::pair<DensityMatrix, XxxDmThermalIntermediates> xxx_dm_thermal_analytic(const XxxDmParams& p) {
  detail::check_temperature(p.T);
  detail::check_finite({p.J, p.D}, "XxxDmParams");
  const double T = p.T;
  const double delta = 2.0 * p.J * std::sqrt(1.0 + p.D * p.D);
  const double theta = std::atan(p.D);

  const double e_corner = -p.J / (2.0 * T);
  const double e_plus = (p.J + delta) / (2.0 * T);
  const double e_minus = (p.J - delta) / (2.0 * T);
  detail::check_exponents({e_corner, e_plus, e_minus, delta / T});

  const double shift = std::max({e_corner, e_plus, e_minus});
  const double corner = std::exp(e_corner - shift);
  const double plus = std::exp(e_plus - shift);
  const double minus = std::exp(e_minus - shift);
  const double diag = 0.5 * (plus + minus);  // L- M+ / 2, shifted
  const double off = 0.5 * (plus - minus);   // L- M- / 2, shifted
  const double z = 2.0 * corner + 2.0 * diag;

  ComplexMatrix rho(4);
  rho(0, 0) = corner / z;
  rho(3, 3) = corner / z;
  rho(1, 1) = diag / z;
  rho(2, 2) = diag / z;
  rho(1, 2) = -(off / z) * std::polar(1.0, theta);
  rho(2, 1) = std::conj(rho(1, 2));

  XxxDmThermalIntermediates mid;
  mid.delta = delta;
  mid.theta = theta;
  mid.L_plus = std::exp(e_plus);
  mid.L_minus = std::exp(e_minus);
  mid.M_plus = 1.0 + std::exp(delta / T);
  mid.M_minus = -1.0 + std::exp(delta / T);
  mid.Z = 2.0 * std::exp(e_corner) + mid.L_minus * mid.M_plus;

  return {validate_state(rho), mid};
}

/// Closed form 1 / (2 (1 - 2 coth(J/T))^2), which equals GQD = m/4 for the
/// zero-field XXX thermal state.
inline double eq1_gqd_xxx(double J, double T) {
  detail::check_temperature(T);
  if (J == 0.0 || !std::isfinite(J)) {
    throw Error(ErrorKind::DomainError, "closed-form XXX discord needs a finite nonzero J");
  }
  const double coth = 1.0 / std::tanh(J / T);
  const double denom = 1.0 - 2.0 * coth;
  return 1.0 / (2.0 * denom * denom);
}

using ModelPoint = std::variant<XxzParams, XxxDmParams>;

inline HamiltonianSpec hamiltonian(const ModelPoint& point) {
  return std::visit(
      [](const auto& p) -> HamiltonianSpec {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, XxzParams>) {
          return xxz_hamiltonian(p);
        } else {
          return xxx_dm_hamiltonian(p);
        }
      },
      point);
}

inline double temperature(const ModelPoint& point) {
  return std::visit([](const auto& p) { return p.T; }, point);
}

inline DensityMatrix thermal_state(const ModelPoint& point) {
  return std::visit(
      [](const auto& p) -> DensityMatrix {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, XxzParams>) {
          return xxz_thermal_analytic(p).first;
        } else {
          return xxx_dm_thermal_analytic(p).first;
        }
      },
      point);
}

inline constexpr double kCrossValidationTol = 1e-10;

struct CrossValidation {
  double trace_distance = 0.0;
  bool pass = false;
};

/// Trace distance between the closed-form state and the generic Gibbs state.
inline CrossValidation cross_validate(const ModelPoint& point) {
  const auto analytic = thermal_state(point);
  const auto oracle = gibbs_state(hamiltonian(point), temperature(point));
  CrossValidation out;
  out.trace_distance = trace_distance(analytic.matrix(), oracle.matrix());
  out.pass = out.trace_distance < kCrossValidationTol;
  return out;
}

}  // namespace qcorr
