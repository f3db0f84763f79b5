#include <catch_amalgamated.hpp>

#include <cmath>

#include "qcorr/linalg.hpp"
#include "test_support.hpp"

using namespace qcorr;
using Catch::Approx;
using Catch::Matchers::WithinAbs;

namespace {

ComplexMatrix reconstruct(const HermitianEigenDecomposition& eig) {
  const std::size_t n = eig.eigenvalues.size();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        out(i, j) += eig.eigenvectors(i, k) * eig.eigenvalues[k] * std::conj(eig.eigenvectors(j, k));
  return out;
}

ComplexMatrix bell_phi_plus() {
  ComplexMatrix rho(4);
  rho(0, 0) = rho(0, 3) = rho(3, 0) = rho(3, 3) = 0.5;
  return rho;
}

}  // namespace

TEST_CASE("tensor product of Pauli matrices", "[linalg]") {
  CHECK(tensor_product(pauli::identity(), pauli::identity()) == ComplexMatrix::identity(4));
  CHECK(tensor_product(pauli::z(), pauli::z()) == ComplexMatrix::diagonal({1, -1, -1, 1}));

  const auto xx = tensor_product(pauli::x(), pauli::x());
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(xx(i, j) == cplx(i + j == 3 ? 1.0 : 0.0));
}

TEST_CASE("tensor product is associative and multiplies traces", "[linalg]") {
  const auto a = pauli::x() + pauli::z() * 2.0;
  const auto b = pauli::y();
  const auto c = pauli::identity() * 0.5 + pauli::z();
  CHECK(tensor_product(tensor_product(a, b), c) == tensor_product(a, tensor_product(b, c)));

  testing::Rng rng(7);
  for (int k = 0; k < 50; ++k) {
    const auto p = testing::random_hermitian(rng, 2);
    const auto q = testing::random_hermitian(rng, 2);
    CHECK(std::abs(tensor_product(p, q).trace() - p.trace() * q.trace()) < 1e-12);
  }
}

TEST_CASE("partial trace", "[linalg]") {
  const auto half = ComplexMatrix::identity(2) * 0.5;
  CHECK(max_abs_diff(partial_trace(bell_phi_plus(), Subsystem::A), half) < 1e-15);
  CHECK(max_abs_diff(partial_trace(ComplexMatrix::diagonal({0.5, 0, 0, 0.5}), Subsystem::B), half) < 1e-15);

  const ComplexMatrix ra{{0.7, cplx(0.1, 0.2)}, {cplx(0.1, -0.2), 0.3}};
  const ComplexMatrix rb{{0.4, 0.25}, {0.25, 0.6}};
  CHECK(max_abs_diff(partial_trace(tensor_product(ra, rb), Subsystem::A), ra) < 1e-15);
  CHECK(max_abs_diff(partial_trace(tensor_product(ra, rb), Subsystem::B), rb) < 1e-15);

  testing::Rng rng(11);
  for (int k = 0; k < 100; ++k) {
    const auto g = testing::random_hermitian(rng, 4);
    CHECK(std::abs(partial_trace(g, Subsystem::A).trace() - g.trace()) < 1e-12);
    CHECK(std::abs(partial_trace(g, Subsystem::B).trace() - g.trace()) < 1e-12);
  }
}

TEST_CASE("hermitian_eigen on Pauli matrices", "[linalg]") {
  const auto ez = hermitian_eigen(pauli::z());
  REQUIRE(ez.eigenvalues.size() == 2);
  CHECK(ez.eigenvalues[0] == -1.0);
  CHECK(ez.eigenvalues[1] == 1.0);
  CHECK(ez.eigenvector(0) == std::vector<cplx>{0.0, 1.0});
  CHECK(ez.eigenvector(1) == std::vector<cplx>{1.0, 0.0});

  const auto ex = hermitian_eigen(pauli::x());
  CHECK_THAT(ex.eigenvalues[0], WithinAbs(-1.0, 1e-15));
  CHECK_THAT(ex.eigenvalues[1], WithinAbs(1.0, 1e-15));
  const double r = 1.0 / std::sqrt(2.0);
  const auto lo = ex.eigenvector(0);
  const auto hi = ex.eigenvector(1);
  CHECK(std::abs(lo[0] - r) < 1e-15);
  CHECK(std::abs(lo[1] + r) < 1e-15);
  CHECK(std::abs(hi[0] - r) < 1e-15);
  CHECK(std::abs(hi[1] - r) < 1e-15);

  const auto ey = hermitian_eigen(pauli::y());
  CHECK_THAT(ey.eigenvalues[0], WithinAbs(-1.0, 1e-15));
  CHECK_THAT(ey.eigenvalues[1], WithinAbs(1.0, 1e-15));
}

TEST_CASE("hermitian_eigen reconstructs random Hermitian matrices", "[linalg][property]") {
  testing::Rng rng(2024);
  for (std::size_t dim : {2u, 3u, 4u}) {
    for (int trial = 0; trial < 500; ++trial) {
      const auto a = testing::random_hermitian(rng, dim);
      const auto eig = hermitian_eigen(a);

      CHECK(max_abs_diff(reconstruct(eig), a) < 1e-12);
      CHECK(max_abs_diff(eig.eigenvectors.adjoint() * eig.eigenvectors, ComplexMatrix::identity(dim)) < 1e-12);
      CHECK(std::is_sorted(eig.eigenvalues.begin(), eig.eigenvalues.end()));

      for (std::size_t k = 0; k < dim; ++k) {
        const auto v = eig.eigenvector(k);
        double biggest = 0.0;
        for (const auto& z : v) biggest = std::max(biggest, std::abs(z));
        const auto pivot = std::find_if(v.begin(), v.end(), [&](const cplx& z) { return std::abs(z) >= biggest - 1e-12; });
        CHECK(pivot->imag() == 0.0);
        CHECK(pivot->real() >= 0.0);
      }
    }
  }
}

TEST_CASE("hermitian_eigen is deterministic and handles degeneracy", "[linalg]") {
  testing::Rng rng(5);
  const auto a = testing::random_hermitian(rng, 4);
  const auto first = hermitian_eigen(a);
  const auto second = hermitian_eigen(a);
  CHECK(first.eigenvalues == second.eigenvalues);
  CHECK(first.eigenvectors == second.eigenvectors);

  const auto id = hermitian_eigen(ComplexMatrix::identity(4));
  for (double l : id.eigenvalues) CHECK(l == 1.0);

  // Doubly degenerate spectrum hidden by a unitary rotation.
  const auto xx = tensor_product(pauli::x(), pauli::x());
  const auto eig = hermitian_eigen(xx);
  CHECK_THAT(eig.eigenvalues[0], WithinAbs(-1.0, 1e-14));
  CHECK_THAT(eig.eigenvalues[1], WithinAbs(-1.0, 1e-14));
  CHECK_THAT(eig.eigenvalues[2], WithinAbs(1.0, 1e-14));
  CHECK_THAT(eig.eigenvalues[3], WithinAbs(1.0, 1e-14));
  CHECK(max_abs_diff(reconstruct(eig), xx) < 1e-14);
}

TEST_CASE("hermitian_eigen rejects non-Hermitian input", "[linalg]") {
  ComplexMatrix a{{1.0, 2.0}, {0.0, 1.0}};
  try {
    hermitian_eigen(a);
    FAIL("expected NotHermitian");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotHermitian);
  }
  CHECK_FALSE(is_hermitian(a));
  CHECK(is_hermitian(pauli::y()));
}

TEST_CASE("matrix_function_hermitian", "[linalg]") {
  const auto expf = [](double l) { return std::exp(l); };
  CHECK(max_abs_diff(matrix_function_hermitian(ComplexMatrix(4), expf), ComplexMatrix::identity(4)) < 1e-15);

  const auto diag = matrix_function_hermitian(ComplexMatrix::diagonal({0.5, -1.0, 2.0, 0.0}), expf);
  CHECK(max_abs_diff(diag, ComplexMatrix::diagonal({std::exp(0.5), std::exp(-1.0), std::exp(2.0), 1.0})) < 1e-14);

  // exp(sigma_x) = cosh(1) I + sinh(1) sigma_x, checked against a Taylor series.
  const auto ex = matrix_function_hermitian(pauli::x(), expf);
  const auto series = testing::taylor_exp(pauli::x());
  CHECK(max_abs_diff(series, std::cosh(1.0) * pauli::identity() + std::sinh(1.0) * pauli::x()) < 1e-14);
  CHECK(max_abs_diff(ex, series) < 1e-14);

  testing::Rng rng(99);
  for (int k = 0; k < 100; ++k) {
    const auto a = testing::random_hermitian(rng, 4);
    CHECK(max_abs_diff(matrix_function_hermitian(a, [](double l) { return l; }), a) < 1e-12);
    CHECK(max_abs_diff(matrix_function_hermitian(a * 0.3, expf), testing::taylor_exp(a * 0.3)) < 1e-12);
  }
}

TEST_CASE("von Neumann entropy", "[linalg]") {
  CHECK_THAT(von_neumann_entropy(bell_phi_plus()), WithinAbs(0.0, 1e-14));
  CHECK_THAT(von_neumann_entropy(ComplexMatrix::identity(2) * 0.5), WithinAbs(1.0, 1e-14));
  CHECK_THAT(von_neumann_entropy(ComplexMatrix::identity(4) * 0.25), WithinAbs(2.0, 1e-14));

  // Small negative eigenvalues from round-off are treated as zero.
  CHECK_THAT(von_neumann_entropy(ComplexMatrix::diagonal({1.0 + 5e-11, -5e-11})), WithinAbs(0.0, 1e-9));
}

TEST_CASE("von Neumann entropy rejects non-states", "[linalg]") {
  const auto expect_kind = [](const ComplexMatrix& m) {
    try {
      von_neumann_entropy(m);
      FAIL("expected NotAState");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotAState);
    }
  };
  expect_kind(ComplexMatrix::diagonal({0.6, 0.6}));
  expect_kind(ComplexMatrix::diagonal({1.1, -0.1}));
}

TEST_CASE("entropy is additive over tensor products", "[linalg][property]") {
  testing::Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    const auto ra = testing::random_state_matrix(rng, 2);
    const auto rb = testing::random_state_matrix(rng, 2);
    const double joint = von_neumann_entropy(tensor_product(ra, rb));
    CHECK(std::abs(joint - von_neumann_entropy(ra) - von_neumann_entropy(rb)) < 1e-10);
  }
}

TEST_CASE("trace distance", "[linalg]") {
  const auto a = ComplexMatrix::diagonal({1.0, 0.0});
  const auto b = ComplexMatrix::diagonal({0.0, 1.0});
  CHECK_THAT(trace_distance(a, b), WithinAbs(1.0, 1e-15));
  CHECK_THAT(trace_distance(a, a), WithinAbs(0.0, 1e-15));
}
