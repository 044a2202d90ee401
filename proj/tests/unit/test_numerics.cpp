#include <cmath>
#include <random>

#include "doctest.h"
#include "nmqem/errors.hpp"
#include "nmqem/numerics.hpp"
#include "oracles.hpp"

using namespace nmqem;

namespace {

CMat random_mat(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  CMat m(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = {d(rng), d(rng)};
  return m;
}

}  // namespace

TEST_CASE("CMat rejects unsupported shapes") {
  CHECK_THROWS_AS(CMat(3, 3), ShapeMismatch);
  CHECK_THROWS_AS(CMat(4, 2), ShapeMismatch);
  CHECK_THROWS_AS(CMat(2, 2, std::vector<Complex>(3)), ShapeMismatch);
  CHECK_NOTHROW(CMat(16, 16));
}

TEST_CASE("mat_mul shape checks and identity") {
  std::mt19937_64 rng(1);
  const CMat a = random_mat(4, rng);
  CHECK(max_abs_diff(a * CMat::identity(4), a) == 0.0);
  CHECK_THROWS_AS(mat_mul(a, CMat::identity(2)), ShapeMismatch);
  CHECK_THROWS_AS(max_abs_diff(a, CMat::identity(2)), ShapeMismatch);
}

TEST_CASE("kron2 puts the first factor on the left qubit") {
  const CMat x{{0, 1}, {1, 0}};
  const CMat xi = kron2(x, CMat::identity(2));
  // X on the left qubit maps |00> -> |10>, i.e. column 0 has its 1 in row 2.
  CHECK(xi(2, 0) == Complex(1));
  CHECK(xi(1, 0) == Complex(0));
  const CMat ix = kron2(CMat::identity(2), x);
  CHECK(ix(1, 0) == Complex(1));
}

TEST_CASE("determinant agrees with Leibniz expansion") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const CMat a = random_mat(4, rng);
    std::array<std::array<Complex, 4>, 4> m{};
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) m[r][c] = a(r, c);
    CHECK(std::abs(determinant(a) - oracle::det4(m)) < 1e-12);
  }
}

TEST_CASE("mat_inv property: A * inv(A) = I") {
  std::mt19937_64 rng(11);
  for (std::size_t n : {2u, 4u, 16u}) {
    for (int trial = 0; trial < 20; ++trial) {
      const CMat a = random_mat(n, rng);
      CHECK(max_abs_diff(a * mat_inv(a), CMat::identity(n)) < 1e-10);
      CHECK(max_abs_diff(mat_inv(a) * a, CMat::identity(n)) < 1e-10);
    }
  }
}

TEST_CASE("mat_inv throws on singular input") {
  CMat a(4, 4);
  a(0, 0) = 1;
  a(1, 1) = 1;
  a(2, 2) = 1;
  CHECK_THROWS_AS(mat_inv(a), SingularMatrix);
  CHECK(rank(a) == 3);
}

TEST_CASE("solve_linear") {
  std::mt19937_64 rng(3);
  const CMat a = random_mat(16, rng);
  std::vector<Complex> x(16);
  for (std::size_t i = 0; i < 16; ++i) x[i] = {double(i), -0.5 * double(i)};
  std::vector<Complex> y(16);
  for (std::size_t r = 0; r < 16; ++r)
    for (std::size_t c = 0; c < 16; ++c) y[r] += a(r, c) * x[c];
  const auto got = solve_linear(a, y);
  for (std::size_t i = 0; i < 16; ++i) CHECK(std::abs(got[i] - x[i]) < 1e-10);
  CHECK_THROWS_AS(solve_linear(a, std::vector<Complex>(4)), ShapeMismatch);
}

TEST_CASE("RealMat4 round trip and imaginary rejection") {
  RealMat4 m;
  for (std::size_t i = 0; i < 16; ++i) m.v[i] = double(i) - 3.5;
  CHECK(RealMat4::from_cmat(m.to_cmat()) == m);
  CMat c = m.to_cmat();
  c(1, 2) += Complex(0, 1e-6);
  CHECK_THROWS_AS(RealMat4::from_cmat(c), DomainError);
}

TEST_CASE("integrate") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 3.0) == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(std::abs(integrate([](double x) { return std::sin(x); }, 0.0, M_PI) - 2.0) < 1e-10);
  CHECK(integrate([](double x) { return x; }, 1.0, 1.0) == 0.0);
  CHECK_THROWS_AS(integrate([](double x) { return x; }, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-14),
                  NonConvergence);
}
