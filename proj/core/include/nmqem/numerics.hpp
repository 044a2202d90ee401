#pragma once

// Small dense complex linear algebra (2x2, 4x4 and 16x16 only) and adaptive
// quadrature. Everything here is a pure function of its arguments.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace nmqem {

using Complex = std::complex<double>;

/// Row-major complex matrix restricted to the shapes the library needs.
class CMat {
 public:
  /// Zero matrix. Throws ShapeMismatch unless rows x cols is 2x2, 4x4 or 16x16.
  CMat(std::size_t rows, std::size_t cols);
  CMat(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  /// Square matrix from nested rows, e.g. CMat{{0, 1}, {1, 0}}.
  CMat(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMat identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::span<const Complex> entries() const noexcept { return entries_; }

  Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  /// Largest modulus over all entries.
  double max_abs() const noexcept;

  CMat& operator+=(const CMat& other);
  CMat& operator-=(const CMat& other);
  CMat& operator*=(Complex scale) noexcept;

  friend bool operator==(const CMat&, const CMat&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Complex> entries_;
};

CMat operator+(CMat a, const CMat& b);
CMat operator-(CMat a, const CMat& b);
CMat operator*(Complex scale, CMat a);

/// Largest entrywise modulus of a - b. Shapes must agree.
double max_abs_diff(const CMat& a, const CMat& b);

CMat mat_mul(const CMat& a, const CMat& b);
CMat operator*(const CMat& a, const CMat& b);

/// Inverse by LU with partial pivoting. Throws SingularMatrix when
/// |det| <= 1e-10 * max|entry|^n.
CMat mat_inv(const CMat& a);

/// Determinant via the same LU factorization used by mat_inv.
Complex determinant(const CMat& a);

/// Tensor product of two 2x2 matrices, ordered over {|00>,|01>,|10>,|11>}:
/// the first factor acts on the left qubit.
CMat kron2(const CMat& a, const CMat& b);

/// Solves A x = y for square A. Throws SingularMatrix on the mat_inv threshold.
std::vector<Complex> solve_linear(const CMat& a, std::span<const Complex> y);

/// Numerical rank by Gaussian elimination with a relative pivot tolerance.
std::size_t rank(const CMat& a, double rel_tol = 1e-12);

/// Real 4x4 matrix; used for population channels and recovery operators.
struct RealMat4 {
  std::array<double, 16> v{};

  double& operator()(std::size_t r, std::size_t c) { return v[r * 4 + c]; }
  double operator()(std::size_t r, std::size_t c) const { return v[r * 4 + c]; }

  static RealMat4 identity();
  CMat to_cmat() const;
  /// Real part of a 4x4 CMat. Throws DomainError if any |imag| > tol.
  static RealMat4 from_cmat(const CMat& m, double tol = 1e-12);

  friend bool operator==(const RealMat4&, const RealMat4&) = default;
};

double max_abs_diff(const RealMat4& a, const RealMat4& b);

inline constexpr double kDefaultQuadTol = 1e-10;

/// Adaptive Simpson estimate of the integral of f over [a, b] with absolute
/// error target tol. Removable singularities must be resolved by the caller.
/// Throws NonConvergence when the recursion depth limit is reached and
/// DomainError when a > b.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = kDefaultQuadTol);

}  // namespace nmqem
