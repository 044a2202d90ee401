#include "nmqem/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "nmqem/errors.hpp"

namespace nmqem {

namespace {

bool supported_shape(std::size_t rows, std::size_t cols) {
  return rows == cols && (rows == 2 || rows == 4 || rows == 16);
}

std::string shape_str(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

void require_square(const CMat& a, const char* op) {
  if (a.rows() != a.cols()) {
    throw ShapeMismatch(std::string(op) + ": matrix is not square (" +
                        shape_str(a.rows(), a.cols()) + ")");
  }
}

// In-place LU with partial pivoting. Returns the permutation parity sign and
// fills `perm` with the row order.
struct LuResult {
  std::vector<Complex> lu;
  std::vector<std::size_t> perm;
  double sign = 1.0;
  bool exact_zero_pivot = false;
};

LuResult lu_decompose(const CMat& a) {
  const std::size_t n = a.rows();
  LuResult res;
  res.lu.assign(a.entries().begin(), a.entries().end());
  res.perm.resize(n);
  std::iota(res.perm.begin(), res.perm.end(), 0);
  auto at = [&](std::size_t r, std::size_t c) -> Complex& { return res.lu[r * n + c]; };

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    double best = std::abs(at(k, k));
    for (std::size_t r = k + 1; r < n; ++r) {
      if (double v = std::abs(at(r, k)); v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == 0.0) {
      res.exact_zero_pivot = true;
      continue;
    }
    if (pivot != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(at(k, c), at(pivot, c));
      std::swap(res.perm[k], res.perm[pivot]);
      res.sign = -res.sign;
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      const Complex factor = at(r, k) / at(k, k);
      at(r, k) = factor;
      for (std::size_t c = k + 1; c < n; ++c) at(r, c) -= factor * at(k, c);
    }
  }
  return res;
}

Complex lu_determinant(const LuResult& lu, std::size_t n) {
  if (lu.exact_zero_pivot) return {0.0, 0.0};
  Complex det = lu.sign;
  for (std::size_t k = 0; k < n; ++k) det *= lu.lu[k * n + k];
  return det;
}

void check_nonsingular(const CMat& a, const LuResult& lu, const char* op) {
  const std::size_t n = a.rows();
  const double scale = std::pow(a.max_abs(), static_cast<double>(n));
  const double det = std::abs(lu_determinant(lu, n));
  if (!(det > 1e-10 * scale)) {
    throw SingularMatrix(std::string(op) + ": |det| = " + std::to_string(det) +
                         " below threshold 1e-10 * max|a|^" + std::to_string(n));
  }
}

std::vector<Complex> lu_solve(const LuResult& lu, std::size_t n, std::span<const Complex> y) {
  std::vector<Complex> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex s = y[lu.perm[i]];
    for (std::size_t j = 0; j < i; ++j) s -= lu.lu[i * n + j] * x[j];
    x[i] = s;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    Complex s = x[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= lu.lu[ii * n + j] * x[j];
    x[ii] = s / lu.lu[ii * n + ii];
  }
  return x;
}

}  // namespace

CMat::CMat(std::size_t rows, std::size_t cols)
    : CMat(rows, cols, std::vector<Complex>(rows * cols)) {}

CMat::CMat(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (!supported_shape(rows, cols)) {
    throw ShapeMismatch("unsupported matrix shape " + shape_str(rows, cols));
  }
  if (entries_.size() != rows * cols) {
    throw ShapeMismatch("entry count " + std::to_string(entries_.size()) +
                        " does not match shape " + shape_str(rows, cols));
  }
}

CMat::CMat(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  if (!supported_shape(rows_, cols_)) {
    throw ShapeMismatch("unsupported matrix shape " + shape_str(rows_, cols_));
  }
  entries_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw ShapeMismatch("ragged row in matrix literal");
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

CMat CMat::identity(std::size_t n) {
  CMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double CMat::max_abs() const noexcept {
  double best = 0.0;
  for (const auto& z : entries_) best = std::max(best, std::abs(z));
  return best;
}

CMat& CMat::operator+=(const CMat& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw ShapeMismatch("operator+: shape mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

CMat& CMat::operator-=(const CMat& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw ShapeMismatch("operator-: shape mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

CMat& CMat::operator*=(Complex scale) noexcept {
  for (auto& z : entries_) z *= scale;
  return *this;
}

CMat operator+(CMat a, const CMat& b) { return a += b; }
CMat operator-(CMat a, const CMat& b) { return a -= b; }
CMat operator*(Complex scale, CMat a) { return a *= scale; }

double max_abs_diff(const CMat& a, const CMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeMismatch("max_abs_diff: shape mismatch");
  double best = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    best = std::max(best, std::abs(a.entries()[i] - b.entries()[i]));
  }
  return best;
}

CMat mat_mul(const CMat& a, const CMat& b) {
  if (a.cols() != b.rows()) {
    throw ShapeMismatch("mat_mul: " + shape_str(a.rows(), a.cols()) + " times " +
                        shape_str(b.rows(), b.cols()));
  }
  CMat out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex lhs = a(r, k);
      if (lhs == Complex{}) continue;
      for (std::size_t c = 0; c < b.cols(); ++c) out(r, c) += lhs * b(k, c);
    }
  }
  return out;
}

CMat operator*(const CMat& a, const CMat& b) { return mat_mul(a, b); }

CMat mat_inv(const CMat& a) {
  require_square(a, "mat_inv");
  const std::size_t n = a.rows();
  const LuResult lu = lu_decompose(a);
  check_nonsingular(a, lu, "mat_inv");
  CMat inv(n, n);
  std::vector<Complex> unit(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::fill(unit.begin(), unit.end(), Complex{});
    unit[c] = 1.0;
    const auto col = lu_solve(lu, n, unit);
    for (std::size_t r = 0; r < n; ++r) inv(r, c) = col[r];
  }
  return inv;
}

Complex determinant(const CMat& a) {
  require_square(a, "determinant");
  return lu_determinant(lu_decompose(a), a.rows());
}

CMat kron2(const CMat& a, const CMat& b) {
  if (a.rows() != 2 || a.cols() != 2 || b.rows() != 2 || b.cols() != 2) {
    throw ShapeMismatch("kron2: both factors must be 2x2");
  }
  CMat out(4, 4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return out;
}

std::vector<Complex> solve_linear(const CMat& a, std::span<const Complex> y) {
  require_square(a, "solve_linear");
  if (y.size() != a.rows()) {
    throw ShapeMismatch("solve_linear: rhs length " + std::to_string(y.size()) +
                        " vs " + std::to_string(a.rows()) + " rows");
  }
  const LuResult lu = lu_decompose(a);
  check_nonsingular(a, lu, "solve_linear");
  return lu_solve(lu, a.rows(), y);
}

std::size_t rank(const CMat& a, double rel_tol) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  std::vector<Complex> m(a.entries().begin(), a.entries().end());
  const double threshold = rel_tol * std::max(a.max_abs(), 1.0);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (std::abs(m[i * cols + c]) > std::abs(m[pivot * cols + c])) pivot = i;
    }
    if (std::abs(m[pivot * cols + c]) <= threshold) continue;
    for (std::size_t j = 0; j < cols; ++j) std::swap(m[r * cols + j], m[pivot * cols + j]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      const Complex f = m[i * cols + c] / m[r * cols + c];
      for (std::size_t j = c; j < cols; ++j) m[i * cols + j] -= f * m[r * cols + j];
    }
    ++r;
  }
  return r;
}

RealMat4 RealMat4::identity() {
  RealMat4 m;
  for (std::size_t i = 0; i < 4; ++i) m(i, i) = 1.0;
  return m;
}

CMat RealMat4::to_cmat() const {
  CMat m(4, 4);
  for (std::size_t i = 0; i < 16; ++i) m(i / 4, i % 4) = v[i];
  return m;
}

RealMat4 RealMat4::from_cmat(const CMat& m, double tol) {
  if (m.rows() != 4 || m.cols() != 4) throw ShapeMismatch("RealMat4::from_cmat: need 4x4");
  RealMat4 out;
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      if (std::abs(m(r, c).imag()) > tol) {
        throw DomainError("RealMat4::from_cmat: entry (" + std::to_string(r) + "," +
                          std::to_string(c) + ") has nonzero imaginary part");
      }
      out(r, c) = m(r, c).real();
    }
  }
  return out;
}

double max_abs_diff(const RealMat4& a, const RealMat4& b) {
  double best = 0.0;
  for (std::size_t i = 0; i < 16; ++i) best = std::max(best, std::abs(a.v[i] - b.v[i]));
  return best;
}

namespace {

constexpr int kMaxSimpsonDepth = 50;

struct SimpsonPanel {
  double a, m, b;
  double fa, fm, fb;
  double whole;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, const SimpsonPanel& p, double tol,
                int depth) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(p.a, p.m, p.fa, flm, p.fm);
  const double right = simpson(p.m, p.b, p.fm, frm, p.fb);
  const double delta = left + right - p.whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth >= kMaxSimpsonDepth || !std::isfinite(delta)) {
    throw NonConvergence("integrate: no convergence on [" + std::to_string(p.a) + ", " +
                         std::to_string(p.b) + "]");
  }
  return adaptive(f, {p.a, lm, p.m, p.fa, flm, p.fm, left}, 0.5 * tol, depth + 1) +
         adaptive(f, {p.m, rm, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a > b) throw DomainError("integrate: lower limit exceeds upper limit");
  if (a == b) return 0.0;
  if (!(tol > 0.0)) throw DomainError("integrate: tolerance must be positive");
  // Start from four panels: one Simpson panel cannot see an integrand that
  // vanishes at its three nodes.
  constexpr int kPanels = 4;
  const double h = (b - a) / kPanels;
  double total = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    const double pa = a + i * h;
    const double pb = (i + 1 == kPanels) ? b : a + (i + 1) * h;
    const double pm = 0.5 * (pa + pb);
    const double fa = f(pa);
    const double fm = f(pm);
    const double fb = f(pb);
    total += adaptive(f, {pa, pm, pb, fa, fm, fb, simpson(pa, pb, fa, fm, fb)}, tol / kPanels, 0);
  }
  return total;
}

}  // namespace nmqem
