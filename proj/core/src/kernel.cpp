#include "nmqem/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nmqem/errors.hpp"

namespace nmqem {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeriesCrossover = 4.0;

void require_nonnegative(double x, const char* what) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(what) + " must be finite and >= 0, got " + std::to_string(x));
  }
}

double sine_integral_series(double x) {
  // Si(x) = sum_n (-1)^n x^(2n+1) / ((2n+1) (2n+1)!)
  const double x2 = x * x;
  double term = x;  // (-1)^n x^(2n+1) / (2n+1)!
  double sum = x;
  for (int n = 1; n < 60; ++n) {
    term *= -x2 / ((2.0 * n) * (2.0 * n + 1.0));
    const double contrib = term / (2.0 * n + 1.0);
    sum += contrib;
    if (std::abs(contrib) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// E1(ix) = -Ci(x) + i (Si(x) - pi/2), from its continued fraction (modified
// Lentz). Converges for all x > 0; used for x >= 4 where it needs few terms.
double si_shifted_continued_fraction(double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  Complex b(1.0, x);
  Complex c(1.0 / kTiny, 0.0);
  Complex d = 1.0 / b;
  Complex h = d;
  for (int i = 2; i < 1000; ++i) {
    const double a = -static_cast<double>((i - 1) * (i - 1));
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const Complex del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < kEps) {
      h *= Complex(std::cos(x), -std::sin(x));
      return h.imag();
    }
  }
  throw NonConvergence("si_shifted: continued fraction did not converge at x = " +
                       std::to_string(x));
}

// sin(w s) / s with the removable point s = 0 replaced by its limit w.
double sinc_scaled(double w, double s) {
  const double x = w * s;
  if (std::abs(x) < 1e-4) return w * (1.0 - x * x / 6.0);
  return std::sin(x) / s;
}

// sin(w s)/(w s^2) - cos(w s)/s = w (sin x - x cos x) / x^2 with x = w s.
double dispersive_bracket(double w, double s) {
  const double x = w * s;
  if (std::abs(x) < 0.5) {
    // x/3 - x^3/30 + x^5/840 - x^7/45360 + x^9/3991680
    const double x2 = x * x;
    const double series =
        x * (1.0 / 3.0 + x2 * (-1.0 / 30.0 + x2 * (1.0 / 840.0 + x2 * (-1.0 / 45360.0 +
                                                                     x2 / 3991680.0))));
    return w * series;
  }
  return w * (std::sin(x) - x * std::cos(x)) / (x * x);
}

// int_0^u ds int_0^s f(sigma) d sigma.
template <typename F>
double nested_integral(F f, double u, double tol) {
  const double inner_tol = 0.1 * tol / std::max(u, 1.0);
  return integrate([&](double s) { return integrate(f, 0.0, s, inner_tol); }, 0.0, u, tol);
}

}  // namespace

void KernelParams::validate() const {
  require_nonnegative(gamma0, "gamma0");
  require_nonnegative(delta0, "delta0");
  if (!(wc_ts > 0.0) || !std::isfinite(wc_ts)) throw DomainError("wc_ts must be finite and > 0");
}

double sine_integral(double x) {
  require_nonnegative(x, "sine integral argument");
  if (x < kSeriesCrossover) return sine_integral_series(x);
  return si_shifted_continued_fraction(x) + kPi / 2.0;
}

double si_shifted(double x) {
  require_nonnegative(x, "si_shifted argument");
  if (x < kSeriesCrossover) return sine_integral_series(x) - kPi / 2.0;
  return si_shifted_continued_fraction(x);
}

double re_k_approx(double coupling, double u) {
  require_nonnegative(coupling, "coupling");
  require_nonnegative(u, "u");
  return coupling * ((2.0 / kPi) * ((kPi / 2.0) * u + 0.5 * u * u));
}

Complex k_printed(const KernelParams& p, double u, double tol) {
  p.validate();
  require_nonnegative(u, "u");
  if (u == 0.0) return {0.0, 0.0};
  const double w = p.wc_ts;
  const double si_area = integrate([w](double s) { return si_shifted(w * s); }, 0.0, u, tol);
  const double re = (2.0 / kPi) * p.gamma0 * ((kPi / 2.0) * w * u + si_area);
  // Bracket read with pi/2 + Si(w u) = Si_std(w u) so that Im k(0) = 0.
  const double im = p.delta0 * (u - (kPi / 2.0 + si_shifted(w * u)) / w);
  return {re, im};
}

Complex k_quadrature(const KernelParams& p, double u, double tol) {
  p.validate();
  require_nonnegative(u, "u");
  if (u == 0.0) return {0.0, 0.0};
  const double w = p.wc_ts;
  const double re_area = nested_integral([w](double s) { return sinc_scaled(w, s); }, u, tol);
  const double re = (kPi / 2.0) * p.gamma0 * re_area;
  double im = 0.0;
  if (p.delta0 != 0.0) {
    const double im_area =
        nested_integral([w](double s) { return dispersive_bracket(w, s); }, u, tol);
    im = -p.delta0 * im_area;
  }
  return {re, im};
}

std::string_view to_string(KernelMode mode) {
  switch (mode) {
    case KernelMode::kApprox:
      return "approx";
    case KernelMode::kPrinted:
      return "printed";
    case KernelMode::kQuadrature:
      return "quadrature";
  }
  return "?";
}

std::optional<KernelMode> parse_kernel_mode(std::string_view text) {
  if (text == "approx") return KernelMode::kApprox;
  if (text == "printed") return KernelMode::kPrinted;
  if (text == "quadrature") return KernelMode::kQuadrature;
  return std::nullopt;
}

Complex evaluate_kernel(KernelMode mode, const KernelParams& p, double u, double tol) {
  switch (mode) {
    case KernelMode::kApprox:
      p.validate();
      return {re_k_approx(p.coupling(), u), 0.0};
    case KernelMode::kPrinted:
      return k_printed(p, u, tol);
    case KernelMode::kQuadrature:
      return k_quadrature(p, u, tol);
  }
  throw DomainError("unknown kernel mode");
}

}  // namespace nmqem
