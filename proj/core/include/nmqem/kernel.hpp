#pragma once

// Decoherence kernel k(t) of a two-qubit register coupled to an ohmic bath
// with sharp cutoff. Time enters only as u = t / tau_s.
//
// Three evaluators are provided and deliberately kept separate:
//   re_k_approx   quadratic short-time form, used by every figure/fit product
//   k_printed     the closed form with the sine-integral term
//   k_quadrature  nested quadrature of the bath correlator, the oracle
// They do not agree with each other in general; see the README.

#include <optional>
#include <string_view>

#include "nmqem/numerics.hpp"

namespace nmqem {

struct KernelParams {
  double gamma0 = 0.0;  // lambda^2 eta k_B T tau_s
  double delta0 = 0.0;  // lambda^2 eta omega_c tau_s / pi
  double wc_ts = 1.0;   // omega_c tau_s

  /// Throws DomainError unless all fields are finite, gamma0, delta0 >= 0 and
  /// wc_ts > 0.
  void validate() const;

  /// Gamma0 * omega_c tau_s, the single coupling that drives re_k_approx.
  double coupling() const noexcept { return gamma0 * wc_ts; }
};

/// Standard sine integral int_0^x sin(t)/t dt, x >= 0.
double sine_integral(double x);

/// Shifted sine integral Si(x) - pi/2; tends to -pi/2 at 0 and to 0 at infinity.
double si_shifted(double x);

/// (2/pi) * coupling * [(pi/2) u + u^2 / 2].
double re_k_approx(double coupling, double u);

Complex k_printed(const KernelParams& p, double u, double tol = kDefaultQuadTol);

Complex k_quadrature(const KernelParams& p, double u, double tol = kDefaultQuadTol);

enum class KernelMode { kApprox, kPrinted, kQuadrature };

std::string_view to_string(KernelMode mode);
std::optional<KernelMode> parse_kernel_mode(std::string_view text);

/// Dispatches to one of the evaluators. kApprox returns coupling() through
/// re_k_approx with zero imaginary part.
Complex evaluate_kernel(KernelMode mode, const KernelParams& p, double u,
                        double tol = kDefaultQuadTol);

}  // namespace nmqem
