#include "nmqem/recovery.hpp"

#include <cmath>
#include <string>

#include "nmqem/errors.hpp"

namespace nmqem {

namespace {

constexpr double kDenominatorFloor = 1e-12;

void require_recovery_alpha(double alpha, const char* what) {
  if (!(alpha >= 0.0 && alpha < kRecoveryAlphaMax)) {
    throw AlphaOutOfRange(std::string(what) + ": alpha = " + std::to_string(alpha) +
                          " outside [0, 0.25)");
  }
}

// c0 + c1 a + c2 a^2 + c3 a^3
double cubic(double a, double c0, double c1, double c2, double c3) {
  return c0 + a * (c1 + a * (c2 + a * c3));
}

double checked_denominator(double value, const char* what) {
  if (std::abs(value) < kDenominatorFloor) {
    throw DenominatorNearZero(std::string(what) + ": denominator " + std::to_string(value));
  }
  return value;
}

double swap_denominator(double a) {
  return checked_denominator(cubic(a, 1.0, -10.0, 32.0, -32.0), "swap recovery");
}

double id_denominator(double a) {
  return checked_denominator(cubic(a, 1.0, -8.0, 20.0, -16.0), "identity recovery");
}

}  // namespace

RealMat4 recovery_numeric(const Channel& ch) {
  require_recovery_alpha(ch.alpha, "recovery_numeric");
  return RealMat4::from_cmat(mat_inv(ch.matrix.to_cmat()));
}

SwapCoeffs closed_form_swap(double alpha) {
  require_recovery_alpha(alpha, "closed_form_swap");
  const double a = alpha;
  const double den = swap_denominator(a);
  return {
      cubic(a, 0.0, -1.0, 6.0, -8.0) / den,
      cubic(a, 1.0, -8.0, 18.0, -8.0) / den,
      cubic(a, 0.0, 0.0, 2.0, -8.0) / den,
      cubic(a, 1.0, -7.0, 14.0, -8.0) / den,
  };
}

IdCoeffs closed_form_id(double alpha) {
  require_recovery_alpha(alpha, "closed_form_id");
  const double a = alpha;
  const double den = id_denominator(a);
  return {
      cubic(a, 1.0, -6.0, 10.0, -4.0) / den,
      cubic(a, 0.0, 0.0, 2.0, -4.0) / den,
      cubic(a, 0.0, -1.0, 4.0, -4.0) / den,
  };
}

RealMat4 assemble(const SwapCoeffs& k) {
  RealMat4 m;
  m.v = {k.c, k.b, k.d, k.b,  //
         k.b, k.e, k.b, k.b,  //
         k.d, k.b, k.c, k.b,  //
         k.b, k.b, k.b, k.e};
  return m;
}

RealMat4 assemble(const IdCoeffs& k) {
  RealMat4 m;
  m.v = {k.f, k.h, k.h, k.g,  //
         k.h, k.f, k.g, k.h,  //
         k.h, k.g, k.f, k.h,  //
         k.g, k.h, k.h, k.f};
  return m;
}

double cost_swap(double alpha) {
  require_recovery_alpha(alpha, "cost_swap");
  const double a = alpha;
  const double den = std::abs(swap_denominator(a));
  const double sum_ce = std::abs(cubic(a, 2.0, -15.0, 32.0, -16.0)) / (2.0 * den);
  const double diff_ce = std::abs(cubic(a, 0.0, 1.0, -4.0, 0.0)) / (2.0 * den);
  const double b = std::abs(cubic(a, 0.0, -1.0, 6.0, -8.0)) / den;
  const double d = std::abs(cubic(a, 0.0, 0.0, 2.0, -8.0)) / den;
  return sum_ce + diff_ce + 3.0 * b + d;
}

double cost_id(double alpha) {
  require_recovery_alpha(alpha, "cost_id");
  const double a = alpha;
  const double den = std::abs(id_denominator(a));
  const double f = std::abs(cubic(a, 1.0, -6.0, 10.0, -4.0)) / den;
  const double g = std::abs(cubic(a, 0.0, 0.0, 2.0, -4.0)) / den;
  const double h = std::abs(cubic(a, 0.0, -1.0, 4.0, -4.0)) / den;
  return f + g + 2.0 * h;
}

RecoveryOp make_recovery(Gate gate, double alpha, const GammaBasis& basis) {
  require_recovery_alpha(alpha, "make_recovery");
  const Channel ch = population_channel(gate, alpha);
  RecoveryOp op{gate, alpha, recovery_numeric(ch), IdCoeffs{}, {}};
  if (gate == Gate::kSwap) {
    op.coeffs = closed_form_swap(alpha);
  } else {
    op.coeffs = closed_form_id(alpha);
  }
  op.gamma = decompose(basis, op.matrix.to_cmat());
  return op;
}

double cost_from_decomposition(const RecoveryOp& r) { return r.gamma.l1_norm(); }

double cost_closed_form(const RecoveryOp& r) {
  return r.gate == Gate::kSwap ? cost_swap(r.alpha) : cost_id(r.alpha);
}

}  // namespace nmqem
