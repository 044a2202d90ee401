#pragma once

// Error-mitigation recovery operators: the inverse of a population channel,
// its closed-form rational coefficients, its expansion in the Dirac Gamma
// basis, and the sampling-overhead cost c = sum_i |mu_i|.
//
// The recovery domain is alpha in [0, 1/4): both channel determinants,
// det V_Id = (1-2a)^2 (1-4a) and det V_SWAP = (1-2a)(1-4a)^2, vanish at 1/4.

#include <variant>

#include "nmqem/channel.hpp"
#include "nmqem/gamma.hpp"
#include "nmqem/numerics.hpp"

namespace nmqem {

inline constexpr double kRecoveryAlphaMax = 0.25;  // exclusive

/// R_SWAP = [[C,B,D,B],[B,E,B,B],[D,B,C,B],[B,B,B,E]], multiplet basis.
struct SwapCoeffs {
  double b, c, d, e;
};

/// R_Id = [[F,H,H,G],[H,F,G,H],[H,G,F,H],[G,H,H,F]], computational basis.
struct IdCoeffs {
  double f, g, h;
};

/// Inverse of the channel matrix. Throws AlphaOutOfRange outside [0, 1/4) and
/// SingularMatrix if the inversion threshold trips.
RealMat4 recovery_numeric(const Channel& ch);

/// Rational coefficients with denominator 1 - 10a + 32a^2 - 32a^3. Throws
/// AlphaOutOfRange outside [0, 1/4), DenominatorNearZero when |den| < 1e-12.
SwapCoeffs closed_form_swap(double alpha);

/// Rational coefficients with denominator 1 - 8a + 20a^2 - 16a^3.
IdCoeffs closed_form_id(double alpha);

RealMat4 assemble(const SwapCoeffs& k);
RealMat4 assemble(const IdCoeffs& k);

/// |C+E|/2 + |C-E|/2 + 3|B| + |D|, each term from its own polynomial.
double cost_swap(double alpha);

/// |F| + |G| + 2|H|; equals 1/(1-4a) on the recovery domain.
double cost_id(double alpha);

struct RecoveryOp {
  Gate gate;
  double alpha;
  RealMat4 matrix;  // numeric inverse of the channel
  std::variant<SwapCoeffs, IdCoeffs> coeffs;
  GammaCoeffs gamma;  // decomposition of `matrix`
};

RecoveryOp make_recovery(Gate gate, double alpha, const GammaBasis& basis);

/// sum_r |c_r| over the Gamma expansion of the recovery matrix.
double cost_from_decomposition(const RecoveryOp& r);

/// The closed-form polynomial cost for the gate (cost_swap or cost_id).
double cost_closed_form(const RecoveryOp& r);

}  // namespace nmqem
