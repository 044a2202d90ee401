#pragma once

// Second-order (Born) population dynamics of two qubits under an isotropic
// spin-bath coupling. Indices a, b, c, d are 0-based throughout: index 0 is
// the first basis state (|1>^m = |00> for the multiplet basis).

#include <array>
#include <optional>
#include <span>
#include <string_view>

#include "nmqem/numerics.hpp"

namespace nmqem {

enum class Gate { kSwap, kIdentity };

std::string_view to_string(Gate gate);
std::optional<Gate> parse_gate(std::string_view text);

enum class BasisName { kMultipletSwap, kComputational };

std::string_view to_string(BasisName name);

/// Four orthonormal two-qubit states written over {|00>,|01>,|10>,|11>}.
class Basis4 {
 public:
  using Vector = std::array<Complex, 4>;

  /// Throws NonOrthonormalBasis unless the Gram matrix is I4 to 1e-12.
  Basis4(BasisName name, std::array<Vector, 4> vectors, std::array<double, 4> energies = {});

  /// Orthogonal, unnormalized directions; normalization is applied inside
  /// every product so that small-integer directions give exact tensors.
  static Basis4 from_directions(BasisName name, std::array<Vector, 4> directions,
                                std::array<double, 4> energies = {});

  /// {|00>, (|01>+|10>)/sqrt2, |11>, (|01>-|10>)/sqrt2}.
  static Basis4 multiplet_swap();
  static Basis4 computational();
  /// The basis a gate's channel is expressed in.
  static Basis4 for_gate(Gate gate);

  BasisName name() const noexcept { return name_; }
  /// Normalized amplitudes of state a.
  Vector vector(std::size_t a) const;
  double energy(std::size_t a) const { return energies_.at(a); }
  /// |<beta|a>|^2 for computational state beta.
  double overlap2(std::size_t beta, std::size_t a) const;

  /// <a| op |b> for a 4x4 operator in the computational basis.
  Complex matrix_element(std::size_t a, const CMat& op, std::size_t b) const;

  /// Unnormalized <u_a| op |u_b> and the squared norm of u_a; the normalized
  /// element is raw / sqrt(norm2(a) norm2(b)).
  Complex raw_element(std::size_t a, const CMat& op, std::size_t b) const;
  double norm2(std::size_t a) const { return norm2_.at(a); }

 private:
  Basis4(BasisName name, std::array<Vector, 4> directions, std::array<double, 4> norm2,
         std::array<double, 4> energies);
  void check_orthonormal() const;

  BasisName name_;
  std::array<Vector, 4> raw_;
  std::array<double, 4> norm2_;
  std::array<double, 4> energies_;
};

/// M_abcd = (1/4) sum_{qubit, P in X,Y,Z} <a|P_q|b><c|P_q|d>.
class MTensor {
 public:
  explicit MTensor(const Basis4& basis);

  Complex operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    return m_[((a * 4 + b) * 4 + c) * 4 + d];
  }

  /// sum_{a'} M_{a a' a' c}.
  Complex contracted(std::size_t a, std::size_t c) const;

 private:
  std::array<Complex, 256> m_{};
};

MTensor m_tensor(const Basis4& basis);

/// One element of the evolution superoperator for the reduced density matrix,
///   V_{ab|cd} = e^{-i t (E_a - E_b)} { d_ac d_bd
///               - [d_bd sum_a' M_{aa'a'c} - M_{acdb}] k
///               - [d_ac sum_a' M_{aa'a'b} - M_{acdb}] k* }.
/// The phase is 1 when E_a = E_b (always, for populations).
Complex v_element(const Basis4& basis, const MTensor& mt, Complex k, std::size_t a,
                  std::size_t b, std::size_t c, std::size_t d, double t = 0.0);

/// Column-stochastic population transfer matrix: column c is the output
/// distribution for the pure input state c of `basis`.
struct Channel {
  Gate gate;
  BasisName basis;
  double alpha;  // Re k(t)
  RealMat4 matrix;
};

inline constexpr double kChannelAlphaMax = 0.5;       // exclusive
inline constexpr double kPredictAlphaMax = 1.0 / 3.0;  // inclusive

/// Population channel of a noisy SWAP (multiplet basis) or Identity
/// (computational basis). Throws AlphaOutOfRange unless 0 <= alpha < 1/2.
Channel population_channel(Gate gate, double alpha);

/// Diagonal populations in `basis` mapped to computational-basis populations:
/// p_beta = sum_a |<beta|a>|^2 rho_a. Throws NotNormalized when the input does
/// not sum to 1 within 1e-9.
std::array<double, 4> to_computational(std::span<const double, 4> rho, const Basis4& basis);

/// Predicted output probabilities over {|00>,|01>,|10>,|11>} (rows) for each
/// input state (columns; multiplet inputs for SWAP, computational for
/// Identity). Throws AlphaOutOfRange unless 0 <= alpha <= 1/3.
RealMat4 predict_table(Gate gate, double alpha);

}  // namespace nmqem
