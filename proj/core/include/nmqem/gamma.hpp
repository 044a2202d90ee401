#pragma once

// The sixteen Dirac Gamma matrices, grouped as
//   Gamma1 = {I}, Gamma2 = {g_mu}, Gamma3 = {g_mu g_nu, mu < nu},
//   Gamma4 = {g5 g_mu}, Gamma5 = {g5 = g0 g1 g2 g3},
// with g_i = offdiag(sigma_i, sigma_i) and g0 = i diag(I, -I). Any 4x4 matrix
// has a unique expansion in this basis.

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "nmqem/numerics.hpp"

namespace nmqem {

enum class GammaSet { kGamma1 = 1, kGamma2, kGamma3, kGamma4, kGamma5 };

std::string_view to_string(GammaSet set);

inline constexpr std::size_t kGammaCount = 16;

/// Fixed output ordering: I; g0..g3; g0g1, g0g2, g0g3, g1g2, g1g3, g2g3;
/// g5g0..g5g3; g5.
inline constexpr std::array<std::string_view, kGammaCount> kGammaLabels = {
    "I",    "g0",   "g1",   "g2",   "g3",   "g0g1", "g0g2", "g0g3",
    "g1g2", "g1g3", "g2g3", "g5g0", "g5g1", "g5g2", "g5g3", "g5"};

/// Index of a label in kGammaLabels. Throws DomainError for unknown labels.
std::size_t gamma_index(std::string_view label);

struct GammaElement {
  std::string label;
  GammaSet set;
  CMat matrix;
};

class GammaBasis {
 public:
  /// Any 16 elements in the canonical order. The canonical basis comes from
  /// build_gamma_basis(); other inputs exist for self-check fixtures.
  explicit GammaBasis(std::array<GammaElement, kGammaCount> elements);

  const GammaElement& operator[](std::size_t i) const { return elements_[i]; }
  const GammaElement& at(std::string_view label) const { return elements_[gamma_index(label)]; }
  std::size_t size() const noexcept { return kGammaCount; }
  const std::array<GammaElement, kGammaCount>& elements() const noexcept { return elements_; }
  auto begin() const noexcept { return elements_.begin(); }
  auto end() const noexcept { return elements_.end(); }

  /// The generator g_mu, mu in 0..3.
  const CMat& gamma(std::size_t mu) const;

  /// 16x16 matrix whose column r is the row-major flattening of element r.
  const CMat& flattened() const noexcept { return flat_; }

 private:
  std::array<GammaElement, kGammaCount> elements_;
  CMat flat_;
};

/// Minkowski metric with g11 = g22 = g33 = -g00 = 1.
int metric(std::size_t mu, std::size_t nu);

GammaBasis build_gamma_basis();

/// {g_mu, g_nu} = g_mu g_nu + g_nu g_mu. Throws DomainError for mu, nu > 3.
CMat anticommutator(const GammaBasis& basis, std::size_t mu, std::size_t nu);

/// Expansion weights, indexed in kGammaLabels order.
struct GammaCoeffs {
  std::array<Complex, kGammaCount> values{};

  Complex& operator[](std::size_t i) { return values[i]; }
  const Complex& operator[](std::size_t i) const { return values[i]; }
  const Complex& at(std::string_view label) const { return values[gamma_index(label)]; }

  /// Sum of |c_r|.
  double l1_norm() const noexcept;
};

/// Unique coefficients with sum_r c_r gamma_r = m, from the 16x16 linear
/// system over flattened matrices.
GammaCoeffs decompose(const GammaBasis& basis, const CMat& m);

CMat reconstruct(const GammaBasis& basis, const GammaCoeffs& c);

/// Outcome of the Clifford-algebra self check.
struct CliffordCheck {
  struct Anticommutator {
    std::size_t mu;
    std::size_t nu;
    int metric;
    bool exact;  // {g_mu, g_nu} == 2 g_{mu nu} I4 with exact equality
  };
  std::vector<Anticommutator> anticommutators;  // the 10 pairs mu <= nu
  std::size_t flatten_rank = 0;
  bool gamma5_product = false;     // g0 g1 g2 g3 equals the stored g5 exactly
  bool entries_in_unit_set = false;  // every entry in {0, +-1, +-i}

  bool all_pass() const noexcept;
};

CliffordCheck check_clifford(const GammaBasis& basis);

}  // namespace nmqem
