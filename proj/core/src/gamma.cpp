#include "nmqem/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "nmqem/errors.hpp"

namespace nmqem {

namespace {

const Complex kI{0.0, 1.0};

CMat pauli(int which) {
  switch (which) {
    case 1:
      return CMat{{0.0, 1.0}, {1.0, 0.0}};
    case 2:
      return CMat{{0.0, -kI}, {kI, 0.0}};
    case 3:
      return CMat{{1.0, 0.0}, {0.0, -1.0}};
    default:
      return CMat::identity(2);
  }
}

// [[a, b], [c, d]] assembled from 2x2 blocks.
CMat blocks(const CMat& a, const CMat& b, const CMat& c, const CMat& d) {
  CMat out(4, 4);
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t col = 0; col < 2; ++col) {
      out(r, col) = a(r, col);
      out(r, col + 2) = b(r, col);
      out(r + 2, col) = c(r, col);
      out(r + 2, col + 2) = d(r, col);
    }
  }
  return out;
}

CMat flatten_columns(const std::array<GammaElement, kGammaCount>& elements) {
  CMat flat(kGammaCount, kGammaCount);
  for (std::size_t col = 0; col < kGammaCount; ++col) {
    const auto entries = elements[col].matrix.entries();
    if (entries.size() != kGammaCount) {
      throw ShapeMismatch("GammaBasis: element " + elements[col].label + " is not 4x4");
    }
    for (std::size_t row = 0; row < kGammaCount; ++row) flat(row, col) = entries[row];
  }
  return flat;
}

bool is_unit_entry(Complex z) {
  const double re = z.real();
  const double im = z.imag();
  if (re == 0.0 && im == 0.0) return true;
  if (im == 0.0 && (re == 1.0 || re == -1.0)) return true;
  return re == 0.0 && (im == 1.0 || im == -1.0);
}

}  // namespace

std::string_view to_string(GammaSet set) {
  switch (set) {
    case GammaSet::kGamma1:
      return "Gamma1";
    case GammaSet::kGamma2:
      return "Gamma2";
    case GammaSet::kGamma3:
      return "Gamma3";
    case GammaSet::kGamma4:
      return "Gamma4";
    case GammaSet::kGamma5:
      return "Gamma5";
  }
  return "?";
}

std::size_t gamma_index(std::string_view label) {
  const auto it = std::find(kGammaLabels.begin(), kGammaLabels.end(), label);
  if (it == kGammaLabels.end()) throw DomainError("unknown gamma label '" + std::string(label) + "'");
  return static_cast<std::size_t>(it - kGammaLabels.begin());
}

GammaBasis::GammaBasis(std::array<GammaElement, kGammaCount> elements)
    : elements_(std::move(elements)), flat_(flatten_columns(elements_)) {}

const CMat& GammaBasis::gamma(std::size_t mu) const {
  if (mu > 3) throw DomainError("gamma index must be in 0..3");
  return elements_[1 + mu].matrix;
}

int metric(std::size_t mu, std::size_t nu) {
  if (mu != nu) return 0;
  return mu == 0 ? -1 : 1;
}

GammaBasis build_gamma_basis() {
  const CMat zero(2, 2);
  const CMat id2 = CMat::identity(2);

  std::array<CMat, 4> g = {
      kI * blocks(id2, zero, zero, -1.0 * id2),
      blocks(zero, pauli(1), pauli(1), zero),
      blocks(zero, pauli(2), pauli(2), zero),
      blocks(zero, pauli(3), pauli(3), zero),
  };
  const CMat g5 = g[0] * g[1] * g[2] * g[3];

  std::array<GammaElement, kGammaCount> e = {
      GammaElement{"I", GammaSet::kGamma1, CMat::identity(4)},
      GammaElement{"g0", GammaSet::kGamma2, g[0]},
      GammaElement{"g1", GammaSet::kGamma2, g[1]},
      GammaElement{"g2", GammaSet::kGamma2, g[2]},
      GammaElement{"g3", GammaSet::kGamma2, g[3]},
      GammaElement{"g0g1", GammaSet::kGamma3, g[0] * g[1]},
      GammaElement{"g0g2", GammaSet::kGamma3, g[0] * g[2]},
      GammaElement{"g0g3", GammaSet::kGamma3, g[0] * g[3]},
      GammaElement{"g1g2", GammaSet::kGamma3, g[1] * g[2]},
      GammaElement{"g1g3", GammaSet::kGamma3, g[1] * g[3]},
      GammaElement{"g2g3", GammaSet::kGamma3, g[2] * g[3]},
      GammaElement{"g5g0", GammaSet::kGamma4, g5 * g[0]},
      GammaElement{"g5g1", GammaSet::kGamma4, g5 * g[1]},
      GammaElement{"g5g2", GammaSet::kGamma4, g5 * g[2]},
      GammaElement{"g5g3", GammaSet::kGamma4, g5 * g[3]},
      GammaElement{"g5", GammaSet::kGamma5, g5},
  };
  return GammaBasis(std::move(e));
}

CMat anticommutator(const GammaBasis& basis, std::size_t mu, std::size_t nu) {
  const CMat& a = basis.gamma(mu);
  const CMat& b = basis.gamma(nu);
  return a * b + b * a;
}

double GammaCoeffs::l1_norm() const noexcept {
  double sum = 0.0;
  for (const auto& c : values) sum += std::abs(c);
  return sum;
}

GammaCoeffs decompose(const GammaBasis& basis, const CMat& m) {
  if (m.rows() != 4 || m.cols() != 4) throw ShapeMismatch("decompose: need a 4x4 matrix");
  const auto x = solve_linear(basis.flattened(), m.entries());
  GammaCoeffs c;
  std::copy(x.begin(), x.end(), c.values.begin());
  return c;
}

CMat reconstruct(const GammaBasis& basis, const GammaCoeffs& c) {
  CMat out(4, 4);
  for (std::size_t r = 0; r < kGammaCount; ++r) {
    if (c[r] == Complex{}) continue;
    out += c[r] * basis[r].matrix;
  }
  return out;
}

bool CliffordCheck::all_pass() const noexcept {
  const bool anti = std::all_of(anticommutators.begin(), anticommutators.end(),
                                [](const Anticommutator& a) { return a.exact; });
  return anti && anticommutators.size() == 10 && flatten_rank == kGammaCount &&
         gamma5_product && entries_in_unit_set;
}

CliffordCheck check_clifford(const GammaBasis& basis) {
  CliffordCheck out;
  const CMat id4 = CMat::identity(4);
  for (std::size_t mu = 0; mu < 4; ++mu) {
    for (std::size_t nu = mu; nu < 4; ++nu) {
      const int g = metric(mu, nu);
      const CMat expected = Complex(2.0 * g) * id4;
      out.anticommutators.push_back({mu, nu, g, anticommutator(basis, mu, nu) == expected});
    }
  }
  out.flatten_rank = rank(basis.flattened());
  const CMat product = basis.gamma(0) * basis.gamma(1) * basis.gamma(2) * basis.gamma(3);
  out.gamma5_product = product == basis.at("g5").matrix;
  out.entries_in_unit_set = std::all_of(basis.begin(), basis.end(), [](const GammaElement& e) {
    return std::all_of(e.matrix.entries().begin(), e.matrix.entries().end(), is_unit_entry);
  });
  return out;
}

}  // namespace nmqem
