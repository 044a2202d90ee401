#include "nmqem/channel.hpp"

#include <cmath>
#include <string>

#include "nmqem/errors.hpp"

namespace nmqem {

namespace {

const Complex kI{0.0, 1.0};

// X_1, Y_1, Z_1, X_2, Y_2, Z_2 in the computational basis.
std::array<CMat, 6> qubit_paulis() {
  const CMat id = CMat::identity(2);
  const CMat x{{0.0, 1.0}, {1.0, 0.0}};
  const CMat y{{0.0, -kI}, {kI, 0.0}};
  const CMat z{{1.0, 0.0}, {0.0, -1.0}};
  return {kron2(x, id), kron2(y, id), kron2(z, id), kron2(id, x), kron2(id, y), kron2(id, z)};
}

void require_alpha(double alpha, double max, bool inclusive, const char* what) {
  const bool ok = alpha >= 0.0 && (inclusive ? alpha <= max : alpha < max);
  if (!ok || !std::isfinite(alpha)) {
    throw AlphaOutOfRange(std::string(what) + ": alpha = " + std::to_string(alpha) +
                          " outside [0, " + std::to_string(max) + (inclusive ? "]" : ")"));
  }
}

}  // namespace

std::string_view to_string(Gate gate) {
  return gate == Gate::kSwap ? "swap" : "identity";
}

std::optional<Gate> parse_gate(std::string_view text) {
  if (text == "swap") return Gate::kSwap;
  if (text == "identity") return Gate::kIdentity;
  return std::nullopt;
}

std::string_view to_string(BasisName name) {
  return name == BasisName::kMultipletSwap ? "multiplet_swap" : "computational";
}

Basis4::Basis4(BasisName name, std::array<Vector, 4> vectors, std::array<double, 4> energies)
    : Basis4(name, vectors, {1.0, 1.0, 1.0, 1.0}, energies) {}

Basis4::Basis4(BasisName name, std::array<Vector, 4> directions, std::array<double, 4> norm2,
               std::array<double, 4> energies)
    : name_(name), raw_(directions), norm2_(norm2), energies_(energies) {
  check_orthonormal();
}

Basis4 Basis4::from_directions(BasisName name, std::array<Vector, 4> directions,
                               std::array<double, 4> energies) {
  std::array<double, 4> norm2{};
  for (std::size_t a = 0; a < 4; ++a) {
    for (const auto& z : directions[a]) norm2[a] += std::norm(z);
    if (!(norm2[a] > 0.0)) throw NonOrthonormalBasis("Basis4: zero direction vector");
  }
  return Basis4(name, directions, norm2, energies);
}

void Basis4::check_orthonormal() const {
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      Complex gram{};
      for (std::size_t i = 0; i < 4; ++i) gram += std::conj(raw_[a][i]) * raw_[b][i];
      gram /= std::sqrt(norm2_[a] * norm2_[b]);
      const double expected = a == b ? 1.0 : 0.0;
      if (std::abs(gram - expected) > 1e-12) {
        throw NonOrthonormalBasis("Basis4: <" + std::to_string(a) + "|" + std::to_string(b) +
                                  "> deviates from " + std::to_string(expected));
      }
    }
  }
}

Basis4 Basis4::multiplet_swap() {
  return from_directions(BasisName::kMultipletSwap, {{
                                                        {1.0, 0.0, 0.0, 0.0},
                                                        {0.0, 1.0, 1.0, 0.0},
                                                        {0.0, 0.0, 0.0, 1.0},
                                                        {0.0, 1.0, -1.0, 0.0},
                                                    }});
}

Basis4 Basis4::computational() {
  return from_directions(BasisName::kComputational, {{
                                                        {1.0, 0.0, 0.0, 0.0},
                                                        {0.0, 1.0, 0.0, 0.0},
                                                        {0.0, 0.0, 1.0, 0.0},
                                                        {0.0, 0.0, 0.0, 1.0},
                                                    }});
}

Basis4 Basis4::for_gate(Gate gate) {
  return gate == Gate::kSwap ? multiplet_swap() : computational();
}

Basis4::Vector Basis4::vector(std::size_t a) const {
  Vector v = raw_.at(a);
  const double scale = 1.0 / std::sqrt(norm2_[a]);
  for (auto& z : v) z *= scale;
  return v;
}

double Basis4::overlap2(std::size_t beta, std::size_t a) const {
  return std::norm(raw_.at(a).at(beta)) / norm2_[a];
}

Complex Basis4::raw_element(std::size_t a, const CMat& op, std::size_t b) const {
  const auto& bra = raw_.at(a);
  const auto& ket = raw_.at(b);
  Complex sum{};
  for (std::size_t r = 0; r < 4; ++r) {
    if (bra[r] == Complex{}) continue;
    Complex row{};
    for (std::size_t c = 0; c < 4; ++c) row += op(r, c) * ket[c];
    sum += std::conj(bra[r]) * row;
  }
  return sum;
}

Complex Basis4::matrix_element(std::size_t a, const CMat& op, std::size_t b) const {
  return raw_element(a, op, b) / std::sqrt(norm2_.at(a) * norm2_.at(b));
}

MTensor::MTensor(const Basis4& basis) {
  std::array<std::array<Complex, 16>, 6> elems{};
  const auto paulis = qubit_paulis();
  for (std::size_t p = 0; p < paulis.size(); ++p)
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b) elems[p][a * 4 + b] = basis.raw_element(a, paulis[p], b);

  for (std::size_t ab = 0; ab < 16; ++ab) {
    for (std::size_t cd = 0; cd < 16; ++cd) {
      Complex sum{};
      for (const auto& e : elems) sum += e[ab] * e[cd];
      const double n2 = basis.norm2(ab / 4) * basis.norm2(ab % 4) * basis.norm2(cd / 4) *
                        basis.norm2(cd % 4);
      m_[ab * 16 + cd] = 0.25 * sum / std::sqrt(n2);
    }
  }
}

Complex MTensor::contracted(std::size_t a, std::size_t c) const {
  Complex sum{};
  for (std::size_t ap = 0; ap < 4; ++ap) sum += (*this)(a, ap, ap, c);
  return sum;
}

MTensor m_tensor(const Basis4& basis) { return MTensor(basis); }

Complex v_element(const Basis4& basis, const MTensor& mt, Complex k, std::size_t a,
                  std::size_t b, std::size_t c, std::size_t d, double t) {
  if (a > 3 || b > 3 || c > 3 || d > 3) throw DomainError("v_element: index out of range 0..3");
  const double dac = a == c ? 1.0 : 0.0;
  const double dbd = b == d ? 1.0 : 0.0;
  const Complex cross = mt(a, c, d, b);
  const Complex first = dbd * mt.contracted(a, c) - cross;
  const Complex second = dac * mt.contracted(a, b) - cross;
  const Complex body = dac * dbd - first * k - second * std::conj(k);
  const double de = basis.energy(a) - basis.energy(b);
  if (de == 0.0 || t == 0.0) return body;
  return std::exp(Complex(0.0, -t * de)) * body;
}

Channel population_channel(Gate gate, double alpha) {
  require_alpha(alpha, kChannelAlphaMax, false, "population_channel");
  const Basis4 basis = Basis4::for_gate(gate);
  const MTensor mt(basis);
  Channel ch{gate, basis.name(), alpha, {}};
  for (std::size_t out = 0; out < 4; ++out)
    for (std::size_t in = 0; in < 4; ++in)
      ch.matrix(out, in) = v_element(basis, mt, Complex(alpha, 0.0), out, out, in, in).real();
  return ch;
}

std::array<double, 4> to_computational(std::span<const double, 4> rho, const Basis4& basis) {
  double total = 0.0;
  for (double p : rho) total += p;
  if (std::abs(total - 1.0) > 1e-9) {
    throw NotNormalized("to_computational: populations sum to " + std::to_string(total));
  }
  std::array<double, 4> out{};
  for (std::size_t beta = 0; beta < 4; ++beta)
    for (std::size_t a = 0; a < 4; ++a) out[beta] += basis.overlap2(beta, a) * rho[a];
  return out;
}

RealMat4 predict_table(Gate gate, double alpha) {
  require_alpha(alpha, kPredictAlphaMax, true, "predict_table");
  const Channel ch = population_channel(gate, alpha);
  const Basis4 basis = Basis4::for_gate(gate);
  RealMat4 table;
  for (std::size_t in = 0; in < 4; ++in) {
    const std::array<double, 4> column{ch.matrix(0, in), ch.matrix(1, in), ch.matrix(2, in),
                                       ch.matrix(3, in)};
    const auto comp = to_computational(column, basis);
    for (std::size_t out = 0; out < 4; ++out) table(out, in) = comp[out];
  }
  return table;
}

}  // namespace nmqem
