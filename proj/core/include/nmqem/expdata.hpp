#pragma once

// Device shot-count tables: ingestion, normalization, and estimation of
// alpha = Re k(tau_s) from the symbolic role each (input, output) cell plays
// in the predicted tables.
//
// Document schema (JSON):
//   {
//     "gate": "swap" | "identity",
//     "device": "<label>",
//     "shots": <positive int>,
//     "published_range": {"min": <real>, "max": <real>},   // optional
//     "runs": [ {"input": "m1", "counts": {"00": 955, "01": 17, ...}}, ... ]
//   }
// Inputs are m1..m4 for swap and 00, 01, 10, 11 for identity. The probability
// variant replaces "counts" with "probs" (each run summing to 1 +- 0.02).

#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nmqem/channel.hpp"
#include "nmqem/numerics.hpp"

namespace nmqem {

inline constexpr std::array<std::string_view, 4> kOutcomeLabels = {"00", "01", "10", "11"};

/// Column labels for a gate's input states, in table order.
const std::array<std::string_view, 4>& input_labels(Gate gate);

/// A bound quoted alongside a device table, kept for comparison only.
struct PublishedRange {
  double min;
  double max;
};

struct CountRun {
  std::string input;
  std::array<std::int64_t, 4> counts{};  // indexed like kOutcomeLabels
};

struct CountTable {
  Gate gate;
  std::string device;
  std::int64_t shots = 0;
  std::vector<CountRun> runs;  // canonical input order after loading
  std::optional<PublishedRange> published;
};

/// Outcome probabilities: row = output (kOutcomeLabels), column = input.
struct ProbTable {
  Gate gate;
  std::string device;
  RealMat4 p;
  std::optional<PublishedRange> published;
};

/// Throws ParseError (malformed text or field types, with line/field context)
/// or SchemaError (unknown gate, bad labels, duplicate input, counts > shots).
CountTable load_counts(std::istream& in);

/// Probability-variant document.
ProbTable load_probs(std::istream& in);

/// Either variant, normalized to probabilities.
ProbTable load_table(std::istream& in);

/// count / run total per column. Throws EmptyRun for a zero-total run.
ProbTable normalize(const CountTable& ct);

enum class CellRole { kOneMinus2A, kHalfOneMinus2A, kAlpha, kZero };

std::string_view to_string(CellRole role);

using RoleTable = std::array<std::array<CellRole, 4>, 4>;  // [output][input]

/// Symbolic role of each predicted cell; matches predict_table's algebra.
RoleTable classify_cells(Gate gate);

/// Model value of a role at a given alpha (affine in alpha).
double role_value(CellRole role, double alpha);

struct CellEstimate {
  std::string input;
  std::string output;
  CellRole role;
  double observed;
  double estimate;
};

struct RekEstimate {
  std::vector<CellEstimate> per_cell;  // ZERO cells excluded
  double min = 0.0;       // over ALPHA cells
  double max = 0.0;       // over ALPHA cells
  double lsq = 0.0;       // argmin of sum (p - model(alpha))^2
  double residual = 0.0;  // that sum at lsq, over all 16 cells
};

RekEstimate estimate_re_k(const RealMat4& probs, Gate gate);

/// Gamma0 omega_c tau_s from Re k at u = t / tau_s by inverting re_k_approx.
/// Throws DomainError unless u > 0 and re_k >= 0.
double fit_coupling(double re_k, double u);

struct RangeComparison {
  PublishedRange published;
  bool min_matches;
  bool max_matches;
  bool diverges() const noexcept { return !min_matches || !max_matches; }
};

/// A bound matches when it agrees with the computed one to within 5e-7.
RangeComparison compare_with_published(const RekEstimate& est, const PublishedRange& published);

/// Structured JSON report: device, gate, per_cell, min, max, lsq, residual,
/// fitted coupling at u = 1 and, if the table carries a published range, the
/// comparison with divergence flags.
std::string estimate_report_json(const ProbTable& table, const RekEstimate& est);

}  // namespace nmqem
