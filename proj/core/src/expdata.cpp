#include "nmqem/expdata.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <limits>
#include <numbers>

#include "json.hpp"
#include "nmqem/errors.hpp"
#include "nmqem/kernel.hpp"

namespace nmqem {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 4> kSwapInputs = {"m1", "m2", "m3", "m4"};
constexpr std::array<std::string_view, 4> kIdentityInputs = {"00", "01", "10", "11"};
constexpr double kProbSlack = 0.02;
constexpr double kRangeMatchTol = 5e-7;

json parse_document(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw ParseError("line 1: empty document");
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    throw ParseError("line " + std::to_string(line) + ": " + e.what());
  }
}

const json& require_field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ParseError("field '" + path + "': expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("field '" + path + key + "': missing");
  return *it;
}

std::string require_string(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require_field(obj, key, path);
  if (!v.is_string()) throw ParseError("field '" + path + key + "': expected a string");
  return v.get<std::string>();
}

std::int64_t require_count(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ParseError("field '" + where + "': expected an integer");
  const auto n = v.get<std::int64_t>();
  if (n < 0) throw SchemaError("field '" + where + "': negative count");
  return n;
}

double require_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError("field '" + where + "': expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ParseError("field '" + where + "': not finite");
  return x;
}

std::size_t outcome_index(std::string_view key, const std::string& where) {
  const auto it = std::find(kOutcomeLabels.begin(), kOutcomeLabels.end(), key);
  if (it == kOutcomeLabels.end()) {
    throw SchemaError("field '" + where + "': unknown outcome '" + std::string(key) + "'");
  }
  return static_cast<std::size_t>(it - kOutcomeLabels.begin());
}

struct Header {
  Gate gate;
  std::string device;
  std::int64_t shots;
  std::optional<PublishedRange> published;
};

Header read_header(const json& doc) {
  const std::string gate_text = require_string(doc, "gate", "");
  const auto gate = parse_gate(gate_text);
  if (!gate) throw SchemaError("field 'gate': unknown gate '" + gate_text + "'");
  Header h{*gate, require_string(doc, "device", ""), 0, std::nullopt};

  const json& shots = require_field(doc, "shots", "");
  if (!shots.is_number_integer()) throw ParseError("field 'shots': expected an integer");
  h.shots = shots.get<std::int64_t>();
  if (h.shots <= 0) throw SchemaError("field 'shots': must be positive");

  if (const auto it = doc.find("published_range"); it != doc.end()) {
    h.published = PublishedRange{
        require_number(require_field(*it, "min", "published_range."), "published_range.min"),
        require_number(require_field(*it, "max", "published_range."), "published_range.max")};
  }
  return h;
}

// Visits runs in document order, checking labels; returns column indices.
template <typename Fn>
void for_each_run(const json& doc, Gate gate, Fn&& fn) {
  const json& runs = require_field(doc, "runs", "");
  if (!runs.is_array()) throw ParseError("field 'runs': expected an array");
  const auto& labels = input_labels(gate);
  std::array<bool, 4> seen{};
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::string path = "runs[" + std::to_string(i) + "].";
    const std::string input = require_string(runs[i], "input", path);
    const auto it = std::find(labels.begin(), labels.end(), input);
    if (it == labels.end()) {
      throw SchemaError("field '" + path + "input': '" + input + "' is not an input of gate " +
                        std::string(to_string(gate)));
    }
    const auto col = static_cast<std::size_t>(it - labels.begin());
    if (seen[col]) throw SchemaError("field '" + path + "input': duplicate input '" + input + "'");
    seen[col] = true;
    fn(runs[i], path, col, input);
  }
  for (std::size_t c = 0; c < 4; ++c) {
    if (!seen[c]) throw SchemaError("missing run for input '" + std::string(labels[c]) + "'");
  }
}

CountTable counts_from(const json& doc) {
  const Header h = read_header(doc);
  CountTable ct{h.gate, h.device, h.shots, std::vector<CountRun>(4), h.published};
  for_each_run(doc, h.gate, [&](const json& run, const std::string& path, std::size_t col,
                                const std::string& input) {
    const json& counts = require_field(run, "counts", path);
    if (!counts.is_object()) throw ParseError("field '" + path + "counts': expected an object");
    CountRun r{input, {}};
    std::int64_t total = 0;
    for (const auto& [key, value] : counts.items()) {
      const std::string where = path + "counts." + key;
      const std::int64_t n = require_count(value, where);
      r.counts[outcome_index(key, where)] = n;
      total += n;
    }
    if (total > ct.shots) {
      throw SchemaError("field '" + path + "counts': total " + std::to_string(total) +
                        " exceeds shots " + std::to_string(ct.shots));
    }
    ct.runs[col] = std::move(r);
  });
  return ct;
}

ProbTable probs_from(const json& doc) {
  const Header h = read_header(doc);
  ProbTable pt{h.gate, h.device, {}, h.published};
  for_each_run(doc, h.gate, [&](const json& run, const std::string& path, std::size_t col,
                                const std::string&) {
    const json& probs = require_field(run, "probs", path);
    if (!probs.is_object()) throw ParseError("field '" + path + "probs': expected an object");
    double total = 0.0;
    for (const auto& [key, value] : probs.items()) {
      const std::string where = path + "probs." + key;
      const double p = require_number(value, where);
      if (p < 0.0 || p > 1.0) throw SchemaError("field '" + where + "': outside [0, 1]");
      pt.p(outcome_index(key, where), col) = p;
      total += p;
    }
    if (std::abs(total - 1.0) > kProbSlack) {
      throw SchemaError("field '" + path + "probs': sums to " + std::to_string(total) +
                        ", expected 1 +- 0.02");
    }
  });
  return pt;
}

bool uses_counts(const json& doc) {
  const auto it = doc.find("runs");
  if (it == doc.end() || !it->is_array() || it->empty()) return true;
  return (*it)[0].is_object() && (*it)[0].contains("counts");
}

// Ten significant digits, then back to double so JSON prints the short form.
double round_sig(double x) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return std::strtod(buf, nullptr);
}

std::string fmt10(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

const std::array<std::string_view, 4>& input_labels(Gate gate) {
  return gate == Gate::kSwap ? kSwapInputs : kIdentityInputs;
}

CountTable load_counts(std::istream& in) {
  const json doc = parse_document(in);
  if (!uses_counts(doc)) throw SchemaError("document carries probabilities, not counts");
  return counts_from(doc);
}

ProbTable load_probs(std::istream& in) {
  const json doc = parse_document(in);
  if (uses_counts(doc)) throw SchemaError("document carries counts, not probabilities");
  return probs_from(doc);
}

ProbTable load_table(std::istream& in) {
  const json doc = parse_document(in);
  return uses_counts(doc) ? normalize(counts_from(doc)) : probs_from(doc);
}

ProbTable normalize(const CountTable& ct) {
  ProbTable pt{ct.gate, ct.device, {}, ct.published};
  const auto& labels = input_labels(ct.gate);
  for (const CountRun& run : ct.runs) {
    const auto it = std::find(labels.begin(), labels.end(), run.input);
    if (it == labels.end()) throw SchemaError("normalize: unknown input '" + run.input + "'");
    const auto col = static_cast<std::size_t>(it - labels.begin());
    std::int64_t total = 0;
    for (auto n : run.counts) total += n;
    if (total <= 0) throw EmptyRun("normalize: run '" + run.input + "' has no counts");
    for (std::size_t out = 0; out < 4; ++out) {
      pt.p(out, col) = static_cast<double>(run.counts[out]) / static_cast<double>(total);
    }
  }
  return pt;
}

std::string_view to_string(CellRole role) {
  switch (role) {
    case CellRole::kOneMinus2A:
      return "ONE_MINUS_2A";
    case CellRole::kHalfOneMinus2A:
      return "HALF_ONE_MINUS_2A";
    case CellRole::kAlpha:
      return "ALPHA";
    case CellRole::kZero:
      return "ZERO";
  }
  return "?";
}

RoleTable classify_cells(Gate gate) {
  constexpr auto O = CellRole::kOneMinus2A;
  constexpr auto H = CellRole::kHalfOneMinus2A;
  constexpr auto A = CellRole::kAlpha;
  constexpr auto Z = CellRole::kZero;
  if (gate == Gate::kSwap) {
    // inputs m1..m4; the m3 column follows the channel algebra (1-2a on |11>).
    return {{{O, A, Z, A},  //
             {A, H, A, H},
             {A, H, A, H},
             {Z, A, O, A}}};
  }
  // inputs 00, 01, 10, 11; the (10, 10) cell is 1-2a.
  return {{{O, A, A, Z},  //
           {A, O, Z, A},
           {A, Z, O, A},
           {Z, A, A, O}}};
}

double role_value(CellRole role, double alpha) {
  switch (role) {
    case CellRole::kOneMinus2A:
      return 1.0 - 2.0 * alpha;
    case CellRole::kHalfOneMinus2A:
      return 0.5 - alpha;
    case CellRole::kAlpha:
      return alpha;
    case CellRole::kZero:
      return 0.0;
  }
  return 0.0;
}

RekEstimate estimate_re_k(const RealMat4& probs, Gate gate) {
  const RoleTable roles = classify_cells(gate);
  const auto& inputs = input_labels(gate);
  RekEstimate est;
  est.min = std::numeric_limits<double>::infinity();
  est.max = -std::numeric_limits<double>::infinity();

  // model = intercept + slope * alpha; the lsq solution is closed form.
  double num = 0.0;
  double den = 0.0;
  for (std::size_t out = 0; out < 4; ++out) {
    for (std::size_t in = 0; in < 4; ++in) {
      const CellRole role = roles[out][in];
      const double p = probs(out, in);
      const double intercept = role_value(role, 0.0);
      const double slope = role_value(role, 1.0) - intercept;
      num += slope * (p - intercept);
      den += slope * slope;
      if (role == CellRole::kZero) continue;
      double e = 0.0;
      switch (role) {
        case CellRole::kAlpha:
          e = p;
          est.min = std::min(est.min, e);
          est.max = std::max(est.max, e);
          break;
        case CellRole::kOneMinus2A:
          e = (1.0 - p) / 2.0;
          break;
        case CellRole::kHalfOneMinus2A:
          e = (1.0 - 2.0 * p) / 2.0;
          break;
        case CellRole::kZero:
          break;
      }
      est.per_cell.push_back(
          {std::string(inputs[in]), std::string(kOutcomeLabels[out]), role, p, e});
    }
  }
  est.lsq = num / den;
  for (std::size_t out = 0; out < 4; ++out) {
    for (std::size_t in = 0; in < 4; ++in) {
      const double r = probs(out, in) - role_value(roles[out][in], est.lsq);
      est.residual += r * r;
    }
  }
  return est;
}

double fit_coupling(double re_k, double u) {
  if (!(u > 0.0) || !std::isfinite(u)) throw DomainError("fit_coupling: u must be > 0");
  if (!(re_k >= 0.0) || !std::isfinite(re_k)) throw DomainError("fit_coupling: re_k must be >= 0");
  constexpr double kPi = std::numbers::pi;
  return re_k / ((2.0 / kPi) * ((kPi / 2.0) * u + 0.5 * u * u));
}

RangeComparison compare_with_published(const RekEstimate& est, const PublishedRange& published) {
  return {published, std::abs(est.min - published.min) <= kRangeMatchTol,
          std::abs(est.max - published.max) <= kRangeMatchTol};
}

std::string estimate_report_json(const ProbTable& table, const RekEstimate& est) {
  json report;
  report["device"] = table.device;
  report["gate"] = std::string(to_string(table.gate));
  json cells = json::array();
  for (const auto& c : est.per_cell) {
    cells.push_back({{"input", c.input},
                     {"output", c.output},
                     {"role", std::string(to_string(c.role))},
                     {"observed", round_sig(c.observed)},
                     {"estimate", round_sig(c.estimate)}});
  }
  report["per_cell"] = std::move(cells);
  report["min"] = round_sig(est.min);
  report["max"] = round_sig(est.max);
  report["range_rule"] = "min/max over ALPHA-role cells";
  report["lsq"] = round_sig(est.lsq);
  report["lsq_note"] = "least-squares fit over all cells (extension beyond min/max ranges)";
  report["residual"] = round_sig(est.residual);
  const double lsq_clamped = std::max(est.lsq, 0.0);
  report["fitted_coupling_u1"] = round_sig(fit_coupling(lsq_clamped, 1.0));
  if (table.published) {
    const RangeComparison cmp = compare_with_published(est, *table.published);
    report["published"] = {{"min", round_sig(cmp.published.min)},
                           {"max", round_sig(cmp.published.max)},
                           {"min_matches", cmp.min_matches},
                           {"max_matches", cmp.max_matches},
                           {"divergence", cmp.diverges()}};
    if (cmp.diverges()) {
      std::vector<std::string> parts;
      if (!cmp.min_matches) parts.push_back("min " + fmt10(est.min) + " vs " + fmt10(cmp.published.min));
      if (!cmp.max_matches) parts.push_back("max " + fmt10(est.max) + " vs " + fmt10(cmp.published.max));
      std::string note = "published range differs from the deterministic ALPHA-cell rule: ";
      for (std::size_t i = 0; i < parts.size(); ++i) note += (i ? ", " : "") + parts[i];
      report["published"]["note"] = note;
    }
  }
  return report.dump(2) + "\n";
}

}  // namespace nmqem
