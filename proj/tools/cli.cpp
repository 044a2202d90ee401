#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "nmqem/channel.hpp"
#include "nmqem/errors.hpp"
#include "nmqem/expdata.hpp"
#include "nmqem/gamma.hpp"
#include "nmqem/kernel.hpp"
#include "nmqem/recovery.hpp"

namespace nmqem::cli {

namespace {

using nlohmann::json;

/// Raised for bad flag values that CLI11's validators do not catch.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for unreadable or invalid input files.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<double> kDefaultCouplings = {7e-4, 7e-3};

// json number rounded to 10 significant digits.
json jnum(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::strtod(fmt_num(x).c_str(), nullptr);
}

std::vector<double> u_grid(double u_max, int steps) {
  if (!(u_max > 0.0) || !std::isfinite(u_max)) throw UsageError("--u-max must be > 0");
  if (steps < 2) throw UsageError("--steps must be >= 2");
  std::vector<double> u(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) u[static_cast<std::size_t>(i)] = u_max * i / (steps - 1);
  u.back() = u_max;
  return u;
}

void check_couplings(const std::vector<double>& couplings) {
  if (couplings.empty()) throw UsageError("--coupling needs at least one value");
  for (double c : couplings) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw UsageError("--coupling values must be >= 0");
  }
}

Gate require_gate(const std::string& text) {
  const auto gate = parse_gate(text);
  if (!gate) throw UsageError("--gate must be swap or identity");
  return *gate;
}

void require_format(Format f, std::initializer_list<Format> allowed, const char* cmd) {
  if (std::find(allowed.begin(), allowed.end(), f) == allowed.end()) {
    throw UsageError(std::string(cmd) + ": unsupported --format");
  }
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

// Row and column labels for text tables.
std::string input_header(Gate gate, std::size_t col) {
  const std::string_view l = input_labels(gate)[col];
  if (gate == Gate::kSwap) return "|" + std::string(l.substr(1)) + ">m";
  return "|" + std::string(l) + ">";
}

std::string output_header(std::size_t row) { return "|" + std::string(kOutcomeLabels[row]) + ">"; }

// ---------------------------------------------------------------- kernel

struct KernelArgs {
  std::vector<double> couplings = kDefaultCouplings;
  double u_max = 1.0;
  int steps = 101;
  std::string mode = "approx";
  std::optional<double> gamma0;
  double delta0 = 0.0;
  double wc_ts = 10.0;
};

std::string cmd_kernel(const KernelArgs& a, Format format) {
  require_format(format, {Format::kCsv, Format::kJson}, "kernel");
  const auto mode = parse_kernel_mode(a.mode);
  if (!mode) throw UsageError("--mode must be approx, printed or quadrature");
  const auto grid = u_grid(a.u_max, a.steps);
  if (!(a.wc_ts > 0.0)) throw UsageError("--wc-ts must be > 0");
  if (!(a.delta0 >= 0.0)) throw UsageError("--delta0 must be >= 0");

  std::vector<KernelParams> curves;
  if (a.gamma0) {
    if (!(*a.gamma0 >= 0.0)) throw UsageError("--gamma0 must be >= 0");
    curves.push_back({*a.gamma0, a.delta0, a.wc_ts});
  } else {
    check_couplings(a.couplings);
    for (double c : a.couplings) curves.push_back({c / a.wc_ts, a.delta0, a.wc_ts});
  }

  std::ostringstream csv;
  json rows = json::array();
  csv << "coupling,u,re_k,im_k,mode\n";
  for (const auto& p : curves) {
    const double coupling = a.gamma0 ? p.coupling() : a.couplings[&p - curves.data()];
    for (double u : grid) {
      const Complex k = *mode == KernelMode::kApprox ? Complex(re_k_approx(coupling, u), 0.0)
                                                     : evaluate_kernel(*mode, p, u);
      const bool has_im = *mode != KernelMode::kApprox;
      csv << fmt_num(coupling) << ',' << fmt_num(u) << ',' << fmt_num(k.real()) << ','
          << (has_im ? fmt_num(k.imag()) : "") << ',' << a.mode << '\n';
      rows.push_back({{"coupling", jnum(coupling)},
                      {"u", jnum(u)},
                      {"re_k", jnum(k.real())},
                      {"im_k", has_im ? jnum(k.imag()) : json(nullptr)},
                      {"mode", a.mode}});
    }
  }
  if (format == Format::kJson) return rows.dump(2) + "\n";
  return csv.str();
}

// ------------------------------------------------------------------ cost

struct CostArgs {
  std::string gate;
  std::vector<double> couplings = kDefaultCouplings;
  double u_max = 1.0;
  int steps = 101;
};

std::string cmd_cost(const CostArgs& a, Format format) {
  require_format(format, {Format::kCsv, Format::kJson}, "cost");
  const Gate gate = require_gate(a.gate);
  check_couplings(a.couplings);
  const auto grid = u_grid(a.u_max, a.steps);

  std::ostringstream csv;
  json rows = json::array();
  csv << "coupling,u,alpha,cost,status\n";
  for (double c : a.couplings) {
    for (double u : grid) {
      const double alpha = re_k_approx(c, u);
      std::optional<double> cost;
      if (alpha < kRecoveryAlphaMax) {
        try {
          cost = gate == Gate::kSwap ? cost_swap(alpha) : cost_id(alpha);
        } catch (const DenominatorNearZero&) {
        }
      }
      const char* status = cost ? "ok" : "out_of_domain";
      csv << fmt_num(c) << ',' << fmt_num(u) << ',' << fmt_num(alpha) << ','
          << (cost ? fmt_num(*cost) : "") << ',' << status << '\n';
      rows.push_back({{"coupling", jnum(c)},
                      {"u", jnum(u)},
                      {"alpha", jnum(alpha)},
                      {"cost", cost ? jnum(*cost) : json(nullptr)},
                      {"status", status}});
    }
  }
  if (format == Format::kJson) return rows.dump(2) + "\n";
  return csv.str();
}

// --------------------------------------------------------------- predict

std::string cmd_predict(const std::string& gate_text, double alpha, Format format) {
  const Gate gate = require_gate(gate_text);
  const RealMat4 t = predict_table(gate, alpha);

  if (format == Format::kJson) {
    json doc;
    doc["gate"] = std::string(to_string(gate));
    doc["alpha"] = jnum(alpha);
    doc["inputs"] = json::array();
    for (std::size_t c = 0; c < 4; ++c) doc["inputs"].push_back(input_header(gate, c));
    doc["outputs"] = json::array();
    for (std::size_t r = 0; r < 4; ++r) doc["outputs"].push_back(output_header(r));
    doc["table"] = json::array();
    for (std::size_t r = 0; r < 4; ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < 4; ++c) row.push_back(jnum(t(r, c)));
      doc["table"].push_back(row);
    }
    return doc.dump(2) + "\n";
  }

  std::ostringstream os;
  if (format == Format::kCsv) {
    os << "output";
    for (std::size_t c = 0; c < 4; ++c) os << ',' << input_header(gate, c);
    os << '\n';
    for (std::size_t r = 0; r < 4; ++r) {
      os << output_header(r);
      for (std::size_t c = 0; c < 4; ++c) os << ',' << fmt_num(t(r, c));
      os << '\n';
    }
    return os.str();
  }

  constexpr std::size_t kWidth = 14;
  os << "gate " << to_string(gate) << ", alpha = Re k = " << fmt_num(alpha) << '\n';
  os << "rows: output state, columns: input state\n";
  os << pad("", 6);
  for (std::size_t c = 0; c < 4; ++c) os << pad(input_header(gate, c), kWidth);
  os << '\n';
  for (std::size_t r = 0; r < 4; ++r) {
    os << std::left << std::setw(6) << output_header(r) << std::right;
    for (std::size_t c = 0; c < 4; ++c) os << pad(fmt_num(t(r, c)), kWidth);
    os << '\n';
  }
  return os.str();
}

// -------------------------------------------------------------- estimate

std::string cmd_estimate(const std::string& path, const std::string& gate_text, Format format) {
  require_format(format, {Format::kJson, Format::kTable}, "estimate");
  std::optional<Gate> gate_flag;
  if (!gate_text.empty()) gate_flag = require_gate(gate_text);

  std::ifstream in(path);
  if (!in) throw DataError("cannot open counts file '" + path + "'");
  ProbTable table;
  try {
    table = load_table(in);
  } catch (const ParseError& e) {
    throw DataError(path + ": parse error: " + e.what());
  } catch (const SchemaError& e) {
    throw DataError(path + ": schema error: " + e.what());
  } catch (const EmptyRun& e) {
    throw DataError(path + ": " + e.what());
  }
  if (gate_flag && *gate_flag != table.gate) {
    throw DataError(path + ": --gate " + gate_text + " disagrees with the file's gate " +
                    std::string(to_string(table.gate)));
  }

  const RekEstimate est = estimate_re_k(table.p, table.gate);
  if (format == Format::kJson) return estimate_report_json(table, est);

  std::ostringstream os;
  os << "device " << table.device << ", gate " << to_string(table.gate) << '\n';
  os << "input  output  role               observed    estimate\n";
  for (const auto& c : est.per_cell) {
    os << std::left << std::setw(7) << c.input << std::setw(8) << c.output << std::setw(19)
       << to_string(c.role) << std::right << pad(fmt_num(c.observed), 8)
       << pad(fmt_num(c.estimate), 12) << '\n';
  }
  os << "Re k range (ALPHA cells): " << fmt_num(est.min) << " .. " << fmt_num(est.max) << '\n';
  os << "least-squares Re k (extension): " << fmt_num(est.lsq)
     << "  residual " << fmt_num(est.residual) << '\n';
  os << "fitted coupling at u = 1: " << fmt_num(fit_coupling(std::max(est.lsq, 0.0), 1.0)) << '\n';
  if (table.published) {
    const auto cmp = compare_with_published(est, *table.published);
    os << "published range: " << fmt_num(cmp.published.min) << " .. "
       << fmt_num(cmp.published.max) << "  min " << (cmp.min_matches ? "matches" : "DIVERGES")
       << ", max " << (cmp.max_matches ? "matches" : "DIVERGES") << '\n';
  }
  return os.str();
}

// ------------------------------------------------------------- decompose

std::string cmd_decompose(const std::string& gate_text, double alpha, Format format) {
  require_format(format, {Format::kJson, Format::kTable, Format::kCsv}, "decompose");
  const Gate gate = require_gate(gate_text);
  const GammaBasis basis = build_gamma_basis();
  const RecoveryOp op = make_recovery(gate, alpha, basis);
  const double residual = max_abs_diff(reconstruct(basis, op.gamma), op.matrix.to_cmat());
  const double cost_decomp = cost_from_decomposition(op);
  const double cost_printed = cost_closed_form(op);
  const bool diverges = std::abs(cost_decomp - cost_printed) > 1e-10;
  const char* note =
      "decomposition cost (sum of |gamma coefficients|) differs from the closed-form cost";

  if (format == Format::kJson) {
    json doc;
    doc["gate"] = std::string(to_string(gate));
    doc["alpha"] = jnum(alpha);
    doc["coefficients"] = json::array();
    for (std::size_t r = 0; r < kGammaCount; ++r) {
      doc["coefficients"].push_back({{"label", basis[r].label},
                                     {"set", std::string(to_string(basis[r].set))},
                                     {"re", jnum(op.gamma[r].real())},
                                     {"im", jnum(op.gamma[r].imag())}});
    }
    doc["reconstruction_residual"] = jnum(residual);
    doc["cost_decomposition"] = jnum(cost_decomp);
    doc["cost_closed_form"] = jnum(cost_printed);
    doc["costs_agree"] = !diverges;
    if (diverges) doc["note"] = note;
    return doc.dump(2) + "\n";
  }

  std::ostringstream os;
  if (format == Format::kCsv) {
    os << "label,set,re,im\n";
    for (std::size_t r = 0; r < kGammaCount; ++r) {
      os << basis[r].label << ',' << to_string(basis[r].set) << ',' << fmt_num(op.gamma[r].real())
         << ',' << fmt_num(op.gamma[r].imag()) << '\n';
    }
    return os.str();
  }
  os << "recovery operator, gate " << to_string(gate) << ", alpha = " << fmt_num(alpha) << '\n';
  os << "label   set                 re                im\n";
  for (std::size_t r = 0; r < kGammaCount; ++r) {
    os << std::left << std::setw(8) << basis[r].label << std::setw(8)
       << to_string(basis[r].set) << std::right << pad(fmt_num(op.gamma[r].real()), 18)
       << pad(fmt_num(op.gamma[r].imag()), 18) << '\n';
  }
  os << "reconstruction residual: " << fmt_num(residual) << '\n';
  os << "cost (sum |c_r|):        " << fmt_num(cost_decomp) << '\n';
  os << "cost (closed form):      " << fmt_num(cost_printed) << '\n';
  if (diverges) os << "note: " << note << '\n';
  return os.str();
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw DataError("cannot write '" + out_path + "'");
  file << text;
}

}  // namespace

std::string fmt_num(double x) {
  if (x == 0.0) return "0";
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::optional<Format> parse_format(std::string_view text) {
  if (text == "csv") return Format::kCsv;
  if (text == "json") return Format::kJson;
  if (text == "table") return Format::kTable;
  return std::nullopt;
}

int gamma_check(const GammaBasis& basis, Format format, std::ostream& out) {
  const CliffordCheck chk = check_clifford(basis);
  const bool ok = chk.all_pass();
  const bool rank_ok = chk.flatten_rank == kGammaCount;

  if (format == Format::kJson) {
    json doc;
    doc["anticommutators"] = json::array();
    for (const auto& a : chk.anticommutators) {
      doc["anticommutators"].push_back(
          {{"mu", a.mu}, {"nu", a.nu}, {"metric", a.metric}, {"pass", a.exact}});
    }
    doc["rank"] = {{"value", chk.flatten_rank}, {"expected", kGammaCount}, {"pass", rank_ok}};
    doc["gamma5_product"] = {{"pass", chk.gamma5_product}};
    doc["unit_entries"] = {{"pass", chk.entries_in_unit_set}};
    doc["pass"] = ok;
    out << doc.dump(2) << '\n';
  } else {
    auto verdict = [](bool b) { return b ? "pass" : "FAIL"; };
    out << "{g_mu, g_nu} = 2 g_mu_nu I4\n";
    out << "mu  nu  g_mu_nu  result\n";
    for (const auto& a : chk.anticommutators) {
      out << ' ' << a.mu << "   " << a.nu << "  " << pad(std::to_string(a.metric), 7) << "  "
          << verdict(a.exact) << '\n';
    }
    out << "linear independence: rank " << chk.flatten_rank << "/" << kGammaCount << " "
        << verdict(rank_ok) << '\n';
    out << "g0 g1 g2 g3 == g5: " << verdict(chk.gamma5_product) << '\n';
    out << "entries in {0, +-1, +-i}: " << verdict(chk.entries_in_unit_set) << '\n';
    out << "overall: " << verdict(ok) << '\n';
  }
  return ok ? kExitOk : kExitAlgebra;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Non-Markovian two-qubit noise channels, recovery operators and QEM costs"};
  app.name("nmqem");
  app.require_subcommand(1);
  app.fallthrough();

  std::string format_text;
  std::string out_path;
  app.add_option("--format", format_text, "Output format")
      ->check(CLI::IsMember({"csv", "json", "table"}));
  app.add_option("--out", out_path, "Write output to PATH instead of stdout");

  auto* gamma_sub = app.add_subcommand("gamma-check", "Verify the Dirac Gamma algebra");

  KernelArgs kargs;
  auto* kernel_sub = app.add_subcommand("kernel", "Tabulate Re/Im k over u = t / tau_s");
  kernel_sub->add_option("--coupling", kargs.couplings, "Gamma0*wc*tau_s values")
      ->delimiter(',');
  kernel_sub->add_option("--u-max", kargs.u_max, "Largest u");
  kernel_sub->add_option("--steps", kargs.steps, "Grid points including both ends");
  kernel_sub->add_option("--mode", kargs.mode, "approx | printed | quadrature")
      ->check(CLI::IsMember({"approx", "printed", "quadrature"}));
  kernel_sub->add_option("--gamma0", kargs.gamma0, "Gamma0 (overrides --coupling)");
  kernel_sub->add_option("--delta0", kargs.delta0, "Delta0");
  kernel_sub->add_option("--wc-ts", kargs.wc_ts, "omega_c * tau_s");

  CostArgs cargs;
  auto* cost_sub = app.add_subcommand("cost", "QEM cost along u for each coupling");
  cost_sub->add_option("--gate", cargs.gate, "swap | identity")->required();
  cost_sub->add_option("--coupling", cargs.couplings, "Gamma0*wc*tau_s values")->delimiter(',');
  cost_sub->add_option("--u-max", cargs.u_max, "Largest u");
  cost_sub->add_option("--steps", cargs.steps, "Grid points including both ends");

  std::string predict_gate;
  double predict_alpha = 0.0;
  auto* predict_sub = app.add_subcommand("predict", "Predicted output probability table");
  predict_sub->add_option("--gate", predict_gate, "swap | identity")->required();
  predict_sub->add_option("--alpha", predict_alpha, "Re k")->required();

  std::string counts_path;
  std::string estimate_gate;
  auto* estimate_sub = app.add_subcommand("estimate", "Estimate Re k from device counts");
  estimate_sub->add_option("--counts", counts_path, "Counts/probability document")->required();
  estimate_sub->add_option("--gate", estimate_gate, "swap | identity");

  std::string decompose_gate;
  double decompose_alpha = 0.0;
  auto* decompose_sub = app.add_subcommand("decompose", "Gamma expansion of a recovery operator");
  decompose_sub->add_option("--gate", decompose_gate, "swap | identity")->required();
  decompose_sub->add_option("--alpha", decompose_alpha, "Re k")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  auto format_or = [&](Format fallback) {
    return format_text.empty() ? fallback : *parse_format(format_text);
  };

  try {
    if (gamma_sub->parsed()) {
      std::ostringstream os;
      const int code = gamma_check(build_gamma_basis(), format_or(Format::kJson), os);
      emit(os.str(), out_path, out);
      return code;
    }
    std::string text;
    if (kernel_sub->parsed()) {
      text = cmd_kernel(kargs, format_or(Format::kCsv));
    } else if (cost_sub->parsed()) {
      text = cmd_cost(cargs, format_or(Format::kCsv));
    } else if (predict_sub->parsed()) {
      text = cmd_predict(predict_gate, predict_alpha, format_or(Format::kTable));
    } else if (estimate_sub->parsed()) {
      text = cmd_estimate(counts_path, estimate_gate, format_or(Format::kJson));
    } else if (decompose_sub->parsed()) {
      text = cmd_decompose(decompose_gate, decompose_alpha, format_or(Format::kTable));
    }
    emit(text, out_path, out);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const Error& e) {
    // Library domain errors here come from flag values (alpha range, etc.).
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace nmqem::cli
