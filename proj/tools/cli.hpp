#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "nmqem/gamma.hpp"

namespace nmqem::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitAlgebra = 1,
  kExitUsage = 2,
  kExitData = 3,
};

enum class Format { kCsv, kJson, kTable };

std::optional<Format> parse_format(std::string_view text);

/// Runs one invocation. `args` excludes the program name. Normal output goes
/// to `out` (or the --out file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// The gamma-check report for an arbitrary basis; returns kExitOk iff every
/// check passes, kExitAlgebra otherwise.
int gamma_check(const GammaBasis& basis, Format format, std::ostream& out);

/// "%.10g" with negative zero printed as 0.
std::string fmt_num(double x);

}  // namespace nmqem::cli
