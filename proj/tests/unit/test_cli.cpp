#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "nmqem/gamma.hpp"

using nmqem::cli::run;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(NMQEM_FIXTURE_DIR) + "/" + name; }

std::string golden(const std::string& name) {
  std::ifstream in(std::string(NMQEM_GOLDEN_DIR) + "/" + name, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("fmt_num") {
  CHECK(nmqem::cli::fmt_num(-0.0) == "0");
  CHECK(nmqem::cli::fmt_num(1.0 / 3.0) == "0.3333333333");
  CHECK(nmqem::cli::fmt_num(9.2275e-3) == "0.0092275");
}

TEST_CASE("usage errors exit 2") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"kernel", "--u-max", "0"}).code == 2);
  CHECK(invoke({"kernel", "--steps", "1"}).code == 2);
  CHECK(invoke({"kernel", "--mode", "exact"}).code == 2);
  CHECK(invoke({"kernel", "--bogus"}).code == 2);
  CHECK(invoke({"predict", "--gate", "swap", "--alpha", "0.4"}).code == 2);
  CHECK(invoke({"predict", "--gate", "cnot", "--alpha", "0.1"}).code == 2);
  CHECK(invoke({"decompose", "--gate", "swap", "--alpha", "0.25"}).code == 2);
  CHECK(invoke({"cost", "--coupling", "7e-3"}).code == 2);
  CHECK(invoke({"gamma-check", "predict"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("gamma-check") {
  const Result r = invoke({"gamma-check"});
  CHECK(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["pass"] == true);
  CHECK(doc["anticommutators"].size() == 10);
  CHECK(doc["rank"]["value"] == 16);
  CHECK(r.out == golden("gamma_check.json"));
  const Result t = invoke({"--format", "table", "gamma-check"});
  CHECK(t.code == 0);
  CHECK(t.out.find("rank 16/16 pass") != std::string::npos);
}

TEST_CASE("gamma-check on a corrupted basis exits 1") {
  const nmqem::GammaBasis good = nmqem::build_gamma_basis();
  auto elems = good.elements();
  elems[3].matrix(0, 3) *= -1.0;  // g2
  std::ostringstream out;
  CHECK(nmqem::cli::gamma_check(nmqem::GammaBasis(elems), nmqem::cli::Format::kJson, out) == 1);
  CHECK(json::parse(out.str())["pass"] == false);
}

TEST_CASE("kernel approx csv") {
  const Result r = invoke({"kernel", "--coupling", "7e-3", "--u-max", "1", "--steps", "101", "--mode", "approx"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  CHECK(rows.front() == std::vector<std::string>{"coupling", "u", "re_k", "im_k", "mode"});
  CHECK(rows.size() == 102);
  CHECK(rows.back()[2] == "0.009228169203");
  CHECK(rows.back()[3].empty());
  CHECK(r.out == golden("kernel_approx.csv"));
}

TEST_CASE("kernel default couplings and quadrature im_k column") {
  const Result d = invoke({"kernel", "--steps", "3"});
  const auto rows = parse_csv(d.out);
  REQUIRE(rows.size() == 7);
  CHECK(rows[1][0] == "0.0007");
  CHECK(rows[4][0] == "0.007");

  const Result q = invoke({"kernel", "--mode", "quadrature", "--gamma0", "1", "--delta0", "1",
                           "--wc-ts", "10", "--steps", "3"});
  REQUIRE(q.code == 0);
  const auto qr = parse_csv(q.out);
  CHECK(std::abs(std::stod(qr.back()[2]) - 2.31604562928952455) < 1e-8);
  CHECK(std::abs(std::stod(qr.back()[3]) - -0.834165240578112595) < 1e-8);
}

TEST_CASE("kernel printed reference value") {
  const Result r = invoke({"kernel", "--mode", "printed", "--gamma0", "1", "--wc-ts", "10",
                           "--steps", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.out == golden("kernel_printed.csv"));
  const auto rows = parse_csv(r.out);
  CHECK(std::abs(std::stod(rows.back()[2]) - 9.938657938) < 1e-9);
}

TEST_CASE("cost csv") {
  const Result r = invoke({"cost", "--gate", "identity"});
  REQUIRE(r.code == 0);
  CHECK(r.out == golden("cost_identity.csv"));
  const auto rows = parse_csv(r.out);
  CHECK(rows.front() == std::vector<std::string>{"coupling", "u", "alpha", "cost", "status"});
  CHECK(rows[1][3] == "1");

  // Choose the coupling that puts alpha = 0.05 at u = 1.
  const double c = 0.05 / (1.0 + 1.0 / std::numbers::pi);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", c);
  for (auto [gate, want] : {std::pair{"identity", 1.25}, std::pair{"swap", 1.381944}}) {
    const auto rr = parse_csv(invoke({"cost", "--gate", gate, "--coupling", buf, "--steps", "2"}).out);
    CHECK(std::abs(std::stod(rr.back()[2]) - 0.05) < 1e-9);
    CHECK(std::abs(std::stod(rr.back()[3]) - want) < 1e-6);
  }
}

TEST_CASE("cost rows beyond the recovery domain are flagged") {
  const auto rows = parse_csv(invoke({"cost", "--gate", "swap", "--coupling", "0.5", "--steps", "3"}).out);
  CHECK(rows.back()[4] == "out_of_domain");
  CHECK(rows.back()[3].empty());
}

TEST_CASE("predict") {
  const Result r = invoke({"predict", "--gate", "identity", "--alpha", "0.02"});
  REQUIRE(r.code == 0);
  CHECK(r.out == golden("predict_identity.txt"));
  const json doc = json::parse(invoke({"--format", "json", "predict", "--gate", "identity", "--alpha", "0.02"}).out);
  for (std::size_t i = 0; i < 4; ++i) CHECK(doc["table"][i][i].get<double>() == 0.96);
  const json sw = json::parse(invoke({"--format", "json", "predict", "--gate", "swap", "--alpha", "0"}).out);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) {
      const bool on = (r == 0 && c == 0) || (r == 3 && c == 2) || ((r == 1 || r == 2) && (c == 1 || c == 3));
      CHECK(sw["table"][r][c].get<double>() == (on ? (r == 1 || r == 2 ? 0.5 : 1.0) : 0.0));
    }
  CHECK(sw["inputs"][0] == "|1>m");
}

TEST_CASE("estimate") {
  const Result r = invoke({"estimate", "--counts", fixture("ibm_guadalupe_swap.json")});
  REQUIRE(r.code == 0);
  CHECK(r.out == golden("estimate_ibm_guadalupe_swap.json"));
  const json doc = json::parse(r.out);
  CHECK(doc["max"].get<double>() == 0.056);

  const json t5 = json::parse(invoke({"estimate", "--counts", fixture("ionq_identity.json"), "--gate", "identity"}).out);
  CHECK(t5["max"].get<double>() == 0.024);

  CHECK(invoke({"estimate", "--counts", fixture("does_not_exist.json")}).code == 3);
  CHECK(invoke({"estimate", "--counts", fixture("ionq_identity.json"), "--gate", "swap"}).code == 3);
  CHECK(invoke({"estimate"}).code == 2);

  const auto tmp = std::filesystem::temp_directory_path() / "nmqem_bad_counts.json";
  std::ofstream(tmp) << "{\"gate\": \"swap\",\n \"runs\": [}";
  const Result bad = invoke({"estimate", "--counts", tmp.string()});
  CHECK(bad.code == 3);
  CHECK(bad.err.find("line 2") != std::string::npos);
  std::filesystem::remove(tmp);
}

TEST_CASE("decompose") {
  const json id = json::parse(invoke({"--format", "json", "decompose", "--gate", "identity", "--alpha", "0.05"}).out);
  CHECK(std::abs(id["coefficients"][0]["re"].get<double>() - 1.118056) < 1e-6);
  CHECK(std::abs(id["coefficients"][2]["re"].get<double>() - 0.006944) < 1e-6);
  CHECK(std::abs(std::abs(id["coefficients"][10]["im"].get<double>()) - 0.0625) < 1e-12);
  CHECK(std::abs(std::abs(id["coefficients"][11]["im"].get<double>()) - 0.0625) < 1e-12);
  CHECK(id["cost_decomposition"].get<double>() == 1.25);
  CHECK(id["cost_closed_form"].get<double>() == 1.25);
  CHECK_FALSE(id.contains("note"));

  const json z = json::parse(invoke({"--format", "json", "decompose", "--gate", "swap", "--alpha", "0"}).out);
  CHECK(z["coefficients"][0]["re"] == 1.0);
  for (std::size_t r = 1; r < 16; ++r) {
    CHECK(z["coefficients"][r]["re"] == 0.0);
    CHECK(z["coefficients"][r]["im"] == 0.0);
  }

  const Result sw = invoke({"decompose", "--gate", "swap", "--alpha", "0.05"});
  CHECK(sw.out.find("1.381944444") != std::string::npos);
  CHECK(sw.out.find("1.375") != std::string::npos);
  CHECK(sw.out.find("note:") != std::string::npos);
}

TEST_CASE("--out writes to a file and output is deterministic") {
  const auto tmp = std::filesystem::temp_directory_path() / "nmqem_cost_out.csv";
  const Result r = invoke({"--out", tmp.string(), "cost", "--gate", "swap"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(tmp);
  std::ostringstream s;
  s << in.rdbuf();
  CHECK(s.str() == invoke({"cost", "--gate", "swap"}).out);
  CHECK(invoke({"cost", "--gate", "swap"}).out == invoke({"cost", "--gate", "swap"}).out);
  std::filesystem::remove(tmp);
}
