#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "nmqem/channel.hpp"
#include "nmqem/errors.hpp"
#include "nmqem/expdata.hpp"
#include "nmqem/kernel.hpp"

using namespace nmqem;

namespace {

std::string fixture(const std::string& name) { return std::string(NMQEM_FIXTURE_DIR) + "/" + name; }

ProbTable load_fixture(const std::string& name) {
  std::ifstream in(fixture(name));
  REQUIRE(in.good());
  return load_table(in);
}

const char* kSwapDoc = R"({
  "gate": "swap", "device": "test", "shots": 1000,
  "runs": [
    {"input": "m1", "counts": {"00": 955, "01": 17, "10": 18, "11": 10}},
    {"input": "m2", "counts": {"00": 23, "01": 518, "10": 453, "11": 6}},
    {"input": "m3", "counts": {"00": 5, "01": 12, "10": 11, "11": 972}},
    {"input": "m4", "counts": {"00": 23, "01": 474, "10": 493, "11": 10}}
  ]
})";

std::string replaced(std::string doc, const std::string& from, const std::string& to) {
  const auto pos = doc.find(from);
  REQUIRE(pos != std::string::npos);
  return doc.replace(pos, from.size(), to);
}

template <typename E>
std::string error_of(const std::string& text) {
  std::istringstream in(text);
  try {
    load_counts(in);
  } catch (const E& e) {
    return e.what();
  }
  FAIL("expected exception");
  return {};
}

// Independent least-squares oracle: scan the quadratic objective.
double objective(const RealMat4& p, Gate gate, double a) {
  const RoleTable roles = classify_cells(gate);
  double s = 0.0;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) {
      const double d = p(r, c) - role_value(roles[r][c], a);
      s += d * d;
    }
  return s;
}

}  // namespace

TEST_CASE("load_counts on a canonical table") {
  std::istringstream in(kSwapDoc);
  const CountTable t = load_counts(in);
  CHECK(t.gate == Gate::kSwap);
  CHECK(t.device == "test");
  CHECK(t.shots == 1000);
  REQUIRE(t.runs.size() == 4);
  CHECK(t.runs[0].input == "m1");
  CHECK(t.runs[0].counts == std::array<std::int64_t, 4>{955, 17, 18, 10});
  CHECK_FALSE(t.published.has_value());
}

TEST_CASE("runs are stored in canonical order and missing outcomes are zero") {
  const std::string doc = R"({"gate": "identity", "device": "d", "shots": 10, "runs": [
    {"input": "11", "counts": {"11": 10}},
    {"input": "01", "counts": {"01": 9, "00": 1}},
    {"input": "00", "counts": {"00": 10}},
    {"input": "10", "counts": {"10": 10}}]})";
  std::istringstream in(doc);
  const CountTable t = load_counts(in);
  CHECK(t.runs[0].input == "00");
  CHECK(t.runs[3].input == "11");
  CHECK(t.runs[3].counts == std::array<std::int64_t, 4>{0, 0, 0, 10});
}

TEST_CASE("load_counts errors") {
  CHECK(error_of<ParseError>("").find("empty") != std::string::npos);
  CHECK(error_of<ParseError>("{\n  \"gate\": \"swap\",\n  oops\n}").find("line 3") !=
        std::string::npos);
  CHECK(error_of<SchemaError>(replaced(kSwapDoc, "\"m2\"", "\"m1\"")).find("duplicate") !=
        std::string::npos);
  CHECK(error_of<SchemaError>(replaced(kSwapDoc, "\"swap\"", "\"cnot\"")).find("gate") !=
        std::string::npos);
  CHECK(error_of<SchemaError>(replaced(kSwapDoc, "\"m3\"", "\"00\"")).find("runs[2].input") !=
        std::string::npos);
  CHECK(error_of<SchemaError>(replaced(kSwapDoc, "955", "1955")).find("exceeds shots") !=
        std::string::npos);
  CHECK(error_of<SchemaError>(replaced(kSwapDoc, "955", "-955")).find("negative") !=
        std::string::npos);
  CHECK(error_of<SchemaError>(replaced(kSwapDoc, "\"01\": 17", "\"02\": 17")).find("unknown outcome") !=
        std::string::npos);
  CHECK(error_of<ParseError>(replaced(kSwapDoc, "955", "9.5")).find("runs[0].counts.00") !=
        std::string::npos);
  CHECK(error_of<ParseError>(replaced(kSwapDoc, "\"shots\": 1000,", "")).find("shots") !=
        std::string::npos);
}

TEST_CASE("probability variant") {
  const std::string doc = R"({"gate": "identity", "device": "d", "shots": 1000, "runs": [
    {"input": "00", "probs": {"00": 0.97, "01": 0.02, "10": 0.02}},
    {"input": "01", "probs": {"01": 1.0}},
    {"input": "10", "probs": {"10": 1.0}},
    {"input": "11", "probs": {"11": 1.0}}]})";
  std::istringstream in(doc);
  const ProbTable t = load_probs(in);
  CHECK(t.p(0, 0) == doctest::Approx(0.97));
  CHECK(t.p(1, 0) == doctest::Approx(0.02));

  std::istringstream bad(replaced(doc, "0.97", "0.9"));
  CHECK_THROWS_AS(load_probs(bad), SchemaError);
  std::istringstream counts(kSwapDoc);
  CHECK_THROWS_AS(load_probs(counts), SchemaError);
}

TEST_CASE("normalize") {
  std::istringstream in(kSwapDoc);
  const ProbTable p = normalize(load_counts(in));
  CHECK(p.p(0, 0) == 0.955);
  CHECK(p.p(1, 0) == 0.017);
  CHECK(p.p(2, 0) == 0.018);
  CHECK(p.p(3, 0) == 0.010);

  CountTable ct{Gate::kIdentity, "d", 1000, {}, std::nullopt};
  ct.runs = {{"00", {1, 0, 0, 0}}, {"01", {250, 250, 250, 250}}, {"10", {0, 0, 3, 0}},
             {"11", {7, 0, 0, 0}}};
  const ProbTable q = normalize(ct);
  CHECK(q.p(0, 0) == 1.0);
  for (std::size_t r = 0; r < 4; ++r) CHECK(q.p(r, 1) == 0.25);
  for (std::size_t c = 0; c < 4; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < 4; ++r) s += q.p(r, c);
    CHECK(std::abs(s - 1.0) < 1e-12);
  }
  ct.runs[2].counts = {0, 0, 0, 0};
  CHECK_THROWS_AS(normalize(ct), EmptyRun);
}

TEST_CASE("classify_cells agrees with the affine structure of predict_table") {
  for (Gate g : {Gate::kSwap, Gate::kIdentity}) {
    const RoleTable roles = classify_cells(g);
    for (double a : {0.0, 0.03, 0.1, 0.3}) {
      const RealMat4 t = predict_table(g, a);
      for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) CHECK(std::abs(t(r, c) - role_value(roles[r][c], a)) < 1e-14);
    }
  }
  const RoleTable sw = classify_cells(Gate::kSwap);
  CHECK(sw[3][0] == CellRole::kZero);
  CHECK(sw[1][1] == CellRole::kHalfOneMinus2A);
  CHECK(classify_cells(Gate::kIdentity)[2][1] == CellRole::kZero);
}

TEST_CASE("property: estimate round trip on predicted tables") {
  for (Gate g : {Gate::kSwap, Gate::kIdentity}) {
    for (double a : {0.005, 0.01, 0.02, 0.05}) {
      const RekEstimate e = estimate_re_k(predict_table(g, a), g);
      CHECK(std::abs(e.min - a) < 1e-12);
      CHECK(std::abs(e.max - a) < 1e-12);
      CHECK(std::abs(e.lsq - a) < 1e-12);
      CHECK(e.residual < 1e-24);
      for (const auto& cell : e.per_cell) {
        CHECK(cell.role != CellRole::kZero);
        CHECK(std::abs(cell.estimate - a) < 1e-12);
      }
    }
  }
}

TEST_CASE("device swap ranges") {
  const ProbTable t2 = load_fixture("ionq_swap.json");
  const RekEstimate e2 = estimate_re_k(t2.p, t2.gate);
  CHECK(std::abs(e2.min - 0.006) < 1e-12);
  CHECK(std::abs(e2.max - 0.023) < 1e-12);
  CHECK(e2.per_cell.size() == 14);

  const ProbTable t3 = load_fixture("ibm_guadalupe_swap.json");
  const RekEstimate e3 = estimate_re_k(t3.p, t3.gate);
  CHECK(std::abs(e3.max - 0.056) < 1e-12);
  CHECK(e3.min <= e3.max);
}

TEST_CASE("lsq minimizes the quadratic objective") {
  const ProbTable t = load_fixture("ibm_guadalupe_swap.json");
  const RekEstimate e = estimate_re_k(t.p, t.gate);
  const double f0 = objective(t.p, t.gate, e.lsq);
  CHECK(std::abs(f0 - e.residual) < 1e-14);
  for (double d : {1e-3, 1e-5, -1e-5, -1e-3}) CHECK(objective(t.p, t.gate, e.lsq + d) > f0);
}

TEST_CASE("property: lsq moves by O(eps) under symmetric noise") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> sign(0, 1);
  const double eps = 1e-3;
  for (Gate g : {Gate::kSwap, Gate::kIdentity}) {
    for (int trial = 0; trial < 20; ++trial) {
      RealMat4 p = predict_table(g, 0.02);
      for (double& v : p.v) v += sign(rng) ? eps : -eps;
      const RekEstimate e = estimate_re_k(p, g);
      CHECK(std::abs(e.lsq - 0.02) <= eps);
    }
  }
}

TEST_CASE("fit_coupling inverts re_k_approx") {
  CHECK(std::abs(fit_coupling(9.2275e-3, 1.0) - 7e-3) < 1e-6);
  CHECK(std::abs(fit_coupling(9.2275e-4, 1.0) - 7e-4) < 1e-7);
  CHECK(fit_coupling(0.0, 3.0) == 0.0);
  for (double c : {1e-4, 7e-4, 7e-3, 0.2}) {
    for (double u : {0.01, 0.5, 1.0, 4.0}) {
      CHECK(std::abs(fit_coupling(re_k_approx(c, u), u) - c) <= 1e-12 * c);
    }
  }
  CHECK_THROWS_AS(fit_coupling(0.1, 0.0), DomainError);
  CHECK_THROWS_AS(fit_coupling(-0.1, 1.0), DomainError);
}

TEST_CASE("published range comparison") {
  RekEstimate e;
  e.min = 0.016;
  e.max = 0.056;
  const RangeComparison c = compare_with_published(e, {0.015, 0.056});
  CHECK_FALSE(c.min_matches);
  CHECK(c.max_matches);
  CHECK(c.diverges());
  CHECK_FALSE(compare_with_published(e, {0.016, 0.056}).diverges());
}

TEST_CASE("estimate report document") {
  const ProbTable t = load_fixture("ionq_identity.json");
  const RekEstimate e = estimate_re_k(t.p, t.gate);
  const auto doc = nlohmann::json::parse(estimate_report_json(t, e));
  CHECK(doc["device"] == "IonQ");
  CHECK(doc["gate"] == "identity");
  CHECK(doc["max"].get<double>() == 0.024);
  CHECK(doc["per_cell"].size() == 12);
  CHECK(doc.contains("lsq"));
  CHECK(doc.contains("fitted_coupling_u1"));
  CHECK(doc["published"]["max_matches"] == true);
  CHECK(doc["published"]["min_matches"] == false);
  CHECK(doc["published"]["divergence"] == true);
}
