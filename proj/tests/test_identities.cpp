#include <doctest.h>

#include <sstream>

#include "qbessel/report.hpp"

using namespace qbessel;

namespace {

const QBase q5(0.5);

IdentityReport run(IdentityId id, ParamMap p, double tol = 1e-8) {
  p.emplace("q", 0.5);
  return check_identity(id, p, {}, tol);
}

}  // namespace

TEST_CASE("identity names round-trip and accept aliases") {
  for (IdentityId id : kAllIdentities) {
    const auto back = parse_identity(identity_name(id));
    REQUIRE(back.has_value());
    CHECK(*back == id);
  }
  CHECK(parse_identity("Corollary-43") == IdentityId::Corollary43);
  CHECK(parse_identity("prop31") == IdentityId::LimitJacobiBessel);
  CHECK(parse_identity("thm41") == IdentityId::Theorem41);
  CHECK_FALSE(parse_identity("prop99").has_value());
}

TEST_CASE("representative points pass") {
  CHECK(run(IdentityId::Prop21, {{"n", 3}, {"a", 0.2}, {"z", 0.5}}).pass);
  CHECK(run(IdentityId::Prop21, {{"n", -4}, {"a", 0.2}, {"a_im", 0.3}, {"z", 0.5}}).pass);
  CHECK(run(IdentityId::Prop21, {{"n", 3}, {"a", 0.2}, {"z", 0.5}, {"bound", 1}}).pass);
  CHECK(run(IdentityId::Transform27, {{"a", 0.3}, {"w", 0.5}, {"z", 0.7}}).pass);
  CHECK(run(IdentityId::JacobiOrth, {{"m", 3}, {"n", 3}, {"alpha", 0.3}, {"beta", 0.7}}).pass);
  CHECK(run(IdentityId::KrawtchoukOrth, {{"m", 1}, {"n", 3}, {"t", 0.5}, {"N", 8}}).pass);
  CHECK(run(IdentityId::LimitJacobiBessel, {{"n", 30}, {"x", 2}, {"alpha", 0.3}, {"beta", 0.7}}).pass);
  CHECK(run(IdentityId::LimitKrawtchoukBigBessel, {{"m", 20}, {"z", 1}, {"N", 4}, {"t", 0.5}, {"x", 2}}, 1e-6).pass);
  CHECK(run(IdentityId::FlorisKoelinkAddition,
            {{"l", 3}, {"nu", 1.5}, {"t", 0.8}, {"z", 1}, {"N", 6}, {"x", 0.4}}, 1e-10)
            .pass);
  CHECK(run(IdentityId::JacobiAddition, {{"l", 3}, {"nu", 1.5}, {"t", 0.8}, {"z", 1}, {"N", 6}, {"x", 0.4}}, 1e-10)
            .pass);
  CHECK(run(IdentityId::Corollary43, {{"nu", 1.5}, {"t", 0.8}, {"x", 2}, {"z", 1}, {"N", 4}}).pass);
  CHECK(run(IdentityId::Theorem41, {{"nu", 1.5}, {"t", 0.8}, {"x", 2}, {"z", 1}, {"N", 4}, {"l", -1}}).pass);
  CHECK(run(IdentityId::AdditionNInfinity, {{"nu", 1.5}, {"mu", 0.5}, {"x", 1}, {"z", 1}}).pass);
  CHECK(run(IdentityId::ProductFormula52, {{"nu", 2}, {"x", 1}, {"y", 3}}).pass);
  CHECK(run(IdentityId::KernelSymmetry, {{"nu", 1.5}, {"x", 1}, {"y", 2}, {"z", 4}}).pass);
  CHECK(run(IdentityId::KernelSymmetry, {{"nu", 0.5}, {"x", 1}, {"y", 3}, {"z", 4}, {"swap", 1}}).pass);
  CHECK(run(IdentityId::KernelPositivity, {{"nu", 1.5}, {"x", 3}, {"y", 0}, {"z", -4}}).pass);
  CHECK(run(IdentityId::Bound24, {{"alpha", 0.5}, {"n", 4}}).pass);
  CHECK(run(IdentityId::Bound25, {{"m", 3}, {"n", 5}}).pass);
  CHECK(run(IdentityId::BoundLemma42, {{"nu", 1.5}, {"N", 4}, {"z", 1}, {"r", 3}, {"s", 2}}).pass);
  CHECK(run(IdentityId::BoundProp32, {{"z", 1}, {"N", 4}, {"t", 0.5}, {"x", 2}}).pass);
}

TEST_CASE("trivial cases from the command-line contract") {
  const auto r = run(IdentityId::Prop21, {{"n", 0}, {"a", 0.2}, {"z", 0.5}});
  CHECK(r.abs_residual == 0.0);
  CHECK(r.pass);
}

TEST_CASE("as-printed variants are reported, not asserted") {
  // literal prop32 prefactor blows up instead of converging
  const auto p32 = run(IdentityId::LimitKrawtchoukBigBessel,
                       {{"m", 10}, {"z", 1}, {"N", 4}, {"t", 0.5}, {"x", 2}, {"variant", 1}});
  CHECK_FALSE(p32.pass);
  CHECK(p32.rel_residual > 0.9);
  // literal corollary43 misses by about 0.17
  const auto c43 = run(IdentityId::Corollary43, {{"nu", 1.5}, {"t", 0.8}, {"x", 2}, {"z", 1}, {"N", 4}, {"variant", 1}});
  CHECK_FALSE(c43.pass);
  CHECK(c43.rel_residual == doctest::Approx(0.1716).epsilon(1e-3));
  // literal weighted x <-> y symmetry is off by q^{(ν+1)(y-x)}
  const auto sym = run(IdentityId::KernelSymmetry, {{"nu", 0.5}, {"x", 1}, {"y", 3}, {"z", 4}, {"swap", 1}, {"variant", 1}});
  CHECK(sym.lhs.real() / sym.rhs.real() == doctest::Approx(std::pow(0.5, -1.5 * 2)).epsilon(1e-10));
  // prop51 in literal form: the x = N terms grow like q^{-N^2}
  const auto p51 = run(IdentityId::Prop51, {{"m", 0}, {"z", 1}, {"k", 1}, {"t", 0.5}, {"y", 1}, {"nu", 1.5}});
  CHECK_FALSE(p51.pass);
  CHECK(p51.params.at("diverged") == 1.0);
  CHECK(std::isinf(p51.tail_budget));
}

TEST_CASE("parameter errors") {
  CHECK_THROWS_AS(run(IdentityId::Prop21, {{"a", 0.2}, {"z", 0.5}}), DomainError);
  CHECK_THROWS_AS(run(IdentityId::Prop21, {{"n", 0.5}, {"a", 0.2}, {"z", 0.5}}), DomainError);
  CHECK_THROWS_AS(check_identity(IdentityId::Prop21, {{"n", 0}, {"a", 0.2}, {"z", 0.5}}, {}, 1e-8), DomainError);
  CHECK_THROWS_AS(check_identity(IdentityId::Prop21, {{"q", 1.5}, {"n", 0}, {"a", 0.2}, {"z", 0.5}}, {}, 1e-8),
                  DomainError);
  CHECK_THROWS_AS(run(IdentityId::Prop21, {{"n", 0}, {"a", 0.2}, {"z", 0.5}}, 0.0), DomainError);
  CHECK_THROWS_AS(run(IdentityId::Corollary43, {{"nu", 1.5}, {"t", 0.8}, {"x", 2}, {"z", 1}, {"N", 4}, {"variant", 2}}),
                  DomainError);
  CHECK_THROWS_AS(run(IdentityId::FlorisKoelinkAddition,
                      {{"l", 2}, {"m", 1}, {"nu", 1.5}, {"t", 0.8}, {"z", 1}, {"N", 6}, {"x", 0.4}}),
                  DomainError);
  CHECK_THROWS_AS(run(IdentityId::AdditionNInfinity, {{"nu", 1.5}, {"mu", -1.5}, {"x", 1}, {"z", 1}}), DomainError);
}

TEST_CASE("reports list every parameter used, defaults included") {
  const auto r = run(IdentityId::Corollary43, {{"nu", 1.5}, {"t", 0.8}, {"x", 2}, {"z", 1}, {"N", 4}});
  CHECK(r.params.count("variant") == 1);
  CHECK(r.params.count("rows") == 1);
  CHECK(r.params.at("q") == 0.5);
}

TEST_CASE("limit transitions") {
  const auto r = run_limit_check(IdentityId::LimitJacobiBessel, {{"q", 0.5}, {"alpha", 0.3}, {"beta", 0.7}, {"x", 2}},
                                 {5, 10, 15, 20, 25}, {});
  REQUIRE(r.residuals.size() == 5);
  for (std::size_t i = 1; i < r.residuals.size(); ++i) CHECK(r.residuals[i] < r.residuals[i - 1]);
  CHECK(r.monotone_tail);
  // convergence ~ q^n: a factor close to 2^5 per step of five
  CHECK(r.residuals[3] / r.residuals[4] == doctest::Approx(32).epsilon(0.05));
  const auto zero = run_limit_check(IdentityId::LimitJacobiBessel,
                                    {{"q", 0.5}, {"alpha", 0.3}, {"beta", 0.7}, {"x", 0}}, {5, 10}, {});
  for (double v : zero.residuals) CHECK(v == 0.0);
  CHECK_THROWS_AS(run_limit_check(IdentityId::Prop21, {{"q", 0.5}}, {5}, {}), DomainError);
  CHECK_THROWS_AS(run_limit_check(IdentityId::LimitJacobiBessel, {{"q", 0.5}}, {10, 5}, {}), DomainError);
}

TEST_CASE("sweeps are deterministic and ordered") {
  const auto a = sweep_parameters(IdentityId::Prop21, 20, 42, 0.5);
  const auto b = sweep_parameters(IdentityId::Prop21, 20, 42, 0.5);
  const auto c = sweep_parameters(IdentityId::Prop21, 20, 43, 0.5);
  CHECK(a == b);
  CHECK(a != c);
  const auto reports = run_sweep(IdentityId::Prop21, a, {}, 1e-10);
  REQUIRE(reports.size() == a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto serial = check_identity(IdentityId::Prop21, a[i], {}, 1e-10);
    CHECK(reports[i].rhs == serial.rhs);
    CHECK(reports[i].params == serial.params);
  }
}

TEST_CASE("every identity evaluates on its sweep domain") {
  for (IdentityId id : kAllIdentities) {
    CAPTURE(identity_name(id));
    const int n = (id == IdentityId::Corollary43 || id == IdentityId::Theorem41 || id == IdentityId::Prop51 ||
                   id == IdentityId::ProductFormula52)
                      ? 3
                      : 10;
    const auto pts = sweep_parameters(id, n, 1, 0.5);
    CHECK_NOTHROW(run_sweep(id, pts, {}, 1e-8));
  }
}

TEST_CASE("finite identities hold to 1e-10 on 100-point sweeps; bounds hold pointwise") {
  for (IdentityId id : {IdentityId::Prop21, IdentityId::Transform27, IdentityId::JacobiOrth,
                        IdentityId::KrawtchoukOrth, IdentityId::FlorisKoelinkAddition, IdentityId::JacobiAddition,
                        IdentityId::Bound24, IdentityId::Bound25, IdentityId::BoundLemma42, IdentityId::BoundProp32}) {
    CAPTURE(identity_name(id));
    const auto reports = run_sweep(id, sweep_parameters(id, 100, 2024, 0.5), {}, 1e-10);
    int failed = 0;
    for (const auto& r : reports) failed += r.pass ? 0 : 1;
    CHECK(failed == 0);
  }
}

TEST_CASE("kernel values against 35-digit references") {
  CHECK(kernel_delta(1.5, 1, 2, 0, q5).value == doctest::Approx(0.41357595015565568626).epsilon(1e-12));
  CHECK(kernel_delta(1.5, 3, 1, -2, q5).value == doctest::Approx(0.0001241498377562381364).epsilon(1e-10));
  CHECK(kernel_delta(0.5, 0, 0, 5, q5).value == doctest::Approx(0.0050839454243954436181).epsilon(1e-12));
  // small values keep full relative accuracy
  CHECK(kernel_delta(3.0, 0, 4, 4, q5).value == doctest::Approx(7.945906366382894592280545e-10).epsilon(1e-13));
  CHECK(kernel_delta(3.0, 4, 4, 0, q5).value == doctest::Approx(5.207429196272693799996978e-05).epsilon(1e-13));
  CHECK_THROWS_AS(kernel_delta(0.0, 0, 0, 0, q5), DomainError);
}

TEST_CASE("kernel table: parallel fill equals the serial reference") {
  const auto par = kernel_table(1.5, {0, 3}, {0, 3}, {-2, 5}, q5);
  const auto ser = kernel_table_serial(1.5, {0, 3}, {0, 3}, {-2, 5}, q5);
  REQUIRE(par.grid.size() == 4u * 4u * 8u);
  REQUIRE(par.grid.size() == ser.grid.size());
  for (std::size_t i = 0; i < par.grid.size(); ++i) {
    CHECK(par.grid[i].x == ser.grid[i].x);
    CHECK(par.grid[i].y == ser.grid[i].y);
    CHECK(par.grid[i].z == ser.grid[i].z);
    CHECK(par.grid[i].delta == ser.grid[i].delta);
  }
  CHECK(par.symmetry_residual_max == ser.symmetry_residual_max);
  CHECK(par.n_sum_terms == ser.n_sum_terms);
  CHECK(par.min_value >= -1e-12);
}

TEST_CASE("kernel table: degenerate grid and errors") {
  const auto t = kernel_table(1.5, {2, 2}, {1, 1}, {3, 3}, q5);
  CHECK(t.grid.size() == 1);
  CHECK(t.symmetry_residual_max == 0.0);
  CHECK_THROWS_AS(kernel_table(1.5, {2, 1}, {0, 0}, {0, 0}, q5), DomainError);
  CHECK(weighted_symmetry_residual(1.5, 0.5, 0, 0.0, 3, 0.0) == 0.0);
}

TEST_CASE("kernel table: tighter policy moves values by less than the tail bounds") {
  TruncationPolicy loose;
  loose.eps_term = 1e-12;
  const auto a = kernel_table(1.5, {0, 4}, {0, 4}, {0, 4}, q5, loose);
  const auto b = kernel_table(1.5, {0, 4}, {0, 4}, {0, 4}, q5, loose.tightened(1e4));
  for (std::size_t i = 0; i < a.grid.size(); ++i) {
    CHECK(std::abs(a.grid[i].delta - b.grid[i].delta) <=
          a.grid[i].tail_bound + 1e-15 * std::abs(b.grid[i].delta));
  }
}

TEST_CASE("product expansion") {
  const auto r = product_expand(1.5, 0, 0, q5, -8, 12, {}, 1e-8);
  CHECK(r.rel_residual < 1e-8);
  // widening the range never increases the residual beyond the tail budget
  const auto narrow = product_expand(0.5, 1, 2, q5, -4, 10, {}, 1e-8);
  const auto wide = product_expand(0.5, 1, 2, q5, -8, 30, {}, 1e-8);
  CHECK(wide.rel_residual <= narrow.rel_residual + narrow.tail_budget);
  CHECK(narrow.tail_budget >= narrow.abs_residual);
  CHECK_THROWS_AS(product_expand(1.5, 0, 0, q5, 3, 2, {}, 1e-8), DomainError);
}

TEST_CASE("JSON and CSV reports") {
  IdentityReport r = run(IdentityId::Prop21, {{"n", 2}, {"a", 0.2}, {"z", 0.5}});
  const auto j = report_to_json(r);
  CHECK(j["identity"] == "prop21");
  CHECK(j["lhs"].size() == 2);
  CHECK(j.contains("tail_budget"));
  r.tail_budget = std::numeric_limits<double>::infinity();
  CHECK(report_to_json(r)["tail_budget"].is_null());

  std::ostringstream csv;
  write_reports_csv(csv, {r});
  std::istringstream in(csv.str());
  std::string header;
  std::string row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header.rfind("identity,params,lhs_re", 0) == 0);
  // the lhs column parses back to the identical double
  std::vector<std::string> cols;
  std::stringstream ss(row);
  for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
  REQUIRE(cols.size() == 10);
  CHECK(std::stod(cols[2]) == r.lhs.real());
  CHECK(cols[8] == "inf");
}

TEST_CASE("shortest round-trip formatting") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(std::nan("")) == "nan");
}
