#include "lelong/serialize.hpp"

#include "corpus.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <functional>

using namespace lelong;
using lelong::testing::mono;

namespace {

std::string code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

}  // namespace

TEST_CASE("parsing the documented examples") {
    const auto e = expr_from_json(Json::parse(
        R"({"tag":"monomial_log","coeff":"1/1","exponents":["2/1","1/1"]})"));
    REQUIRE(e.kind() == NodeKind::monomial_log);
    CHECK(e.arity() == 2);
    CHECK(e.as<MonomialLogData>().coeff == Rational(1));
    CHECK(e.as<MonomialLogData>().exponents == std::vector<Rational>{Rational(2), Rational(1)});
}

TEST_CASE("distinct error codes for distinct defects") {
    CHECK(code_of([] {
              expr_from_json(Json::parse(
                  R"({"tag":"scale","factor":"0/1","child":{"tag":"monomial_log","coeff":"1/1","exponents":["1/1"]}})"));
          }) == "nonpositive-weight");
    CHECK(code_of([] { expr_from_json(Json::parse(R"({"tag":"max","children":[]})")); }) ==
          "empty-children");
    CHECK(code_of([] { expr_from_json(Json::parse(R"({"tag":"warp"})")); }) == "unknown-tag");
    CHECK(code_of([] {
              expr_from_json(Json::parse(
                  R"({"tag":"max","children":[{"tag":"monomial_log","coeff":"1/1","exponents":["1/1"]},{"tag":"monomial_log","coeff":"1/1","exponents":["1/1","1/1"]}]})"));
          }) == "arity-mismatch");
    CHECK(code_of([] {
              expr_from_json(Json::parse(R"({"tag":"monomial_log","coeff":1.0,"exponents":["1/1"]})"));
          }) == "bad-rational");
    CHECK(code_of([] { expr_from_json(Json::parse(R"({"tag":"monomial_log"})")); }) ==
          "missing-field");
    CHECK(code_of([] { parse_expr_file("/nonexistent/path.json"); }) == "file");

    // parse errors carry the JSON path of the offending field
    try {
        expr_from_json(Json::parse(
            R"({"tag":"max","children":[{"tag":"scale","factor":"bad","child":{"tag":"monomial_log","coeff":"1/1","exponents":["1/1"]}}]})"));
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find(".children[0].factor") != std::string::npos);
    }
}

TEST_CASE("round trip preserves evaluation bit-for-bit") {
    auto rng = substream(62, 0);
    std::vector<PshExpr> exprs;
    for (const auto& entry : lelong::testing::monomial_corpus()) exprs.push_back(entry.expr);
    exprs.push_back(PshExpr::radial(2, {{-1.0, -2.0}, {0.0, 0.0}}, Rational(2)));
    exprs.push_back(symmetrized_tower(mono({1}), 2));
    exprs.push_back(PshExpr::log_abs_poly(
        Polynomial(2, {{{2, 1}, Complex(1, 0.25)}, {{0, 0}, Complex(-0.5, 0)}})));
    {
        SliceMap s;
        s.base = {Complex(0.5, 0), Complex(0, 0)};
        s.directions = {{Complex(1, 0)}, {Complex(1, 0)}};
        exprs.push_back(restrict_to_slice(mono({1, 1}), s));  // nonzero offset survives
    }

    for (const auto& e : exprs) {
        const Json j = expr_to_json(e);
        const PshExpr back = expr_from_json(j);
        REQUIRE(back.arity() == e.arity());
        CHECK(expr_to_json(back) == j);  // stable serialization
        for (int i = 0; i < 25; ++i) {
            CVector z(e.arity());
            for (auto& c : z) c = 0.6 * Complex(gaussian(rng), gaussian(rng));
            CHECK(eval(back, z) == eval(e, z));
        }
    }
}

TEST_CASE("expression files round trip through disk") {
    const auto path = std::string("roundtrip_tmp.json");
    auto e = symmetrized_tower(PshExpr::monomial_log(Rational(3, 2), {Rational(1)}), 1);
    write_expr_file(path, e);
    const auto back = parse_expr_file(path);
    CHECK(expr_to_json(back) == expr_to_json(e));
    std::remove(path.c_str());
}

TEST_CASE("estimate serialization variants") {
    const auto p = InvariantEstimate::exact_point(InvariantKind::lct, Method::lp, Rational(1, 2));
    CHECK(estimate_to_json(p)["value"] == "1/2");
    CHECK(estimate_to_json(p)["method"] == "lp");

    const auto iv = InvariantEstimate::exact_interval(InvariantKind::lct,
                                                      Method::interval_certificate, Rational(1, 3),
                                                      Rational(2, 3));
    CHECK(estimate_to_json(iv)["value"]["lo"] == "1/3");
    CHECK(estimate_to_json(iv)["value"]["hi"] == "2/3");

    const auto inf = InvariantEstimate::infinity(InvariantKind::lct, Method::exact_rule);
    CHECK(estimate_to_json(inf)["value"] == "inf");

    const auto nr = InvariantEstimate::unavailable(InvariantKind::lelong);
    CHECK(estimate_to_json(nr)["method"] == "numeric-required");
    CHECK(estimate_to_json(nr)["value"].is_null());

    const auto num = InvariantEstimate::numeric_interval(InvariantKind::lct, 0.45, 0.55);
    CHECK(estimate_to_json(num)["value"]["mid"].get<double>() == 0.5);
}
