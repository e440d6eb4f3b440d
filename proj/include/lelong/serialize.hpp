// JSON expression-tree format and estimate serialization.
//
// Schema (see docs/expr-schema.md): every node object carries a "tag" field;
// complex numbers are [re, im] pairs; rationals are "p/q" strings so exact
// values survive round trips. Parse errors carry a distinct code and the
// JSON path of the offending field.

#pragma once

#include "lelong/estimate.hpp"
#include "lelong/expr.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace lelong {

using Json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& path, const std::string& code,
                                    const std::string& msg) {
    throw InputError("expr parse at " + (path.empty() ? "<root>" : path) + ": " + msg, code);
}

inline const Json& need(const Json& j, const char* field, const std::string& path) {
    if (!j.contains(field)) parse_fail(path, "missing-field", std::string("missing '") + field + "'");
    return j.at(field);
}

inline Rational get_rational(const Json& j, const std::string& path) {
    if (!j.is_string()) parse_fail(path, "bad-rational", "rationals are \"p/q\" strings");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
        parse_fail(path, "bad-rational", e.what());
    }
}

inline Complex get_complex(const Json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        parse_fail(path, "bad-complex", "complex numbers are [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline PshExpr expr_from_json_impl(const Json& j, const std::string& path, int depth) {
    if (depth > 64) parse_fail(path, "capacity", "expression nesting too deep");
    if (!j.is_object()) parse_fail(path, "malformed-json", "expression nodes are objects");
    const std::string tag = need(j, "tag", path).is_string()
                                ? j.at("tag").get<std::string>()
                                : (parse_fail(path, "unknown-tag", "'tag' must be a string"), "");

    try {
        if (tag == "monomial_log") {
            const Rational coeff = get_rational(need(j, "coeff", path), path + ".coeff");
            const auto& exps = need(j, "exponents", path);
            if (!exps.is_array() || exps.empty())
                parse_fail(path, "arity-mismatch", "'exponents' must be a nonempty array");
            std::vector<Rational> e;
            for (std::size_t i = 0; i < exps.size(); ++i)
                e.push_back(get_rational(exps[i], path + ".exponents[" + std::to_string(i) + "]"));
            return PshExpr::monomial_log(coeff, std::move(e));
        }
        if (tag == "log_abs_poly") {
            const int nvars = need(j, "nvars", path).get<int>();
            const auto& terms = need(j, "terms", path);
            if (!terms.is_array()) parse_fail(path, "malformed-json", "'terms' must be an array");
            std::vector<PolyTerm> ts;
            for (std::size_t i = 0; i < terms.size(); ++i) {
                const std::string tp = path + ".terms[" + std::to_string(i) + "]";
                PolyTerm t;
                for (const auto& p : need(terms[i], "powers", tp)) t.powers.push_back(p.get<unsigned>());
                t.coeff = get_complex(need(terms[i], "coeff", tp), tp + ".coeff");
                ts.push_back(std::move(t));
            }
            return PshExpr::log_abs_poly(Polynomial(nvars, std::move(ts)));
        }
        if (tag == "radial") {
            const int arity = need(j, "arity", path).get<int>();
            const Rational nu = get_rational(need(j, "nu_inf", path), path + ".nu_inf");
            std::vector<std::pair<double, double>> bps;
            if (j.contains("breakpoints")) {
                for (const auto& bp : j.at("breakpoints")) {
                    if (!bp.is_array() || bp.size() != 2)
                        parse_fail(path + ".breakpoints", "bad-breakpoints",
                                   "breakpoints are [t, chi] pairs");
                    bps.emplace_back(bp[0].get<double>(), bp[1].get<double>());
                }
            }
            return PshExpr::radial(arity, std::move(bps), nu);
        }
        if (tag == "max" || tag == "sum") {
            const auto& ch = need(j, "children", path);
            if (!ch.is_array() || ch.empty())
                parse_fail(path, "empty-children", "'children' must be a nonempty array");
            std::vector<PshExpr> cs;
            for (std::size_t i = 0; i < ch.size(); ++i)
                cs.push_back(
                    expr_from_json_impl(ch[i], path + ".children[" + std::to_string(i) + "]", depth + 1));
            return tag == "max" ? PshExpr::max_of(std::move(cs)) : PshExpr::sum_of(std::move(cs));
        }
        if (tag == "scale") {
            const Rational f = get_rational(need(j, "factor", path), path + ".factor");
            return PshExpr::scaled(f, expr_from_json_impl(need(j, "child", path), path + ".child", depth + 1));
        }
        if (tag == "linear_pullback") {
            const auto& mj = need(j, "matrix", path);
            if (!mj.is_array() || mj.empty())
                parse_fail(path, "bad-matrix", "'matrix' must be a nonempty array of rows");
            CMatrix mat;
            for (std::size_t r = 0; r < mj.size(); ++r) {
                CVector row;
                const std::string rp = path + ".matrix[" + std::to_string(r) + "]";
                if (!mj[r].is_array()) parse_fail(rp, "bad-matrix", "rows are arrays");
                for (std::size_t cidx = 0; cidx < mj[r].size(); ++cidx)
                    row.push_back(get_complex(mj[r][cidx], rp + "[" + std::to_string(cidx) + "]"));
                mat.push_back(std::move(row));
            }
            CVector off;
            if (j.contains("offset")) {
                const auto& oj = j.at("offset");
                for (std::size_t i = 0; i < oj.size(); ++i)
                    off.push_back(get_complex(oj[i], path + ".offset[" + std::to_string(i) + "]"));
            }
            return PshExpr::affine_pullback(
                std::move(mat), std::move(off),
                expr_from_json_impl(need(j, "child", path), path + ".child", depth + 1));
        }
        if (tag == "unitary_sup") {
            const int base = need(j, "base_arity", path).get<int>();
            const int block = need(j, "block_arity", path).get<int>();
            return PshExpr::unitary_sup(
                base, block, expr_from_json_impl(need(j, "child", path), path + ".child", depth + 1));
        }
    } catch (const InputError& e) {
        if (std::string(e.what()).rfind("expr parse", 0) == 0) throw;  // already annotated
        throw InputError("expr parse at " + (path.empty() ? "<root>" : path) + ": " + e.what(),
                         e.code());
    }
    parse_fail(path, "unknown-tag", "unknown node tag '" + tag + "'");
}

inline Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

}  // namespace detail

inline Json expr_to_json(const PshExpr& e) {
    Json j;
    switch (e.kind()) {
        case NodeKind::monomial_log: {
            const auto& d = e.as<MonomialLogData>();
            j["tag"] = "monomial_log";
            j["coeff"] = format_rational(d.coeff);
            Json exps = Json::array();
            for (const auto& a : d.exponents) exps.push_back(format_rational(a));
            j["exponents"] = std::move(exps);
            break;
        }
        case NodeKind::log_abs_poly: {
            const auto& d = e.as<LogAbsPolyData>();
            j["tag"] = "log_abs_poly";
            j["nvars"] = d.poly.nvars();
            Json terms = Json::array();
            for (const auto& t : d.poly.terms()) {
                Json tj;
                tj["powers"] = t.powers;
                tj["coeff"] = detail::complex_to_json(t.coeff);
                terms.push_back(std::move(tj));
            }
            j["terms"] = std::move(terms);
            break;
        }
        case NodeKind::radial: {
            const auto& d = e.as<RadialData>();
            j["tag"] = "radial";
            j["arity"] = e.arity();
            j["nu_inf"] = format_rational(d.nu_inf);
            Json bps = Json::array();
            for (const auto& [t, chi] : d.breakpoints) bps.push_back(Json::array({t, chi}));
            j["breakpoints"] = std::move(bps);
            break;
        }
        case NodeKind::max:
        case NodeKind::sum: {
            j["tag"] = e.kind() == NodeKind::max ? "max" : "sum";
            Json cs = Json::array();
            for (const auto& c : e.children()) cs.push_back(expr_to_json(c));
            j["children"] = std::move(cs);
            break;
        }
        case NodeKind::scale: {
            j["tag"] = "scale";
            j["factor"] = format_rational(e.as<ScaleData>().factor);
            j["child"] = expr_to_json(e.children().front());
            break;
        }
        case NodeKind::linear_pullback: {
            const auto& d = e.as<LinearPullbackData>();
            j["tag"] = "linear_pullback";
            Json mat = Json::array();
            for (const auto& row : d.matrix) {
                Json rj = Json::array();
                for (const auto& z : row) rj.push_back(detail::complex_to_json(z));
                mat.push_back(std::move(rj));
            }
            j["matrix"] = std::move(mat);
            bool nonzero_offset = false;
            for (const auto& z : d.offset) nonzero_offset = nonzero_offset || z != Complex(0.0, 0.0);
            if (nonzero_offset) {
                Json oj = Json::array();
                for (const auto& z : d.offset) oj.push_back(detail::complex_to_json(z));
                j["offset"] = std::move(oj);
            }
            j["child"] = expr_to_json(e.children().front());
            break;
        }
        case NodeKind::unitary_sup: {
            const auto& d = e.as<UnitarySupData>();
            j["tag"] = "unitary_sup";
            j["base_arity"] = d.base_arity;
            j["block_arity"] = d.block_arity;
            j["child"] = expr_to_json(e.children().front());
            break;
        }
    }
    return j;
}

inline PshExpr expr_from_json(const Json& j) { return detail::expr_from_json_impl(j, "", 0); }

inline PshExpr parse_expr_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open expression file '" + path + "'", "file");
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("malformed JSON in '" + path + "': " + e.what(), "malformed-json");
    }
    return expr_from_json(j);
}

inline void write_expr_file(const std::string& path, const PshExpr& e) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write expression file '" + path + "'", "file");
    out << expr_to_json(e).dump(2) << '\n';
}

inline Json estimate_to_json(const InvariantEstimate& est) {
    Json j;
    j["kind"] = kind_name(est.kind);
    j["method"] = method_name(est.method);
    if (est.method == Method::numeric_required) {
        j["value"] = nullptr;
    } else if (est.infinite) {
        j["value"] = "inf";
    } else if (est.exact) {
        if (est.rlo == est.rhi) {
            j["value"] = format_rational(est.rlo);
        } else {
            j["value"] = Json{{"lo", format_rational(est.rlo)}, {"hi", format_rational(est.rhi)}};
        }
    } else {
        j["value"] = Json{{"lo", est.nlo}, {"hi", est.nhi}, {"mid", est.mid()}};
    }
    if (est.inconclusive) j["inconclusive"] = true;
    if (est.budget_exhausted) j["budget_exhausted"] = true;
    if (!est.note.empty()) j["note"] = est.note;
    return j;
}

}  // namespace lelong
