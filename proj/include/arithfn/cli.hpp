#pragma once

/**
 * @file cli.hpp
 * @brief The `arithfn` command line: expression evaluation, ideal
 *        arithmetic, series and valuation reports, topology reports, and
 *        the seeded verification suites.
 *
 * Exit codes: 0 on success, 1 when a verification subcommand finds a failing
 * claim (the counterexample is dumped), 2 on usage or input errors.  All
 * JSON output carries schema "v1" and contains no timing data, so a fixed
 * seed produces byte-identical reports.
 */

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cctype>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "arithfn/domain.hpp"
#include "arithfn/expr.hpp"
#include "arithfn/series.hpp"
#include "arithfn/space.hpp"
#include "arithfn/valuation.hpp"
#include "arithfn/verify.hpp"

namespace arithfn::cli {

using nlohmann::json;

/// A parsed --domain descriptor: the monoid functions live on, plus the
/// domain behind it when there is one (none for the bare positive integers).
struct DomainSpec {
    std::string descriptor;
    DomainPtr domain;  // null for zplus
    MonoidPtr monoid;
};

namespace cdetail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    std::size_t b = s.find_last_not_of(" \t");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        std::string piece = trim(text.substr(start, comma - start));
        if (piece.empty()) throw std::invalid_argument("list: empty entry in '" + text + "'");
        out.push_back(std::move(piece));
        start = comma + 1;
        if (comma == text.size()) break;
    }
    return out;
}

}  // namespace cdetail

inline DomainSpec parse_domain(const std::string& text) {
    DomainSpec out;
    out.descriptor = text;
    std::size_t colon = text.find(':');
    std::string head = colon == std::string::npos ? text : text.substr(0, colon);
    std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);

    if (head == "zplus" && tail.empty()) {
        out.monoid = PositiveIntegers::make();
        return out;
    }
    if (head == "z" && tail.empty()) {
        out.domain = IntegerDomain::make();
    } else if (head == "qsqrt" && !tail.empty()) {
        out.domain = QuadDomain::make(mpz_class(tail));
    } else if (head == "fpx" && !tail.empty()) {
        out.domain = PolyDomain::make(std::stoull(tail));
    } else if (head == "zloc" && !tail.empty()) {
        auto z = IntegerDomain::make();
        std::vector<PrimeId> ids;
        for (auto& label : cdetail::split_list(tail)) {
            auto id = z->find_prime_by_label(label);
            if (!id) throw std::invalid_argument("domain: '" + label + "' is not a prime");
            ids.push_back(*id);
        }
        out.domain = LocalizedDomain::make(z, std::move(ids));
    } else {
        throw std::invalid_argument("domain: unknown descriptor '" + text +
                                    "'; expected zplus, z, qsqrt:<d>, fpx:<p>, or "
                                    "zloc:p1,p2,...");
    }
    out.monoid = out.domain->ideal_monoid();
    return out;
}

inline FieldId parse_field(const std::string& text) {
    if (text == "Q") return rationals();
    if (text.rfind("Fp:", 0) == 0) return prime_field(std::stoul(text.substr(3)));
    throw std::invalid_argument("field: expected Q or Fp:<p>, got '" + text + "'");
}

/// Element text to a point of the ideal monoid (or of Z+ without a domain).
inline MonoidElement parse_point(const DomainSpec& ds, const std::string& text) {
    if (ds.domain) {
        DomainElement x = ds.domain->parse_element(text);
        if (ds.domain->is_zero(x))
            throw std::invalid_argument("element: zero generates the zero ideal");
        return ds.domain->factor_principal(x);
    }
    auto zplus = std::static_pointer_cast<const PositiveIntegers>(ds.monoid);
    return zplus->element_of(mpz_class(cdetail::trim(text)));
}

inline std::vector<PrimeId> parse_window(const MonoidPtr& m, const std::string& text) {
    std::vector<PrimeId> out;
    for (auto& label : cdetail::split_list(text)) {
        auto id = m->find_prime_by_label(label);
        if (!id)
            throw std::invalid_argument("window: no prime labeled '" + label + "' in " +
                                        m->signature());
        out.push_back(*id);
    }
    return out;
}

/// Ideal text "(a, b+c*w)" or "(g)" over a quadratic order.
inline QuadIdeal parse_ideal(const QuadDomain& dom, const std::string& text) {
    std::string s = cdetail::trim(text);
    if (s.size() < 3 || s.front() != '(' || s.back() != ')')
        throw std::invalid_argument("ideal: expected \"(a, b+c*w)\" or \"(g)\", got '" +
                                    text + "'");
    std::string body = s.substr(1, s.size() - 2);
    std::size_t comma = body.find(',');
    if (comma == std::string::npos) {
        QuadElem g = arithfn::detail::parse_quad_elem(body);
        if (quad_is_zero(g)) throw std::invalid_argument("ideal: zero generator");
        return QuadIdeal::principal(dom.d(), g);
    }
    mpz_class a(cdetail::trim(body.substr(0, comma)));
    QuadElem bc = arithfn::detail::parse_quad_elem(body.substr(comma + 1));
    return QuadIdeal::from_module(dom.d(), {{a, 0}, {bc.u, bc.v}});
}

/// Prime factorization of an arbitrary nonzero ideal, by dividing out the
/// primes over each rational prime of the norm.
inline MonoidElement factor_ideal(const std::shared_ptr<const QuadDomain>& dom,
                                  QuadIdeal ideal) {
    ExpVec exps;
    for (auto& [p, unused] : arithfn::detail::trial_factor(ideal.norm())) {
        (void)unused;
        Splitting s = splitting_type(dom->d(), p);
        std::vector<const QuadIdeal*> over{&s.first};
        if (s.second) over.push_back(&*s.second);
        for (const QuadIdeal* P : over) {
            std::uint32_t v = 0;
            while (auto next = ideal.divide_by_prime(*P, p)) {
                ideal = *next;
                ++v;
            }
            if (v) exps.emplace_back(dom->prime_id_of(*P), v);
        }
    }
    if (!ideal.is_whole_ring())
        throw std::logic_error("ideal factorization left a nontrivial part");
    return MonoidElement::from_exponents(dom->ideal_monoid(), std::move(exps));
}

namespace cdetail {

inline json factors_json(const MonoidElement& m) {
    json arr = json::array();
    for (auto& [id, e] : m.exponents())
        arr.push_back(json{{"prime", m.monoid()->prime(id).label}, {"exp", e}});
    return arr;
}

inline std::vector<std::string> window_labels(const MonoidPtr& m,
                                              const std::vector<PrimeId>& window) {
    std::vector<std::string> out;
    for (PrimeId p : window) out.push_back(m->prime(p).label);
    return out;
}

inline std::string stalk_kind_name(StalkKind k) {
    switch (k) {
        case StalkKind::WholeRing: return "whole-ring";
        case StalkKind::LocalRing: return "local-ring";
        case StalkKind::SemiLocalPID: return "semi-local-pid";
        case StalkKind::FractionField: return "fraction-field";
    }
    return "";
}

inline std::shared_ptr<const QuadDomain> require_quad(const DomainSpec& ds,
                                                      const std::string& who) {
    auto quad = std::dynamic_pointer_cast<const QuadDomain>(ds.domain);
    if (!quad)
        throw std::invalid_argument(who + ": needs --domain qsqrt:<d>, got '" +
                                    ds.descriptor + "'");
    return quad;
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

inline int cmd_eval(std::ostream& out, bool as_json, const std::string& fn_text,
                    const std::string& at_text, const std::string& domain_text,
                    const std::string& field_text) {
    DomainSpec ds = parse_domain(domain_text);
    FieldId k = parse_field(field_text);
    ArithFn f = parse_fn(fn_text, ds.monoid, k);
    MonoidElement a = parse_point(ds, at_text);
    Scalar v = f(a);
    if (as_json) {
        out << json{{"schema", "v1"},   {"command", "eval"}, {"fn", fn_text},
                    {"at", a.str()},    {"field", k.str()},  {"domain", ds.descriptor},
                    {"value", v.str()}}
                   .dump(2)
            << "\n";
    } else {
        out << v.str() << "\n";
    }
    return 0;
}

inline int cmd_factor(std::ostream& out, bool as_json, const std::string& elem_text,
                      const std::string& domain_text) {
    DomainSpec ds = parse_domain(domain_text);
    MonoidElement m = parse_point(ds, elem_text);
    if (as_json) {
        out << json{{"schema", "v1"},
                    {"command", "factor"},
                    {"domain", ds.descriptor},
                    {"element", cdetail::trim(elem_text)},
                    {"factors", factors_json(m)}}
                   .dump(2)
            << "\n";
    } else {
        out << m.str() << "\n";
    }
    return 0;
}

inline int cmd_ideal_mul(std::ostream& out, bool as_json, const std::string& left_text,
                         const std::string& right_text, const std::string& domain_text) {
    DomainSpec ds = parse_domain(domain_text);
    auto quad = require_quad(ds, "ideal-mul");
    QuadIdeal product = parse_ideal(*quad, left_text) * parse_ideal(*quad, right_text);
    MonoidElement factored = factor_ideal(quad, product);
    if (as_json) {
        out << json{{"schema", "v1"},
                    {"command", "ideal-mul"},
                    {"domain", ds.descriptor},
                    {"product", product.str()},
                    {"norm", product.norm().get_str()},
                    {"factors", factors_json(factored)}}
                   .dump(2)
            << "\n";
    } else {
        out << product.str() << " = " << factored.str() << "\n";
    }
    return 0;
}

inline int cmd_norm(std::ostream& out, bool as_json, const std::string& input_text,
                    const std::string& domain_text) {
    DomainSpec ds = parse_domain(domain_text);
    std::string s = cdetail::trim(input_text);
    mpz_class n;
    if (!s.empty() && s.front() == '(') {
        if (auto quad = std::dynamic_pointer_cast<const QuadDomain>(ds.domain)) {
            n = parse_ideal(*quad, s).norm();
        } else if (ds.domain && ds.domain->kind() == DomainKind::Integers) {
            n = abs(mpz_class(cdetail::trim(s.substr(1, s.size() - 2))));
            if (n == 0) throw std::invalid_argument("norm: the zero ideal has no norm");
        } else {
            throw std::invalid_argument("norm: ideal text needs --domain qsqrt:<d> or z");
        }
    } else {
        n = parse_point(ds, s).norm();
    }
    if (as_json) {
        out << json{{"schema", "v1"},
                    {"command", "norm"},
                    {"domain", ds.descriptor},
                    {"input", s},
                    {"norm", n.get_str()}}
                   .dump(2)
            << "\n";
    } else {
        out << n.get_str() << "\n";
    }
    return 0;
}

inline int cmd_split(std::ostream& out, bool as_json, const std::string& prime_text,
                     const std::string& domain_text) {
    DomainSpec ds = parse_domain(domain_text);
    auto quad = require_quad(ds, "split");
    mpz_class p(cdetail::trim(prime_text));
    auto sp = quad->splitting(p);
    std::string kind = sp.split_kind == SplitKind::Split      ? "split"
                       : sp.split_kind == SplitKind::Ramified ? "ramified"
                                                              : "inert";
    if (as_json) {
        json primes = json::array();
        for (PrimeId id : sp.ids)
            primes.push_back(json{{"label", quad->prime_info(id).label},
                                  {"ideal", quad->prime_ideal(id).str()},
                                  {"norm", quad->prime_info(id).norm.get_str()}});
        out << json{{"schema", "v1"}, {"command", "split"},  {"domain", ds.descriptor},
                    {"p", p.get_str()}, {"kind", kind},      {"primes", primes}}
                   .dump(2)
            << "\n";
    } else {
        out << p.get_str() << " in " << quad->signature() << ": " << kind << "\n";
        for (PrimeId id : sp.ids)
            out << "  " << quad->prime_info(id).label << " = " << quad->prime_ideal(id).str()
                << ", norm " << quad->prime_info(id).norm.get_str() << "\n";
    }
    return 0;
}

inline int cmd_valuation(std::ostream& out, const std::string& fn_text,
                         const std::string& window_text, std::uint32_t depth,
                         const std::string& domain_text, const std::string& field_text) {
    DomainSpec ds = parse_domain(domain_text);
    FieldId k = parse_field(field_text);
    ArithFn f = parse_fn(fn_text, ds.monoid, k);
    auto window = parse_window(ds.monoid, window_text);
    auto rep = valuation(f, window, depth);
    out << json{{"schema", "v1"},
                {"command", "valuation"},
                {"fn", fn_text},
                {"domain", ds.descriptor},
                {"window", window_labels(ds.monoid, rep.window)},
                {"depth", rep.depth},
                {"value", rep.value ? json(*rep.value) : json(nullptr)},
                {"certified", rep.certified}}
               .dump(2)
        << "\n";
    return 0;
}

inline int cmd_series(std::ostream& out, bool as_json, const std::string& fn_text,
                      const std::string& window_text, std::uint32_t degree,
                      const std::string& domain_text, const std::string& field_text) {
    DomainSpec ds = parse_domain(domain_text);
    FieldId k = parse_field(field_text);
    ArithFn f = parse_fn(fn_text, ds.monoid, k);
    TruncatedSeries F = phi(f, parse_window(ds.monoid, window_text), degree);
    if (as_json) {
        json terms = json::array();
        for (auto& [mono, coeff] : F.coefficients()) {
            json exps = json::object();
            for (auto& [p, e] : mono) exps[ds.monoid->prime(p).label] = e;
            terms.push_back(json{{"monomial", exps}, {"coeff", coeff.str()}});
        }
        out << json{{"schema", "v1"},
                    {"command", "series"},
                    {"fn", fn_text},
                    {"domain", ds.descriptor},
                    {"window", window_labels(ds.monoid, F.window())},
                    {"degree_bound", F.degree_bound()},
                    {"terms", terms}}
                   .dump(2)
            << "\n";
    } else {
        out << F.str() << "\n";
    }
    return 0;
}

inline int cmd_space_example(std::ostream& out, std::ostream& err, bool as_json,
                             const std::string& example) {
    if (example != "sqrt-5")
        throw std::invalid_argument("space: unknown example '" + example +
                                    "'; available: sqrt-5");
    WitnessReport rep = witness_check_sqrtm5();
    if (as_json) {
        out << json{{"schema", "v1"},
                    {"command", "space"},
                    {"example", example},
                    {"ok", rep.ok},
                    {"steps", rep.steps},
                    {"failures", rep.failures}}
                   .dump(2)
            << "\n";
    } else {
        for (auto& s : rep.steps) out << "ok: " << s << "\n";
        for (auto& f : rep.failures) out << "FAIL: " << f << "\n";
        out << (rep.ok ? "all witness checks passed\n" : "witness checks FAILED\n");
    }
    if (!rep.ok)
        for (auto& f : rep.failures) err << "counterexample: " << f << "\n";
    return rep.ok ? 0 : 1;
}

inline int cmd_space(std::ostream& out, std::ostream& err, bool as_json, bool as_dot,
                     const std::string& domain_text, const std::string& report,
                     const std::string& example) {
    if (!example.empty()) {
        if (as_dot) throw std::invalid_argument("space: --dot applies to --report poset");
        return cmd_space_example(out, err, as_json, example);
    }
    DomainSpec ds = parse_domain(domain_text);
    if (!ds.domain || ds.domain->kind() != DomainKind::Localized)
        throw std::invalid_argument("space: needs a semi-local domain (zloc:p1,p2,...)");
    FiniteSpace space(ds.domain);
    bool small = space.prime_count() <= 4;

    if (report == "poset") {
        if (as_dot && as_json)
            throw std::invalid_argument("space: pick one of --dot and --json");
        if (as_dot) {
            out << space.to_dot();
        } else if (as_json) {
            json edges = json::array();
            for (auto& [from, to] : space.covering_edges())
                edges.push_back(json::array(
                    {space.point_label(from), space.point_label(to)}));
            json points = json::array();
            for (FiniteSpace::PrimeMask z = 0; z < space.point_count(); ++z)
                points.push_back(space.point_label(z));
            out << json{{"schema", "v1"},
                        {"command", "space"},
                        {"report", "poset"},
                        {"domain", ds.domain->signature()},
                        {"points", points},
                        {"covering_edges", edges}}
                       .dump(2)
                << "\n";
        } else {
            for (auto& [from, to] : space.covering_edges())
                out << space.point_label(from) << " -> " << space.point_label(to) << "\n";
        }
        return 0;
    }
    if (as_dot) throw std::invalid_argument("space: --dot applies to --report poset");

    if (report == "sheaf") {
        if (as_json) {
            json stalks = json::array();
            for (FiniteSpace::PrimeMask z = 0; z < space.point_count(); ++z) {
                auto d = space.stalk_at(z);
                stalks.push_back(json{{"point", space.point_label(z)},
                                      {"kind", stalk_kind_name(d.kind)},
                                      {"ring", d.str()}});
            }
            json sections = json::array();
            for (FiniteSpace::PrimeMask s = 0; s <= space.full_primes(); ++s) {
                auto d = space.sections_on_support(s);
                sections.push_back(json{{"support", space.point_label(s)},
                                        {"kind", stalk_kind_name(d.kind)},
                                        {"ring", d.str()}});
            }
            out << json{{"schema", "v1"},
                        {"command", "space"},
                        {"report", "sheaf"},
                        {"domain", ds.domain->signature()},
                        {"stalks", stalks},
                        {"sections_on_basic_opens", sections}}
                       .dump(2)
                << "\n";
        } else {
            out << "stalks over " << ds.domain->signature() << ":\n";
            for (FiniteSpace::PrimeMask z = 0; z < space.point_count(); ++z)
                out << "  at " << space.point_label(z) << ": " << space.stalk_at(z).str()
                    << "\n";
            out << "sections on basic opens (by support of the defining element):\n";
            for (FiniteSpace::PrimeMask s = 0; s <= space.full_primes(); ++s)
                out << "  supp " << space.point_label(s) << ": "
                    << space.sections_on_support(s).str() << "\n";
        }
        return 0;
    }

    if (report != "topology")
        throw std::invalid_argument("space: --report must be topology, poset, or sheaf");

    auto dim = space.dimension();
    bool census_ok = true;
    std::size_t closed_count = 0;
    std::vector<FiniteSpace::PointSet> closed;
    if (small) {
        auto census = space.closed_set_census();
        census_ok = census.agree();
        closed = census.via_generators;
        closed_count = closed.size();
    }
    auto spectral = space.t0_and_spectral_report();
    std::string closed_why;
    bool point_ok = space.closed_point_check(&closed_why);
    bool all_ok = census_ok && spectral.ok() && point_ok && dim.chain_verified;

    auto label_set = [&](FiniteSpace::PointSet set) {
        json arr = json::array();
        for (FiniteSpace::PrimeMask z = 0; z < space.point_count(); ++z)
            if (set >> z & 1) arr.push_back(space.point_label(z));
        return arr;
    };

    if (as_json) {
        json j{{"schema", "v1"},
               {"command", "space"},
               {"report", "topology"},
               {"domain", ds.domain->signature()},
               {"points", label_set(space.all_points())},
               {"generic_point", space.point_label(space.generic_point())},
               {"closed_point", space.point_label(space.identity_point())},
               {"dimension", dim.dimension},
               {"chain_verified", dim.chain_verified},
               {"census_agree", census_ok},
               {"t0_spectral_ok", spectral.ok()},
               {"closed_point_ok", point_ok}};
        if (small) {
            j["closed_set_count"] = closed_count;
            json lattice = json::array();
            for (auto c : closed) lattice.push_back(label_set(c));
            j["closed_sets"] = lattice;
        } else {
            j["closed_set_note"] = "lattice enumeration is limited to 4 maximal ideals";
        }
        out << j.dump(2) << "\n";
    } else {
        out << "space of " << ds.domain->signature() << ": " << space.point_count()
            << " points\n";
        out << "generic point " << space.point_label(space.generic_point())
            << ", closed point " << space.point_label(space.identity_point()) << "\n";
        out << "dimension " << dim.dimension << " (witness chain "
            << (dim.chain_verified ? "verified" : "BROKEN") << ")\n";
        if (small)
            out << "closed sets: " << closed_count << ", generator and up-set routes "
                << (census_ok ? "agree" : "DISAGREE") << "\n";
        else
            out << "closed sets: skipped (lattice enumeration is limited to 4 maximal "
                   "ideals)\n";
        out << "separation and spectral checks: " << (spectral.ok() ? "pass" : "FAIL")
            << "\n";
    }
    if (!all_ok) {
        if (!census_ok) err << "counterexample: closed-set enumerations disagree\n";
        if (!spectral.ok()) err << "counterexample: " << spectral.detail << "\n";
        if (!point_ok) err << "counterexample: " << closed_why << "\n";
        if (!dim.chain_verified) err << "counterexample: witness chain not verified\n";
        return 1;
    }
    return 0;
}

inline int cmd_verify(std::ostream& out, std::ostream& err, bool as_json,
                      const std::string& suite, std::uint64_t seed) {
    auto results = verify::run_suite(suite, seed);
    bool all = true;
    for (auto& r : results) all = all && r.pass;

    if (as_json) {
        json arr = json::array();
        for (auto& r : results)
            arr.push_back(json{
                {"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"notes", r.notes}});
        out << json{{"schema", "v1"},
                    {"command", "verify"},
                    {"suite", suite},
                    {"seed", seed},
                    {"criteria", arr},
                    {"all_pass", all}}
                   .dump(2)
            << "\n";
    } else {
        std::size_t passed = 0;
        for (auto& r : results) {
            out << (r.pass ? "PASS" : "FAIL") << "  " << r.id << "  " << r.name << "  ("
                << r.seconds << "s)\n";
            for (auto& n : r.notes) out << "      - " << n << "\n";
            if (r.pass) ++passed;
        }
        out << passed << "/" << results.size() << " criteria passed (suite " << suite
            << ", seed " << seed << ")\n";
    }
    if (!all)
        for (auto& r : results)
            if (!r.pass) {
                err << "failed criterion " << r.id << " (" << r.name << ")\n";
                for (auto& n : r.notes) err << "  counterexample: " << n << "\n";
            }
    return all ? 0 : 1;
}

}  // namespace cdetail

/**
 * Parse and run one invocation.  `args` is argv without the program name;
 * output lands on `out`, diagnostics on `err`.
 */
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dirichlet-ring calculator: arithmetic functions over ideal monoids, "
                 "quadratic ideals, truncated series, and semi-local topologies"};
    app.name("arithfn");
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable JSON output (schema v1)");

    std::string eval_fn, eval_at, eval_domain = "zplus", eval_field = "Q";
    auto* eval = app.add_subcommand("eval", "evaluate a function expression at an element");
    eval->fallthrough();
    eval->add_option("--fn", eval_fn, "expression, e.g. conv(mu,u) or tm{2:1/2}")
        ->required();
    eval->add_option("--at", eval_at, "element, e.g. 60 or \"1+w\"")->required();
    eval->add_option("--domain", eval_domain, "zplus|z|qsqrt:<d>|fpx:<p>|zloc:p1,p2,...");
    eval->add_option("--field", eval_field, "Q|Fp:<p>");

    std::string factor_elem, factor_domain = "z";
    auto* factor = app.add_subcommand("factor", "factor a principal ideal into primes");
    factor->fallthrough();
    factor->add_option("element", factor_elem, "generator, e.g. 60 or \"1+w\"")->required();
    factor->add_option("--domain", factor_domain, "z|qsqrt:<d>|fpx:<p>|zloc:p1,p2,...");

    std::string imul_left, imul_right, imul_domain;
    auto* imul = app.add_subcommand("ideal-mul", "multiply two ideals of a quadratic order");
    imul->fallthrough();
    imul->add_option("left", imul_left, "ideal, e.g. \"(3, 1+w)\" or \"(2-w)\"")->required();
    imul->add_option("right", imul_right, "ideal")->required();
    imul->add_option("--domain", imul_domain, "qsqrt:<d>")->required();

    std::string norm_input, norm_domain = "z";
    auto* norm = app.add_subcommand("norm", "norm of an element or ideal");
    norm->fallthrough();
    norm->add_option("input", norm_input, "element like 60, or ideal like \"(3, 1+w)\"")
        ->required();
    norm->add_option("--domain", norm_domain, "zplus|z|qsqrt:<d>|fpx:<p>|zloc:p1,p2,...");

    std::string split_p, split_domain;
    auto* split = app.add_subcommand("split", "splitting of a rational prime upstairs");
    split->fallthrough();
    split->add_option("p", split_p, "rational prime")->required();
    split->add_option("--domain", split_domain, "qsqrt:<d>")->required();

    std::string val_fn, val_window, val_domain = "zplus", val_field = "Q";
    std::uint32_t val_depth = 0;
    auto* val = app.add_subcommand("valuation",
                                   "order of vanishing, searched on a windowed universe");
    val->fallthrough();
    val->add_option("--fn", val_fn, "expression")->required();
    val->add_option("--window", val_window, "prime labels, e.g. 2,3,5")->required();
    val->add_option("--depth", val_depth, "search depth D")->required();
    val->add_option("--domain", val_domain, "zplus|z|qsqrt:<d>|fpx:<p>|zloc:p1,p2,...");
    val->add_option("--field", val_field, "Q|Fp:<p>");

    std::string ser_fn, ser_window, ser_domain = "zplus", ser_field = "Q";
    std::uint32_t ser_degree = 0;
    auto* ser = app.add_subcommand("series", "truncated power-series expansion");
    ser->fallthrough();
    ser->add_option("--fn", ser_fn, "expression")->required();
    ser->add_option("--window", ser_window, "prime labels, e.g. 2,3,5")->required();
    ser->add_option("--depth", ser_degree, "degree bound D")->required();
    ser->add_option("--domain", ser_domain, "zplus|z|qsqrt:<d>|fpx:<p>|zloc:p1,p2,...");
    ser->add_option("--field", ser_field, "Q|Fp:<p>");

    std::string space_domain, space_report = "topology", space_example;
    bool space_dot = false;
    auto* space = app.add_subcommand("space", "topology, poset, and sheaf reports");
    space->fallthrough();
    space->add_option("--domain", space_domain, "zloc:p1,p2,...");
    space->add_option("--report", space_report, "topology|poset|sheaf");
    space->add_flag("--dot", space_dot, "DOT output of the specialization poset");
    space->add_option("--example", space_example, "run a named witness battery: sqrt-5");

    std::string verify_suite = "all";
    std::uint64_t verify_seed = 1;
    auto* verify_cmd = app.add_subcommand("verify", "run the seeded verification suites");
    verify_cmd->fallthrough();
    verify_cmd->add_option("--suite", verify_suite,
                           "dirichlet|series|valuation|space|morphisms|sqrt-5|"
                           "spec-embedding|all");
    verify_cmd->add_option("--seed", verify_seed, "seed for the randomized data");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        auto parsed = app.get_subcommands();
        out << (parsed.empty() ? app.help() : parsed.front()->help());
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        using namespace cdetail;
        if (eval->parsed())
            return cmd_eval(out, as_json, eval_fn, eval_at, eval_domain, eval_field);
        if (factor->parsed()) return cmd_factor(out, as_json, factor_elem, factor_domain);
        if (imul->parsed())
            return cmd_ideal_mul(out, as_json, imul_left, imul_right, imul_domain);
        if (norm->parsed()) return cmd_norm(out, as_json, norm_input, norm_domain);
        if (split->parsed()) return cmd_split(out, as_json, split_p, split_domain);
        if (val->parsed())
            return cmd_valuation(out, val_fn, val_window, val_depth, val_domain, val_field);
        if (ser->parsed())
            return cmd_series(out, as_json, ser_fn, ser_window, ser_degree, ser_domain,
                              ser_field);
        if (space->parsed())
            return cmd_space(out, err, as_json, space_dot, space_domain, space_report,
                             space_example);
        if (verify_cmd->parsed())
            return cmd_verify(out, err, as_json, verify_suite, verify_seed);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "error: no subcommand\n";
    return 2;
}

}  // namespace arithfn::cli
