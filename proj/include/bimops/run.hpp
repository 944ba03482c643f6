#pragma once

#include <bimops/backlund.hpp>
#include <bimops/errors.hpp>
#include <bimops/moments.hpp>
#include <bimops/mops.hpp>
#include <bimops/quadratic.hpp>
#include <bimops/records.hpp>
#include <bimops/structmat.hpp>

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace bimops {

using Json = nlohmann::json;

/// Check names in execution (dependency) order.
inline const std::vector<std::string>& all_checks() {
    static const std::vector<std::string> names{"orthogonality",       "jl_identities", "decomposition",
                                                "converse_roundtrip",  "backlund",      "gamma_hat",
                                                "big_family_relations", "lu_factorization", "christoffel_connection",
                                                "xu_case_study"};
    return names;
}

struct RunConfig {
    WeightSpec weight;
    int max_degree = 1;
    std::vector<std::string> checks;
    std::string format = "json";
    std::string path;
};

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

namespace detail {

inline Rational json_rational(const Json& j, const std::string& field) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (!j.is_string()) throw ConfigInvalid(field, "expected a rational string \"p/q\"");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ConfigInvalid(field, e.what());
    }
}

inline int json_int(const Json& j, const std::string& field) {
    if (!j.is_number_integer()) throw ConfigInvalid(field, "expected an integer");
    return j.get<int>();
}

inline std::optional<WeightFamily> family_from_string(const std::string& s) {
    for (auto f : {WeightFamily::square_legendre, WeightFamily::ball, WeightFamily::simplex, WeightFamily::custom})
        if (s == to_string(f)) return f;
    return std::nullopt;
}

} // namespace detail

/// Checks the invariants of a config; field paths are JSON-pointer style.
inline void validate(const RunConfig& c) {
    if (c.max_degree < 1) throw ConfigInvalid("/max_degree", "must be >= 1");
    if (c.checks.empty()) throw ConfigInvalid("/checks", "must not be empty");
    for (std::size_t i = 0; i < c.checks.size(); ++i)
        if (std::find(all_checks().begin(), all_checks().end(), c.checks[i]) == all_checks().end())
            throw ConfigInvalid("/checks/" + std::to_string(i), "unknown check \"" + c.checks[i] + "\"");
    if (c.format != "json" && c.format != "csv" && c.format != "latex")
        throw ConfigInvalid("/output/format", "must be json, csv or latex");
    const WeightSpec& w = c.weight;
    if (w.family == WeightFamily::ball && w.mu <= -1) throw ConfigInvalid("/weight/mu", "ball requires mu > -1");
    if (w.family == WeightFamily::simplex) {
        if (w.a <= -1) throw ConfigInvalid("/weight/a", "simplex requires a > -1");
        if (w.b <= -1) throw ConfigInvalid("/weight/b", "simplex requires b > -1");
        if (w.c <= -1) throw ConfigInvalid("/weight/c", "simplex requires c > -1");
    }
    if (w.family == WeightFamily::custom) {
        auto it = w.moments.find({0, 0});
        if (it == w.moments.end()) throw ConfigInvalid("/weight/moments", "moment (0,0) is required");
        if (sgn(it->second) <= 0) throw ConfigInvalid("/weight/moments", "moment (0,0) must be positive");
    }
}

inline RunConfig parse_config(const Json& j) {
    if (!j.is_object()) throw ConfigInvalid("", "config must be a JSON object");
    RunConfig c;
    if (!j.contains("weight") || !j["weight"].is_object()) throw ConfigInvalid("/weight", "missing weight object");
    const Json& w = j["weight"];
    if (!w.contains("family") || !w["family"].is_string()) throw ConfigInvalid("/weight/family", "missing family");
    auto fam = detail::family_from_string(w["family"].get<std::string>());
    if (!fam) throw ConfigInvalid("/weight/family", "unknown family \"" + w["family"].get<std::string>() + "\"");
    c.weight.family = *fam;
    for (const char* p : {"mu", "a", "b", "c"}) {
        if (!w.contains(p)) continue;
        Rational r = detail::json_rational(w[p], std::string("/weight/") + p);
        (p[0] == 'm' ? c.weight.mu : p[0] == 'a' ? c.weight.a : p[0] == 'b' ? c.weight.b : c.weight.c) = r;
    }
    if (w.contains("moments")) {
        const Json& m = w["moments"];
        if (!m.is_array()) throw ConfigInvalid("/weight/moments", "expected an array of [h, k, \"p/q\"]");
        for (std::size_t i = 0; i < m.size(); ++i) {
            const std::string field = "/weight/moments/" + std::to_string(i);
            if (!m[i].is_array() || m[i].size() != 3) throw ConfigInvalid(field, "expected [h, k, \"p/q\"]");
            const int h = detail::json_int(m[i][0], field + "/0"), k = detail::json_int(m[i][1], field + "/1");
            if (h < 0 || k < 0) throw ConfigInvalid(field, "exponents must be non-negative");
            if (!c.weight.moments.emplace(Exponent{h, k}, detail::json_rational(m[i][2], field + "/2")).second)
                throw ConfigInvalid(field, "duplicate moment");
        }
    } else if (c.weight.family == WeightFamily::custom) {
        throw ConfigInvalid("/weight/moments", "custom weight needs a moment table");
    }
    if (!j.contains("max_degree")) throw ConfigInvalid("/max_degree", "missing");
    c.max_degree = detail::json_int(j["max_degree"], "/max_degree");
    if (!j.contains("checks")) throw ConfigInvalid("/checks", "missing");
    const Json& checks = j["checks"];
    if (checks.is_string() && checks.get<std::string>() == "all") {
        c.checks = all_checks();
    } else if (checks.is_array()) {
        for (std::size_t i = 0; i < checks.size(); ++i) {
            if (!checks[i].is_string()) throw ConfigInvalid("/checks/" + std::to_string(i), "expected a string");
            const std::string name = checks[i].get<std::string>();
            if (name == "all")
                c.checks.insert(c.checks.end(), all_checks().begin(), all_checks().end());
            else
                c.checks.push_back(name);
        }
    } else {
        throw ConfigInvalid("/checks", "expected \"all\" or an array of check names");
    }
    if (j.contains("output")) {
        const Json& o = j["output"];
        if (!o.is_object()) throw ConfigInvalid("/output", "expected an object");
        if (o.contains("format")) {
            if (!o["format"].is_string()) throw ConfigInvalid("/output/format", "expected a string");
            c.format = o["format"].get<std::string>();
        }
        if (o.contains("path")) {
            if (!o["path"].is_string()) throw ConfigInvalid("/output/path", "expected a string");
            c.path = o["path"].get<std::string>();
        }
    }
    validate(c);
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot read config " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigInvalid("", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

struct CheckResult {
    std::string name;
    IdentityRecords records;

    bool passed() const { return all_passed(records); }
    friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

struct NamedMatrix {
    std::string name;
    std::vector<std::pair<std::string, int>> indices;
    RatMatrix value;
    friend bool operator==(const NamedMatrix&, const NamedMatrix&) = default;
};

struct FamilyDump {
    std::string label;
    std::vector<PolyVector> slices;
    std::vector<RatMatrix> grams;
    friend bool operator==(const FamilyDump&, const FamilyDump&) = default;
};

struct RunReport {
    std::string verb;
    WeightSpec weight;
    std::string weight_description;
    int max_degree = 0;
    std::vector<CheckResult> checks;
    std::vector<FamilyDump> families;
    std::vector<NamedMatrix> matrices;
    std::vector<CaseStudyRow> correspondences;
    std::string note;
    double seconds = 0;

    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
    }
    friend bool operator==(const RunReport&, const RunReport&) = default;
};

// ---------------------------------------------------------------------------
// Orchestration
// ---------------------------------------------------------------------------

namespace detail {

/*
 * Shared constructions for the symmetric checks. With H = max(1, N/2) the
 * symmetric family is built to 2H+4 so that the small families reach H+1 and
 * every coefficient identity can be checked for n <= H.
 */
class RunContext {
public:
    RunContext(MomentFunctional f, int max_degree)
        : f_(std::move(f)), n_(max_degree), half_(std::max(1, max_degree / 2)) {}

    const MomentFunctional& functional() const { return f_; }
    int max_degree() const { return n_; }
    int half() const { return half_; }

    const MopsFamily& family() { return lazy(family_, [&] { return build_mops(f_, n_); }); }

    const MopsFamily& symmetric() {
        return lazy(symmetric_, [&] {
            require_symmetric();
            return build_mops(f_, 2 * half_ + 4);
        });
    }

    const GammaSequence& gamma() { return lazy(gamma_, [&] { return gamma_sequence(symmetric()); }); }

    const QuadDecomposition& decomposition() {
        return lazy(decomposition_, [&] { return decompose(symmetric(), half_ + 1); });
    }

    void require_symmetric() const {
        if (!f_.is_xy_symmetric())
            throw NotSymmetric(f_.description() + " is not xy-symmetric; the quadratic decomposition does not apply");
    }

private:
    template <class T, class Build>
    const T& lazy(std::optional<T>& slot, Build build) {
        if (!slot) slot.emplace(build());
        return *slot;
    }

    MomentFunctional f_;
    int n_, half_;
    std::optional<MopsFamily> family_, symmetric_;
    std::optional<GammaSequence> gamma_;
    std::optional<QuadDecomposition> decomposition_;
};

inline void append(IdentityRecords& out, IdentityRecords more) {
    for (auto& r : more) out.push_back(std::move(r));
}

inline IdentityRecords check_orthogonality(RunContext& ctx) {
    IdentityRecords out;
    const MomentFunctional& f = ctx.functional();
    try {
        ctx.family();
    } catch (const NotQuasiDefinite& e) {
        IdentityRecord rec{"positive_definite", {{"n", e.degree()}}, false, e.what(), std::nullopt};
        // Attach the offending Gram matrix when the lower moment matrix was still invertible.
        try {
            rec.witness = gram(f, monic_slice(f, e.degree()), monomial_vector(e.degree()));
        } catch (const std::exception&) {
        }
        out.push_back(std::move(rec));
        return out;
    }
    const MopsFamily& fam = ctx.family();
    append(out, verify_orthogonality(fam));
    for (int n = 0; n < fam.max_degree(); ++n)
        for (int k = 1; k <= 2; ++k) {
            out.push_back(guarded("three_term", {{"n", n}, {"k", k}},
                                  [&] { return verify_three_term(fam, n, k, three_term(fam, n, k)); }));
            if (f.is_xy_symmetric()) out.push_back(verify_symmetric_three_term(fam, n, k));
        }
    if (f.is_xy_symmetric()) append(out, verify_gamma_ranks(gamma_sequence(fam)));
    return out;
}

inline IdentityRecords check_converse(RunContext& ctx) {
    ctx.require_symmetric();
    IdentityRecords out;
    const QuadDecomposition d = assemble_symmetric(quad_pushforward(ctx.functional(), 0, 0), ctx.max_degree());
    const MopsFamily& direct = ctx.family();
    for (int n = 0; n <= ctx.max_degree(); ++n)
        out.push_back(compare_vectors("converse_slice", {{"n", n}}, d.symmetric.slice(n), direct.slice(n)));
    return out;
}

inline Rational case_study_mu(const WeightSpec& w) { return w.family == WeightFamily::ball ? w.mu : Rational(0); }

} // namespace detail

/*
 * Runs the requested checks in dependency order. A failure inside one check
 * becomes a failed record of that check; the remaining checks still run.
 */
inline RunReport run(const RunConfig& config, const std::string& verb = "verify") {
    validate(config);
    const auto start = std::chrono::steady_clock::now();
    RunReport report;
    report.verb = verb;
    report.weight = config.weight;
    report.max_degree = config.max_degree;
    report.note =
        "All quantities are exact rationals; moment functionals are normalized to mass 1, so Jacobian and "
        "constant factors of u = x^2, v = y^2 cancel.";

    std::optional<detail::RunContext> ctx;
    try {
        MomentFunctional f = make_functional(config.weight);
        report.weight_description = f.description();
        ctx.emplace(std::move(f), config.max_degree);
    } catch (const std::exception& e) {
        report.weight_description = std::string("unavailable: ") + e.what();
    }
    const int N = config.max_degree;

    using Check = std::function<IdentityRecords(detail::RunContext&)>;
    const std::vector<std::pair<std::string, Check>> registry{
        {"orthogonality", detail::check_orthogonality},
        {"jl_identities", [N](detail::RunContext&) { return verify_JL_identities(N); }},
        {"decomposition", [](detail::RunContext& c) { return verify_decomposition(c.decomposition()); }},
        {"converse_roundtrip", detail::check_converse},
        {"backlund",
         [](detail::RunContext& c) {
             IdentityRecords out;
             for (int i = 0; i <= 1; ++i)
                 for (int j = 0; j <= 1; ++j)
                     for (int k = 1; k <= 2; ++k)
                         for (int n = 0; n <= c.half(); ++n)
                             detail::append(out, verify_backlund(c.gamma(), c.decomposition(), i, j, n, k));
             return out;
         }},
        {"gamma_hat",
         [](detail::RunContext& c) {
             IdentityRecords out;
             for (int k = 1; k <= 2; ++k)
                 for (int n = 0; n <= c.half(); ++n) detail::append(out, verify_corollary(c.gamma(), c.decomposition(), n, k));
             return out;
         }},
        {"big_family_relations",
         [](detail::RunContext& c) {
             IdentityRecords out;
             for (int k = 1; k <= 2; ++k)
                 for (int n = 0; n <= c.half(); ++n) {
                     detail::append(out, verify_big_relations(c.gamma(), c.decomposition(), n, k));
                     detail::append(out, verify_big_three_term(c.gamma(), c.decomposition(), n, k));
                 }
             return out;
         }},
        {"lu_factorization",
         [](detail::RunContext& c) {
             IdentityRecords out;
             for (int k = 1; k <= 2; ++k) detail::append(out, verify_block_factors(c.gamma(), c.decomposition(), k, c.half()));
             return out;
         }},
        {"christoffel_connection",
         [](detail::RunContext& c) {
             IdentityRecords out;
             for (int k = 1; k <= 2; ++k)
                 for (int n = 0; n <= c.half(); ++n)
                     detail::append(out, verify_connection_vs_gamma_hat(c.gamma(), c.decomposition(), n, k));
             return out;
         }},
        {"xu_case_study",
         [&report, &config](detail::RunContext& c) {
             auto cs = xu_case_study(detail::case_study_mu(config.weight), c.half());
             report.correspondences = std::move(cs.rows);
             return std::move(cs.records);
         }},
    };

    for (const auto& [name, check] : registry) {
        if (std::find(config.checks.begin(), config.checks.end(), name) == config.checks.end()) continue;
        CheckResult result{name, {}};
        try {
            if (!ctx) throw std::runtime_error(report.weight_description);
            result.records = check(*ctx);
            if (result.records.empty()) result.records.push_back({name, {}, true, "no identities at this degree", std::nullopt});
        } catch (const std::exception& e) {
            result.records.push_back({name, {}, false, e.what(), std::nullopt});
        }
        report.checks.push_back(std::move(result));
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

/// The family and its recurrence matrices, plus the four small families for xy-symmetric weights.
inline RunReport compute(const RunConfig& config) {
    validate(config);
    const auto start = std::chrono::steady_clock::now();
    RunReport report;
    report.verb = "compute";
    report.weight = config.weight;
    report.max_degree = config.max_degree;
    CheckResult status{"construction", {}};
    try {
        const MomentFunctional f = make_functional(config.weight);
        report.weight_description = f.description();
        const MopsFamily fam = build_mops(f, config.max_degree);
        report.families.push_back({fam.label, fam.slices, fam.grams});
        for (int n = 0; n < fam.max_degree(); ++n)
            for (int k = 1; k <= 2; ++k) {
                const auto tt = three_term(fam, n, k);
                report.matrices.push_back({"D", {{"n", n}, {"k", k}}, tt.d});
                report.matrices.push_back({"C", {{"n", n}, {"k", k}}, tt.c});
            }
        if (f.is_xy_symmetric()) {
            for (int n = 1; n <= fam.max_degree(); ++n)
                for (int k = 1; k <= 2; ++k) report.matrices.push_back({"Gamma", {{"n", n}, {"k", k}}, symmetric_gamma(fam, n, k)});
            const int half = std::max(1, config.max_degree / 2);
            const QuadDecomposition d = decompose(build_mops(f, 2 * half + 2), half);
            for (int i = 0; i <= 1; ++i)
                for (int j = 0; j <= 1; ++j) {
                    const MopsFamily& s = d.small_family(i, j);
                    report.families.push_back({"small (" + std::to_string(i) + "," + std::to_string(j) + ")", s.slices, s.grams});
                }
        }
        status.records.push_back({"build_mops", {{"N", config.max_degree}}, true, {}, std::nullopt});
    } catch (const NotQuasiDefinite& e) {
        status.records.push_back({"build_mops", {{"n", e.degree()}}, false, e.what(), std::nullopt});
    } catch (const std::exception& e) {
        status.records.push_back({"build_mops", {}, false, e.what(), std::nullopt});
    }
    report.checks.push_back(std::move(status));
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

/// The case-study pipeline alone, whatever checks the config lists.
inline RunReport case_study(const RunConfig& config) {
    RunConfig c = config;
    c.checks = {"xu_case_study"};
    RunReport report = run(c, "casestudy");
    const Rational mu = detail::case_study_mu(config.weight);
    try {
        const MopsFamily b = build_mops(ball(mu), 4);
        for (int n = 1; n <= 3; ++n)
            for (int k = 1; k <= 2; ++k) report.matrices.push_back({"Gamma", {{"n", n}, {"k", k}}, symmetric_gamma(b, n, k)});
    } catch (const std::exception&) {
        // Already reported as a failed case-study record.
    }
    return report;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline Json to_json(const RatMatrix& m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_string(m(r, c)));
        rows.push_back(std::move(row));
    }
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(rows)}};
}

inline RatMatrix matrix_from_json(const Json& j) {
    RatMatrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = parse_rational(j.at("entries").at(r).at(c).get<std::string>());
    return m;
}

inline Json to_json(const Polynomial& p) {
    Json terms = Json::array();
    for (const auto& [e, c] : p.terms()) terms.push_back(Json::array({e.first, e.second, to_string(c)}));
    return terms;
}

inline Polynomial polynomial_from_json(const Json& j) {
    Polynomial p;
    for (const auto& t : j) p.add_term(t.at(0).get<int>(), t.at(1).get<int>(), parse_rational(t.at(2).get<std::string>()));
    return p;
}

inline Json to_json(const PolyVector& v) {
    Json out = Json::array();
    for (const auto& p : v) out.push_back(to_json(p));
    return out;
}

inline PolyVector polyvector_from_json(const Json& j) {
    PolyVector v;
    for (const auto& p : j) v.push_back(polynomial_from_json(p));
    return v;
}

namespace detail {

inline Json indices_json(const std::vector<std::pair<std::string, int>>& idx) {
    Json out = Json::array();
    for (const auto& [name, v] : idx) out.push_back(Json::array({name, v}));
    return out;
}

inline std::vector<std::pair<std::string, int>> indices_from_json(const Json& j) {
    std::vector<std::pair<std::string, int>> out;
    for (const auto& e : j) out.emplace_back(e.at(0).get<std::string>(), e.at(1).get<int>());
    return out;
}

} // namespace detail

inline Json to_json(const WeightSpec& w) {
    Json moments = Json::array();
    for (const auto& [e, v] : w.moments) moments.push_back(Json::array({e.first, e.second, to_string(v)}));
    return Json{{"family", to_string(w.family)}, {"mu", to_string(w.mu)}, {"a", to_string(w.a)},
                {"b", to_string(w.b)},           {"c", to_string(w.c)},   {"moments", std::move(moments)}};
}

inline Json to_json(const RunReport& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks) {
        Json records = Json::array();
        std::size_t failures = 0;
        for (const auto& rec : c.records) {
            Json jr{{"identity", rec.identity}, {"indices", detail::indices_json(rec.indices)},
                    {"status", rec.passed ? "pass" : "fail"}};
            if (!rec.detail.empty()) jr["detail"] = rec.detail;
            if (rec.witness) jr["witness"] = to_json(*rec.witness);
            failures += !rec.passed;
            records.push_back(std::move(jr));
        }
        checks.push_back(Json{{"name", c.name},
                              {"status", c.passed() ? "pass" : "fail"},
                              {"count", c.records.size()},
                              {"failures", failures},
                              {"records", std::move(records)}});
    }
    Json families = Json::array();
    for (const auto& f : r.families) {
        Json slices = Json::array(), grams = Json::array();
        for (const auto& s : f.slices) slices.push_back(to_json(s));
        for (const auto& g : f.grams) grams.push_back(to_json(g));
        families.push_back(Json{{"label", f.label}, {"slices", std::move(slices)}, {"grams", std::move(grams)}});
    }
    Json matrices = Json::array();
    for (const auto& m : r.matrices)
        matrices.push_back(Json{{"name", m.name}, {"indices", detail::indices_json(m.indices)}, {"value", to_json(m.value)}});
    Json rows = Json::array();
    for (const auto& row : r.correspondences)
        rows.push_back(Json{{"n", row.n},
                            {"k", row.k},
                            {"symmetric", to_json(row.symmetric)},
                            {"i", row.i},
                            {"j", row.j},
                            {"small_n", row.small_n},
                            {"small_k", row.small_k},
                            {"small", to_json(row.small)},
                            {"weight", row.weight}});
    return Json{{"verb", r.verb},
                {"weight", to_json(r.weight)},
                {"weight_description", r.weight_description},
                {"max_degree", r.max_degree},
                {"status", r.passed() ? "pass" : "fail"},
                {"checks", std::move(checks)},
                {"families", std::move(families)},
                {"matrices", std::move(matrices)},
                {"correspondences", std::move(rows)},
                {"note", r.note},
                {"timing", Json{{"seconds", r.seconds}}}};
}

inline RunReport report_from_json(const Json& j) {
    RunReport r;
    r.verb = j.at("verb").get<std::string>();
    const Json& w = j.at("weight");
    r.weight.family = detail::family_from_string(w.at("family").get<std::string>()).value();
    r.weight.mu = parse_rational(w.at("mu").get<std::string>());
    r.weight.a = parse_rational(w.at("a").get<std::string>());
    r.weight.b = parse_rational(w.at("b").get<std::string>());
    r.weight.c = parse_rational(w.at("c").get<std::string>());
    for (const auto& m : w.at("moments"))
        r.weight.moments.emplace(Exponent{m.at(0).get<int>(), m.at(1).get<int>()}, parse_rational(m.at(2).get<std::string>()));
    r.weight_description = j.at("weight_description").get<std::string>();
    r.max_degree = j.at("max_degree").get<int>();
    for (const auto& c : j.at("checks")) {
        CheckResult cr{c.at("name").get<std::string>(), {}};
        for (const auto& rec : c.at("records")) {
            IdentityRecord ir{rec.at("identity").get<std::string>(), detail::indices_from_json(rec.at("indices")),
                              rec.at("status").get<std::string>() == "pass", rec.value("detail", std::string{}),
                              std::nullopt};
            if (rec.contains("witness")) ir.witness = matrix_from_json(rec.at("witness"));
            cr.records.push_back(std::move(ir));
        }
        r.checks.push_back(std::move(cr));
    }
    for (const auto& f : j.at("families")) {
        FamilyDump d{f.at("label").get<std::string>(), {}, {}};
        for (const auto& s : f.at("slices")) d.slices.push_back(polyvector_from_json(s));
        for (const auto& g : f.at("grams")) d.grams.push_back(matrix_from_json(g));
        r.families.push_back(std::move(d));
    }
    for (const auto& m : j.at("matrices"))
        r.matrices.push_back({m.at("name").get<std::string>(), detail::indices_from_json(m.at("indices")),
                              matrix_from_json(m.at("value"))});
    for (const auto& row : j.at("correspondences")) {
        CaseStudyRow cs;
        cs.n = row.at("n").get<int>();
        cs.k = row.at("k").get<int>();
        cs.symmetric = polynomial_from_json(row.at("symmetric"));
        cs.i = row.at("i").get<int>();
        cs.j = row.at("j").get<int>();
        cs.small_n = row.at("small_n").get<int>();
        cs.small_k = row.at("small_k").get<int>();
        cs.small = polynomial_from_json(row.at("small"));
        cs.weight = row.at("weight").get<std::string>();
        r.correspondences.push_back(std::move(cs));
    }
    r.note = j.at("note").get<std::string>();
    r.seconds = j.at("timing").at("seconds").get<double>();
    return r;
}

// ---------------------------------------------------------------------------
// CSV and LaTeX
// ---------------------------------------------------------------------------

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return out + "\"";
}

inline std::string indices_text(const std::vector<std::pair<std::string, int>>& idx) {
    std::string out;
    for (const auto& [name, v] : idx) out += (out.empty() ? "" : ";") + name + "=" + std::to_string(v);
    return out;
}

inline std::string latex_rational(const Rational& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return std::string(sgn(r) < 0 ? "-" : "") + "\\frac{" + Integer(abs(r.get_num())).get_str() + "}{" + r.get_den().get_str() + "}";
}

inline std::string latex_matrix(const RatMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return "\\text{(" + m.shape() + ")}";
    std::string out = "\\begin{pmatrix}";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) out += (c ? " & " : "") + latex_rational(m(r, c));
        out += r + 1 < m.rows() ? " \\\\ " : "";
    }
    return out + "\\end{pmatrix}";
}

inline std::string latex_weight(const CaseStudyRow& row, const Rational& mu) {
    auto exp = [](const Rational& e) { return "{" + (e.get_den() == 1 ? e.get_num().get_str() : e.get_str()) + "}"; };
    const Rational half = frac(1, 2);
    return "u^" + exp(Rational(row.i) - half) + " v^" + exp(Rational(row.j) - half) + " (1-u-v)^" + exp(mu);
}

} // namespace detail

inline std::string to_csv(const RunReport& r) {
    std::ostringstream os;
    os << "check,identity,indices,status,detail\n";
    for (const auto& c : r.checks)
        for (const auto& rec : c.records)
            os << detail::csv_field(c.name) << ',' << detail::csv_field(rec.identity) << ','
               << detail::csv_field(detail::indices_text(rec.indices)) << ',' << (rec.passed ? "pass" : "fail") << ','
               << detail::csv_field(rec.detail) << '\n';
    return os.str();
}

inline std::string to_latex(const RunReport& r) {
    std::ostringstream os;
    os << "% " << r.verb << " report, weight: " << r.weight_description << ", N = " << r.max_degree << "\n";
    if (!r.correspondences.empty()) {
        const Rational mu = r.weight.family == WeightFamily::ball ? r.weight.mu : Rational(0);
        static const char* factors[2][2] = {{"1", "y"}, {"x", "xy"}};
        os << "\\begin{tabular}{lllll}\n\\hline\n"
           << "$\\mathbb{S}_{n,k}$ & $\\mathbb{S}_{n,k}(x,y)$ & factor & small family & weight \\\\\n\\hline\n";
        for (const auto& row : r.correspondences)
            os << "$S_{" << row.n << "," << row.k << "}$ & $" << row.symmetric.to_latex() << "$ & $"
               << factors[row.i][row.j] << "$ & $\\widehat{P}^{(" << row.i << "," << row.j << ")}_{" << row.small_n << ","
               << row.small_k << "} = " << row.small.to_latex("u", "v") << "$ & $" << detail::latex_weight(row, mu)
               << "$ \\\\\n";
        os << "\\hline\n\\end{tabular}\n\n";
    }
    if (!r.matrices.empty()) {
        os << "\\begin{align*}\n";
        for (std::size_t i = 0; i < r.matrices.size(); ++i) {
            const auto& m = r.matrices[i];
            std::string sub;
            for (const auto& [name, v] : m.indices) sub += (sub.empty() ? "" : ",") + std::to_string(v);
            const std::string symbol = m.name == "Gamma" ? "\\Gamma" : m.name;
            os << symbol << "_{" << sub << "} &= " << detail::latex_matrix(m.value)
               << (i + 1 < r.matrices.size() ? " \\\\\n" : "\n");
        }
        os << "\\end{align*}\n\n";
    }
    os << "\\begin{tabular}{lrrl}\n\\hline\ncheck & identities & failures & status \\\\\n\\hline\n";
    for (const auto& c : r.checks) {
        std::size_t failures = 0;
        for (const auto& rec : c.records) failures += !rec.passed;
        std::string name = c.name;
        std::string escaped;
        for (char ch : name) escaped += ch == '_' ? std::string("\\_") : std::string(1, ch);
        os << escaped << " & " << c.records.size() << " & " << failures << " & " << (c.passed() ? "pass" : "fail")
           << " \\\\\n";
    }
    os << "\\hline\n\\end{tabular}\n";
    return os.str();
}

inline std::string render(const RunReport& r, const std::string& format) {
    if (format == "json") return to_json(r).dump(2) + "\n";
    if (format == "csv") return to_csv(r);
    if (format == "latex") return to_latex(r);
    throw std::invalid_argument("unknown format " + format);
}

inline void emit(const RunReport& r, const std::string& format, const std::string& path) {
    const std::string text = render(r, format);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open " + path + " for writing");
    out << text;
    if (!out) throw IoFailure("write to " + path + " failed");
}

} // namespace bimops
