#include "cmfield/cli.hpp"

#include "cmfield/galois.hpp"
#include "cmfield/invariants.hpp"
#include "cmfield/modfunc.hpp"
#include "cmfield/quadforms.hpp"
#include "cmfield/rayclass.hpp"
#include "cmfield/verify.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#ifndef CMFIELD_VERSION
#define CMFIELD_VERSION "dev"
#endif

namespace cmf {

namespace fs = std::filesystem;

Bits default_precision()
{
    if (const char* env = std::getenv("DEFAULT_PRECISION_BITS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= kMinPrecision && v <= kMaxPrecision) return v;
    }
    return kDefaultPrecision;
}

std::optional<std::string> default_cache_dir()
{
    const char* env = std::getenv("CACHE_DIR");
    if (env && *env) return std::string(env);
    return std::nullopt;
}

int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::RoundingFailed:
    case ErrorKind::AmbiguousRounding: return 3;
    case ErrorKind::ConditionViolated: return 4;
    case ErrorKind::PrecisionExhausted:
    case ErrorKind::Range: return 5;
    case ErrorKind::SplitPrime: return 6;
    case ErrorKind::RatioViolation: return 7;
    case ErrorKind::InvalidArgument:
    case ErrorKind::NotFundamental:
    case ErrorKind::ExcludedField:
    case ErrorKind::NoRoot: return 2;
    }
    return 2;
}

namespace {

int digits_for(Bits prec) { return static_cast<int>(std::min<double>(60.0, static_cast<double>(prec) * 0.30103 - 6.0)); }

Json real_json(const BigReal& x, int digits) { return x.to_string(digits); }

Json complex_json(const BigComplex& z, int digits)
{
    return Json{{"re", z.re().to_string(digits)}, {"im", z.im().to_string(digits)}};
}

Json mat_json(const GLMatModN& m) { return Json::array({Json::array({m.a(), m.b()}), Json::array({m.c(), m.d()})}); }

Json int_mat_json(const IntMat2& m)
{
    return Json::array({Json::array({m.a.get_str(), m.b.get_str()}), Json::array({m.c.get_str(), m.d.get_str()})});
}

Json index_json(const SiegelIndex& r) { return Json::array({r.r1().get_str(), r.r2().get_str()}); }

Json family_json(const IndexFamily& fam)
{
    Json out = Json::array();
    for (const auto& [r, e] : fam.exponents) out.push_back(Json{{"index", index_json(r)}, {"exponent", e}});
    return out;
}

Json form_json(const ReducedForm& q) { return Json::array({q.a, q.b, q.c}); }

std::int64_t need(const JobConfig& cfg, const std::string& key)
{
    auto it = cfg.ints.find(key);
    if (it == cfg.ints.end()) throw Error(ErrorKind::InvalidArgument, cfg.command + " needs --" + key);
    return it->second;
}

std::int64_t get_or(const JobConfig& cfg, const std::string& key, std::int64_t dflt)
{
    auto it = cfg.ints.find(key);
    return it == cfg.ints.end() ? dflt : it->second;
}

Json degree_json(const DegreeData& dd)
{
    return Json{{"phi_ideal", dd.phi_ideal.get_str()},
                {"w_nok", dd.w_nok},
                {"ray_over_hilbert", dd.ray_over_hilbert.get_str()},
                {"ring_over_hilbert", dd.ring_over_hilbert.get_str()},
                {"ring_over_k", dd.ring_over_k.get_str()},
                {"w_nok_assumed", dd.w_nok_assumed}};
}

void check_conductor(std::int64_t n)
{
    if (n < 2 || n > 100000) throw Error(ErrorKind::InvalidArgument, "N must lie in [2, 100000]");
}

ComputeResult cmd_forms(const JobConfig& cfg)
{
    ComputeResult res;
    ImQuadField f = make_field(need(cfg, "dk"));
    const int digits = digits_for(cfg.precision);
    std::optional<std::int64_t> n;
    if (cfg.ints.count("N")) {
        n = need(cfg, "N");
        check_conductor(*n);
    }
    Json forms = Json::array();
    for (const auto& q : reduced_forms(f)) {
        Json j{{"form", form_json(q)}, {"cm_point", complex_json(cm_point(q, cfg.precision), digits)}};
        if (n) j["beta"] = mat_json(beta_q(q, f, *n));
        forms.push_back(j);
    }
    res.outputs = Json{{"d_k", f.d_k}, {"b_theta", f.b_theta}, {"c_theta", f.c_theta},
                       {"class_number", f.class_number}, {"forms", forms}};
    if (n) {
        DegreeData dd = degree_data(f, *n);
        res.outputs["degrees"] = degree_json(dd);
        if (dd.w_nok_assumed) res.warnings.push_back("w(2 O_K) = 2 is a convention at N = 2");
        Json cosets = Json::array();
        for (const auto& w : w_cosets_ring(f, *n)) cosets.push_back(mat_json(w.matrix));
        res.outputs["ring_cosets"] = cosets;
    }
    res.precision_used = cfg.precision;
    return res;
}

ComputeResult cmd_minpoly(const JobConfig& cfg)
{
    ComputeResult res;
    ImQuadField f = make_field(need(cfg, "dk"));
    const std::int64_t n = need(cfg, "N");
    check_conductor(n);
    const long power = static_cast<long>(get_or(cfg, "power", 1));
    if (!conductor_condition_holds(f.d_k, n)) {
        if (!cfg.force) {
            std::string msg = "N = " + std::to_string(n) + " is outside the conductor bound for d_K = " + std::to_string(f.d_k);
            throw Error(ErrorKind::ConditionViolated, msg + "; rerun with --force to compute anyway");
        }
        res.warnings.push_back("conductor bound violated; computed under --force, so the result is not covered by the generation theorem");
    }
    InvariantReport rep = minimal_polynomial(f, n, default_base_family(n, power), cfg.precision, cfg.threads);
    const int digits = digits_for(cfg.precision);
    Json coeffs = Json::array();
    for (const auto& c : rep.polynomial.coeffs) coeffs.push_back(c.get_str());
    Json conj = Json::array();
    for (size_t i = 0; i < rep.specs.size(); ++i) {
        const auto& s = rep.specs[i];
        conj.push_back(Json{{"form", form_json(s.form)},
                            {"gamma", mat_json(s.gamma)},
                            {"action", mat_json(s.action)},
                            {"indices", family_json(s.family)},
                            {"value", complex_json(rep.conjugates[i], digits)}});
    }
    if (Integer(rep.polynomial.degree()) != rep.expected_degree)
        res.warnings.push_back("polynomial degree differs from [H_O : K]");
    if (!rep.square_free) res.warnings.push_back("polynomial is not square-free; conjugates repeat");
    res.outputs = Json{{"d_k", f.d_k},
                       {"N", n},
                       {"base_family", family_json(default_base_family(n, power))},
                       {"degree", rep.polynomial.degree()},
                       {"expected_degree", rep.expected_degree.get_str()},
                       {"coefficients", coeffs},
                       {"max_residual", real_json(rep.polynomial.max_residual, 6)},
                       {"max_imag", real_json(rep.polynomial.max_imag, 6)},
                       {"max_root_residual", real_json(rep.max_root_residual, 6)},
                       {"retries", rep.retries},
                       {"is_unit", rep.is_unit},
                       {"square_free", rep.square_free},
                       {"value", complex_json(rep.value, digits)},
                       {"imag_ratio", real_json(rep.imag_ratio, 6)},
                       {"conjugates", conj}};
    res.precision_used = rep.polynomial.precision_used;
    return res;
}

ComputeResult cmd_bound(const JobConfig& cfg)
{
    ComputeResult res;
    const std::int64_t d = need(cfg, "dk");
    if (!is_fundamental_discriminant(d) || d >= 0)
        throw Error(ErrorKind::NotFundamental, std::to_string(d) + " is not a negative fundamental discriminant");
    Integer b = bound_max_conductor(d, cfg.precision);
    res.outputs = Json{{"d_k", d}, {"max_conductor", b.get_str()}, {"admits_N_ge_2", b >= 2}};
    res.precision_used = std::max<Bits>(cfg.precision, 128);
    return res;
}

ComputeResult cmd_normal_basis(const JobConfig& cfg)
{
    ComputeResult res;
    ImQuadField f = make_field(need(cfg, "dk"));
    const std::int64_t n = need(cfg, "N");
    check_conductor(n);
    NormalBasisReport rep = normal_basis_certificate(f, n, cfg.precision, cfg.threads);
    Json conj = Json::array();
    for (size_t i = 0; i < rep.specs.size(); ++i) {
        Json j{{"form", form_json(rep.specs[i].form)},
               {"gamma", mat_json(rep.specs[i].gamma)},
               {"inverse_magnitude", real_json(rep.magnitudes[i], 20)}};
        if (i > 0) j["ratio"] = real_json(rep.ratios[i - 1], 20);
        conj.push_back(j);
    }
    res.outputs = Json{{"d_k", f.d_k},
                       {"N", n},
                       {"conjugates", conj},
                       {"max_ratio", real_json(rep.max_ratio, 20)},
                       {"margin", real_json(rep.margin, 20)},
                       {"exponent", rep.exponent ? Json(*rep.exponent) : Json("unbounded")}};
    res.precision_used = cfg.precision;
    return res;
}

ComputeResult cmd_delta(const JobConfig& cfg)
{
    ComputeResult res;
    ImQuadField f = make_field(need(cfg, "dk"));
    const std::int64_t p = need(cfg, "p");
    const int ell = static_cast<int>(need(cfg, "l"));
    const int digits = digits_for(cfg.precision);
    BigComplex value = delta_ring_class_invariant(f, p, ell, cfg.precision);
    DeltaConsistency dc = delta_consistency(f, p, ell, cfg.precision);
    res.outputs = Json{{"d_k", f.d_k},
                       {"p", p},
                       {"l", ell},
                       {"kronecker", kronecker(f.d_k, p)},
                       {"value", complex_json(value, digits)},
                       {"consistency",
                        Json{{"siegel_side", complex_json(dc.siegel_side, digits)},
                             {"delta_side", complex_json(dc.delta_side, digits)},
                             {"relative_error", real_json(dc.relative_error, 6)}}}};
    res.precision_used = cfg.precision;
    return res;
}

ComputeResult cmd_ray(const JobConfig& cfg)
{
    ComputeResult res;
    GammaParams gp;
    gp.field = make_field(need(cfg, "dk"));
    gp.p = need(cfg, "p");
    gp.m = need(cfg, "m");
    validate(gp);
    const int digits = digits_for(cfg.precision);
    auto gens = gamma_generators(gp);
    auto elements = gamma_enumeration(gp);
    std::set<GLMatModN> distinct(elements.begin(), elements.end());
    bool closed_form = true;
    for (std::int64_t k = 0; k < gp.p; ++k)
        for (std::int64_t l = 0; l < gp.p; ++l)
            closed_form = closed_form && elements[static_cast<size_t>(k * gp.p + l)] == gamma_element(gp, k, l);

    const auto labels = fixed_field_labels(gp.p);
    Json table = Json::array();
    for (const auto& lab : labels) {
        FixedFieldSolution sol = fixed_field_solution(lab, gp);
        Json moved = Json::array();
        for (const auto& other : labels) {
            if (other == lab) continue;
            if (gamma_action_exponent(other, sol.x, sol.y, gp) != 0) moved.push_back(other.to_string());
        }
        NormalBasisValue v = normal_basis_value(lab, gp, cfg.precision);
        table.push_back(Json{{"label", lab.to_string()},
                             {"x", sol.x.get_str()},
                             {"y", sol.y.get_str()},
                             {"y_mod_p", sol.y_mod_p},
                             {"own_exponent_change", gamma_action_exponent(lab, sol.x, sol.y, gp)},
                             {"moved_by", moved},
                             {"value", complex_json(v.value, digits)}});
    }
    NormalBasisValue full = normal_basis_value_full(gp, cfg.precision);
    res.outputs = Json{{"d_k", gp.field.d_k},
                       {"p", gp.p},
                       {"m", gp.m},
                       {"modulus", gp.modulus()},
                       {"alpha", mat_json(gens.alpha)},
                       {"beta", mat_json(gens.beta)},
                       {"gamma_order", distinct.size()},
                       {"closed_form_matches", closed_form},
                       {"solutions", table},
                       {"full_product", complex_json(full.value, digits)}};
    res.precision_used = cfg.precision;
    return res;
}

ComputeResult cmd_hensel(const JobConfig& cfg)
{
    ComputeResult res;
    ImQuadField f = make_field(need(cfg, "dk"));
    HenselParams hp{need(cfg, "p"), need(cfg, "m"), need(cfg, "n"), need(cfg, "l")};
    HenselResult hr = hensel_beta0(hp, f);
    Json steps = Json::array();
    for (const auto& s : hr.steps)
        steps.push_back(Json{{"k", s.k}, {"identity_mod", s.congruent_to_identity}, {"lower_left_unit", s.lower_left_unit}, {"ok", s.ok}});
    GThetaProduct g = g_theta_product(hp, f, cfg.precision);
    const int digits = digits_for(cfg.precision);
    Json orbit = Json::array();
    for (const auto& r : g.orbit) orbit.push_back(index_json(r));
    res.outputs = Json{{"d_k", f.d_k},
                       {"p", hp.p},
                       {"m", hp.m},
                       {"n", hp.n},
                       {"l", hp.ell},
                       {"x0", hr.x0.get_str()},
                       {"root_modulus", hr.root_modulus.get_str()},
                       {"derivative_unit", hr.derivative_unit},
                       {"target", int_mat_json(hr.target)},
                       {"target_modulus", hr.target_modulus.get_str()},
                       {"beta0", int_mat_json(hr.beta0)},
                       {"det", hr.beta0.det().get_str()},
                       {"steps", steps},
                       {"certified", hr.ok},
                       {"g_theta",
                        Json{{"orbit", orbit},
                             {"value", complex_json(g.value, digits)},
                             {"ratio", complex_json(g.ratio, digits)},
                             {"c", g.c.get_str()},
                             {"root_order", g.root_order},
                             {"ratio_error", real_json(g.ratio_error, 6)},
                             {"power_error", real_json(g.power_error, 6)},
                             {"certified", g.certified}}}};
    res.precision_used = cfg.precision;
    return res;
}

ComputeResult cmd_verify(const JobConfig& cfg)
{
    ComputeResult res;
    const std::string suite = cfg.suite.empty() ? "all" : cfg.suite;
    auto checks = run_verify_suite(suite, cfg.precision);
    Json list = Json::array();
    bool all_pass = true;
    for (const auto& c : checks) {
        list.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        all_pass = all_pass && c.pass;
    }
    res.outputs = Json{{"suite", suite}, {"checks", list}, {"passed", all_pass}};
    res.verify_failed = !all_pass;
    res.precision_used = cfg.precision;
    return res;
}

std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

Json inputs_json(const JobConfig& cfg)
{
    Json in = Json::object();
    for (const auto& [k, v] : cfg.ints) in[k] = v;
    if (cfg.command == "verify") in["suite"] = cfg.suite.empty() ? "all" : cfg.suite;
    if (cfg.command == "minpoly") in["force"] = cfg.force;
    return in;
}

bool cacheable(const JobConfig& cfg) { return cfg.cache_dir && cfg.command != "verify"; }

std::optional<ComputeResult> cache_load(const JobConfig& cfg)
{
    fs::path file = fs::path(*cfg.cache_dir) / (cache_key(cfg) + ".json");
    std::ifstream in(file);
    if (!in) return std::nullopt;
    try {
        Json j = Json::parse(in);
        ComputeResult r;
        r.outputs = j.at("outputs");
        r.warnings = j.at("warnings").get<std::vector<std::string>>();
        r.precision_used = j.at("precision_used").get<Bits>();
        return r;
    } catch (const std::exception&) {
        return std::nullopt;  // unreadable entries are recomputed
    }
}

void cache_store(const JobConfig& cfg, const ComputeResult& r, std::vector<std::string>& warnings)
{
    std::error_code ec;
    fs::create_directories(*cfg.cache_dir, ec);
    fs::path file = fs::path(*cfg.cache_dir) / (cache_key(cfg) + ".json");
    fs::path tmp = file;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) {
            warnings.push_back("cache directory not writable: " + *cfg.cache_dir);
            return;
        }
        out << Json{{"outputs", r.outputs}, {"warnings", r.warnings}, {"precision_used", r.precision_used}}.dump();
    }
    fs::rename(tmp, file, ec);
    if (ec) warnings.push_back("cache write failed: " + ec.message());
}

} // namespace

std::string cache_key(const JobConfig& cfg)
{
    Json k{{"command", cfg.command}, {"inputs", inputs_json(cfg)}, {"precision", cfg.precision}, {"version", CMFIELD_VERSION}};
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(k.dump())));
    return buf;
}

ComputeResult compute_outputs(const JobConfig& cfg)
{
    if (cfg.precision < kMinPrecision || cfg.precision > kMaxPrecision)
        throw Error(ErrorKind::InvalidArgument, "precision must lie in [64, 1048576] bits");
    if (cfg.command == "forms") return cmd_forms(cfg);
    if (cfg.command == "minpoly") return cmd_minpoly(cfg);
    if (cfg.command == "bound") return cmd_bound(cfg);
    if (cfg.command == "normal-basis") return cmd_normal_basis(cfg);
    if (cfg.command == "delta") return cmd_delta(cfg);
    if (cfg.command == "ray") return cmd_ray(cfg);
    if (cfg.command == "hensel") return cmd_hensel(cfg);
    if (cfg.command == "verify") return cmd_verify(cfg);
    throw Error(ErrorKind::InvalidArgument, "unknown command '" + cfg.command + "'");
}

JobResult run_job(const JobConfig& cfg)
{
    const auto t0 = std::chrono::steady_clock::now();
    JobResult jr;
    Json env{{"schema_version", kSchemaVersion}, {"command", cfg.command}, {"inputs", inputs_json(cfg)}};
    ComputeResult r;
    bool cached = false;
    std::vector<std::string> extra;
    try {
        std::optional<ComputeResult> hit;
        if (cacheable(cfg) && cfg.precision >= kMinPrecision && cfg.precision <= kMaxPrecision) hit = cache_load(cfg);
        if (hit) {
            r = std::move(*hit);
            cached = true;
        } else {
            r = compute_outputs(cfg);
            if (cacheable(cfg)) cache_store(cfg, r, extra);
        }
        jr.exit_code = r.verify_failed ? 1 : 0;
        env["outputs"] = r.outputs;
    } catch (const Error& e) {
        jr.exit_code = exit_code_for(e.kind());
        env["outputs"] = Json::object();
        env["error"] = Json{{"kind", to_string(e.kind())}, {"message", e.what()}};
    } catch (const std::exception& e) {
        jr.exit_code = 2;
        env["outputs"] = Json::object();
        env["error"] = Json{{"kind", "InvalidArgument"}, {"message", e.what()}};
    }
    const auto t1 = std::chrono::steady_clock::now();
    env["timing_ms"] = std::chrono::duration<double, std::milli>(t1 - t0).count();
    env["precision_used"] = r.precision_used ? r.precision_used : cfg.precision;
    std::vector<std::string> warnings = r.warnings;
    warnings.insert(warnings.end(), extra.begin(), extra.end());
    env["warnings"] = warnings;
    env["cached"] = cached;
    jr.envelope = std::move(env);
    return jr;
}

namespace {

void render(std::ostringstream& os, const std::string& key, const Json& v, int indent)
{
    const std::string pad(static_cast<size_t>(indent), ' ');
    if (v.is_object()) {
        os << pad << key << ":\n";
        for (const auto& [k, x] : v.items()) render(os, k, x, indent + 2);
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
        os << pad << key << ":\n";
        size_t i = 0;
        for (const auto& x : v) render(os, "[" + std::to_string(i++) + "]", x, indent + 2);
    } else if (v.is_string()) {
        os << pad << key << ": " << v.get<std::string>() << "\n";
    } else {
        os << pad << key << ": " << v.dump() << "\n";
    }
}

} // namespace

std::string render_text(const Json& envelope)
{
    std::ostringstream os;
    os << envelope.value("command", "") << " (schema " << envelope.value("schema_version", "") << ")\n";
    if (envelope.contains("error"))
        os << "error: " << envelope["error"].value("message", "") << "\n";
    for (const auto& [k, v] : envelope.at("outputs").items()) render(os, k, v, 0);
    for (const auto& w : envelope.value("warnings", std::vector<std::string>{})) os << "warning: " << w << "\n";
    os << "precision_used: " << envelope.value("precision_used", 0L) << " bits, " << envelope.value("timing_ms", 0.0)
       << " ms" << (envelope.value("cached", false) ? " (cached)" : "") << "\n";
    return os.str();
}

} // namespace cmf
