#include "cmfield/invariants.hpp"

#include "cmfield/errors.hpp"
#include "cmfield/parallel.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace cmf {

BigReal rounding_tolerance() { return BigReal::parse("1e-8", 128); }

IndexFamily default_base_family(std::int64_t n, long power)
{
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "conductor N must be at least 2");
    if (power == 0) throw Error(ErrorKind::InvalidArgument, "power must be nonzero");
    IndexFamily fam;
    fam.level = n;
    const long e = canonical_exponent(n) * power;
    for (std::int64_t w = 1; 2 * w <= n; ++w)
        if (std::gcd(w, n) == 1) fam.add(SiegelIndex::from_fraction(0, w, n), e);
    return fam;
}

namespace {

void require_condition(const ImQuadField& field, std::int64_t n)
{
    if (conductor_condition_holds(field.d_k, n)) return;
    std::string msg = "N = " + std::to_string(n) + " violates the conductor bound for d_K = " + std::to_string(field.d_k);
    if (field.d_k <= -43) msg += " (bound " + bound_max_conductor(field.d_k).get_str() + ")";
    throw Error(ErrorKind::ConditionViolated, msg);
}

BigComplex value_at_form(const IndexFamily& fam, const ReducedForm& form, Bits prec)
{
    EvalContext ctx = make_context(cm_point(form, prec + 32), prec);
    return family_value(fam, ctx);
}

} // namespace

BigComplex ring_class_invariant(const ImQuadField& field, std::int64_t n, Bits prec, bool force, long power)
{
    if (!force) require_condition(field, n);
    return value_at_form(default_base_family(n, power), principal_form(field), prec);
}

std::vector<BigComplex> evaluate_conjugates(const std::vector<ConjugateSpec>& specs, Bits prec, unsigned threads)
{
    std::vector<BigComplex> out(specs.size(), BigComplex(prec));
    parallel_for(specs.size(), threads, [&](std::size_t i) { out[i] = value_at_form(specs[i].family, specs[i].form, prec); });
    return out;
}

IntPolynomial polynomial_from_conjugates(const std::vector<BigComplex>& roots, const BigReal& tol)
{
    if (roots.empty()) throw Error(ErrorKind::InvalidArgument, "no conjugates");
    Bits prec = 64;
    for (const auto& r : roots) prec = std::max(prec, r.precision());
    std::vector<BigComplex> c{BigComplex(1L, prec)};
    for (const auto& x : roots) {
        std::vector<BigComplex> next(c.size() + 1, BigComplex(0L, prec));
        for (size_t k = 0; k < c.size(); ++k) {
            next[k + 1] = next[k + 1] + c[k];
            next[k] = next[k] - x * c[k];
        }
        c = std::move(next);
    }
    IntPolynomial p;
    p.precision_used = prec;
    p.max_residual = BigReal(0L, prec);
    p.max_imag = BigReal(0L, prec);
    for (size_t k = 0; k < c.size(); ++k) {
        BigReal im = abs(c[k].im());
        p.max_imag = max(p.max_imag, im);
        if (im > tol)
            throw Error(ErrorKind::AmbiguousRounding,
                        "coefficient of X^" + std::to_string(k) + " has imaginary part " + im.to_string(6));
        RoundResult r = round_to_integer(c[k].re(), tol);
        p.max_residual = max(p.max_residual, r.residual);
        p.coeffs.push_back(r.value);
    }
    return p;
}

BigComplex evaluate(const IntPolynomial& p, const BigComplex& x)
{
    const Bits prec = x.precision();
    BigComplex acc(0L, prec);
    for (size_t k = p.coeffs.size(); k-- > 0;) acc = acc * x + BigComplex(BigReal(p.coeffs[k], prec));
    return acc;
}

bool unit_check(const IntPolynomial& p)
{
    return !p.coeffs.empty() && (p.coeffs.front() == 1 || p.coeffs.front() == -1);
}

namespace {

using QPoly = std::vector<Rational>;

void trim(QPoly& f)
{
    while (!f.empty() && f.back() == 0) f.pop_back();
}

QPoly poly_rem(QPoly f, const QPoly& g)
{
    trim(f);
    while (f.size() >= g.size() && !f.empty()) {
        Rational q = f.back() / g.back();
        const size_t shift = f.size() - g.size();
        for (size_t i = 0; i < g.size(); ++i) f[shift + i] -= q * g[i];
        trim(f);
    }
    return f;
}

} // namespace

bool is_square_free(const IntPolynomial& p)
{
    if (p.degree() <= 1) return true;
    QPoly f, g;
    for (const auto& c : p.coeffs) f.emplace_back(c);
    for (size_t k = 1; k < p.coeffs.size(); ++k) g.emplace_back(Integer(p.coeffs[k] * static_cast<long>(k)));
    trim(f);
    trim(g);
    while (!g.empty()) {
        QPoly r = poly_rem(f, g);
        f = std::move(g);
        g = std::move(r);
    }
    return f.size() == 1;
}

InvariantReport minimal_polynomial(const ImQuadField& field, std::int64_t n, const IndexFamily& base, Bits prec,
                                   unsigned threads)
{
    InvariantReport rep;
    rep.specs = conjugate_specs(field, n, base);
    rep.expected_degree = degree_data(field, n).ring_over_k;
    const BigReal tol = rounding_tolerance();
    Bits wp = std::max(prec, kMinPrecision);
    for (int attempt = 0;; ++attempt, wp *= 2) {
        rep.conjugates = evaluate_conjugates(rep.specs, wp, threads);
        try {
            rep.polynomial = polynomial_from_conjugates(rep.conjugates, tol);
            rep.retries = attempt;
            break;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::AmbiguousRounding) throw;
            if (attempt == 3)
                throw Error(ErrorKind::RoundingFailed,
                            std::string("coefficients not within rounding tolerance at ") + std::to_string(wp) +
                                " bits: " + e.what());
        }
    }
    rep.value = rep.conjugates.front();
    rep.is_unit = unit_check(rep.polynomial);
    rep.square_free = is_square_free(rep.polynomial);
    BigReal mag = abs(rep.value);
    rep.imag_ratio = mag.is_zero() ? BigReal(0L, 64) : abs(rep.value.im()) / mag;
    rep.max_root_residual = BigReal(0L, wp);
    const long deg = rep.polynomial.degree();
    for (const auto& x : rep.conjugates) {
        BigReal scale = pow(BigReal(1L, wp) + abs(x), BigReal(deg, wp));
        rep.max_root_residual = max(rep.max_root_residual, abs(evaluate(rep.polynomial, x)) / scale);
    }
    return rep;
}

namespace {

std::int64_t ipow(std::int64_t p, int e)
{
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r *= p;
    return r;
}

void check_prime_power(std::int64_t p, int ell)
{
    if (!is_prime(p)) throw Error(ErrorKind::InvalidArgument, std::to_string(p) + " is not prime");
    if (ell < 1) throw Error(ErrorKind::InvalidArgument, "exponent l must be at least 1");
    double bits = static_cast<double>(ell) * std::log2(static_cast<double>(p));
    if (bits > 20) throw Error(ErrorKind::InvalidArgument, "p^l is too large");
}

// dq(p^l) / dq(p^(l-1)) with dq(M) = M^12 Delta(M tau) / Delta(tau).
BigComplex delta_ratio(std::int64_t p, int ell, const EvalContext& ctx)
{
    return delta_quotient(ipow(p, ell), ctx) / delta_quotient(ipow(p, ell - 1), ctx);
}

} // namespace

BigComplex delta_ring_class_invariant(const ImQuadField& field, std::int64_t p, int ell, Bits prec)
{
    check_prime_power(p, ell);
    if (kronecker(field.d_k, p) == 1)
        throw Error(ErrorKind::SplitPrime, std::to_string(p) + " splits in Q(sqrt(" + std::to_string(field.d_k) + "))");
    EvalContext ctx = make_context(theta(field, prec + 64), prec + 32);
    return delta_ratio(p, ell, ctx).with_precision(prec);
}

DeltaConsistency delta_consistency(const ImQuadField& field, std::int64_t p, int ell, Bits prec)
{
    check_prime_power(p, ell);
    const std::int64_t pl = ipow(p, ell);
    const Bits wp = prec + 32 + static_cast<Bits>(std::log2(static_cast<double>(pl))) * 2;
    EvalContext ctx = make_context(theta(field, wp + 32), wp);
    DeltaConsistency out;
    out.siegel_side = BigComplex(1L, wp);
    for (std::int64_t w = 1; w < pl; ++w)
        if (w % p != 0) out.siegel_side = out.siegel_side * siegel_power(SiegelIndex::from_fraction(0, w, pl), 12 * pl, ctx);
    out.quotient = delta_ratio(p, ell, ctx);
    out.delta_side = pow(out.quotient, static_cast<long>(pl));
    out.relative_error = relative_error(out.siegel_side, out.delta_side).with_precision(64);
    out.siegel_side = out.siegel_side.with_precision(prec);
    out.delta_side = out.delta_side.with_precision(prec);
    out.quotient = out.quotient.with_precision(prec);
    return out;
}

BigComplex siegel_ramachandra_unit_class(const ImQuadField& field, std::int64_t n, Bits prec)
{
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "conductor N must be at least 2");
    EvalContext ctx = make_context(theta(field, prec + 32), prec);
    return siegel_power(SiegelIndex::from_fraction(0, 1, n), 12 * static_cast<long>(n), ctx);
}

NormalBasisReport normal_basis_certificate(const ImQuadField& field, std::int64_t n, Bits prec, unsigned threads)
{
    require_condition(field, n);
    NormalBasisReport rep;
    rep.specs = conjugate_specs(field, n, default_base_family(n));
    const auto xs = evaluate_conjugates(rep.specs, prec, threads);
    const BigReal one(1L, prec);
    for (const auto& x : xs) {
        BigReal a = abs(x);
        if (a.is_zero()) throw Error(ErrorKind::PrecisionExhausted, "conjugate evaluated to zero");
        rep.magnitudes.push_back(one / a);
    }
    rep.max_ratio = BigReal(0L, prec);
    for (size_t k = 1; k < rep.magnitudes.size(); ++k) {
        rep.ratios.push_back(rep.magnitudes[k] / rep.magnitudes[0]);
        rep.max_ratio = max(rep.max_ratio, rep.ratios.back());
    }
    rep.margin = one - rep.max_ratio;
    if (rep.max_ratio >= one)
        throw Error(ErrorKind::RatioViolation,
                    "a nontrivial conjugate ratio is " + rep.max_ratio.to_string(12) + " >= 1");
    rep.exponent = ratio_power_exponent(rep.magnitudes);
    return rep;
}

} // namespace cmf
