#include "cmfield/rayclass.hpp"

#include "cmfield/errors.hpp"
#include "cmfield/galois.hpp"

#include <cmath>
#include <numeric>

namespace cmf {

namespace {

constexpr std::int64_t kMaxModulus = std::int64_t{1} << 31;

Integer ipow(std::int64_t p, std::int64_t e)
{
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
    return r;
}

std::int64_t to_i64(const Integer& x)
{
    if (!x.fits_slong_p()) throw Error(ErrorKind::Range, "value exceeds 64 bits: " + x.get_str());
    return x.get_si();
}

// Inverse mod p normalized into (0, p).
Integer inv_p(std::int64_t x, std::int64_t p) { return Integer(static_cast<long>(inverse_mod(x, p))); }

} // namespace

void validate(const GammaParams& gp)
{
    if (gp.p < 5 || !is_prime(gp.p)) throw Error(ErrorKind::InvalidArgument, "p must be a prime >= 5");
    if (gp.m < 1 || std::gcd(gp.p, gp.m) != 1) throw Error(ErrorKind::InvalidArgument, "m must be positive and prime to p");
    if (Integer(static_cast<long>(gp.p)) * gp.p * gp.m >= kMaxModulus)
        throw Error(ErrorKind::InvalidArgument, "p^2 m is too large");
}

GammaGenerators gamma_generators(const GammaParams& gp)
{
    validate(gp);
    return {gamma_element(gp, 1, 0), gamma_element(gp, 0, 1)};
}

GLMatModN gamma_element(const GammaParams& gp, std::int64_t k, std::int64_t l)
{
    validate(gp);
    const std::int64_t big = gp.modulus();
    const std::int64_t pm = gp.p * gp.m;
    const std::int64_t b = gp.field.b_theta, c = gp.field.c_theta;
    return {mod((k - b * l) * pm + 1, big), mod(-c * l * pm, big), mod(l * pm, big), mod(k * pm + 1, big), big};
}

std::vector<GLMatModN> gamma_enumeration(const GammaParams& gp)
{
    const auto gens = gamma_generators(gp);
    std::vector<GLMatModN> out;
    GLMatModN ak = GLMatModN::identity(gp.modulus());
    for (std::int64_t k = 0; k < gp.p; ++k) {
        GLMatModN x = ak;
        for (std::int64_t l = 0; l < gp.p; ++l) {
            out.push_back(x);
            x = x * gens.beta;
        }
        ak = ak * gens.alpha;
    }
    return out;
}

std::vector<FixedFieldLabel> fixed_field_labels(std::int64_t p)
{
    std::vector<FixedFieldLabel> out{{0, 1}, {1, 0}};
    for (std::int64_t l = 1; l < p; ++l) out.push_back({1, l});
    return out;
}

FixedFieldSolution fixed_field_solution(const FixedFieldLabel& label, const GammaParams& gp)
{
    validate(gp);
    const std::int64_t p = gp.p;
    const std::int64_t b = gp.field.b_theta;
    const Integer m = static_cast<long>(gp.m);
    FixedFieldSolution s;
    if (label.k == 0 && label.l == 1) {
        s.x = 1;
        s.y = m * inv_p(6, p) * (p - b);
    } else if (label.k == 1 && label.l == 0) {
        s.x = 0;
        s.y = 1;
    } else if (label.k == 1 && label.l > 0 && label.l < p) {
        s.x = 1;
        s.y = m * inv_p(6 * label.l, p) * (2 + p - b * label.l);
    } else {
        throw Error(ErrorKind::InvalidArgument, "not a subgroup label: " + label.to_string());
    }
    s.y_mod_p = mod(s.y, p);
    return s;
}

std::int64_t gamma_action_exponent(const FixedFieldLabel& label, const Integer& x, const Integer& y,
                                   const GammaParams& gp)
{
    const std::int64_t p = gp.p;
    const std::int64_t p2 = p * p;
    const Integer pm = static_cast<long>(gp.p * gp.m);
    const Integer det_shift = Integer(static_cast<long>(2 * label.k - gp.field.b_theta * label.l)) * pm;
    Integer change = (1 + det_shift) * x - 6 * Integer(static_cast<long>(p * label.l)) * y - x;
    return mod(change, p2);
}

namespace {

BigComplex geometric_sum(const BigComplex& z, long terms)
{
    BigComplex acc(0L, z.precision()), zs(1L, z.precision());
    for (long s = 0; s < terms; ++s) {
        acc = acc + zs;
        zs = zs * z;
    }
    return acc;
}

// g^{12m}_{(0, 1/pm)}(theta) at the working precision of ctx.
BigComplex base_unit(const GammaParams& gp, const EvalContext& ctx, long extra_power)
{
    return siegel_power(SiegelIndex::from_fraction(0, 1, gp.p * gp.m), 12 * gp.m * extra_power, ctx);
}

} // namespace

NormalBasisValue normal_basis_value(const FixedFieldLabel& label, const GammaParams& gp, Bits prec)
{
    NormalBasisValue out;
    out.label = label;
    out.solution = fixed_field_solution(label, gp);
    out.terms = gp.p;
    const long y = to_i64(out.solution.y);
    const Bits wp = prec + 32 + static_cast<Bits>(std::log2(static_cast<double>(12 * gp.m * (y + 1) * gp.p)));
    EvalContext ctx = make_context(theta(gp.field, wp + 16), wp);
    BigComplex z = root_of_unity(gp.p * gp.p, mod(out.solution.x, gp.p * gp.p), wp);
    if (y != 0) z = z * base_unit(gp, ctx, y);
    out.value = geometric_sum(z, gp.p).with_precision(prec);
    return out;
}

NormalBasisValue normal_basis_value_full(const GammaParams& gp, Bits prec)
{
    validate(gp);
    NormalBasisValue out;
    out.full = true;
    out.terms = gp.p;
    const Bits wp = prec + 32 + static_cast<Bits>(std::log2(static_cast<double>(12 * gp.m * gp.p)));
    EvalContext ctx = make_context(theta(gp.field, wp + 16), wp);
    BigComplex zeta_sum = geometric_sum(root_of_unity(gp.p * gp.p, 1, wp), gp.p);
    BigComplex g_sum = geometric_sum(base_unit(gp, ctx, 1), gp.p);
    out.value = (zeta_sum * g_sum).with_precision(prec);
    return out;
}

void validate(const HenselParams& hp)
{
    if (hp.p < 5 || !is_prime(hp.p)) throw Error(ErrorKind::InvalidArgument, "p must be a prime >= 5");
    if (hp.m < 1 || std::gcd(hp.p, hp.m) != 1) throw Error(ErrorKind::InvalidArgument, "m must be positive and prime to p");
    if (hp.ell < 1 || hp.n < 2 * hp.ell) throw Error(ErrorKind::InvalidArgument, "need n >= 2l >= 2");
    if (ipow(hp.p, 2 * (hp.n - hp.ell)) * hp.m >= kMaxModulus)
        throw Error(ErrorKind::InvalidArgument, "p^{2(n-l)} m is too large");
}

Integer hensel_polynomial(const HenselParams& hp, const ImQuadField& field, const Integer& x)
{
    const Integer pl = ipow(hp.p, hp.ell);
    const Integer m = static_cast<long>(hp.m);
    const Integer b = static_cast<long>(field.b_theta), c = static_cast<long>(field.c_theta);
    return pl * m * m * x * x + (2 * m - b * pl * m * m) * x + c * pl * m * m - b * m;
}

HenselResult hensel_beta0(const HenselParams& hp, const ImQuadField& field)
{
    validate(hp);
    const std::int64_t p = hp.p;
    const Integer P = static_cast<long>(p);
    const Integer pl = ipow(p, hp.ell);
    const Integer m = static_cast<long>(hp.m);
    const Integer b = static_cast<long>(field.b_theta), c = static_cast<long>(field.c_theta);
    HenselResult res;
    res.root_modulus = ipow(p, 2 * (hp.n - hp.ell) - hp.ell);

    auto fprime = [&](const Integer& x) -> Integer { return 2 * pl * m * m * x + 2 * m - b * pl * m * m; };

    // Mod p, f(x) = m (2x - B).
    Integer x;
    bool found = false;
    for (std::int64_t r = 0; r < p && !found; ++r) {
        if (mod(hensel_polynomial(hp, field, Integer(static_cast<long>(r))), p) == 0) {
            x = static_cast<long>(r);
            found = true;
        }
    }
    if (!found) throw Error(ErrorKind::NoRoot, "f(x) = 0 mod p has no solution");
    res.derivative_unit = mod(fprime(x), p) != 0;
    if (!res.derivative_unit) throw Error(ErrorKind::NoRoot, "f'(x0) vanishes mod p; Hensel lifting does not apply");

    // Quadratic Newton steps x <- x - f(x) / f'(x) mod p^{2^j}.
    Integer modulus = P;
    while (modulus < res.root_modulus) {
        modulus = modulus * modulus;
        Integer inv;
        Integer fp = fprime(x);
        mpz_invert(inv.get_mpz_t(), fp.get_mpz_t(), modulus.get_mpz_t());
        x = x - hensel_polynomial(hp, field, x) * inv;
        mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), modulus.get_mpz_t());
    }
    mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), res.root_modulus.get_mpz_t());
    res.x0 = x;

    const Integer plm = pl * m;
    res.target_modulus = ipow(p, 2 * (hp.n - hp.ell)) * m;
    IntMat2 raw{1 + plm * x - b * plm, -c * plm, plm, 1 + plm * x};
    auto red = [&](const Integer& v) {
        Integer r;
        mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), res.target_modulus.get_mpz_t());
        return r;
    };
    res.target = {red(raw.a), red(raw.b), red(raw.c), red(raw.d)};
    res.beta0 = sl2_lift(res.target, to_i64(res.target_modulus));

    res.ok = res.beta0.det() == 1;
    const std::int64_t k_max = 2 * (hp.n - hp.ell) - hp.ell;
    for (std::int64_t k = 0; k <= k_max; ++k) {
        HenselStep step;
        step.k = k;
        const Integer level = ipow(p, hp.ell + k) * m;
        const Integer work = level * P;
        // beta_0^{p^k} mod p^{l+k+1} m, by repeated p-th powers.
        IntMat2 acc = res.beta0;
        auto reduce = [&](IntMat2& a) {
            for (Integer* e : {&a.a, &a.b, &a.c, &a.d}) mpz_fdiv_r(e->get_mpz_t(), e->get_mpz_t(), work.get_mpz_t());
        };
        reduce(acc);
        for (std::int64_t j = 0; j < k; ++j) {
            acc = power(acc, P);
            reduce(acc);
        }
        auto divisible = [&](const Integer& v) { return mpz_divisible_p(v.get_mpz_t(), level.get_mpz_t()) != 0; };
        step.congruent_to_identity = divisible(acc.a - 1) && divisible(acc.b) && divisible(acc.c) && divisible(acc.d - 1);
        if (step.congruent_to_identity) {
            Integer q = acc.c / level;
            step.lower_left_unit = mod(q, p);
        }
        step.ok = step.congruent_to_identity && step.lower_left_unit != 0;
        res.ok = res.ok && step.ok;
        res.steps.push_back(step);
    }
    return res;
}

GThetaProduct g_theta_product(const HenselParams& hp, const ImQuadField& field, Bits prec)
{
    const HenselResult hr = hensel_beta0(hp, field);
    if (!hr.ok) throw Error(ErrorKind::InvalidArgument, "beta_0 failed its congruence certificate");
    GThetaProduct out;
    const std::int64_t count = to_i64(ipow(hp.p, hp.n - 2 * hp.ell));
    out.root_order = to_i64(ipow(hp.p, hp.n - hp.ell));
    const Integer den = Integer(static_cast<long>(out.root_order)) * hp.m;

    IntMat2 acc = IntMat2::identity();
    for (std::int64_t s = 0; s <= count; ++s) {
        out.orbit_vectors.emplace_back(acc.c, acc.d);  // (0, 1) * acc
        if (s < count) acc = acc * hr.beta0;
    }
    const IntMat2 last = power(hr.beta0, Integer(static_cast<long>(count)));
    if (!mpz_divisible_p(last.c.get_mpz_t(), den.get_mpz_t()))
        throw Error(ErrorKind::InvalidArgument, "beta_0^P is not congruent to I mod p^{n-l} m");
    out.c = last.c / den;

    const long e = 12 * hp.m;
    const Bits wp = prec + 32 + static_cast<Bits>(std::log2(static_cast<double>(e * (count + 1))));
    EvalContext ctx = make_context(theta(field, wp + 16), wp);
    std::vector<BigComplex> factors;
    for (const auto& [v1, v2] : out.orbit_vectors) {
        Rational r1 = make_rational(v1, den), r2 = make_rational(v2, den);
        factors.push_back(pow(siegel_value_at(r1, r2, ctx), e));
    }
    out.orbit_vectors.pop_back();
    for (const auto& [v1, v2] : out.orbit_vectors) out.orbit.emplace_back(make_rational(v1, den), make_rational(v2, den));

    BigComplex value(1L, wp), shifted(1L, wp);
    for (std::int64_t s = 0; s < count; ++s) value = value * factors[static_cast<size_t>(s)];
    for (std::int64_t s = 1; s <= count; ++s) shifted = shifted * factors[static_cast<size_t>(s)];
    BigComplex ratio = shifted / value;
    out.expected = root_of_unity(out.root_order, mod(-6 * out.c, out.root_order), wp);
    out.ratio_error = abs(ratio - out.expected).with_precision(64);
    out.power_error = abs(pow(ratio, static_cast<long>(out.root_order)) - BigComplex(1L, wp)).with_precision(64);
    const BigReal tol = pow2(-prec / 2, 64);
    out.certified = out.ratio_error < tol && out.power_error < tol;
    out.value = value.with_precision(prec);
    out.shifted = shifted.with_precision(prec);
    out.ratio = ratio.with_precision(prec);
    out.expected = out.expected.with_precision(prec);
    return out;
}

} // namespace cmf
