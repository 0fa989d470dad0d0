#include "cmfield/modfunc.hpp"

#include "cmfield/errors.hpp"
#include "cmfield/matrix.hpp"
#include "cmfield/quadforms.hpp"

#include <cmath>
#include <numeric>

namespace cmf {

namespace {

Bits guard_bits(long terms) { return 32 + static_cast<Bits>(std::log2(static_cast<double>(terms) + 2.0)) + 1; }

Integer lcm_den(const Rational& x, const Rational& y)
{
    Integer l;
    mpz_lcm(l.get_mpz_t(), x.get_den_mpz_t(), y.get_den_mpz_t());
    return l;
}

} // namespace

SiegelIndex::SiegelIndex(const Rational& r1, const Rational& r2) : r1_(frac(r1)), r2_(frac(r2))
{
    if (r1_ == 0 && r2_ == 0) throw Error(ErrorKind::InvalidArgument, "Siegel index must not be integral");
}

SiegelIndex SiegelIndex::from_fraction(std::int64_t num1, std::int64_t num2, std::int64_t den)
{
    return {make_rational(static_cast<long>(num1), static_cast<long>(den)),
            make_rational(static_cast<long>(num2), static_cast<long>(den))};
}

std::int64_t SiegelIndex::level() const { return lcm_den(r1_, r2_).get_si(); }

SiegelIndex SiegelIndex::negated() const { return {-r1_, -r2_}; }

std::string SiegelIndex::to_string() const { return "(" + r1_.get_str() + ", " + r2_.get_str() + ")"; }

void IndexFamily::add(const SiegelIndex& r, long e)
{
    if (level < 1 || level % r.level() != 0)
        throw Error(ErrorKind::InvalidArgument, "index " + r.to_string() + " has level not dividing " + std::to_string(level));
    long& slot = exponents[r];
    slot += e;
    if (slot == 0) exponents.erase(r);
}

long IndexFamily::total_exponent() const
{
    long s = 0;
    for (const auto& [r, e] : exponents) s += e;
    return s;
}

EvalContext make_context(const BigComplex& tau, Bits prec)
{
    prec = std::max(prec, kMinPrecision);
    const double im = tau.im().to_double();
    if (!(im >= 0.1))
        throw Error(ErrorKind::PrecisionExhausted, "Im(tau) = " + std::to_string(im) + " is below the 0.1 floor");
    // Stop at the first n with n * 2 pi Im(tau) / ln 2 > prec + 32; one more term covers q^n / q_z with r1 < 1.
    const double per_term = 2.0 * M_PI * im / std::log(2.0);
    const double need = static_cast<double>(prec + 32) / per_term;
    if (need > static_cast<double>(kMaxProductTerms))
        throw Error(ErrorKind::PrecisionExhausted, "q-product needs more than the term budget");
    EvalContext ctx;
    ctx.truncation_terms = static_cast<long>(std::floor(need)) + 2;
    ctx.precision = prec;
    Bits wp = prec + guard_bits(ctx.truncation_terms);
    ctx.tau = tau.with_precision(wp);
    BigReal two_pi = BigReal::pi(wp) * 2L;
    ctx.q_tau = cexp(BigComplex(BigReal(0L, wp), two_pi) * ctx.tau);
    return ctx;
}

BigComplex siegel_value(const SiegelIndex& r, const EvalContext& ctx)
{
    const Bits wp = ctx.q_tau.precision();
    const Rational& r1 = r.r1();
    const Rational& r2 = r.r2();
    const BigReal pi = BigReal::pi(wp);
    const BigComplex i_pi(BigReal(0L, wp), pi);

    // -q^{B2(r1)/2} e^{pi i r2 (r1 - 1)}
    Rational b2 = r1 * r1 - r1 + Rational(1, 6);
    BigComplex lead = cexp(i_pi * ctx.tau * BigReal(b2, wp));
    lead = -(lead * exp_pi_i(r2 * (r1 - 1), wp));

    BigComplex qz = cexp(i_pi * ctx.tau * BigReal(Rational(2 * r1), wp)) * exp_2pi_i(r2, wp);
    BigComplex qz_inv = BigComplex(1L, wp) / qz;
    const BigComplex one(1L, wp);

    BigComplex prod = one - qz;
    BigComplex qn = ctx.q_tau;
    for (long n = 1; n <= ctx.truncation_terms; ++n) {
        prod = prod * (one - qn * qz) * (one - qn * qz_inv);
        qn = qn * ctx.q_tau;
    }
    return (lead * prod).with_precision(ctx.precision);
}

BigComplex siegel_translation_factor(const Rational& r1, const Rational& r2, const Integer& s1, const Integer& s2,
                                     Bits prec)
{
    // (-1)^{s1 s2 + s1 + s2} e^{-pi i (s1 r2 - s2 r1)} as a single exact phase
    Rational phase = Rational(s1 * s2 + s1 + s2) - (Rational(s1) * r2 - Rational(s2) * r1);
    return exp_pi_i(phase, prec);
}

BigComplex siegel_value_at(const Rational& r1, const Rational& r2, const EvalContext& ctx)
{
    SiegelIndex base(r1, r2);
    Integer s1 = floor(r1), s2 = floor(r2);
    BigComplex g = siegel_value(base, ctx);
    if (s1 == 0 && s2 == 0) return g;
    return g * siegel_translation_factor(base.r1(), base.r2(), s1, s2, ctx.precision + 16);
}

BigComplex siegel_power(const SiegelIndex& r, long e, const EvalContext& ctx)
{
    if (e == 0) throw Error(ErrorKind::InvalidArgument, "siegel_power needs a nonzero exponent");
    EvalContext wide = ctx;
    // Powering loses about log2|e| bits.
    wide.precision = ctx.precision + static_cast<Bits>(std::log2(std::abs(static_cast<double>(e)))) + 2;
    BigComplex g = siegel_value(r, wide);
    return pow(g, e).with_precision(ctx.precision);
}

long canonical_exponent(std::int64_t n) { return 12 * n / std::gcd<std::int64_t>(6, n); }

BigComplex family_value(const IndexFamily& fam, const EvalContext& ctx)
{
    BigComplex acc(1L, ctx.precision + 16);
    for (const auto& [r, e] : fam.exponents) acc = acc * siegel_power(r, e, ctx);
    return acc.with_precision(ctx.precision);
}

BigComplex delta_quotient(std::int64_t n, const EvalContext& ctx)
{
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "delta_quotient needs N >= 1");
    if (n == 1) return BigComplex(1L, ctx.precision);
    const Bits wp = ctx.q_tau.precision() + 8;
    const BigComplex one(1L, wp);
    const BigComplex q = ctx.q_tau.with_precision(wp);
    const BigComplex qn_step = pow(q, static_cast<long>(n));
    BigComplex num(1L, wp), den(1L, wp);
    BigComplex qk = q, qnk = qn_step;
    for (long k = 1; k <= ctx.truncation_terms; ++k) {
        num = num * (one - qnk);
        den = den * (one - qk);
        qk = qk * q;
        qnk = qnk * qn_step;
    }
    BigComplex ratio = pow(num / den, 24);
    Integer n12;
    mpz_ui_pow_ui(n12.get_mpz_t(), static_cast<unsigned long>(n), 12);
    BigComplex value = ratio * pow(q, static_cast<long>(n - 1)) * BigReal(n12, wp);
    return value.with_precision(ctx.precision);
}

ModularityReport modularity_check(const IndexFamily& fam)
{
    const std::int64_t n = fam.level;
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "modularity_check needs level N >= 2");
    Integer s11 = 0, s22 = 0, s12 = 0, total = 0;
    for (const auto& [r, e] : fam.exponents) {
        Rational x = r.r1() * static_cast<long>(n), y = r.r2() * static_cast<long>(n);
        Integer a = x.get_num(), b = y.get_num();  // integral because the level divides N
        s11 += e * a * a;
        s22 += e * b * b;
        s12 += e * a * b;
        total += e;
    }
    const std::int64_t m2 = std::gcd<std::int64_t>(2, n) * n;
    ModularityReport rep;
    rep.square_r1 = mod(s11, m2) == 0;
    rep.square_r2 = mod(s22, m2) == 0;
    rep.mixed = mod(s12, n) == 0;
    rep.total = mod(Integer(static_cast<long>(std::gcd<std::int64_t>(12, n))) * total, 12) == 0;
    if (!rep.square_r1) rep.failures.push_back("sum m (N r1)^2 = " + s11.get_str() + " != 0 mod " + std::to_string(m2));
    if (!rep.square_r2) rep.failures.push_back("sum m (N r2)^2 = " + s22.get_str() + " != 0 mod " + std::to_string(m2));
    if (!rep.mixed) rep.failures.push_back("sum m (N r1)(N r2) = " + s12.get_str() + " != 0 mod " + std::to_string(n));
    if (!rep.total) rep.failures.push_back("gcd(12, N) sum m = " + Integer(total * static_cast<long>(std::gcd<std::int64_t>(12, n))).get_str() + " != 0 mod 12");
    rep.ok = rep.square_r1 && rep.square_r2 && rep.mixed && rep.total;
    return rep;
}

Integer bound_max_conductor(std::int64_t d_k, Bits prec)
{
    if (d_k > -43)
        throw Error(ErrorKind::ConditionViolated, "d_K = " + std::to_string(d_k) + " > -43 violates the conductor condition");
    if (!is_fundamental_discriminant(d_k))
        throw Error(ErrorKind::NotFundamental, std::to_string(d_k) + " is not a fundamental discriminant");
    prec = std::max<Bits>(prec, 128);
    // The bound grows like e^{pi sqrt|d_K| / 24}; carry enough bits for its integer part.
    const double mag_bits = M_PI * std::sqrt(static_cast<double>(-d_k)) / 24.0 / std::log(2.0);
    Bits wp = prec + static_cast<Bits>(mag_bits) + 64;
    for (int attempt = 0; attempt < 8; ++attempt, wp *= 2) {
        BigReal pi = BigReal::pi(wp);
        BigReal x = pi * sqrt(BigReal(-d_k, wp)) / 24L;
        BigReal eps = BigReal(Rational(216, 100), wp) * exp(-x);
        BigReal value = -(sqrt(BigReal(3L, wp)) * pi) / log1p(-eps);
        BigReal slack = ldexp(abs(value), 16 - wp);
        Integer lo = (value - slack).floor_int();
        Integer hi = (value + slack).floor_int();
        if (lo == hi) return lo;
    }
    throw Error(ErrorKind::PrecisionExhausted, "conductor bound sits on an integer at every precision tried");
}

bool conductor_condition_holds(std::int64_t d_k, std::int64_t n)
{
    if (d_k > -43 || n < 2) return false;
    return Integer(static_cast<long>(n)) <= bound_max_conductor(d_k);
}

} // namespace cmf
