#include "cmfield/bignum.hpp"

#include "cmfield/errors.hpp"

#include <algorithm>
#include <ostream>
#include <vector>

namespace cmf {

namespace {

Bits clamp_prec(Bits prec) { return std::max(prec, kMinPrecision); }

Bits joint(const BigReal& a, const BigReal& b) { return std::max(a.precision(), b.precision()); }

} // namespace

Rational make_rational(const Integer& num, const Integer& den)
{
    if (den == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Integer floor(const Rational& x)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

Rational frac(const Rational& x)
{
    Rational r = x - Rational(floor(x));
    r.canonicalize();
    return r;
}

BigReal::BigReal(Bits prec) { mpfr_init2(v_, clamp_prec(prec)); mpfr_set_zero(v_, 1); }

BigReal::BigReal(long value, Bits prec) { mpfr_init2(v_, clamp_prec(prec)); mpfr_set_si(v_, value, MPFR_RNDN); }

BigReal::BigReal(double value, Bits prec) { mpfr_init2(v_, clamp_prec(prec)); mpfr_set_d(v_, value, MPFR_RNDN); }

BigReal::BigReal(const Integer& value, Bits prec)
{
    mpfr_init2(v_, clamp_prec(prec));
    mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
}

BigReal::BigReal(const Rational& value, Bits prec)
{
    mpfr_init2(v_, clamp_prec(prec));
    mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
}

BigReal BigReal::parse(const std::string& decimal, Bits prec)
{
    BigReal r(prec);
    if (mpfr_set_str(r.v_, decimal.c_str(), 10, MPFR_RNDN) != 0)
        throw Error(ErrorKind::InvalidArgument, "not a decimal number: " + decimal);
    return r;
}

BigReal BigReal::pi(Bits prec)
{
    BigReal r(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
}

BigReal::BigReal(const BigReal& other)
{
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
}

BigReal::BigReal(BigReal&& other) noexcept
{
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_swap(v_, other.v_);
}

BigReal& BigReal::operator=(const BigReal& other)
{
    if (this != &other) {
        mpfr_set_prec(v_, mpfr_get_prec(other.v_));
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept
{
    mpfr_swap(v_, other.v_);
    return *this;
}

BigReal::~BigReal() { mpfr_clear(v_); }

BigReal BigReal::with_precision(Bits prec) const
{
    BigReal r(prec);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
}

Integer BigReal::round_nearest() const
{
    if (!is_finite()) throw Error(ErrorKind::Range, "rounding a non-finite value");
    Integer z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN);
    return z;
}

Integer BigReal::floor_int() const
{
    if (!is_finite()) throw Error(ErrorKind::Range, "flooring a non-finite value");
    Integer z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDD);
    return z;
}

std::string BigReal::to_string(int digits) const
{
    if (digits <= 0) digits = static_cast<int>(precision() * 0.30103) + 1;
    std::vector<char> buf(static_cast<size_t>(digits) + 64);
    std::string fmt = "%." + std::to_string(digits) + "Rg";
    int n = mpfr_snprintf(buf.data(), buf.size(), fmt.c_str(), v_);
    if (n >= static_cast<int>(buf.size())) {
        buf.resize(static_cast<size_t>(n) + 1);
        mpfr_snprintf(buf.data(), buf.size(), fmt.c_str(), v_);
    }
    return std::string(buf.data());
}

BigReal BigReal::operator-() const
{
    BigReal r(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
}

BigReal operator+(const BigReal& a, const BigReal& b)
{
    BigReal r(joint(a, b));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

BigReal operator-(const BigReal& a, const BigReal& b)
{
    BigReal r(joint(a, b));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

BigReal operator*(const BigReal& a, const BigReal& b)
{
    BigReal r(joint(a, b));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

BigReal operator/(const BigReal& a, const BigReal& b)
{
    BigReal r(joint(a, b));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

BigReal operator*(const BigReal& a, long b)
{
    BigReal r(a.precision());
    mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN);
    return r;
}

BigReal operator/(const BigReal& a, long b)
{
    BigReal r(a.precision());
    mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
    return r;
}

BigReal abs(const BigReal& x)
{
    BigReal r(x.precision());
    mpfr_abs(r.v_, x.v_, MPFR_RNDN);
    return r;
}

BigReal sqrt(const BigReal& x)
{
    BigReal r(x.precision());
    mpfr_sqrt(r.v_, x.v_, MPFR_RNDN);
    return r;
}

BigReal exp(const BigReal& x)
{
    BigReal r(x.precision());
    mpfr_clear_overflow();
    mpfr_exp(r.v_, x.v_, MPFR_RNDN);
    if (mpfr_overflow_p() || mpfr_inf_p(r.v_))
        throw Error(ErrorKind::Range, "exponential overflows the exponent range");
    return r;
}

BigReal log(const BigReal& x)
{
    BigReal r(x.precision());
    mpfr_log(r.v_, x.v_, MPFR_RNDN);
    return r;
}

BigReal log1p(const BigReal& x)
{
    BigReal r(x.precision());
    mpfr_log1p(r.v_, x.v_, MPFR_RNDN);
    return r;
}

BigReal pow(const BigReal& x, const BigReal& y)
{
    BigReal r(joint(x, y));
    mpfr_pow(r.v_, x.v_, y.v_, MPFR_RNDN);
    return r;
}

BigReal ldexp(const BigReal& x, long e)
{
    BigReal r(x.precision());
    mpfr_mul_2si(r.v_, x.v_, e, MPFR_RNDN);
    return r;
}

BigReal max(const BigReal& a, const BigReal& b) { return a < b ? b : a; }

void sin_cos(const BigReal& x, BigReal& s, BigReal& c)
{
    s = BigReal(x.precision());
    c = BigReal(x.precision());
    mpfr_sin_cos(s.v_, c.v_, x.v_, MPFR_RNDN);
}

BigReal pow2(long e, Bits prec) { return ldexp(BigReal(1L, prec), e); }

std::ostream& operator<<(std::ostream& os, const BigReal& x) { return os << x.to_string(30); }

BigComplex::BigComplex(BigReal re, BigReal im) : re_(std::move(re)), im_(std::move(im)) {}

BigComplex BigComplex::with_precision(Bits prec) const
{
    return {re_.with_precision(prec), im_.with_precision(prec)};
}

BigComplex operator+(const BigComplex& a, const BigComplex& b) { return {a.re_ + b.re_, a.im_ + b.im_}; }

BigComplex operator-(const BigComplex& a, const BigComplex& b) { return {a.re_ - b.re_, a.im_ - b.im_}; }

BigComplex operator*(const BigComplex& a, const BigComplex& b)
{
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
}

BigComplex operator/(const BigComplex& a, const BigComplex& b)
{
    // Scale by the larger component of b so |b|^2 cannot under- or overflow.
    const BigReal& big = abs(b.re_) >= abs(b.im_) ? b.re_ : b.im_;
    if (big.is_zero()) throw Error(ErrorKind::Range, "complex division by zero");
    long e = big.exponent2();
    BigReal br = ldexp(b.re_, -e), bi = ldexp(b.im_, -e);
    BigReal d = br * br + bi * bi;
    BigReal re = (a.re_ * br + a.im_ * bi) / d;
    BigReal im = (a.im_ * br - a.re_ * bi) / d;
    return {ldexp(re, -e), ldexp(im, -e)};
}

BigComplex operator*(const BigComplex& a, const BigReal& b) { return {a.re_ * b, a.im_ * b}; }

BigComplex operator/(const BigComplex& a, const BigReal& b) { return {a.re_ / b, a.im_ / b}; }

std::string BigComplex::to_string(int digits) const
{
    std::string s = re_.to_string(digits);
    if (im_.sign() < 0)
        s += " - " + (-im_).to_string(digits) + "i";
    else
        s += " + " + im_.to_string(digits) + "i";
    return s;
}

BigReal norm(const BigComplex& z) { return z.re() * z.re() + z.im() * z.im(); }

BigReal abs(const BigComplex& z)
{
    BigReal r(z.precision());
    mpfr_hypot(r.raw(), z.re().raw(), z.im().raw(), MPFR_RNDN);
    return r;
}

BigReal arg(const BigComplex& z)
{
    BigReal r(z.precision());
    mpfr_atan2(r.raw(), z.im().raw(), z.re().raw(), MPFR_RNDN);
    return r;
}

BigComplex conj(const BigComplex& z) { return {z.re(), -z.im()}; }

BigComplex pow(const BigComplex& z, long e)
{
    Bits prec = z.precision();
    if (e < 0) return BigComplex(1L, prec) / pow(z, -e);
    BigComplex result(1L, prec);
    BigComplex base = z;
    unsigned long k = static_cast<unsigned long>(e);
    while (k != 0) {
        if (k & 1UL) result = result * base;
        k >>= 1;
        if (k != 0) base = base * base;
    }
    return result;
}

BigReal relative_error(const BigComplex& a, const BigComplex& b)
{
    BigReal diff = abs(a - b);
    BigReal scale = abs(b);
    if (scale.is_zero()) return diff;
    return diff / scale;
}

BigComplex cexp(const BigComplex& z)
{
    if (!z.is_finite()) throw Error(ErrorKind::Range, "cexp of a non-finite value");
    BigReal mag = exp(z.re());
    BigReal s, c;
    sin_cos(z.im(), s, c);
    return {mag * c, mag * s};
}

BigComplex exp_pi_i(const Rational& x, Bits prec)
{
    // Reduce to [0, 2); exact quarter turns avoid rounding noise.
    Rational t = x / 2;
    t = frac(t) * 2;
    if (t == 0) return BigComplex(1L, prec);
    if (t == Rational(1, 2)) return {BigReal(0L, prec), BigReal(1L, prec)};
    if (t == 1) return BigComplex(-1L, prec);
    if (t == Rational(3, 2)) return {BigReal(0L, prec), BigReal(-1L, prec)};
    BigReal angle = BigReal::pi(prec + 16) * BigReal(t, prec + 16);
    BigReal s, c;
    sin_cos(angle, s, c);
    return {c.with_precision(prec), s.with_precision(prec)};
}

BigComplex exp_2pi_i(const Rational& x, Bits prec) { return exp_pi_i(x * 2, prec); }

BigComplex root_of_unity(long n, long k, Bits prec)
{
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "root_of_unity requires N >= 1");
    return exp_2pi_i(make_rational(k, n), prec);
}

std::ostream& operator<<(std::ostream& os, const BigComplex& z) { return os << z.to_string(30); }

RoundResult round_to_integer(const BigReal& x, const BigReal& tol)
{
    if (tol.sign() <= 0) throw Error(ErrorKind::InvalidArgument, "rounding tolerance must be positive");
    Integer n = x.round_nearest();
    BigReal residual = abs(x - BigReal(n, x.precision()));
    BigReal half(0.5, x.precision());
    if (residual >= half)
        throw Error(ErrorKind::AmbiguousRounding, "value " + x.to_string(20) + " is a rounding tie");
    if (residual > tol)
        throw Error(ErrorKind::AmbiguousRounding,
                    "residual " + residual.to_string(6) + " exceeds tolerance " + tol.to_string(6));
    return {n, residual};
}

} // namespace cmf
