#pragma once

// Arbitrary-precision kernel: MPFR-backed reals, complex values built on them,
// and GMP integers/rationals for everything exact.

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>

namespace cmf {

using Integer = mpz_class;
using Rational = mpq_class;

/// Working precision in bits.
using Bits = long;

inline constexpr Bits kMinPrecision = 64;
inline constexpr Bits kDefaultPrecision = 512;

/// Builds a rational in lowest terms; throws InvalidArgument on a zero denominator.
Rational make_rational(const Integer& num, const Integer& den);

/// Fractional part in [0, 1).
Rational frac(const Rational& x);
Integer floor(const Rational& x);

class BigReal
{
public:
    explicit BigReal(Bits prec = kDefaultPrecision);
    BigReal(long value, Bits prec);
    BigReal(double value, Bits prec);
    BigReal(const Integer& value, Bits prec);
    BigReal(const Rational& value, Bits prec);
    static BigReal parse(const std::string& decimal, Bits prec);
    static BigReal pi(Bits prec);

    BigReal(const BigReal& other);
    BigReal(BigReal&& other) noexcept;
    BigReal& operator=(const BigReal& other);
    BigReal& operator=(BigReal&& other) noexcept;
    ~BigReal();

    Bits precision() const { return static_cast<Bits>(mpfr_get_prec(v_)); }
    BigReal with_precision(Bits prec) const;

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    /// Binary exponent e with 0.5 <= |x| / 2^e < 1; meaningless for zero.
    long exponent2() const { return static_cast<long>(mpfr_get_exp(v_)); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    Integer round_nearest() const;
    Integer floor_int() const;
    std::string to_string(int digits = 0) const;

    BigReal operator-() const;
    friend BigReal operator+(const BigReal& a, const BigReal& b);
    friend BigReal operator-(const BigReal& a, const BigReal& b);
    friend BigReal operator*(const BigReal& a, const BigReal& b);
    friend BigReal operator/(const BigReal& a, const BigReal& b);
    friend BigReal operator*(const BigReal& a, long b);
    friend BigReal operator/(const BigReal& a, long b);

    friend bool operator<(const BigReal& a, const BigReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator>(const BigReal& a, const BigReal& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const BigReal& a, const BigReal& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const BigReal& a, const BigReal& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
    friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

    friend BigReal abs(const BigReal& x);
    friend BigReal sqrt(const BigReal& x);
    friend BigReal exp(const BigReal& x);
    friend BigReal log(const BigReal& x);
    friend BigReal log1p(const BigReal& x);
    friend BigReal pow(const BigReal& x, const BigReal& y);
    friend BigReal ldexp(const BigReal& x, long e);
    friend BigReal max(const BigReal& a, const BigReal& b);
    friend void sin_cos(const BigReal& x, BigReal& s, BigReal& c);

    mpfr_srcptr raw() const { return v_; }
    mpfr_ptr raw() { return v_; }

private:
    mpfr_t v_;
};

/// 2^e at the given precision.
BigReal pow2(long e, Bits prec);

std::ostream& operator<<(std::ostream& os, const BigReal& x);

class BigComplex
{
public:
    explicit BigComplex(Bits prec = kDefaultPrecision) : re_(prec), im_(prec) {}
    BigComplex(BigReal re, BigReal im);
    BigComplex(long re, Bits prec) : re_(re, prec), im_(0L, prec) {}
    explicit BigComplex(const BigReal& re) : re_(re), im_(0L, re.precision()) {}

    const BigReal& re() const { return re_; }
    const BigReal& im() const { return im_; }
    Bits precision() const { return std::max(re_.precision(), im_.precision()); }
    BigComplex with_precision(Bits prec) const;

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    bool is_finite() const { return re_.is_finite() && im_.is_finite(); }

    BigComplex operator-() const { return {-re_, -im_}; }
    friend BigComplex operator+(const BigComplex& a, const BigComplex& b);
    friend BigComplex operator-(const BigComplex& a, const BigComplex& b);
    friend BigComplex operator*(const BigComplex& a, const BigComplex& b);
    friend BigComplex operator/(const BigComplex& a, const BigComplex& b);
    friend BigComplex operator*(const BigComplex& a, const BigReal& b);
    friend BigComplex operator/(const BigComplex& a, const BigReal& b);

    std::string to_string(int digits = 0) const;

private:
    BigReal re_;
    BigReal im_;
};

BigReal abs(const BigComplex& z);
BigReal norm(const BigComplex& z);
BigReal arg(const BigComplex& z);
BigComplex conj(const BigComplex& z);
/// z^e by binary powering; e may be negative (z must then be nonzero).
BigComplex pow(const BigComplex& z, long e);
/// |a - b| / |b|, or |a - b| when b is zero.
BigReal relative_error(const BigComplex& a, const BigComplex& b);

/// e^z; relative error within a few ulps. Throws Range when Re(z) overflows the exponent range.
BigComplex cexp(const BigComplex& z);
/// e^{pi i x} for rational x, reduced exactly mod 2 before evaluation.
BigComplex exp_pi_i(const Rational& x, Bits prec);
/// e^{2 pi i x} for rational x.
BigComplex exp_2pi_i(const Rational& x, Bits prec);
/// zeta_N^k = e^{2 pi i k / N}.
BigComplex root_of_unity(long n, long k, Bits prec);

std::ostream& operator<<(std::ostream& os, const BigComplex& z);

struct RoundResult {
    Integer value;
    BigReal residual;
};

/// Nearest integer to x. Throws AmbiguousRounding when the residual exceeds tol,
/// and always for an exact half-integer.
RoundResult round_to_integer(const BigReal& x, const BigReal& tol);

} // namespace cmf
