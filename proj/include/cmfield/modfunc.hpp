#pragma once

// Siegel functions g_(r1,r2)(tau) and the Delta quotient N^12 Delta(N tau) / Delta(tau),
// evaluated from their q-products at arbitrary precision.

#include "cmfield/bignum.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cmf {

/// (r1, r2) in Q^2 \ Z^2, kept as fractional parts in [0, 1).
class SiegelIndex
{
public:
    /// Reduces both coordinates to their fractional parts; throws InvalidArgument if (r1, r2) is integral.
    SiegelIndex(const Rational& r1, const Rational& r2);
    /// (num1 / den, num2 / den).
    static SiegelIndex from_fraction(std::int64_t num1, std::int64_t num2, std::int64_t den);

    const Rational& r1() const { return r1_; }
    const Rational& r2() const { return r2_; }
    /// Smallest N >= 2 with N (r1, r2) integral.
    std::int64_t level() const;
    /// The index of (-r1, -r2), again reduced.
    SiegelIndex negated() const;
    std::string to_string() const;

    friend bool operator==(const SiegelIndex& x, const SiegelIndex& y) { return x.r1_ == y.r1_ && x.r2_ == y.r2_; }
    friend bool operator<(const SiegelIndex& x, const SiegelIndex& y)
    {
        return x.r1_ != y.r1_ ? x.r1_ < y.r1_ : x.r2_ < y.r2_;
    }

private:
    Rational r1_, r2_;
};

/// Finitely supported exponents m(r) for a product of Siegel functions of level N.
struct IndexFamily {
    std::int64_t level = 0;
    std::map<SiegelIndex, long> exponents;

    /// Adds e to m(r); throws InvalidArgument if the denominator of r does not divide the level.
    void add(const SiegelIndex& r, long e);
    long total_exponent() const;
};

/// Evaluation point with its nome q = e^{2 pi i tau} and the q-product truncation.
struct EvalContext {
    BigComplex tau;
    BigComplex q_tau;
    long truncation_terms = 0;
    Bits precision = kDefaultPrecision;
};

inline constexpr long kMaxProductTerms = 2'000'000;

/// Throws PrecisionExhausted when Im(tau) < 0.1 or the term budget would be exceeded.
EvalContext make_context(const BigComplex& tau, Bits prec);

/// The q-product at a reduced index.
BigComplex siegel_value(const SiegelIndex& r, const EvalContext& ctx);

/// g at an arbitrary rational pair: evaluated at the fractional parts and
/// corrected by the translation rule for integral shifts.
BigComplex siegel_value_at(const Rational& r1, const Rational& r2, const EvalContext& ctx);

/// The factor c with g_{r+s} = c g_r for integral s = (s1, s2).
BigComplex siegel_translation_factor(const Rational& r1, const Rational& r2, const Integer& s1, const Integer& s2,
                                     Bits prec);

BigComplex siegel_power(const SiegelIndex& r, long e, const EvalContext& ctx);

/// 12N / gcd(6, N): the exponent making g_r^e depend only on r mod Z^2 and up to sign.
long canonical_exponent(std::int64_t n);

/// prod_r g_r^{m(r)}(tau).
BigComplex family_value(const IndexFamily& fam, const EvalContext& ctx);

/// N^12 Delta(N tau) / Delta(tau) = N^12 q^{N-1} prod_n ((1 - q^{Nn}) / (1 - q^n))^24; exactly 1 for N = 1.
BigComplex delta_quotient(std::int64_t n, const EvalContext& ctx);

struct ModularityReport {
    bool ok = false;
    bool square_r1 = false;  // sum m (N r1)^2 = 0 mod gcd(2, N) N
    bool square_r2 = false;  // sum m (N r2)^2 = 0 mod gcd(2, N) N
    bool mixed = false;      // sum m (N r1)(N r2) = 0 mod N
    bool total = false;      // gcd(12, N) sum m = 0 mod 12
    std::vector<std::string> failures;
};

ModularityReport modularity_check(const IndexFamily& fam);

/// floor(-sqrt(3) pi / ln(1 - 2.16 e^{-pi sqrt(-d_K) / 24})), the largest admissible conductor.
/// Throws ConditionViolated for d_K > -43 and NotFundamental for non-fundamental d_K.
Integer bound_max_conductor(std::int64_t d_k, Bits prec = 128);

/// True when d_K <= -43 and 2 <= N <= bound_max_conductor(d_K).
bool conductor_condition_holds(std::int64_t d_k, std::int64_t n);

} // namespace cmf
