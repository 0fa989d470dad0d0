#pragma once

// Ring class invariants as singular values of Siegel products, the Delta-quotient
// invariant, exact minimal polynomials from numerical conjugates, and the
// magnitude-ratio normal-basis certificate.

#include "cmfield/bignum.hpp"
#include "cmfield/galois.hpp"
#include "cmfield/modfunc.hpp"
#include "cmfield/quadforms.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace cmf {

/// Monic integer polynomial, coefficients low to high.
struct IntPolynomial {
    std::vector<Integer> coeffs;
    BigReal max_residual{64};   // largest |coefficient - nearest integer| before rounding
    BigReal max_imag{64};       // largest |Im| of a coefficient before rounding
    Bits precision_used = 0;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// Acceptance threshold on rounding residuals.
BigReal rounding_tolerance();

/// Indices (0, w/N) with 1 <= w <= N/2, gcd(w, N) = 1, each to the exponent power * 12N / gcd(6, N).
IndexFamily default_base_family(std::int64_t n, long power = 1);

/// prod g^{12N/gcd(6,N)}_{(0, w/N)}(theta) (times `power`). Throws ConditionViolated when the
/// conductor bound fails, unless force is set.
BigComplex ring_class_invariant(const ImQuadField& field, std::int64_t n, Bits prec, bool force = false,
                                long power = 1);

/// Evaluates each conjugate's family at its CM point; threads = 0 uses every core.
std::vector<BigComplex> evaluate_conjugates(const std::vector<ConjugateSpec>& specs, Bits prec,
                                            unsigned threads = 0);

/// prod (X - x_i) expanded exactly, then rounded coefficientwise.
/// Throws AmbiguousRounding when a real or imaginary residual exceeds tol.
IntPolynomial polynomial_from_conjugates(const std::vector<BigComplex>& roots, const BigReal& tol);

/// P(x) with P's integer coefficients.
BigComplex evaluate(const IntPolynomial& p, const BigComplex& x);

/// Constant term is 1 or -1.
bool unit_check(const IntPolynomial& p);

/// gcd(P, P') over Q is constant.
bool is_square_free(const IntPolynomial& p);

struct InvariantReport {
    BigComplex value;                        // the identity conjugate
    std::vector<ConjugateSpec> specs;
    std::vector<BigComplex> conjugates;      // aligned with specs
    IntPolynomial polynomial;
    bool is_unit = false;
    bool square_free = false;
    Integer expected_degree;                 // ring_over_K
    BigReal imag_ratio{64};                  // |Im value| / |value|
    BigReal max_root_residual{64};           // max |P(x_i)| / (1 + |x_i|)^deg
    int retries = 0;
};

/// Throws RoundingFailed when rounding stays ambiguous after three precision doublings.
InvariantReport minimal_polynomial(const ImQuadField& field, std::int64_t n, const IndexFamily& base, Bits prec,
                                   unsigned threads = 0);

/// p^12 Delta(p^l theta) / Delta(p^(l-1) theta); throws SplitPrime when (d_K / p) = 1.
BigComplex delta_ring_class_invariant(const ImQuadField& field, std::int64_t p, int ell, Bits prec);

struct DeltaConsistency {
    BigComplex siegel_side;   // prod_{gcd(w, p) = 1} g^{12 p^l}_{(0, w/p^l)}(theta)
    BigComplex delta_side;    // (p^12 Delta(p^l theta) / Delta(p^(l-1) theta))^{p^l}
    BigComplex quotient;      // p^12 Delta(p^l theta) / Delta(p^(l-1) theta)
    BigReal relative_error{64};
};

/// The Siegel/Delta identity behind the Delta-quotient invariant. No splitting gate: it is an
/// identity of functions and holds at theta for every field.
DeltaConsistency delta_consistency(const ImQuadField& field, std::int64_t p, int ell, Bits prec);

/// g^{12N}_{(0, 1/N)}(theta).
BigComplex siegel_ramachandra_unit_class(const ImQuadField& field, std::int64_t n, Bits prec);

struct NormalBasisReport {
    std::vector<ConjugateSpec> specs;
    std::vector<BigReal> magnitudes;   // |1 / x_k|, identity first
    std::vector<BigReal> ratios;       // magnitudes[k] / magnitudes[0], k >= 1
    BigReal max_ratio{64};
    BigReal margin{64};                // 1 - max_ratio
    std::optional<long> exponent;      // smallest m with max_ratio^m <= 1 / #G
};

/// Throws ConditionViolated outside the conductor bound and RatioViolation if some
/// nontrivial conjugate of the inverse invariant is at least as large as the reference one.
NormalBasisReport normal_basis_certificate(const ImQuadField& field, std::int64_t n, Bits prec, unsigned threads = 0);

} // namespace cmf
