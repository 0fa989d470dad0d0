#pragma once

// Ray class constructions over K_(pm): the subgroup Gamma = <alpha> x <beta> of
// GL2(Z/p^2 m Z), its order-p subgroups and their fixed-field generators, and the
// Hensel-lifted matrix beta_0 together with the g(theta) orbit product.

#include "cmfield/bignum.hpp"
#include "cmfield/matrix.hpp"
#include "cmfield/modfunc.hpp"
#include "cmfield/quadforms.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cmf {

/// p >= 5 prime, m >= 1 coprime to p.
struct GammaParams {
    std::int64_t p = 5;
    std::int64_t m = 1;
    ImQuadField field;

    std::int64_t modulus() const { return p * p * m; }
};

void validate(const GammaParams& gp);

struct GammaGenerators {
    GLMatModN alpha;  // (1+pm 0; 0 1+pm)
    GLMatModN beta;   // (1-B pm  -C pm; pm 1)
};

GammaGenerators gamma_generators(const GammaParams& gp);

/// (1+(k-Bl)pm, -Cl pm; l pm, 1+kpm) mod p^2 m, the closed form of alpha^k beta^l.
GLMatModN gamma_element(const GammaParams& gp, std::int64_t k, std::int64_t l);

/// alpha^k beta^l for 0 <= k, l < p, k slowest, computed by repeated multiplication.
std::vector<GLMatModN> gamma_enumeration(const GammaParams& gp);

/// Generator exponents (k, l) of an order-p subgroup of Gamma.
struct FixedFieldLabel {
    std::int64_t k = 0;
    std::int64_t l = 0;

    std::string to_string() const { return "(" + std::to_string(k) + "," + std::to_string(l) + ")"; }
    friend bool operator==(const FixedFieldLabel&, const FixedFieldLabel&) = default;
};

/// (0,1), (1,0), (1,1), ..., (1,p-1).
std::vector<FixedFieldLabel> fixed_field_labels(std::int64_t p);

/// Exponents of zeta_{p^2}^x g^{12 m y}_{(0, 1/pm)}(theta).
struct FixedFieldSolution {
    Integer x;
    Integer y;              // as given by the solution table, not reduced
    std::int64_t y_mod_p = 0;
};

/// y' denotes the inverse mod p taken in (0, p).
FixedFieldSolution fixed_field_solution(const FixedFieldLabel& label, const GammaParams& gp);

/// Change in the zeta_{p^2} exponent of zeta^x g^{12my} under alpha^k beta^l, as a residue mod p^2:
/// (1 + (2k - Bl)pm) x - 6 p l y - x. Zero iff the element is fixed.
std::int64_t gamma_action_exponent(const FixedFieldLabel& label, const Integer& x, const Integer& y,
                                   const GammaParams& gp);

struct NormalBasisValue {
    bool full = false;        // the product (sum zeta^s)(sum g^{12ms})
    FixedFieldLabel label;
    FixedFieldSolution solution;
    long terms = 0;
    BigComplex value;
};

/// sum_{s=0}^{p-1} (zeta_{p^2}^x g^{12 m y}_{(0,1/pm)}(theta))^s.
NormalBasisValue normal_basis_value(const FixedFieldLabel& label, const GammaParams& gp, Bits prec);
/// (sum_{s<p} zeta_{p^2}^s)(sum_{s<p} g^{12 m s}_{(0,1/pm)}(theta)).
NormalBasisValue normal_basis_value_full(const GammaParams& gp, Bits prec);

/// n >= 2l >= 2, p >= 5 prime, gcd(p, m) = 1.
struct HenselParams {
    std::int64_t p = 5;
    std::int64_t m = 1;
    std::int64_t n = 2;
    std::int64_t ell = 1;
};

void validate(const HenselParams& hp);

struct HenselStep {
    std::int64_t k = 0;
    bool congruent_to_identity = false;   // beta_0^{p^k} = I mod p^{l+k} m
    std::int64_t lower_left_unit = 0;     // (lower-left / p^{l+k} m) mod p
    bool ok = false;
};

struct HenselResult {
    Integer x0;                 // root of f mod p^{2(n-l)-l}
    Integer root_modulus;
    bool derivative_unit = false;
    IntMat2 target;             // the congruence class of beta_0 mod p^{2(n-l)} m
    Integer target_modulus;
    IntMat2 beta0;              // det exactly 1
    std::vector<HenselStep> steps;
    bool ok = false;
};

/// f(x) = p^l m^2 x^2 + (2m - B p^l m^2) x + C p^l m^2 - B m.
Integer hensel_polynomial(const HenselParams& hp, const ImQuadField& field, const Integer& x);

/// Throws NoRoot if f has no root mod p.
HenselResult hensel_beta0(const HenselParams& hp, const ImQuadField& field);

struct GThetaProduct {
    std::vector<std::pair<Integer, Integer>> orbit_vectors;  // (0,1) beta_0^s, exact
    std::vector<SiegelIndex> orbit;                           // orbit_vectors / (p^{n-l} m), reduced
    BigComplex value;        // prod_{s=0}^{P-1} g^{12m}
    BigComplex shifted;      // prod_{s=1}^{P} g^{12m}
    BigComplex ratio;
    Integer c;               // lower-left of beta_0^P divided by p^{n-l} m
    std::int64_t root_order = 0;   // p^{n-l}
    BigComplex expected;     // zeta_{p^{n-l}}^{-6c}
    BigReal ratio_error{64};       // |ratio - expected|
    BigReal power_error{64};       // |ratio^{p^{n-l}} - 1|
    bool certified = false;
};

/// P = p^{n-2l} factors.
GThetaProduct g_theta_product(const HenselParams& hp, const ImQuadField& field, Bits prec);

} // namespace cmf
