#pragma once

// Matrix-group side of Shimura reciprocity: the group W_{N,theta}, its cosets
// modulo scalars, the right action of GL2(Z/NZ) on Siegel indices, the full
// conjugate set of a singular value, and character tools on finite abelian groups.

#include "cmfield/bignum.hpp"
#include "cmfield/matrix.hpp"
#include "cmfield/modfunc.hpp"
#include "cmfield/quadforms.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace cmf {

/// (t - B s, -C s; s, t) mod N.
struct WGroupElement {
    std::int64_t t = 0;
    std::int64_t s = 0;
    GLMatModN matrix;
};

GLMatModN w_matrix(const ImQuadField& field, std::int64_t n, std::int64_t t, std::int64_t s);

/// All of W_{N,theta} / {±1}, ordered by (s, t) of the first member found.
std::vector<WGroupElement> w_group(const ImQuadField& field, std::int64_t n);

/// One element per coset of W_{N,theta} modulo the scalar matrices (t 0; 0 t),
/// represented by the lexicographically smallest (s, t) in the coset. Identity first.
std::vector<WGroupElement> w_cosets_ring(const ImQuadField& field, std::int64_t n);

/// Row vector r times gamma, reduced to fractional parts.
SiegelIndex act_on_index(const SiegelIndex& r, const GLMatModN& gamma);

/// Applies gamma to every index of a family.
IndexFamily act_on_family(const IndexFamily& fam, const GLMatModN& gamma);

struct ConjugateSpec {
    IndexFamily family;   // base family acted on by gamma * beta_Q
    ReducedForm form;     // evaluation point theta_Q
    GLMatModN gamma;      // coset representative in W_{N,theta}
    GLMatModN action;     // gamma * beta_Q
};

/// The conjugates f^{gamma beta_Q}(theta_Q), ordered by form then coset.
/// Throws InvalidArgument when the base family fails the modularity check.
std::vector<ConjugateSpec> conjugate_specs(const ImQuadField& field, std::int64_t n, const IndexFamily& base);

struct GLDecomposition {
    std::int64_t d = 1;   // det(gamma)
    GLMatModN sl_part;    // (1 0; 0 d)^{-1} gamma, determinant 1
};

GLDecomposition decompose_gl(const GLMatModN& gamma);

/// Integer matrix of determinant exactly 1 congruent to m mod n.
/// The entries of m are taken as given (no sign normalization); requires det m = 1 mod n.
IntMat2 sl2_lift(const IntMat2& m, std::int64_t n);
inline IntMat2 sl2_lift(const GLMatModN& m) { return sl2_lift(m.to_int(), m.modulus()); }

/// Z/n1 x ... x Z/nk; elements enumerated in mixed radix with the first factor varying fastest.
struct AbelianGroupSpec {
    std::vector<long> orders;

    long order() const;
    std::vector<long> element(long index) const;
    long index_of(const std::vector<long>& e) const;
    long add(long x, long y) const;
    long negate(long x) const;
};

/// prod_chi sum_k chi(g_k^{-1}) f(g_k); f is indexed by element index.
BigComplex frobenius_lhs(const AbelianGroupSpec& g, const std::vector<BigComplex>& f);
/// det(f(g_k g_l^{-1}))_{k,l}.
BigComplex frobenius_rhs(const AbelianGroupSpec& g, const std::vector<BigComplex>& f);

/// Determinant by Gaussian elimination with partial pivoting (row-major n x n).
BigComplex determinant(std::vector<BigComplex> m, size_t n);

struct CharacterSumReport {
    bool all_nonzero = false;
    std::vector<BigReal> margins;  // |sum_k chi(g_k^{-1}) value(g_k)| per character, character index order
    BigReal min_margin;
};

CharacterSumReport character_sum_test(const AbelianGroupSpec& g, const std::vector<BigComplex>& values,
                                      const BigReal& zero_tol);
/// Default tolerance 2^{-prec/2}.
CharacterSumReport character_sum_test(const AbelianGroupSpec& g, const std::vector<BigComplex>& values);

/// Smallest m with (max_{k>0} mag_k / mag_0)^m <= 1 / n, n = magnitudes.size();
/// nullopt (unbounded) when some ratio is >= 1.
std::optional<long> ratio_power_exponent(const std::vector<BigReal>& magnitudes);

} // namespace cmf
