#pragma once

// Exact arithmetic of an imaginary quadratic field K: reduced forms of
// discriminant d_K, CM points, the matrices beta_Q attached to each form,
// and the degrees of ray/ring class fields over the Hilbert class field.

#include "cmfield/bignum.hpp"
#include "cmfield/matrix.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace cmf {

/// Kronecker symbol (a/n) for any integers a, n.
int kronecker(std::int64_t a, std::int64_t n);

bool is_fundamental_discriminant(std::int64_t d);

/// Prime factorization by trial division, primes ascending.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);

bool is_prime(std::int64_t n);

/// Q(sqrt(d_K)) with O_K = Z[theta], theta = (-B + sqrt(d_K)) / 2 a root of X^2 + B X + C.
struct ImQuadField {
    std::int64_t d_k = 0;
    std::int64_t b_theta = 0;
    std::int64_t c_theta = 0;
    std::int64_t class_number = 0;
};

/// Throws NotFundamental or ExcludedField (d_K = -3, -4).
ImQuadField make_field(std::int64_t d_k);

/// a X^2 + b XY + c Y^2, reduced and primitive.
struct ReducedForm {
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::int64_t c = 0;

    std::int64_t discriminant() const { return b * b - 4 * a * c; }
    friend bool operator==(const ReducedForm&, const ReducedForm&) = default;
};

/// One form per class, ordered by (a, b); the principal form comes first.
std::vector<ReducedForm> reduced_forms(std::int64_t d_k);
inline std::vector<ReducedForm> reduced_forms(const ImQuadField& field) { return reduced_forms(field.d_k); }

bool is_reduced(const ReducedForm& q);

ReducedForm principal_form(const ImQuadField& field);

/// theta_Q = (-b + sqrt(d_K)) / (2a); theta itself for the principal form.
BigComplex cm_point(const ReducedForm& form, Bits prec);
BigComplex theta(const ImQuadField& field, Bits prec);

/// beta_Q mod N: the local matrices at each p | N assembled by CRT.
GLMatModN beta_q(const ReducedForm& form, const ImQuadField& field, std::int64_t n);

struct DegreeData {
    Integer phi_ideal;           // phi(N O_K)
    int w_nok = 1;               // roots of unity in K congruent to 1 mod N O_K
    Integer ray_over_hilbert;    // [K_(N) : H]
    Integer ring_over_hilbert;   // [H_O : H], O the order of conductor N
    Integer ring_over_k;         // [H_O : K]
    bool w_nok_assumed = false;  // set when N = 2, where w(2 O_K) = 2 is our convention
};

DegreeData degree_data(const ImQuadField& field, std::int64_t n);

} // namespace cmf
