#include "cmfield/quadforms.hpp"

#include "cmfield/errors.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace cmf {

int kronecker(std::int64_t a, std::int64_t n)
{
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    if ((a % 2 == 0) && (n % 2 == 0)) return 0;

    int k = 1;
    int v = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++v;
    }
    if (v % 2 == 1) {
        std::int64_t r = mod(a, 8);
        if (r == 3 || r == 5) k = -k;
    }
    if (n < 0) {
        n = -n;
        if (a < 0) k = -k;
    }
    // Jacobi symbol (a/n) with n odd and positive.
    a = mod(a, n);
    while (a != 0) {
        v = 0;
        while (a % 2 == 0) {
            a /= 2;
            ++v;
        }
        if (v % 2 == 1) {
            std::int64_t r = n % 8;
            if (r == 3 || r == 5) k = -k;
        }
        if (a % 4 == 3 && n % 4 == 3) k = -k;
        std::int64_t r = n % a;
        n = a;
        a = r;
    }
    return n == 1 ? k : 0;
}

bool is_prime(std::int64_t n)
{
    if (n < 2) return false;
    for (std::int64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n)
{
    std::vector<std::pair<std::int64_t, int>> out;
    if (n < 0) n = -n;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e > 0) out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

namespace {

bool squarefree(std::int64_t n)
{
    for (auto [p, e] : factorize(n))
        if (e > 1) return false;
    return true;
}

} // namespace

bool is_fundamental_discriminant(std::int64_t d)
{
    if (d == 0 || d == 1) return false;
    std::int64_t r = mod(d, 4);
    if (r == 1) return squarefree(d);
    if (r == 0) {
        std::int64_t m = d / 4;
        std::int64_t rm = mod(m, 4);
        return (rm == 2 || rm == 3) && squarefree(m);
    }
    return false;
}

bool is_reduced(const ReducedForm& q)
{
    if (q.a <= 0 || q.c <= 0) return false;
    if (std::gcd(std::gcd(q.a, q.b), q.c) != 1) return false;
    bool strict = -q.a < q.b && q.b <= q.a && q.a < q.c;
    bool boundary = 0 <= q.b && q.b <= q.a && q.a == q.c;
    return strict || boundary;
}

std::vector<ReducedForm> reduced_forms(std::int64_t d_k)
{
    if (d_k >= 0 || (mod(d_k, 4) != 0 && mod(d_k, 4) != 1))
        throw Error(ErrorKind::InvalidArgument, "not a negative discriminant: " + std::to_string(d_k));
    std::vector<ReducedForm> forms;
    const auto a_max = static_cast<std::int64_t>(std::sqrt(static_cast<double>(-d_k) / 3.0)) + 1;
    for (std::int64_t a = 1; a <= a_max && 3 * a * a <= -d_k; ++a) {
        for (std::int64_t b = -a + 1; b <= a; ++b) {
            std::int64_t num = b * b - d_k;
            if (num % (4 * a) != 0) continue;
            ReducedForm q{a, b, num / (4 * a)};
            if (is_reduced(q)) forms.push_back(q);
        }
    }
    return forms;
}

ImQuadField make_field(std::int64_t d_k)
{
    if (d_k == -3 || d_k == -4)
        throw Error(ErrorKind::ExcludedField, "Q(sqrt(" + std::to_string(d_k) + ")) has extra units");
    if (d_k >= 0 || !is_fundamental_discriminant(d_k))
        throw Error(ErrorKind::NotFundamental, std::to_string(d_k) + " is not a negative fundamental discriminant");
    ImQuadField f;
    f.d_k = d_k;
    if (mod(d_k, 4) == 0) {
        f.b_theta = 0;
        f.c_theta = -d_k / 4;
    } else {
        f.b_theta = 1;
        f.c_theta = (1 - d_k) / 4;
    }
    f.class_number = static_cast<std::int64_t>(reduced_forms(d_k).size());
    return f;
}

ReducedForm principal_form(const ImQuadField& field) { return {1, field.b_theta, field.c_theta}; }

BigComplex cm_point(const ReducedForm& form, Bits prec)
{
    Bits wp = prec + 16;
    BigReal two_a(2 * form.a, wp);
    BigReal re = BigReal(-form.b, wp) / two_a;
    BigReal im = sqrt(BigReal(-form.discriminant(), wp)) / two_a;
    return {re.with_precision(prec), im.with_precision(prec)};
}

BigComplex theta(const ImQuadField& field, Bits prec) { return cm_point(principal_form(field), prec); }

namespace {

// The local matrix at p with exact integer entries (b is even when d_K = 0 mod 4, odd otherwise).
IntMat2 local_beta(const ReducedForm& q, bool even_disc, std::int64_t p)
{
    const std::int64_t a = q.a, b = q.b, c = q.c;
    const bool p_divides_a = a % p == 0;
    const bool p_divides_c = c % p == 0;
    if (even_disc) {
        if (!p_divides_a) return {a, b / 2, 0, 1};
        if (!p_divides_c) return {-b / 2, -c, 1, 0};
        return {-b / 2 - a, -b / 2 - c, 1, -1};
    }
    if (!p_divides_a) return {a, (b - 1) / 2, 0, 1};
    if (!p_divides_c) return {(-b - 1) / 2, -c, 1, 0};
    return {(-b - 1) / 2 - a, (1 - b) / 2 - c, 1, -1};
}

// x = r1 mod m1, x = r2 mod m2 with coprime moduli.
std::int64_t crt(std::int64_t r1, std::int64_t m1, std::int64_t r2, std::int64_t m2)
{
    std::int64_t t = mod((r2 - r1) % m2 * inverse_mod(m1, m2), m2);
    return mod(r1 + m1 * t, m1 * m2);
}

} // namespace

GLMatModN beta_q(const ReducedForm& form, const ImQuadField& field, std::int64_t n)
{
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "beta_Q needs N >= 2");
    const bool even_disc = field.b_theta == 0;
    std::array<std::int64_t, 4> acc{0, 0, 0, 0};
    std::int64_t m = 1;
    for (auto [p, e] : factorize(n)) {
        std::int64_t pe = 1;
        for (int i = 0; i < e; ++i) pe *= p;
        IntMat2 loc = local_beta(form, even_disc, p);
        std::array<std::int64_t, 4> r{mod(loc.a, pe), mod(loc.b, pe), mod(loc.c, pe), mod(loc.d, pe)};
        for (size_t i = 0; i < 4; ++i) acc[i] = crt(acc[i], m, r[i], pe);
        m *= pe;
    }
    return {acc[0], acc[1], acc[2], acc[3], n};
}

DegreeData degree_data(const ImQuadField& field, std::int64_t n)
{
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "degree formulas need N >= 2");
    DegreeData dd;
    dd.phi_ideal = 1;
    dd.ring_over_hilbert = 1;
    Integer phi_n = 1;
    for (auto [p, e] : factorize(n)) {
        Integer pz = static_cast<long>(p);
        Integer pe1;
        mpz_pow_ui(pe1.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(e - 1));
        const int chi = kronecker(field.d_k, p);
        if (chi == 1)
            dd.phi_ideal *= (pz - 1) * (pz - 1) * pe1 * pe1;
        else if (chi == -1)
            dd.phi_ideal *= (pz * pz - 1) * pe1 * pe1;
        else
            dd.phi_ideal *= (pz - 1) * pe1 * pe1 * pz;
        dd.ring_over_hilbert *= pe1 * (pz - chi);
        phi_n *= pe1 * (pz - 1);
    }
    // -1 = 1 mod N O_K only for N = 2; [O_K^* : O^*] = 1 since d_K <= -7.
    dd.w_nok = n == 2 ? 2 : 1;
    dd.w_nok_assumed = n == 2;
    dd.ray_over_hilbert = dd.phi_ideal * dd.w_nok / 2;
    dd.ring_over_k = dd.ring_over_hilbert * static_cast<long>(field.class_number);
    return dd;
}

} // namespace cmf
