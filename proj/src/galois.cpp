#include "cmfield/galois.hpp"

#include "cmfield/errors.hpp"

#include <map>
#include <set>
#include <utility>

namespace cmf {

GLMatModN w_matrix(const ImQuadField& field, std::int64_t n, std::int64_t t, std::int64_t s)
{
    return {mod(t - mod(field.b_theta * s, n), n), mod(-mod(field.c_theta, n) * s, n), mod(s, n), mod(t, n), n};
}

std::vector<WGroupElement> w_group(const ImQuadField& field, std::int64_t n)
{
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "W_{N,theta} needs N >= 2");
    std::vector<WGroupElement> out;
    std::set<GLMatModN> seen;
    for (std::int64_t s = 0; s < n; ++s) {
        for (std::int64_t t = 0; t < n; ++t) {
            GLMatModN m = w_matrix(field, n, t, s);
            if (!m.invertible()) continue;
            if (seen.insert(m).second) out.push_back({t, s, m});
        }
    }
    return out;
}

std::vector<WGroupElement> w_cosets_ring(const ImQuadField& field, std::int64_t n)
{
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "W_{N,theta} needs N >= 2");
    std::vector<std::int64_t> units;
    for (std::int64_t u = 1; u < n; ++u)
        if (gcd64(u, n) == 1) units.push_back(u);

    // Scaling by a unit u sends (t, s) to (u t, u s); the coset key is the smallest (s, t) in the orbit.
    std::set<std::pair<std::int64_t, std::int64_t>> keys;
    for (std::int64_t s = 0; s < n; ++s) {
        for (std::int64_t t = 0; t < n; ++t) {
            if (!w_matrix(field, n, t, s).invertible()) continue;
            std::pair<std::int64_t, std::int64_t> best{n, n};
            for (std::int64_t u : units) best = std::min(best, std::make_pair(mod(u * s, n), mod(u * t, n)));
            keys.insert(best);
        }
    }
    std::vector<WGroupElement> out;
    out.reserve(keys.size());
    for (auto [s, t] : keys) out.push_back({t, s, w_matrix(field, n, t, s)});
    return out;
}

SiegelIndex act_on_index(const SiegelIndex& r, const GLMatModN& gamma)
{
    const std::int64_t n = gamma.modulus();
    if (n % r.level() != 0)
        throw Error(ErrorKind::InvalidArgument, "index " + r.to_string() + " has level not dividing " + std::to_string(n));
    const Rational x1 = r.r1() * static_cast<long>(n), x2 = r.r2() * static_cast<long>(n);
    const std::int64_t v1 = mod(x1.get_num(), n), v2 = mod(x2.get_num(), n);
    const std::int64_t w1 = mod(mod(v1 * gamma.a(), n) + mod(v2 * gamma.c(), n), n);
    const std::int64_t w2 = mod(mod(v1 * gamma.b(), n) + mod(v2 * gamma.d(), n), n);
    return SiegelIndex::from_fraction(w1, w2, n);
}

IndexFamily act_on_family(const IndexFamily& fam, const GLMatModN& gamma)
{
    IndexFamily out;
    out.level = fam.level;
    for (const auto& [r, e] : fam.exponents) out.add(act_on_index(r, gamma), e);
    return out;
}

std::vector<ConjugateSpec> conjugate_specs(const ImQuadField& field, std::int64_t n, const IndexFamily& base)
{
    if (base.level != n) throw Error(ErrorKind::InvalidArgument, "base family level differs from N");
    ModularityReport rep = modularity_check(base);
    if (!rep.ok) {
        std::string why;
        for (const auto& f : rep.failures) why += (why.empty() ? "" : "; ") + f;
        throw Error(ErrorKind::InvalidArgument, "base family is not modular of level N: " + why);
    }
    const auto cosets = w_cosets_ring(field, n);
    std::vector<ConjugateSpec> specs;
    for (const ReducedForm& q : reduced_forms(field)) {
        const GLMatModN beta = beta_q(q, field, n);
        for (const WGroupElement& w : cosets) {
            GLMatModN action = w.matrix * beta;
            specs.push_back({act_on_family(base, action), q, w.matrix, action});
        }
    }
    return specs;
}

GLDecomposition decompose_gl(const GLMatModN& gamma)
{
    const std::int64_t n = gamma.modulus();
    const std::int64_t d = gamma.det();
    const std::int64_t dinv = inverse_mod(d, n);
    GLMatModN sl(gamma.a(), gamma.b(), mod(gamma.c() * dinv, n), mod(gamma.d() * dinv, n), n);
    return {d, sl};
}

IntMat2 sl2_lift(const IntMat2& m, std::int64_t n)
{
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "modulus must be positive");
    const Integer N = static_cast<long>(n);
    auto red = [&](const Integer& x) { return Integer(static_cast<long>(mod(x, n))); };
    const Integer a = red(m.a), b = red(m.b), c = red(m.c), d = red(m.d);
    if (mod(a * d - b * c, n) != mod(1, n))
        throw Error(ErrorKind::InvalidArgument, "sl2_lift needs determinant 1 mod N");
    if (n == 1) return IntMat2::identity();

    if (c == 0) {
        // Upper triangular: keep it so when the diagonal is ±1 mod N.
        if (d == 1 || d == N - 1) {
            Integer e = d == 1 ? Integer(1) : Integer(-1);
            return {e, b, 0, e};
        }
    }
    const Integer c1 = c == 0 ? N : c;
    Integer d1 = d, g;
    for (;;) {
        mpz_gcd(g.get_mpz_t(), c1.get_mpz_t(), d1.get_mpz_t());
        if (g == 1) break;
        d1 += N;
    }
    // u c1 + v d1 = 1, so (v, -u; c1, d1) has determinant 1.
    Integer u, v;
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), c1.get_mpz_t(), d1.get_mpz_t());
    const Integer a0 = v, b0 = -u;
    Integer t = u * (a - a0) + v * (b - b0);
    mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), N.get_mpz_t());
    if (2 * t > N) t -= N;
    return {a0 + t * c1, b0 + t * d1, c1, d1};
}

long AbelianGroupSpec::order() const
{
    long n = 1;
    for (long k : orders) n *= k;
    return n;
}

std::vector<long> AbelianGroupSpec::element(long index) const
{
    std::vector<long> e(orders.size());
    for (size_t i = 0; i < orders.size(); ++i) {
        e[i] = index % orders[i];
        index /= orders[i];
    }
    return e;
}

long AbelianGroupSpec::index_of(const std::vector<long>& e) const
{
    long index = 0;
    for (size_t i = orders.size(); i-- > 0;) index = index * orders[i] + mod(e[i], orders[i]);
    return index;
}

long AbelianGroupSpec::add(long x, long y) const
{
    auto ex = element(x), ey = element(y);
    for (size_t i = 0; i < ex.size(); ++i) ex[i] += ey[i];
    return index_of(ex);
}

long AbelianGroupSpec::negate(long x) const
{
    auto e = element(x);
    for (auto& v : e) v = -v;
    return index_of(e);
}

namespace {

// chi_j(g) = exp(2 pi i sum_i j_i g_i / n_i)
Rational character_phase(const AbelianGroupSpec& g, const std::vector<long>& j, const std::vector<long>& x)
{
    Rational phase = 0;
    for (size_t i = 0; i < g.orders.size(); ++i)
        phase += make_rational(Integer(j[i] * x[i]), Integer(g.orders[i]));
    return phase;
}

std::vector<BigComplex> character_sums(const AbelianGroupSpec& g, const std::vector<BigComplex>& f)
{
    const long n = g.order();
    if (static_cast<long>(f.size()) != n) throw Error(ErrorKind::InvalidArgument, "function must cover every group element");
    Bits prec = 64;
    for (const auto& v : f) prec = std::max(prec, v.precision());
    std::vector<BigComplex> sums;
    sums.reserve(static_cast<size_t>(n));
    for (long jc = 0; jc < n; ++jc) {
        const auto j = g.element(jc);
        BigComplex s(prec);
        for (long k = 0; k < n; ++k) s = s + exp_2pi_i(-character_phase(g, j, g.element(k)), prec) * f[static_cast<size_t>(k)];
        sums.push_back(s);
    }
    return sums;
}

} // namespace

BigComplex frobenius_lhs(const AbelianGroupSpec& g, const std::vector<BigComplex>& f)
{
    auto sums = character_sums(g, f);
    BigComplex acc(1L, sums.front().precision());
    for (const auto& s : sums) acc = acc * s;
    return acc;
}

BigComplex frobenius_rhs(const AbelianGroupSpec& g, const std::vector<BigComplex>& f)
{
    const long n = g.order();
    if (static_cast<long>(f.size()) != n) throw Error(ErrorKind::InvalidArgument, "function must cover every group element");
    std::vector<BigComplex> m;
    m.reserve(static_cast<size_t>(n * n));
    for (long k = 0; k < n; ++k)
        for (long l = 0; l < n; ++l) m.push_back(f[static_cast<size_t>(g.add(k, g.negate(l)))]);
    return determinant(std::move(m), static_cast<size_t>(n));
}

BigComplex determinant(std::vector<BigComplex> m, size_t n)
{
    if (m.size() != n * n) throw Error(ErrorKind::InvalidArgument, "matrix is not square");
    Bits prec = 64;
    for (const auto& v : m) prec = std::max(prec, v.precision());
    BigComplex det(1L, prec);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        BigReal best = abs(m[col * n + col]);
        for (size_t r = col + 1; r < n; ++r) {
            BigReal cand = abs(m[r * n + col]);
            if (cand > best) {
                best = cand;
                piv = r;
            }
        }
        if (best.is_zero()) return BigComplex(0L, prec);
        if (piv != col) {
            for (size_t k = 0; k < n; ++k) std::swap(m[col * n + k], m[piv * n + k]);
            det = -det;
        }
        const BigComplex p = m[col * n + col];
        det = det * p;
        for (size_t r = col + 1; r < n; ++r) {
            BigComplex factor = m[r * n + col] / p;
            for (size_t k = col; k < n; ++k) m[r * n + k] = m[r * n + k] - factor * m[col * n + k];
        }
    }
    return det;
}

CharacterSumReport character_sum_test(const AbelianGroupSpec& g, const std::vector<BigComplex>& values,
                                      const BigReal& zero_tol)
{
    CharacterSumReport rep;
    for (const auto& s : character_sums(g, values)) rep.margins.push_back(abs(s));
    rep.min_margin = rep.margins.front();
    for (const auto& m : rep.margins)
        if (m < rep.min_margin) rep.min_margin = m;
    rep.all_nonzero = rep.min_margin > zero_tol;
    return rep;
}

CharacterSumReport character_sum_test(const AbelianGroupSpec& g, const std::vector<BigComplex>& values)
{
    Bits prec = 64;
    for (const auto& v : values) prec = std::max(prec, v.precision());
    return character_sum_test(g, values, pow2(-prec / 2, prec));
}

std::optional<long> ratio_power_exponent(const std::vector<BigReal>& magnitudes)
{
    if (magnitudes.empty()) throw Error(ErrorKind::InvalidArgument, "need at least the reference magnitude");
    const long n = static_cast<long>(magnitudes.size());
    if (n == 1) return 1L;
    const BigReal& ref = magnitudes.front();
    const Bits prec = ref.precision();
    BigReal rmax(0L, prec);
    for (long k = 1; k < n; ++k) rmax = max(rmax, magnitudes[static_cast<size_t>(k)] / ref);
    if (rmax >= BigReal(1L, prec)) return std::nullopt;
    if (rmax.is_zero()) return 1L;
    const BigReal target = BigReal(1L, prec) / n;
    BigReal est = log(BigReal(n, prec)) / (-log(rmax));
    long m = std::max<long>(1, est.floor_int().get_si());
    auto ok = [&](long e) { return pow(rmax, BigReal(e, prec)) <= target; };
    while (!ok(m)) ++m;
    while (m > 1 && ok(m - 1)) --m;
    return m;
}

} // namespace cmf
