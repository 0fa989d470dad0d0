#include "cmfield/matrix.hpp"

#include "cmfield/errors.hpp"

#include <sstream>

namespace cmf {

IntMat2 power(const IntMat2& m, const Integer& e)
{
    if (e < 0) throw Error(ErrorKind::InvalidArgument, "negative matrix power");
    IntMat2 result = IntMat2::identity();
    IntMat2 base = m;
    Integer k = e;
    while (k != 0) {
        if (mpz_odd_p(k.get_mpz_t())) result = result * base;
        k >>= 1;
        if (k != 0) base = base * base;
    }
    return result;
}

std::ostream& operator<<(std::ostream& os, const IntMat2& m)
{
    return os << "(" << m.a << " " << m.b << "; " << m.c << " " << m.d << ")";
}

std::int64_t mod(std::int64_t x, std::int64_t n)
{
    std::int64_t r = x % n;
    return r < 0 ? r + n : r;
}

std::int64_t mod(const Integer& x, std::int64_t n)
{
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), Integer(static_cast<long>(n)).get_mpz_t());
    return r.get_si();
}

std::int64_t gcd64(std::int64_t x, std::int64_t y)
{
    if (x < 0) x = -x;
    if (y < 0) y = -y;
    while (y != 0) {
        std::int64_t t = x % y;
        x = y;
        y = t;
    }
    return x;
}

std::int64_t inverse_mod(std::int64_t x, std::int64_t n)
{
    if (n == 1) return 0;
    std::int64_t r0 = mod(x, n), r1 = n, s0 = 1, s1 = 0;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = s0 - q * s1;
        s0 = s1;
        s1 = t;
    }
    if (r0 != 1) throw Error(ErrorKind::InvalidArgument, std::to_string(x) + " is not invertible mod " + std::to_string(n));
    return mod(s0, n);
}

GLMatModN::GLMatModN(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d, std::int64_t modulus)
    : e_{a, b, c, d}, n_(modulus)
{
    if (modulus < 1) throw Error(ErrorKind::InvalidArgument, "matrix modulus must be positive");
    normalize();
}

GLMatModN::GLMatModN(const IntMat2& m, std::int64_t modulus)
    : e_{mod(m.a, modulus), mod(m.b, modulus), mod(m.c, modulus), mod(m.d, modulus)}, n_(modulus)
{
    if (modulus < 1) throw Error(ErrorKind::InvalidArgument, "matrix modulus must be positive");
    normalize();
}

void GLMatModN::normalize()
{
    std::array<std::int64_t, 4> neg{};
    for (size_t i = 0; i < 4; ++i) {
        e_[i] = mod(e_[i], n_);
        neg[i] = mod(-e_[i], n_);
    }
    if (neg < e_) e_ = neg;
}

std::int64_t GLMatModN::det() const
{
    // Entries are below n_, so the products fit for any modulus up to 2^31.
    return mod(mod(e_[0] * e_[3], n_) - mod(e_[1] * e_[2], n_), n_);
}

GLMatModN GLMatModN::inverse() const
{
    std::int64_t inv = inverse_mod(det(), n_);
    auto m = [&](std::int64_t x) { return mod(mod(x, n_) * inv, n_); };
    return {m(e_[3]), m(-e_[1]), m(-e_[2]), m(e_[0]), n_};
}

GLMatModN GLMatModN::scaled(std::int64_t t) const
{
    std::int64_t s = mod(t, n_);
    return {mod(e_[0] * s, n_), mod(e_[1] * s, n_), mod(e_[2] * s, n_), mod(e_[3] * s, n_), n_};
}

std::string GLMatModN::to_string() const
{
    std::ostringstream os;
    os << *this;
    return os.str();
}

GLMatModN operator*(const GLMatModN& x, const GLMatModN& y)
{
    if (x.n_ != y.n_) throw Error(ErrorKind::InvalidArgument, "matrix moduli differ");
    const std::int64_t n = x.n_;
    auto mm = [n](std::int64_t p, std::int64_t q, std::int64_t r, std::int64_t s) {
        return mod(mod(p * q, n) + mod(r * s, n), n);
    };
    const auto& a = x.e_;
    const auto& b = y.e_;
    return {mm(a[0], b[0], a[1], b[2]), mm(a[0], b[1], a[1], b[3]), mm(a[2], b[0], a[3], b[2]),
            mm(a[2], b[1], a[3], b[3]), n};
}

std::ostream& operator<<(std::ostream& os, const GLMatModN& m)
{
    return os << "(" << m.a() << " " << m.b() << "; " << m.c() << " " << m.d() << ") mod " << m.modulus();
}

GLMatModN power(const GLMatModN& m, std::int64_t e)
{
    if (e < 0) return power(m.inverse(), -e);
    GLMatModN result = GLMatModN::identity(m.modulus());
    GLMatModN base = m;
    while (e != 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e != 0) base = base * base;
    }
    return result;
}

} // namespace cmf
