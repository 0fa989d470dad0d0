#pragma once

// 2x2 matrices: exact integer matrices and their reductions modulo N.

#include "cmfield/bignum.hpp"

#include <array>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace cmf {

template <typename Scalar>
struct Mat2 {
    Scalar a{}, b{}, c{}, d{};  // (a b; c d), row-major

    static Mat2 identity() { return {Scalar(1), Scalar(0), Scalar(0), Scalar(1)}; }

    Scalar det() const { return a * d - b * c; }

    friend Mat2 operator*(const Mat2& x, const Mat2& y)
    {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }

    friend bool operator==(const Mat2& x, const Mat2& y)
    {
        return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
    }
};

using IntMat2 = Mat2<Integer>;

IntMat2 power(const IntMat2& m, const Integer& e);

std::ostream& operator<<(std::ostream& os, const IntMat2& m);

/// Least nonnegative residue of x mod n (n > 0).
std::int64_t mod(std::int64_t x, std::int64_t n);
std::int64_t mod(const Integer& x, std::int64_t n);
/// Inverse of x mod n; throws InvalidArgument when gcd(x, n) != 1.
std::int64_t inverse_mod(std::int64_t x, std::int64_t n);
std::int64_t gcd64(std::int64_t x, std::int64_t y);

/// Element of GL2(Z/NZ) taken modulo {±1}. Stored in the canonical sign:
/// the lexicographically smaller (row-major, residues in [0, N)) of M and -M.
class GLMatModN
{
public:
    GLMatModN(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d, std::int64_t modulus);
    GLMatModN(const IntMat2& m, std::int64_t modulus);
    static GLMatModN identity(std::int64_t modulus) { return {1, 0, 0, 1, modulus}; }

    std::int64_t modulus() const { return n_; }
    std::int64_t a() const { return e_[0]; }
    std::int64_t b() const { return e_[1]; }
    std::int64_t c() const { return e_[2]; }
    std::int64_t d() const { return e_[3]; }
    const std::array<std::int64_t, 4>& entries() const { return e_; }

    std::int64_t det() const;
    bool invertible() const { return gcd64(det(), n_) == 1; }
    GLMatModN inverse() const;
    GLMatModN scaled(std::int64_t t) const;
    IntMat2 to_int() const { return {e_[0], e_[1], e_[2], e_[3]}; }
    std::string to_string() const;

    friend GLMatModN operator*(const GLMatModN& x, const GLMatModN& y);
    friend bool operator==(const GLMatModN& x, const GLMatModN& y) { return x.n_ == y.n_ && x.e_ == y.e_; }
    friend bool operator<(const GLMatModN& x, const GLMatModN& y)
    {
        return x.n_ != y.n_ ? x.n_ < y.n_ : x.e_ < y.e_;
    }

private:
    void normalize();

    std::array<std::int64_t, 4> e_;
    std::int64_t n_;
};

std::ostream& operator<<(std::ostream& os, const GLMatModN& m);

GLMatModN power(const GLMatModN& m, std::int64_t e);

} // namespace cmf
