#pragma once

/**
 * @file numbers.hpp
 * @brief Exact rationals, negative continued fractions and lens spaces.
 *
 * Continued fractions use the minus convention
 *
 *     [a1, a2, ..., ak] = a1 - 1/(a2 - 1/(... - 1/ak))
 *
 * and L(p, q) denotes the result of -p/q surgery on the unknot, so a linear
 * plumbing with framings [a1..ak] bounds L(p, q) where [a1..ak] = -p/q.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace kirby {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

[[nodiscard]] std::string to_string(const Integer& value);
[[nodiscard]] std::string to_string(const Rational& value);
/// Parses "a" or "a/b" with optional sign. Throws InvalidParameter.
[[nodiscard]] Rational parse_rational(const std::string& text);
[[nodiscard]] bool is_integer(const Rational& value);

struct ContinuedFraction
{
    std::vector<Integer> coefficients;

    /// True when every coefficient is <= -2 (the form cf_expand produces).
    [[nodiscard]] bool is_canonical() const;
    friend bool operator==(const ContinuedFraction&, const ContinuedFraction&) = default;
};

[[nodiscard]] Rational cf_eval(const ContinuedFraction& cf);
[[nodiscard]] ContinuedFraction cf_expand(const Integer& p, const Integer& q);
/// Framing string of C_n: [-n-2, -2, ..., -2] with n-2 copies of -2.
[[nodiscard]] ContinuedFraction cn_fraction(int n);

/// Normalized lens space: p >= 1, 0 <= q < p, gcd(p, q) = 1. L(1, 0) is S^3.
struct LensSpace
{
    Integer p{1};
    Integer q{0};

    [[nodiscard]] std::string to_string() const;
    friend bool operator==(const LensSpace&, const LensSpace&) = default;
};

[[nodiscard]] LensSpace lens_normalize(const Integer& p, const Integer& q);
/// Orientation-preserving homeomorphism: p equal and q' = q^{+-1} mod p.
[[nodiscard]] bool lens_equal(const LensSpace& a, const LensSpace& b);
/// Orientation reversal L(p, q) -> L(p, p - q). Never applied implicitly.
[[nodiscard]] LensSpace lens_mirror(const LensSpace& lens);
/// Representative with the smaller of q and q^{-1} mod p.
[[nodiscard]] LensSpace lens_canonical(const LensSpace& lens);
/// Parses "L(p,q)" or "S3". Throws InvalidParameter.
[[nodiscard]] LensSpace parse_lens(const std::string& text);

[[nodiscard]] Integer mod_inverse(const Integer& a, const Integer& m);

}  // namespace kirby
