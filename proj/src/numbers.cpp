#include "kirby/numbers.hpp"

#include "kirby/error.hpp"

#include <algorithm>
#include <cctype>

namespace kirby {

namespace {

[[nodiscard]] Integer ceil_div(const Integer& a, const Integer& b)
{
    // b > 0
    Integer quotient = a / b;
    if (quotient * b < a) {
        ++quotient;
    }
    return quotient;
}

[[nodiscard]] Integer floor_mod(const Integer& a, const Integer& m)
{
    Integer r = a % m;
    if (r < 0) {
        r += m;
    }
    return r;
}

[[nodiscard]] Integer parse_integer(const std::string& text)
{
    std::size_t pos = 0;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
        ++pos;
    }
    if (pos == text.size() ||
        !std::all_of(text.begin() + static_cast<std::ptrdiff_t>(pos), text.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; })) {
        throw Error(ErrorCode::InvalidParameter, "not an integer: '" + text + "'");
    }
    return Integer(text[0] == '+' ? text.substr(1) : text);
}

}  // namespace

std::string to_string(const Integer& value)
{
    return value.str();
}

std::string to_string(const Rational& value)
{
    const Integer den = denominator(value);
    if (den == 1) {
        return numerator(value).str();
    }
    return numerator(value).str() + "/" + den.str();
}

Rational parse_rational(const std::string& text)
{
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
        return Rational(parse_integer(text));
    }
    const Integer num = parse_integer(text.substr(0, slash));
    const Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) {
        throw Error(ErrorCode::InvalidParameter, "zero denominator in '" + text + "'");
    }
    return Rational(num, den);
}

bool is_integer(const Rational& value)
{
    return denominator(value) == 1;
}

bool ContinuedFraction::is_canonical() const
{
    return !coefficients.empty() &&
           std::all_of(coefficients.begin(), coefficients.end(),
                       [](const Integer& a) { return a <= -2; });
}

Rational cf_eval(const ContinuedFraction& cf)
{
    if (cf.coefficients.empty()) {
        throw Error(ErrorCode::InvalidFraction, "empty continued fraction");
    }
    Rational value(cf.coefficients.back());
    for (auto it = cf.coefficients.rbegin() + 1; it != cf.coefficients.rend(); ++it) {
        if (value == 0) {
            throw Error(ErrorCode::DegenerateFraction,
                        "suffix evaluates to 0 at a division point (S^1 x S^2 summand)");
        }
        value = Rational(*it) - 1 / value;
    }
    return value;
}

ContinuedFraction cf_expand(const Integer& p, const Integer& q)
{
    if (!(p > q && q >= 1) || gcd(p, q) != 1) {
        throw Error(ErrorCode::InvalidFraction,
                    "cf_expand needs p > q >= 1 coprime, got (" + p.str() + ", " + q.str() + ")");
    }
    ContinuedFraction cf;
    Integer num = p;
    Integer den = q;
    while (den != 0) {
        const Integer c = ceil_div(num, den);
        cf.coefficients.push_back(-c);
        const Integer rest = c * den - num;
        num = den;
        den = rest;
    }
    return cf;
}

ContinuedFraction cn_fraction(int n)
{
    if (n < 2) {
        throw Error(ErrorCode::InvalidParameter, "C_n needs n >= 2, got " + std::to_string(n));
    }
    ContinuedFraction cf;
    cf.coefficients.emplace_back(-n - 2);
    for (int i = 0; i < n - 2; ++i) {
        cf.coefficients.emplace_back(-2);
    }
    return cf;
}

std::string LensSpace::to_string() const
{
    return "L(" + p.str() + "," + q.str() + ")";
}

LensSpace lens_normalize(const Integer& p, const Integer& q)
{
    if (p == 0) {
        throw Error(ErrorCode::InvalidParameter, "lens space with p = 0");
    }
    if (gcd(p, q) != 1) {
        throw Error(ErrorCode::InvalidParameter,
                    "lens space needs gcd(p, q) = 1, got (" + p.str() + ", " + q.str() + ")");
    }
    Integer pp = p;
    Integer qq = q;
    if (pp < 0) {
        pp = -pp;
        qq = -qq;
    }
    return LensSpace{pp, floor_mod(qq, pp)};
}

Integer mod_inverse(const Integer& a, const Integer& m)
{
    // Extended Euclid; caller guarantees gcd(a, m) = 1.
    Integer old_r = floor_mod(a, m);
    Integer r = m;
    Integer old_s = 1;
    Integer s = 0;
    while (r != 0) {
        const Integer quotient = old_r / r;
        Integer tmp = old_r - quotient * r;
        old_r = r;
        r = tmp;
        tmp = old_s - quotient * s;
        old_s = s;
        s = tmp;
    }
    return floor_mod(old_s, m);
}

bool lens_equal(const LensSpace& a, const LensSpace& b)
{
    if (a.p != b.p) {
        return false;
    }
    if (a.p == 1) {
        return true;
    }
    return floor_mod(a.q - b.q, a.p) == 0 || floor_mod(a.q * b.q - 1, a.p) == 0;
}

LensSpace lens_mirror(const LensSpace& lens)
{
    return lens_normalize(lens.p, lens.p - lens.q);
}

LensSpace lens_canonical(const LensSpace& lens)
{
    if (lens.p == 1) {
        return lens;
    }
    const Integer inverse = mod_inverse(lens.q, lens.p);
    return LensSpace{lens.p, std::min(lens.q, inverse)};
}

LensSpace parse_lens(const std::string& text)
{
    if (text == "S3") {
        return LensSpace{};
    }
    if (text.size() < 6 || text.rfind("L(", 0) != 0 || text.back() != ')') {
        throw Error(ErrorCode::InvalidParameter, "expected L(p,q), got '" + text + "'");
    }
    const std::string inner = text.substr(2, text.size() - 3);
    const auto comma = inner.find(',');
    if (comma == std::string::npos) {
        throw Error(ErrorCode::InvalidParameter, "expected L(p,q), got '" + text + "'");
    }
    return lens_normalize(parse_integer(inner.substr(0, comma)),
                          parse_integer(inner.substr(comma + 1)));
}

}  // namespace kirby
