#include "oracles.hpp"

#include <algorithm>
#include <stdexcept>

namespace oracle {

namespace {

void trim(Poly& p)
{
    while (!p.empty() && p.back() == 0) {
        p.pop_back();
    }
}

[[nodiscard]] Poly derivative(const Poly& p)
{
    Poly d;
    for (std::size_t i = 1; i < p.size(); ++i) {
        d.push_back(p[i] * Rational(static_cast<long long>(i)));
    }
    trim(d);
    return d;
}

/// Returns (quotient, remainder).
[[nodiscard]] std::pair<Poly, Poly> divmod(Poly a, const Poly& b)
{
    if (b.empty()) {
        throw std::runtime_error("division by zero polynomial");
    }
    trim(a);
    Poly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rational(0));
    while (a.size() >= b.size() && !a.empty()) {
        const std::size_t shift = a.size() - b.size();
        const Rational c = a.back() / b.back();
        q[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i) {
            a[i + shift] -= c * b[i];
        }
        a.pop_back();
        trim(a);
    }
    trim(q);
    return {q, a};
}

[[nodiscard]] Poly gcd(Poly a, Poly b)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        const Rational lc = a.back();
        for (auto& c : a) {
            c /= lc;
        }
    }
    return a;
}

[[nodiscard]] Poly sub(Poly a, const Poly& b)
{
    if (a.size() < b.size()) {
        a.resize(b.size(), Rational(0));
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        a[i] -= b[i];
    }
    trim(a);
    return a;
}

/// Yun: p = prod a_i^i with a_i square-free and coprime. Result[i-1] = a_i.
[[nodiscard]] std::vector<Poly> squarefree(const Poly& p)
{
    std::vector<Poly> out;
    const Poly dp = derivative(p);
    Poly a0 = gcd(p, dp);
    Poly b = divmod(p, a0).first;
    Poly c = divmod(dp, a0).first;
    Poly d = sub(c, derivative(b));
    while (b.size() > 1) {
        Poly a = gcd(b, d);
        out.push_back(a);
        b = divmod(b, a).first;
        c = divmod(d, a).first;
        d = sub(c, derivative(b));
    }
    return out;
}

[[nodiscard]] int sign(const Rational& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

[[nodiscard]] int changes(const std::vector<int>& signs)
{
    int count = 0;
    int last = 0;
    for (int s : signs) {
        if (s == 0) {
            continue;
        }
        if (last != 0 && s != last) {
            ++count;
        }
        last = s;
    }
    return count;
}

/// Distinct roots of a square-free p in (0, inf) and (-inf, 0); p(0) != 0.
[[nodiscard]] std::pair<int, int> sturm_counts(const Poly& p)
{
    std::vector<Poly> seq{p, derivative(p)};
    while (seq.back().size() > 1) {
        Poly r = divmod(seq[seq.size() - 2], seq.back()).second;
        for (auto& c : r) {
            c = -c;
        }
        if (r.empty()) {
            break;
        }
        seq.push_back(std::move(r));
    }
    std::vector<int> at_neg;
    std::vector<int> at_zero;
    std::vector<int> at_pos;
    for (const Poly& q : seq) {
        if (q.empty()) {
            continue;
        }
        const int lc = sign(q.back());
        const int deg = static_cast<int>(q.size()) - 1;
        at_pos.push_back(lc);
        at_neg.push_back(deg % 2 == 0 ? lc : -lc);
        at_zero.push_back(sign(q.front()));
    }
    return {changes(at_zero) - changes(at_pos), changes(at_neg) - changes(at_zero)};
}

}  // namespace

Poly characteristic_polynomial(const Matrix& a)
{
    const std::size_t n = a.size();
    // c_n = 1; M_0 = 0; M_k = A M_{k-1} + c_{n-k+1} I; c_{n-k} = -tr(A M_k)/k
    Poly c(n + 1, Rational(0));
    c[n] = 1;
    Matrix m(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t k = 1; k <= n; ++k) {
        Matrix next(n, std::vector<Rational>(n, Rational(0)));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                Rational v(0);
                for (std::size_t t = 0; t < n; ++t) {
                    v += a[i][t] * m[t][j];
                }
                next[i][j] = v;
            }
            next[i][i] += c[n - k + 1];
        }
        m = std::move(next);
        Rational tr(0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t t = 0; t < n; ++t) {
                tr += a[i][t] * m[t][i];
            }
        }
        c[n - k] = -tr / Rational(static_cast<long long>(k));
    }
    return c;
}

SturmInertia sturm_inertia(const Matrix& a)
{
    Poly p = characteristic_polynomial(a);
    SturmInertia out;
    while (!p.empty() && p.front() == 0) {
        p.erase(p.begin());
        ++out.zero;
    }
    if (p.size() <= 1) {
        return out;
    }
    const std::vector<Poly> parts = squarefree(p);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].size() <= 1) {
            continue;
        }
        const auto [pos, neg] = sturm_counts(parts[i]);
        out.positive += static_cast<int>(i + 1) * pos;
        out.negative += static_cast<int>(i + 1) * neg;
    }
    return out;
}

long long sturm_signature(const Matrix& a)
{
    const SturmInertia s = sturm_inertia(a);
    return s.positive - s.negative;
}

Rational laplace_det(const Matrix& a)
{
    const std::size_t n = a.size();
    if (n == 0) {
        return Rational(1);
    }
    if (n == 1) {
        return a[0][0];
    }
    Rational total(0);
    for (std::size_t col = 0; col < n; ++col) {
        if (a[0][col] == 0) {
            continue;
        }
        Matrix minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<Rational> row;
            for (std::size_t c = 0; c < n; ++c) {
                if (c != col) {
                    row.push_back(a[r][c]);
                }
            }
            minor.push_back(std::move(row));
        }
        const Rational term = a[0][col] * laplace_det(minor);
        total += (col % 2 == 0) ? term : -term;
    }
    return total;
}

Rational negative_cf(const std::vector<long long>& a)
{
    Rational v(a.back());
    for (std::size_t i = a.size() - 1; i-- > 0;) {
        v = Rational(a[i]) - Rational(1) / v;
    }
    return v;
}

Matrix random_symmetric(std::mt19937& rng, int dim, int range)
{
    std::uniform_int_distribution<int> dist(-range, range);
    Matrix m(static_cast<std::size_t>(dim), std::vector<Rational>(static_cast<std::size_t>(dim), Rational(0)));
    for (int i = 0; i < dim; ++i) {
        for (int j = i; j < dim; ++j) {
            const Rational v(dist(rng));
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    return m;
}

Matrix to_matrix(const std::vector<std::vector<long long>>& rows)
{
    Matrix m;
    for (const auto& r : rows) {
        std::vector<Rational> row;
        for (long long v : r) {
            row.emplace_back(v);
        }
        m.push_back(std::move(row));
    }
    return m;
}

}  // namespace oracle
