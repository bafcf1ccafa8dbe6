#include "kirby/lattice.hpp"

#include "kirby/error.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

namespace kirby {

namespace {

using Matrix = std::vector<std::vector<Rational>>;

[[nodiscard]] std::vector<std::string> default_labels(std::size_t n)
{
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back("x" + std::to_string(i + 1));
    }
    return labels;
}

/// Solves a x = b for each column of b; a must be square and nonsingular.
[[nodiscard]] Matrix solve(Matrix a, Matrix b)
{
    const std::size_t n = a.size();
    const std::size_t m = b.empty() ? 0 : b.front().size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) {
            ++pivot;
        }
        if (pivot == n) {
            throw Error(ErrorCode::SingularBlock, "block is degenerate");
        }
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col] == 0) {
                continue;
            }
            const Rational factor = a[row][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) {
                a[row][k] -= factor * a[col][k];
            }
            for (std::size_t k = 0; k < m; ++k) {
                b[row][k] -= factor * b[col][k];
            }
        }
    }
    for (std::size_t row = 0; row < n; ++row) {
        for (std::size_t k = 0; k < m; ++k) {
            b[row][k] /= a[row][row];
        }
    }
    return b;
}

[[nodiscard]] Integer abs_value(const Integer& v)
{
    return v < 0 ? Integer(-v) : v;
}

}  // namespace

// --- SymmetricForm --------------------------------------------------------

SymmetricForm::SymmetricForm(std::vector<std::string> labels, Matrix entries)
    : labels_(std::move(labels))
    , entries_(std::move(entries))
{
    if (entries_.size() != labels_.size()) {
        throw Error(ErrorCode::InvalidParameter, "form: label count does not match dimension");
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].size() != labels_.size()) {
            throw Error(ErrorCode::InvalidParameter, "form: matrix is not square");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (entries_[i][j] != entries_[j][i]) {
                throw Error(ErrorCode::InvalidParameter, "form: matrix is not symmetric");
            }
        }
    }
    const std::set<std::string> unique(labels_.begin(), labels_.end());
    if (unique.size() != labels_.size()) {
        throw Error(ErrorCode::InvalidParameter, "form: duplicate basis label");
    }
}

SymmetricForm SymmetricForm::from_integers(std::vector<std::string> labels,
                                           const std::vector<std::vector<long long>>& entries)
{
    Matrix m;
    m.reserve(entries.size());
    for (const auto& row : entries) {
        std::vector<Rational> r;
        r.reserve(row.size());
        for (long long v : row) {
            r.emplace_back(v);
        }
        m.push_back(std::move(r));
    }
    return SymmetricForm(std::move(labels), std::move(m));
}

SymmetricForm SymmetricForm::from_integers(const std::vector<std::vector<long long>>& entries)
{
    return from_integers(default_labels(entries.size()), entries);
}

std::optional<std::size_t> SymmetricForm::index_of(const std::string& label) const
{
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t SymmetricForm::require_index(const std::string& label) const
{
    if (auto idx = index_of(label)) {
        return *idx;
    }
    throw Error(ErrorCode::UnknownLabel, "no basis element labelled '" + label + "'");
}

bool SymmetricForm::is_integral() const
{
    return std::all_of(entries_.begin(), entries_.end(), [](const auto& row) {
        return std::all_of(row.begin(), row.end(), [](const Rational& v) { return is_integer(v); });
    });
}

void SymmetricForm::set(std::size_t i, std::size_t j, const Rational& value)
{
    entries_.at(i).at(j) = value;
    entries_.at(j).at(i) = value;
}

void SymmetricForm::append(const std::string& label, const Rational& square)
{
    if (index_of(label)) {
        throw Error(ErrorCode::InvalidParameter, "form: duplicate basis label '" + label + "'");
    }
    for (auto& row : entries_) {
        row.emplace_back(0);
    }
    labels_.push_back(label);
    entries_.emplace_back(labels_.size(), Rational(0));
    entries_.back().back() = square;
}

void SymmetricForm::remove(std::vector<std::size_t> indices)
{
    std::sort(indices.begin(), indices.end(), std::greater<>());
    for (std::size_t idx : indices) {
        if (idx >= dim()) {
            throw Error(ErrorCode::IndexError, "form: index out of range");
        }
        labels_.erase(labels_.begin() + static_cast<std::ptrdiff_t>(idx));
        entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(idx));
        for (auto& row : entries_) {
            row.erase(row.begin() + static_cast<std::ptrdiff_t>(idx));
        }
    }
}

void SymmetricForm::rename(std::size_t i, const std::string& label)
{
    if (auto existing = index_of(label); existing && *existing != i) {
        throw Error(ErrorCode::InvalidParameter, "form: duplicate basis label '" + label + "'");
    }
    labels_.at(i) = label;
}

std::string SymmetricForm::to_string() const
{
    std::ostringstream out;
    out << '[';
    for (std::size_t i = 0; i < dim(); ++i) {
        out << (i ? ",[" : "[");
        for (std::size_t j = 0; j < dim(); ++j) {
            out << (j ? "," : "") << kirby::to_string(entries_[i][j]);
        }
        out << ']';
    }
    out << ']';
    return out.str();
}

// --- IntegerMatrix --------------------------------------------------------

IntegerMatrix::IntegerMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows)
    , cols_(cols)
    , data_(rows * cols, Integer(0))
{}

IntegerMatrix IntegerMatrix::from_rows(const std::vector<std::vector<long long>>& rows)
{
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    IntegerMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) {
            throw Error(ErrorCode::InvalidParameter, "ragged integer matrix");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(r, c) = rows[r][c];
        }
    }
    return m;
}

IntegerMatrix IntegerMatrix::identity(std::size_t n)
{
    IntegerMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1;
    }
    return m;
}

// --- invariants -----------------------------------------------------------

Rational determinant(const SymmetricForm& f)
{
    Matrix a = f.entries();
    const std::size_t n = a.size();
    Rational det(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) {
            ++pivot;
        }
        if (pivot == n) {
            return Rational(0);
        }
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (std::size_t row = col + 1; row < n; ++row) {
            if (a[row][col] == 0) {
                continue;
            }
            const Rational factor = a[row][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) {
                a[row][k] -= factor * a[col][k];
            }
        }
    }
    return det;
}

Inertia inertia(const SymmetricForm& f)
{
    Matrix a = f.entries();
    std::vector<std::size_t> active(f.dim());
    std::iota(active.begin(), active.end(), std::size_t{0});
    Inertia result;

    auto drop = [&active](std::size_t idx) {
        active.erase(std::find(active.begin(), active.end(), idx));
    };

    while (!active.empty()) {
        auto diag = std::find_if(active.begin(), active.end(),
                                 [&a](std::size_t i) { return a[i][i] != 0; });
        if (diag != active.end()) {
            const std::size_t p = *diag;
            const Rational pivot = a[p][p];
            (pivot > 0 ? result.positive : result.negative) += 1;
            drop(p);
            for (std::size_t j : active) {
                if (a[j][p] == 0) {
                    continue;
                }
                const Rational factor = a[j][p] / pivot;
                for (std::size_t k : active) {
                    a[j][k] -= factor * a[p][k];
                }
            }
            continue;
        }

        std::optional<std::pair<std::size_t, std::size_t>> off;
        for (std::size_t x = 0; x < active.size() && !off; ++x) {
            for (std::size_t y = x + 1; y < active.size(); ++y) {
                if (a[active[x]][active[y]] != 0) {
                    off = std::make_pair(active[x], active[y]);
                    break;
                }
            }
        }
        if (!off) {
            result.zero += active.size();
            break;
        }

        // Hyperbolic pivot [[0,b],[b,0]] contributes one positive and one negative direction.
        const auto [p, q] = *off;
        const Rational b = a[p][q];
        result.positive += 1;
        result.negative += 1;
        drop(p);
        drop(q);
        const Matrix snapshot = a;
        for (std::size_t k : active) {
            for (std::size_t l : active) {
                a[k][l] = snapshot[k][l] -
                          (snapshot[k][p] * snapshot[q][l] + snapshot[k][q] * snapshot[p][l]) / b;
            }
        }
    }
    return result;
}

long long signature(const SymmetricForm& f)
{
    const Inertia in = inertia(f);
    return static_cast<long long>(in.positive) - static_cast<long long>(in.negative);
}

std::size_t rank(const SymmetricForm& f)
{
    const Inertia in = inertia(f);
    return in.positive + in.negative;
}

bool is_negative_definite(const SymmetricForm& f)
{
    const Inertia in = inertia(f);
    return in.positive == 0 && in.zero == 0;
}

SymmetricForm congruence_slide(const SymmetricForm& f, std::size_t i, std::size_t j, int sign)
{
    if (i >= f.dim() || j >= f.dim() || i == j) {
        throw Error(ErrorCode::IndexError, "slide needs two distinct in-range indices");
    }
    if (sign != 1 && sign != -1) {
        throw Error(ErrorCode::InvalidParameter, "slide sign must be +1 or -1");
    }
    SymmetricForm out = f;
    const Rational s(sign);
    // Row/column i += s * row/column j; the (i,i) entry picks up both.
    const Rational new_ii = f.at(i, i) + 2 * s * f.at(i, j) + f.at(j, j);
    for (std::size_t k = 0; k < f.dim(); ++k) {
        if (k != i) {
            out.set(i, k, f.at(i, k) + s * f.at(j, k));
        }
    }
    out.set(i, i, new_ii);
    return out;
}

std::vector<std::vector<Rational>> inverse(const SymmetricForm& f)
{
    Matrix id(f.dim(), std::vector<Rational>(f.dim(), Rational(0)));
    for (std::size_t i = 0; i < f.dim(); ++i) {
        id[i][i] = 1;
    }
    return solve(f.entries(), std::move(id));
}

SymmetricForm schur_complement(const SymmetricForm& f, const std::vector<std::size_t>& block)
{
    const std::set<std::size_t> in_block(block.begin(), block.end());
    if (in_block.size() != block.size()) {
        throw Error(ErrorCode::IndexError, "schur_complement: repeated block index");
    }
    for (std::size_t idx : block) {
        if (idx >= f.dim()) {
            throw Error(ErrorCode::IndexError, "schur_complement: block index out of range");
        }
    }
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < f.dim(); ++i) {
        if (!in_block.contains(i)) {
            rest.push_back(i);
        }
    }

    Matrix b(block.size(), std::vector<Rational>(block.size()));
    Matrix coupling(block.size(), std::vector<Rational>(rest.size()));
    for (std::size_t x = 0; x < block.size(); ++x) {
        for (std::size_t y = 0; y < block.size(); ++y) {
            b[x][y] = f.at(block[x], block[y]);
        }
        for (std::size_t y = 0; y < rest.size(); ++y) {
            coupling[x][y] = f.at(block[x], rest[y]);
        }
    }
    const Matrix solved = solve(b, coupling);  // B^{-1} L

    std::vector<std::string> labels;
    Matrix out(rest.size(), std::vector<Rational>(rest.size()));
    for (std::size_t x = 0; x < rest.size(); ++x) {
        labels.push_back(f.labels()[rest[x]]);
        for (std::size_t y = 0; y < rest.size(); ++y) {
            Rational v = f.at(rest[x], rest[y]);
            for (std::size_t k = 0; k < block.size(); ++k) {
                v -= coupling[k][x] * solved[k][y];
            }
            out[x][y] = v;
        }
    }
    return SymmetricForm(std::move(labels), std::move(out));
}

SymmetricForm restrict_form(const SymmetricForm& f, const IntegerMatrix& basis)
{
    if (basis.rows() != f.dim()) {
        throw Error(ErrorCode::IndexError, "restrict_form: basis has wrong row count");
    }
    const std::size_t r = basis.cols();
    const std::size_t n = f.dim();
    // fk = f * K
    Matrix fk(n, std::vector<Rational>(r, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < r; ++c) {
            Rational v(0);
            for (std::size_t k = 0; k < n; ++k) {
                if (basis(k, c) != 0) {
                    v += f.at(i, k) * Rational(basis(k, c));
                }
            }
            fk[i][c] = v;
        }
    }
    Matrix out(r, std::vector<Rational>(r, Rational(0)));
    for (std::size_t a = 0; a < r; ++a) {
        for (std::size_t c = 0; c < r; ++c) {
            Rational v(0);
            for (std::size_t k = 0; k < n; ++k) {
                if (basis(k, a) != 0) {
                    v += Rational(basis(k, a)) * fk[k][c];
                }
            }
            out[a][c] = v;
        }
    }
    std::vector<std::string> labels;
    for (std::size_t a = 0; a < r; ++a) {
        labels.push_back("k" + std::to_string(a + 1));
    }
    return SymmetricForm(std::move(labels), std::move(out));
}

// --- integer matrices -----------------------------------------------------

std::vector<Integer> smith_normal_form(const IntegerMatrix& input)
{
    IntegerMatrix a = input;
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    const std::size_t diag = std::min(rows, cols);
    std::vector<Integer> factors;

    for (std::size_t t = 0; t < diag; ++t) {
        while (true) {
            // Smallest nonzero entry of the trailing submatrix becomes the pivot.
            std::optional<std::pair<std::size_t, std::size_t>> best;
            for (std::size_t r = t; r < rows; ++r) {
                for (std::size_t c = t; c < cols; ++c) {
                    if (a(r, c) != 0 && (!best || abs_value(a(r, c)) < abs_value(a(best->first, best->second)))) {
                        best = std::make_pair(r, c);
                    }
                }
            }
            if (!best) {
                break;
            }
            for (std::size_t c = 0; c < cols; ++c) {
                std::swap(a(t, c), a(best->first, c));
            }
            for (std::size_t r = 0; r < rows; ++r) {
                std::swap(a(r, t), a(r, best->second));
            }

            bool clean = true;
            for (std::size_t r = t + 1; r < rows; ++r) {
                const Integer q = a(r, t) / a(t, t);
                if (q != 0) {
                    for (std::size_t c = t; c < cols; ++c) {
                        a(r, c) -= q * a(t, c);
                    }
                }
                clean = clean && a(r, t) == 0;
            }
            for (std::size_t c = t + 1; c < cols; ++c) {
                const Integer q = a(t, c) / a(t, t);
                if (q != 0) {
                    for (std::size_t r = t; r < rows; ++r) {
                        a(r, c) -= q * a(r, t);
                    }
                }
                clean = clean && a(t, c) == 0;
            }
            if (!clean) {
                continue;
            }
            // Enforce divisibility of the rest by the pivot.
            std::optional<std::size_t> bad_row;
            for (std::size_t r = t + 1; r < rows && !bad_row; ++r) {
                for (std::size_t c = t + 1; c < cols; ++c) {
                    if (a(r, c) % a(t, t) != 0) {
                        bad_row = r;
                        break;
                    }
                }
            }
            if (!bad_row) {
                break;
            }
            for (std::size_t c = t; c < cols; ++c) {
                a(t, c) += a(*bad_row, c);
            }
        }
        factors.push_back(abs_value(a(t, t)));
    }
    return factors;
}

std::size_t integer_rank(const IntegerMatrix& m)
{
    const auto factors = smith_normal_form(m);
    return static_cast<std::size_t>(
        std::count_if(factors.begin(), factors.end(), [](const Integer& d) { return d != 0; }));
}

IntegerMatrix integer_kernel_basis(const IntegerMatrix& input)
{
    IntegerMatrix a = input;
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    IntegerMatrix u = IntegerMatrix::identity(cols);

    auto column_axpy = [&](std::size_t dst, std::size_t src, const Integer& q) {
        for (std::size_t r = 0; r < rows; ++r) {
            a(r, dst) -= q * a(r, src);
        }
        for (std::size_t r = 0; r < cols; ++r) {
            u(r, dst) -= q * u(r, src);
        }
    };
    auto column_swap = [&](std::size_t x, std::size_t y) {
        for (std::size_t r = 0; r < rows; ++r) {
            std::swap(a(r, x), a(r, y));
        }
        for (std::size_t r = 0; r < cols; ++r) {
            std::swap(u(r, x), u(r, y));
        }
    };

    // Column echelon form by unimodular column operations, tracked in u.
    std::size_t pivot_col = 0;
    for (std::size_t r = 0; r < rows && pivot_col < cols; ++r) {
        while (true) {
            std::optional<std::size_t> best;
            for (std::size_t c = pivot_col; c < cols; ++c) {
                if (a(r, c) != 0 && (!best || abs_value(a(r, c)) < abs_value(a(r, *best)))) {
                    best = c;
                }
            }
            if (!best) {
                break;
            }
            column_swap(pivot_col, *best);
            bool done = true;
            for (std::size_t c = pivot_col + 1; c < cols; ++c) {
                if (a(r, c) != 0) {
                    column_axpy(c, pivot_col, a(r, c) / a(r, pivot_col));
                    done = done && a(r, c) == 0;
                }
            }
            if (done) {
                ++pivot_col;
                break;
            }
        }
    }

    IntegerMatrix kernel(cols, cols - pivot_col);
    for (std::size_t c = pivot_col; c < cols; ++c) {
        for (std::size_t r = 0; r < cols; ++r) {
            kernel(r, c - pivot_col) = u(r, c);
        }
    }
    return kernel;
}

}  // namespace kirby
