#pragma once

/**
 * @file lattice.hpp
 * @brief Exact symmetric bilinear forms over Q and integer matrices.
 *
 * All routines are exact. Signature comes from congruent diagonalization
 * (1x1 rational pivots, 2x2 hyperbolic pivots when the remaining diagonal is
 * zero), never from floating-point eigenvalues.
 */

#include "kirby/numbers.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace kirby {

/// Symmetric matrix of rationals with one distinct label per basis vector.
class SymmetricForm
{
public:
    SymmetricForm() = default;
    /// Throws InvalidParameter on asymmetry, shape mismatch or duplicate labels.
    SymmetricForm(std::vector<std::string> labels, std::vector<std::vector<Rational>> entries);

    [[nodiscard]] static SymmetricForm from_integers(std::vector<std::string> labels,
                                                     const std::vector<std::vector<long long>>& entries);
    /// Labels "x1".."xk" for quick construction.
    [[nodiscard]] static SymmetricForm from_integers(const std::vector<std::vector<long long>>& entries);

    [[nodiscard]] std::size_t dim() const noexcept { return labels_.size(); }
    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
    [[nodiscard]] const Rational& at(std::size_t i, std::size_t j) const { return entries_.at(i).at(j); }
    [[nodiscard]] const std::vector<std::vector<Rational>>& entries() const noexcept { return entries_; }
    [[nodiscard]] std::optional<std::size_t> index_of(const std::string& label) const;
    /// index_of or throw UnknownLabel.
    [[nodiscard]] std::size_t require_index(const std::string& label) const;
    [[nodiscard]] bool is_integral() const;

    /// Sets entries (i,j) and (j,i).
    void set(std::size_t i, std::size_t j, const Rational& value);
    /// Appends a basis vector with the given square; couplings to existing vectors start at 0.
    void append(const std::string& label, const Rational& square);
    /// Removes the listed indices (any order, no duplicates).
    void remove(std::vector<std::size_t> indices);
    void rename(std::size_t i, const std::string& label);

    [[nodiscard]] std::string to_string() const;
    friend bool operator==(const SymmetricForm&, const SymmetricForm&) = default;

private:
    std::vector<std::string> labels_;
    std::vector<std::vector<Rational>> entries_;
};

class IntegerMatrix
{
public:
    IntegerMatrix() = default;
    IntegerMatrix(std::size_t rows, std::size_t cols);
    [[nodiscard]] static IntegerMatrix from_rows(const std::vector<std::vector<long long>>& rows);
    [[nodiscard]] static IntegerMatrix identity(std::size_t n);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] Integer& operator()(std::size_t r, std::size_t c) { return data_.at(r * cols_ + c); }
    [[nodiscard]] const Integer& operator()(std::size_t r, std::size_t c) const { return data_.at(r * cols_ + c); }

    friend bool operator==(const IntegerMatrix&, const IntegerMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> data_;
};

struct Inertia
{
    std::size_t positive = 0;
    std::size_t negative = 0;
    std::size_t zero = 0;
};

[[nodiscard]] Rational determinant(const SymmetricForm& f);
[[nodiscard]] Inertia inertia(const SymmetricForm& f);
[[nodiscard]] long long signature(const SymmetricForm& f);
[[nodiscard]] std::size_t rank(const SymmetricForm& f);
[[nodiscard]] bool is_negative_definite(const SymmetricForm& f);

/// Handleslide of basis vector i over j: b_i <- b_i + sign * b_j, i.e. E^T f E.
[[nodiscard]] SymmetricForm congruence_slide(const SymmetricForm& f, std::size_t i, std::size_t j, int sign);

/// f_rest - L^T B^{-1} L for the block B on `block`. Throws SingularBlock.
[[nodiscard]] SymmetricForm schur_complement(const SymmetricForm& f, const std::vector<std::size_t>& block);

/// Exact inverse of a nondegenerate form (labels kept). Throws SingularBlock.
[[nodiscard]] std::vector<std::vector<Rational>> inverse(const SymmetricForm& f);

/// Form in the basis given by the columns of `basis` (K^T f K); labels "k1".."kr".
[[nodiscard]] SymmetricForm restrict_form(const SymmetricForm& f, const IntegerMatrix& basis);

/// Diagonal d1 | d2 | ... of the Smith normal form; min(rows, cols) entries, zeros last.
[[nodiscard]] std::vector<Integer> smith_normal_form(const IntegerMatrix& m);
[[nodiscard]] std::size_t integer_rank(const IntegerMatrix& m);
/// Columns form a Z-basis of {x in Z^cols : m x = 0}.
[[nodiscard]] IntegerMatrix integer_kernel_basis(const IntegerMatrix& m);

}  // namespace kirby
