#pragma once

/**
 * @file handlecalc.hpp
 * @brief Handle expressions of 4-manifolds and the Kirby move set, tracked at
 *        the level of homology and intersection lattices.
 *
 * A HandleExpression is a 0-handle, some 1-handles (dotted circles), framed
 * 2-handles, and opaque pieces joined by boundary connected sum. Each 2-handle
 * carries its winding numbers around the 1-handles; the symmetric `form`
 * holds framings on the diagonal and pairwise linking numbers off it.
 *
 * Homology is read off the winding matrix W (rows = 1-handles,
 * columns = 2-handles): H_1 = coker W, H_2 = ker W with the form restricted to
 * an integral basis of ker W. Moves are checked against lattice-level
 * preconditions only; isotopy of the underlying link diagrams is not verified.
 */

#include "kirby/lattice.hpp"
#include "kirby/numbers.hpp"
#include "kirby/plumbing.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace kirby {

using Label = std::string;

/// A sealed summand whose interior is not drawn. `glued` pieces are attached
/// along their boundary to the visible handles (the result of a rational
/// blow-down with non-trivial coupling); their H_1 does not split off.
struct OpaquePiece
{
    std::string name;
    std::string kind;
    long long b1 = 0;
    long long b2 = 0;
    long long euler = 1;
    long long sigma = 0;
    std::vector<Integer> h1_torsion;
    std::optional<LensSpace> boundary;
    std::optional<bool> spin;
    bool glued = false;
    /// n for a rational ball B_n, 0 otherwise.
    int bn = 0;

    friend bool operator==(const OpaquePiece&, const OpaquePiece&) = default;
};

[[nodiscard]] OpaquePiece bn_piece(int n, std::string name, bool glued);

class HandleExpression
{
public:
    HandleExpression() = default;

    [[nodiscard]] const std::vector<Label>& one_handles() const noexcept { return one_handles_; }
    [[nodiscard]] const std::vector<Label>& two_handles() const noexcept { return form_.labels(); }
    [[nodiscard]] const SymmetricForm& form() const noexcept { return form_; }
    [[nodiscard]] const std::vector<OpaquePiece>& pieces() const noexcept { return pieces_; }
    [[nodiscard]] const std::optional<LensSpace>& boundary_claim() const noexcept { return boundary_; }

    [[nodiscard]] std::size_t one_handle_count() const noexcept { return one_handles_.size(); }
    [[nodiscard]] std::size_t two_handle_count() const noexcept { return form_.dim(); }
    [[nodiscard]] bool has_two_handle(const Label& l) const { return form_.index_of(l).has_value(); }
    [[nodiscard]] bool has_one_handle(const Label& l) const;
    [[nodiscard]] std::size_t two_index(const Label& l) const { return form_.require_index(l); }
    [[nodiscard]] std::size_t one_index(const Label& l) const;
    [[nodiscard]] const Integer& winding(const Label& two, const Label& one) const;
    [[nodiscard]] const std::vector<Integer>& winding_vector(const Label& two) const;
    [[nodiscard]] const std::vector<Integer>& windings_of(std::size_t two) const { return windings_.at(two); }
    /// Winding matrix: rows = 1-handles, columns = 2-handles.
    [[nodiscard]] IntegerMatrix winding_matrix() const;
    [[nodiscard]] std::optional<std::size_t> piece_index(const std::string& name) const;
    [[nodiscard]] bool has_glued_piece() const;

    /// First "<prefix>k" not used by any handle or piece, past or present.
    [[nodiscard]] Label fresh_label(const std::string& prefix) const;
    [[nodiscard]] std::vector<Label> fresh_labels(const std::string& prefix, std::size_t count) const;

    // Low-level builders used by the moves and constructors.
    void add_one_handle(const Label& l);
    void add_two_handle(const Label& l, const Rational& framing, std::vector<Integer> winding = {});
    void set_linking(const Label& a, const Label& b, const Rational& value);
    void set_winding(const Label& two, const Label& one, const Integer& value);
    void remove_two_handles(const std::vector<Label>& labels);
    void remove_one_handle(const Label& l);
    void replace_form_keep_windings(SymmetricForm form);
    void add_piece(OpaquePiece piece);
    void remove_piece(const std::string& name);
    void set_boundary(std::optional<LensSpace> b) { boundary_ = std::move(b); }
    /// Renames a handle or piece; used to check relabeling invariance.
    void relabel(const Label& from, const Label& to);

    friend bool operator==(const HandleExpression& a, const HandleExpression& b)
    {
        return a.one_handles_ == b.one_handles_ && a.form_ == b.form_ && a.windings_ == b.windings_ &&
               a.pieces_ == b.pieces_ && a.boundary_ == b.boundary_;
    }

private:
    void claim(const Label& l);

    std::vector<Label> one_handles_;
    SymmetricForm form_;
    /// windings_[two-handle index][one-handle index]
    std::vector<std::vector<Integer>> windings_;
    std::vector<OpaquePiece> pieces_;
    std::optional<LensSpace> boundary_;
    std::set<Label> used_labels_;
};

// --- constructors ---------------------------------------------------------

[[nodiscard]] HandleExpression from_plumbing(const PlumbingGraph& g);
/// B_n: one 1-handle, one 2-handle winding n times with framing n - 1.
[[nodiscard]] HandleExpression bn_expression(int n, const Label& one = "d", const Label& two = "b");
/// Elliptic surface E(m): an opaque piece carrying everything except one
/// 0-framed fishtail-fiber handle `fiber`, so totals are b2 = 12m - 2,
/// sigma = -8m, euler = 12m.
[[nodiscard]] HandleExpression elliptic_expression(int m, const Label& fiber = "f");

// --- invariants -----------------------------------------------------------

struct Homology
{
    long long b1 = 0;
    long long b2 = 0;
    /// nullopt when a glued piece makes integral H_1 unavailable.
    std::optional<std::vector<Integer>> h1_torsion;
};

struct EulerSigma
{
    long long euler = 0;
    long long sigma = 0;
};

[[nodiscard]] Homology homology(const HandleExpression& h);
[[nodiscard]] EulerSigma euler_sigma(const HandleExpression& h);
/// Form on an integral basis of ker W (the intersection form of the visible handles).
[[nodiscard]] SymmetricForm intersection_form(const HandleExpression& h);

struct Invariants
{
    long long b1 = 0;
    long long b2 = 0;
    long long euler = 0;
    long long sigma = 0;
    Rational det{1};
    std::optional<std::vector<Integer>> torsion;
    std::optional<LensSpace> boundary;
    /// Sorted piece kinds, with a '*' suffix on glued pieces.
    std::vector<std::string> pieces;

    friend bool operator==(const Invariants&, const Invariants&) = default;
};

[[nodiscard]] Invariants invariants(const HandleExpression& h);
[[nodiscard]] std::string torsion_string(const std::optional<std::vector<Integer>>& torsion);

// --- moves ----------------------------------------------------------------

/// Adds a 1-handle and a 0-framed 2-handle running over it once. `links` sets
/// the new 2-handle's linking with existing 2-handles (default: unlinked).
[[nodiscard]] HandleExpression add_cancelling_pair(const HandleExpression& h,
                                                   std::optional<Label> one = std::nullopt,
                                                   std::optional<Label> two = std::nullopt,
                                                   const std::map<Label, Integer>& links = {});
/// Needs: `two` winds +-1 on `one` and 0 on every other 1-handle, and no
/// other 2-handle winds on `one`. Otherwise NotCancelling.
[[nodiscard]] HandleExpression remove_cancelling_pair(const HandleExpression& h, const Label& one,
                                                      const Label& two);
/// Slides 2-handle i over j: winding_i += sign * winding_j, form by congruence.
[[nodiscard]] HandleExpression slide(const HandleExpression& h, const Label& i, const Label& j, int sign);
/// Connected sum with CP^2-bar: new unlinked -1 handle.
[[nodiscard]] HandleExpression blow_up(const HandleExpression& h, std::optional<Label> label = std::nullopt);
/// Removes an unwound -1 handle via the Schur complement. Errors: NotBlowdownable.
[[nodiscard]] HandleExpression blow_down(const HandleExpression& h, const Label& label);

/// Replaces the C_n chain (in order S_1..S_{n-1}) by a B_n piece; the rest of
/// the form becomes the Schur complement over the chain block.
[[nodiscard]] HandleExpression rational_blow_down(const HandleExpression& h, const std::vector<Label>& chain,
                                                  int n, std::optional<std::string> piece_name = std::nullopt);

/// Coupling of an existing 2-handle to one sphere of the new chain.
struct ChainCoupling
{
    Label handle;
    std::size_t chain_index = 0;  // 0-based: S_1 is 0
    Integer linking;
};

/// Replaces a B_n piece by a C_n chain with the given couplings. The rest of
/// the form becomes S + L^T C^{-1} L, which must be integral unless other
/// glued pieces remain. Errors: UnknownPiece, InvalidCoupling.
[[nodiscard]] HandleExpression rational_blow_up(const HandleExpression& h, const std::string& piece,
                                                const std::vector<Label>& chain_labels,
                                                const std::vector<ChainCoupling>& couplings = {});

/// Coupling of an existing 2-handle to an unsealed B_n: winding around its
/// 1-handle and linking with its (n-1)-framed 2-handle.
struct BallCoupling
{
    Integer winding;
    Integer linking;
};

/// Opens a B_n piece into its handles (1-handle `one`, 2-handle `two`). The
/// other handles' framings and linkings are re-derived so that the rational
/// form on the complement of the ball is unchanged; the result must be
/// integral unless other glued pieces remain (InvalidCoupling).
[[nodiscard]] HandleExpression unseal_bn(const HandleExpression& h, const std::string& piece, const Label& one,
                                         const Label& two, const std::map<Label, BallCoupling>& couplings);
/// Inverse of unseal_bn: a 1-handle with a single 2-handle winding k >= 2 times,
/// framed k - 1, becomes a B_k piece.
[[nodiscard]] HandleExpression seal_bn(const HandleExpression& h, const Label& one, const Label& two,
                                       std::optional<std::string> piece_name = std::nullopt);

[[nodiscard]] bool is_spin_bn(int n);

/// Chains of unwound 2-handles whose form block is exactly the C_n matrix.
[[nodiscard]] std::vector<std::vector<Label>> find_cn_chains(const HandleExpression& h, int n);
[[nodiscard]] SymmetricForm cn_form(int n, const std::vector<Label>& labels);

// --- ledger ---------------------------------------------------------------

struct LedgerStep
{
    std::string move;
    std::vector<std::string> params;
    Invariants invariants;
};

class Ledger
{
public:
    void record(std::string move, std::vector<std::string> params, const HandleExpression& h);
    [[nodiscard]] const std::vector<LedgerStep>& steps() const noexcept { return steps_; }
    [[nodiscard]] bool empty() const noexcept { return steps_.empty(); }
    [[nodiscard]] nlohmann::ordered_json to_json() const;
    [[nodiscard]] std::string to_text() const;

private:
    std::vector<LedgerStep> steps_;
};

[[nodiscard]] nlohmann::ordered_json to_json(const Invariants& inv);
[[nodiscard]] nlohmann::ordered_json to_json(const HandleExpression& h);

}  // namespace kirby
