#include "kirby/handlecalc.hpp"

#include "kirby/error.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace kirby {

namespace {



[[nodiscard]] bool all_zero(const std::vector<Integer>& v)
{
    return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

[[nodiscard]] std::string join(const std::vector<std::string>& parts, const std::string& sep)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) {
            out += sep;
        }
        out += parts[i];
    }
    return out;
}

[[nodiscard]] std::string piece_name_for(const HandleExpression& h, std::optional<std::string> requested,
                                         const std::string& base)
{
    if (requested) {
        if (h.piece_index(*requested) || h.has_two_handle(*requested) || h.has_one_handle(*requested)) {
            throw Error(ErrorCode::InvalidParameter, "label '" + *requested + "' is already in use");
        }
        return *requested;
    }
    if (!h.piece_index(base) && !h.has_two_handle(base) && !h.has_one_handle(base)) {
        return base;
    }
    return h.fresh_label(base + "_");
}

[[nodiscard]] nlohmann::ordered_json integer_json(const Integer& v)
{
    if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max()) {
        return static_cast<long long>(v);
    }
    return to_string(v);
}

}  // namespace

OpaquePiece bn_piece(int n, std::string name, bool glued)
{
    if (n < 2) {
        throw Error(ErrorCode::InvalidParameter, "B_n needs n >= 2, got " + std::to_string(n));
    }
    OpaquePiece p;
    p.name = std::move(name);
    p.kind = "B" + std::to_string(n);
    p.b1 = 0;
    p.b2 = 0;
    p.euler = 1;
    p.sigma = 0;
    p.h1_torsion = {Integer(n)};
    p.boundary = lens_normalize(Integer(n) * n, Integer(n - 1));
    p.spin = is_spin_bn(n);
    p.glued = glued;
    p.bn = n;
    return p;
}

bool is_spin_bn(int n)
{
    if (n < 2) {
        throw Error(ErrorCode::InvalidParameter, "B_n needs n >= 2, got " + std::to_string(n));
    }
    return n % 2 != 0;
}

// --- HandleExpression -------------------------------------------------------

bool HandleExpression::has_one_handle(const Label& l) const
{
    return std::find(one_handles_.begin(), one_handles_.end(), l) != one_handles_.end();
}

std::size_t HandleExpression::one_index(const Label& l) const
{
    auto it = std::find(one_handles_.begin(), one_handles_.end(), l);
    if (it == one_handles_.end()) {
        throw Error(ErrorCode::UnknownLabel, "no 1-handle named '" + l + "'");
    }
    return static_cast<std::size_t>(it - one_handles_.begin());
}

const Integer& HandleExpression::winding(const Label& two, const Label& one) const
{
    return windings_.at(two_index(two)).at(one_index(one));
}

const std::vector<Integer>& HandleExpression::winding_vector(const Label& two) const
{
    return windings_.at(two_index(two));
}

IntegerMatrix HandleExpression::winding_matrix() const
{
    IntegerMatrix w(one_handles_.size(), form_.dim());
    for (std::size_t c = 0; c < form_.dim(); ++c) {
        for (std::size_t r = 0; r < one_handles_.size(); ++r) {
            w(r, c) = windings_[c][r];
        }
    }
    return w;
}

std::optional<std::size_t> HandleExpression::piece_index(const std::string& name) const
{
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        if (pieces_[i].name == name) {
            return i;
        }
    }
    return std::nullopt;
}

bool HandleExpression::has_glued_piece() const
{
    return std::any_of(pieces_.begin(), pieces_.end(), [](const OpaquePiece& p) { return p.glued; });
}

Label HandleExpression::fresh_label(const std::string& prefix) const
{
    for (std::size_t k = 1;; ++k) {
        Label candidate = prefix + std::to_string(k);
        if (!used_labels_.contains(candidate) && !has_two_handle(candidate) && !has_one_handle(candidate) &&
            !piece_index(candidate)) {
            return candidate;
        }
    }
}

std::vector<Label> HandleExpression::fresh_labels(const std::string& prefix, std::size_t count) const
{
    std::vector<Label> out;
    for (std::size_t k = 1; out.size() < count; ++k) {
        Label candidate = prefix + std::to_string(k);
        if (!used_labels_.contains(candidate) && !has_two_handle(candidate) && !has_one_handle(candidate) &&
            !piece_index(candidate)) {
            out.push_back(std::move(candidate));
        }
    }
    return out;
}

void HandleExpression::claim(const Label& l)
{
    if (l.empty()) {
        throw Error(ErrorCode::InvalidParameter, "empty label");
    }
    if (has_two_handle(l) || has_one_handle(l) || piece_index(l)) {
        throw Error(ErrorCode::InvalidParameter, "label '" + l + "' is already in use");
    }
    used_labels_.insert(l);
}

void HandleExpression::add_one_handle(const Label& l)
{
    claim(l);
    one_handles_.push_back(l);
    for (auto& w : windings_) {
        w.emplace_back(0);
    }
}

void HandleExpression::add_two_handle(const Label& l, const Rational& framing, std::vector<Integer> winding)
{
    if (winding.empty()) {
        winding.assign(one_handles_.size(), Integer(0));
    }
    if (winding.size() != one_handles_.size()) {
        throw Error(ErrorCode::IndexError, "winding vector has wrong length for '" + l + "'");
    }
    claim(l);
    form_.append(l, framing);
    windings_.push_back(std::move(winding));
}

void HandleExpression::set_linking(const Label& a, const Label& b, const Rational& value)
{
    form_.set(two_index(a), two_index(b), value);
}

void HandleExpression::set_winding(const Label& two, const Label& one, const Integer& value)
{
    windings_.at(two_index(two)).at(one_index(one)) = value;
}

void HandleExpression::remove_two_handles(const std::vector<Label>& labels)
{
    std::vector<std::size_t> idx;
    for (const auto& l : labels) {
        idx.push_back(two_index(l));
    }
    std::sort(idx.begin(), idx.end(), std::greater<>());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    for (std::size_t i : idx) {
        windings_.erase(windings_.begin() + static_cast<std::ptrdiff_t>(i));
    }
    form_.remove(idx);
}

void HandleExpression::remove_one_handle(const Label& l)
{
    const std::size_t i = one_index(l);
    one_handles_.erase(one_handles_.begin() + static_cast<std::ptrdiff_t>(i));
    for (auto& w : windings_) {
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
    }
}

void HandleExpression::replace_form_keep_windings(SymmetricForm form)
{
    if (form.labels() != form_.labels()) {
        throw Error(ErrorCode::IndexError, "replacement form must keep the handle labels");
    }
    form_ = std::move(form);
}

void HandleExpression::add_piece(OpaquePiece piece)
{
    claim(piece.name);
    pieces_.push_back(std::move(piece));
}

void HandleExpression::remove_piece(const std::string& name)
{
    auto idx = piece_index(name);
    if (!idx) {
        throw Error(ErrorCode::UnknownPiece, "no piece named '" + name + "'");
    }
    pieces_.erase(pieces_.begin() + static_cast<std::ptrdiff_t>(*idx));
}

void HandleExpression::relabel(const Label& from, const Label& to)
{
    if (from == to) {
        return;
    }
    if (has_two_handle(from)) {
        const std::size_t i = two_index(from);
        claim(to);
        form_.rename(i, to);
    } else if (has_one_handle(from)) {
        const std::size_t i = one_index(from);
        claim(to);
        one_handles_[i] = to;
    } else if (auto p = piece_index(from)) {
        claim(to);
        pieces_[*p].name = to;
    } else {
        throw Error(ErrorCode::UnknownLabel, "nothing named '" + from + "'");
    }
}

// --- constructors -----------------------------------------------------------

HandleExpression from_plumbing(const PlumbingGraph& g)
{
    HandleExpression h;
    const SymmetricForm lm = linking_matrix(g);
    for (std::size_t i = 0; i < lm.dim(); ++i) {
        h.add_two_handle(lm.labels()[i], lm.at(i, i));
    }
    h.replace_form_keep_windings(lm);
    if (g.empty()) {
        h.set_boundary(LensSpace{});
    } else {
        try {
            h.set_boundary(boundary_lens(g));
        } catch (const Error&) {
            h.set_boundary(std::nullopt);
        }
    }
    return h;
}

HandleExpression bn_expression(int n, const Label& one, const Label& two)
{
    if (n < 2) {
        throw Error(ErrorCode::InvalidParameter, "B_n needs n >= 2, got " + std::to_string(n));
    }
    HandleExpression h;
    h.add_one_handle(one);
    h.add_two_handle(two, Rational(n - 1), {Integer(n)});
    h.set_boundary(lens_normalize(Integer(n) * n, Integer(n - 1)));
    return h;
}

HandleExpression elliptic_expression(int m, const Label& fiber)
{
    if (m < 1) {
        throw Error(ErrorCode::InvalidParameter, "E(m) needs m >= 1, got " + std::to_string(m));
    }
    HandleExpression h;
    OpaquePiece p;
    p.name = "E" + std::to_string(m);
    p.kind = "E(" + std::to_string(m) + ")";
    p.b1 = 0;
    p.b2 = 12LL * m - 3;
    p.euler = 12LL * m - 1;
    p.sigma = -8LL * m;
    p.spin = (m % 2 == 0);
    p.glued = false;
    h.add_piece(std::move(p));
    h.add_two_handle(fiber, Rational(0));
    h.set_boundary(std::nullopt);
    return h;
}

// --- invariants -------------------------------------------------------------

SymmetricForm intersection_form(const HandleExpression& h)
{
    if (h.one_handle_count() == 0) {
        return h.form();
    }
    const IntegerMatrix k = integer_kernel_basis(h.winding_matrix());
    return restrict_form(h.form(), k);
}

Homology homology(const HandleExpression& h)
{
    const IntegerMatrix w = h.winding_matrix();
    const long long k = static_cast<long long>(h.one_handle_count());
    const long long m = static_cast<long long>(h.two_handle_count());
    const long long rk = k == 0 ? 0 : static_cast<long long>(integer_rank(w));

    Homology out;
    out.b1 = k - rk;
    out.b2 = m - rk;
    std::vector<Integer> torsion;
    if (k > 0 && m > 0) {
        for (const Integer& f : smith_normal_form(w)) {
            if (f > 1) {
                torsion.push_back(f);
            }
        }
    }
    bool determinate = true;
    for (const OpaquePiece& p : h.pieces()) {
        out.b1 += p.b1;
        out.b2 += p.b2;
        if (p.glued) {
            determinate = false;
        }
        torsion.insert(torsion.end(), p.h1_torsion.begin(), p.h1_torsion.end());
    }
    if (determinate) {
        std::sort(torsion.begin(), torsion.end());
        out.h1_torsion = std::move(torsion);
    }
    return out;
}

EulerSigma euler_sigma(const HandleExpression& h)
{
    EulerSigma out;
    out.euler = 1 - static_cast<long long>(h.one_handle_count()) + static_cast<long long>(h.two_handle_count());
    out.sigma = signature(intersection_form(h));
    for (const OpaquePiece& p : h.pieces()) {
        out.euler += p.euler - 1;
        out.sigma += p.sigma;
    }
    return out;
}

Invariants invariants(const HandleExpression& h)
{
    Invariants inv;
    const Homology hom = homology(h);
    const SymmetricForm q = intersection_form(h);
    inv.b1 = hom.b1;
    inv.b2 = hom.b2;
    inv.torsion = hom.h1_torsion;
    inv.euler = 1 - static_cast<long long>(h.one_handle_count()) + static_cast<long long>(h.two_handle_count());
    inv.sigma = signature(q);
    inv.det = q.dim() == 0 ? Rational(1) : determinant(q);
    for (const OpaquePiece& p : h.pieces()) {
        inv.euler += p.euler - 1;
        inv.sigma += p.sigma;
        inv.pieces.push_back(p.kind + (p.glued ? "*" : ""));
    }
    std::sort(inv.pieces.begin(), inv.pieces.end());
    inv.boundary = h.boundary_claim();
    return inv;
}

std::string torsion_string(const std::optional<std::vector<Integer>>& torsion)
{
    if (!torsion) {
        return "?";
    }
    std::vector<std::string> parts;
    for (const Integer& t : *torsion) {
        parts.push_back(to_string(t));
    }
    return "[" + join(parts, ",") + "]";
}

// --- moves --------------------------------------------------------------------

HandleExpression add_cancelling_pair(const HandleExpression& h, std::optional<Label> one, std::optional<Label> two,
                                     const std::map<Label, Integer>& links)
{
    HandleExpression out = h;
    const Label d = one ? *one : out.fresh_label("d");
    out.add_one_handle(d);
    const Label z = two ? *two : out.fresh_label("z");
    std::vector<Integer> w(out.one_handle_count(), Integer(0));
    w.back() = 1;
    for (const auto& [label, value] : links) {
        (void)out.two_index(label);
    }
    out.add_two_handle(z, Rational(0), std::move(w));
    for (const auto& [label, value] : links) {
        if (label == z) {
            throw Error(ErrorCode::InvalidParameter, "cancelling handle cannot link itself");
        }
        out.set_linking(z, label, Rational(value));
    }
    return out;
}

HandleExpression remove_cancelling_pair(const HandleExpression& h, const Label& one, const Label& two)
{
    const std::size_t oi = h.one_index(one);
    const std::vector<Integer>& w = h.winding_vector(two);
    for (std::size_t r = 0; r < w.size(); ++r) {
        if (r == oi) {
            if (w[r] != 1 && w[r] != -1) {
                throw Error(ErrorCode::NotCancelling, "'" + two + "' runs over '" + one + "' " + to_string(w[r]) +
                                                          " times, not once");
            }
        } else if (w[r] != 0) {
            throw Error(ErrorCode::NotCancelling,
                        "'" + two + "' also runs over 1-handle '" + h.one_handles()[r] + "'");
        }
    }
    for (const Label& other : h.two_handles()) {
        if (other != two && h.winding(other, one) != 0) {
            throw Error(ErrorCode::NotCancelling,
                        "'" + other + "' still runs over '" + one + "'; slide it off first");
        }
    }
    HandleExpression out = h;
    out.remove_two_handles({two});
    out.remove_one_handle(one);
    return out;
}

HandleExpression slide(const HandleExpression& h, const Label& i, const Label& j, int sign)
{
    if (sign != 1 && sign != -1) {
        throw Error(ErrorCode::InvalidParameter, "slide sign must be +1 or -1");
    }
    const std::size_t a = h.two_index(i);
    const std::size_t b = h.two_index(j);
    SymmetricForm f = congruence_slide(h.form(), a, b, sign);
    HandleExpression out = h;
    out.replace_form_keep_windings(std::move(f));
    for (const Label& d : h.one_handles()) {
        out.set_winding(i, d, h.winding(i, d) + sign * h.winding(j, d));
    }
    return out;
}

HandleExpression blow_up(const HandleExpression& h, std::optional<Label> label)
{
    HandleExpression out = h;
    const Label l = label ? *label : out.fresh_label("e");
    out.add_two_handle(l, Rational(-1));
    return out;
}

HandleExpression blow_down(const HandleExpression& h, const Label& label)
{
    const std::size_t i = h.two_index(label);
    if (!all_zero(h.winding_vector(label))) {
        throw Error(ErrorCode::NotBlowdownable, "'" + label + "' runs over a 1-handle");
    }
    if (h.form().at(i, i) != -1) {
        throw Error(ErrorCode::NotBlowdownable,
                    "'" + label + "' has framing " + to_string(h.form().at(i, i)) + ", not -1");
    }
    SymmetricForm rest = schur_complement(h.form(), {i});
    HandleExpression out = h;
    out.remove_two_handles({label});
    out.replace_form_keep_windings(std::move(rest));
    return out;
}

// --- rational blow-down / blow-up --------------------------------------------

SymmetricForm cn_form(int n, const std::vector<Label>& labels)
{
    const ContinuedFraction cf = cn_fraction(n);
    if (labels.size() != cf.coefficients.size()) {
        throw Error(ErrorCode::InvalidParameter, "C_" + std::to_string(n) + " has " +
                                                     std::to_string(cf.coefficients.size()) + " spheres, got " +
                                                     std::to_string(labels.size()) + " labels");
    }
    std::vector<std::vector<Rational>> e(labels.size(), std::vector<Rational>(labels.size(), Rational(0)));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        e[i][i] = Rational(cf.coefficients[i]);
        if (i + 1 < labels.size()) {
            e[i][i + 1] = 1;
            e[i + 1][i] = 1;
        }
    }
    return SymmetricForm(labels, std::move(e));
}

HandleExpression rational_blow_down(const HandleExpression& h, const std::vector<Label>& chain, int n,
                                    std::optional<std::string> piece_name)
{
    if (n < 2) {
        throw Error(ErrorCode::InvalidParameter, "C_n needs n >= 2, got " + std::to_string(n));
    }
    if (chain.size() != static_cast<std::size_t>(n - 1)) {
        throw Error(ErrorCode::ChainMismatch, "C_" + std::to_string(n) + " has " + std::to_string(n - 1) +
                                                  " spheres, got " + std::to_string(chain.size()));
    }
    std::vector<std::size_t> idx;
    for (const Label& l : chain) {
        idx.push_back(h.two_index(l));
        if (!all_zero(h.winding_vector(l))) {
            throw Error(ErrorCode::WindingObstruction, "chain handle '" + l + "' runs over a 1-handle");
        }
    }
    if (std::set<std::size_t>(idx.begin(), idx.end()).size() != idx.size()) {
        throw Error(ErrorCode::ChainMismatch, "chain repeats a handle");
    }
    const SymmetricForm expected = cn_form(n, chain);
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = 0; b < idx.size(); ++b) {
            if (h.form().at(idx[a], idx[b]) != expected.at(a, b)) {
                throw Error(ErrorCode::ChainMismatch,
                            "entry (" + chain[a] + "," + chain[b] + ") is " + to_string(h.form().at(idx[a], idx[b])) +
                                ", C_" + std::to_string(n) + " needs " + to_string(expected.at(a, b)));
            }
        }
    }
    bool coupled = false;
    const std::set<std::size_t> in_chain(idx.begin(), idx.end());
    for (std::size_t a : idx) {
        for (std::size_t y = 0; y < h.two_handle_count(); ++y) {
            if (!in_chain.contains(y) && h.form().at(a, y) != 0) {
                coupled = true;
            }
        }
    }

    SymmetricForm rest = schur_complement(h.form(), idx);
    HandleExpression out = h;
    out.remove_two_handles(chain);
    out.replace_form_keep_windings(std::move(rest));
    const std::string name = piece_name_for(out, std::move(piece_name), "B" + std::to_string(n));
    out.add_piece(bn_piece(n, name, coupled));
    return out;
}

HandleExpression rational_blow_up(const HandleExpression& h, const std::string& piece,
                                  const std::vector<Label>& chain_labels, const std::vector<ChainCoupling>& couplings)
{
    const auto pi = h.piece_index(piece);
    if (!pi) {
        throw Error(ErrorCode::UnknownPiece, "no piece named '" + piece + "'");
    }
    const int n = h.pieces()[*pi].bn;
    if (n < 2) {
        throw Error(ErrorCode::UnknownPiece, "piece '" + piece + "' is not a rational ball");
    }
    HandleExpression out = h;
    out.remove_piece(piece);

    std::vector<Label> chain = chain_labels;
    if (chain.empty()) {
        chain = out.fresh_labels("c", static_cast<std::size_t>(n - 1));
    }
    if (chain.size() != static_cast<std::size_t>(n - 1)) {
        throw Error(ErrorCode::ChainMismatch, "B_" + std::to_string(n) + " opens into " + std::to_string(n - 1) +
                                                  " spheres, got " + std::to_string(chain.size()) + " labels");
    }

    const std::size_t m = out.two_handle_count();
    const std::size_t c = chain.size();
    // L: chain x outside
    std::vector<std::vector<Rational>> link(c, std::vector<Rational>(m, Rational(0)));
    for (const ChainCoupling& cp : couplings) {
        if (cp.chain_index >= c) {
            throw Error(ErrorCode::InvalidCoupling, "coupling to sphere " + std::to_string(cp.chain_index + 1) +
                                                        " of a " + std::to_string(c) + "-sphere chain");
        }
        link[cp.chain_index][out.two_index(cp.handle)] += Rational(cp.linking);
    }
    const SymmetricForm cform = cn_form(n, chain);
    const std::vector<std::vector<Rational>> cinv = inverse(cform);

    SymmetricForm r = out.form();
    for (std::size_t x = 0; x < m; ++x) {
        for (std::size_t y = x; y < m; ++y) {
            Rational v = r.at(x, y);
            for (std::size_t a = 0; a < c; ++a) {
                if (link[a][x] == 0) {
                    continue;
                }
                for (std::size_t b = 0; b < c; ++b) {
                    v += link[a][x] * cinv[a][b] * link[b][y];
                }
            }
            r.set(x, y, v);
        }
    }
    if (!out.has_glued_piece() && !r.is_integral()) {
        throw Error(ErrorCode::InvalidCoupling,
                    "couplings leave non-integral framings " + r.to_string() + " after opening '" + piece + "'");
    }
    out.replace_form_keep_windings(std::move(r));
    for (std::size_t a = 0; a < c; ++a) {
        out.add_two_handle(chain[a], cform.at(a, a));
    }
    for (std::size_t a = 0; a + 1 < c; ++a) {
        out.set_linking(chain[a], chain[a + 1], Rational(1));
    }
    for (std::size_t a = 0; a < c; ++a) {
        for (std::size_t x = 0; x < m; ++x) {
            if (link[a][x] != 0) {
                out.set_linking(chain[a], out.two_handles()[x], link[a][x]);
            }
        }
    }
    return out;
}

// --- sealing B_n ------------------------------------------------------------

namespace {

/// S' = S + sign * ((a c^T + c a^T)/k - (k-1)/k^2 a a^T) over the 2-handles `ys`.
void apply_ball_correction(SymmetricForm& f, const std::vector<std::size_t>& ys, const std::vector<Rational>& a,
                           const std::vector<Rational>& c, int k, int sign)
{
    const Rational kk(k);
    for (std::size_t x = 0; x < ys.size(); ++x) {
        for (std::size_t y = x; y < ys.size(); ++y) {
            const Rational delta = (a[x] * c[y] + a[y] * c[x]) / kk - a[x] * a[y] * Rational(k - 1) / (kk * kk);
            const Rational v = f.at(ys[x], ys[y]) + Rational(sign) * delta;
            f.set(ys[x], ys[y], v);
        }
    }
}

}  // namespace

HandleExpression seal_bn(const HandleExpression& h, const Label& one, const Label& two,
                         std::optional<std::string> piece_name)
{
    const std::size_t oi = h.one_index(one);
    const std::size_t bi = h.two_index(two);
    const std::vector<Integer>& wb = h.winding_vector(two);
    for (std::size_t r = 0; r < wb.size(); ++r) {
        if (r != oi && wb[r] != 0) {
            throw Error(ErrorCode::InvalidParameter, "'" + two + "' also runs over '" + h.one_handles()[r] + "'");
        }
    }
    if (wb[oi] < 2) {
        throw Error(ErrorCode::InvalidParameter,
                    "'" + two + "' winds " + to_string(wb[oi]) + " times over '" + one + "'; a ball needs k >= 2");
    }
    if (wb[oi] > 100000) {
        throw Error(ErrorCode::InvalidParameter, "winding too large for a ball");
    }
    const int k = static_cast<int>(wb[oi]);
    if (h.form().at(bi, bi) != k - 1) {
        throw Error(ErrorCode::InvalidParameter, "'" + two + "' has framing " + to_string(h.form().at(bi, bi)) +
                                                     ", a winding-" + std::to_string(k) + " ball needs " +
                                                     std::to_string(k - 1));
    }

    std::vector<std::size_t> ys;
    std::vector<Rational> a;
    std::vector<Rational> c;
    bool coupled = false;
    for (std::size_t y = 0; y < h.two_handle_count(); ++y) {
        if (y == bi) {
            continue;
        }
        ys.push_back(y);
        a.emplace_back(h.windings_of(y)[oi]);
        c.push_back(h.form().at(y, bi));
        coupled = coupled || a.back() != 0 || c.back() != 0;
    }
    SymmetricForm f = h.form();
    apply_ball_correction(f, ys, a, c, k, -1);

    HandleExpression out = h;
    out.replace_form_keep_windings(std::move(f));
    out.remove_two_handles({two});
    out.remove_one_handle(one);
    const std::string name = piece_name_for(out, std::move(piece_name), "B" + std::to_string(k));
    out.add_piece(bn_piece(k, name, coupled));
    return out;
}

HandleExpression unseal_bn(const HandleExpression& h, const std::string& piece, const Label& one, const Label& two,
                           const std::map<Label, BallCoupling>& couplings)
{
    const auto pi = h.piece_index(piece);
    if (!pi) {
        throw Error(ErrorCode::UnknownPiece, "no piece named '" + piece + "'");
    }
    const int k = h.pieces()[*pi].bn;
    if (k < 2) {
        throw Error(ErrorCode::UnknownPiece, "piece '" + piece + "' is not a rational ball");
    }
    HandleExpression out = h;
    out.remove_piece(piece);
    for (const auto& [label, cp] : couplings) {
        (void)out.two_index(label);
    }

    const std::size_t m = out.two_handle_count();
    std::vector<std::size_t> ys(m);
    std::vector<Rational> a(m, Rational(0));
    std::vector<Rational> c(m, Rational(0));
    for (std::size_t y = 0; y < m; ++y) {
        ys[y] = y;
    }
    for (const auto& [label, cp] : couplings) {
        const std::size_t y = out.two_index(label);
        a[y] = Rational(cp.winding);
        c[y] = Rational(cp.linking);
    }
    SymmetricForm f = out.form();
    apply_ball_correction(f, ys, a, c, k, +1);
    if (!out.has_glued_piece() && !f.is_integral()) {
        throw Error(ErrorCode::InvalidCoupling,
                    "couplings leave non-integral framings " + f.to_string() + " after opening '" + piece + "'");
    }
    out.replace_form_keep_windings(std::move(f));
    out.add_one_handle(one);
    std::vector<Integer> wb(out.one_handle_count(), Integer(0));
    wb.back() = k;
    out.add_two_handle(two, Rational(k - 1), std::move(wb));
    for (const auto& [label, cp] : couplings) {
        out.set_winding(label, one, cp.winding);
        out.set_linking(label, two, Rational(cp.linking));
    }
    return out;
}

// --- chain search -------------------------------------------------------------

std::vector<std::vector<Label>> find_cn_chains(const HandleExpression& h, int n)
{
    std::vector<std::vector<Label>> found;
    if (n < 2) {
        return found;
    }
    const SymmetricForm& f = h.form();
    const std::size_t dim = f.dim();
    std::vector<bool> usable(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        usable[i] = all_zero(h.windings_of(i));
    }
    const auto len = static_cast<std::size_t>(n - 1);
    std::vector<std::size_t> path;
    auto extend = [&](auto&& self) -> void {
        if (path.size() == len) {
            std::vector<Label> labels;
            for (std::size_t i : path) {
                labels.push_back(f.labels()[i]);
            }
            found.push_back(std::move(labels));
            return;
        }
        for (std::size_t v = 0; v < dim; ++v) {
            if (!usable[v] || f.at(v, v) != -2 || std::find(path.begin(), path.end(), v) != path.end()) {
                continue;
            }
            bool ok = f.at(path.back(), v) == 1;
            for (std::size_t p = 0; ok && p + 1 < path.size(); ++p) {
                ok = f.at(path[p], v) == 0;
            }
            if (ok) {
                path.push_back(v);
                self(self);
                path.pop_back();
            }
        }
    };
    for (std::size_t s = 0; s < dim; ++s) {
        if (usable[s] && f.at(s, s) == -(n + 2)) {
            path = {s};
            extend(extend);
        }
    }
    return found;
}

// --- ledger -------------------------------------------------------------------

nlohmann::ordered_json to_json(const Invariants& inv)
{
    nlohmann::ordered_json j;
    j["b1"] = inv.b1;
    j["b2"] = inv.b2;
    j["euler"] = inv.euler;
    j["sigma"] = inv.sigma;
    j["det"] = {{"num", integer_json(numerator(inv.det))}, {"den", integer_json(denominator(inv.det))}};
    if (inv.torsion) {
        nlohmann::ordered_json t = nlohmann::ordered_json::array();
        for (const Integer& v : *inv.torsion) {
            t.push_back(integer_json(v));
        }
        j["torsion"] = std::move(t);
    } else {
        j["torsion"] = "indeterminate";
    }
    j["boundary"] = inv.boundary ? nlohmann::ordered_json(inv.boundary->to_string()) : nlohmann::ordered_json();
    j["pieces"] = inv.pieces;
    return j;
}

nlohmann::ordered_json to_json(const HandleExpression& h)
{
    nlohmann::ordered_json j;
    j["one_handles"] = h.one_handles();
    nlohmann::ordered_json twos = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < h.two_handle_count(); ++i) {
        nlohmann::ordered_json w = nlohmann::ordered_json::array();
        for (const Integer& v : h.windings_of(i)) {
            w.push_back(integer_json(v));
        }
        twos.push_back({{"label", h.two_handles()[i]}, {"framing", to_string(h.form().at(i, i))}, {"winding", w}});
    }
    j["two_handles"] = std::move(twos);
    j["form"] = h.form().to_string();
    nlohmann::ordered_json pieces = nlohmann::ordered_json::array();
    for (const OpaquePiece& p : h.pieces()) {
        pieces.push_back({{"name", p.name}, {"kind", p.kind}, {"glued", p.glued}});
    }
    j["pieces"] = std::move(pieces);
    j["boundary"] = h.boundary_claim() ? nlohmann::ordered_json(h.boundary_claim()->to_string())
                                       : nlohmann::ordered_json();
    return j;
}

void Ledger::record(std::string move, std::vector<std::string> params, const HandleExpression& h)
{
    steps_.push_back(LedgerStep{std::move(move), std::move(params), invariants(h)});
}

nlohmann::ordered_json Ledger::to_json() const
{
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const LedgerStep& s : steps_) {
        nlohmann::ordered_json j;
        j["move"] = s.move;
        j["params"] = s.params;
        const nlohmann::ordered_json inv = kirby::to_json(s.invariants);
        for (const auto& [key, value] : inv.items()) {
            j[key] = value;
        }
        steps.push_back(std::move(j));
    }
    nlohmann::ordered_json out;
    out["steps"] = std::move(steps);
    return out;
}

std::string Ledger::to_text() const
{
    std::ostringstream out;
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        const LedgerStep& s = steps_[i];
        const Invariants& v = s.invariants;
        out << i << ' ' << s.move;
        if (!s.params.empty()) {
            out << ' ' << join(s.params, " ");
        }
        out << " | b1=" << v.b1 << " b2=" << v.b2 << " euler=" << v.euler << " sigma=" << v.sigma
            << " det=" << to_string(v.det) << " torsion=" << torsion_string(v.torsion)
            << " boundary=" << (v.boundary ? v.boundary->to_string() : "-") << " pieces=[" << join(v.pieces, ",")
            << "]\n";
    }
    return out.str();
}

}  // namespace kirby
