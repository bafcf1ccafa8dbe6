#include "kirby/plumbing.hpp"

#include "kirby/error.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace kirby {

Edge make_edge(const VertexId& a, const VertexId& b)
{
    return a < b ? Edge{a, b} : Edge{b, a};
}

void PlumbingGraph::add_vertex(const VertexId& id, long long framing)
{
    if (id.empty() || used_ids_.contains(id)) {
        throw Error(ErrorCode::InvalidParameter, "vertex id '" + id + "' is empty or already used");
    }
    framings_[id] = framing;
    used_ids_.insert(id);
}

void PlumbingGraph::add_edge(const VertexId& a, const VertexId& b)
{
    if (!has_vertex(a) || !has_vertex(b)) {
        throw Error(ErrorCode::MissingVertex, "edge " + a + "-" + b + " names a missing vertex");
    }
    if (a == b || has_edge(a, b)) {
        throw Error(ErrorCode::UnsupportedConfiguration,
                    "plumbing graphs are simple: no loop or repeated edge " + a + "-" + b);
    }
    edges_.insert(make_edge(a, b));
}

void PlumbingGraph::remove_vertex(const VertexId& id)
{
    if (!has_vertex(id)) {
        throw Error(ErrorCode::MissingVertex, "no vertex '" + id + "'");
    }
    framings_.erase(id);
    std::erase_if(edges_, [&id](const Edge& e) { return e.first == id || e.second == id; });
}

void PlumbingGraph::remove_edge(const VertexId& a, const VertexId& b)
{
    if (edges_.erase(make_edge(a, b)) == 0) {
        throw Error(ErrorCode::MissingEdge, "no edge " + a + "-" + b);
    }
}

void PlumbingGraph::set_framing(const VertexId& id, long long framing)
{
    if (!has_vertex(id)) {
        throw Error(ErrorCode::MissingVertex, "no vertex '" + id + "'");
    }
    framings_[id] = framing;
}

bool PlumbingGraph::has_edge(const VertexId& a, const VertexId& b) const
{
    return edges_.contains(make_edge(a, b));
}

long long PlumbingGraph::framing(const VertexId& id) const
{
    const auto it = framings_.find(id);
    if (it == framings_.end()) {
        throw Error(ErrorCode::MissingVertex, "no vertex '" + id + "'");
    }
    return it->second;
}

std::vector<VertexId> PlumbingGraph::neighbors(const VertexId& id) const
{
    std::vector<VertexId> out;
    for (const auto& [a, b] : edges_) {
        if (a == id) {
            out.push_back(b);
        } else if (b == id) {
            out.push_back(a);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

VertexId PlumbingGraph::fresh_id(const std::string& prefix) const
{
    for (std::size_t k = 1;; ++k) {
        VertexId candidate = prefix + std::to_string(k);
        if (!used_ids_.contains(candidate)) {
            return candidate;
        }
    }
}

PlumbingGraph build_linear(const std::vector<long long>& framings, const std::string& prefix)
{
    if (framings.empty()) {
        throw Error(ErrorCode::EmptyInput, "linear plumbing needs at least one framing");
    }
    PlumbingGraph g;
    for (std::size_t i = 0; i < framings.size(); ++i) {
        g.add_vertex(prefix + std::to_string(i + 1), framings[i]);
        if (i > 0) {
            g.add_edge(prefix + std::to_string(i), prefix + std::to_string(i + 1));
        }
    }
    return g;
}

PlumbingGraph build_linear(const ContinuedFraction& cf, const std::string& prefix)
{
    std::vector<long long> framings;
    for (const Integer& a : cf.coefficients) {
        framings.push_back(a.convert_to<long long>());
    }
    return build_linear(framings, prefix);
}

SymmetricForm linking_matrix(const PlumbingGraph& g)
{
    std::vector<std::string> labels;
    for (const auto& [id, framing] : g.vertices()) {
        labels.push_back(id);
    }
    std::vector<std::vector<Rational>> m(labels.size(), std::vector<Rational>(labels.size(), Rational(0)));
    SymmetricForm f(labels, m);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        f.set(i, i, Rational(g.framing(labels[i])));
    }
    for (const auto& [a, b] : g.edges()) {
        f.set(f.require_index(a), f.require_index(b), Rational(1));
    }
    return f;
}

PlumbingGraph blow_up_edge(const PlumbingGraph& g, const Edge& e, std::optional<VertexId> new_id)
{
    if (!g.has_edge(e.first, e.second)) {
        throw Error(ErrorCode::MissingEdge, "no edge " + e.first + "-" + e.second);
    }
    PlumbingGraph out = g;
    const VertexId id = new_id.value_or(g.fresh_id());
    out.remove_edge(e.first, e.second);
    out.add_vertex(id, -1);
    out.add_edge(e.first, id);
    out.add_edge(id, e.second);
    out.set_framing(e.first, g.framing(e.first) - 1);
    out.set_framing(e.second, g.framing(e.second) - 1);
    return out;
}

PlumbingGraph blow_up_vertex(const PlumbingGraph& g, const VertexId& v, std::optional<VertexId> new_id)
{
    if (!g.has_vertex(v)) {
        throw Error(ErrorCode::MissingVertex, "no vertex '" + v + "'");
    }
    PlumbingGraph out = g;
    const VertexId id = new_id.value_or(g.fresh_id());
    out.add_vertex(id, -1);
    out.add_edge(v, id);
    out.set_framing(v, g.framing(v) - 1);
    return out;
}

PlumbingGraph blow_down_vertex(const PlumbingGraph& g, const VertexId& v)
{
    if (g.framing(v) != -1) {
        throw Error(ErrorCode::NotMinusOne,
                    "vertex '" + v + "' has framing " + std::to_string(g.framing(v)) + ", not -1");
    }
    const auto nbrs = g.neighbors(v);
    if (nbrs.size() > 2) {
        throw Error(ErrorCode::UnsupportedConfiguration,
                    "vertex '" + v + "' has degree " + std::to_string(nbrs.size()) +
                        "; blow it down at lattice level");
    }
    if (nbrs.size() == 2 && g.has_edge(nbrs[0], nbrs[1])) {
        throw Error(ErrorCode::UnsupportedConfiguration,
                    "neighbors of '" + v + "' are already adjacent; blow it down at lattice level");
    }
    PlumbingGraph out = g;
    out.remove_vertex(v);
    for (const auto& n : nbrs) {
        out.set_framing(n, g.framing(n) + 1);
    }
    if (nbrs.size() == 2) {
        out.add_edge(nbrs[0], nbrs[1]);
    }
    return out;
}

std::vector<VertexId> linear_order(const PlumbingGraph& g)
{
    if (g.empty()) {
        throw Error(ErrorCode::NotLinear, "empty graph is not a chain");
    }
    if (g.edges().size() + 1 != g.vertex_count()) {
        throw Error(ErrorCode::NotLinear, "graph is not a path");
    }
    std::optional<VertexId> start;
    for (const auto& [id, framing] : g.vertices()) {
        const std::size_t deg = g.degree(id);
        if (deg > 2) {
            throw Error(ErrorCode::NotLinear, "vertex '" + id + "' has degree " + std::to_string(deg));
        }
        if (deg <= 1 && !start) {
            start = id;
        }
    }
    if (!start) {
        throw Error(ErrorCode::NotLinear, "graph is a cycle");
    }
    std::vector<VertexId> order{*start};
    std::optional<VertexId> prev;
    while (order.size() < g.vertex_count()) {
        const VertexId& cur = order.back();
        std::optional<VertexId> next;
        for (const auto& n : g.neighbors(cur)) {
            if (n != prev) {
                next = n;
            }
        }
        if (!next) {
            throw Error(ErrorCode::NotLinear, "graph is disconnected");
        }
        prev = cur;
        order.push_back(*next);
    }
    return order;
}

LensSpace boundary_lens(const PlumbingGraph& g)
{
    ContinuedFraction cf;
    for (const auto& id : linear_order(g)) {
        cf.coefficients.emplace_back(g.framing(id));
    }
    const Rational value = cf_eval(cf);
    if (value == 0) {
        throw Error(ErrorCode::DegenerateFraction, "chain evaluates to 0 (S^1 x S^2 boundary)");
    }
    // value = -p/q
    return lens_canonical(lens_normalize(-numerator(value), denominator(value)));
}

std::vector<std::vector<VertexId>> detect_cn_chain(const PlumbingGraph& g, int n)
{
    if (n < 2) {
        throw Error(ErrorCode::InvalidParameter, "C_n needs n >= 2");
    }
    const std::size_t length = static_cast<std::size_t>(n - 1);
    std::vector<std::vector<VertexId>> found;
    std::vector<VertexId> path;

    std::function<void()> extend = [&]() {
        if (path.size() == length) {
            found.push_back(path);
            return;
        }
        for (const auto& next : g.neighbors(path.back())) {
            if (g.framing(next) != -2 || std::find(path.begin(), path.end(), next) != path.end()) {
                continue;
            }
            // Induced: next may only touch the current end of the path.
            const bool chord = std::any_of(path.begin(), path.end() - 1,
                                           [&](const VertexId& p) { return g.has_edge(p, next); });
            if (chord) {
                continue;
            }
            path.push_back(next);
            extend();
            path.pop_back();
        }
    };

    for (const auto& [id, framing] : g.vertices()) {
        if (framing == -n - 2) {
            path = {id};
            extend();
        }
    }
    return found;
}

std::string to_dot(const PlumbingGraph& g)
{
    std::ostringstream out;
    out << "digraph plumbing {\n";
    out << "  edge [dir=none];\n";
    for (const auto& [id, framing] : g.vertices()) {
        out << "  \"" << id << "\" [label=\"" << framing << "\", xlabel=\"" << id << "\"];\n";
    }
    for (const auto& [a, b] : g.edges()) {
        out << "  \"" << a << "\" -> \"" << b << "\";\n";
    }
    out << "}\n";
    return out.str();
}

nlohmann::ordered_json to_json(const PlumbingGraph& g)
{
    nlohmann::ordered_json j;
    auto vertices = nlohmann::ordered_json::array();
    for (const auto& [id, framing] : g.vertices()) {
        vertices.push_back({{"id", id}, {"framing", framing}});
    }
    auto edges = nlohmann::ordered_json::array();
    for (const auto& [a, b] : g.edges()) {
        edges.push_back({a, b});
    }
    j["vertices"] = vertices;
    j["edges"] = edges;
    return j;
}

PlumbingGraph plumbing_from_json(const nlohmann::json& j)
{
    PlumbingGraph g;
    try {
        for (const auto& v : j.at("vertices")) {
            g.add_vertex(v.at("id").get<std::string>(), v.at("framing").get<long long>());
        }
        for (const auto& e : j.at("edges")) {
            g.add_edge(e.at(0).get<std::string>(), e.at(1).get<std::string>());
        }
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::InvalidParameter, std::string("bad plumbing JSON: ") + ex.what());
    }
    return g;
}

}  // namespace kirby
