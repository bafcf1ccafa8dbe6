#pragma once

/**
 * @file plumbing.hpp
 * @brief Genus-0 plumbing graphs: framed spheres joined by plumbing edges.
 *
 * Graphs are values; every move returns a new graph. A graph remembers every
 * vertex id it has ever held, so ids of deleted vertices are never handed out
 * again by `fresh_id`.
 */

#include "kirby/lattice.hpp"
#include "kirby/numbers.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace kirby {

using VertexId = std::string;
using Edge = std::pair<VertexId, VertexId>;

class PlumbingGraph
{
public:
    PlumbingGraph() = default;

    /// Throws InvalidParameter on duplicate or previously used ids.
    void add_vertex(const VertexId& id, long long framing);
    /// Throws MissingVertex / UnsupportedConfiguration (loops, multi-edges).
    void add_edge(const VertexId& a, const VertexId& b);
    void remove_vertex(const VertexId& id);
    void remove_edge(const VertexId& a, const VertexId& b);
    void set_framing(const VertexId& id, long long framing);

    [[nodiscard]] bool has_vertex(const VertexId& id) const { return framings_.contains(id); }
    [[nodiscard]] bool has_edge(const VertexId& a, const VertexId& b) const;
    [[nodiscard]] long long framing(const VertexId& id) const;
    [[nodiscard]] std::vector<VertexId> neighbors(const VertexId& id) const;
    [[nodiscard]] std::size_t degree(const VertexId& id) const { return neighbors(id).size(); }
    [[nodiscard]] std::size_t vertex_count() const noexcept { return framings_.size(); }
    [[nodiscard]] bool empty() const noexcept { return framings_.empty(); }

    /// Vertices in id order.
    [[nodiscard]] const std::map<VertexId, long long>& vertices() const noexcept { return framings_; }
    /// Edges as (smaller id, larger id), sorted.
    [[nodiscard]] const std::set<Edge>& edges() const noexcept { return edges_; }

    /// First id "<prefix>k" (k = 1, 2, ...) never used in this graph.
    [[nodiscard]] VertexId fresh_id(const std::string& prefix = "e") const;
    /// Reserve ids used elsewhere (e.g. by handle labels) so they are not handed out.
    void reserve_id(const VertexId& id) { used_ids_.insert(id); }

    friend bool operator==(const PlumbingGraph& a, const PlumbingGraph& b)
    {
        return a.framings_ == b.framings_ && a.edges_ == b.edges_;
    }

private:
    std::map<VertexId, long long> framings_;
    std::set<Edge> edges_;
    std::set<VertexId> used_ids_;
};

[[nodiscard]] Edge make_edge(const VertexId& a, const VertexId& b);

/// Path graph s1 - s2 - ... with the given framings. Throws EmptyInput.
[[nodiscard]] PlumbingGraph build_linear(const std::vector<long long>& framings,
                                         const std::string& prefix = "s");
[[nodiscard]] PlumbingGraph build_linear(const ContinuedFraction& cf, const std::string& prefix = "s");

/// Diagonal = framings, 1 per edge; basis in vertex id order.
[[nodiscard]] SymmetricForm linking_matrix(const PlumbingGraph& g);

/// Replaces edge a-b by a - new(-1) - b and lowers both framings by one.
[[nodiscard]] PlumbingGraph blow_up_edge(const PlumbingGraph& g, const Edge& e,
                                         std::optional<VertexId> new_id = std::nullopt);
/// Lowers the framing of v and attaches a new -1 leaf.
[[nodiscard]] PlumbingGraph blow_up_vertex(const PlumbingGraph& g, const VertexId& v,
                                           std::optional<VertexId> new_id = std::nullopt);
/// Removes a -1 vertex of degree <= 2, raising neighbor framings and joining the
/// two neighbors. Errors: NotMinusOne, UnsupportedConfiguration.
[[nodiscard]] PlumbingGraph blow_down_vertex(const PlumbingGraph& g, const VertexId& v);

/// Vertex ids of a path graph, starting from the smaller-id endpoint. Throws NotLinear.
[[nodiscard]] std::vector<VertexId> linear_order(const PlumbingGraph& g);
/// Boundary lens space of a linear chain, in canonical orientation-preserving form.
[[nodiscard]] LensSpace boundary_lens(const PlumbingGraph& g);

/// Every induced path reading -n-2, -2, ..., -2 (n-1 vertices).
[[nodiscard]] std::vector<std::vector<VertexId>> detect_cn_chain(const PlumbingGraph& g, int n);

[[nodiscard]] std::string to_dot(const PlumbingGraph& g);
[[nodiscard]] nlohmann::ordered_json to_json(const PlumbingGraph& g);
[[nodiscard]] PlumbingGraph plumbing_from_json(const nlohmann::json& j);

}  // namespace kirby
