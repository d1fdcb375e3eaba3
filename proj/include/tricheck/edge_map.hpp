#pragma once

// Edge map: canonical edge -> incident triangle ids (at most two). Built in
// one O(n_t) pass; lookups are O(1). Immutable after build in the validator;
// the Delaunay repair mutates its own copy through the update helpers.

#include <optional>
#include <unordered_map>
#include <variant>
#include <vector>

#include "tricheck/core.hpp"

namespace tricheck {

struct UnknownEdgeError : std::invalid_argument {
    UnknownEdgeError() : std::invalid_argument("edge not present in edge map") {}
};

// More than two triangles share one edge; the dataset is invalid.
struct EdgeConflict {
    Edge edge;
    std::array<TriId, 3> triangles;
};

class EdgeMap {
  public:
    struct Incident {
        std::array<TriId, 2> ids{-1, -1};
        int count = 0;
    };

    using Map = std::unordered_map<Edge, Incident, EdgeHash>;

    static std::variant<EdgeMap, EdgeConflict> build(const MeshDataset& d) {
        EdgeMap m;
        m.map_.reserve(d.triangles.size() * 2);
        for (TriId t = 0; t < static_cast<TriId>(d.triangles.size()); ++t) {
            const Triangle& tri = d.triangles[static_cast<std::size_t>(t)];
            for (int k = 0; k < 3; ++k) {
                const Edge e(tri[static_cast<std::size_t>(k)], tri[static_cast<std::size_t>((k + 1) % 3)]);
                Incident& inc = m.map_[e];
                if (inc.count == 2) return EdgeConflict{e, {inc.ids[0], inc.ids[1], t}};
                inc.ids[static_cast<std::size_t>(inc.count++)] = t;
            }
        }
        return m;
    }

    const Incident* find(const Edge& e) const {
        auto it = map_.find(e);
        return it == map_.end() ? nullptr : &it->second;
    }

    bool contains(const Edge& e) const { return map_.contains(e); }
    std::size_t size() const { return map_.size(); }
    const Map& entries() const { return map_; }

    // Mutation support for edge flips.
    void erase(const Edge& e) { map_.erase(e); }
    void insert_pair(const Edge& e, TriId t0, TriId t1) { map_[e] = Incident{{t0, t1}, 2}; }
    void replace_incident(const Edge& e, TriId from, TriId to) {
        auto it = map_.find(e);
        if (it == map_.end()) throw UnknownEdgeError{};
        for (int k = 0; k < it->second.count; ++k)
            if (it->second.ids[static_cast<std::size_t>(k)] == from)
                it->second.ids[static_cast<std::size_t>(k)] = to;
    }

  private:
    Map map_;
};

inline std::variant<EdgeMap, EdgeConflict> build_edge_map(const MeshDataset& d) {
    return EdgeMap::build(d);
}

// The triangle incident to e other than `exclude` (pass -1 for no
// exclusion), or nullopt when none remains.
inline std::optional<TriId> adjacent_triangle(const EdgeMap& m, const Edge& e, TriId exclude = -1) {
    const EdgeMap::Incident* inc = m.find(e);
    if (!inc) throw UnknownEdgeError{};
    for (int k = 0; k < inc->count; ++k)
        if (inc->ids[static_cast<std::size_t>(k)] != exclude) return inc->ids[static_cast<std::size_t>(k)];
    return std::nullopt;
}

}  // namespace tricheck
