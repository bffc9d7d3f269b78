#pragma once

#include "ainfcalc/basics.hpp"

#include <string>
#include <vector>

namespace ainf {

/// A boundary stratum of the moduli of stable discs with k+1 boundary and
/// l interior marked points: a decorated tree with disc and sphere
/// vertices. Disc vertices carry a planar structure (cyclic order of
/// incident boundary items); sphere trees hang off any vertex.
struct DMStratumTree {
    struct Item {
        char kind = 'm';  // 'm' boundary marking, 'e' finite disc edge
        int id = 0;       // marking label or disc edge index
        bool operator==(const Item&) const = default;
    };

    int disc_count = 0;
    int sphere_count = 0;  // sphere vertices are indexed after the discs
    std::vector<std::pair<int, int>> disc_edges;    // disc-disc finite edges
    std::vector<std::pair<int, int>> sphere_edges;  // finite edges with a sphere endpoint
    std::vector<int> boundary_marking;              // label j in 0..k -> disc vertex
    std::vector<int> interior_marking;              // label i in 1..l -> any vertex
    std::vector<std::vector<Item>> cyclic;          // per disc vertex, planar order

    int total_vertices() const { return disc_count + sphere_count; }
    /// Codimension of the stratum: the number of finite edges (nodes).
    int codimension() const {
        return static_cast<int>(disc_edges.size() + sphere_edges.size());
    }
    /// Canonical text form rooted at boundary end 0; equal strings mean
    /// the same stratum.
    std::string encode() const;
};

/// All stable strata with at most max_vertices vertices, one per
/// isomorphism class, sorted by canonical encoding. Stability: disc
/// vertices need k_a + 2 l_a >= 2, sphere vertices need at least three
/// special points.
std::vector<DMStratumTree> enumerate_dm_strata(int k, int l, int max_vertices);

}  // namespace ainf
