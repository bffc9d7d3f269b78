#include "ainfcalc/dmstrata.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace ainf {

namespace {

std::vector<std::vector<std::pair<int, int>>> labelled_trees(int v) {
    std::vector<std::vector<std::pair<int, int>>> out;
    if (v == 1) {
        out.push_back({});
        return out;
    }
    if (v == 2) {
        out.push_back({{0, 1}});
        return out;
    }
    std::vector<int> seq(static_cast<size_t>(v - 2), 0);
    while (true) {
        std::vector<int> deg(static_cast<size_t>(v), 1);
        for (int s : seq) ++deg[static_cast<size_t>(s)];
        std::vector<std::pair<int, int>> edges;
        std::set<int> leaves;
        for (int i = 0; i < v; ++i)
            if (deg[static_cast<size_t>(i)] == 1) leaves.insert(i);
        for (int s : seq) {
            int leaf = *leaves.begin();
            leaves.erase(leaves.begin());
            edges.emplace_back(std::min(leaf, s), std::max(leaf, s));
            if (--deg[static_cast<size_t>(s)] == 1) leaves.insert(s);
        }
        int u = *leaves.begin();
        int w = *std::next(leaves.begin());
        edges.emplace_back(std::min(u, w), std::max(u, w));
        std::sort(edges.begin(), edges.end());
        out.push_back(std::move(edges));
        int p = v - 3;
        while (p >= 0 && seq[static_cast<size_t>(p)] == v - 1) {
            seq[static_cast<size_t>(p)] = 0;
            --p;
        }
        if (p < 0) break;
        ++seq[static_cast<size_t>(p)];
    }
    return out;
}

// Contour walk of the planar disc tree; returns the cyclic sequence of
// boundary markings starting at end 0, or empty when end 0 is absent.
std::vector<int> boundary_word(const DMStratumTree& t) {
    // locate end 0
    int v0 = -1, slot0 = -1;
    for (int v = 0; v < t.disc_count && v0 < 0; ++v) {
        const auto& cyc = t.cyclic[static_cast<size_t>(v)];
        for (int s = 0; s < static_cast<int>(cyc.size()); ++s) {
            if (cyc[static_cast<size_t>(s)].kind == 'm' && cyc[static_cast<size_t>(s)].id == 0) {
                v0 = v;
                slot0 = s;
                break;
            }
        }
    }
    if (v0 < 0) return {};
    auto slot_of_edge = [&](int v, int e) {
        const auto& cyc = t.cyclic[static_cast<size_t>(v)];
        for (int s = 0; s < static_cast<int>(cyc.size()); ++s)
            if (cyc[static_cast<size_t>(s)].kind == 'e' && cyc[static_cast<size_t>(s)].id == e)
                return s;
        return -1;
    };
    std::vector<int> word;
    int v = v0, slot = slot0;
    size_t steps = 0;
    const size_t limit = 4 * (t.disc_edges.size() + t.boundary_marking.size() + 2);
    do {
        const auto& cyc = t.cyclic[static_cast<size_t>(v)];
        const auto& item = cyc[static_cast<size_t>(slot)];
        if (item.kind == 'm') {
            word.push_back(item.id);
            slot = (slot + 1) % static_cast<int>(cyc.size());
        } else {
            const auto& e = t.disc_edges[static_cast<size_t>(item.id)];
            int w = e.first == v ? e.second : e.first;
            int ws = slot_of_edge(w, item.id);
            v = w;
            slot = (ws + 1) % static_cast<int>(t.cyclic[static_cast<size_t>(w)].size());
        }
        if (++steps > limit) return {};  // malformed structure
    } while (!(v == v0 && slot == slot0));
    return word;
}

bool boundary_in_order(const std::vector<int>& word, int k) {
    if (static_cast<int>(word.size()) != k + 1) return false;
    for (int i = 0; i <= k; ++i)
        if (word[static_cast<size_t>(i)] != i) return false;
    return true;
}

struct SphereData {
    // parent[i] for sphere vertex i (global index), parent is any vertex
    // with smaller global index or a disc vertex
    std::vector<int> parent;
};

std::string canonical_encode(const DMStratumTree& t) {
    const int total = t.total_vertices();
    // interior label sets per vertex
    std::vector<std::vector<int>> labels(static_cast<size_t>(total));
    for (int i = 0; i < static_cast<int>(t.interior_marking.size()); ++i)
        labels[static_cast<size_t>(t.interior_marking[static_cast<size_t>(i)])].push_back(i + 1);
    for (auto& ls : labels) std::sort(ls.begin(), ls.end());

    // children lists of sphere vertices per host
    std::vector<std::vector<int>> sphere_children(static_cast<size_t>(total));
    for (const auto& [a, b] : t.sphere_edges) {
        int host = std::min(a, b), child = std::max(a, b);
        // by construction the child is the sphere vertex with the larger index
        sphere_children[static_cast<size_t>(host)].push_back(child);
    }

    std::function<std::string(int)> sphere_encode = [&](int v) {
        std::vector<std::string> kids;
        for (int c : sphere_children[static_cast<size_t>(v)]) kids.push_back(sphere_encode(c));
        std::sort(kids.begin(), kids.end());
        std::ostringstream os;
        os << "(s{";
        for (int l : labels[static_cast<size_t>(v)]) os << l << ",";
        os << "}";
        for (const auto& s : kids) os << s;
        os << ")";
        return os.str();
    };

    auto vertex_decor = [&](int v) {
        std::vector<std::string> kids;
        for (int c : sphere_children[static_cast<size_t>(v)]) kids.push_back(sphere_encode(c));
        std::sort(kids.begin(), kids.end());
        std::ostringstream os;
        os << "{";
        for (int l : labels[static_cast<size_t>(v)]) os << l << ",";
        os << "}";
        for (const auto& s : kids) os << s;
        return os.str();
    };

    // contour walk from end 0 emitting marks, edge steps, and first-visit
    // vertex decorations
    int v0 = -1, slot0 = -1;
    for (int v = 0; v < t.disc_count && v0 < 0; ++v) {
        const auto& cyc = t.cyclic[static_cast<size_t>(v)];
        for (int s = 0; s < static_cast<int>(cyc.size()); ++s)
            if (cyc[static_cast<size_t>(s)].kind == 'm' && cyc[static_cast<size_t>(s)].id == 0) {
                v0 = v;
                slot0 = s;
                break;
            }
    }
    std::ostringstream os;
    std::vector<bool> visited(static_cast<size_t>(t.disc_count), false);
    auto slot_of_edge = [&](int v, int e) {
        const auto& cyc = t.cyclic[static_cast<size_t>(v)];
        for (int s = 0; s < static_cast<int>(cyc.size()); ++s)
            if (cyc[static_cast<size_t>(s)].kind == 'e' && cyc[static_cast<size_t>(s)].id == e)
                return s;
        return -1;
    };
    int v = v0, slot = slot0;
    os << "D" << vertex_decor(v0);
    visited[static_cast<size_t>(v0)] = true;
    do {
        const auto& cyc = t.cyclic[static_cast<size_t>(v)];
        const auto& item = cyc[static_cast<size_t>(slot)];
        if (item.kind == 'm') {
            os << "m" << item.id << ";";
            slot = (slot + 1) % static_cast<int>(cyc.size());
        } else {
            const auto& e = t.disc_edges[static_cast<size_t>(item.id)];
            int w = e.first == v ? e.second : e.first;
            os << "E;";
            if (!visited[static_cast<size_t>(w)]) {
                visited[static_cast<size_t>(w)] = true;
                os << "D" << vertex_decor(w);
            }
            int ws = slot_of_edge(w, item.id);
            v = w;
            slot = (ws + 1) % static_cast<int>(t.cyclic[static_cast<size_t>(w)].size());
        }
    } while (!(v == v0 && slot == slot0));
    return os.str();
}

}  // namespace

std::string DMStratumTree::encode() const { return canonical_encode(*this); }

std::vector<DMStratumTree> enumerate_dm_strata(int k, int l, int max_vertices) {
    if (k < 0 || l < 0) throw InvariantError("strata: negative marking counts");
    if (k + 2 * l < 2) throw InvariantError("strata: unstable parameters (k + 2l < 2)");
    std::map<std::string, DMStratumTree> found;

    for (int d = 1; d <= max_vertices; ++d) {
        auto disc_trees = labelled_trees(d);
        for (const auto& disc_edges : disc_trees) {
            // boundary marking assignment
            std::vector<int> bm(static_cast<size_t>(k + 1), 0);
            while (true) {
                for (int s = 0; s + d <= max_vertices; ++s) {
                    // sphere parents: sphere vertex d+i attaches to any vertex
                    // of smaller global index
                    std::vector<int> parent(static_cast<size_t>(s), 0);
                    std::function<void(int)> rec_spheres = [&](int i) {
                        if (i == s) {
                            // interior markings over all vertices
                            const int total = d + s;
                            std::vector<int> im(static_cast<size_t>(l), 0);
                            while (true) {
                                // assemble and filter
                                DMStratumTree t;
                                t.disc_count = d;
                                t.sphere_count = s;
                                t.disc_edges = disc_edges;
                                for (int j = 0; j < s; ++j)
                                    t.sphere_edges.emplace_back(parent[static_cast<size_t>(j)], d + j);
                                t.boundary_marking = bm;
                                t.interior_marking = im;
                                // base items per disc vertex
                                std::vector<std::vector<DMStratumTree::Item>> base(
                                    static_cast<size_t>(d));
                                for (int e = 0; e < static_cast<int>(disc_edges.size()); ++e) {
                                    base[static_cast<size_t>(disc_edges[static_cast<size_t>(e)].first)]
                                        .push_back({'e', e});
                                    base[static_cast<size_t>(disc_edges[static_cast<size_t>(e)].second)]
                                        .push_back({'e', e});
                                }
                                for (int j = 0; j <= k; ++j)
                                    base[static_cast<size_t>(bm[static_cast<size_t>(j)])].push_back(
                                        {'m', j});

                                // stability before planar enumeration
                                bool stable = true;
                                for (int v = 0; v < d && stable; ++v) {
                                    int ka = static_cast<int>(base[static_cast<size_t>(v)].size()) - 1;
                                    int la = 0;
                                    for (int j = 0; j < s; ++j)
                                        if (parent[static_cast<size_t>(j)] == v) ++la;
                                    for (int q = 0; q < l; ++q)
                                        if (im[static_cast<size_t>(q)] == v) ++la;
                                    if (ka + 2 * la < 2) stable = false;
                                }
                                for (int j = 0; j < s && stable; ++j) {
                                    int special = 1;  // parent edge
                                    for (int j2 = 0; j2 < s; ++j2)
                                        if (parent[static_cast<size_t>(j2)] == d + j) ++special;
                                    for (int q = 0; q < l; ++q)
                                        if (im[static_cast<size_t>(q)] == d + j) ++special;
                                    if (special < 3) stable = false;
                                }

                                if (stable) {
                                    // enumerate planar structures: fix the first
                                    // item, permute the rest at each vertex
                                    std::vector<std::vector<DMStratumTree::Item>> tails(
                                        static_cast<size_t>(d));
                                    for (int v = 0; v < d; ++v)
                                        tails[static_cast<size_t>(v)] = std::vector<DMStratumTree::Item>(
                                            base[static_cast<size_t>(v)].begin() + 1,
                                            base[static_cast<size_t>(v)].end());
                                    std::function<void(int)> rec_orders = [&](int v) {
                                        if (v == d) {
                                            DMStratumTree cand = t;
                                            cand.cyclic.resize(static_cast<size_t>(d));
                                            for (int u = 0; u < d; ++u) {
                                                cand.cyclic[static_cast<size_t>(u)].push_back(
                                                    base[static_cast<size_t>(u)].front());
                                                for (const auto& it : tails[static_cast<size_t>(u)])
                                                    cand.cyclic[static_cast<size_t>(u)].push_back(it);
                                            }
                                            auto word = boundary_word(cand);
                                            if (boundary_in_order(word, k))
                                                found.emplace(cand.encode(), cand);
                                            return;
                                        }
                                        auto& tail = tails[static_cast<size_t>(v)];
                                        std::sort(tail.begin(), tail.end(),
                                                  [](const DMStratumTree::Item& a,
                                                     const DMStratumTree::Item& b) {
                                                      return std::tie(a.kind, a.id) <
                                                             std::tie(b.kind, b.id);
                                                  });
                                        do {
                                            rec_orders(v + 1);
                                        } while (std::next_permutation(
                                            tail.begin(), tail.end(),
                                            [](const DMStratumTree::Item& a,
                                               const DMStratumTree::Item& b) {
                                                return std::tie(a.kind, a.id) <
                                                       std::tie(b.kind, b.id);
                                            }));
                                    };
                                    rec_orders(0);
                                }

                                // next interior marking
                                if (l == 0) break;
                                int p = l - 1;
                                while (p >= 0 && im[static_cast<size_t>(p)] == total - 1) {
                                    im[static_cast<size_t>(p)] = 0;
                                    --p;
                                }
                                if (p < 0) break;
                                ++im[static_cast<size_t>(p)];
                            }
                            return;
                        }
                        for (int par = 0; par < d + i; ++par) {
                            parent[static_cast<size_t>(i)] = par;
                            rec_spheres(i + 1);
                        }
                    };
                    rec_spheres(0);
                }
                // next boundary marking assignment
                int p = k;
                while (p >= 0 && bm[static_cast<size_t>(p)] == d - 1) {
                    bm[static_cast<size_t>(p)] = 0;
                    --p;
                }
                if (p < 0) break;
                ++bm[static_cast<size_t>(p)];
            }
        }
    }

    std::vector<DMStratumTree> out;
    out.reserve(found.size());
    for (auto& [key, t] : found) out.push_back(std::move(t));
    return out;
}

}  // namespace ainf
