#include "ainfcalc/moduli.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace ainf {

void GeometrySpec::validate() const {
    if (n < 0) throw InvariantError("geometry: negative dimension");
    for (const auto& c : classes) {
        if (static_cast<int>(c.intersections.size()) != q_count())
            throw InvariantError("geometry: intersection vector length mismatch for '" + c.name + "'");
        for (Coord v : c.intersections)
            if (v < 0) throw InvariantError("geometry: negative intersection for '" + c.name + "'");
        if (c.c1 < 0)
            throw InvariantError("geometry: negative first Chern number for '" + c.name +
                                 "' (semipositivity)");
        for (DivisorSet K : c.admissible)
            if (K >= (1u << q_count()))
                throw InvariantError("geometry: admissible set out of range for '" + c.name + "'");
    }
    if (q0 && *q0 >= (1u << q_count()))
        throw InvariantError("geometry: distinguished divisor subset out of range");
    if (divisor_weights) {
        if (!cone) throw InvariantError("geometry: divisor weights need a cone");
        if (static_cast<int>(divisor_weights->size()) != cone->ambient_dim())
            throw InvariantError("geometry: weight matrix row count != cone dimension");
        for (const auto& row : *divisor_weights)
            if (static_cast<int>(row.size()) != q_count())
                throw InvariantError("geometry: weight matrix column count != divisor count");
    }
}

int GeometrySpec::class_index(const std::string& name) const {
    for (int i = 0; i < static_cast<int>(classes.size()); ++i)
        if (classes[static_cast<size_t>(i)].name == name) return i;
    throw InvariantError("geometry: unknown class '" + name + "'");
}

std::string CombinatorialType::encode() const {
    std::ostringstream os;
    os << "V" << num_vertices << ";E";
    for (const auto& [a, b] : edges) os << a << "-" << b << ",";
    os << ";M";
    for (int m : marking) os << m << ",";
    os << ";K";
    for (DivisorSet k : containment) os << k << ",";
    os << ";C";
    for (int c : cls) os << c << ",";
    return os.str();
}

long long c1_subvariety(const GeometrySpec& geom, int cls_id, DivisorSet K) {
    if (cls_id < 0) return 0;
    const auto& entry = geom.cls(cls_id);
    long long out = entry.c1;
    for (int q = 0; q < geom.q_count(); ++q)
        if (K & (1u << q)) out -= entry.intersections[static_cast<size_t>(q)];
    return out;
}

namespace {

bool is_tree(int num_vertices, const std::vector<std::pair<int, int>>& edges) {
    if (num_vertices <= 0) return false;
    if (static_cast<int>(edges.size()) != num_vertices - 1) return false;
    std::vector<int> parent(static_cast<size_t>(num_vertices));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    };
    for (const auto& [a, b] : edges) {
        if (a < 0 || b < 0 || a >= num_vertices || b >= num_vertices || a == b) return false;
        int ra = find(a), rb = find(b);
        if (ra == rb) return false;  // cycle
        parent[static_cast<size_t>(ra)] = rb;
    }
    return true;
}

std::vector<int> vertex_special_counts(const CombinatorialType& t) {
    std::vector<int> special(static_cast<size_t>(t.num_vertices), 0);
    for (const auto& [a, b] : t.edges) {
        ++special[static_cast<size_t>(a)];
        ++special[static_cast<size_t>(b)];
    }
    for (int m : t.marking) ++special[static_cast<size_t>(m)];
    return special;
}

}  // namespace

void validate_type(const GeometrySpec& geom, const CombinatorialType& t) {
    if (!is_tree(t.num_vertices, t.edges))
        throw InvariantError("type: vertex/edge data is not a tree");
    if (static_cast<int>(t.containment.size()) != t.num_vertices ||
        static_cast<int>(t.cls.size()) != t.num_vertices)
        throw InvariantError("type: decoration length mismatch");
    for (int m : t.marking)
        if (m < 0 || m >= t.num_vertices) throw InvariantError("type: marking out of range");
    for (int v = 0; v < t.num_vertices; ++v) {
        int c = t.cls[static_cast<size_t>(v)];
        DivisorSet K = t.containment[static_cast<size_t>(v)];
        if (c < -1 || c >= static_cast<int>(geom.classes.size()))
            throw InvariantError("type: class id out of range");
        if (c < 0) {
            if (K != 0)
                throw InvariantError("type: zero-class vertex carries a containment set");
        } else {
            const auto& adm = geom.cls(c).admissible;
            if (std::find(adm.begin(), adm.end(), K) == adm.end())
                throw InvariantError("type: containment set not admissible for class '" +
                                     geom.cls(c).name + "'");
        }
    }
    auto special = vertex_special_counts(t);
    for (int v = 0; v < t.num_vertices; ++v)
        if (t.cls[static_cast<size_t>(v)] < 0 && special[static_cast<size_t>(v)] < 3)
            throw InvariantError("type: unstable zero-class vertex");
}

long long dim_gamma(const GeometrySpec& geom, const CombinatorialType& t, int k) {
    const long long n = geom.n;
    long long per_vertex = 0, per_vertex2 = 0;
    for (int v = 0; v < t.num_vertices; ++v) {
        DivisorSet K = t.containment[static_cast<size_t>(v)];
        long long c1v = c1_subvariety(geom, t.cls[static_cast<size_t>(v)], K);
        per_vertex += (n - popcount(K) - 3) + c1v;
        per_vertex2 += c1v - popcount(K) - 1;
    }
    long long per_edge = 0, per_edge2 = 0;
    for (const auto& [a, b] : t.edges) {
        int meet = popcount(t.containment[static_cast<size_t>(a)] &
                            t.containment[static_cast<size_t>(b)]);
        per_edge += meet - n + 2;
        per_edge2 += meet;
    }
    long long half1 = k + per_vertex + per_edge;
    long long half2 = k + n - 2 + per_vertex2 + per_edge2;
    if (half1 != half2)
        throw InvariantError("dimension formula branches disagree (broken tree invariant)");
    return 2 * half1;
}

long long dim_upper_bound(const GeometrySpec& geom, const CombinatorialType& t, int k) {
    long long c1_total = 0;
    for (int v = 0; v < t.num_vertices; ++v) {
        int c = t.cls[static_cast<size_t>(v)];
        if (c >= 0) c1_total += geom.cls(c).c1;
    }
    long long max_k = 0;
    for (DivisorSet K : t.containment) max_k = std::max<long long>(max_k, popcount(K));
    return 2 * (k + geom.n + c1_total - 3 - static_cast<long long>(t.edges.size()) - max_k);
}

namespace {

// all labelled trees on v vertices via Pruefer decoding
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
        // decode
        std::vector<int> degree(static_cast<size_t>(v), 1);
        for (int s : seq) ++degree[static_cast<size_t>(s)];
        std::vector<std::pair<int, int>> edges;
        std::vector<int> deg = degree;
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
        // next sequence
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

void enumerate_class_assignments(const GeometrySpec& geom, const ClassBudget& budget, int v,
                                 std::vector<int>& cls, std::vector<int>& remaining,
                                 const std::function<void()>& emit) {
    if (v == static_cast<int>(cls.size())) {
        emit();
        return;
    }
    cls[static_cast<size_t>(v)] = -1;
    enumerate_class_assignments(geom, budget, v + 1, cls, remaining, emit);
    for (int c = 0; c < static_cast<int>(geom.classes.size()); ++c) {
        if (remaining[static_cast<size_t>(c)] <= 0) continue;
        --remaining[static_cast<size_t>(c)];
        cls[static_cast<size_t>(v)] = c;
        enumerate_class_assignments(geom, budget, v + 1, cls, remaining, emit);
        ++remaining[static_cast<size_t>(c)];
    }
    cls[static_cast<size_t>(v)] = -1;
}

}  // namespace

std::vector<CombinatorialType> enumerate_types(const GeometrySpec& geom, int k,
                                               const ClassBudget& budget, int max_vertices) {
    geom.validate();
    if (static_cast<int>(budget.counts.size()) != static_cast<int>(geom.classes.size()))
        throw InvariantError("enumerate: budget length mismatch");
    std::vector<CombinatorialType> out;
    for (int v = 1; v <= max_vertices; ++v) {
        auto trees = labelled_trees(v);
        for (const auto& edges : trees) {
            // markings: k labelled points over v vertices
            std::vector<int> marking(static_cast<size_t>(k), 0);
            bool marking_done = false;
            while (!marking_done) {
                std::vector<int> cls(static_cast<size_t>(v), -1);
                std::vector<int> remaining = budget.counts;
                enumerate_class_assignments(geom, budget, 0, cls, remaining, [&]() {
                    // containment choices per vertex
                    std::vector<const std::vector<DivisorSet>*> choices(static_cast<size_t>(v));
                    static const std::vector<DivisorSet> ghost_choice{0};
                    for (int i = 0; i < v; ++i) {
                        choices[static_cast<size_t>(i)] =
                            cls[static_cast<size_t>(i)] < 0
                                ? &ghost_choice
                                : &geom.cls(cls[static_cast<size_t>(i)]).admissible;
                        if (choices[static_cast<size_t>(i)]->empty()) return;
                    }
                    std::vector<size_t> pick(static_cast<size_t>(v), 0);
                    while (true) {
                        CombinatorialType t;
                        t.num_vertices = v;
                        t.edges = edges;
                        t.marking = marking;
                        t.cls = cls;
                        t.containment.resize(static_cast<size_t>(v));
                        for (int i = 0; i < v; ++i)
                            t.containment[static_cast<size_t>(i)] =
                                (*choices[static_cast<size_t>(i)])[pick[static_cast<size_t>(i)]];
                        bool valid = true;
                        auto special = vertex_special_counts(t);
                        for (int i = 0; i < v && valid; ++i)
                            if (t.cls[static_cast<size_t>(i)] < 0 &&
                                special[static_cast<size_t>(i)] < 3)
                                valid = false;
                        if (valid) out.push_back(t);
                        // advance pick odometer
                        int p = v - 1;
                        while (p >= 0 &&
                               pick[static_cast<size_t>(p)] + 1 == choices[static_cast<size_t>(p)]->size()) {
                            pick[static_cast<size_t>(p)] = 0;
                            --p;
                        }
                        if (p < 0) break;
                        ++pick[static_cast<size_t>(p)];
                    }
                });
                // advance marking odometer
                if (k == 0) break;
                int p = k - 1;
                while (p >= 0 && marking[static_cast<size_t>(p)] == v - 1) {
                    marking[static_cast<size_t>(p)] = 0;
                    --p;
                }
                if (p < 0) marking_done = true;
                else ++marking[static_cast<size_t>(p)];
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const CombinatorialType& a, const CombinatorialType& b) {
        return a.encode() < b.encode();
    });
    return out;
}

long long disc_dim(long long iA, int k) {
    if (k < 0) throw InvariantError("disc_dim: negative boundary count");
    return iA + k - 2;
}

TangencyData canonical_tangency(const GeometrySpec& geom, int cls_id,
                                const std::vector<int>& q_assignment) {
    const int q_count = geom.q_count();
    std::vector<Coord> counts(static_cast<size_t>(q_count), 0);
    for (int q : q_assignment) {
        if (q < 0 || q >= q_count) throw InvariantError("tangency: divisor index out of range");
        ++counts[static_cast<size_t>(q)];
    }
    std::vector<Coord> expected(static_cast<size_t>(q_count), 0);
    if (cls_id >= 0)
        expected = geom.cls(cls_id).intersections;
    if (counts != expected)
        throw InvariantError("tangency: assignment multiplicities do not match the class");
    TangencyData t;
    t.rows.reserve(q_assignment.size());
    for (int q : q_assignment) {
        std::vector<Coord> row(static_cast<size_t>(q_count), 0);
        row[static_cast<size_t>(q)] = 1;
        t.rows.push_back(std::move(row));
    }
    return t;
}

Int sym_q_order(const GeometrySpec& geom, int cls_id) {
    Int out = 1;
    if (cls_id < 0) return out;
    for (Coord v : geom.cls(cls_id).intersections) {
        Int f = 1;
        for (Coord i = 2; i <= v; ++i) f *= i;
        out *= f;
    }
    return out;
}

LatticeVec monomial_weight(const GeometrySpec& geom, int cls_id) {
    if (!geom.divisor_weights || !geom.cone)
        throw InvariantError("geometry: divisor weights/cone not provided");
    const auto& w = *geom.divisor_weights;
    LatticeVec out = geom.cone->zero();
    if (cls_id >= 0) {
        const auto& inter = geom.cls(cls_id).intersections;
        for (int p = 0; p < geom.cone->ambient_dim(); ++p) {
            Coord acc = 0;
            for (int q = 0; q < geom.q_count(); ++q)
                acc += w[static_cast<size_t>(p)][static_cast<size_t>(q)] *
                       inter[static_cast<size_t>(q)];
            out[p] = acc;
        }
    }
    if (!geom.cone->contains(out))
        throw InvariantError("geometry: monomial weight escapes the dual monoid");
    return out;
}

std::vector<int> BubbleAttachment::sphere_classes() const {
    std::vector<int> out;
    for (int c : tree.cls)
        if (c >= 0) out.push_back(c);
    std::sort(out.begin(), out.end());
    return out;
}

long long bubble_config_dim(const GeometrySpec& geom, long long iA0, int k,
                            const TangencyData& t,
                            const std::vector<std::pair<int, BubbleAttachment>>& bubbles) {
    const int ell = t.ell();
    long long total = disc_dim(iA0, k) + 2 * ell;
    for (const auto& row : t.rows) {
        for (Coord v : row) {
            if (v < 0) throw InvariantError("bubble dim: negative tangency");
            total -= 2 * v;
        }
    }
    std::vector<bool> used(static_cast<size_t>(ell), false);
    for (const auto& [point, bubble] : bubbles) {
        if (point < 0 || point >= ell) throw InvariantError("bubble dim: point index out of range");
        if (used[static_cast<size_t>(point)])
            throw InvariantError("bubble dim: two trees at one point");
        used[static_cast<size_t>(point)] = true;
        if (bubble.tree.marking_count() != 1)
            throw InvariantError("bubble dim: bubble trees carry exactly one marked point");
        validate_type(geom, bubble.tree);
        DivisorSet marked_K =
            bubble.tree.containment[static_cast<size_t>(bubble.tree.marking[0])];
        if (marked_K != bubble.marked_K)
            throw InvariantError("bubble dim: marked component containment mismatch");
        DivisorSet K_i = 0;
        const auto& row = t.rows[static_cast<size_t>(point)];
        for (int q = 0; q < geom.q_count(); ++q)
            if (row[static_cast<size_t>(q)] > 0) K_i |= (1u << q);
        total += dim_gamma(geom, bubble.tree, 1) - 2 * geom.n + 2 * popcount(K_i & marked_K);
    }
    // every zero-tangency point must carry a bubble
    for (int i = 0; i < ell; ++i) {
        bool zero = std::all_of(t.rows[static_cast<size_t>(i)].begin(),
                                t.rows[static_cast<size_t>(i)].end(),
                                [](Coord c) { return c == 0; });
        if (zero && !used[static_cast<size_t>(i)])
            throw InvariantError("bubble dim: zero-tangency point without a bubble");
    }
    return total;
}

std::string ExclusionConfig::encode() const {
    std::ostringstream os;
    os << "t[";
    for (const auto& row : tangency.rows) {
        for (Coord c : row) os << c << ".";
        os << "|";
    }
    os << "];B[";
    for (const auto& [p, b] : bubbles) os << p << ":" << b.tree.encode() << ";";
    os << "];D[";
    for (int c : disc_class_multiset) os << c << ",";
    os << "]";
    return os.str();
}

namespace {

using CoordVec = std::vector<Coord>;

bool vec_is_zero(const CoordVec& v) {
    return std::all_of(v.begin(), v.end(), [](Coord c) { return c == 0; });
}

CoordVec vec_sub(const CoordVec& a, const CoordVec& b) {
    CoordVec out = a;
    for (size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
    return out;
}

// all vectors 0 <= v <= cap, lexicographic
std::vector<CoordVec> vectors_below(const CoordVec& cap) {
    std::vector<CoordVec> out;
    CoordVec cur(cap.size(), 0);
    while (true) {
        out.push_back(cur);
        int p = static_cast<int>(cap.size()) - 1;
        while (p >= 0 && cur[static_cast<size_t>(p)] == cap[static_cast<size_t>(p)]) {
            cur[static_cast<size_t>(p)] = 0;
            --p;
        }
        if (p < 0) break;
        ++cur[static_cast<size_t>(p)];
    }
    return out;
}

// multiset partitions of `total` into nonzero vector parts, parts
// non-increasing lexicographically
void nonzero_partitions(const CoordVec& total, const CoordVec& max_part,
                        std::vector<CoordVec>& acc,
                        const std::function<void(const std::vector<CoordVec>&)>& emit) {
    if (vec_is_zero(total)) {
        emit(acc);
        return;
    }
    // enumerate the next part: nonzero, <= total and <= max_part lexicographically
    for (const auto& part : vectors_below(total)) {
        if (vec_is_zero(part)) continue;
        if (!max_part.empty() && part > max_part) continue;  // keep non-increasing order
        acc.push_back(part);
        nonzero_partitions(vec_sub(total, part), part, acc, emit);
        acc.pop_back();
    }
}

// sub-multisets of a count vector
void sub_multisets(const std::vector<int>& counts, size_t i, std::vector<int>& cur,
                   const std::function<void(const std::vector<int>&)>& emit) {
    if (i == counts.size()) {
        emit(cur);
        return;
    }
    for (int take = 0; take <= counts[i]; ++take) {
        cur[i] = take;
        sub_multisets(counts, i + 1, cur, emit);
    }
    cur[i] = 0;
}

// partitions of a class multiset into nonempty groups (group order
// canonical: non-increasing encoded)
void multiset_group_partitions(const std::vector<int>& counts,
                               std::vector<std::vector<int>>& acc,
                               const std::function<void(const std::vector<std::vector<int>>&)>& emit,
                               const std::vector<int>* max_group = nullptr) {
    bool empty = std::all_of(counts.begin(), counts.end(), [](int c) { return c == 0; });
    if (empty) {
        emit(acc);
        return;
    }
    std::vector<int> cur(counts.size(), 0);
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == counts.size()) {
            bool group_empty = std::all_of(cur.begin(), cur.end(), [](int c) { return c == 0; });
            if (group_empty) return;
            if (max_group && cur > *max_group) return;  // canonical non-increasing groups
            std::vector<int> rest(counts.size());
            for (size_t j = 0; j < counts.size(); ++j) rest[j] = counts[j] - cur[j];
            std::vector<int> group = cur;  // stable copy; acc may reallocate below
            acc.push_back(group);
            multiset_group_partitions(rest, acc, emit, &group);
            acc.pop_back();
            return;
        }
        for (int take = 0; take <= counts[i]; ++take) {
            cur[i] = take;
            rec(i + 1);
        }
        cur[i] = 0;
    };
    rec(0);
}

}  // namespace

ExclusionReport sphere_exclusion(const GeometrySpec& geom, long long iA, int k,
                                 const ClassBudget& budget, int max_bubble_vertices) {
    geom.validate();
    if (static_cast<int>(budget.counts.size()) != static_cast<int>(geom.classes.size()))
        throw InvariantError("exclusion: budget length mismatch");
    ExclusionReport report;
    report.disc_dim = disc_dim(iA, k);
    if (report.disc_dim > 1)
        throw InvariantError("exclusion: requires disc dimension <= 1");

    const int qn = geom.q_count();
    std::map<std::string, ExclusionConfig> configs;

    // candidate one-marked-point trees per class sub-multiset, cached
    std::map<std::vector<int>, std::vector<BubbleAttachment>> tree_cache;
    auto trees_for_group = [&](const std::vector<int>& group) -> const std::vector<BubbleAttachment>& {
        auto it = tree_cache.find(group);
        if (it != tree_cache.end()) return it->second;
        std::vector<BubbleAttachment> list;
        ClassBudget gb{group};
        for (const auto& type : enumerate_types(geom, 1, gb, max_bubble_vertices)) {
            // exact usage of the group multiset
            std::vector<int> used(group.size(), 0);
            for (int c : type.cls)
                if (c >= 0) ++used[static_cast<size_t>(c)];
            if (used != group) continue;
            BubbleAttachment att;
            att.tree = type;
            att.marked_K = type.containment[static_cast<size_t>(type.marking[0])];
            list.push_back(std::move(att));
        }
        return tree_cache.emplace(group, std::move(list)).first->second;
    };

    std::vector<int> sub(budget.counts.size(), 0);
    sub_multisets(budget.counts, 0, sub, [&](const std::vector<int>& sphere_part) {
        // disc part: budget minus spheres
        std::vector<int> disc_part(budget.counts.size());
        long long c1_spheres = 0;
        for (size_t c = 0; c < budget.counts.size(); ++c) {
            disc_part[c] = budget.counts[c] - sphere_part[c];
            c1_spheres += static_cast<long long>(sphere_part[c]) * geom.classes[c].c1;
        }
        long long iA0 = iA - 2 * c1_spheres;
        CoordVec disc_inters(static_cast<size_t>(qn), 0);
        for (size_t c = 0; c < disc_part.size(); ++c)
            for (int q = 0; q < qn; ++q)
                disc_inters[static_cast<size_t>(q)] +=
                    static_cast<Coord>(disc_part[c]) *
                    geom.classes[c].intersections[static_cast<size_t>(q)];

        std::vector<std::vector<int>> groups_acc;
        multiset_group_partitions(sphere_part, groups_acc, [&](const std::vector<std::vector<int>>& groups) {
            // choose a tree per group
            std::vector<const std::vector<BubbleAttachment>*> options;
            options.reserve(groups.size());
            for (const auto& g : groups) {
                const auto& lst = trees_for_group(g);
                if (lst.empty()) return;  // no stable tree realizes this group
                options.push_back(&lst);
            }
            std::vector<size_t> pick(groups.size(), 0);
            while (true) {
                // tangency vectors for the bubbled points: any 0 <= v <= disc_inters
                int m = static_cast<int>(groups.size());
                std::function<void(int, CoordVec, std::vector<CoordVec>&)> assign_bubble_t =
                    [&](int bi, CoordVec remaining, std::vector<CoordVec>& bubble_t) {
                        if (bi == m) {
                            // remaining mass split into nonzero rows for plain points
                            std::vector<CoordVec> acc;
                            nonzero_partitions(remaining, CoordVec{}, acc,
                                               [&](const std::vector<CoordVec>& plain_rows) {
                                ExclusionConfig cfg;
                                // canonical order of the bubbled points
                                std::vector<std::pair<CoordVec, BubbleAttachment>> marked;
                                for (int i = 0; i < m; ++i)
                                    marked.emplace_back(
                                        bubble_t[static_cast<size_t>(i)],
                                        (*options[static_cast<size_t>(i)])[pick[static_cast<size_t>(i)]]);
                                std::sort(marked.begin(), marked.end(),
                                          [](const auto& a, const auto& b) {
                                              if (a.first != b.first) return a.first < b.first;
                                              return a.second.tree.encode() < b.second.tree.encode();
                                          });
                                for (int i = 0; i < m; ++i) {
                                    cfg.tangency.rows.push_back(marked[static_cast<size_t>(i)].first);
                                    cfg.bubbles.emplace_back(i, marked[static_cast<size_t>(i)].second);
                                }
                                for (const auto& row : plain_rows) cfg.tangency.rows.push_back(row);
                                for (size_t c = 0; c < disc_part.size(); ++c)
                                    for (int r = 0; r < disc_part[c]; ++r)
                                        cfg.disc_class_multiset.push_back(static_cast<int>(c));
                                cfg.dim = bubble_config_dim(geom, iA0, k, cfg.tangency, cfg.bubbles);
                                cfg.survivor = cfg.dim >= 0;
                                bool canonical = cfg.bubbles.empty();
                                if (canonical)
                                    for (const auto& row : cfg.tangency.rows) {
                                        Coord s = 0;
                                        for (Coord v : row) s += v;
                                        if (s != 1) { canonical = false; break; }
                                    }
                                cfg.canonical_no_bubble = canonical;
                                configs.emplace(cfg.encode(), cfg);
                            });
                            return;
                        }
                        for (const auto& v : vectors_below(remaining)) {
                            bubble_t.push_back(v);
                            assign_bubble_t(bi + 1, vec_sub(remaining, v), bubble_t);
                            bubble_t.pop_back();
                        }
                    };
                std::vector<CoordVec> bubble_t;
                assign_bubble_t(0, disc_inters, bubble_t);

                int p = m - 1;
                while (p >= 0 && pick[static_cast<size_t>(p)] + 1 == options[static_cast<size_t>(p)]->size()) {
                    pick[static_cast<size_t>(p)] = 0;
                    --p;
                }
                if (p < 0) break;
                ++pick[static_cast<size_t>(p)];
            }
        });
    });

    report.configs.reserve(configs.size());
    bool holds = true;
    for (auto& [key, cfg] : configs) {
        bool expected = cfg.canonical_no_bubble && report.disc_dim >= 0;
        if (cfg.survivor != expected) holds = false;
        report.configs.push_back(std::move(cfg));
    }
    report.exclusion_holds = holds;
    return report;
}

long long forgetful_dim_diff(const GeometrySpec& geom, int ell_for, const TangencyData& t) {
    if (!geom.q0) throw InvariantError("forgetful: no distinguished divisor subset");
    const DivisorSet q0 = *geom.q0;
    const int ell = t.ell();
    if (ell_for < 0 || ell_for > ell) throw InvariantError("forgetful: bad forgettable count");
    for (int i = ell - ell_for; i < ell; ++i) {
        const auto& row = t.rows[static_cast<size_t>(i)];
        for (int q = 0; q < geom.q_count(); ++q) {
            if ((q0 & (1u << q)) && row[static_cast<size_t>(q)] != 0)
                throw InvariantError("forgetful: forgettable point touches the retained divisors");
        }
    }
    long long mass_outside = 0;
    for (const auto& row : t.rows)
        for (int q = 0; q < geom.q_count(); ++q)
            if (!(q0 & (1u << q))) mass_outside += row[static_cast<size_t>(q)];
    return 2LL * ell_for - 2 * mass_outside;
}

}  // namespace ainf
