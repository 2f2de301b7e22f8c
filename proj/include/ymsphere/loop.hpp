#ifndef YMSPHERE_LOOP_HPP
#define YMSPHERE_LOOP_HPP

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <iterator>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ymsphere {

class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public std::runtime_error {
  public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

// Combinatorial planar map: each edge j has source/target vertices s,t and
// left/right faces l,r (sides seen when walking from s to t). All indices
// 0-based internally; the text format is 1-based.
struct CombinatorialPlanarGraph {
    int m = 0, q = 0, p = 0;
    std::vector<int> s, t, l, r;
};

// One step of a loop: edge index plus direction (+1: s->t, -1: t->s).
struct Step {
    int edge = 0;
    int dir = 1;
    bool operator==(const Step&) const = default;
};

struct CombinatorialLoop {
    CombinatorialPlanarGraph graph;
    std::vector<Step> word;          // each edge exactly once
    int n_self = 0;                  // number of self-intersections (= q-1)
    int base = 0;                    // degree-2 start vertex
    std::vector<int> intersections;  // degree-4 vertices in order of first visit
};

struct FaceAreaVector {
    std::vector<double> areas;
    double T = 0.0;
};

inline FaceAreaVector make_face_areas(std::vector<double> areas) {
    for (double a : areas)
        if (a < 0.0) throw std::domain_error("face areas must be nonnegative");
    double T = std::accumulate(areas.begin(), areas.end(), 0.0);
    return FaceAreaVector{std::move(areas), T};
}

struct MMVector {
    int vertex = 0;
    std::vector<int> coefficients;  // one per face, entries in {-2,...,2}, sum 0
};

namespace loopdetail {

inline int src(const CombinatorialPlanarGraph& g, Step st) {
    return st.dir > 0 ? g.s[st.edge] : g.t[st.edge];
}
inline int dst(const CombinatorialPlanarGraph& g, Step st) {
    return st.dir > 0 ? g.t[st.edge] : g.s[st.edge];
}
// face on the left/right while travelling along the step
inline int left(const CombinatorialPlanarGraph& g, Step st) {
    return st.dir > 0 ? g.l[st.edge] : g.r[st.edge];
}
inline int right(const CombinatorialPlanarGraph& g, Step st) {
    return st.dir > 0 ? g.r[st.edge] : g.l[st.edge];
}
inline Step reversed(Step st) { return Step{st.edge, -st.dir}; }

// Per-edge traversal sign: stored l/r are relative to the stored s->t
// orientation, but the winding rule n(left) = n(right) + 1 holds relative to
// the direction the loop actually runs through the edge.
inline std::vector<int> edge_signs(const CombinatorialPlanarGraph& g,
                                   const std::vector<Step>& word) {
    std::vector<int> sign(g.m, 1);
    for (const Step& st : word) sign[st.edge] = st.dir;
    return sign;
}

// Winding numbers by BFS on the dual graph; crossing edge j from its
// traversal-right face into its traversal-left face adds 1. Throws on
// inconsistency (the increments must close around every dual cycle) or a
// disconnected dual.
inline std::vector<int> windings_bfs(const CombinatorialPlanarGraph& g,
                                     const std::vector<int>& sign, int ref) {
    std::vector<int> n(g.p, 0);
    std::vector<char> seen(g.p, 0);
    std::deque<int> queue{ref};
    seen[ref] = 1;
    while (!queue.empty()) {
        int f = queue.front();
        queue.pop_front();
        for (int j = 0; j < g.m; ++j) {
            int lf = g.l[j], rf = g.r[j];
            if (lf != f && rf != f) continue;
            int other = (lf == f) ? rf : lf;
            int val = (lf == f) ? n[f] - sign[j] : n[f] + sign[j];
            if (!seen[other]) {
                seen[other] = 1;
                n[other] = val;
                queue.push_back(other);
            } else if (n[other] != val) {
                throw ValidationError("winding numbers inconsistent (bad embedding data)");
            }
        }
    }
    for (int f = 0; f < g.p; ++f)
        if (!seen[f]) throw ValidationError("dual graph disconnected");
    return n;
}

// The four corner faces at a degree-4 self-intersection, as the circuit
// (k1,k2,k3,k4): k1 flanked by both outgoing strands, k3 by both incoming,
// k2/k4 mixed. Reconstructed by testing which cyclic arrangement of the four
// away-pointing half-edges has consistent corner faces, then checked against
// the winding pattern (n, n+1, n, n-1).
inline std::array<int, 4> corner_faces(const CombinatorialLoop& loop, int v,
                                       const std::vector<int>& wind) {
    const auto& g = loop.graph;
    const int m = g.m;
    std::vector<int> outpos;
    for (int kpos = 0; kpos < m; ++kpos)
        if (src(g, loop.word[kpos]) == v) outpos.push_back(kpos);
    if (outpos.size() != 2)
        throw ValidationError("vertex is not a two-pass self-intersection");
    Step o1 = loop.word[outpos[0]], o2 = loop.word[outpos[1]];
    Step i1 = reversed(loop.word[(outpos[0] + m - 1) % m]);
    Step i2 = reversed(loop.word[(outpos[1] + m - 1) % m]);
    // transversality: within each pass the in and out half-edges are opposite
    const std::array<std::array<Step, 4>, 2> orders{{{o1, o2, i1, i2}, {o1, i2, i1, o2}}};
    std::optional<std::array<int, 4>> result;
    for (const auto& ord : orders) {
        for (int chir = 0; chir < 2; ++chir) {
            std::array<int, 4> corner{};
            bool ok = true;
            for (int c = 0; c < 4 && ok; ++c) {
                Step a = ord[c], b = ord[(c + 1) % 4];
                int fa = chir == 0 ? left(g, a) : right(g, a);
                int fb = chir == 0 ? right(g, b) : left(g, b);
                if (fa != fb) ok = false;
                corner[c] = fa;
            }
            if (!ok) continue;
            // locate the both-outgoing corner in this circuit
            auto is_out = [&](const Step& h) { return h == o1 || h == o2; };
            int k1pos = -1;
            for (int c = 0; c < 4; ++c)
                if (is_out(ord[c]) && is_out(ord[(c + 1) % 4])) k1pos = c;
            if (k1pos < 0) continue;
            std::array<int, 4> circ;
            for (int c = 0; c < 4; ++c) circ[c] = corner[(k1pos + c) % 4];
            // winding pattern around a crossing: (n, n+1, n, n-1)
            int n0 = wind[circ[0]];
            if (wind[circ[2]] != n0) continue;
            if (!((wind[circ[1]] == n0 + 1 && wind[circ[3]] == n0 - 1) ||
                  (wind[circ[1]] == n0 - 1 && wind[circ[3]] == n0 + 1)))
                continue;
            if (wind[circ[1]] == n0 - 1) std::swap(circ[1], circ[3]);
            if (result && *result != circ)
                throw ValidationError("ambiguous rotation at self-intersection");
            result = circ;
        }
    }
    if (!result) throw ValidationError("no consistent rotation at self-intersection (not transverse)");
    return *result;
}

}  // namespace loopdetail

inline std::vector<int> winding_numbers(const CombinatorialLoop& loop, int reference_face) {
    if (reference_face < 0 || reference_face >= loop.graph.p)
        throw std::domain_error("winding_numbers: face index out of range");
    return loopdetail::windings_bfs(loop.graph, loopdetail::edge_signs(loop.graph, loop.word),
                                    reference_face);
}

inline CombinatorialLoop validate(const CombinatorialPlanarGraph& graph,
                                  const std::vector<Step>& word) {
    using namespace loopdetail;
    const int m = graph.m;
    if (m < 1) throw ValidationError("no edges");
    if ((int)graph.s.size() != m || (int)graph.t.size() != m || (int)graph.l.size() != m ||
        (int)graph.r.size() != m)
        throw ValidationError("incidence arrays must have one entry per edge");
    if (graph.q < 1 || graph.p < 2) throw ValidationError("vertex/face counts out of range");
    for (int j = 0; j < m; ++j) {
        if (graph.s[j] < 0 || graph.s[j] >= graph.q || graph.t[j] < 0 || graph.t[j] >= graph.q)
            throw ValidationError("vertex index out of range on edge " + std::to_string(j + 1));
        if (graph.l[j] < 0 || graph.l[j] >= graph.p || graph.r[j] < 0 || graph.r[j] >= graph.p)
            throw ValidationError("face index out of range on edge " + std::to_string(j + 1));
    }
    if (graph.q - m + graph.p != 2) throw ValidationError("Euler relation q - m + p = 2 violated");
    if ((int)word.size() != m) throw ValidationError("word must use every edge exactly once");
    std::vector<int> used(m, 0);
    for (const Step& st : word) {
        if (st.edge < 0 || st.edge >= m) throw ValidationError("word references unknown edge");
        if (st.dir != 1 && st.dir != -1) throw ValidationError("step direction must be +-1");
        if (used[st.edge]++) throw ValidationError("word repeats edge " + std::to_string(st.edge + 1));
    }
    for (int k = 0; k < m; ++k)
        if (dst(graph, word[k]) != src(graph, word[(k + 1) % m]))
            throw ValidationError("word does not concatenate at position " + std::to_string(k + 1));
    // degree profile: base 2, all other vertices 4
    std::vector<int> deg(graph.q, 0);
    for (int j = 0; j < m; ++j) {
        deg[graph.s[j]]++;
        deg[graph.t[j]]++;
    }
    int base = src(graph, word[0]);
    for (int v = 0; v < graph.q; ++v) {
        int want = (v == base) ? 2 : 4;
        if (deg[v] != want)
            throw ValidationError("vertex " + std::to_string(v + 1) + " has degree " +
                                  std::to_string(deg[v]) + ", expected " + std::to_string(want));
    }
    CombinatorialLoop loop;
    loop.graph = graph;
    loop.word = word;
    loop.base = base;
    loop.n_self = graph.q - 1;
    // winding consistency doubles as a planarity/face-coherence check
    std::vector<int> wind = windings_bfs(graph, edge_signs(graph, word), 0);
    // every intersection must carry a consistent transverse rotation
    std::vector<char> seenv(graph.q, 0);
    seenv[base] = 1;
    for (const Step& st : word) {
        int v = src(graph, st);
        if (!seenv[v]) {
            seenv[v] = 1;
            loop.intersections.push_back(v);
        }
    }
    for (int v : loop.intersections) corner_faces(loop, v, wind);
    return loop;
}

inline MMVector mm_vector(const CombinatorialLoop& loop, int vertex) {
    std::vector<int> wind = loopdetail::windings_bfs(
        loop.graph, loopdetail::edge_signs(loop.graph, loop.word), 0);
    std::array<int, 4> circ = loopdetail::corner_faces(loop, vertex, wind);
    MMVector mu;
    mu.vertex = vertex;
    mu.coefficients.assign(loop.graph.p, 0);
    mu.coefficients[circ[0]] += 1;
    mu.coefficients[circ[1]] -= 1;
    mu.coefficients[circ[2]] += 1;
    mu.coefficients[circ[3]] -= 1;
    return mu;
}

struct SplitResult {
    std::array<CombinatorialLoop, 2> sub_loops;
    // parent face index -> face index in the respective sub-loop
    std::array<std::vector<int>, 2> face_maps;
};

namespace loopdetail {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Build a sub-loop from a cyclic list of parent word positions starting and
// ending at vertex v: smooth the degree-2 vertices, merge faces across all
// parent edges the sub-loop does not use.
inline std::pair<CombinatorialLoop, std::vector<int>> extract_subloop(
    const CombinatorialLoop& parent, const std::vector<int>& positions, int v) {
    const auto& g = parent.graph;
    std::vector<char> used_edge(g.m, 0);
    for (int p : positions) used_edge[parent.word[p].edge] = 1;
    UnionFind uf(g.p);
    for (int j = 0; j < g.m; ++j)
        if (!used_edge[j]) uf.unite(g.l[j], g.r[j]);
    // vertices kept: v plus those the sub-loop passes through twice
    std::vector<int> visits(g.q, 0);
    for (int p : positions) visits[src(g, parent.word[p])]++;
    auto kept = [&](int u) { return u == v || visits[u] == 2; };
    // walk the positions, merging runs between kept vertices into edges
    std::vector<int> vmap(g.q, -1);
    int nv = 0;
    vmap[v] = nv++;
    CombinatorialPlanarGraph sg;
    std::vector<Step> sword;
    size_t idx = 0;
    while (idx < positions.size()) {
        Step first = parent.word[positions[idx]];
        int from = src(g, first);
        size_t end = idx;
        while (!kept(dst(g, parent.word[positions[end]]))) ++end;
        Step last = parent.word[positions[end]];
        int to = dst(g, last);
        if (vmap[to] < 0) vmap[to] = nv++;
        int e = sg.m++;
        sg.s.push_back(vmap[from]);
        sg.t.push_back(vmap[to]);
        sg.l.push_back(uf.find(left(g, first)));   // face classes for now
        sg.r.push_back(uf.find(right(g, first)));
        sword.push_back(Step{e, 1});
        idx = end + 1;
    }
    sg.q = nv;
    // renumber face classes by first appearance (left then right along word)
    std::vector<int> fmap_class(g.p, -1);
    int nf = 0;
    for (int e = 0; e < sg.m; ++e) {
        for (int* f : {&sg.l[e], &sg.r[e]}) {
            if (fmap_class[*f] < 0) fmap_class[*f] = nf++;
            *f = fmap_class[*f];
        }
    }
    sg.p = nf;
    std::vector<int> face_map(g.p);
    for (int f = 0; f < g.p; ++f) {
        int c = uf.find(f);
        if (fmap_class[c] < 0)
            throw ValidationError("internal: face class lost during split");
        face_map[f] = fmap_class[c];
    }
    return {validate(sg, sword), face_map};
}

}  // namespace loopdetail

inline SplitResult split(const CombinatorialLoop& loop, int vertex) {
    using namespace loopdetail;
    const auto& g = loop.graph;
    std::vector<int> outpos;
    for (int k = 0; k < g.m; ++k)
        if (src(g, loop.word[k]) == vertex) outpos.push_back(k);
    if (outpos.size() != 2) throw std::domain_error("split: vertex is not a self-intersection");
    std::vector<int> posA, posB;
    for (int k = outpos[0]; k < outpos[1]; ++k) posA.push_back(k);
    for (int k = outpos[1]; k < g.m; ++k) posB.push_back(k);
    for (int k = 0; k < outpos[0]; ++k) posB.push_back(k);
    SplitResult res;
    auto [la, ma] = extract_subloop(loop, posA, vertex);
    auto [lb, mb] = extract_subloop(loop, posB, vertex);
    res.sub_loops = {std::move(la), std::move(lb)};
    res.face_maps = {std::move(ma), std::move(mb)};
    return res;
}

inline FaceAreaVector pushforward(const FaceAreaVector& a, const std::vector<int>& face_map,
                                  int p_sub) {
    FaceAreaVector out;
    out.areas.assign(p_sub, 0.0);
    for (size_t f = 0; f < face_map.size(); ++f) out.areas[face_map[f]] += a.areas[f];
    out.T = a.T;
    return out;
}

// --- splittable loops -------------------------------------------------------

struct SplittableTree {
    // each simple loop as the parent word positions it uses (in loop order)
    std::vector<std::vector<int>> simple_loops;
    // tree edge i: the two simple-loop indices meeting at intersection vertex[i]
    std::vector<std::array<int, 2>> tree_edges;
    std::vector<int> tree_vertex;
    std::vector<int> adapted_order;  // loop indices, each adjacent to a predecessor
    std::vector<int> eps;            // per loop, +-1 (orientation relative to face k)
    // per tree edge: (j(i,l), j(i,r)) with mu_i <n_s,a> = -1 / +1 respectively
    std::vector<std::array<int, 2>> crossing_lr;
    // per loop: winding function of the simple loop on parent faces, zero at k
    std::vector<std::vector<int>> wind;
    int distinguished_face = 0;
};

inline std::optional<SplittableTree> splittable_tree(const CombinatorialLoop& loop,
                                                     int distinguished_face) {
    using namespace loopdetail;
    const auto& g = loop.graph;
    if (distinguished_face < 0 || distinguished_face >= g.p)
        throw std::domain_error("splittable_tree: face index out of range");
    SplittableTree tree;
    tree.distinguished_face = distinguished_face;
    std::vector<std::array<int, 3>> crossings;  // (vertex, posA0, posB0)
    // recursive decomposition over lists of word positions
    bool splittable = true;
    auto decompose = [&](auto&& self, std::vector<int> positions) -> void {
        if (!splittable) return;
        std::vector<int> count(g.q, 0);
        for (int p : positions) count[src(g, loop.word[p])]++;
        int v = -1;
        for (int p : positions) {
            int u = src(g, loop.word[p]);
            if (count[u] == 2) {
                v = u;
                break;
            }
        }
        if (v < 0) {
            tree.simple_loops.push_back(std::move(positions));
            return;
        }
        std::vector<int> occ;
        for (size_t idx = 0; idx < positions.size(); ++idx)
            if (src(g, loop.word[positions[idx]]) == v) occ.push_back((int)idx);
        std::vector<int> A(positions.begin() + occ[0], positions.begin() + occ[1]);
        std::vector<int> B(positions.begin() + occ[1], positions.end());
        B.insert(B.end(), positions.begin(), positions.begin() + occ[0]);
        // the two halves may share no vertex besides v
        std::vector<char> inA(g.q, 0);
        for (int p : A) inA[src(g, loop.word[p])] = 1;
        for (int p : B) {
            int u = src(g, loop.word[p]);
            if (u != v && inA[u]) {
                splittable = false;
                return;
            }
        }
        crossings.push_back({v, A[0], B[0]});
        self(self, std::move(A));
        self(self, std::move(B));
    };
    std::vector<int> all(g.m);
    std::iota(all.begin(), all.end(), 0);
    decompose(decompose, std::move(all));
    if (!splittable) return std::nullopt;

    const int L = (int)tree.simple_loops.size();
    std::vector<int> pos_owner(g.m, -1);
    for (int j = 0; j < L; ++j)
        for (int p : tree.simple_loops[j]) pos_owner[p] = j;
    // sort loops by their first parent word position for deterministic labels
    std::vector<int> order(L);
    std::iota(order.begin(), order.end(), 0);
    auto min_pos = [&](int j) { return *std::min_element(tree.simple_loops[j].begin(),
                                                         tree.simple_loops[j].end()); };
    std::sort(order.begin(), order.end(), [&](int a, int b) { return min_pos(a) < min_pos(b); });
    std::vector<std::vector<int>> loops_sorted(L);
    std::vector<int> newidx(L);
    for (int j = 0; j < L; ++j) {
        loops_sorted[j] = tree.simple_loops[order[j]];
        newidx[order[j]] = j;
    }
    tree.simple_loops = std::move(loops_sorted);
    for (int p = 0; p < g.m; ++p) pos_owner[p] = newidx[pos_owner[p]];

    std::vector<int> esign = edge_signs(g, loop.word);
    std::vector<int> parent_wind = windings_bfs(g, esign, distinguished_face);
    // winding function of each simple loop on the parent faces: BFS where
    // only the loop's own edges change the level
    tree.wind.assign(L, {});
    tree.eps.assign(L, 0);
    for (int j = 0; j < L; ++j) {
        std::vector<char> in_loop(g.m, 0);
        for (int p : tree.simple_loops[j]) in_loop[loop.word[p].edge] = 1;
        std::vector<int> wj(g.p, 0);
        std::vector<char> seen(g.p, 0);
        std::deque<int> queue{distinguished_face};
        seen[distinguished_face] = 1;
        while (!queue.empty()) {
            int f = queue.front();
            queue.pop_front();
            for (int e = 0; e < g.m; ++e) {
                int lf = g.l[e], rf = g.r[e];
                if (lf != f && rf != f) continue;
                int other = (lf == f) ? rf : lf;
                int delta = in_loop[e] ? ((lf == f) ? -esign[e] : +esign[e]) : 0;
                int val = wj[f] + delta;
                if (!seen[other]) {
                    seen[other] = 1;
                    wj[other] = val;
                    queue.push_back(other);
                } else if (wj[other] != val) {
                    throw ValidationError("simple sub-loop winding inconsistent");
                }
            }
        }
        int e_j = 0;
        for (int f = 0; f < g.p; ++f) {
            if (wj[f] == 0) continue;
            if (wj[f] != 1 && wj[f] != -1)
                throw ValidationError("simple sub-loop has non-unit winding");
            if (e_j != 0 && wj[f] != e_j)
                throw ValidationError("simple sub-loop winding not two-valued");
            e_j = wj[f];
        }
        if (e_j == 0) throw ValidationError("simple sub-loop encloses no face");
        tree.wind[j] = std::move(wj);
        // s_j winds positively around k <=> it is clockwise in the plane
        // picture with k unbounded; epsilon = -(enclosed winding value)
        tree.eps[j] = -e_j;
    }
    // tree edges and the l/r assignment via mu_i . wind_j in {+1 (right), -1 (left)}
    for (auto [v, pa, pb] : crossings) {
        int ja = pos_owner[pa], jb = pos_owner[pb];
        MMVector mu = mm_vector(loop, v);
        auto dot = [&](int j) {
            int d = 0;
            for (int f = 0; f < g.p; ++f) d += mu.coefficients[f] * tree.wind[j][f];
            return d;
        };
        int da = dot(ja), db = dot(jb);
        if (!((da == 1 && db == -1) || (da == -1 && db == 1)))
            throw ValidationError("crossing pairing degenerate");
        tree.tree_edges.push_back({ja, jb});
        tree.tree_vertex.push_back(v);
        tree.crossing_lr.push_back(da == 1 ? std::array<int, 2>{jb, ja}
                                           : std::array<int, 2>{ja, jb});
    }
    // adapted order: start at the lowest-labelled loop bounding the
    // distinguished face, then repeatedly append the lowest-labelled loop
    // adjacent to the chosen prefix
    int root = -1;
    for (int j = 0; j < L && root < 0; ++j)
        for (int p : tree.simple_loops[j]) {
            int e = loop.word[p].edge;
            if (g.l[e] == distinguished_face || g.r[e] == distinguished_face) {
                root = j;
                break;
            }
        }
    if (root < 0) throw ValidationError("distinguished face bounded by no simple loop");
    std::vector<char> chosen(L, 0);
    tree.adapted_order.push_back(root);
    chosen[root] = 1;
    while ((int)tree.adapted_order.size() < L) {
        int best = -1;
        for (auto& e : tree.tree_edges) {
            for (int side = 0; side < 2; ++side) {
                int u = e[side], w = e[1 - side];
                if (chosen[u] && !chosen[w] && (best < 0 || w < best)) best = w;
            }
        }
        if (best < 0) throw ValidationError("simple-loop adjacency is not connected");
        chosen[best] = 1;
        tree.adapted_order.push_back(best);
    }
    return tree;
}

// --- generators --------------------------------------------------------------

// The maximally winding loop: a spiral visiting vertices 1..n, winding j times
// around face j, with a terminal self-loop of maximal winding.
inline CombinatorialLoop maximally_winding(int n) {
    if (n < 1) throw std::domain_error("maximally_winding: n must be >= 1");
    CombinatorialPlanarGraph g;
    g.q = n;
    g.m = 2 * n - 1;
    g.p = n + 1;
    g.s.assign(g.m, 0);
    g.t.assign(g.m, 0);
    g.l.assign(g.m, 0);
    g.r.assign(g.m, 0);
    for (int j = 1; j <= n - 1; ++j) {
        g.s[j - 1] = j - 1;  // edge j: vertex j -> j+1
        g.t[j - 1] = j;
        g.l[j - 1] = j;
        g.r[j - 1] = j - 1;
        g.s[n + j - 1] = j;  // edge j': vertex j+1 -> j
        g.t[n + j - 1] = j - 1;
        g.l[n + j - 1] = j;
        g.r[n + j - 1] = j - 1;
    }
    g.s[n - 1] = g.t[n - 1] = n - 1;  // terminal self-loop at vertex n
    g.l[n - 1] = n;
    g.r[n - 1] = n - 1;
    std::vector<Step> word;
    for (int j = 0; j < n; ++j) word.push_back({j, 1});
    for (int j = n - 2; j >= 0; --j) word.push_back({n + j, 1});
    return validate(g, word);
}

// Reverse the traversal direction (values of the master field are invariant).
inline CombinatorialLoop reverse_loop(const CombinatorialLoop& loop) {
    // the reversed word already starts at the base: src of the reversed last
    // step is the dst of the original last step
    std::vector<Step> w;
    for (auto it = loop.word.rbegin(); it != loop.word.rend(); ++it)
        w.push_back(loopdetail::reversed(*it));
    return validate(loop.graph, w);
}

// --- standard labelling, serialization, parsing -----------------------------

// Relabel edges by word position (all directions +1), vertices and faces by
// first appearance along the word. Returns the loop plus the face relabelling
// parent face -> standard face.
inline std::pair<CombinatorialLoop, std::vector<int>> to_standard(const CombinatorialLoop& loop) {
    using namespace loopdetail;
    const auto& g = loop.graph;
    CombinatorialPlanarGraph sg;
    sg.m = g.m;
    sg.q = g.q;
    sg.p = g.p;
    sg.s.assign(g.m, 0);
    sg.t.assign(g.m, 0);
    sg.l.assign(g.m, 0);
    sg.r.assign(g.m, 0);
    std::vector<int> vmap(g.q, -1), fmap(g.p, -1);
    int nv = 0, nf = 0;
    for (int k = 0; k < g.m; ++k) {
        const Step st = loop.word[k];
        int sv = src(g, st), tv = dst(g, st), lf = left(g, st), rf = right(g, st);
        if (vmap[sv] < 0) vmap[sv] = nv++;
        if (vmap[tv] < 0) vmap[tv] = nv++;
        if (fmap[lf] < 0) fmap[lf] = nf++;
        if (fmap[rf] < 0) fmap[rf] = nf++;
        sg.s[k] = vmap[sv];
        sg.t[k] = vmap[tv];
        sg.l[k] = fmap[lf];
        sg.r[k] = fmap[rf];
    }
    std::vector<Step> word;
    for (int k = 0; k < g.m; ++k) word.push_back({k, 1});
    return {validate(sg, word), fmap};
}

inline std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string serialize_loop_spec(const CombinatorialLoop& loop,
                                       const FaceAreaVector* areas = nullptr) {
    std::ostringstream out;
    const auto& g = loop.graph;
    out << "edges " << g.m << "\n";
    for (int j = 0; j < g.m; ++j)
        out << j + 1 << " " << g.s[j] + 1 << " " << g.t[j] + 1 << " " << g.l[j] + 1 << " "
            << g.r[j] + 1 << "\n";
    out << "word\n";
    for (int k = 0; k < (int)loop.word.size(); ++k)
        out << (k ? " " : "") << loop.word[k].dir * (loop.word[k].edge + 1);
    out << "\n";
    if (areas) {
        out << "areas\n";
        for (int f = 0; f < g.p; ++f) out << (f ? " " : "") << format_g17(areas->areas[f]);
        out << "\n";
    }
    return out.str();
}

// Canonical key: the standard labelling's serialization (no areas); two loops
// are equal up to relabelling iff their keys match.
inline std::string canonical_key(const CombinatorialLoop& loop) {
    return serialize_loop_spec(to_standard(loop).first);
}

inline std::pair<CombinatorialLoop, FaceAreaVector> parse_loop_spec(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto next_tokens = [&](std::vector<std::string>& toks) -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            toks.assign(std::istream_iterator<std::string>(ls), {});
            if (!toks.empty()) return true;
        }
        return false;
    };
    std::vector<std::string> toks;
    if (!next_tokens(toks)) throw ParseError(lineno, "empty loop spec");
    if (toks.size() != 2 || toks[0] != "edges") throw ParseError(lineno, "expected 'edges m'");
    int m = 0;
    try {
        m = std::stoi(toks[1]);
    } catch (...) {
        throw ParseError(lineno, "bad edge count");
    }
    if (m < 1) throw ParseError(lineno, "edge count must be positive");
    CombinatorialPlanarGraph g;
    g.m = m;
    g.s.assign(m, -1);
    g.t.assign(m, -1);
    g.l.assign(m, -1);
    g.r.assign(m, -1);
    int maxv = 0, maxf = 0;
    for (int cnt = 0; cnt < m; ++cnt) {
        if (!next_tokens(toks)) throw ParseError(lineno, "unexpected end of file in edge list");
        if (toks.size() != 5) throw ParseError(lineno, "edge line needs 'j s t l r'");
        int vals[5];
        for (int c = 0; c < 5; ++c) {
            try {
                vals[c] = std::stoi(toks[c]);
            } catch (...) {
                throw ParseError(lineno, "bad integer in column " + std::to_string(c + 1));
            }
        }
        int j = vals[0];
        if (j < 1 || j > m) throw ParseError(lineno, "edge index out of range");
        if (g.s[j - 1] >= 0) throw ParseError(lineno, "duplicate edge " + std::to_string(j));
        if (vals[1] < 1 || vals[2] < 1 || vals[3] < 1 || vals[4] < 1)
            throw ParseError(lineno, "indices are 1-based positive integers");
        g.s[j - 1] = vals[1] - 1;
        g.t[j - 1] = vals[2] - 1;
        g.l[j - 1] = vals[3] - 1;
        g.r[j - 1] = vals[4] - 1;
        maxv = std::max({maxv, vals[1], vals[2]});
        maxf = std::max({maxf, vals[3], vals[4]});
    }
    g.q = maxv;
    g.p = maxf;
    if (!next_tokens(toks) || toks[0] != "word") throw ParseError(lineno, "expected 'word'");
    if (toks.size() > 1) throw ParseError(lineno, "tokens after 'word' keyword");
    std::vector<Step> word;
    bool saw_areas = false;
    while (next_tokens(toks)) {
        if (toks[0] == "areas") {
            if (toks.size() > 1) throw ParseError(lineno, "tokens after 'areas' keyword");
            saw_areas = true;
            break;
        }
        for (const auto& tk : toks) {
            int v = 0;
            try {
                v = std::stoi(tk);
            } catch (...) {
                throw ParseError(lineno, "bad word token '" + tk + "'");
            }
            if (v == 0 || std::abs(v) > m) throw ParseError(lineno, "word token out of range");
            word.push_back({std::abs(v) - 1, v > 0 ? 1 : -1});
        }
    }
    if (!saw_areas) throw ParseError(lineno, "expected 'areas'");
    std::vector<double> areas;
    while (next_tokens(toks)) {
        for (const auto& tk : toks) {
            char* endp = nullptr;
            double a = std::strtod(tk.c_str(), &endp);
            if (endp == tk.c_str() || *endp) throw ParseError(lineno, "bad area '" + tk + "'");
            if (a < 0.0) throw ParseError(lineno, "negative area '" + tk + "'");
            areas.push_back(a);
        }
    }
    if ((int)areas.size() != g.p)
        throw ParseError(lineno, "expected " + std::to_string(g.p) + " areas, got " +
                                     std::to_string(areas.size()));
    CombinatorialLoop loop = validate(g, word);
    return {loop, make_face_areas(std::move(areas))};
}

}  // namespace ymsphere

#endif
