#ifndef YMSPHERE_LOOP_GEN_HPP
#define YMSPHERE_LOOP_GEN_HPP

#include <array>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "loop.hpp"

namespace ymsphere {

// Closed walk on the square lattice, unit steps, point list without the
// repeated endpoint.
struct LatticeWalk {
    std::vector<std::array<int, 2>> points;
};

namespace latdetail {

// compass directions in clockwise order
inline constexpr std::array<std::array<int, 2>, 4> kDirs{{{1, 0}, {0, -1}, {-1, 0}, {0, 1}}};

inline int dir_index(std::array<int, 2> d) {
    for (int i = 0; i < 4; ++i)
        if (kDirs[i] == d) return i;
    throw ValidationError("walk step is not a unit lattice step");
}

using Half = std::pair<std::array<int, 2>, int>;  // (tail point, direction index)

}  // namespace latdetail

// Interpret a closed transverse lattice walk as a combinatorial loop: lattice
// points visited twice become the self-intersections, faces are recovered by
// boundary tracing (next used direction clockwise from the reversed arrival
// direction keeps the face on the left). Throws ValidationError if the walk
// is not a valid transverse loop.
inline CombinatorialLoop loop_from_walk(const LatticeWalk& walk) {
    using namespace latdetail;
    const int L = (int)walk.points.size();
    if (L < 4) throw ValidationError("walk too short");
    std::vector<int> step_dir(L);
    std::set<std::pair<Half, Half>> edge_seen;  // canonical undirected lattice edges
    std::map<std::array<int, 2>, int> visits;
    std::set<Half> half_used;
    for (int i = 0; i < L; ++i) {
        auto a = walk.points[i], b = walk.points[(i + 1) % L];
        step_dir[i] = dir_index({b[0] - a[0], b[1] - a[1]});
        Half h{a, step_dir[i]}, hr{b, (step_dir[i] + 2) % 4};
        auto key = std::minmax(h, hr);
        if (!edge_seen.insert({key.first, key.second}).second)
            throw ValidationError("walk repeats a lattice edge");
        half_used.insert(h);
        half_used.insert(hr);
        visits[a]++;
    }
    if (visits[walk.points[0]] != 1) throw ValidationError("walk revisits its base point");
    for (auto& [pt, c] : visits)
        if (c > 2) throw ValidationError("walk visits a lattice point more than twice");
    // face tracing over directed lattice edges
    std::map<Half, int> face_of;
    int nfaces = 0;
    for (const Half& h0 : half_used) {
        if (face_of.count(h0)) continue;
        int f = nfaces++;
        Half h = h0;
        do {
            face_of[h] = f;
            std::array<int, 2> head{h.first[0] + kDirs[h.second][0],
                                    h.first[1] + kDirs[h.second][1]};
            int d = (h.second + 2) % 4;  // reversed arrival direction
            for (int step = 1; step <= 4; ++step) {
                int cand = (d + step) % 4;
                if (half_used.count({head, cand})) {
                    h = {head, cand};
                    break;
                }
            }
        } while (h != h0);
    }
    // smooth the once-visited points: kept vertices are the base plus doubles
    auto kept = [&](const std::array<int, 2>& pt) {
        return pt == walk.points[0] || visits[pt] == 2;
    };
    std::map<std::array<int, 2>, int> vmap;
    vmap[walk.points[0]] = 0;
    int nv = 1;
    CombinatorialPlanarGraph g;
    std::vector<Step> word;
    std::vector<int> fmap(nfaces, -1);
    int nf = 0;
    int idx = 0;
    while (idx < L) {
        auto from = walk.points[idx];
        int end = idx;
        while (!kept(walk.points[(end + 1) % L])) ++end;
        auto to = walk.points[(end + 1) % L];
        if (!vmap.count(to)) vmap[to] = nv++;
        Half h{from, step_dir[idx]}, hr{walk.points[(idx + 1) % L], (step_dir[idx] + 2) % 4};
        int lf = face_of.at(h), rf = face_of.at(hr);
        for (int* f : {&lf, &rf}) {
            if (fmap[*f] < 0) fmap[*f] = nf++;
            *f = fmap[*f];
        }
        int e = g.m++;
        g.s.push_back(vmap[from]);
        g.t.push_back(vmap[to]);
        g.l.push_back(lf);
        g.r.push_back(rf);
        word.push_back({e, 1});
        idx = end + 1;
    }
    g.q = nv;
    g.p = nf;
    return validate(g, word);
}

inline LatticeWalk figure_eight_walk() {
    return LatticeWalk{{{1, 0},
                        {1, 1},
                        {0, 1},
                        {0, 0},
                        {0, -1},
                        {-1, -1},
                        {-1, 0},
                        {0, 0}}};
}

// Random closed transverse walk with at most max_self self-intersections.
inline std::optional<LatticeWalk> random_transverse_walk(std::mt19937_64& rng, int max_self,
                                                         int max_len = 40,
                                                         int max_attempts = 50000) {
    using namespace latdetail;
    std::uniform_int_distribution<int> coin(0, 1);
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::vector<std::array<int, 2>> pts{{0, 0}};
        std::map<std::array<int, 2>, int> visits{{{0, 0}, 1}};
        std::set<std::pair<Half, Half>> edges;
        bool closed = false;
        while ((int)pts.size() < max_len) {
            auto cur = pts.back();
            std::array<int, 4> order{0, 1, 2, 3};
            std::shuffle(order.begin(), order.end(), rng);
            bool moved = false;
            for (int d : order) {
                std::array<int, 2> nxt{cur[0] + kDirs[d][0], cur[1] + kDirs[d][1]};
                if (std::abs(nxt[0]) > 6 || std::abs(nxt[1]) > 6) continue;
                Half h{cur, d}, hr{nxt, (d + 2) % 4};
                auto key = std::minmax(h, hr);
                if (edges.count({key.first, key.second})) continue;
                if (nxt == std::array<int, 2>{0, 0}) {
                    if (pts.size() >= 4 && coin(rng)) {
                        edges.insert({key.first, key.second});
                        closed = true;
                        moved = true;
                        break;
                    }
                    continue;  // base point may not be crossed mid-walk
                }
                if (visits[nxt] >= 2) continue;
                edges.insert({key.first, key.second});
                visits[nxt]++;
                pts.push_back(nxt);
                moved = true;
                break;
            }
            if (closed || !moved) break;
        }
        if (!closed) continue;
        int doubles = 0;
        for (auto& [pt, c] : visits)
            if (c == 2) ++doubles;
        if (doubles > max_self) continue;
        try {
            LatticeWalk w{std::move(pts)};
            loop_from_walk(w);  // transversality and embedding check
            return w;
        } catch (const ValidationError&) {
            continue;
        }
    }
    return std::nullopt;
}

inline CombinatorialLoop random_loop(std::mt19937_64& rng, int max_self) {
    auto w = random_transverse_walk(rng, max_self);
    if (!w) throw std::runtime_error("random_loop: generation failed");
    return loop_from_walk(*w);
}

}  // namespace ymsphere

#endif
