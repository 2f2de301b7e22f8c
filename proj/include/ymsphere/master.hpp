#ifndef YMSPHERE_MASTER_HPP
#define YMSPHERE_MASTER_HPP

#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "loop.hpp"
#include "simple_field.hpp"

namespace ymsphere {

class DegenerateWinding : public std::runtime_error {
  public:
    explicit DegenerateWinding(const std::string& what) : std::runtime_error(what) {}
};

class SolveError : public std::runtime_error {
  public:
    explicit SolveError(const std::string& what) : std::runtime_error(what) {}
};

class NotSplittableError : public std::runtime_error {
  public:
    explicit NotSplittableError(const std::string& what) : std::runtime_error(what) {}
};

enum class MasterMethod { Recursion, SplittableContour, SimpleFormula };

struct MasterFieldValue {
    double value = 0.0;
    double err_est = 0.0;
    MasterMethod method = MasterMethod::Recursion;
    int depth = 0;
};

struct DeformationPath {
    std::vector<double> alpha;       // one coefficient per intersection (word order)
    std::vector<int> vertices;       // the matching intersection labels
    std::vector<double> v;           // a_end - a_start
    FaceAreaVector a_start, a_end;
    int n_star = 0;                  // max winding - min winding
    int k0 = 0, kstar = 0;           // faces of minimal / maximal winding
    double a0 = 0.0, astar = 0.0;
    double residual = 0.0;
};

namespace masterdetail {

// dense symmetric-positive solve of (M^T M) x = M^T b by Gaussian elimination
// with partial pivoting; sizes here are tiny (p-2 at most)
inline std::vector<double> least_squares(const std::vector<std::vector<double>>& cols,
                                         const std::vector<double>& b) {
    const int c = (int)cols.size();
    const int p = (int)b.size();
    std::vector<std::vector<double>> A(c, std::vector<double>(c + 1, 0.0));
    for (int i = 0; i < c; ++i) {
        for (int j = 0; j < c; ++j)
            for (int f = 0; f < p; ++f) A[i][j] += cols[i][f] * cols[j][f];
        for (int f = 0; f < p; ++f) A[i][c] += cols[i][f] * b[f];
    }
    for (int i = 0; i < c; ++i) {
        int piv = i;
        for (int r = i + 1; r < c; ++r)
            if (std::abs(A[r][i]) > std::abs(A[piv][i])) piv = r;
        std::swap(A[i], A[piv]);
        if (std::abs(A[i][i]) < 1e-14) throw SolveError("deformation system is singular");
        for (int r = 0; r < c; ++r) {
            if (r == i) continue;
            double fac = A[r][i] / A[i][i];
            for (int col = i; col <= c; ++col) A[r][col] -= fac * A[i][col];
        }
    }
    std::vector<double> x(c);
    for (int i = 0; i < c; ++i) x[i] = A[i][c] / A[i][i];
    return x;
}

}  // namespace masterdetail

inline DeformationPath solve_deformation(const CombinatorialLoop& loop,
                                         const FaceAreaVector& areas) {
    const auto& g = loop.graph;
    if ((int)areas.areas.size() != g.p)
        throw std::domain_error("solve_deformation: area count mismatch");
    if (loop.intersections.empty())
        throw std::domain_error("solve_deformation: loop has no intersections");
    std::vector<int> wind = winding_numbers(loop, 0);
    DeformationPath dp;
    dp.a_start = areas;
    dp.k0 = dp.kstar = 0;
    for (int f = 1; f < g.p; ++f) {
        if (wind[f] < wind[dp.k0]) dp.k0 = f;
        if (wind[f] > wind[dp.kstar]) dp.kstar = f;
    }
    dp.n_star = wind[dp.kstar] - wind[dp.k0];
    if (dp.n_star == 0) throw DegenerateWinding("constant winding: loop reduces to a point");
    double T = areas.T;
    double na = 0.0;
    for (int f = 0; f < g.p; ++f) na += wind[f] * areas.areas[f];
    // a0 + a* = T and a0 n(k0) + a* n(k*) = <n,a>
    dp.astar = (na - T * wind[dp.k0]) / dp.n_star;
    dp.a0 = T - dp.astar;
    dp.a_end.areas.assign(g.p, 0.0);
    dp.a_end.areas[dp.k0] = dp.a0;
    dp.a_end.areas[dp.kstar] += dp.astar;
    dp.a_end.T = T;
    dp.v.assign(g.p, 0.0);
    for (int f = 0; f < g.p; ++f) dp.v[f] = dp.a_end.areas[f] - areas.areas[f];
    std::vector<std::vector<double>> cols;
    for (int vtx : loop.intersections) {
        MMVector mu = mm_vector(loop, vtx);
        cols.emplace_back(mu.coefficients.begin(), mu.coefficients.end());
        dp.vertices.push_back(vtx);
    }
    dp.alpha = masterdetail::least_squares(cols, dp.v);
    double norm = 1.0;
    for (double x : dp.v) norm = std::max(norm, std::abs(x));
    for (int f = 0; f < g.p; ++f) {
        double r = -dp.v[f];
        for (size_t i = 0; i < cols.size(); ++i) r += dp.alpha[i] * cols[i][f];
        dp.residual = std::max(dp.residual, std::abs(r));
    }
    if (dp.residual > 1e-9 * norm)
        throw SolveError("deformation direction is not in the span of the MM vectors");
    return dp;
}

namespace masterdetail {

struct MemoContext {
    std::map<std::string, double> cache;
    double err_est = 0.0;
    int max_depth = 0;
};

inline std::string memo_key(const CombinatorialLoop& loop, const FaceAreaVector& areas) {
    auto [std_loop, fmap] = to_standard(loop);
    std::vector<long long> qareas(areas.areas.size());
    for (size_t f = 0; f < areas.areas.size(); ++f)
        qareas[fmap[f]] = std::llround(areas.areas[f] * 1e12);
    std::string key = canonical_key(std_loop);
    for (long long q : qareas) key += ":" + std::to_string(q);
    return key;
}

inline double master_impl(const CombinatorialLoop& loop, const FaceAreaVector& areas,
                          MemoContext& ctx, int depth) {
    if (depth > 8) throw std::runtime_error("master_field: recursion depth exceeded");
    ctx.max_depth = std::max(ctx.max_depth, depth);
    double T = areas.T;
    if (loop.n_self == 0) return phi_simple(1, areas.areas[0], T);
    std::string key = memo_key(loop, areas);
    if (auto it = ctx.cache.find(key); it != ctx.cache.end()) return it->second;
    double value;
    try {
        DeformationPath dp = solve_deformation(loop, areas);
        // boundary value: with all area on k0 and k*, the loop reduces to the
        // n*-th power of a simple loop enclosing area a*
        double astar = std::min(std::max(dp.astar, 0.0), T);
        value = phi_simple(dp.n_star, astar, T);
        for (size_t i = 0; i < dp.alpha.size(); ++i) {
            if (std::abs(dp.alpha[i]) < 1e-14) continue;
            SplitResult sr = split(loop, dp.vertices[i]);
            auto integrand = [&](double s) {
                FaceAreaVector as;
                as.T = T;
                as.areas.resize(loop.graph.p);
                for (int f = 0; f < loop.graph.p; ++f)
                    as.areas[f] = (1.0 - s) * dp.a_start.areas[f] + s * dp.a_end.areas[f];
                double prod = 1.0;
                for (int side = 0; side < 2; ++side) {
                    FaceAreaVector pa =
                        pushforward(as, sr.face_maps[side], sr.sub_loops[side].graph.p);
                    prod *= master_impl(sr.sub_loops[side], pa, ctx, depth + 1);
                }
                return prod;
            };
            // Gauss-Legendre keeps every node strictly inside (0,1), where the
            // deformed areas stay interior
            double prev = 0.0, cur = 0.0;
            for (int nn = 8; nn <= 128; nn *= 2) {
                const auto& xs = detail::gl_nodes(nn);
                const auto& ws = detail::gl_weights(nn);
                cur = 0.0;
                for (int t = 0; t < nn; ++t) cur += ws[t] * integrand(0.5 * (xs[t] + 1.0));
                cur *= 0.5;
                if (nn > 8 && std::abs(cur - prev) < 1e-8) break;
                prev = cur;
            }
            ctx.err_est += std::abs(dp.alpha[i]) * std::abs(cur - prev);
            value -= dp.alpha[i] * cur;
        }
    } catch (const DegenerateWinding&) {
        value = 1.0;  // constant loop
    }
    ctx.cache[key] = value;
    return value;
}

}  // namespace masterdetail

inline MasterFieldValue master_field(const CombinatorialLoop& loop, const FaceAreaVector& areas) {
    if ((int)areas.areas.size() != loop.graph.p)
        throw std::domain_error("master_field: area count mismatch");
    masterdetail::MemoContext ctx;
    MasterFieldValue out;
    out.value = masterdetail::master_impl(loop, areas, ctx, 0);
    out.err_est = ctx.err_est + 1e-8;
    out.method = loop.n_self == 0 ? MasterMethod::SimpleFormula : MasterMethod::Recursion;
    out.depth = ctx.max_depth;
    return out;
}

// Central-difference Makeenko-Migdal defect at intersection vtx:
// |d/dh Phi(a + h mu) - Phi(l_i) Phi(l_hat_i)|.
inline double mm_residual(const CombinatorialLoop& loop, const FaceAreaVector& areas, int vtx,
                          double h) {
    MMVector mu = mm_vector(loop, vtx);
    FaceAreaVector plus = areas, minus = areas;
    for (int f = 0; f < loop.graph.p; ++f) {
        plus.areas[f] += h * mu.coefficients[f];
        minus.areas[f] -= h * mu.coefficients[f];
        if (plus.areas[f] < 0.0 || minus.areas[f] < 0.0)
            throw std::domain_error("mm_residual: stepped areas leave the simplex");
    }
    double deriv =
        (master_field(loop, plus).value - master_field(loop, minus).value) / (2.0 * h);
    SplitResult sr = split(loop, vtx);
    double prod = 1.0;
    for (int side = 0; side < 2; ++side) {
        FaceAreaVector pa = pushforward(areas, sr.face_maps[side], sr.sub_loops[side].graph.p);
        prod *= master_field(sr.sub_loops[side], pa).value;
    }
    return std::abs(deriv - prod);
}

namespace masterdetail {

// one pass of the nested-contour evaluation at N nodes per circle
inline double contour_pass(const SplittableTree& tree, const EquilibriumMeasure& m,
                           const FaceAreaVector& areas, int N, double radius_base,
                           double radius_step) {
    const int L = (int)tree.simple_loops.size();
    const int p = (int)areas.areas.size();
    std::vector<int> rank(L, 0);
    for (int r = 0; r < L; ++r) rank[tree.adapted_order[r]] = r;
    std::vector<double> coef(L, 0.0);
    for (int j = 0; j < L; ++j)
        for (int f = 0; f < p; ++f) coef[j] += tree.wind[j][f] * areas.areas[f];
    // orient the adjacency tree from the first loop in the adapted order
    std::vector<std::vector<int>> children(L);
    std::vector<int> child_edge(L, -1), order;
    {
        std::vector<char> seen(L, 0);
        std::deque<int> queue{tree.adapted_order[0]};
        seen[tree.adapted_order[0]] = 1;
        while (!queue.empty()) {
            int j = queue.front();
            queue.pop_front();
            order.push_back(j);
            for (int e = 0; e < (int)tree.tree_edges.size(); ++e) {
                for (int side = 0; side < 2; ++side) {
                    int a = tree.tree_edges[e][side], b = tree.tree_edges[e][1 - side];
                    if (a == j && !seen[b]) {
                        seen[b] = 1;
                        children[j].push_back(b);
                        child_edge[b] = e;
                        queue.push_back(b);
                    }
                }
            }
        }
    }
    // node values, leaves first
    std::vector<std::vector<cplx>> S(L);
    std::vector<std::vector<cplx>> nodes(L);
    for (int j = 0; j < L; ++j) {
        double R = m.beta + radius_base + radius_step * rank[j];
        nodes[j].resize(N);
        for (int t = 0; t < N; ++t)
            nodes[j][t] = std::polar(R, 2.0 * M_PI * (t + 0.5) / N);
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int j = *it;
        S[j].assign(N, 0.0);
        for (int t = 0; t < N; ++t) {
            cplx z = nodes[j][t];
            cplx val = z * std::exp(coef[j] * z + double(tree.eps[j]) * stieltjes(m, z));
            for (int c : children[j]) {
                // the child contour lies outside the parent's (adapted order
                // puts tree-parents first); each crossing contributes a pole
                // factor 1/(z_inner - z_outer)
                cplx acc = 0.0;
                for (int s = 0; s < N; ++s) acc += S[c][s] / (z - nodes[c][s]);
                val *= acc / double(N);
            }
            S[j][t] += val;
        }
    }
    cplx total = 0.0;
    int root = tree.adapted_order[0];
    for (int t = 0; t < N; ++t) total += S[root][t];
    // sign convention (fixed by matching the single-contour formula and the
    // recursion on the spiral / figure-eight fixtures): the root contour's
    // orientation contributes eps_root and each nested pole factor one -1
    double orient = tree.eps[root] * ((L - 1) % 2 ? -1.0 : 1.0);
    return orient * (total / double(N)).real();
}

}  // namespace masterdetail

// Multi-contour evaluation for splittable loops: nested circles around the
// support, one per simple sub-loop, radii increasing along the adapted order.
inline MasterFieldValue splittable_contour_value(const CombinatorialLoop& loop,
                                                const FaceAreaVector& areas,
                                                int distinguished_face,
                                                double radius_base = 0.3,
                                                double radius_step = 0.4) {
    if (loop.n_self > 3)
        throw std::domain_error("splittable_contour_value: n_self > 3 not supported");
    auto tree = splittable_tree(loop, distinguished_face);
    if (!tree) throw NotSplittableError("loop is not splittable");
    EquilibriumMeasure m = solve_equilibrium(areas.T);
    MasterFieldValue out;
    out.method = MasterMethod::SplittableContour;
    double prev = 0.0;
    for (int N = 32; N <= 1024; N *= 2) {
        double cur = masterdetail::contour_pass(*tree, m, areas, N, radius_base, radius_step);
        if (N > 32 && std::abs(cur - prev) < 1e-9) {
            out.value = cur;
            out.err_est = std::abs(cur - prev) + 1e-9;
            return out;
        }
        prev = cur;
    }
    throw std::runtime_error("splittable_contour_value: contour quadrature did not converge");
}

}  // namespace ymsphere

#endif
