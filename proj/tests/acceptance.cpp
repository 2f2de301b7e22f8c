// Acceptance gate: one self-contained binary, one PASS/FAIL line per
// criterion, nonzero exit if anything fails. No test framework on purpose —
// the checks here should be readable top to bottom.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ymsphere/equilibrium.hpp"
#include "ymsphere/loop_gen.hpp"
#include "ymsphere/master.hpp"
#include "ymsphere/oracle.hpp"
#include "ymsphere/simple_field.hpp"

using namespace ymsphere;

namespace {

int g_failures = 0;

void report(int idx, const char* title, bool ok, const std::string& detail) {
    std::printf("criterion %2d [%s]: %s%s%s\n", idx, title, ok ? "PASS" : "FAIL",
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

// --- criterion 1: elliptic phase map ----------------------------------------

void criterion_1() {
    bool ok = true;
    std::string detail;
    double worst = 0.0;
    for (double T : {M_PI * M_PI + 0.01, 12.0, 16.0, 25.0, 100.0}) {
        EquilibriumMeasure m = solve_equilibrium(T);
        double k2 = 1.0 - m.kprime * m.kprime;
        double res = std::abs(8.0 * m.E * m.K - 4.0 * (1.0 - k2) * m.K * m.K - T);
        worst = std::max(worst, res);
        if (res > 1e-10) ok = false;
    }
    double b_lo = solve_equilibrium(M_PI * M_PI - 1e-9).beta;
    double b_hi = solve_equilibrium(M_PI * M_PI + 1e-9).beta;
    if (std::abs(b_lo - 2.0 / M_PI) > 1e-8 || std::abs(b_hi - 2.0 / M_PI) > 1e-8) ok = false;
    detail = fmt("max residual %.2g, beta jump %.2g", worst, std::abs(b_lo - b_hi));
    report(1, "elliptic phase map", ok, detail);
}

// --- criterion 2: density validity and energy minimality ---------------------

double density_mass(const EquilibriumMeasure& m) {
    // substitute x(u) = sqrt(alpha^2 cos^2 u + beta^2 sin^2 u): smooth integrand
    const auto& xs = detail::gl_nodes(64);
    const auto& ws = detail::gl_weights(64);
    double mass = 2.0 * m.alpha;  // plateau (0 in subcritical)
    for (int i = 0; i < 64; ++i) {
        double u = 0.25 * M_PI * (xs[i] + 1.0);
        double su = std::sin(u), cu = std::cos(u);
        double x = std::sqrt(m.alpha * m.alpha * cu * cu + m.beta * m.beta * su * su);
        double dx = (m.beta * m.beta - m.alpha * m.alpha) * su * cu / std::max(x, 1e-300);
        mass += 2.0 * ws[i] * 0.25 * M_PI * density(m, x) * dx;
    }
    return mass;
}

// I_T(mu) = T int x^2 dmu - 2 iint log|x-y| dmu dmu on a midpoint grid, with
// the exact self-energy of a uniform cell, -2 w^2 (log dx - 3/2)
double energy_functional(double T, const std::function<double(double)>& rho, double lo, double hi,
                         int M) {
    std::vector<double> x(M), w(M);
    double dx = (hi - lo) / M, mass = 0.0;
    for (int i = 0; i < M; ++i) {
        x[i] = lo + (i + 0.5) * dx;
        w[i] = rho(x[i]) * dx;
        mass += w[i];
    }
    for (int i = 0; i < M; ++i) w[i] /= mass;  // compare at exactly unit mass
    double I = 0.0;
    for (int i = 0; i < M; ++i) {
        I += T * w[i] * x[i] * x[i];
        I -= 2.0 * w[i] * w[i] * (std::log(dx) - 1.5);
        for (int j = i + 1; j < M; ++j) I -= 4.0 * w[i] * w[j] * std::log(x[j] - x[i]);
    }
    return I;
}

void criterion_2() {
    bool ok = true;
    double worst_mass = 0.0, worst_bound = 0.0, min_margin = 1e300;
    for (double T : {1.0, 4.0, 9.0, 12.0, 16.0, 100.0}) {
        EquilibriumMeasure m = solve_equilibrium(T);
        worst_mass = std::max(worst_mass, std::abs(density_mass(m) - 1.0));
        for (int i = 0; i <= 2000; ++i) {
            double x = -m.beta + 2.0 * m.beta * i / 2000.0;
            double r = density(m, x);
            if (r < 0.0 || r > 1.0 + 1e-12) worst_bound = std::max(worst_bound, r - 1.0);
        }
        // energy minimality against five admissible perturbations
        auto base = [&](double x) { return density(m, x); };
        double L = m.beta + 0.6;
        const int M = 1200;
        double I0 = energy_functional(T, base, -L, L, M);
        std::vector<std::function<double(double)>> perts;
        for (double s : {0.1, -0.2})  // translations
            perts.push_back([&, s](double x) { return density(m, x - s); });
        for (double c : {1.1, 1.3})  // dilations (c > 1 keeps rho <= 1)
            perts.push_back([&, c](double x) { return density(m, x / c) / c; });
        perts.push_back([&, L](double x) {  // mixture with a uniform slab
            return 0.85 * density(m, x) + 0.15 / (2.0 * L);
        });
        for (const auto& p : perts) {
            double I = energy_functional(T, p, -L, L, M);
            min_margin = std::min(min_margin, I - I0);
            if (I <= I0) ok = false;
        }
    }
    if (worst_mass > 1e-8 || worst_bound > 0.0) ok = false;
    report(2, "density validity + minimality", ok,
           fmt("max |mass-1| %.2g, min energy margin %.2g", worst_mass, min_margin));
}

// --- criterion 3: simple-loop three-way agreement ----------------------------

void criterion_3() {
    bool ok = true;
    double worst = 0.0;
    for (double T : {1.0, 4.0, 9.0})
        for (double f : {0.1, 0.3, 0.5})
            for (int n = 1; n <= 4; ++n) {
                double a1 = f * T;
                double q = phi_simple(n, a1, T);
                double c = contour_phi_simple(n, a1, T);
                double s = phi_simple_subcritical_series(n, a1, T);  // T <= pi^2 here
                worst = std::max({worst, std::abs(q - c), std::abs(q - s)});
            }
    if (worst > 1e-7) ok = false;
    report(3, "simple-loop method agreement", ok, fmt("max spread %.2g", worst));
}

// --- criterion 4: finite-N character-sum trend -------------------------------

void criterion_4() {
    bool ok = true;
    double target = phi_simple(1, 0.5, 1.0), prev = 1e300, last = 0.0;
    for (int N = 2; N <= 6; ++N) {
        double err =
            std::abs(charsum_moment(CharacterSumConfig{N, 0, 1.0, 0.5, 0.5}, 0, 1) - target);
        if (err >= prev) ok = false;
        prev = err;
        last = err;
    }
    if (last > 0.01) ok = false;
    report(4, "finite-N oracle trend", ok, fmt("N=6 error %.2g", last));
}

// --- criterion 5: beta-ensemble representation -------------------------------

void criterion_5() {
    const int N = 4;
    const double T = 1.0, a = 0.5, b = 0.5;
    auto chain = mcmc_sample(N, T, 100000, 2000, 20260824);
    std::vector<double> s1, s11;
    s1.reserve(chain.size());
    s11.reserve(chain.size());
    for (const auto& st : chain) {
        cplx i1 = contour_observable(st, 1, b);
        s1.push_back(i1.real());
        s11.push_back((i1 * i1).real());
    }
    CharacterSumConfig cfg{N, 0, T, a, b};
    auto [m1, se1] = batch_means(s1);
    auto [m11, se11] = batch_means(s11);
    double e1 = charsum_moment(cfg, 0, 1), e11 = charsum_moment(cfg, 1, 1);
    bool ok = std::abs(m1 - e1) <= 3.0 * se1 && std::abs(m11 - e11) <= 3.0 * se11;
    report(5, "beta-ensemble representation", ok,
           fmt("|d1|/3se %.2f, |d11|/3se %.2f", std::abs(m1 - e1) / (3.0 * se1),
               std::abs(m11 - e11) / (3.0 * se11)));
}

// --- criterion 6: Makeenko-Migdal residual -----------------------------------

void criterion_6() {
    bool ok = true;
    double worst_r = 0.0, worst_ratio = 0.0;
    CombinatorialLoop l2 = maximally_winding(2);
    CombinatorialLoop f8 = loop_from_walk(figure_eight_walk());
    std::vector<std::vector<double>> areas = {
        {1.0, 1.0, 1.0}, {0.5, 1.3, 0.8}, {1.6, 0.4, 1.1}};
    for (const CombinatorialLoop* loop : {&l2, &f8})
        for (const auto& ar : areas) {
            FaceAreaVector a = make_face_areas(ar);
            int v = loop->intersections[0];
            double r1 = mm_residual(*loop, a, v, 1e-3);
            double r2 = mm_residual(*loop, a, v, 5e-4);
            worst_r = std::max(worst_r, r1);
            worst_ratio = std::max(worst_ratio, (r2 - 1e-9) / std::max(r1, 1e-300));
            if (r1 > 1e-4 || r2 > 0.35 * r1 + 1e-9) ok = false;
        }
    report(6, "makeenko-migdal residual", ok,
           fmt("max residual %.2g, max halving ratio %.2f", worst_r, worst_ratio));
}

// --- criterion 7: cross-method master field ----------------------------------

void criterion_7() {
    bool ok = true;
    double worst = 0.0;
    int corpus = 0;
    std::vector<CombinatorialLoop> loops = {maximally_winding(2),
                                            loop_from_walk(figure_eight_walk())};
    std::mt19937_64 rng(2024);
    while (corpus < 6) {  // splittable random loops with 1..2 intersections
        CombinatorialLoop loop = random_loop(rng, 2);
        if (loop.n_self < 1 || !splittable_tree(loop, 0)) continue;
        loops.push_back(loop);
        ++corpus;
    }
    std::mt19937_64 arng(5);
    std::uniform_real_distribution<double> unif(0.3, 1.2);
    for (const auto& loop : loops)
        for (int rep = 0; rep < 3; ++rep) {
            std::vector<double> ar(loop.graph.p);
            for (double& x : ar) x = unif(arng);
            FaceAreaVector a = make_face_areas(ar);
            double d = std::abs(master_field(loop, a).value -
                                splittable_contour_value(loop, a, 0).value);
            worst = std::max(worst, d);
            if (d > 1e-6) ok = false;
        }
    report(7, "cross-method master field", ok,
           fmt("%.0f loops, max delta %.2g", (double)loops.size(), worst));
}

// --- criterion 8: reduction limit --------------------------------------------

void criterion_8() {
    CombinatorialLoop l2 = maximally_winding(2);
    double eps = 1e-5;
    // shrinking the innermost disc leaves a simple loop around the annulus
    double v = master_field(l2, make_face_areas({1.3, 0.7, eps})).value;
    double ref = phi_simple(1, 0.7 + eps, 2.0 + eps);
    // shrinking the annulus leaves a doubly wound simple loop
    double v2 = master_field(l2, make_face_areas({1.3, eps, 0.7})).value;
    double ref2 = phi_simple(2, 0.7, 2.0 + eps);
    bool ok = std::abs(v - ref) <= 1e-4 && std::abs(v2 - ref2) <= 1e-4;
    report(8, "reduction limit", ok,
           fmt("deltas %.2g / %.2g", std::abs(v - ref), std::abs(v2 - ref2)));
}

// --- criterion 9: planar limit -----------------------------------------------

void criterion_9() {
    bool ok = true;
    double worst_last = 0.0;
    struct P {
        int n;
        double t;
    } cases[] = {{1, 1.0}, {2, 1.0}, {3, 0.5}};
    for (auto [n, t] : cases) {
        double planar = phi_planar(n, t), prev = 1e300, last = 0.0;
        for (double T : {50.0, 100.0, 200.0, 400.0}) {
            double gap = std::abs(phi_simple(n, t, T) - planar);
            // 1e-12 slack: the gap reaches the double-precision noise floor
            if (gap > prev + 1e-12) ok = false;
            prev = gap;
            last = gap;
        }
        worst_last = std::max(worst_last, last);
        if (last > 1e-2) ok = false;
    }
    report(9, "planar limit", ok, fmt("max gap at T=400: %.2g", worst_last));
}

// --- criterion 10: duality round trip ----------------------------------------

void criterion_10() {
    bool ok = true;
    double worst = 0.0;
    for (double T : {1.0, 16.0}) {
        EquilibriumMeasure m = solve_equilibrium(T);
        double theta_max = (m.regime == Regime::Subcritical) ? std::sqrt(T) : M_PI;
        for (int i = 0; i < 50; ++i) {
            double th = theta_max * (i + 0.5) / 50.0;
            double x = M_PI * midpoint_spectral_density(m, th);
            double res = std::abs(M_PI * density(m, x) - th);
            worst = std::max(worst, res);
            if (res > 1e-8) ok = false;
        }
    }
    report(10, "duality round trip", ok, fmt("max residual %.2g", worst));
}

// --- criterion 11: combinatorics property suite ------------------------------

int int_matrix_rank(std::vector<std::vector<double>> m) {
    int rank = 0;
    size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    for (size_t c = 0; c < cols && rank < (int)rows; ++c) {
        size_t piv = rank;
        for (size_t r = rank; r < rows; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        if (std::abs(m[piv][c]) < 1e-9) continue;
        std::swap(m[piv], m[rank]);
        for (size_t r = rank + 1; r < rows; ++r) {
            double f = m[r][c] / m[rank][c];
            for (size_t cc = c; cc < cols; ++cc) m[r][cc] -= f * m[rank][cc];
        }
        ++rank;
    }
    return rank;
}

void criterion_11() {
    bool ok = true;
    std::mt19937_64 rng(77);
    int checked = 0;
    std::string why;
    for (int trial = 0; trial < 200; ++trial) {
        CombinatorialLoop loop = random_loop(rng, 5);
        const auto& g = loop.graph;
        if (g.q - g.m + g.p != 2) { ok = false; why = "euler"; }
        std::vector<int> w0 = winding_numbers(loop, 0);
        // reference-face independence: any other reference shifts by a constant
        for (int r : {1, g.p - 1}) {
            std::vector<int> wr = winding_numbers(loop, r);
            int d = w0[0] - wr[0];
            for (int f = 0; f < g.p; ++f)
                if (w0[f] - wr[f] != d) { ok = false; why = "winding ref"; }
        }
        std::vector<std::vector<double>> mu_rows;
        for (int v : loop.intersections) {
            MMVector mu = mm_vector(loop, v);
            long long s = 0, ws = 0;
            for (int f = 0; f < g.p; ++f) {
                s += mu.coefficients[f];
                ws += (long long)w0[f] * mu.coefficients[f];
            }
            if (s != 0) { ok = false; why = "1^T mu"; }
            if (ws != 0) { ok = false; why = "n^T mu"; }
            mu_rows.emplace_back(mu.coefficients.begin(), mu.coefficients.end());
            // split conserves total area under the face maps
            std::vector<double> ar(g.p);
            for (int f = 0; f < g.p; ++f) ar[f] = 0.25 + 0.05 * f;
            FaceAreaVector a = make_face_areas(ar);
            SplitResult sp = split(loop, v);
            for (int side = 0; side < 2; ++side) {
                FaceAreaVector sub =
                    pushforward(a, sp.face_maps[side], sp.sub_loops[side].graph.p);
                double s2 = 0.0;
                for (double x : sub.areas) s2 += x;
                if (std::abs(s2 - a.T) > 1e-12) { ok = false; why = "split area"; }
            }
        }
        if (!mu_rows.empty() && int_matrix_rank(mu_rows) != g.p - 2) {
            ok = false;
            why = "mu rank";
        }
        ++checked;
    }
    report(11, "combinatorics property suite", ok,
           why.empty() ? fmt("%g loops checked", (double)checked) : why);
}

}  // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d/11 criteria passed in %.1f s\n", 11 - g_failures, s);
    return g_failures == 0 ? 0 : 1;
}
