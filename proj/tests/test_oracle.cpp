#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>

#include "ymsphere/equilibrium.hpp"
#include "ymsphere/oracle.hpp"
#include "ymsphere/simple_field.hpp"

using namespace ymsphere;

TEST_CASE("character sum: normalization, symmetry, cutoff stability") {
    for (int N : {1, 2, 3, 4}) {
        CharacterSumConfig cfg{N, 0, 1.0, 0.5, 0.5};
        CHECK(charsum_moment(cfg, 0, 0) == 1.0);
    }
    // swapping (a,b) together with (m,n) is a relabelling of the two faces
    CharacterSumConfig ab{3, 0, 1.7, 0.4, 1.3};
    CharacterSumConfig ba{3, 0, 1.7, 1.3, 0.4};
    for (auto [m, n] : std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 1}})
        CHECK(charsum_moment(ab, m, n) == Catch::Approx(charsum_moment(ba, n, m)).epsilon(1e-14));
    // enlarging the cutoff beyond the default changes nothing at tolerance
    CharacterSumConfig small{4, 0, 1.0, 0.3, 0.7};
    CharacterSumConfig big{4, oracledetail::default_cutoff(4, 1.0) + 4, 1.0, 0.3, 0.7};
    CHECK(charsum_moment(small, 1, 1) == Catch::Approx(charsum_moment(big, 1, 1)).margin(1e-12));
    CHECK_THROWS_AS(charsum_moment(CharacterSumConfig{7, 0, 1.0, 0.5, 0.5}, 0, 1),
                    std::domain_error);
    CHECK_THROWS_AS(charsum_moment(CharacterSumConfig{3, 0, 1.0, 0.5, 0.6}, 0, 1),
                    std::domain_error);
}

TEST_CASE("character sum at N=1 is a theta-function ratio") {
    double T = 1.3, a = 0.4, b = T - a;
    CharacterSumConfig cfg{1, 0, T, a, b};
    // direct lattice sum: E[tr H] = e^{-b/2} * sum e^{-nu^2 T/2 - b nu} / sum e^{-nu^2 T/2}
    double num = 0.0, den = 0.0;
    for (int v = -40; v <= 40; ++v) {
        double w = std::exp(-0.5 * T * v * v);
        den += w;
        num += w * std::exp(-b * v);
    }
    CHECK(charsum_moment(cfg, 0, 1) == Catch::Approx(std::exp(-0.5 * b) * num / den).epsilon(1e-13));
    // by a <-> b symmetry the same value arises with the areas swapped
    CharacterSumConfig swp{1, 0, T, b, a};
    double numa = 0.0;
    for (int v = -40; v <= 40; ++v) numa += std::exp(-0.5 * T * v * v - a * v);
    CHECK(charsum_moment(swp, 0, 1) == Catch::Approx(std::exp(-0.5 * a) * numa / den).epsilon(1e-13));
    CHECK(charsum_moment(cfg, 0, 1) == Catch::Approx(charsum_moment(swp, 0, 1)).epsilon(1e-13));
}

TEST_CASE("character sum approaches the large-N value monotonically") {
    // N=4 beats N=2 against phi_simple(1, 0.5, 1) ~ 0.8801
    double target = phi_simple(1, 0.5, 1.0);
    CHECK(target == Catch::Approx(0.8801).margin(5e-4));
    double e2 = std::abs(charsum_moment(CharacterSumConfig{2, 0, 1.0, 0.5, 0.5}, 0, 1) - target);
    double e4 = std::abs(charsum_moment(CharacterSumConfig{4, 0, 1.0, 0.5, 0.5}, 0, 1) - target);
    CHECK(e4 < e2);
    CHECK(e4 < 0.1);
    // full trend over N = 2..6 for both windings and two areas
    for (double T : {1.0, 4.0}) {
        for (int n : {1, 2}) {
            double ref = phi_simple(n, 0.5 * T, T);
            double prev = 1e300;
            for (int N = 2; N <= 6; ++N) {
                CharacterSumConfig cfg{N, 0, T, 0.5 * T, 0.5 * T};
                double err = std::abs(charsum_moment(cfg, 0, n) - ref);
                CHECK(err < prev);
                prev = err;
            }
        }
    }
}

namespace {

// all strictly decreasing N=2 states with odd lattice values in [-bound, bound]
std::vector<BetaEnsembleState> tiny_states(double T, long long bound) {
    std::vector<BetaEnsembleState> out;
    for (long long u = -bound; u <= bound; u += 2)
        for (long long v = -bound; v < u; v += 2) {
            BetaEnsembleState st;
            st.N = 2;
            st.T = T;
            st.lattice = {u, v};
            out.push_back(st);
        }
    return out;
}

}  // namespace

TEST_CASE("mcmc kernel satisfies detailed balance on a tiny state space") {
    double T = 1.0;
    auto states = tiny_states(T, 9);
    auto key = [](const BetaEnsembleState& s) { return std::pair(s.lattice[0], s.lattice[1]); };
    std::map<std::pair<long long, long long>, int> index;
    for (int i = 0; i < (int)states.size(); ++i) index[key(states[i])] = i;
    for (const auto& x : states) {
        double lwx = oracledetail::log_ensemble_weight(x);
        for (int j = 0; j < 2; ++j)
            for (long long d : {-2LL, 2LL}) {
                BetaEnsembleState y = x;
                y.lattice[j] += d;
                auto it = index.find(key(y));
                if (it == index.end()) continue;  // outside the truncation box
                double dlw = oracledetail::delta_log_weight(x, j, d);
                if (std::isinf(dlw)) {
                    CHECK(y.lattice[0] <= y.lattice[1]);  // only collisions are vetoed
                    continue;
                }
                // chain's acceptance: min(1, e^dlw); proposal prob 1/(2N) both ways
                double pxy = 0.25 * std::min(1.0, std::exp(dlw));
                double lwy = oracledetail::log_ensemble_weight(y);
                CHECK(dlw == Catch::Approx(lwy - lwx).margin(1e-12));
                double pyx = 0.25 * std::min(1.0, std::exp(-dlw));
                CHECK(std::exp(lwx) * pxy == Catch::Approx(std::exp(lwy) * pyx).epsilon(1e-12));
            }
    }
}

TEST_CASE("mcmc samples: lattice invariants and centred mean") {
    auto chain = mcmc_sample(8, 1.0, 4000, 500, 99);
    REQUIRE(chain.size() == 4000);
    std::vector<double> means;
    for (const auto& st : chain) {
        double s = 0.0;
        for (int j = 0; j < st.N; ++j) {
            if (j) CHECK(st.lattice[j] < st.lattice[j - 1]);
            CHECK(std::abs(st.lattice[j]) % 2 == 1);  // Z_sym parity for even N
            s += st.position(j);
        }
        means.push_back(s / st.N);
    }
    auto [mean, se] = batch_means(means);
    CHECK(std::abs(mean) <= 3.0 * se + 1e-12);
    // determinism under the seed
    auto again = mcmc_sample(8, 1.0, 10, 500, 99);
    CHECK(again[9].lattice == chain[9].lattice);
    CHECK_THROWS_AS(mcmc_sample(1, 1.0, 10, 10, 1), std::domain_error);
}

TEST_CASE("mcmc empirical measure matches the equilibrium density at N=64") {
    const int N = 64;
    const double T = 1.0;
    auto chain = mcmc_sample(N, T, 100, 4000, 12345);
    std::vector<double> xs;
    for (const auto& st : chain)
        for (int j = 0; j < N; ++j) xs.push_back(st.position(j));
    std::sort(xs.begin(), xs.end());
    EquilibriumMeasure m = solve_equilibrium(T);
    // reference CDF by cumulative trapezoid of the density over a fine grid
    const int M = 8000;
    std::vector<double> grid(M + 1), cdf(M + 1, 0.0);
    for (int i = 0; i <= M; ++i) grid[i] = -m.beta + 2.0 * m.beta * i / M;
    for (int i = 1; i <= M; ++i)
        cdf[i] = cdf[i - 1] +
                 0.5 * (density(m, grid[i - 1]) + density(m, grid[i])) * (grid[i] - grid[i - 1]);
    CHECK(cdf[M] == Catch::Approx(1.0).margin(1e-6));
    auto F = [&](double x) {
        if (x <= grid.front()) return 0.0;
        if (x >= grid.back()) return 1.0;
        int i = (int)((x - grid.front()) / (2.0 * m.beta) * M);
        i = std::min(i, M - 1);
        double t = (x - grid[i]) / (grid[i + 1] - grid[i]);
        return cdf[i] + t * (cdf[i + 1] - cdf[i]);
    };
    double ks = 0.0;
    const double n = (double)xs.size();
    for (size_t i = 0; i < xs.size(); ++i) {
        double fx = F(xs[i]);
        ks = std::max(ks, std::max(std::abs(fx - i / n), std::abs(fx - (i + 1) / n)));
    }
    CHECK(ks < 0.05);
}

TEST_CASE("contour observable: residues, reality, margin invariance") {
    BetaEnsembleState st;
    st.N = 2;
    st.T = 1.0;
    st.lattice = {3, -1};  // lambda = (0.75, -0.25)
    CHECK(contour_observable(st, 0, 0.5) == cplx(1.0));
    // n=1, N=2: the integrand is rational with simple poles at the particles,
    // so the integral is the plain residue sum
    double a = 0.5;
    double l0 = st.position(0), l1 = st.position(1);
    double r0 = std::exp(-a * l0) * 0.5 * (1.0 + 0.5 / (l0 - l1));
    double r1 = std::exp(-a * l1) * 0.5 * (1.0 + 0.5 / (l1 - l0));
    cplx v = contour_observable(st, 1, a);
    CHECK(v.real() == Catch::Approx(std::exp(-0.25 * a) * (r0 + r1)).epsilon(1e-10));
    CHECK(std::abs(v.imag()) <= 1e-10);
    for (int n : {1, 2, -1}) {
        cplx base = contour_observable(st, n, a);
        CHECK(std::abs(contour_observable(st, n, a, 0.5) - base) <= 1e-8);
        CHECK(std::abs(contour_observable(st, n, a, 1.25) - base) <= 1e-8);
    }
    CHECK_THROWS_AS(contour_observable(st, 1, 1.5), std::domain_error);
}

TEST_CASE("representation identity: mcmc contour moments match character sums") {
    const double T = 1.0, a = 0.5, b = 0.5;
    for (int N : {2, 3, 4}) {
        auto chain = mcmc_sample(N, T, 10000, 1000, 7000 + N);
        std::vector<double> s01, s11, s02;
        s01.reserve(chain.size());
        for (const auto& st : chain) {
            cplx i1 = contour_observable(st, 1, b);
            cplx i2 = contour_observable(st, 2, b);
            s01.push_back(i1.real());             // I_0^a I_1^b
            s11.push_back((i1 * i1).real());      // I_1^a I_1^b (a = b)
            s02.push_back(i2.real());             // I_0^a I_2^b
        }
        CharacterSumConfig cfg{N, 0, T, a, b};
        struct Case {
            std::vector<double>* xs;
            int m, n;
        } cases[] = {{&s01, 0, 1}, {&s11, 1, 1}, {&s02, 0, 2}};
        for (auto& c : cases) {
            auto [mean, se] = batch_means(*c.xs);
            double exact = charsum_moment(cfg, c.m, c.n);
            INFO("N=" << N << " (m,n)=(" << c.m << "," << c.n << ") mean=" << mean
                      << " se=" << se << " exact=" << exact);
            CHECK(std::abs(mean - exact) <= 3.0 * se + 1e-12);
        }
    }
}
