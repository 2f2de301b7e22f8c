#ifndef YMSPHERE_ORACLE_HPP
#define YMSPHERE_ORACLE_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "quad.hpp"

namespace ymsphere {

// --- exact finite-N character sums for the simple loop ----------------------

struct CharacterSumConfig {
    int N = 2;
    int cutoff = 0;  // bound on |nu_j|; 0 picks the default 8/sqrt(T) + N
    double T = 1.0;
    double a = 0.5, b = 0.5;  // the two face areas, a + b = T
};

namespace oracledetail {

// support of the rescaled particles reaches ~2N/sqrt(T); add ~6 sigma of the
// per-particle Gaussian (width sqrt(N/T)) so the truncated tail is < 1e-10
inline int default_cutoff(int N, double T) {
    return (int)std::ceil((2.0 * N + 12.0) / std::sqrt(T));
}

// J(nu, m, a) = e^{-m^2 a/(2N)} (1/N) sum_j e^{-m a nu_j/N}
//               prod_{i != j} (nu_j + m - nu_i)/(nu_j - nu_i)
inline double charsum_J(const std::vector<double>& nu, int m, double a, int N) {
    if (m == 0) return 1.0;
    double sum = 0.0;
    for (int j = 0; j < N; ++j) {
        double term = std::exp(-m * a * nu[j] / N);
        for (int i = 0; i < N; ++i) {
            if (i == j) continue;
            term *= (nu[j] + m - nu[i]) / (nu[j] - nu[i]);
        }
        sum += term;
    }
    return std::exp(-0.5 * m * m * a / N) * sum / N;
}

}  // namespace oracledetail

// E[tr(H^-m) tr(H^n)] for the simple-loop holonomy at finite N, by direct
// summation over strictly decreasing N-tuples nu in Z (N odd) or Z+1/2
// (N even), weighted by Vandermonde^2 * heat kernel.
inline double charsum_moment(const CharacterSumConfig& cfg, int m, int n) {
    const int N = cfg.N;
    if (N < 1 || N > 6) throw std::domain_error("charsum_moment: need 1 <= N <= 6");
    if (!(cfg.T > 0.0)) throw std::domain_error("charsum_moment: T must be > 0");
    if (std::abs(cfg.a + cfg.b - cfg.T) > 1e-12 * cfg.T)
        throw std::domain_error("charsum_moment: areas must sum to T");
    const int cutoff = cfg.cutoff > 0 ? cfg.cutoff : oracledetail::default_cutoff(N, cfg.T);
    const double half = (N % 2 == 0) ? 0.5 : 0.0;  // Z_sym offset
    std::vector<double> nu(N);
    // streaming log-sum-exp over the enumeration
    double scale = -1e300, S0 = 0.0, S1 = 0.0;
    auto visit = [&]() {
        double logw = 0.0;
        for (int j = 0; j < N; ++j) {
            // heat-kernel norm ||nu||^2 = (1/N) sum nu_j^2
            logw -= 0.5 * cfg.T * nu[j] * nu[j] / N;
            for (int k = j + 1; k < N; ++k) logw += 2.0 * std::log(nu[j] - nu[k]);
        }
        if (logw > scale) {
            double f = std::exp(scale - logw);
            S0 *= f;
            S1 *= f;
            scale = logw;
        }
        double w = std::exp(logw - scale);
        S0 += w;
        S1 += w * oracledetail::charsum_J(nu, m, cfg.a, N) *
              oracledetail::charsum_J(nu, n, cfg.b, N);
    };
    // lexicographic recursion over strictly decreasing tuples; for even N the
    // lattice is Z + 1/2, kept symmetric: v + 1/2 for v in [-cutoff, cutoff-1]
    const int top = (N % 2 == 0) ? cutoff - 1 : cutoff;
    auto rec = [&](auto&& self, int pos, int hi) -> void {
        if (pos == N) {
            visit();
            return;
        }
        for (int v = hi; v >= -cutoff + (N - 1 - pos); --v) {
            nu[pos] = v + half;
            self(self, pos + 1, v - 1);
        }
    };
    rec(rec, 0, top);
    if (S0 <= 0.0) throw std::runtime_error("charsum_moment: empty sum");
    return S1 / S0;
}

// --- discrete beta-ensemble sampler -----------------------------------------

struct BetaEnsembleState {
    int N = 0;
    double T = 0.0;
    std::vector<long long> lattice;  // strictly decreasing, lambda_j = lattice_j / (2N)
    double position(int j) const { return double(lattice[j]) / (2.0 * N); }
};

namespace oracledetail {

inline double log_ensemble_weight(const BetaEnsembleState& st) {
    double lw = 0.0;
    for (int j = 0; j < st.N; ++j) {
        double x = st.position(j);
        lw -= 0.5 * st.N * st.T * x * x;
        for (int k = j + 1; k < st.N; ++k)
            lw += 2.0 * std::log(x - st.position(k));
    }
    return lw;
}

// log weight change for moving particle j by delta lattice units; -inf when
// the move collides with a neighbour (Vandermonde zero)
inline double delta_log_weight(const BetaEnsembleState& st, int j, long long delta) {
    long long prop = st.lattice[j] + delta;
    if ((j > 0 && prop >= st.lattice[j - 1]) ||
        (j + 1 < st.N && prop <= st.lattice[j + 1]))
        return -std::numeric_limits<double>::infinity();
    double x = st.position(j), xp = double(prop) / (2.0 * st.N);
    double dlw = -0.5 * st.N * st.T * (xp * xp - x * x);
    for (int k = 0; k < st.N; ++k) {
        if (k == j) continue;
        double xk = st.position(k);
        dlw += 2.0 * (std::log(std::abs(xp - xk)) - std::log(std::abs(x - xk)));
    }
    return dlw;
}

}  // namespace oracledetail

// Metropolis chain for the discrete beta ensemble on (1/N) Z_sym. One sweep =
// N single-particle proposals of +-1/N. Returns `samples` states taken every
// N sweeps after `burn_in` sweeps.
inline std::vector<BetaEnsembleState> mcmc_sample(int N, double T, int samples, int burn_in,
                                                  unsigned long long seed) {
    if (N < 2) throw std::domain_error("mcmc_sample: N must be >= 2");
    if (samples < 1 || burn_in < 1)
        throw std::domain_error("mcmc_sample: samples and burn_in must be >= 1");
    BetaEnsembleState st;
    st.N = N;
    st.T = T;
    st.lattice.resize(N);
    // Weyl vector rho_j = (N+1)/2 - j, scaled: lambda = rho/N -> lattice 2*rho
    for (int j = 0; j < N; ++j) st.lattice[j] = (N + 1) - 2 * (j + 1);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, N - 1);
    std::uniform_int_distribution<int> dir(0, 1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto step = [&]() {
        int j = pick(rng);
        long long delta = dir(rng) ? 2 : -2;  // +-1/N in position units
        double dlw = oracledetail::delta_log_weight(st, j, delta);
        if (dlw >= 0.0 || unif(rng) < std::exp(dlw)) st.lattice[j] += delta;
    };
    auto sweep = [&]() {
        for (int s = 0; s < N; ++s) step();
    };
    for (int s = 0; s < burn_in; ++s) sweep();
    std::vector<BetaEnsembleState> out;
    out.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        for (int s = 0; s < N; ++s) sweep();  // thinning: N sweeps per sample
        out.push_back(st);
    }
    return out;
}

// I_n^a(lambda): contour observable of the ensemble. With alpha = N/n the factor
// exp{n G^alpha(z)} is the rational function prod_j (1 + n/(N(z-lambda_j))),
// so the integrand is meromorphic with poles exactly at the particles.
inline cplx contour_observable(const BetaEnsembleState& st, int n, double a,
                               double extra_margin = 0.0) {
    if (n == 0) return 1.0;
    if (!(a > 0.0 && a < st.T)) throw std::domain_error("contour_observable: need 0 < a < T");
    const int N = st.N;
    double lo = st.position(N - 1), hi = st.position(0);
    double pad = 2.0 * std::abs(n) / double(N);
    double h = std::abs(n) / double(N) + extra_margin;  // stadium half-width
    lo -= pad + extra_margin;
    hi += pad + extra_margin;
    auto f = [&](cplx z) -> cplx {
        cplx val = std::exp(-double(n) * a * z);
        for (int j = 0; j < N; ++j) val *= 1.0 + double(n) / (double(N) * (z - st.position(j)));
        return val;
    };
    // stadium: straight segments split into panels of length ~4h so the poles
    // (at distance h) stay resolved, plus two semicircular caps; Gauss-Legendre
    // per panel with node doubling
    const int panels = std::max(1, (int)std::ceil((hi - lo) / (4.0 * h)));
    auto pass = [&](int nodes) -> cplx {
        const auto& xs = detail::gl_nodes(nodes);
        const auto& ws = detail::gl_weights(nodes);
        cplx acc = 0.0;
        auto seg = [&](cplx z0, cplx z1) {
            cplx mid = 0.5 * (z0 + z1), hd = 0.5 * (z1 - z0);
            for (int i = 0; i < nodes; ++i) acc += ws[i] * f(mid + hd * xs[i]) * hd;
        };
        for (int p = 0; p < panels; ++p) {
            double x0 = lo + (hi - lo) * p / panels, x1 = lo + (hi - lo) * (p + 1) / panels;
            seg(cplx(x0, -h), cplx(x1, -h));  // bottom: lo -> hi
            seg(cplx(x1, +h), cplx(x0, +h));  // top: hi -> lo
        }
        for (int i = 0; i < nodes; ++i) {
            double u = xs[i], w = ws[i];
            // right cap: angle -pi/2 -> pi/2 around hi; left cap: pi/2 -> 3pi/2
            double ar_ = 0.5 * M_PI * u;
            cplx zr = hi + h * cplx(std::cos(ar_), std::sin(ar_));
            acc += w * f(zr) * h * cplx(-std::sin(ar_), std::cos(ar_)) * (0.5 * M_PI);
            double al_ = M_PI + 0.5 * M_PI * u;
            cplx zl = lo + h * cplx(std::cos(al_), std::sin(al_));
            acc += w * f(zl) * h * cplx(-std::sin(al_), std::cos(al_)) * (0.5 * M_PI);
        }
        return acc;
    };
    cplx prev = 0.0;
    for (int nodes = 16; nodes <= 256; nodes *= 2) {
        cplx cur = pass(nodes);
        if (nodes > 16 && std::abs(cur - prev) < 1e-11 * std::max(1.0, std::abs(cur))) {
            cplx integral = cur / cplx(0.0, 2.0 * M_PI);
            return std::exp(-0.5 * a * double(n) * double(n) / N) * integral / double(n);
        }
        prev = cur;
    }
    throw std::runtime_error("contour_observable: quadrature did not converge");
}

// batch-means estimate: returns (mean, standard error) using `batches` blocks
inline std::pair<double, double> batch_means(const std::vector<double>& xs, int batches = 100) {
    if ((int)xs.size() < batches) batches = std::max(1, (int)xs.size());
    int per = (int)xs.size() / batches;
    std::vector<double> bm;
    for (int b = 0; b < batches; ++b) {
        double s = 0.0;
        for (int i = b * per; i < (b + 1) * per; ++i) s += xs[i];
        bm.push_back(s / per);
    }
    double mean = 0.0;
    for (double x : bm) mean += x;
    mean /= bm.size();
    double var = 0.0;
    for (double x : bm) var += (x - mean) * (x - mean);
    var /= (bm.size() > 1 ? bm.size() - 1 : 1);
    return {mean, std::sqrt(var / bm.size())};
}

}  // namespace ymsphere

#endif
