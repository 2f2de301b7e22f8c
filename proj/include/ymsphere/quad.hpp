#ifndef YMSPHERE_QUAD_HPP
#define YMSPHERE_QUAD_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace ymsphere {

using cplx = std::complex<double>;

enum class QuadKind { GaussLegendre, AdaptiveGaussKronrod, PeriodicTrapezoid };

struct QuadratureRule {
    QuadKind kind = QuadKind::AdaptiveGaussKronrod;
    int node_count = 15;
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    // total f-evaluation budget for adaptive subdivision / node doubling
    long max_evals = 1 << 20;
};

struct QuadResult {
    double value = 0.0;
    double err_est = 0.0;
};

class QuadError : public std::runtime_error {
  public:
    explicit QuadError(const std::string& what) : std::runtime_error(what) {}
};

// Gauss-Legendre nodes/weights on [-1,1], Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

namespace detail {

struct GLCache {
    std::vector<double> x, w;
};

inline const GLCache& gl_rule(int n) {
    if (n < 2 || n > 256) throw std::domain_error("gl_rule: order out of range");
    thread_local std::vector<GLCache> cache(257);
    if (cache[n].x.empty()) gauss_legendre(n, cache[n].x, cache[n].w);
    return cache[n];
}

inline const std::vector<double>& gl_nodes(int n) { return gl_rule(n).x; }
inline const std::vector<double>& gl_weights(int n) { return gl_rule(n).w; }

// Gauss-Kronrod 7/15 pair, nodes on [0,1] of the positive half (symmetric).
constexpr double gk_xk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                             0.741531185599394, 0.586087235467691, 0.405845151377397,
                             0.207784955007898, 0.000000000000000};
constexpr double gk_wk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                             0.140653259715525, 0.169004726639267, 0.190350578064785,
                             0.204432940075298, 0.209482141084728};
constexpr double gk_wg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                             0.417959183673469};

template <typename F>
inline void gk15(const F& f, double a, double b, double& val, double& err) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * gk_xk[i]);
        fv[14 - i] = f(c + h * gk_xk[i]);
    }
    fv[7] = f(c);
    double k = 0.0, g = 0.0;
    for (int i = 0; i < 8; ++i) k += gk_wk[i] * (i == 7 ? fv[7] : fv[i] + fv[14 - i]);
    for (int i = 0; i < 4; ++i) {
        int j = 2 * i + 1;  // Gauss nodes are the odd Kronrod nodes
        g += gk_wg[i] * (j == 7 ? fv[7] : fv[j] + fv[14 - j]);
    }
    val = k * h;
    err = std::abs((k - g) * h);
}

}  // namespace detail

// Adaptive Gauss-Kronrod integration of a real function over [a,b].
template <typename F>
inline QuadResult integrate_adaptive(const F& f, double a, double b, double abs_tol = 1e-10,
                                     double rel_tol = 1e-10, long max_evals = 1 << 20) {
    struct Seg {
        double a, b, val, err;
    };
    double v0, e0;
    detail::gk15(f, a, b, v0, e0);
    long evals = 15;
    std::vector<Seg> segs{{a, b, v0, e0}};
    auto total = [&]() {
        double v = 0, e = 0;
        for (auto& s : segs) v += s.val, e += s.err;
        return std::pair<double, double>(v, e);
    };
    while (true) {
        auto [v, e] = total();
        if (e <= std::max(abs_tol, rel_tol * std::abs(v))) return {v, e};
        if (evals + 30 > max_evals) throw QuadError("integrate: adaptive budget exhausted");
        // split the worst segment
        size_t worst = 0;
        for (size_t i = 1; i < segs.size(); ++i)
            if (segs[i].err > segs[worst].err) worst = i;
        Seg s = segs[worst];
        double m = 0.5 * (s.a + s.b);
        if (m <= s.a || m >= s.b) throw QuadError("integrate: interval too small to subdivide");
        Seg l{s.a, m, 0, 0}, r{m, s.b, 0, 0};
        detail::gk15(f, l.a, l.b, l.val, l.err);
        detail::gk15(f, r.a, r.b, r.val, r.err);
        evals += 30;
        segs[worst] = l;
        segs.push_back(r);
    }
}

// Fixed-order Gauss-Legendre on [a,b] with order doubling until two successive
// values agree.
template <typename F>
inline QuadResult integrate_gl_doubling(const F& f, double a, double b, double abs_tol = 1e-10,
                                        double rel_tol = 1e-10, int max_order = 64) {
    double prev = 0.0;
    bool have_prev = false;
    for (int n = 8; n <= max_order; n *= 2) {
        const auto& x = detail::gl_nodes(n);
        const auto& w = detail::gl_weights(n);
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += w[i] * f(0.5 * (b - a) * x[i] + 0.5 * (a + b));
        s *= 0.5 * (b - a);
        if (have_prev) {
            double d = std::abs(s - prev);
            if (d <= std::max(abs_tol, rel_tol * std::abs(s))) return {s, d};
        }
        prev = s;
        have_prev = true;
    }
    // did not formally converge; fall back to adaptive which reports properly
    return integrate_adaptive(f, a, b, abs_tol, rel_tol);
}

// Public entry point matching the QuadratureRule contract.
template <typename F>
inline QuadResult integrate(const F& f, double a, double b, const QuadratureRule& rule = {}) {
    if (!(rule.node_count >= 2) || !(rule.abs_tol > 0) || !(rule.rel_tol > 0))
        throw std::domain_error("integrate: invalid quadrature rule");
    switch (rule.kind) {
        case QuadKind::GaussLegendre:
            return integrate_gl_doubling(f, a, b, rule.abs_tol, rule.rel_tol);
        case QuadKind::AdaptiveGaussKronrod:
            return integrate_adaptive(f, a, b, rule.abs_tol, rule.rel_tol, rule.max_evals);
        case QuadKind::PeriodicTrapezoid: {
            // for periodic integrands on [a,b]
            double prev = 0.0;
            bool have_prev = false;
            long evals = 0;
            for (int n = std::max(rule.node_count, 8);; n *= 2) {
                double h = (b - a) / n, s = 0.0;
                for (int i = 0; i < n; ++i) s += f(a + i * h);
                s *= h;
                evals += n;
                if (have_prev && std::abs(s - prev) <= std::max(rule.abs_tol, rule.rel_tol * std::abs(s)))
                    return {s, std::abs(s - prev)};
                if (evals > rule.max_evals) throw QuadError("integrate: trapezoid budget exhausted");
                prev = s;
                have_prev = true;
            }
        }
    }
    throw std::logic_error("integrate: unknown rule kind");
}

// A closed contour given by a smooth 1-periodic parametrization t -> z(t)
// together with its derivative.
struct Contour {
    std::function<cplx(double)> z;
    std::function<cplx(double)> dz;
    static Contour circle(cplx center, double radius, bool positive = true) {
        double sgn = positive ? 1.0 : -1.0;
        return Contour{
            [=](double t) { return center + radius * std::exp(cplx(0.0, sgn * 2.0 * M_PI * t)); },
            [=](double t) {
                return radius * cplx(0.0, sgn * 2.0 * M_PI) *
                       std::exp(cplx(0.0, sgn * 2.0 * M_PI * t));
            }};
    }
};

// (1/2*pi*i) * contour integral of g over a smooth closed contour, by the
// periodic trapezoid rule with node doubling.
template <typename G>
inline cplx contour_integrate(const G& g, const Contour& contour, int start_nodes = 16,
                              double abs_tol = 1e-12, long max_evals = 1 << 20) {
    cplx prev;
    bool have_prev = false;
    long evals = 0;
    for (int n = std::max(start_nodes, 4);; n *= 2) {
        cplx s = 0.0;
        double h = 1.0 / n;
        for (int i = 0; i < n; ++i) {
            double t = i * h;
            s += g(contour.z(t)) * contour.dz(t);
        }
        s *= h / cplx(0.0, 2.0 * M_PI);
        evals += n;
        if (have_prev && std::abs(s - prev) < abs_tol) return s;
        if (evals > max_evals)
            throw QuadError("contour_integrate: node doubling budget exhausted (pole near contour?)");
        prev = s;
        have_prev = true;
    }
}

}  // namespace ymsphere

#endif
