#ifndef YMSPHERE_SIMPLE_FIELD_HPP
#define YMSPHERE_SIMPLE_FIELD_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "equilibrium.hpp"
#include "quad.hpp"

namespace ymsphere {

enum class SimpleMethod { Quadrature, SubcriticalSeries, Contour };

struct SimpleLoopValue {
    int n = 1;
    double a1 = 0.0, a2 = 0.0, T = 0.0;
    double value = 0.0;
    SimpleMethod method = SimpleMethod::Quadrature;
};

namespace detail {

// rho_T at x(u) = sqrt(alpha^2 cos^2 u + beta^2 sin^2 u). Passing sin/cos of
// the substitution parameter keeps x^2-alpha^2 and beta^2-x^2 exact near the
// support edges, where the direct formula cancels badly.
inline double density_on_ellipse(const EquilibriumMeasure& m, double su, double cu, double x) {
    double gap = (m.beta - m.alpha) * (m.beta + m.alpha);  // beta^2 - alpha^2
    if (m.regime == Regime::Subcritical)
        return (m.T / (2.0 * M_PI)) * std::sqrt(gap) * std::abs(cu);  // alpha=0, x=beta*su
    double pref = 2.0 * gap * std::abs(su * cu) / (M_PI * m.beta * x);
    // Pi(nu,k) with 1-nu = (x^2-alpha^2)/x^2 computed without cancellation
    double p = gap * su * su / (x * x);
    double kp2 = m.kprime * m.kprime;
    double pi3 = carlson_rf(0.0, kp2, 1.0) + (1.0 - p) / 3.0 * carlson_rj(0.0, kp2, 1.0, p);
    return pref * pi3;
}

}  // namespace detail

// (1/2*pi*i*n) * integral of exp{-n(a1 z - G_T(z))} over a positively
// oriented circle of radius beta+0.5 around the support.
inline double contour_phi_simple(int n, double a1, double T, double radius_offset = 0.5) {
    if (n == 0) throw std::domain_error("contour_phi_simple: n must be nonzero");
    if (!(a1 > 0.0 && a1 < T)) throw std::domain_error("contour_phi_simple: need 0 < a1 < T");
    int nn = std::abs(n);
    // the value is symmetric in (a1, T-a1); the smaller area keeps the
    // integrand magnitude under control
    double a = std::min(a1, T - a1);
    EquilibriumMeasure m = solve_equilibrium(T);
    auto g = [&](cplx z) { return std::exp(-double(nn) * (a * z - stieltjes(m, z))); };
    Contour c = Contour::circle(0.0, m.beta + radius_offset);
    // the achievable absolute accuracy is limited by rounding at the scale of
    // the integrand's maximum; anchor the tolerance there
    double M = 0.0;
    for (int i = 0; i < 64; ++i) M = std::max(M, std::abs(g(c.z(i / 64.0))));
    double tol = std::max(1e-12, 1e3 * std::numeric_limits<double>::epsilon() * M);
    cplx v = contour_integrate(g, c, 32, tol);
    return (v / double(nn)).real();
}

// phi_T(n, a1, T-a1): master-field value of the n-th power of a simple loop
// splitting the sphere into areas a1 and T-a1.
inline double phi_simple(int n, double a1, double T) {
    if (!(T > 0.0)) throw std::domain_error("phi_simple: T must be > 0");
    if (a1 < 0.0 || a1 > T) throw std::domain_error("phi_simple: a1 must lie in [0,T]");
    if (n == 0) throw std::domain_error("phi_simple: n must be nonzero");
    int nn = std::abs(n);
    double a2 = T - a1;
    if (a1 == 0.0 || a2 == 0.0) return 1.0;  // null domain, continuous extension
    EquilibriumMeasure m = solve_equilibrium(T);
    double d = std::abs(a1 - a2);
    // pick the better-conditioned representation: the quadrature integrand
    // peaks at cosh(d n beta / 2), the contour integrand at roughly
    // exp(n (a_eff R + max|G|)); both lose log10(scale) digits to rounding
    double log_quad = 0.5 * d * nn * m.beta;
    double log_cont = nn * (std::min(a1, a2) * (m.beta + 0.5) + 2.0);
    if ((m.regime == Regime::Supercritical && (m.beta - m.alpha) < 1e-3) ||
        (log_cont < log_quad)) {
        // deep supercritical (band too thin to resolve pointwise) or the
        // contour integrand is the tamer of the two
        return contour_phi_simple(nn, a1, T);
    }
    // x = sqrt(alpha^2 cos^2 u + beta^2 sin^2 u), u in [0, pi/2]
    double a2b2 = (m.beta - m.alpha) * (m.beta + m.alpha);
    auto f = [&](double u) {
        double su = std::sin(u), cu = std::cos(u);
        double x = std::sqrt(m.alpha * m.alpha * cu * cu + m.beta * m.beta * su * su);
        if (x == 0.0) return 0.0;
        double rho = detail::density_on_ellipse(m, su, cu, x);
        double dxdu = a2b2 * su * cu / x;
        return std::cosh(0.5 * d * nn * x) * std::sin(nn * M_PI * rho) * dxdu;
    };
    double scale = std::cosh(std::min(0.5 * d * nn * m.beta, 700.0));
    double tol = std::max(1e-12, 1e3 * std::numeric_limits<double>::epsilon() * scale);
    QuadResult q = integrate_adaptive(f, 0.0, M_PI / 2.0, tol, 1e-11);
    return 2.0 / (nn * M_PI) * q.value;
}

// Subcritical closed form: the moments of a semicircle of variance
// t = a1*a2/T give phi as the entire series sum_m (-n^2 t)^m / (m! (m+1)!).
inline double phi_simple_subcritical_series(int n, double a1, double T) {
    if (!(T > 0.0) || T > M_PI * M_PI + 1e-15)
        throw std::domain_error("phi_simple_subcritical_series: requires 0 < T <= pi^2");
    if (a1 < 0.0 || a1 > T) throw std::domain_error("phi_simple_subcritical_series: a1 in [0,T]");
    if (n == 0) throw std::domain_error("phi_simple_subcritical_series: n must be nonzero");
    double t = a1 * (T - a1) / T;
    double x = -double(n) * double(n) * t;
    double term = 1.0, sum = 1.0;
    for (int m = 1; m < 400; ++m) {
        term *= x / (double(m) * double(m + 1));
        sum += term;
        if (std::abs(term) < 1e-16) break;
    }
    return sum;
}

// Whole-plane master field on powers of a simple loop of area t:
// residue at 0 of (1+1/z)^n e^{-ntz}, times e^{-nt/2}/n.
inline double phi_planar(int n, double t) {
    if (n < 1) throw std::domain_error("phi_planar: n must be >= 1");
    if (t < 0.0) throw std::domain_error("phi_planar: t must be >= 0");
    // residue = sum_{k=1}^{n} C(n,k) (-nt)^{k-1}/(k-1)!
    double res = 0.0, binom = double(n), pw = 1.0;
    for (int k = 1; k <= n; ++k) {
        res += binom * pw;
        binom *= double(n - k) / double(k + 1);
        pw *= -double(n) * t / double(k);
    }
    return std::exp(-0.5 * n * t) * res / double(n);
}

// Contour cross-check of phi_planar (used by tests and the CLI).
inline double phi_planar_contour(int n, double t) {
    if (n < 1) throw std::domain_error("phi_planar_contour: n must be >= 1");
    auto g = [&](cplx z) { return std::pow(1.0 + 1.0 / z, n) * std::exp(-double(n) * t * z); };
    cplx v = contour_integrate(g, Contour::circle(0.0, 0.75), 32, 1e-13);
    return std::exp(-0.5 * n * t) * (v / double(n)).real();
}

// Limiting eigenvalue density (angle parameter) of the simple-loop holonomy,
// subcritical regime: a semicircle of variance a1*a2/T on the circle.
inline double spectral_density_simple(double T, double a1, double theta) {
    if (!(T > 0.0) || T > M_PI * M_PI + 1e-15)
        throw std::domain_error("spectral_density_simple: requires 0 < T <= pi^2");
    if (!(a1 > 0.0 && a1 < T)) throw std::domain_error("spectral_density_simple: need 0 < a1 < T");
    if (std::abs(theta) > M_PI + 1e-15)
        throw std::domain_error("spectral_density_simple: |theta| must be <= pi");
    double t = a1 * (T - a1) / T;
    double disc = 4.0 * t - theta * theta;
    if (disc <= 0.0) return 0.0;
    return std::sqrt(disc) / (2.0 * M_PI * t);
}

inline SimpleLoopValue phi_simple_value(int n, double a1, double T) {
    SimpleLoopValue v;
    v.n = n;
    v.a1 = a1;
    v.a2 = T - a1;
    v.T = T;
    EquilibriumMeasure m = solve_equilibrium(T);
    if (m.regime == Regime::Supercritical && (m.beta - m.alpha) < 1e-3)
        v.method = SimpleMethod::Contour;
    v.value = phi_simple(n, a1, T);
    return v;
}

}  // namespace ymsphere

#endif
