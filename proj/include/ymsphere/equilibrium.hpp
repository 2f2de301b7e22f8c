#ifndef YMSPHERE_EQUILIBRIUM_HPP
#define YMSPHERE_EQUILIBRIUM_HPP

#include <cmath>
#include <complex>
#include <stdexcept>

#include "elliptic.hpp"
#include "quad.hpp"

namespace ymsphere {

enum class Regime { Subcritical, Supercritical };

// Equilibrium measure of the sphere of total area T. Subcritical (T <= pi^2):
// semicircle of variance 1/T. Supercritical: density saturates at 1 on
// [-alpha,alpha] and is supported on [-beta,beta], with alpha = 4kK/T,
// beta = 4K/T and k solving T = 8EK - 4(1-k^2)K^2.
struct EquilibriumMeasure {
    double T = 0.0;
    Regime regime = Regime::Subcritical;
    double k = 0.0;        // elliptic modulus (0 in subcritical)
    double kprime = 1.0;   // complementary modulus, kept exactly: k -> 1 as T -> inf
    double alpha = 0.0;    // inner support edge
    double beta = 0.0;     // outer support edge
    double K = M_PI / 2.0; // K(k)
    double E = M_PI / 2.0; // E(k)
};

namespace detail {
// 8EK - 4 k'^2 K^2 as a function of k'; strictly decreasing from +inf (k'->0)
// to pi^2 (k'=1).
inline double phase_map_kprime(double kp) {
    double K = complete_elliptic_K_kprime(kp);
    double E = complete_elliptic_E_kprime(kp);
    return 8.0 * E * K - 4.0 * kp * kp * K * K;
}
}  // namespace detail

inline EquilibriumMeasure solve_equilibrium(double T) {
    if (!(T > 0.0)) throw std::domain_error("solve_equilibrium: T must be > 0");
    EquilibriumMeasure m;
    m.T = T;
    const double pi2 = M_PI * M_PI;
    if (T <= pi2) {
        m.regime = Regime::Subcritical;
        m.k = 0.0;
        m.kprime = 1.0;
        m.alpha = 0.0;
        m.beta = 2.0 / std::sqrt(T);
        m.K = m.E = M_PI / 2.0;
        return m;
    }
    m.regime = Regime::Supercritical;
    // bisect on u = log(k'): the map is monotone and k' underflows double
    // precision long before T becomes large enough to matter.
    double lo = std::log(1e-300), hi = 0.0;  // f(exp(lo)) huge, f(exp(hi)) = pi^2 < T
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double f = detail::phase_map_kprime(std::exp(mid));
        (f > T ? lo : hi) = mid;
    }
    m.kprime = std::exp(0.5 * (lo + hi));
    m.k = std::sqrt((1.0 - m.kprime) * (1.0 + m.kprime));
    m.K = complete_elliptic_K_kprime(m.kprime);
    m.E = complete_elliptic_E_kprime(m.kprime);
    m.alpha = 4.0 * m.k * m.K / T;
    m.beta = 4.0 * m.K / T;
    return m;
}

// rho_T(x); total function of x, zero outside [-beta,beta].
inline double density(const EquilibriumMeasure& m, double x) {
    double ax = std::abs(x);
    if (ax >= m.beta) return 0.0;
    if (m.regime == Regime::Subcritical)
        return (m.T / (2.0 * M_PI)) * std::sqrt(4.0 / m.T - x * x);
    if (ax <= m.alpha) return 1.0;
    // elliptic regime: closed form of the inner integral as a complete
    // integral of the third kind, evaluated through Carlson forms
    double nu = (m.alpha / ax) * (m.alpha / ax);
    double pref = 2.0 * std::sqrt((ax * ax - m.alpha * m.alpha) * (m.beta * m.beta - ax * ax)) /
                  (M_PI * m.beta * ax);
    return pref * complete_elliptic_Pi(nu, m.kprime);
}

namespace detail {

// int rho(x)/(z-x) dx by Gauss-Legendre, usable when z is well away from the
// support (integrand smooth). Split into the flat plateau and the elliptic
// band, the latter through x = sqrt(a^2 cos^2 u + b^2 sin^2 u).
inline std::complex<double> stieltjes_farfield(const EquilibriumMeasure& m,
                                               std::complex<double> z) {
    using C = std::complex<double>;
    const auto& xs = gl_nodes(64);
    const auto& ws = gl_weights(64);
    C acc = 0.0;
    for (int i = 0; i < 64; ++i) {
        double u = 0.25 * M_PI * (xs[i] + 1.0);
        double su = std::sin(u), cu = std::cos(u);
        double x = std::sqrt(m.alpha * m.alpha * cu * cu + m.beta * m.beta * su * su);
        double dxdu = (m.beta * m.beta - m.alpha * m.alpha) * su * cu / x;
        acc += ws[i] * 0.25 * M_PI * density(m, x) * dxdu * (1.0 / (z - x) + 1.0 / (z + x));
        if (m.alpha > 0.0) {
            double y = 0.5 * m.alpha * (xs[i] + 1.0);
            acc += ws[i] * 0.5 * m.alpha * (1.0 / (z - y) + 1.0 / (z + y));
        }
    }
    return acc;
}

inline double dist_to_support(const EquilibriumMeasure& m, std::complex<double> z) {
    double x = std::abs(z.real()), y = std::abs(z.imag());
    if (x <= m.beta) return y;
    return std::hypot(x - m.beta, y);
}
}  // namespace detail

// Stieltjes transform G_T(z) = int rho_T(x)/(z-x) dx for z off [-beta,beta].
inline std::complex<double> stieltjes(const EquilibriumMeasure& m, std::complex<double> z) {
    using C = std::complex<double>;
    if (detail::dist_to_support(m, z) < 1e-8)
        throw std::domain_error("stieltjes: z too close to the support");
    if (m.regime == Regime::Subcritical) {
        double c = 2.0 / std::sqrt(m.T);
        // sqrt(z-c)*sqrt(z+c) is the branch of sqrt(z^2-c^2) cut on [-c,c]
        // that behaves like z at infinity; (T/2)(z-w) rewritten as 2/(z+w)
        // to avoid cancellation for large |z|
        C w = std::sqrt(z - c) * std::sqrt(z + c);
        return 2.0 / (z + w);
    }
    if (std::abs(z) > 5.0 * m.beta) {
        // far field: the closed form subtracts two nearly equal O(|z|) terms;
        // direct quadrature of the (now smooth) defining integral is exact to
        // machine precision instead
        return detail::stieltjes_farfield(m, z);
    }
    // branch of sqrt((z^2-a^2)(z^2-b^2)) cut on [-b,-a] u [a,b], ~ z^2 at inf
    C w = std::sqrt(z - m.alpha) * std::sqrt(z + m.alpha) * std::sqrt(z - m.beta) *
          std::sqrt(z + m.beta);
    C nu = (m.alpha * m.alpha) / (z * z);
    return z * m.T / 2.0 - (2.0 / (m.beta * z)) * w * complete_elliptic_Pi(nu, m.kprime);
}

// Inverse of pi*rho_T on (alpha,beta), scaled to the circle: the spectral
// density of the midpoint holonomy at angle theta is psi(|theta|)/pi where
// pi*rho_T(psi(theta)) = theta. theta in {0,pi} returns the continuous
// endpoint values beta/pi and alpha/pi.
inline double midpoint_spectral_density(const EquilibriumMeasure& m, double theta) {
    double t = std::abs(theta);
    if (t > M_PI + 1e-15) throw std::domain_error("midpoint_spectral_density: |theta| must be <= pi");
    if (t >= M_PI) return m.alpha / M_PI;
    if (t <= 0.0) return m.beta / M_PI;
    double target = t / M_PI;  // rho value sought, in (0,1)
    double rho_inner =
        (m.regime == Regime::Subcritical) ? std::sqrt(m.T) / M_PI : 1.0;  // sup of rho
    if (target >= rho_inner) return m.alpha / M_PI;
    // rho_T strictly decreasing from rho_inner at alpha to 0 at beta
    double lo = m.alpha, hi = m.beta;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * m.beta; ++it) {
        double mid = 0.5 * (lo + hi);
        (density(m, mid) > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi) / M_PI;
}

}  // namespace ymsphere

#endif
