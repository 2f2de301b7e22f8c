#ifndef YMSPHERE_ELLIPTIC_HPP
#define YMSPHERE_ELLIPTIC_HPP

#include <cmath>
#include <complex>
#include <stdexcept>

namespace ymsphere {

// Arithmetic-geometric mean of a,b > 0.
inline double agm(double a, double b) {
    for (int i = 0; i < 64 && std::abs(a - b) > 1e-17 * a; ++i) {
        double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return 0.5 * (a + b);
}

// K(k) expressed through the complementary modulus k' = sqrt(1-k^2).
// Parametrizing by k' keeps full accuracy as k -> 1 (large sphere areas).
inline double complete_elliptic_K_kprime(double kprime) {
    if (!(kprime > 0.0) || kprime > 1.0)
        throw std::domain_error("complete_elliptic_K_kprime: kprime must be in (0,1]");
    return M_PI / (2.0 * agm(1.0, kprime));
}

inline double complete_elliptic_K(double k) {
    if (k < 0.0 || k >= 1.0) throw std::domain_error("complete_elliptic_K: k must be in [0,1)");
    // sqrt((1-k)(1+k)) avoids cancellation in 1-k^2 near k=1
    return complete_elliptic_K_kprime(std::sqrt((1.0 - k) * (1.0 + k)));
}

// E(k) via the AGM c-sequence: E = K * (1 - sum_{n>=0} 2^{n-1} c_n^2),
// c_0 = k, c_{n+1} = (a_n - b_n)/2.
inline double complete_elliptic_E_kk(double k, double kprime) {
    if (k == 1.0) return 1.0;
    double a = 1.0, b = kprime, c = k;
    double sum = 0.5 * c * c;
    double pw = 0.5;
    for (int i = 0; i < 64; ++i) {
        double an = 0.5 * (a + b);
        c = 0.5 * (a - b);
        b = std::sqrt(a * b);
        a = an;
        pw *= 2.0;
        sum += pw * c * c;
        if (std::abs(c) < 1e-17 * a) break;
    }
    double K = M_PI / (2.0 * a);
    return K * (1.0 - sum);
}

inline double complete_elliptic_E(double k) {
    if (k < 0.0 || k > 1.0) throw std::domain_error("complete_elliptic_E: k must be in [0,1]");
    return complete_elliptic_E_kk(k, std::sqrt((1.0 - k) * (1.0 + k)));
}

inline double complete_elliptic_E_kprime(double kprime) {
    if (kprime < 0.0 || kprime > 1.0)
        throw std::domain_error("complete_elliptic_E_kprime: kprime must be in [0,1]");
    return complete_elliptic_E_kk(std::sqrt((1.0 - kprime) * (1.0 + kprime)), kprime);
}

// Carlson symmetric elliptic integrals by the duplication algorithm; the
// template covers both double and complex<double> arguments. Complex use
// here stays within the region where principal square roots keep the
// duplication theorem valid (arguments off the negative real axis).
template <typename T>
inline T carlson_rf(T x, T y, T z) {
    using std::sqrt;
    using std::abs;
    for (int it = 0; it < 200; ++it) {
        T sx = sqrt(x), sy = sqrt(y), sz = sqrt(z);
        T lam = sx * (sy + sz) + sy * sz;
        x = T(0.25) * (x + lam);
        y = T(0.25) * (y + lam);
        z = T(0.25) * (z + lam);
        T mu = (x + y + z) / T(3.0);
        double scale = abs(mu);
        if (abs(x - mu) < 1e-9 * scale && abs(y - mu) < 1e-9 * scale && abs(z - mu) < 1e-9 * scale) {
            T X = T(1.0) - x / mu, Y = T(1.0) - y / mu, Z = -X - Y;
            T e2 = X * Y - Z * Z, e3 = X * Y * Z;
            return (T(1.0) - e2 / T(10.0) + e3 / T(14.0) + e2 * e2 / T(24.0) -
                    T(3.0) / T(44.0) * e2 * e3) /
                   sqrt(mu);
        }
    }
    throw std::runtime_error("carlson_rf: no convergence");
}

template <typename T>
inline T carlson_rc(T x, T y) {
    return carlson_rf(x, y, y);
}

template <typename T>
inline T carlson_rj(T x, T y, T z, T p) {
    using std::sqrt;
    using std::abs;
    const double C1 = 3.0 / 14.0, C2 = 1.0 / 3.0, C3 = 3.0 / 22.0, C4 = 3.0 / 26.0;
    const double C5 = 0.75 * C3, C6 = 1.5 * C4, C7 = 0.5 * C2, C8 = 2.0 * C3;
    T sum = T(0.0);
    double fac = 1.0;
    for (int it = 0; it < 200; ++it) {
        T sx = sqrt(x), sy = sqrt(y), sz = sqrt(z);
        T lam = sx * (sy + sz) + sy * sz;
        T alpha = p * (sx + sy + sz) + sx * sy * sz;
        alpha = alpha * alpha;
        T beta = p * (p + lam) * (p + lam);
        sum += T(fac) * carlson_rc(alpha, beta);
        fac *= 0.25;
        x = T(0.25) * (x + lam);
        y = T(0.25) * (y + lam);
        z = T(0.25) * (z + lam);
        p = T(0.25) * (p + lam);
        T ave = (x + y + z + p + p) / T(5.0);
        double scale = abs(ave);
        if (abs(x - ave) < 1e-9 * scale && abs(y - ave) < 1e-9 * scale &&
            abs(z - ave) < 1e-9 * scale && abs(p - ave) < 1e-9 * scale) {
            T dx = (ave - x) / ave, dy = (ave - y) / ave, dz = (ave - z) / ave, dp = (ave - p) / ave;
            T ea = dx * (dy + dz) + dy * dz;
            T eb = dx * dy * dz;
            T ec = dp * dp;
            T ed = ea - T(3.0) * ec;
            T ee = eb + T(2.0) * dp * (ea - ec);
            T tail = (T(1.0) + ed * (T(-C1) + T(C5) * ed - T(C6) * ee) +
                      eb * (T(C7) + dp * (T(-C8) + dp * T(C4))) + dp * ea * (T(C2) - dp * T(C3)) -
                      T(C2) * dp * ec) /
                     (ave * sqrt(ave));
            return T(3.0) * sum + T(fac) * tail;
        }
    }
    throw std::runtime_error("carlson_rj: no convergence");
}

// Complete elliptic integral of the third kind,
//   Pi(nu, k) = int_0^1 ds / ((1 - nu s^2) sqrt((1-s^2)(1-k^2 s^2))),
// via Carlson's reduction. nu may be complex (used with nu = alpha^2/z^2
// along contours); k' is passed so k -> 1 keeps precision.
inline std::complex<double> complete_elliptic_Pi(std::complex<double> nu, double kprime) {
    std::complex<double> kp2(kprime * kprime, 0.0);
    std::complex<double> rf = carlson_rf(std::complex<double>(0.0), kp2, std::complex<double>(1.0));
    std::complex<double> rj =
        carlson_rj(std::complex<double>(0.0), kp2, std::complex<double>(1.0), 1.0 - nu);
    return rf + nu / 3.0 * rj;
}

inline double complete_elliptic_Pi(double nu, double kprime) {
    if (nu >= 1.0) throw std::domain_error("complete_elliptic_Pi: nu must be < 1");
    double kp2 = kprime * kprime;
    return carlson_rf(0.0, kp2, 1.0) + nu / 3.0 * carlson_rj(0.0, kp2, 1.0, 1.0 - nu);
}

}  // namespace ymsphere

#endif
