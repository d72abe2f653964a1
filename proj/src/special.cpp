#include "flrw/special.hpp"
#include "flrw/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace flrw {

double elliptic_K(double m) {
    if (!(m >= 0.0 && m < 1.0))
        throw std::domain_error("elliptic_K: parameter m must satisfy 0 <= m < 1");
    double a = 1.0, b = std::sqrt(1.0 - m);
    for (int i = 0; i < 64 && std::fabs(a - b) > 2e-16 * a; ++i) {
        double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return M_PI / (2.0 * a);
}

JacobiTriple jacobi(double u, double m) {
    if (!(m >= 0.0 && m < 1.0))
        throw std::domain_error("jacobi: parameter m must satisfy 0 <= m < 1");
    if (m < 1e-14) {
        // circular degeneration; the O(m) correction keeps ~1e-12 accuracy
        double s = std::sin(u), c = std::cos(u);
        double corr = 0.25 * m * (u - s * c);
        return {s - corr * c, c + corr * s, 1.0 - 0.5 * m * s * s};
    }

    // reduce modulo the real period 4K so the AGM phase stays small
    double K = elliptic_K(m);
    u = std::remainder(u, 4.0 * K);

    // descending AGM (Landen): a0 = 1, b0 = sqrt(1-m), c0 = sqrt(m),
    // a_{n+1} = (a_n+b_n)/2, c_{n+1} = (a_n-b_n)/2, b_{n+1} = sqrt(a_n b_n)
    constexpr int kMax = 32;
    double a[kMax], c[kMax];
    a[0] = 1.0;
    c[0] = std::sqrt(m);
    double bn = std::sqrt(1.0 - m);
    int N = 0;
    while (N < kMax - 1 && std::fabs(c[N]) > 2e-16 * a[N]) {
        a[N + 1] = 0.5 * (a[N] + bn);
        c[N + 1] = 0.5 * (a[N] - bn);
        bn = std::sqrt(a[N] * bn);
        ++N;
    }

    double phi = std::ldexp(1.0, N) * a[N] * u;
    for (int n = N; n >= 1; --n)
        phi = 0.5 * (phi + std::asin(std::clamp(c[n] / a[n] * std::sin(phi), -1.0, 1.0)));

    double sn = std::sin(phi);
    double cn = std::cos(phi);
    double dn = std::sqrt(1.0 - m * sn * sn);
    return {sn, cn, dn};
}

namespace {

// Lanczos g=7, n=9 coefficients (Godfrey's set)
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

std::complex<double> ln_gamma_core(std::complex<double> z) {
    // valid for Re z >= 0.5
    z -= 1.0;
    std::complex<double> x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + double(i));
    std::complex<double> t = z + 7.5;
    return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t + std::log(x);
}

} // namespace

std::complex<double> ln_gamma(std::complex<double> z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw std::domain_error("ln_gamma: pole at non-positive integer");
    if (z.real() >= 0.5) return ln_gamma_core(z);
    // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    std::complex<double> s = std::sin(M_PI * z);
    if (s == std::complex<double>(0.0, 0.0))
        throw std::domain_error("ln_gamma: pole hit through reflection");
    return std::log(M_PI) - std::log(s) - ln_gamma_core(1.0 - z);
}

double integrate_decaying(const std::function<double(double)>& f,
                          const QuadratureSpec& spec) {
    if (!(spec.abs_tol > 0.0) || !(spec.trunc_tol > 0.0) || spec.max_halvings < 1)
        throw std::domain_error("integrate_decaying: invalid QuadratureSpec");

    // find the truncation radius: walk outward until |f| stays below trunc_tol
    double T = 8.0;
    const double Tmax = 700.0;
    auto tail_big = [&](double t) {
        return std::fabs(f(t)) > spec.trunc_tol || std::fabs(f(-t)) > spec.trunc_tol ||
               std::fabs(f(t + 0.37)) > spec.trunc_tol || std::fabs(f(-t - 0.37)) > spec.trunc_tol;
    };
    while (T < Tmax && tail_big(T)) T *= 1.5;
    T += 4.0; // margin against sampling between bumps

    // composite Simpson with mesh halving and a Richardson stop
    int n = 128; // intervals, even
    auto simpson = [&](int intervals) {
        double h = 2.0 * T / intervals;
        double s = f(-T) + f(T);
        for (int i = 1; i < intervals; ++i)
            s += f(-T + i * h) * (i % 2 ? 4.0 : 2.0);
        return s * h / 3.0;
    };
    double prev = simpson(n);
    for (int it = 0; it < spec.max_halvings; ++it) {
        n *= 2;
        double cur = simpson(n);
        double err = std::fabs(cur - prev) / 15.0;
        if (err <= spec.abs_tol)
            return cur + (cur - prev) / 15.0;
        if (it + 1 == spec.max_halvings)
            throw ConvergenceError("integrate_decaying: halving budget exhausted", cur, prev);
        prev = cur;
    }
    return prev; // unreachable
}

} // namespace flrw
