#pragma once

#include <complex>
#include <functional>

namespace flrw {

struct JacobiTriple {
    double sn, cn, dn;
};

/// Jacobi elliptic functions sn, cn, dn via the arithmetic-geometric-mean
/// descent, parameter convention m = k^2 with 0 <= m < 1.  The argument is
/// reduced modulo the real period first, so large |u| stays accurate.
JacobiTriple jacobi(double u, double m);

/// Complete elliptic integral K(m), same parameter convention.
double elliptic_K(double m);

/// Principal-branch complex log-Gamma, Lanczos approximation plus the
/// reflection formula for Re z < 1/2.  exp(ln_gamma(z)) is accurate to
/// better than 1e-12 relative on the strip Re z in [-20,20], |Im z| <= 50.
/// The imaginary part may differ from the analytic continuation of
/// log Gamma by a multiple of 2*pi; every use here exponentiates.
std::complex<double> ln_gamma(std::complex<double> z);

struct QuadratureSpec {
    double abs_tol = 1e-10;   // absolute error target for the integral
    double trunc_tol = 1e-14; // tail cutoff threshold on |f|
    int max_halvings = 22;    // mesh-halving budget of the composite rule
};

/// Integral of f over the whole real line.  The caller asserts |f(t)| decays
/// at least exponentially; the domain is truncated where sampled |f| drops
/// below trunc_tol, then a composite Simpson rule is halved until the
/// Richardson error estimate is below abs_tol.
/// Throws ConvergenceError (with the last two estimates) if the halving
/// budget runs out.
double integrate_decaying(const std::function<double(double)>& f,
                          const QuadratureSpec& spec = {});

} // namespace flrw
