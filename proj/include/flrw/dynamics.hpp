#pragma once

#include "flrw/model.hpp"

#include <functional>
#include <span>
#include <vector>

namespace flrw {

/// Which set of differential equations a PhaseState lives in.
///   coupled          - rescaled (u,U,w,W) system with the epsilon terms
///   decoupled        - its epsilon = 0 limit (u decouples from w)
///   saddle_radial    - product system u'' = u(1-u^2), r'' = r(1-r^2) (angle frozen)
///   saddle_separable - product system u'' = u(1-u^2), w_i'' = w_i(1-w_i^2)
///   unreduced        - the raw (a,A,b,B) model incl. angular momentum
enum class Frame { coupled, decoupled, saddle_radial, saddle_separable, unreduced };

PhaseState vector_field(const ModelParams& p, Frame f, const PhaseState& s);

/// The conserved quantity monitored by integrate() for the given frame:
/// the frame Hamiltonian, or the (u,U) sub-energy for the decoupled frame.
double frame_invariant(const ModelParams& p, Frame f, const PhaseState& s);

struct Trajectory {
    std::vector<double> times;
    std::vector<PhaseState> states;
    double energy_drift = 0.0; // max |I(t) - I(0)| of the frame invariant
};

// --- generic adaptive embedded Runge-Kutta (8th order, 5/3rd order error) ----

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dy)>;

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double initial_step = 0.0;    // 0 = automatic
    long max_steps = 50'000'000;
};

/// Integrate y' = f(t,y) from t0 to t1 (either direction); y is updated in
/// place.  observe(t, y), when given, is called at t0 and after every
/// accepted step.  Throws StiffnessError on step-size underflow.
void ode_integrate(const OdeRhs& f, std::vector<double>& y, double t0, double t1,
                   const OdeOptions& opt,
                   const std::function<void(double, std::span<const double>)>& observe = {});

Trajectory integrate(const ModelParams& p, Frame f, const PhaseState& s0,
                     double t0, double t1, double tol);

// --- separatrices -------------------------------------------------------------

enum class SeparatrixKind { heteroclinic_k1, homoclinic_kneg1 };

/// Closed-form saddle connections of the decoupled u-subsystem:
///   heteroclinic_k1  : u(t) = tanh(t/sqrt2)        for u'' = -u(1-u^2)
///   homoclinic_kneg1 : u(t) = sqrt2 sech(t)        for u'' =  u(1-u^2)
struct SeparatrixSolution {
    SeparatrixKind kind;
    double t0 = 0.0; // time shift applied as t -> t - t0
    double u(double t) const;
    double du(double t) const;
};

SeparatrixSolution separatrix(const ModelParams& p, SeparatrixKind kind);

// --- periodic family -----------------------------------------------------------

/// Periodic orbit of u'' = u(1-u^2) around the centre u = 1 at energy
/// h = u'^2/2 - u^2/2 + u^4/4 in (-1/4, 0):  u(t) = A dn(b t | m).
struct PeriodicOrbit {
    double energy;
    double amplitude;  // max |u|
    double modulus;    // elliptic parameter m
    double period;
    double u(double t) const;
    double du(double t) const;
private:
    friend PeriodicOrbit periodic_family(double h);
    double b_ = 0.0;
};

PeriodicOrbit periodic_family(double h);

// --- Poincare sections -----------------------------------------------------------

struct SectionSpec {
    int coordinate = 0;  // index into the packed state [u, U, w..., W...]
    double value = 0.0;
    int direction = +1;  // +1: increasing, -1: decreasing, 0: both
};

struct CrossingList {
    std::vector<double> times;
    std::vector<PhaseState> states;
    bool complete = false; // false => fewer than the requested crossings found
};

/// Locate section crossings of the flow; each crossing time is refined to
/// 1e-10 by bisecting short re-integrations across the bracketing step.
CrossingList poincare_section(const ModelParams& p, Frame f, const PhaseState& s0,
                              const SectionSpec& sec, int n_crossings,
                              double t_budget, double tol = 1e-10);

} // namespace flrw
