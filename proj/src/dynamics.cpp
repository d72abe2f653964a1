#include "flrw/dynamics.hpp"
#include "flrw/errors.hpp"
#include "flrw/special.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flrw {

// --- vector fields -------------------------------------------------------------

namespace {

void check_dim(const ModelParams& p, const PhaseState& s) {
    if (s.n() != p.n())
        throw std::domain_error("vector_field: state dimension does not match model");
}

PhaseState field_coupled(const ModelParams& p, const PhaseState& s) {
    check_dim(p, s);
    const double eps = p.epsilon, al = p.alpha();
    PhaseState d = PhaseState::zero(s.n());
    d.u = s.U;
    d.U = -p.k * s.u * (1.0 - s.u * s.u)
        + eps * s.u * V2(p, s.w)
        + 0.5 * std::pow(eps, 1.5) * V3(p, s.w) / al;
    auto g2 = gradV2(p, s.w), g3 = gradV3(p, s.w), g4 = gradV4(p, s.w);
    for (int i = 0; i < s.n(); ++i) {
        d.w[i] = s.W[i];
        d.W[i] = -0.5 * (al * al * s.u * s.u * g2[i]
                       + al * std::sqrt(eps) * s.u * g3[i]
                       + eps * g4[i]);
    }
    return d;
}

PhaseState field_decoupled(const ModelParams& p, const PhaseState& s) {
    check_dim(p, s);
    PhaseState d = PhaseState::zero(s.n());
    d.u = s.U;
    d.U = -p.k * s.u * (1.0 - s.u * s.u);
    for (int i = 0; i < s.n(); ++i) {
        d.w[i] = s.W[i];
        d.W[i] = -0.5 * p.phi[i] * p.phi[i] * s.u * s.u * s.w[i];
    }
    return d;
}

PhaseState field_saddle(const PhaseState& s) {
    PhaseState d = PhaseState::zero(s.n());
    d.u = s.U;
    d.U = s.u * (1.0 - s.u * s.u);
    for (int i = 0; i < s.n(); ++i) {
        d.w[i] = s.W[i];
        d.W[i] = s.w[i] * (1.0 - s.w[i] * s.w[i]);
    }
    return d;
}

PhaseState field_unreduced(const ModelParams& p, const PhaseState& s) {
    if (s.n() != 1)
        throw std::domain_error("vector_field: unreduced frame is scalar (n = 1)");
    const double a = s.u, A = s.U, b = s.w[0], B = s.W[0];
    const double w = p.omega;
    PhaseState d = PhaseState::zero(1);
    if (p.coupling == Coupling::minimal) {
        if (a == 0.0)
            throw std::domain_error("vector_field: unreduced minimal model singular at a = 0");
        if (w != 0.0 && b == 0.0)
            throw std::domain_error("vector_field: angular-momentum term singular at b = 0");
        const double a3 = a * a * a;
        d.u = -A;
        d.U = 2.0 * p.k * a - 4.0 * p.Lambda * a3 + B * B / a3
            + (w != 0.0 ? 2.0 * w * w / (a3 * b * b) : 0.0)
            - 4.0 * p.m2 * a3 * b * b;
        d.w[0] = B / (a * a);
        d.W[0] = (w != 0.0 ? 2.0 * w * w / (a * a * b * b * b) : 0.0)
               - 2.0 * p.m2 * a * a * a * a * b;
    } else {
        if (w != 0.0 && b == 0.0)
            throw std::domain_error("vector_field: angular-momentum term singular at b = 0");
        d.u = -A;
        d.U = p.k * a - 2.0 * p.Lambda * a * a * a - p.m2 * a * b * b;
        d.w[0] = B;
        d.W[0] = -p.k * b + (w != 0.0 ? w * w / (b * b * b) : 0.0)
               - p.lambda_self * b * b * b - p.m2 * a * a * b;
    }
    return d;
}

} // namespace

PhaseState vector_field(const ModelParams& p, Frame f, const PhaseState& s) {
    switch (f) {
        case Frame::coupled: return field_coupled(p, s);
        case Frame::decoupled: return field_decoupled(p, s);
        case Frame::saddle_radial:
            if (s.n() != 1)
                throw std::domain_error("vector_field: saddle_radial is 2-dof (n = 1)");
            return field_saddle(s);
        case Frame::saddle_separable: return field_saddle(s);
        case Frame::unreduced: return field_unreduced(p, s);
    }
    throw std::logic_error("vector_field: bad frame");
}

double frame_invariant(const ModelParams& p, Frame f, const PhaseState& s) {
    switch (f) {
        case Frame::coupled: {
            // pull back to the singularity-free chart and evaluate its energy
            PhaseState xy = rescale_to_uw_inverse(p, s);
            return energy_desing(p, xy);
        }
        case Frame::decoupled:
            return 0.5 * s.U * s.U - 0.25 * p.k * (1.0 - s.u * s.u) * (1.0 - s.u * s.u);
        case Frame::saddle_radial:
        case Frame::saddle_separable: {
            auto e = [](double q, double v) {
                return 0.5 * v * v - 0.5 * q * q + 0.25 * q * q * q * q;
            };
            double H = e(s.u, s.U);
            for (int i = 0; i < s.n(); ++i) H += e(s.w[i], s.W[i]);
            return H;
        }
        case Frame::unreduced:
            return energy_unreduced(p, s.u, s.U, s.w[0], s.W[0]);
    }
    throw std::logic_error("frame_invariant: bad frame");
}

// --- embedded Runge-Kutta stepper (Hairer's 8(5,3) pair) -------------------------

namespace {

struct Dop853 {
    // clang-format off
    static constexpr double
    c2=0.05260015195876773187856, c3=0.07890022793815159781784, c4=0.11835034190722739672676,
    c5=0.28164965809277260327324, c6=1.0/3.0, c7=0.25, c8=0.30769230769230769230769,
    c9=0.65128205128205128205128, c10=0.6, c11=0.85714285714285714285714,
    b1=0.05429373411656876223805, b6=4.45031289275240888144114, b7=1.89151789931450038304282,
    b8=-5.80120396001058478146721, b9=0.31116436695781989440892, b10=-0.15216094966251607855618,
    b11=0.20136540080403034837478, b12=0.04471061572777259051769,
    bhh1=0.24409448818897637795276, bhh2=0.73384668828161185734136, bhh3=0.02205882352941176470588,
    er1=0.01312004499419488073250, er6=-1.22515644637620444072057, er7=-0.49575894965725019152141,
    er8=1.66437718245498653696153, er9=-0.35032884874997368168865, er10=0.33417911871301747902973,
    er11=0.08192320648511571246571, er12=-0.02235530786388629525884,
    a21=0.05260015195876773187856,
    a31=0.01972505698453789945446, a32=0.05917517095361369836338,
    a41=0.02958758547680684918169, a43=0.08876275643042054754507,
    a51=0.24136513415926668550237, a53=-0.88454947932828608534486, a54=0.92483400326179200311574,
    a61=0.03703703703703703703704, a64=0.17082860872947387127960, a65=0.12546768756682242501669,
    a71=0.03710937500000000000000, a74=0.17025221101954403931498, a75=0.06021653898045596068502,
    a76=-0.01757812500000000000000,
    a81=0.03709200011850479271088, a84=0.17038392571223999381021, a85=0.10726203044637328465181,
    a86=-0.01531943774862440175279, a87=0.00827378916381402288758,
    a91=0.62411095871607571711443, a94=-3.36089262944694129406857, a95=-0.86821934684172600681819,
    a96=27.5920996994467083049416, a97=20.1540675504778934086187, a98=-43.4898841810699588477366,
    a101=0.47766253643826436589043, a104=-2.48811461997166764192642, a105=-0.59029082683684299637145,
    a106=21.2300514481811942347289, a107=15.2792336328824235832597, a108=-33.2882109689848629194453,
    a109=-0.02033120170850862613582,
    a111=-0.93714243008598732571704, a114=5.18637242884406370830024, a115=1.09143734899672957818500,
    a116=-8.14978701074692612513997, a117=-18.5200656599969598641566, a118=22.7394870993505042818970,
    a119=2.49360555267965238987089, a1110=-3.04676447189821950038237,
    a121=2.27331014751653820792360, a124=-10.5344954667372501984067, a125=-2.00087205822486249909676,
    a126=-17.9589318631187989172766, a127=27.9488845294199600508500, a128=-2.85899827713502369474066,
    a129=-8.87285693353062954433549, a1210=12.3605671757943030647266, a1211=0.64339274601576353035597;
    // clang-format on
};

} // namespace

void ode_integrate(const OdeRhs& f, std::vector<double>& y, double t0, double t1,
                   const OdeOptions& opt,
                   const std::function<void(double, std::span<const double>)>& observe) {
    const size_t n = y.size();
    const double dir = t1 >= t0 ? 1.0 : -1.0;
    const double span = std::fabs(t1 - t0);
    if (span == 0.0) {
        if (observe) observe(t0, y);
        return;
    }

    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), k8(n),
        k9(n), k10(n), yt(n), ynew(n);
    double t = t0;
    if (observe) observe(t, y);

    f(t, y, k1);
    double h = opt.initial_step != 0.0 ? std::fabs(opt.initial_step) : 0.0;
    if (h == 0.0) {
        // crude first guess from the scaled norms of y and y'
        double dn = 0.0, yn = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double sk = opt.abs_tol + opt.rel_tol * std::fabs(y[i]);
            dn += (k1[i] / sk) * (k1[i] / sk);
            yn += (y[i] / sk) * (y[i] / sk);
        }
        h = (dn > 0 && yn > 0) ? 0.01 * std::sqrt(yn / dn) : 1e-6;
        h = std::min(h, span);
    }

    using D = Dop853;
    long steps = 0;
    bool last = false;
    while (!last) {
        if (++steps > opt.max_steps)
            throw StiffnessError("ode_integrate: step budget exhausted");
        if (h < 1e-14 * (std::fabs(t) + 1.0))
            throw StiffnessError("ode_integrate: step size underflow");
        if (h >= std::fabs(t1 - t)) {
            h = std::fabs(t1 - t);
            last = true;
        }
        const double hs = dir * h;

        auto stage = [&](std::vector<double>& k, double c, auto... terms) {
            auto pairs = std::initializer_list<std::pair<double, const std::vector<double>*>>{terms...};
            for (size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (auto& [cf, kv] : pairs) acc += cf * (*kv)[i];
                yt[i] = y[i] + hs * acc;
            }
            f(t + c * hs, yt, k);
        };
        stage(k2, D::c2, std::pair{D::a21, &k1});
        stage(k3, D::c3, std::pair{D::a31, &k1}, std::pair{D::a32, &k2});
        stage(k4, D::c4, std::pair{D::a41, &k1}, std::pair{D::a43, &k3});
        stage(k5, D::c5, std::pair{D::a51, &k1}, std::pair{D::a53, &k3}, std::pair{D::a54, &k4});
        stage(k6, D::c6, std::pair{D::a61, &k1}, std::pair{D::a64, &k4}, std::pair{D::a65, &k5});
        stage(k7, D::c7, std::pair{D::a71, &k1}, std::pair{D::a74, &k4}, std::pair{D::a75, &k5},
              std::pair{D::a76, &k6});
        stage(k8, D::c8, std::pair{D::a81, &k1}, std::pair{D::a84, &k4}, std::pair{D::a85, &k5},
              std::pair{D::a86, &k6}, std::pair{D::a87, &k7});
        stage(k9, D::c9, std::pair{D::a91, &k1}, std::pair{D::a94, &k4}, std::pair{D::a95, &k5},
              std::pair{D::a96, &k6}, std::pair{D::a97, &k7}, std::pair{D::a98, &k8});
        stage(k10, D::c10, std::pair{D::a101, &k1}, std::pair{D::a104, &k4}, std::pair{D::a105, &k5},
              std::pair{D::a106, &k6}, std::pair{D::a107, &k7}, std::pair{D::a108, &k8},
              std::pair{D::a109, &k9});
        // stages 11 and 12 reuse k2, k3 as scratch like the reference scheme
        stage(k2, D::c11, std::pair{D::a111, &k1}, std::pair{D::a114, &k4}, std::pair{D::a115, &k5},
              std::pair{D::a116, &k6}, std::pair{D::a117, &k7}, std::pair{D::a118, &k8},
              std::pair{D::a119, &k9}, std::pair{D::a1110, &k10});
        stage(k3, 1.0, std::pair{D::a121, &k1}, std::pair{D::a124, &k4}, std::pair{D::a125, &k5},
              std::pair{D::a126, &k6}, std::pair{D::a127, &k7}, std::pair{D::a128, &k8},
              std::pair{D::a129, &k9}, std::pair{D::a1210, &k10}, std::pair{D::a1211, &k2});

        double err5 = 0.0, err3 = 0.0;
        for (size_t i = 0; i < n; ++i) {
            k4[i] = D::b1 * k1[i] + D::b6 * k6[i] + D::b7 * k7[i] + D::b8 * k8[i] +
                    D::b9 * k9[i] + D::b10 * k10[i] + D::b11 * k2[i] + D::b12 * k3[i];
            ynew[i] = y[i] + hs * k4[i];
            double sk = opt.abs_tol + opt.rel_tol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
            double e3 = k4[i] - D::bhh1 * k1[i] - D::bhh2 * k9[i] - D::bhh3 * k3[i];
            err3 += (e3 / sk) * (e3 / sk);
            double e5 = D::er1 * k1[i] + D::er6 * k6[i] + D::er7 * k7[i] + D::er8 * k8[i] +
                        D::er9 * k9[i] + D::er10 * k10[i] + D::er11 * k2[i] + D::er12 * k3[i];
            err5 += (e5 / sk) * (e5 / sk);
        }
        double deno = err5 + 0.01 * err3;
        if (deno <= 0.0) deno = 1.0;
        double err = h * err5 / std::sqrt(deno * double(n));

        double fac = std::pow(std::max(err, 1e-32), 1.0 / 8.0) / 0.9;
        fac = std::max(1.0 / 6.0, std::min(3.0, fac));

        if (err <= 1.0) {
            t = last ? t1 : t + hs;
            y = ynew;
            f(t, y, k1);
            if (observe) observe(t, y);
            h /= fac;
        } else {
            last = false;
            h /= std::min(3.0, fac);
        }
    }
}

Trajectory integrate(const ModelParams& p, Frame f, const PhaseState& s0, double t0,
                     double t1, double tol) {
    if (!(tol > 0.0))
        throw std::domain_error("integrate: tol must be positive");
    const int n = s0.n();
    Trajectory traj;
    std::vector<double> y = s0.pack();
    const double H0 = frame_invariant(p, f, s0);
    OdeRhs rhs = [&p, f, n](double, std::span<const double> yv, std::span<double> dy) {
        PhaseState d = vector_field(p, f, PhaseState::unpack(yv, n));
        auto packed = d.pack();
        std::copy(packed.begin(), packed.end(), dy.begin());
    };
    OdeOptions opt;
    opt.rel_tol = tol;
    opt.abs_tol = tol * 1e-2;
    ode_integrate(rhs, y, t0, t1, opt, [&](double t, std::span<const double> yv) {
        PhaseState s = PhaseState::unpack(yv, n);
        traj.times.push_back(t);
        traj.states.push_back(s);
        traj.energy_drift = std::max(traj.energy_drift,
                                     std::fabs(frame_invariant(p, f, s) - H0));
    });
    return traj;
}

// --- separatrices -----------------------------------------------------------------

double SeparatrixSolution::u(double t) const {
    t -= t0;
    if (kind == SeparatrixKind::heteroclinic_k1)
        return std::tanh(t / std::sqrt(2.0));
    return std::sqrt(2.0) / std::cosh(t);
}

double SeparatrixSolution::du(double t) const {
    t -= t0;
    if (kind == SeparatrixKind::heteroclinic_k1) {
        double c = std::cosh(t / std::sqrt(2.0));
        return 1.0 / (std::sqrt(2.0) * c * c);
    }
    return -std::sqrt(2.0) * std::tanh(t) / std::cosh(t);
}

SeparatrixSolution separatrix(const ModelParams& p, SeparatrixKind kind) {
    if (kind == SeparatrixKind::heteroclinic_k1 && p.k != 1)
        throw std::domain_error("separatrix: heteroclinic branch requires k = +1");
    if (kind == SeparatrixKind::homoclinic_kneg1 && p.k != -1)
        throw std::domain_error("separatrix: homoclinic branch requires k = -1");
    return {kind, 0.0};
}

// --- periodic family ---------------------------------------------------------------

double PeriodicOrbit::u(double t) const {
    return amplitude * jacobi(b_ * t, modulus).dn;
}

double PeriodicOrbit::du(double t) const {
    auto j = jacobi(b_ * t, modulus);
    return -amplitude * b_ * modulus * j.sn * j.cn;
}

PeriodicOrbit periodic_family(double h) {
    if (!(h > -0.25 && h < 0.0))
        throw std::domain_error("periodic_family: energy must lie in (-1/4, 0)");
    // energy of u = A dn(b t | m): h = (m-1)/(2-m)^2 with b^2 = 1/(2-m), A^2 = 2 b^2
    double disc = std::sqrt(4.0 * h + 1.0);
    double m = ((4.0 * h + 1.0) - disc) / (2.0 * h);
    m = std::clamp(m, 0.0, 1.0 - 1e-16);
    PeriodicOrbit orb;
    orb.energy = h;
    orb.modulus = m;
    orb.b_ = 1.0 / std::sqrt(2.0 - m);
    orb.amplitude = std::sqrt(2.0) * orb.b_;
    orb.period = 2.0 * elliptic_K(m) / orb.b_;
    return orb;
}

// --- Poincare sections ---------------------------------------------------------------

CrossingList poincare_section(const ModelParams& p, Frame f, const PhaseState& s0,
                              const SectionSpec& sec, int n_crossings, double t_budget,
                              double tol) {
    const int n = s0.n();
    const int dim = 2 + 2 * n;
    if (sec.coordinate < 0 || sec.coordinate >= dim)
        throw std::domain_error("poincare_section: coordinate index out of range");

    OdeRhs rhs = [&p, f, n](double, std::span<const double> yv, std::span<double> dy) {
        PhaseState d = vector_field(p, f, PhaseState::unpack(yv, n));
        auto packed = d.pack();
        std::copy(packed.begin(), packed.end(), dy.begin());
    };
    OdeOptions opt;
    opt.rel_tol = tol;
    opt.abs_tol = tol * 1e-2;

    CrossingList out;
    std::vector<double> prev_y = s0.pack();
    double prev_t = 0.0;
    bool first = true;

    auto g = [&](std::span<const double> yv) { return yv[sec.coordinate] - sec.value; };
    auto wanted = [&](double gl, double gr) {
        if (gl == 0.0 || gl * gr > 0.0) return false;
        if (sec.direction > 0) return gl < 0.0;
        if (sec.direction < 0) return gl > 0.0;
        return true;
    };

    struct EnoughCrossings {};
    std::vector<double> y = s0.pack();
    try {
        ode_integrate(rhs, y, 0.0, t_budget, opt, [&](double t, std::span<const double> yv) {
            std::vector<double> cur(yv.begin(), yv.end());
            if (!first) {
                double gl = g(prev_y), gr = g(cur);
                if (wanted(gl, gr)) {
                    // bisection on short re-integrations from the bracketing state
                    double ta = prev_t, tb = t;
                    std::vector<double> ya = prev_y;
                    while (tb - ta > 1e-10) {
                        double tm = 0.5 * (ta + tb);
                        std::vector<double> ym = ya;
                        ode_integrate(rhs, ym, ta, tm, opt);
                        if (wanted(g(ya), g(ym))) {
                            tb = tm;
                        } else {
                            ta = tm;
                            ya = ym;
                        }
                    }
                    out.times.push_back(0.5 * (ta + tb));
                    out.states.push_back(PhaseState::unpack(ya, n));
                    if (int(out.times.size()) >= n_crossings) throw EnoughCrossings{};
                }
            }
            prev_y = cur;
            prev_t = t;
            first = false;
        });
    } catch (const EnoughCrossings&) {
    }
    out.complete = int(out.times.size()) >= n_crossings;
    return out;
}

} // namespace flrw
