#include "flrw/model.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace flrw {

double ModelParams::alpha() const { return 1.0 / std::sqrt(L()); }

void ModelParams::validate() const {
    if (k != 1 && k != -1)
        throw std::invalid_argument("ModelParams: k must be +1 or -1");
    if (!(k * Lambda > 0.0))
        throw std::invalid_argument("ModelParams: k*Lambda must be positive");
    if (!(epsilon >= 0.0))
        throw std::invalid_argument("ModelParams: epsilon must be >= 0");
    if (phi.empty())
        throw std::invalid_argument("ModelParams: phi spectrum must be non-empty");
    for (double p : phi)
        if (!(p > 0.0))
            throw std::invalid_argument("ModelParams: phi entries must be positive");
    double prod = alpha() * alpha() * L();
    if (std::fabs(prod - 1.0) > 1e-12)
        throw std::invalid_argument("ModelParams: alpha^2 * L != 1");
}

ModelParams ModelParams::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text); // parse errors carry position info
    static const char* known[] = {"k", "Lambda", "coupling", "m2", "lambda_self",
                                  "omega", "epsilon", "phi", "v3", "v4"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* key : known) ok = ok || it.key() == key;
        if (!ok)
            throw std::invalid_argument("model descriptor: unknown key \"" + it.key() + "\"");
    }
    ModelParams p;
    if (j.contains("k")) p.k = j.at("k").get<int>();
    if (j.contains("Lambda")) p.Lambda = j.at("Lambda").get<double>();
    if (j.contains("coupling")) {
        std::string c = j.at("coupling").get<std::string>();
        if (c == "minimal") p.coupling = Coupling::minimal;
        else if (c == "conformal") p.coupling = Coupling::conformal;
        else throw std::invalid_argument("model descriptor: coupling must be \"minimal\" or \"conformal\"");
    }
    if (j.contains("m2")) p.m2 = j.at("m2").get<double>();
    if (j.contains("lambda_self")) p.lambda_self = j.at("lambda_self").get<double>();
    if (j.contains("omega")) p.omega = j.at("omega").get<double>();
    if (j.contains("epsilon")) p.epsilon = j.at("epsilon").get<double>();
    if (j.contains("phi")) p.phi = j.at("phi").get<std::vector<double>>();
    if (j.contains("v3")) p.v3 = j.at("v3").get<double>();
    if (j.contains("v4")) p.v4 = j.at("v4").get<double>();
    p.validate();
    return p;
}

std::string ModelParams::to_json() const {
    nlohmann::json j;
    j["k"] = k;
    j["Lambda"] = Lambda;
    j["coupling"] = coupling == Coupling::minimal ? "minimal" : "conformal";
    j["m2"] = m2;
    j["lambda_self"] = lambda_self;
    j["omega"] = omega;
    j["epsilon"] = epsilon;
    j["phi"] = phi;
    j["v3"] = v3;
    j["v4"] = v4;
    return j.dump();
}

PhaseState::PhaseState(double u_, double U_, std::vector<double> w_, std::vector<double> W_)
    : u(u_), U(U_), w(std::move(w_)), W(std::move(W_)) {
    if (w.size() != W.size())
        throw std::invalid_argument("PhaseState: w and W must have equal length");
}

PhaseState PhaseState::zero(int n) {
    return {0.0, 0.0, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
}

bool PhaseState::finite() const {
    auto ok = [](double x) { return std::isfinite(x); };
    if (!ok(u) || !ok(U)) return false;
    for (double x : w) if (!ok(x)) return false;
    for (double x : W) if (!ok(x)) return false;
    return true;
}

std::vector<double> PhaseState::pack() const {
    std::vector<double> y;
    y.reserve(2 + 2 * w.size());
    y.push_back(u);
    y.push_back(U);
    y.insert(y.end(), w.begin(), w.end());
    y.insert(y.end(), W.begin(), W.end());
    return y;
}

PhaseState PhaseState::unpack(std::span<const double> y, int n) {
    PhaseState s = PhaseState::zero(n);
    s.u = y[0];
    s.U = y[1];
    for (int i = 0; i < n; ++i) s.w[i] = y[2 + i];
    for (int i = 0; i < n; ++i) s.W[i] = y[2 + n + i];
    return s;
}

PhiMatrix PhiMatrix::diagonal(std::span<const double> d) {
    PhiMatrix m(static_cast<int>(d.size()));
    for (int i = 0; i < m.n; ++i) m(i, i) = d[i];
    return m;
}

void PhiMatrix::validate() const {
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (std::fabs((*this)(i, j) - (*this)(j, i)) > 1e-13 * (1.0 + std::fabs((*this)(i, j))))
                throw std::invalid_argument("PhiMatrix: not symmetric");
    // Cholesky as the positive-definiteness test
    std::vector<double> c(a);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = c[i * n + j];
            for (int k = 0; k < j; ++k) s -= c[i * n + k] * c[j * n + k];
            if (i == j) {
                if (!(s > 0.0))
                    throw std::invalid_argument("PhiMatrix: not positive definite");
                c[i * n + j] = std::sqrt(s);
            } else {
                c[i * n + j] = s / c[j * n + j];
            }
        }
    }
}

// --- potentials --------------------------------------------------------------

double V2(const ModelParams& p, std::span<const double> y) {
    double s = 0.0;
    for (int i = 0; i < p.n(); ++i) s += p.phi[i] * p.phi[i] * y[i] * y[i];
    return 0.5 * p.L() * s;
}

double V3(const ModelParams& p, std::span<const double> y) {
    double s = 0.0;
    for (double yi : y) s += yi * yi * yi;
    return p.v3 * s;
}

double V4(const ModelParams& p, std::span<const double> y) {
    double s = 0.0;
    for (double yi : y) s += yi * yi * yi * yi;
    return p.v4 * s;
}

std::vector<double> gradV2(const ModelParams& p, std::span<const double> y) {
    std::vector<double> g(p.n());
    for (int i = 0; i < p.n(); ++i) g[i] = p.L() * p.phi[i] * p.phi[i] * y[i];
    return g;
}

std::vector<double> gradV3(const ModelParams& p, std::span<const double> y) {
    std::vector<double> g(y.size());
    for (size_t i = 0; i < y.size(); ++i) g[i] = 3.0 * p.v3 * y[i] * y[i];
    return g;
}

std::vector<double> gradV4(const ModelParams& p, std::span<const double> y) {
    std::vector<double> g(y.size());
    for (size_t i = 0; i < y.size(); ++i) g[i] = 4.0 * p.v4 * y[i] * y[i] * y[i];
    return g;
}

// --- energies -----------------------------------------------------------------

double energy_unreduced(const ModelParams& p, double a, double A, double b, double B) {
    const double w = p.omega;
    if (p.coupling == Coupling::minimal) {
        if (a == 0.0)
            throw std::domain_error("energy_unreduced: a^-2 kinetic term singular at a = 0");
        double om_term = 0.0;
        if (w != 0.0) {
            if (b == 0.0)
                throw std::domain_error("energy_unreduced: (omega/ab)^2 term singular at b = 0");
            om_term = 2.0 * (w / (a * b)) * (w / (a * b));
        }
        double a2 = a * a, a4 = a2 * a2;
        return -0.5 * (A * A + 2.0 * p.k * a2 - 2.0 * p.Lambda * a4)
             + 0.5 * (B * B / a2 + om_term + 2.0 * p.m2 * a4 * b * b);
    }
    double om_term = 0.0;
    if (w != 0.0) {
        if (b == 0.0)
            throw std::domain_error("energy_unreduced: (omega/b)^2 term singular at b = 0");
        om_term = (w / b) * (w / b);
    }
    double a2 = a * a, a4 = a2 * a2, b2 = b * b;
    return -0.5 * (A * A + p.k * a2 - p.Lambda * a4)
         + 0.5 * (B * B + p.k * b2 + om_term + 0.5 * p.lambda_self * b2 * b2 + p.m2 * a2 * b2);
}

namespace {

double h1_part(const ModelParams& p, double a, double A) {
    double a2 = a * a;
    return 0.5 * (A * A + p.k * a2 - 0.5 * p.Lambda * a2 * a2);
}

// a^4 V(b/a) evaluated through the homogeneous expansion, regular at a = 0
double potential_homog(const ModelParams& p, double a, std::span<const double> b) {
    return V4(p, b) + a * V3(p, b) + a * a * V2(p, b);
}

} // namespace

double energy_reduced(const ModelParams& p, double a, double A,
                      std::span<const double> b, std::span<const double> B) {
    double kin = 0.0;
    for (double Bi : B) kin += Bi * Bi;
    if (p.coupling == Coupling::minimal) {
        if (a == 0.0)
            throw std::domain_error("energy_reduced: a^-2 kinetic term singular at a = 0");
        double a2 = a * a;
        double V = V2(p, b) + V3(p, b) + V4(p, b);
        return -h1_part(p, a, A) + 0.5 * (kin / a2 + a2 * a2 * V);
    }
    double nb2 = 0.0;
    for (double bi : b) nb2 += bi * bi;
    return -h1_part(p, a, A) + 0.5 * (kin + p.k * nb2 + potential_homog(p, a, b));
}

double energy_desing(const ModelParams& p, const PhaseState& s) {
    double kin = 0.0;
    for (double Yi : s.W) kin += Yi * Yi;
    double H = -h1_part(p, s.u, s.U) + 0.5 * (kin + potential_homog(p, s.u, s.w));
    if (p.coupling == Coupling::conformal) {
        double ny2 = 0.0;
        for (double yi : s.w) ny2 += yi * yi;
        H += 0.5 * p.k * ny2;
    }
    return H;
}

double energy_shifted(const ModelParams& p, const PhaseState& s) {
    if (p.k != -1)
        throw std::domain_error("energy_shifted: defined for k = -1 only");
    if (p.n() != 1)
        throw std::domain_error("energy_shifted: scalar field only");
    if (p.coupling != Coupling::minimal)
        throw std::domain_error("energy_shifted: minimal coupling only");
    const double L = p.L(), sL = std::sqrt(L), ph = p.phi[0];
    const double u = s.u, U = s.U, w = s.w[0], W = s.W[0];
    const double ph32 = ph * std::sqrt(ph);
    double Hu = -0.5 * U * U - u * u - sL * u * u * u - 0.25 * L * u * u * u * u + 0.25 / L;
    double Hw = 0.5 * ph * W * W + 0.25 * ph * w * w
              + 0.5 * sL * ph * u * w * w + 0.25 * L * ph * u * u * w * w
              + 0.5 * p.v3 * w * w * w / (sL * ph32)
              + 0.5 * p.v3 * u * w * w * w / ph32
              + 0.5 * p.v4 * w * w * w * w / (ph * ph);
    return Hu + Hw;
}

// --- transformations -----------------------------------------------------------

PhaseState transform_xy(const PhaseState& ab) {
    PhaseState xy = PhaseState::zero(ab.n());
    xy.u = ab.u;        // x = a
    xy.U = ab.U;        // X = A
    for (int i = 0; i < ab.n(); ++i) {
        xy.w[i] = ab.u * ab.w[i];   // y = a b
        if (ab.W[i] == 0.0) {
            xy.W[i] = 0.0;
        } else {
            if (ab.u == 0.0)
                throw std::domain_error("transform_xy: Y = B/x undefined at x = 0");
            xy.W[i] = ab.W[i] / ab.u;   // Y = B/x
        }
    }
    return xy;
}

PhaseState transform_xy_inverse(const PhaseState& xy) {
    if (xy.u == 0.0)
        throw std::domain_error("transform_xy_inverse: b = y/x undefined at x = 0");
    PhaseState ab = PhaseState::zero(xy.n());
    ab.u = xy.u;
    ab.U = xy.U;
    for (int i = 0; i < xy.n(); ++i) {
        ab.w[i] = xy.w[i] / xy.u;
        ab.W[i] = xy.u * xy.W[i];
    }
    return ab;
}

PhaseState rescale_to_uw(const ModelParams& p, const PhaseState& xy) {
    if (!(p.epsilon > 0.0))
        throw std::domain_error("rescale_to_uw: epsilon must be positive");
    const double al = p.alpha(), se = std::sqrt(p.epsilon);
    PhaseState uw = PhaseState::zero(xy.n());
    uw.u = xy.u / al;
    uw.U = -xy.U / al;
    for (int i = 0; i < xy.n(); ++i) {
        uw.w[i] = xy.w[i] / se;
        uw.W[i] = xy.W[i] / se;
    }
    return uw;
}

PhaseState rescale_to_uw_inverse(const ModelParams& p, const PhaseState& uw) {
    if (!(p.epsilon > 0.0))
        throw std::domain_error("rescale_to_uw_inverse: epsilon must be positive");
    const double al = p.alpha(), se = std::sqrt(p.epsilon);
    PhaseState xy = PhaseState::zero(uw.n());
    xy.u = al * uw.u;
    xy.U = -al * uw.U;
    for (int i = 0; i < uw.n(); ++i) {
        xy.w[i] = se * uw.w[i];
        xy.W[i] = se * uw.W[i];
    }
    return xy;
}

PhaseState shift_elliptic(const ModelParams& p, const PhaseState& xy) {
    if (p.k != -1)
        throw std::domain_error("shift_elliptic: requires k = -1");
    if (p.n() != 1 || xy.n() != 1)
        throw std::domain_error("shift_elliptic: scalar field only");
    const double sp = std::sqrt(p.phi[0]);
    PhaseState uw = PhaseState::zero(1);
    uw.u = xy.u - p.alpha();
    uw.U = xy.U;
    uw.w[0] = xy.w[0] * sp;
    uw.W[0] = xy.W[0] / sp;
    return uw;
}

PhaseState shift_elliptic_inverse(const ModelParams& p, const PhaseState& uw) {
    if (p.k != -1)
        throw std::domain_error("shift_elliptic_inverse: requires k = -1");
    if (p.n() != 1 || uw.n() != 1)
        throw std::domain_error("shift_elliptic_inverse: scalar field only");
    const double sp = std::sqrt(p.phi[0]);
    PhaseState xy = PhaseState::zero(1);
    xy.u = p.alpha() + uw.u;
    xy.U = uw.U;
    xy.w[0] = uw.w[0] / sp;
    xy.W[0] = sp * uw.W[0];
    return xy;
}

MassSpectrum phi_from_mass(const ModelParams& p) {
    double phi_sq = 2.0 * p.m2 / p.L();
    double beta_sq = p.coupling == Coupling::minimal ? phi_sq : 2.0 + phi_sq;
    return {phi_sq, beta_sq};
}

} // namespace flrw
