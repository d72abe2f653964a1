#pragma once

#include <span>
#include <string>
#include <vector>

namespace flrw {

enum class Coupling { minimal, conformal };

/// Parameter set shared by every model variant.  m^2 is stored as a plain
/// real so tachyonic masses stay representable without complex state.
///
/// Potential convention for the rescaled models:
///   V(y) = V2(y) + V3(y) + V4(y),
///   V2(y) = (1/2) L sum_i phi_i^2 y_i^2,   L = k*Lambda > 0,
///   V3(y) = v3 sum_i y_i^3,
///   V4(y) = v4 sum_i y_i^4.
struct ModelParams {
    int k = 1;                     // curvature sign, +1 or -1
    double Lambda = 1.0;           // cosmological constant, k*Lambda > 0
    Coupling coupling = Coupling::minimal;
    double m2 = 0.0;               // squared field mass (may be negative)
    double lambda_self = 0.0;      // quartic self-excitation strength
    double omega = 0.0;            // angular momentum
    double epsilon = 0.0;          // perturbation scale, >= 0
    std::vector<double> phi{1.0};  // positive spectrum of the quadratic form
    double v3 = 0.0;               // scalar cubic coefficient
    double v4 = 0.0;               // scalar quartic coefficient

    int n() const { return static_cast<int>(phi.size()); }
    double L() const { return k * Lambda; }
    double alpha() const;          // 1/sqrt(L)
    void validate() const;         // throws std::invalid_argument

    /// JSON descriptor with keys {"k","Lambda","coupling","m2","lambda_self",
    /// "omega","epsilon","phi","v3","v4"}; unknown keys are rejected.
    static ModelParams from_json(const std::string& text);
    std::string to_json() const;
};

/// A point (or tangent vector) in the 2n+2 dimensional phase space.
struct PhaseState {
    double u = 0.0, U = 0.0;
    std::vector<double> w, W;

    PhaseState() = default;
    PhaseState(double u_, double U_, std::vector<double> w_, std::vector<double> W_);
    static PhaseState zero(int n);
    int n() const { return static_cast<int>(w.size()); }
    bool finite() const;

    /// flat view [u, U, w..., W...] used by the integrator
    std::vector<double> pack() const;
    static PhaseState unpack(std::span<const double> y, int n);
};

/// Symmetric positive-definite coupling matrix (row-major storage).
struct PhiMatrix {
    int n = 0;
    std::vector<double> a; // n*n

    PhiMatrix() = default;
    explicit PhiMatrix(int n_) : n(n_), a(n_ * n_, 0.0) {}
    double& operator()(int i, int j) { return a[i * n + j]; }
    double operator()(int i, int j) const { return a[i * n + j]; }
    static PhiMatrix diagonal(std::span<const double> d);
    void validate() const; // symmetry + positive definiteness (Cholesky)
};

// --- potentials ------------------------------------------------------------

double V2(const ModelParams& p, std::span<const double> y);
double V3(const ModelParams& p, std::span<const double> y);
double V4(const ModelParams& p, std::span<const double> y);
std::vector<double> gradV2(const ModelParams& p, std::span<const double> y);
std::vector<double> gradV3(const ModelParams& p, std::span<const double> y);
std::vector<double> gradV4(const ModelParams& p, std::span<const double> y);

// --- energies ---------------------------------------------------------------

/// Hamiltonian of the unreduced model (minimal or conformal per p.coupling),
/// with the angular-momentum terms included.  Scalar field only.
/// Throws std::domain_error naming the offending term at singular points.
double energy_unreduced(const ModelParams& p, double a, double A, double b, double B);

/// Rescaled model in the (a,A,b,B) chart: kinetic a^{-2}|B|^2 (minimal) or
/// |B|^2 + k|b|^2 (conformal), potential a^4 V(b) resp. a^4 V(b/a).
double energy_reduced(const ModelParams& p, double a, double A,
                      std::span<const double> b, std::span<const double> B);

/// The singularity-free chart (x,X,y,Y): potential V4(y)+x V3(y)+x^2 V2(y).
/// For conformal coupling the extra k/2 |y|^2 term is included.
double energy_desing(const ModelParams& p, const PhaseState& s);

/// Expansion of energy_desing around the elliptic point x = alpha of the
/// k = -1 minimal model, in the shifted/rescaled chart of shift_elliptic.
/// Includes the additive constant 1/(4L) so values match energy_desing.
double energy_shifted(const ModelParams& p, const PhaseState& s);

// --- canonical transformations ----------------------------------------------

/// (a,A,b,B) -> (x,X,y,Y):  x = a, y = a*b, X = A, Y = B/a.
PhaseState transform_xy(const PhaseState& ab);
/// Inverse chart map; requires x != 0.
PhaseState transform_xy_inverse(const PhaseState& xy);

/// (x,X,y,Y) -> (u,U,w,W):  x = alpha u, X = -alpha U, y = sqrt(eps) w,
/// Y = sqrt(eps) W.  Requires epsilon > 0.
PhaseState rescale_to_uw(const ModelParams& p, const PhaseState& xy);
PhaseState rescale_to_uw_inverse(const ModelParams& p, const PhaseState& uw);

/// Shift to the elliptic point of the k = -1 scalar model:
/// x = alpha + u, X = U, y = w/sqrt(phi), Y = sqrt(phi) W.
PhaseState shift_elliptic(const ModelParams& p, const PhaseState& xy);
PhaseState shift_elliptic_inverse(const ModelParams& p, const PhaseState& uw);

/// Mass-to-spectrum map pinned by the conformal anchors
/// (m^2 = -Lambda <-> beta = 0, m = 0 <-> beta = sqrt(2)):
///   phi^2 = 2 m^2 / (k Lambda),  beta^2 = phi^2 (minimal),
///   beta^2 = 2 + phi^2 (conformal).
struct MassSpectrum {
    double phi_sq;
    double beta_sq;
};
MassSpectrum phi_from_mass(const ModelParams& p);

} // namespace flrw
