#pragma once

#include <functional>
#include <vector>

#include "cylflow/grid.hpp"

namespace cylflow {

/// Behavior of an axisymmetric scalar as r -> 0:
///   even : f = c0 + c2 r^2 + ...   (true scalars: v_z, psi1, Gamma, Phi)
///   odd  : f = c1 r + c3 r^3 + ... (vector components: v_r, v_phi, psi)
///   odd2 : f = c2 r^2 + c3 r^3 + ... (the swirl u = r v_phi)
enum class Parity { even, odd, odd2 };

/// Closure used at the outer edges (r = R wall, z = +-a lids) when a stencil
/// reaches outside the domain.
enum class EdgeBC {
    dirichlet0,   // boundary face value 0: ghost = -mirror
    neumann0,     // zero normal derivative: ghost = mirror
    extrapolate,  // no boundary information: one-sided stencils
};

Parity d_dr_parity(Parity p);

/// Scalar samples at cell centers plus the closure metadata the finite
/// difference operators need. The axis side is always closed by parity.
struct ScalarField {
    int nr = 0, nz = 0;
    Parity parity = Parity::even;
    EdgeBC wall = EdgeBC::extrapolate;
    EdgeBC lid = EdgeBC::extrapolate;
    std::vector<double> v;

    ScalarField() = default;
    ScalarField(const Grid& g, Parity p, EdgeBC wall_bc, EdgeBC lid_bc,
                double fill = 0.0)
        : nr(g.nr), nz(g.nz), parity(p), wall(wall_bc), lid(lid_bc),
          v(static_cast<size_t>(g.nr) * g.nz, fill) {}

    double& at(int i, int j) { return v[static_cast<size_t>(j) * nr + i]; }
    double at(int i, int j) const { return v[static_cast<size_t>(j) * nr + i]; }
    bool matches(const Grid& g) const { return nr == g.nr && nz == g.nz; }
};

void require_match(const ScalarField& f, const Grid& g, const char* where);

/// Sample an analytic function at cell centers.
ScalarField sample(const Grid& g, Parity p, EdgeBC wall, EdgeBC lid,
                   const std::function<double(double, double)>& fn);

/// Value at radial index i in [-2, nr+1] for row j; indices outside [0,nr)
/// are ghost values filled from parity (axis side) or the wall closure.
double radial_value(const ScalarField& f, int i, int j);
/// Value at vertical index j in [-2, nz+1] for column i; lid closure.
double vertical_value(const ScalarField& f, int i, int j);
/// Reflection-only ghost variants whose magnitude never exceeds the mirrored
/// interior value (used by the monotone advection stencils).
double radial_value_monotone(const ScalarField& f, int i, int j);
double vertical_value_monotone(const ScalarField& f, int i, int j);

/// Centered second-order d/dr; result parity flips (even<->odd, odd2->odd).
/// Result edge closures default to extrapolate.
ScalarField d_dr(const ScalarField& f, const Grid& g);
/// Centered second-order d/dz; parity preserved.
ScalarField d_dz(const ScalarField& f, const Grid& g);

/// Second-order extrapolation of the field to the axis r = 0 (per row).
/// Odd and odd2 fields extrapolate to zero by definition.
std::vector<double> axis_trace(const ScalarField& f, const Grid& g);
/// Second-order one-sided extrapolation to the wall r = R (per row).
std::vector<double> wall_trace(const ScalarField& f, const Grid& g);
/// Extrapolation to the lids z = -a (lo) and z = +a (hi), per column.
void lid_traces(const ScalarField& f, const Grid& g, std::vector<double>& lo,
                std::vector<double>& hi);

struct VelocityField {
    ScalarField vr, vphi, vz;
};

struct VorticityField {
    ScalarField omega_r, omega_phi, omega_z;
};

/// One time level of the evolved system: swirl u, rescaled azimuthal
/// vorticity Gamma, modified stream function psi1, reconstructed velocity,
/// and Phi = -u_,z / r^2.
struct State {
    double t = 0.0;
    ScalarField u, gamma, psi1;
    VelocityField v;
    ScalarField phi;
};

/// Time-dependent body force (f_r, f_phi, f_z) given as analytic component
/// functions of (r, z, t); unset components are identically zero. Curl
/// components may be supplied analytically, otherwise they are formed by
/// discrete differentiation of the sampled components.
struct Forcing {
    using Fn = std::function<double(double r, double z, double t)>;
    Fn fr, fphi, fz;
    Fn Fr_analytic, Fphi_analytic, Fz_analytic;

    bool is_zero() const { return !fr && !fphi && !fz; }

    ScalarField sample_fr(const Grid& g, double t) const;
    ScalarField sample_fphi(const Grid& g, double t) const;
    ScalarField sample_fz(const Grid& g, double t) const;
    ScalarField f0(const Grid& g, double t) const;        // r f_phi
    ScalarField f1(const Grid& g, double t) const;        // f_phi / r
    ScalarField curl_r(const Grid& g, double t) const;    // -f_phi,z
    ScalarField curl_phi(const Grid& g, double t) const;  // f_r,z - f_z,r
    ScalarField curl_z(const Grid& g, double t) const;    // (r f_phi),r / r
    ScalarField fbar_r(const Grid& g, double t) const;    // curl_r / r
    ScalarField fbar_phi(const Grid& g, double t) const;  // curl_phi / r
    ScalarField F1(const Grid& g, double t) const;        // curl_phi / r (swirl-scaled)
};

/// Meridional velocity from the modified stream function:
/// v_r = -r psi1_,z ; v_z = r psi1_,r + 2 psi1 ; v_phi left zero.
VelocityField velocity_from_stream(const ScalarField& psi1, const Grid& g);

/// omega_r = -v_phi,z ; omega_phi = v_r,z - v_z,r ; omega_z = (r v_phi),r / r.
VorticityField vorticity_from_velocity(const VelocityField& v, const Grid& g);

/// Phi = -u_,z / r^2 (finite at the axis for odd2 u).
ScalarField phi_from_swirl(const ScalarField& u, const Grid& g);

/// (r v_r),r / r + v_z,z.
ScalarField divergence(const VelocityField& v, const Grid& g);

/// Least-squares fit of the first two coefficients of the tagged parity
/// expansion from the two innermost radial samples; the residual is the
/// prediction error at the third sample.
struct AxisExpansionReport {
    std::vector<double> lead;   // per z-row leading coefficient
    std::vector<double> next;   // per z-row second coefficient
    double max_residual = 0.0;  // max over rows of |f(r2) - fit(r2)|
};
AxisExpansionReport axis_expansion_check(const ScalarField& f, const Grid& g);

}  // namespace cylflow
