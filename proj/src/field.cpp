#include "cylflow/field.hpp"

#include <cmath>

namespace cylflow {

void require_match(const ScalarField& f, const Grid& g, const char* where) {
    if (!f.matches(g))
        throw DimensionError(std::string(where) + ": field shape does not match grid");
}

Parity d_dr_parity(Parity p) {
    switch (p) {
        case Parity::even: return Parity::odd;
        case Parity::odd: return Parity::even;
        case Parity::odd2: return Parity::odd;
    }
    return Parity::even;
}

ScalarField sample(const Grid& g, Parity p, EdgeBC wall, EdgeBC lid,
                   const std::function<double(double, double)>& fn) {
    ScalarField f(g, p, wall, lid);
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i) f.at(i, j) = fn(g.r[i], g.z[j]);
    return f;
}

// Axis ghosts by parity, fitted from the two innermost cells so that the
// leading two expansion terms continue exactly:
//   even : {1, r^2}   -> plain mirror
//   odd  : {r, r^2}   -> g(-h/2) = (f1 - 6 f0)/3,   g(-3h/2) = 2 f1 - 9 f0
//   odd2 : {r^2, r^3} -> g(-h/2) = 2 f0 - f1/9,     g(-3h/2) = 27 f0 - 2 f1
static double axis_ghost(const ScalarField& f, int layer, int j) {
    const double f0 = f.at(0, j);
    const double f1 = f.nr > 1 ? f.at(1, j) : f0;
    switch (f.parity) {
        case Parity::even: return layer == 1 ? f0 : f1;
        case Parity::odd:
            return layer == 1 ? (f1 - 6.0 * f0) / 3.0 : 2.0 * f1 - 9.0 * f0;
        case Parity::odd2:
            return layer == 1 ? 2.0 * f0 - f1 / 9.0 : 27.0 * f0 - 2.0 * f1;
    }
    return 0.0;
}

// Outer-edge ghosts for derivative stencils. The zero-face-value closure uses
// the quadratic fit through the face, which keeps derivatives second order in
// the boundary ring (the plain reflection is only first order there).
static double edge_ghost(EdgeBC bc, double inner1, double inner2, int layer) {
    switch (bc) {
        case EdgeBC::dirichlet0:
            return layer == 1 ? (inner2 - 6.0 * inner1) / 3.0
                              : 2.0 * inner2 - 9.0 * inner1;
        case EdgeBC::neumann0: return layer == 1 ? inner1 : inner2;
        case EdgeBC::extrapolate:
            // quadratic continuation through the last three samples is handled
            // by one-sided stencils instead; a linear ghost keeps callers safe
            return layer == 1 ? 2.0 * inner1 - inner2 : 3.0 * inner1 - 2.0 * inner2;
    }
    return 0.0;
}

double radial_value(const ScalarField& f, int i, int j) {
    if (i >= 0 && i < f.nr) return f.at(i, j);
    if (i < 0) return axis_ghost(f, -i, j);
    const int layer = i - f.nr + 1;
    return edge_ghost(f.wall, f.at(f.nr - 1, j), f.at(f.nr - 2, j), layer);
}

double vertical_value(const ScalarField& f, int i, int j) {
    if (j >= 0 && j < f.nz) return f.at(i, j);
    if (j < 0)
        return edge_ghost(f.lid, f.at(i, 0), f.at(i, 1), -j);
    const int layer = j - f.nz + 1;
    return edge_ghost(f.lid, f.at(i, f.nz - 1), f.at(i, f.nz - 2), layer);
}

// Hull-safe ghosts for the monotone advection stencils: reflections only, so
// ghost magnitudes never exceed the adjacent interior values.
double radial_value_monotone(const ScalarField& f, int i, int j) {
    if (i >= 0 && i < f.nr) return f.at(i, j);
    if (i < 0) {
        const double mirror = f.at(-i - 1, j);
        return f.parity == Parity::even ? mirror : -mirror;
    }
    const int layer = i - f.nr + 1;
    const double mirror = f.at(f.nr - layer, j);
    return f.wall == EdgeBC::dirichlet0 ? -mirror : mirror;
}

double vertical_value_monotone(const ScalarField& f, int i, int j) {
    if (j >= 0 && j < f.nz) return f.at(i, j);
    const int layer = j < 0 ? -j : j - f.nz + 1;
    const double mirror = j < 0 ? f.at(i, layer - 1) : f.at(i, f.nz - layer);
    return f.lid == EdgeBC::dirichlet0 ? -mirror : mirror;
}

ScalarField d_dr(const ScalarField& f, const Grid& g) {
    require_match(f, g, "d_dr");
    ScalarField out(g, d_dr_parity(f.parity), EdgeBC::extrapolate, f.lid);
    const double ih2 = 1.0 / (2.0 * g.dr);
    for (int j = 0; j < g.nz; ++j) {
        for (int i = 0; i < g.nr; ++i) {
            if (i == g.nr - 1 && f.wall == EdgeBC::extrapolate) {
                out.at(i, j) = (3.0 * f.at(i, j) - 4.0 * f.at(i - 1, j) +
                                f.at(i - 2, j)) * ih2;
            } else {
                out.at(i, j) =
                    (radial_value(f, i + 1, j) - radial_value(f, i - 1, j)) * ih2;
            }
        }
    }
    return out;
}

ScalarField d_dz(const ScalarField& f, const Grid& g) {
    require_match(f, g, "d_dz");
    ScalarField out(g, f.parity, f.wall, EdgeBC::extrapolate);
    const double ih2 = 1.0 / (2.0 * g.dz);
    for (int j = 0; j < g.nz; ++j) {
        const bool lo = (j == 0), hi = (j == g.nz - 1);
        for (int i = 0; i < g.nr; ++i) {
            if (f.lid == EdgeBC::extrapolate && lo) {
                out.at(i, j) = (-3.0 * f.at(i, 0) + 4.0 * f.at(i, 1) -
                                f.at(i, 2)) * ih2;
            } else if (f.lid == EdgeBC::extrapolate && hi) {
                out.at(i, j) = (3.0 * f.at(i, j) - 4.0 * f.at(i, j - 1) +
                                f.at(i, j - 2)) * ih2;
            } else {
                out.at(i, j) =
                    (vertical_value(f, i, j + 1) - vertical_value(f, i, j - 1)) * ih2;
            }
        }
    }
    return out;
}

std::vector<double> axis_trace(const ScalarField& f, const Grid& g) {
    require_match(f, g, "axis_trace");
    std::vector<double> t(g.nz, 0.0);
    if (f.parity == Parity::even) {
        for (int j = 0; j < g.nz; ++j)
            t[j] = (9.0 * f.at(0, j) - f.at(1, j)) / 8.0;
    }
    return t;
}

std::vector<double> wall_trace(const ScalarField& f, const Grid& g) {
    require_match(f, g, "wall_trace");
    std::vector<double> t(g.nz);
    for (int j = 0; j < g.nz; ++j)
        t[j] = 1.5 * f.at(g.nr - 1, j) - 0.5 * f.at(g.nr - 2, j);
    return t;
}

void lid_traces(const ScalarField& f, const Grid& g, std::vector<double>& lo,
                std::vector<double>& hi) {
    require_match(f, g, "lid_traces");
    lo.assign(g.nr, 0.0);
    hi.assign(g.nr, 0.0);
    for (int i = 0; i < g.nr; ++i) {
        lo[i] = 1.5 * f.at(i, 0) - 0.5 * f.at(i, 1);
        hi[i] = 1.5 * f.at(i, g.nz - 1) - 0.5 * f.at(i, g.nz - 2);
    }
}

// ---------------------------------------------------------------------------
// Forcing samplers

static ScalarField zero_field(const Grid& g, Parity p) {
    return ScalarField(g, p, EdgeBC::extrapolate, EdgeBC::extrapolate, 0.0);
}

static ScalarField sample_t(const Grid& g, Parity p, const Forcing::Fn& fn,
                            double t) {
    if (!fn) return zero_field(g, p);
    ScalarField f(g, p, EdgeBC::extrapolate, EdgeBC::extrapolate);
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i) f.at(i, j) = fn(g.r[i], g.z[j], t);
    return f;
}

ScalarField Forcing::sample_fr(const Grid& g, double t) const {
    return sample_t(g, Parity::odd, fr, t);
}
ScalarField Forcing::sample_fphi(const Grid& g, double t) const {
    return sample_t(g, Parity::odd, fphi, t);
}
ScalarField Forcing::sample_fz(const Grid& g, double t) const {
    return sample_t(g, Parity::even, fz, t);
}

ScalarField Forcing::f0(const Grid& g, double t) const {
    ScalarField f = sample_fphi(g, t);
    f.parity = Parity::odd2;
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i) f.at(i, j) *= g.r[i];
    return f;
}

ScalarField Forcing::f1(const Grid& g, double t) const {
    ScalarField f = sample_fphi(g, t);
    f.parity = Parity::even;
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i) f.at(i, j) /= g.r[i];
    return f;
}

ScalarField Forcing::curl_r(const Grid& g, double t) const {
    if (Fr_analytic) return sample_t(g, Parity::odd, Fr_analytic, t);
    if (!fphi) return zero_field(g, Parity::odd);
    ScalarField d = d_dz(sample_fphi(g, t), g);
    for (double& x : d.v) x = -x;
    d.parity = Parity::odd;
    return d;
}

ScalarField Forcing::curl_phi(const Grid& g, double t) const {
    if (Fphi_analytic) return sample_t(g, Parity::odd, Fphi_analytic, t);
    ScalarField out = zero_field(g, Parity::odd);
    if (fr) {
        ScalarField d = d_dz(sample_fr(g, t), g);
        for (int n = 0; n < g.cells(); ++n) out.v[n] += d.v[n];
    }
    if (fz) {
        ScalarField d = d_dr(sample_fz(g, t), g);
        for (int n = 0; n < g.cells(); ++n) out.v[n] -= d.v[n];
    }
    return out;
}

ScalarField Forcing::curl_z(const Grid& g, double t) const {
    if (Fz_analytic) return sample_t(g, Parity::even, Fz_analytic, t);
    if (!fphi) return zero_field(g, Parity::even);
    ScalarField rf = f0(g, t);
    ScalarField d = d_dr(rf, g);
    d.parity = Parity::even;
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i) d.at(i, j) /= g.r[i];
    return d;
}

static ScalarField divide_r(ScalarField f, const Grid& g, Parity p) {
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i) f.at(i, j) /= g.r[i];
    f.parity = p;
    return f;
}

ScalarField Forcing::fbar_r(const Grid& g, double t) const {
    return divide_r(curl_r(g, t), g, Parity::even);
}
ScalarField Forcing::fbar_phi(const Grid& g, double t) const {
    return divide_r(curl_phi(g, t), g, Parity::even);
}
ScalarField Forcing::F1(const Grid& g, double t) const {
    return fbar_phi(g, t);
}

// ---------------------------------------------------------------------------
// Algebraic relations among v, omega, u, psi1

VelocityField velocity_from_stream(const ScalarField& psi1, const Grid& g) {
    require_match(psi1, g, "velocity_from_stream");
    if (psi1.parity != Parity::even)
        throw ContractError("velocity_from_stream: psi1 must carry even parity");
    VelocityField v;
    ScalarField pz = d_dz(psi1, g);
    ScalarField pr = d_dr(psi1, g);
    v.vr = ScalarField(g, Parity::odd, EdgeBC::dirichlet0, EdgeBC::neumann0);
    v.vphi = ScalarField(g, Parity::odd, EdgeBC::dirichlet0, EdgeBC::neumann0);
    v.vz = ScalarField(g, Parity::even, EdgeBC::neumann0, EdgeBC::dirichlet0);
    for (int j = 0; j < g.nz; ++j) {
        for (int i = 0; i < g.nr; ++i) {
            v.vr.at(i, j) = -g.r[i] * pz.at(i, j);
            v.vz.at(i, j) = g.r[i] * pr.at(i, j) + 2.0 * psi1.at(i, j);
        }
    }
    return v;
}

VorticityField vorticity_from_velocity(const VelocityField& v, const Grid& g) {
    require_match(v.vr, g, "vorticity_from_velocity");
    require_match(v.vphi, g, "vorticity_from_velocity");
    require_match(v.vz, g, "vorticity_from_velocity");
    VorticityField w;
    ScalarField mphz = d_dz(v.vphi, g);
    w.omega_r = ScalarField(g, Parity::odd, EdgeBC::extrapolate, EdgeBC::extrapolate);
    for (int n = 0; n < g.cells(); ++n) w.omega_r.v[n] = -mphz.v[n];
    w.omega_r.parity = Parity::odd;

    ScalarField vrz = d_dz(v.vr, g);
    ScalarField vzr = d_dr(v.vz, g);
    w.omega_phi = ScalarField(g, Parity::odd, EdgeBC::extrapolate, EdgeBC::extrapolate);
    for (int n = 0; n < g.cells(); ++n) w.omega_phi.v[n] = vrz.v[n] - vzr.v[n];

    // omega_z = (r v_phi),r / r : differentiate the even field r*v_phi
    ScalarField rvphi(g, Parity::odd2, v.vphi.wall, v.vphi.lid);
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i) rvphi.at(i, j) = g.r[i] * v.vphi.at(i, j);
    ScalarField d = d_dr(rvphi, g);
    w.omega_z = ScalarField(g, Parity::even, EdgeBC::extrapolate, EdgeBC::extrapolate);
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i) w.omega_z.at(i, j) = d.at(i, j) / g.r[i];
    return w;
}

ScalarField phi_from_swirl(const ScalarField& u, const Grid& g) {
    require_match(u, g, "phi_from_swirl");
    if (u.parity != Parity::odd2)
        throw ContractError("phi_from_swirl: u must carry odd2 parity");
    ScalarField uz = d_dz(u, g);
    ScalarField phi(g, Parity::even, EdgeBC::extrapolate, EdgeBC::extrapolate);
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i)
            phi.at(i, j) = -uz.at(i, j) / (g.r[i] * g.r[i]);
    return phi;
}

ScalarField divergence(const VelocityField& v, const Grid& g) {
    require_match(v.vr, g, "divergence");
    require_match(v.vz, g, "divergence");
    ScalarField rvr(g, Parity::even, v.vr.wall, v.vr.lid);
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i) rvr.at(i, j) = g.r[i] * v.vr.at(i, j);
    ScalarField drvr = d_dr(rvr, g);
    ScalarField vzz = d_dz(v.vz, g);
    ScalarField div(g, Parity::even, EdgeBC::extrapolate, EdgeBC::extrapolate);
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i)
            div.at(i, j) = drvr.at(i, j) / g.r[i] + vzz.at(i, j);
    return div;
}

AxisExpansionReport axis_expansion_check(const ScalarField& f, const Grid& g) {
    require_match(f, g, "axis_expansion_check");
    if (g.nr < 3)
        throw ContractError("axis_expansion_check: needs at least 3 radial samples");
    // expansion basis per parity: even {1, r^2}, odd {r, r^3}, odd2 {r^2, r^3}
    double e0 = 0.0, e1 = 0.0;
    switch (f.parity) {
        case Parity::even: e0 = 0.0; e1 = 2.0; break;
        case Parity::odd: e0 = 1.0; e1 = 3.0; break;
        case Parity::odd2: e0 = 2.0; e1 = 3.0; break;
    }
    AxisExpansionReport rep;
    rep.lead.resize(g.nz);
    rep.next.resize(g.nz);
    const double r0 = g.r[0], r1 = g.r[1], r2 = g.r[2];
    const double a00 = std::pow(r0, e0), a01 = std::pow(r0, e1);
    const double a10 = std::pow(r1, e0), a11 = std::pow(r1, e1);
    const double det = a00 * a11 - a01 * a10;
    for (int j = 0; j < g.nz; ++j) {
        const double b0 = f.at(0, j), b1 = f.at(1, j);
        const double c0 = (b0 * a11 - a01 * b1) / det;
        const double c1 = (a00 * b1 - b0 * a10) / det;
        rep.lead[j] = c0;
        rep.next[j] = c1;
        const double pred = c0 * std::pow(r2, e0) + c1 * std::pow(r2, e1);
        rep.max_residual = std::max(rep.max_residual, std::abs(pred - f.at(2, j)));
    }
    return rep;
}

}  // namespace cylflow
