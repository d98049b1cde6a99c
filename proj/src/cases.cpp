#include "cylflow/cases.hpp"

#include <cmath>
#include <memory>
#include <numbers>

#include "cylflow/certificates.hpp"

namespace cylflow {

namespace {

constexpr double kPi = std::numbers::pi;

double simpson0(double upper, int panels,
                const std::function<double(double)>& fn) {
    if (upper == 0.0) return 0.0;
    const int n = panels % 2 == 0 ? panels : panels + 1;
    const double h = upper / n;
    double acc = fn(0.0) + fn(upper);
    for (int k = 1; k < n; ++k) acc += fn(k * h) * (k % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// Separable manufactured trajectory:
//   psi1 = Apsi e^-t (1-s)^3 cos(kz),            s = (r/R)^2, k = pi/(2a)
//   u    = Au   e^-t s(1-s)^2 cos(qz),           q = pi/a
// Gamma is the elliptic image of psi1, so the pair satisfies the stream
// problem identically; the forcing absorbs the evolution residuals.
struct Manufactured {
    double R, a, nu, Apsi, Au;
    double k, q;

    Manufactured(double R_, double a_, double nu_, double Apsi_, double Au_)
        : R(R_), a(a_), nu(nu_), Apsi(Apsi_), Au(Au_), k(kPi / (2.0 * a_)),
          q(kPi / a_) {}

    double s_of(double r) const { return (r / R) * (r / R); }

    double psi1(double r, double z, double t) const {
        const double s = s_of(r);
        return Apsi * std::exp(-t) * std::pow(1.0 - s, 3) * std::cos(k * z);
    }
    double gamma_radial(double s) const {
        return k * k * std::pow(1.0 - s, 3) +
               24.0 * (1.0 - s) * (1.0 - 2.0 * s) / (R * R);
    }
    double gamma(double r, double z, double t) const {
        return Apsi * std::exp(-t) * gamma_radial(s_of(r)) * std::cos(k * z);
    }
    double vr(double r, double z, double t) const {
        const double s = s_of(r);
        return Apsi * std::exp(-t) * k * r * std::pow(1.0 - s, 3) *
               std::sin(k * z);
    }
    double vz(double r, double z, double t) const {
        const double s = s_of(r);
        return 2.0 * Apsi * std::exp(-t) * std::cos(k * z) *
               (1.0 - s) * (1.0 - s) * (1.0 - 4.0 * s);
    }
    double u(double r, double z, double t) const {
        const double s = s_of(r);
        return Au * std::exp(-t) * s * (1.0 - s) * (1.0 - s) * std::cos(q * z);
    }
    double u_r(double r, double z, double t) const {
        const double s = s_of(r);
        const double wprime = (1.0 - s) * (1.0 - 3.0 * s);
        return Au * std::exp(-t) * std::cos(q * z) * wprime * 2.0 * r / (R * R);
    }
    double u_z(double r, double z, double t) const {
        const double s = s_of(r);
        return -q * Au * std::exp(-t) * s * (1.0 - s) * (1.0 - s) *
               std::sin(q * z);
    }
    double phi(double r, double z, double t) const {
        const double s = s_of(r);
        return q * Au * std::exp(-t) * (1.0 - s) * (1.0 - s) * std::sin(q * z) /
               (R * R);
    }
    // swirl diffusion u_rr - u_r/r + u_zz
    double swirl_diffusion(double r, double z, double t) const {
        const double s = s_of(r);
        const double radial = 8.0 * s * (3.0 * s - 2.0) / (R * R);
        return Au * std::exp(-t) * std::cos(q * z) * radial - q * q * u(r, z, t);
    }
    double f0(double r, double z, double t) const {
        return -u(r, z, t) + vr(r, z, t) * u_r(r, z, t) +
               vz(r, z, t) * u_z(r, z, t) - nu * swirl_diffusion(r, z, t);
    }
    // Gamma equation pieces
    double gamma_r(double r, double z, double t) const {
        const double s = s_of(r);
        const double gprime = -3.0 * k * k * (1.0 - s) * (1.0 - s) +
                              24.0 * (4.0 * s - 3.0) / (R * R);
        return Apsi * std::exp(-t) * std::cos(k * z) * gprime * 2.0 * r / (R * R);
    }
    double gamma_diffusion(double r, double z, double t) const {
        // Gamma_rr + 3 Gamma_r / r + Gamma_zz
        const double s = s_of(r);
        const double gprime = -3.0 * k * k * (1.0 - s) * (1.0 - s) +
                              24.0 * (4.0 * s - 3.0) / (R * R);
        const double gsecond = 6.0 * k * k * (1.0 - s) + 96.0 / (R * R);
        const double radial = (4.0 * s * gsecond + 8.0 * gprime) / (R * R);
        return Apsi * std::exp(-t) * std::cos(k * z) * radial -
               k * k * gamma(r, z, t);
    }
    double gamma_z(double r, double z, double t) const {
        return -k * Apsi * std::exp(-t) * gamma_radial(s_of(r)) * std::sin(k * z);
    }
    double fbar_phi(double r, double z, double t) const {
        const double vphi_over_r = u(r, z, t) / (r * r);
        return -gamma(r, z, t) + vr(r, z, t) * gamma_r(r, z, t) +
               vz(r, z, t) * gamma_z(r, z, t) -
               nu * gamma_diffusion(r, z, t) +
               2.0 * vphi_over_r * phi(r, z, t);
    }
};

std::function<double(double, double)> swirl_shape(double R, double a,
                                                  double amp) {
    return [R, a, amp](double r, double z) {
        const double rad = r * r * (R - r) * (R - r) / (R * R * R * R);
        const double c = std::cos(kPi * z / (2.0 * a));
        return amp * rad * c * c;
    };
}

}  // namespace

ScalarField Scenario::initial_u(const Grid& g) const {
    ScalarField f(g, Parity::odd2, EdgeBC::dirichlet0, EdgeBC::neumann0);
    if (u0)
        for (int j = 0; j < g.nz; ++j)
            for (int i = 0; i < g.nr; ++i) f.at(i, j) = u0(g.r[i], g.z[j]);
    return f;
}

ScalarField Scenario::initial_gamma(const Grid& g) const {
    ScalarField f(g, Parity::even, EdgeBC::dirichlet0, EdgeBC::dirichlet0);
    if (gamma0)
        for (int j = 0; j < g.nz; ++j)
            for (int i = 0; i < g.nr; ++i) f.at(i, j) = gamma0(g.r[i], g.z[j]);
    return f;
}

std::vector<std::string> scenario_names() {
    return {"rest", "swirl_decay", "vortex_ring", "manufactured_full",
            "small_data"};
}

static Scenario make_small_data(double R, double a, double nu);

Scenario builtin_scenario(const std::string& name, double R, double a,
                          double nu) {
    Scenario sc;
    sc.name = name;
    sc.R = R;
    sc.a = a;
    sc.nu = nu;
    if (name == "rest") {
        return sc;
    }
    if (name == "swirl_decay") {
        sc.u0 = swirl_shape(R, a, 1.0);
        return sc;
    }
    if (name == "vortex_ring") {
        const double rc = 0.45 * R, wr = 0.3 * R, wz = 0.5 * a;
        sc.gamma0 = [rc, wr, wz](double r, double z) {
            const double rho2 = ((r - rc) / wr) * ((r - rc) / wr) +
                                (z / wz) * (z / wz);
            if (rho2 >= 1.0) return 0.0;
            const double q = 1.0 - rho2;
            return q * q * q * q;
        };
        return sc;
    }
    if (name == "manufactured_full") {
        auto m = std::make_shared<Manufactured>(R, a, nu, 0.4, 0.5);
        sc.u0 = [m](double r, double z) { return m->u(r, z, 0.0); };
        sc.gamma0 = [m](double r, double z) { return m->gamma(r, z, 0.0); };
        sc.exact_u = [m](double r, double z, double t) { return m->u(r, z, t); };
        sc.exact_gamma = [m](double r, double z, double t) {
            return m->gamma(r, z, t);
        };
        sc.has_exact = true;
        sc.forcing.fphi = [m](double r, double z, double t) {
            return m->f0(r, z, t) / r;
        };
        sc.forcing.Fphi_analytic = [m](double r, double z, double t) {
            return r * m->fbar_phi(r, z, t);
        };
        // f_z reproducing the azimuthal curl component (f_r stays zero):
        // f_z(r) = -int_0^r rho Fbar_phi(rho) drho
        sc.forcing.fz = [m](double r, double z, double t) {
            return -simpson0(r, 64, [&](double rho) {
                return rho > 0.0 ? rho * m->fbar_phi(rho, z, t) : 0.0;
            });
        };
        return sc;
    }
    if (name == "small_data") {
        return make_small_data(R, a, nu);
    }
    std::string msg = "unknown scenario '" + name + "'; available:";
    for (const std::string& n : scenario_names()) msg += " " + n;
    throw ConfigError(msg);
}

static Scenario make_small_data(double R, double a, double nu) {
    Scenario sc;
    sc.name = "small_data";
    sc.R = R;
    sc.a = a;
    sc.nu = nu;

    // Pick the amplitude by bisection so the smallness restriction
    // G2 <= 1/(kappa+1)^(3/2) holds with a 10% safety margin.
    Grid ref = make_grid(R, a, 48, 48);
    auto excess = [&](double amp) {
        Scenario probe;
        probe.R = R;
        probe.a = a;
        probe.u0 = swirl_shape(R, a, amp);
        State st = make_state(probe.initial_u(ref), probe.initial_gamma(ref), ref);
        DataConstants dc = data_constants(st, Forcing{}, ref, 1.0, nu);
        const double kappa = dc.D1 * dc.D1 + dc.D8_sq;
        return dc.G2 * std::pow(kappa + 1.0, 1.5) - 1.0;
    };
    double lo = 0.0, hi = 1.0;
    while (excess(hi) < 0.0 && hi < 1e6) hi *= 2.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) < 0.0 ? lo : hi) = mid;
    }
    const double amp = 0.9 * lo;
    if (!(amp > 0.0) || excess(amp) >= 0.0)
        throw NumericalError("small_data: amplitude fit failed");
    sc.amplitude = amp;
    sc.u0 = swirl_shape(R, a, amp);
    return sc;
}

RunResult run_scenario(const Scenario& sc, const SimConfig& cfg) {
    Grid g = make_grid(cfg.R, cfg.a, cfg.Nr, cfg.Nz);
    return run(cfg, sc.initial_u(g), sc.initial_gamma(g), sc.forcing);
}

CompatibilityReport check_scenario(const Scenario& sc, const Grid& g) {
    CompatibilityReport rep;
    ScalarField u0 = sc.initial_u(g);
    ScalarField g0 = sc.initial_gamma(g);
    for (double v : wall_trace(u0, g)) rep.u_wall = std::max(rep.u_wall, std::abs(v));
    {
        ScalarField uz = d_dz(u0, g);
        std::vector<double> lo, hi;
        lid_traces(uz, g, lo, hi);
        for (int i = 0; i < g.nr; ++i)
            rep.uz_lid = std::max({rep.uz_lid, std::abs(lo[i]), std::abs(hi[i])});
        for (double v : wall_trace(g0, g))
            rep.gamma_boundary = std::max(rep.gamma_boundary, std::abs(v));
        lid_traces(g0, g, lo, hi);
        for (int i = 0; i < g.nr; ++i)
            rep.gamma_boundary =
                std::max({rep.gamma_boundary, std::abs(lo[i]), std::abs(hi[i])});
    }
    // analytic builders evaluated on the boundary itself
    const double eps = 1e-6 * g.a;
    for (int j = 0; j < g.nz; ++j) {
        if (sc.u0)
            rep.u_wall_exact =
                std::max(rep.u_wall_exact, std::abs(sc.u0(g.R, g.z[j])));
        if (sc.gamma0)
            rep.gamma_boundary_exact = std::max(
                rep.gamma_boundary_exact, std::abs(sc.gamma0(g.R, g.z[j])));
    }
    for (int i = 0; i < g.nr; ++i) {
        for (double zb : {-g.a, g.a}) {
            if (sc.u0) {
                const double dz =
                    (sc.u0(g.r[i], zb + eps) - sc.u0(g.r[i], zb - eps)) /
                    (2.0 * eps);
                rep.uz_lid_exact = std::max(rep.uz_lid_exact, std::abs(dz));
            }
            if (sc.gamma0)
                rep.gamma_boundary_exact = std::max(
                    rep.gamma_boundary_exact, std::abs(sc.gamma0(g.r[i], zb)));
        }
    }
    if (sc.has_exact) {
        // residual of the evolution equations on the exact data, formed with
        // the composed derivative stencils (second order up to the boundary);
        // the manufactured trajectory decays as e^-t, so du/dt = -u at t=0
        State st = make_state(u0, g0, g);
        ScalarField adv_u = advect(st.u, st.v, g, AdvectionScheme::centered);
        ScalarField adv_g = advect(st.gamma, st.v, g, AdvectionScheme::centered);
        ScalarField ur = d_dr(st.u, g);
        ScalarField urr = d_dr(ur, g);
        ScalarField uzz = d_dz(d_dz(st.u, g), g);
        ScalarField gr = d_dr(st.gamma, g);
        ScalarField grr = d_dr(gr, g);
        ScalarField gzz = d_dz(d_dz(st.gamma, g), g);
        ScalarField f0 = sc.forcing.f0(g, 0.0);
        ScalarField fb = sc.forcing.fbar_phi(g, 0.0);
        ScalarField res_u(g, Parity::even, EdgeBC::extrapolate, EdgeBC::extrapolate);
        ScalarField res_g = res_u;
        for (int j = 0; j < g.nz; ++j)
            for (int i = 0; i < g.nr; ++i) {
                const double r = g.r[i];
                const double diff_u =
                    urr.at(i, j) - ur.at(i, j) / r + uzz.at(i, j);
                const double du_dt = -sc.exact_u(r, g.z[j], 0.0);
                res_u.at(i, j) = du_dt + adv_u.at(i, j) - sc.nu * diff_u -
                                 f0.at(i, j);
                const double diff_g =
                    grr.at(i, j) + 3.0 * gr.at(i, j) / r + gzz.at(i, j);
                const double swirl_term = 2.0 * st.u.at(i, j) / (r * r) *
                                          st.phi.at(i, j);
                const double dg_dt = -sc.exact_gamma(r, g.z[j], 0.0);
                res_g.at(i, j) = dg_dt + adv_g.at(i, j) - sc.nu * diff_g +
                                 swirl_term - fb.at(i, j);
            }
        rep.mms_residual_u = lp_norm(res_u, 2.0, g);
        rep.mms_residual_gamma = lp_norm(res_g, 2.0, g);
    }
    return rep;
}

ConvergenceReport convergence_study(const Scenario& sc,
                                    const std::vector<int>& resolutions,
                                    SimConfig base) {
    if (!sc.has_exact)
        throw ContractError("convergence_study: scenario has no exact solution");
    if (resolutions.size() < 3)
        throw ContractError("convergence_study: need at least 3 resolutions");
    ConvergenceReport rep;
    rep.resolutions = resolutions;
    const double dt0 = base.dt;
    const int res0 = resolutions.front();
    for (int res : resolutions) {
        SimConfig cfg = base;
        cfg.Nr = res;
        cfg.Nz = res;
        cfg.dt = dt0 * res0 / res;
        RunResult rr = run_scenario(sc, cfg);
        if (!rr.completed)
            throw NumericalError("convergence_study: run failed at t=" +
                                 std::to_string(rr.fail_time));
        const Grid& g = rr.grid;
        const State& last = rr.series.snaps.back();
        ScalarField eu(g, Parity::even, EdgeBC::extrapolate, EdgeBC::extrapolate);
        ScalarField eg = eu;
        for (int j = 0; j < g.nz; ++j)
            for (int i = 0; i < g.nr; ++i) {
                eu.at(i, j) = last.u.at(i, j) - sc.exact_u(g.r[i], g.z[j], last.t);
                eg.at(i, j) =
                    last.gamma.at(i, j) - sc.exact_gamma(g.r[i], g.z[j], last.t);
            }
        rep.err_u.push_back(lp_norm(eu, 2.0, g));
        rep.err_gamma.push_back(lp_norm(eg, 2.0, g));
    }
    auto fit_order = [&](const std::vector<double>& err) {
        // least-squares slope of log err against log h (h ~ 1/res)
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int n = static_cast<int>(err.size());
        for (int i = 0; i < n; ++i) {
            const double x = std::log(1.0 / resolutions[i]);
            const double y = std::log(std::max(err[i], 1e-300));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    rep.order_u = fit_order(rep.err_u);
    rep.order_gamma = fit_order(rep.err_gamma);
    return rep;
}

}  // namespace cylflow
