#include "cylflow/dynamics.hpp"

#include <cmath>

namespace cylflow {

namespace {

ScalarField make_u_field(const Grid& g) {
    return ScalarField(g, Parity::odd2, EdgeBC::dirichlet0, EdgeBC::neumann0);
}
ScalarField make_gamma_field(const Grid& g) {
    return ScalarField(g, Parity::even, EdgeBC::dirichlet0, EdgeBC::dirichlet0);
}

double minmod(double x, double y) {
    if (x * y <= 0.0) return 0.0;
    return std::abs(x) < std::abs(y) ? x : y;
}

}  // namespace

double courant_number(const State& s, const Grid& g, double dt) {
    double c = 0.0;
    for (int n = 0; n < g.cells(); ++n) {
        const double local = std::abs(s.v.vr.v[n]) / g.dr +
                             std::abs(s.v.vz.v[n]) / g.dz;
        c = std::max(c, local);
    }
    return c * dt;
}

State make_state(const ScalarField& u0, const ScalarField& gamma0,
                 const Grid& g, double t) {
    require_match(u0, g, "make_state");
    require_match(gamma0, g, "make_state");
    State s;
    s.t = t;
    s.u = u0;
    s.u.parity = Parity::odd2;
    s.u.wall = EdgeBC::dirichlet0;
    s.u.lid = EdgeBC::neumann0;
    s.gamma = gamma0;
    s.gamma.parity = Parity::even;
    s.gamma.wall = EdgeBC::dirichlet0;
    s.gamma.lid = EdgeBC::dirichlet0;
    s.psi1 = solve_modified_stream(s.gamma, g);
    s.v = velocity_from_stream(s.psi1, g);
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i)
            s.v.vphi.at(i, j) = s.u.at(i, j) / g.r[i];
    s.phi = phi_from_swirl(s.u, g);
    return s;
}

ScalarField advect(const ScalarField& f, const VelocityField& v, const Grid& g,
                   AdvectionScheme scheme) {
    require_match(f, g, "advect");
    ScalarField out(g, Parity::even, EdgeBC::extrapolate, EdgeBC::extrapolate);
    out.parity = f.parity;
    const double idr = 1.0 / g.dr, idz = 1.0 / g.dz;

    const bool centered = scheme == AdvectionScheme::centered;
    auto rv = [&](int i, int j) {
        return centered ? radial_value(f, i, j) : radial_value_monotone(f, i, j);
    };
    auto zv = [&](int i, int j) {
        return centered ? vertical_value(f, i, j) : vertical_value_monotone(f, i, j);
    };

    for (int j = 0; j < g.nz; ++j) {
        for (int i = 0; i < g.nr; ++i) {
            const double vr = v.vr.at(i, j), vz = v.vz.at(i, j);
            double dfr, dfz;
            if (scheme == AdvectionScheme::centered) {
                dfr = (rv(i + 1, j) - rv(i - 1, j)) * 0.5 * idr;
                dfz = (zv(i, j + 1) - zv(i, j - 1)) * 0.5 * idz;
            } else {
                // slope-limited second-order upwind; face states from the
                // upwind side keep the update monotone under the CFL bound
                auto slope_r = [&](int ii) {
                    return minmod(rv(ii + 1, j) - rv(ii, j),
                                  rv(ii, j) - rv(ii - 1, j));
                };
                auto slope_z = [&](int jj) {
                    return minmod(zv(i, jj + 1) - zv(i, jj),
                                  zv(i, jj) - zv(i, jj - 1));
                };
                if (vr >= 0.0) {
                    const double hi = rv(i, j) + 0.5 * slope_r(i);
                    const double lo = rv(i - 1, j) + 0.5 * slope_r(i - 1);
                    dfr = (hi - lo) * idr;
                } else {
                    const double hi = rv(i + 1, j) - 0.5 * slope_r(i + 1);
                    const double lo = rv(i, j) - 0.5 * slope_r(i);
                    dfr = (hi - lo) * idr;
                }
                if (vz >= 0.0) {
                    const double hi = zv(i, j) + 0.5 * slope_z(j);
                    const double lo = zv(i, j - 1) + 0.5 * slope_z(j - 1);
                    dfz = (hi - lo) * idz;
                } else {
                    const double hi = zv(i, j + 1) - 0.5 * slope_z(j + 1);
                    const double lo = zv(i, j) - 0.5 * slope_z(j);
                    dfz = (hi - lo) * idz;
                }
            }
            out.at(i, j) = vr * dfr + vz * dfz;
        }
    }
    return out;
}

ScalarField rhs_swirl(const State& s, const Forcing& f, const Grid& g, double nu) {
    RadialFluxOp op(-1.0, g, EdgeBC::dirichlet0, EdgeBC::neumann0);
    std::vector<double> lap;
    op.apply(s.u.v, lap);
    ScalarField adv = advect(s.u, s.v, g, AdvectionScheme::centered);
    ScalarField f0 = f.f0(g, s.t);
    ScalarField out = make_u_field(g);
    for (int n = 0; n < g.cells(); ++n)
        out.v[n] = -adv.v[n] + nu * lap[n] + f0.v[n];
    return out;
}

ScalarField rhs_gamma(const State& s, const Forcing& f, const Grid& g, double nu) {
    RadialFluxOp op(3.0, g, EdgeBC::dirichlet0, EdgeBC::dirichlet0);
    std::vector<double> lap;
    op.apply(s.gamma.v, lap);
    ScalarField adv = advect(s.gamma, s.v, g, AdvectionScheme::centered);
    ScalarField fb = f.fbar_phi(g, s.t);
    ScalarField out = make_gamma_field(g);
    for (int j = 0; j < g.nz; ++j) {
        for (int i = 0; i < g.nr; ++i) {
            const int n = g.idx(i, j);
            const double swirl_term =
                2.0 * s.u.at(i, j) / (g.r[i] * g.r[i]) * s.phi.at(i, j);
            out.v[n] = -adv.v[n] + nu * lap[n] - swirl_term + fb.v[n];
        }
    }
    return out;
}

ScalarField rhs_phi_diagnostic(const State& s, const Forcing& f, const Grid& g,
                               double nu) {
    // diffusion via composed derivative stencils (uniformly second order;
    // this field never enters a solve, so monotone structure is not needed)
    ScalarField phi = s.phi;
    phi.wall = EdgeBC::dirichlet0;
    phi.lid = EdgeBC::dirichlet0;
    ScalarField pr = d_dr(phi, g);
    ScalarField prr = d_dr(pr, g);
    ScalarField pzz = d_dz(d_dz(phi, g), g);
    std::vector<double> lap(g.cells());
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i)
            lap[g.idx(i, j)] =
                prr.at(i, j) + 3.0 * pr.at(i, j) / g.r[i] + pzz.at(i, j);
    ScalarField adv = advect(phi, s.v, g, AdvectionScheme::centered);

    // vortex stretching (omega_r d_r + omega_z d_z)(v_r / r)
    ScalarField uz = d_dz(s.u, g);
    ScalarField ur = d_dr(s.u, g);
    ScalarField vr_over_r(g, Parity::even, EdgeBC::extrapolate, EdgeBC::neumann0);
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i)
            vr_over_r.at(i, j) = s.v.vr.at(i, j) / g.r[i];
    ScalarField qr = d_dr(vr_over_r, g);
    ScalarField qz = d_dz(vr_over_r, g);

    ScalarField fbr = f.fbar_r(g, s.t);
    ScalarField out(g, Parity::even, EdgeBC::extrapolate, EdgeBC::extrapolate);
    for (int j = 0; j < g.nz; ++j) {
        for (int i = 0; i < g.nr; ++i) {
            const int n = g.idx(i, j);
            const double wr = -uz.at(i, j) / g.r[i];
            const double wz = ur.at(i, j) / g.r[i];
            out.v[n] = -adv.v[n] + nu * lap[n] +
                       wr * qr.at(i, j) + wz * qz.at(i, j) + fbr.v[n];
        }
    }
    return out;
}

namespace {

struct StageOps {
    RadialFluxOp swirl_op;
    RadialFluxOp gamma_op;
    StageOps(const Grid& g)
        : swirl_op(-1.0, g, EdgeBC::dirichlet0, EdgeBC::neumann0),
          gamma_op(3.0, g, EdgeBC::dirichlet0, EdgeBC::dirichlet0) {}
};

struct ExplicitTerms {
    std::vector<double> du;      // -v.grad u + f0
    std::vector<double> dgamma;  // -v.grad Gamma - 2(vphi/r)Phi + Fbar_phi
};

ExplicitTerms explicit_terms(const State& s, const Forcing& f, const Grid& g,
                             AdvectionScheme adv_scheme) {
    ExplicitTerms e;
    e.du.resize(g.cells());
    e.dgamma.resize(g.cells());
    ScalarField adv_u = advect(s.u, s.v, g, adv_scheme);
    ScalarField adv_g = advect(s.gamma, s.v, g, adv_scheme);
    ScalarField f0 = f.f0(g, s.t);
    ScalarField fb = f.fbar_phi(g, s.t);
    for (int j = 0; j < g.nz; ++j) {
        for (int i = 0; i < g.nr; ++i) {
            const int n = g.idx(i, j);
            e.du[n] = -adv_u.v[n] + f0.v[n];
            const double swirl_term =
                2.0 * s.u.at(i, j) / (g.r[i] * g.r[i]) * s.phi.at(i, j);
            e.dgamma[n] = -adv_g.v[n] - swirl_term + fb.v[n];
        }
    }
    return e;
}

State assemble(const Grid& g, double t, std::vector<double> u_new,
               std::vector<double> gamma_new, SolveInfo* ell_info) {
    ScalarField u = make_u_field(g);
    u.v = std::move(u_new);
    ScalarField gamma = make_gamma_field(g);
    gamma.v = std::move(gamma_new);
    State s;
    s.t = t;
    s.u = std::move(u);
    s.gamma = std::move(gamma);
    s.psi1 = solve_modified_stream(s.gamma, g, ell_info);
    s.v = velocity_from_stream(s.psi1, g);
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i)
            s.v.vphi.at(i, j) = s.u.at(i, j) / g.r[i];
    s.phi = phi_from_swirl(s.u, g);
    return s;
}

// diffuse implicitly: (I - tau*nu*L) x = rhs; identity when nu*tau == 0
std::vector<double> implicit_diffuse(const RadialFluxOp& op,
                                     const std::vector<double>& rhs, double tau,
                                     double nu) {
    if (tau * nu == 0.0) return rhs;
    ShiftedSolver solver(op, 1.0, tau * nu);
    return solver.solve(rhs, nullptr, 1e-12);
}

}  // namespace

std::pair<State, StepReport> step(const State& s, const Forcing& f,
                                  const SimConfig& cfg, const Grid& g) {
    const double dt = cfg.dt;
    const double cfl = courant_number(s, g, dt);
    if (cfl > cfg.cfl_safety)
        throw NumericalError("advective CFL " + std::to_string(cfl) +
                                 " exceeds safety factor " +
                                 std::to_string(cfg.cfl_safety),
                             s.t);

    StageOps ops(g);
    SolveInfo ell_info;
    State next;

    if (cfg.scheme == Scheme::imex1) {
        ExplicitTerms e = explicit_terms(s, f, g, cfg.advection);
        std::vector<double> ru(g.cells()), rg(g.cells());
        for (int n = 0; n < g.cells(); ++n) {
            ru[n] = s.u.v[n] + dt * e.du[n];
            rg[n] = s.gamma.v[n] + dt * e.dgamma[n];
        }
        std::vector<double> u_new = implicit_diffuse(ops.swirl_op, ru, dt, cfg.nu);
        std::vector<double> g_new = implicit_diffuse(ops.gamma_op, rg, dt, cfg.nu);
        next = assemble(g, s.t + dt, std::move(u_new), std::move(g_new), &ell_info);
    } else {
        // midpoint predictor with implicit Euler diffusion over dt/2
        ExplicitTerms e0 = explicit_terms(s, f, g, cfg.advection);
        std::vector<double> ru(g.cells()), rg(g.cells());
        for (int n = 0; n < g.cells(); ++n) {
            ru[n] = s.u.v[n] + 0.5 * dt * e0.du[n];
            rg[n] = s.gamma.v[n] + 0.5 * dt * e0.dgamma[n];
        }
        std::vector<double> u_half =
            implicit_diffuse(ops.swirl_op, ru, 0.5 * dt, cfg.nu);
        std::vector<double> g_half =
            implicit_diffuse(ops.gamma_op, rg, 0.5 * dt, cfg.nu);
        State half = assemble(g, s.t + 0.5 * dt, std::move(u_half),
                              std::move(g_half), nullptr);

        // trapezoidal (Crank-Nicolson) corrector around the midpoint
        ExplicitTerms em = explicit_terms(half, f, g, cfg.advection);
        std::vector<double> lap_u, lap_g;
        ops.swirl_op.apply(s.u.v, lap_u);
        ops.gamma_op.apply(s.gamma.v, lap_g);
        for (int n = 0; n < g.cells(); ++n) {
            ru[n] = s.u.v[n] + dt * em.du[n] + 0.5 * dt * cfg.nu * lap_u[n];
            rg[n] = s.gamma.v[n] + dt * em.dgamma[n] + 0.5 * dt * cfg.nu * lap_g[n];
        }
        std::vector<double> u_new =
            implicit_diffuse(ops.swirl_op, ru, 0.5 * dt, cfg.nu);
        std::vector<double> g_new =
            implicit_diffuse(ops.gamma_op, rg, 0.5 * dt, cfg.nu);
        next = assemble(g, s.t + dt, std::move(u_new), std::move(g_new), &ell_info);
    }

    StepReport rep;
    rep.t_new = next.t;
    rep.cfl = cfl;
    rep.elliptic_residual = ell_info.rel_residual;
    rep.elliptic_iters = ell_info.iterations;
    for (double w : wall_trace(next.u, g))
        rep.bc_u_wall = std::max(rep.bc_u_wall, std::abs(w));
    {
        ScalarField uz = d_dz(next.u, g);
        std::vector<double> lo, hi;
        lid_traces(uz, g, lo, hi);
        for (int i = 0; i < g.nr; ++i)
            rep.bc_uz_lid = std::max({rep.bc_uz_lid, std::abs(lo[i]), std::abs(hi[i])});
        for (double w : wall_trace(next.gamma, g))
            rep.bc_gamma_s = std::max(rep.bc_gamma_s, std::abs(w));
        lid_traces(next.gamma, g, lo, hi);
        for (int i = 0; i < g.nr; ++i)
            rep.bc_gamma_s = std::max({rep.bc_gamma_s, std::abs(lo[i]), std::abs(hi[i])});
    }
    return {std::move(next), rep};
}

namespace {

struct RunningNorms {
    double grad_v_sq_cum = 0.0;
    double metric_sq_cum = 0.0;
    double phi_sup_l2 = 0.0;
    double gamma_sup_l2 = 0.0;
    double grad_phi_sq_cum = 0.0;
    double grad_gamma_sq_cum = 0.0;
    double prev_grad_v_sq = -1.0;
    double prev_metric_sq = -1.0;
    double prev_grad_phi_sq = -1.0;
    double prev_grad_gamma_sq = -1.0;
};

double grad_sq(const ScalarField& f, const Grid& g) {
    ScalarField fr = d_dr(f, g);
    ScalarField fz = d_dz(f, g);
    double acc = 0.0;
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i) {
            const int n = g.idx(i, j);
            acc += (fr.v[n] * fr.v[n] + fz.v[n] * fz.v[n]) * g.weight(i, j);
        }
    return acc;
}

StepRecord snapshot_record(const State& s, const Grid& g, double cfl,
                           double ell_res, RunningNorms& rn, double dt_prev) {
    const double gv = grad_sq(s.v.vr, g) + grad_sq(s.v.vphi, g) + grad_sq(s.v.vz, g);
    double metric = 0.0;
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i) {
            const double vr = s.v.vr.at(i, j), vp = s.v.vphi.at(i, j);
            metric += (vr * vr + vp * vp) / (g.r[i] * g.r[i]) * g.weight(i, j);
        }
    const double gphi = grad_sq(s.phi, g);
    const double ggam = grad_sq(s.gamma, g);
    if (rn.prev_grad_v_sq >= 0.0) {
        rn.grad_v_sq_cum += 0.5 * dt_prev * (rn.prev_grad_v_sq + gv);
        rn.metric_sq_cum += 0.5 * dt_prev * (rn.prev_metric_sq + metric);
        rn.grad_phi_sq_cum += 0.5 * dt_prev * (rn.prev_grad_phi_sq + gphi);
        rn.grad_gamma_sq_cum += 0.5 * dt_prev * (rn.prev_grad_gamma_sq + ggam);
    }
    rn.prev_grad_v_sq = gv;
    rn.prev_metric_sq = metric;
    rn.prev_grad_phi_sq = gphi;
    rn.prev_grad_gamma_sq = ggam;

    StepRecord rec;
    rec.t = s.t;
    double v_sq = 0.0, uinf = 0.0, vphi_inf = 0.0;
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i) {
            const int n = g.idx(i, j);
            const double vr = s.v.vr.v[n], vp = s.v.vphi.v[n], vz = s.v.vz.v[n];
            v_sq += (vr * vr + vp * vp + vz * vz) * g.weight(i, j);
            uinf = std::max(uinf, std::abs(s.u.v[n]));
            vphi_inf = std::max(vphi_inf, std::abs(vp));
        }
    rec.v_l2 = std::sqrt(v_sq);
    rec.u_inf = uinf;
    rec.vphi_inf = vphi_inf;
    rec.gamma_l2 = lp_norm(s.gamma, 2.0, g);
    rec.phi_l2 = lp_norm(s.phi, 2.0, g);
    rn.phi_sup_l2 = std::max(rn.phi_sup_l2, rec.phi_l2);
    rn.gamma_sup_l2 = std::max(rn.gamma_sup_l2, rec.gamma_l2);
    const double vphi_norm = rn.phi_sup_l2 + std::sqrt(rn.grad_phi_sq_cum);
    const double vgam_norm = rn.gamma_sup_l2 + std::sqrt(rn.grad_gamma_sq_cum);
    rec.X = std::sqrt(vphi_norm * vphi_norm + vgam_norm * vgam_norm);
    rec.grad_v_sq_cum = rn.grad_v_sq_cum;
    rec.metric_sq_cum = rn.metric_sq_cum;
    rec.cfl = cfl;
    rec.elliptic_residual = ell_res;
    rec.div_l2 = lp_norm(divergence(s.v, g), 2.0, g);
    return rec;
}

}  // namespace

RunResult run(const SimConfig& cfg, const ScalarField& u0,
              const ScalarField& gamma0, const Forcing& forcing) {
    if (!(cfg.T >= 0.0)) throw ConfigError("run: T must be nonnegative");
    if (!(cfg.dt > 0.0)) throw ConfigError("run: dt must be positive");
    Grid g = make_grid(cfg.R, cfg.a, cfg.Nr, cfg.Nz);

    RunResult out;
    out.config = cfg;
    out.grid = g;
    out.series.grid = g;

    State s = make_state(u0, gamma0, g);
    RunningNorms rn;
    out.records.push_back(snapshot_record(s, g, 0.0, 0.0, rn, 0.0));
    out.series.times.push_back(0.0);
    out.series.snaps.push_back(s);

    const int nsteps = static_cast<int>(std::llround(cfg.T / cfg.dt));
    for (int k = 0; k < nsteps; ++k) {
        StepReport rep;
        try {
            auto [next, r] = step(s, forcing, cfg, g);
            s = std::move(next);
            rep = r;
        } catch (const NumericalError& err) {
            out.completed = false;
            out.fail_time = s.t;
            out.fail_reason = err.what();
            break;
        }
        out.records.push_back(
            snapshot_record(s, g, rep.cfl, rep.elliptic_residual, rn, cfg.dt));
        if ((k + 1) % cfg.record_every == 0 || k + 1 == nsteps) {
            out.series.times.push_back(s.t);
            out.series.snaps.push_back(s);
        }
    }
    return out;
}

}  // namespace cylflow
