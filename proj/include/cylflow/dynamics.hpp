#pragma once

#include <string>
#include <vector>

#include "cylflow/elliptic.hpp"
#include "cylflow/norms.hpp"

namespace cylflow {

enum class Scheme { imex1, imex2 };
enum class AdvectionScheme { upwind2, centered };

struct SimConfig {
    double nu = 1.0;
    double R = 1.0;
    double a = 1.0;
    int Nr = 32;
    int Nz = 32;
    double dt = 1e-3;
    double T = 0.1;
    std::string scenario = "rest";
    double cfl_safety = 0.4;
    int record_every = 1;
    Scheme scheme = Scheme::imex1;
    AdvectionScheme advection = AdvectionScheme::upwind2;
    // certificate options carried alongside the run parameters
    double eps0 = 0.1;
    double delta = 0.1;
    double c0 = 1.0;
    double interp_d = 0.5;
    std::vector<double> s_list = {4.0, 6.0, 10.0};
};

struct StepReport {
    double t_new = 0.0;
    double cfl = 0.0;            // advective CFL used by the step
    double elliptic_residual = 0.0;
    int elliptic_iters = 0;
    double bc_u_wall = 0.0;      // max |u| extrapolated to r = R
    double bc_uz_lid = 0.0;      // max |u_,z| extrapolated to z = +-a
    double bc_gamma_s = 0.0;     // max |Gamma| extrapolated to S
};

/// One dense per-step diagnostics row (written to series.csv and used by the
/// strict certificate ledgers).
struct StepRecord {
    double t = 0.0;
    double v_l2 = 0.0;            // |v(t)|_2
    double grad_v_sq_cum = 0.0;   // int_0^t |grad v|^2
    double u_inf = 0.0;           // |u(t)|_inf
    double gamma_l2 = 0.0;
    double phi_l2 = 0.0;
    double X = 0.0;               // sqrt(|Phi|_V^2 + |Gamma|_V^2) up to t
    double cfl = 0.0;
    double elliptic_residual = 0.0;
    // extended columns (series_ext.csv)
    double metric_sq_cum = 0.0;   // int_0^t (v_r^2 + v_phi^2)/r^2
    double vphi_inf = 0.0;
    double div_l2 = 0.0;
};

struct RunResult {
    SimConfig config;
    Grid grid;
    TimeSeries series;               // snapshots at the configured cadence
    std::vector<StepRecord> records; // one row per step, including t = 0
    bool completed = true;
    double fail_time = -1.0;
    std::string fail_reason;
};

/// Build a consistent state from initial swirl and Gamma samples: solves the
/// modified stream problem, reconstructs v and Phi.
State make_state(const ScalarField& u0, const ScalarField& gamma0,
                 const Grid& g, double t = 0.0);

/// Explicit right-hand sides (diagnostic form, centered differences).
ScalarField rhs_swirl(const State& s, const Forcing& f, const Grid& g, double nu);
ScalarField rhs_gamma(const State& s, const Forcing& f, const Grid& g, double nu);
ScalarField rhs_phi_diagnostic(const State& s, const Forcing& f, const Grid& g,
                               double nu);

/// Limited (or centered) advective derivative v_r u_,r + v_z u_,z.
ScalarField advect(const ScalarField& f, const VelocityField& v, const Grid& g,
                   AdvectionScheme scheme);

/// One IMEX step; throws NumericalError on CFL violation or solver failure.
std::pair<State, StepReport> step(const State& s, const Forcing& f,
                                  const SimConfig& cfg, const Grid& g);

/// March to T from the given initial data, recording snapshots and per-step
/// diagnostics. Deterministic for a fixed config.
RunResult run(const SimConfig& cfg, const ScalarField& u0,
              const ScalarField& gamma0, const Forcing& forcing);

/// Largest advective Courant number of the state at step size dt.
double courant_number(const State& s, const Grid& g, double dt);

}  // namespace cylflow
