#pragma once

#include "cylflow/dynamics.hpp"

namespace cylflow {

/// Initial data, forcing, and (when available) the exact trajectory of a
/// named flow configuration.
struct Scenario {
    std::string name;
    double R = 1.0, a = 1.0, nu = 1.0;
    std::function<double(double r, double z)> u0;      // may be null (zero)
    std::function<double(double r, double z)> gamma0;  // may be null
    Forcing forcing;
    // optional exact solution for convergence studies
    std::function<double(double r, double z, double t)> exact_u;
    std::function<double(double r, double z, double t)> exact_gamma;
    bool has_exact = false;
    double amplitude = 1.0;  // scale actually used (small_data records its fit)

    ScalarField initial_u(const Grid& g) const;
    ScalarField initial_gamma(const Grid& g) const;
};

/// Named library: rest, swirl_decay, vortex_ring, manufactured_full,
/// small_data. Unknown names raise a lookup error listing the choices.
Scenario builtin_scenario(const std::string& name, double R = 1.0,
                          double a = 1.0, double nu = 1.0);

std::vector<std::string> scenario_names();

/// Run a scenario with the given configuration (grid parameters come from
/// the config, initial data and forcing from the scenario).
RunResult run_scenario(const Scenario& sc, const SimConfig& cfg);

/// Checks performed when a scenario is placed on a grid: boundary
/// compatibility of the initial data (both from the analytic builders at the
/// boundary and from grid-trace extrapolation) and, when an exact solution is
/// present, the L2 size of the forced-residual mismatch (second-order small).
struct CompatibilityReport {
    double u_wall = 0.0;       // |u0| at r=R (grid extrapolation)
    double uz_lid = 0.0;       // |u0_,z| at z=+-a (grid extrapolation)
    double gamma_boundary = 0.0;
    double u_wall_exact = 0.0;       // analytic builder evaluated on S
    double uz_lid_exact = 0.0;
    double gamma_boundary_exact = 0.0;
    double mms_residual_u = 0.0;
    double mms_residual_gamma = 0.0;
    bool compatible(double tol) const {
        return u_wall_exact <= tol && uz_lid_exact <= tol &&
               gamma_boundary_exact <= tol;
    }
};
CompatibilityReport check_scenario(const Scenario& sc, const Grid& g);

struct ConvergenceReport {
    std::vector<int> resolutions;
    std::vector<double> err_u;
    std::vector<double> err_gamma;
    double order_u = 0.0;
    double order_gamma = 0.0;
};

/// Final-time L2 errors against the exact solution over a resolution ladder;
/// dt scales with the mesh. Requires an exact solution and >= 3 resolutions.
ConvergenceReport convergence_study(const Scenario& sc,
                                    const std::vector<int>& resolutions,
                                    SimConfig base);

}  // namespace cylflow
