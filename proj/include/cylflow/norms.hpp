#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "cylflow/field.hpp"

namespace cylflow {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Recorded trajectory of a run over [0, T]: snapshot states at increasing
/// times (always including t = 0) plus trapezoidal weights for time
/// integrals over the recorded cadence.
struct TimeSeries {
    Grid grid;
    std::vector<double> times;
    std::vector<State> snaps;

    int size() const { return static_cast<int>(times.size()); }
    bool empty() const { return times.empty(); }
    std::vector<double> dt_weights() const;  // trapezoid weights, size()==times
};

/// Mixed-norm descriptor |f|_{p,q} = || t -> ||r^-beta D^k f(t)||_p ||_q.
struct NormSpec {
    double p = 2.0;
    double q = 2.0;
    int derivative_order = 0;   // 0 or 1 (1 = (r,z) gradient magnitude)
    double weight_exponent = 0; // beta in the r^-beta weight
};

using FieldSelector = std::function<ScalarField(const State&)>;

/// ( integral |f|^p dx )^(1/p); p = infinity returns the cell-center max.
double lp_norm(const ScalarField& f, double p, const Grid& g);
double lp_norm(const std::vector<double>& f, double p, const Grid& g);

/// Lp norm of |grad f| = sqrt(f_r^2 + f_z^2).
double lp_norm_grad(const ScalarField& f, double p, const Grid& g);

/// Temporal Lq of the spatial norm described by `spec` over the series.
double mixed_norm(const TimeSeries& s, const FieldSelector& pick,
                  const NormSpec& spec);

/// Parabolic energy norm |f|_{2,inf,Omega^t} + |grad f|_{2,Omega^t}.
double v_norm(const TimeSeries& s, const FieldSelector& pick);

/// lambda(s) = sup_t |v_phi(t)|_s / sup_{x,t} |v_phi|.
struct LambdaResult {
    double value = 0.0;
    double sup_ls = 0.0;
    double sup_inf = 0.0;
    bool defined = false;  // false when v_phi is identically zero
};
LambdaResult lambda_s(const TimeSeries& s, double exponent);

/// Both sides of the one-dimensional Hardy inequality for beta != 1/p.
/// `f` holds midpoint samples on (0, window); f must vanish near the window
/// end so the improper tails can be completed analytically.
struct HardySides {
    double lhs = 0.0;
    double rhs = 0.0;
    double constant = 0.0;  // the explicit 1/|beta-1/p|
};
HardySides hardy_ratio(const std::vector<double>& f, double window, double beta,
                       double p);

enum class InterpKind { sobolev, hardy_weighted };

struct InterpParams {
    // hardy_weighted: lhs (int |f|^q / r^s dx)^(1/q) vs |f|_p^alpha |grad f|_p^beta
    double p = 2.0;
    double s = 1.0;
    double q = 2.0;
    // sobolev: |D^r f|_p vs |f|_p1^(1-theta) ||f||_{W^l_p2}^theta
    int r = 1;
    int l = 2;
    double p1 = 2.0;
    double p2 = 2.0;
};

struct InterpReport {
    double lhs = 0.0;
    double rhs_c_free = 0.0;
    double ratio = 0.0;  // empirical lower bound on the inequality constant
    double theta = 0.0;  // sobolev interpolation exponent (when applicable)
    std::string exponents;
};
InterpReport interpolation_ratio(InterpKind kind, const ScalarField& f,
                                 const InterpParams& params, const Grid& g);

/// Trapezoidal time integral of per-snapshot values.
double time_integral(const TimeSeries& s, const std::vector<double>& values);

}  // namespace cylflow
