#include "cylflow/norms.hpp"

#include <cmath>
#include <sstream>

namespace cylflow {

std::vector<double> TimeSeries::dt_weights() const {
    const int n = size();
    std::vector<double> w(n, 0.0);
    for (int k = 0; k + 1 < n; ++k) {
        const double half = 0.5 * (times[k + 1] - times[k]);
        w[k] += half;
        w[k + 1] += half;
    }
    return w;
}

double time_integral(const TimeSeries& s, const std::vector<double>& values) {
    if (values.size() != s.times.size())
        throw DimensionError("time_integral: value count does not match series");
    const std::vector<double> w = s.dt_weights();
    double total = 0.0;
    for (size_t k = 0; k < w.size(); ++k) total += w[k] * values[k];
    return total;
}

double lp_norm(const std::vector<double>& f, double p, const Grid& g) {
    if (p < 1.0) throw DomainError("lp_norm: p must be at least 1");
    if (static_cast<int>(f.size()) != g.cells())
        throw DimensionError("lp_norm: field size does not match grid");
    if (p == kInf) {
        double m = 0.0;
        for (double x : f) m = std::max(m, std::abs(x));
        return m;
    }
    double acc = 0.0;
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i)
            acc += std::pow(std::abs(f[g.idx(i, j)]), p) * g.weight(i, j);
    return std::pow(acc, 1.0 / p);
}

double lp_norm(const ScalarField& f, double p, const Grid& g) {
    return lp_norm(f.v, p, g);
}

double lp_norm_grad(const ScalarField& f, double p, const Grid& g) {
    ScalarField fr = d_dr(f, g);
    ScalarField fz = d_dz(f, g);
    std::vector<double> mag(g.cells());
    for (int n = 0; n < g.cells(); ++n)
        mag[n] = std::hypot(fr.v[n], fz.v[n]);
    return lp_norm(mag, p, g);
}

static double spatial_norm(const ScalarField& f, const NormSpec& spec,
                           const Grid& g) {
    ScalarField work = f;
    if (spec.weight_exponent != 0.0) {
        for (int j = 0; j < g.nz; ++j)
            for (int i = 0; i < g.nr; ++i)
                work.at(i, j) *= std::pow(g.r[i], -spec.weight_exponent);
    }
    if (spec.derivative_order == 0) return lp_norm(work, spec.p, g);
    return lp_norm_grad(work, spec.p, g);
}

double mixed_norm(const TimeSeries& s, const FieldSelector& pick,
                  const NormSpec& spec) {
    if (s.empty()) throw ContractError("mixed_norm: empty series");
    std::vector<double> vals(s.size());
    for (int k = 0; k < s.size(); ++k)
        vals[k] = spatial_norm(pick(s.snaps[k]), spec, s.grid);
    if (spec.q == kInf) {
        double m = 0.0;
        for (double v : vals) m = std::max(m, v);
        return m;
    }
    std::vector<double> powed(vals.size());
    for (size_t k = 0; k < vals.size(); ++k) powed[k] = std::pow(vals[k], spec.q);
    return std::pow(time_integral(s, powed), 1.0 / spec.q);
}

double v_norm(const TimeSeries& s, const FieldSelector& pick) {
    NormSpec sup{2.0, kInf, 0, 0.0};
    NormSpec grad{2.0, 2.0, 1, 0.0};
    return mixed_norm(s, pick, sup) + mixed_norm(s, pick, grad);
}

LambdaResult lambda_s(const TimeSeries& s, double exponent) {
    if (!(exponent > 0.0)) throw DomainError("lambda_s: s must be positive");
    LambdaResult out;
    for (int k = 0; k < s.size(); ++k) {
        const ScalarField& vphi = s.snaps[k].v.vphi;
        out.sup_ls = std::max(out.sup_ls, lp_norm(vphi, exponent, s.grid));
        out.sup_inf = std::max(out.sup_inf, lp_norm(vphi, kInf, s.grid));
    }
    if (out.sup_inf <= 0.0) return out;  // defined = false
    out.value = out.sup_ls / out.sup_inf;
    out.defined = true;
    return out;
}

HardySides hardy_ratio(const std::vector<double>& f, double window, double beta,
                       double p) {
    if (!(p >= 1.0)) throw DomainError("hardy_ratio: p must be at least 1");
    if (beta == 1.0 / p) throw DomainError("hardy_ratio: beta = 1/p is excluded");
    if (f.empty() || !(window > 0.0))
        throw DomainError("hardy_ratio: empty sample window");

    const int n = static_cast<int>(f.size());
    const double h = window / n;
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = (i + 0.5) * h;

    // F(x): running integral from 0 (beta > 1/p) or from x to the support end
    // (beta < 1/p); midpoint cumulative sums, F evaluated at cell centers.
    std::vector<double> F(n, 0.0);
    if (beta > 1.0 / p) {
        double run = 0.0;
        for (int i = 0; i < n; ++i) {
            F[i] = run + 0.5 * h * f[i];
            run += h * f[i];
        }
    } else {
        double run = 0.0;
        for (int i = n - 1; i >= 0; --i) {
            F[i] = run + 0.5 * h * f[i];
            run += h * f[i];
        }
    }

    HardySides out;
    out.constant = 1.0 / std::abs(beta - 1.0 / p);

    double lhs_acc = 0.0, rhs_acc = 0.0;
    for (int i = 0; i < n; ++i) {
        lhs_acc += std::pow(std::abs(std::pow(x[i], -beta) * F[i]), p) * h;
        rhs_acc += std::pow(std::abs(std::pow(x[i], 1.0 - beta) * f[i]), p) * h;
    }
    if (beta > 1.0 / p) {
        // beyond the window F is the (constant) total integral and the
        // integrand x^(-beta p) F^p has the closed-form tail F^p X^(1-bp)/(bp-1)
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += h * f[i];
        const double bp = beta * p;
        lhs_acc += std::pow(std::abs(total), p) * std::pow(window, 1.0 - bp) / (bp - 1.0);
    }
    out.lhs = std::pow(lhs_acc, 1.0 / p);
    out.rhs = out.constant * std::pow(rhs_acc, 1.0 / p);
    return out;
}

InterpReport interpolation_ratio(InterpKind kind, const ScalarField& f,
                                 const InterpParams& prm, const Grid& g) {
    InterpReport rep;
    std::ostringstream ex;
    if (kind == InterpKind::hardy_weighted) {
        const double p = prm.p, s = prm.s, q = prm.q;
        if (!(p > 1.0 && p <= 3.0))
            throw DomainError("interpolation_ratio: requires 1 < p <= 3");
        if (!(s >= 0.0 && s <= p && s < 2.0))
            throw DomainError("interpolation_ratio: requires 0 <= s <= p, s < 2");
        const double qmax = (p < 3.0) ? p * (3.0 - s) / (3.0 - p) : kInf;
        if (!(q >= p && q <= qmax))
            throw DomainError("interpolation_ratio: q outside [p, p(3-s)/(3-p)]");

        double acc = 0.0;
        for (int j = 0; j < g.nz; ++j)
            for (int i = 0; i < g.nr; ++i)
                acc += std::pow(std::abs(f.at(i, j)), q) /
                       std::pow(g.r[i], s) * g.weight(i, j);
        rep.lhs = std::pow(acc, 1.0 / q);

        const double e1 = (3.0 - s) / q - 3.0 / p + 1.0;
        const double e2 = 3.0 / p - (3.0 - s) / q;
        const double base = lp_norm(f, p, g);
        const double grad = lp_norm_grad(f, p, g);
        auto powz = [](double b, double e) {
            return e == 0.0 ? 1.0 : std::pow(b, e);
        };
        rep.rhs_c_free = powz(base, e1) * powz(grad, e2);
        // the inequality assumes data vanishing on the boundary; record how
        // well the sample satisfies it rather than failing hard
        double boundary = 0.0;
        for (double v : wall_trace(f, g)) boundary = std::max(boundary, std::abs(v));
        {
            std::vector<double> lo, hi;
            lid_traces(f, g, lo, hi);
            for (int i = 0; i < g.nr; ++i)
                boundary = std::max({boundary, std::abs(lo[i]), std::abs(hi[i])});
        }
        ex << "p=" << p << " s=" << s << " q=" << q << " exps=(" << e1 << ","
           << e2 << ") boundary_trace=" << boundary;
    } else {
        // (r,z)-representative Sobolev interpolation in dimension n = 3
        const double n = 3.0;
        const double denom = n / prm.p2 - prm.l - n / prm.p1;
        if (denom == 0.0)
            throw DomainError("interpolation_ratio: degenerate exponent equation");
        rep.theta = (n / prm.p - prm.r - n / prm.p1) / denom;
        const double tmin = static_cast<double>(prm.r) / prm.l;
        if (!(rep.theta >= tmin - 1e-12 && rep.theta <= 1.0 + 1e-12))
            throw DomainError("interpolation_ratio: theta outside [r/l, 1]");
        if (prm.r == 0)
            rep.lhs = lp_norm(f, prm.p, g);
        else
            rep.lhs = lp_norm_grad(f, prm.p, g);

        // || f ||_{W^l_{p2}} as the sum of derivative-order Lp2 norms
        double wnorm = lp_norm(f, prm.p2, g) + lp_norm_grad(f, prm.p2, g);
        if (prm.l >= 2) {
            ScalarField frr = d_dr(d_dr(f, g), g);
            ScalarField frz = d_dz(d_dr(f, g), g);
            ScalarField fzz = d_dz(d_dz(f, g), g);
            wnorm += lp_norm(frr, prm.p2, g) + lp_norm(frz, prm.p2, g) +
                     lp_norm(fzz, prm.p2, g);
        }
        const double base = lp_norm(f, prm.p1, g);
        rep.rhs_c_free = std::pow(base, 1.0 - rep.theta) * std::pow(wnorm, rep.theta);
        ex << "theta=" << rep.theta << " r=" << prm.r << " l=" << prm.l;
    }
    rep.exponents = ex.str();
    rep.ratio = rep.rhs_c_free > 0.0 ? rep.lhs / rep.rhs_c_free : 0.0;
    return rep;
}

}  // namespace cylflow
