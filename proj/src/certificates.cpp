#include "cylflow/certificates.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace cylflow {

namespace {

// trapezoidal quadrature of a time-sampled quantity on [0, horizon]
double time_quad(double horizon, int nt, const std::function<double(double)>& fn) {
    if (horizon <= 0.0) return 0.0;
    const double h = horizon / nt;
    double acc = 0.5 * (fn(0.0) + fn(horizon));
    for (int k = 1; k < nt; ++k) acc += fn(k * h);
    return acc * h;
}

double time_max(double horizon, int nt, const std::function<double(double)>& fn) {
    double m = fn(0.0);
    if (horizon <= 0.0) return m;
    const double h = horizon / nt;
    for (int k = 1; k <= nt; ++k) m = std::max(m, fn(k * h));
    return m;
}

// | field(t) |_{p, q over [0,horizon]}
double forcing_mixed(const Grid& g, double horizon, int nt, double p, double q,
                     const std::function<ScalarField(double)>& field) {
    auto sp = [&](double t) { return lp_norm(field(t), p, g); };
    if (q == kInf) return time_max(horizon, nt, sp);
    const double val = time_quad(horizon, nt, [&](double t) {
        return std::pow(sp(t), q);
    });
    return std::pow(val, 1.0 / q);
}

double sq(double x) { return x * x; }

ScalarField vector_magnitude(const Forcing& f, const Grid& g, double t) {
    ScalarField fr = f.sample_fr(g, t), fp = f.sample_fphi(g, t),
                fz = f.sample_fz(g, t);
    ScalarField out(g, Parity::even, EdgeBC::extrapolate, EdgeBC::extrapolate);
    for (int n = 0; n < g.cells(); ++n)
        out.v[n] = std::sqrt(sq(fr.v[n]) + sq(fp.v[n]) + sq(fz.v[n]));
    return out;
}

}  // namespace

DataConstants data_constants(const State& initial, const Forcing& f,
                             const Grid& g, double horizon, double nu,
                             int time_samples) {
    DataConstants dc;
    dc.nu = nu;
    dc.horizon = horizon;
    const int nt = std::max(8, time_samples);

    const double f_21 = time_quad(horizon, nt, [&](double t) {
        return lp_norm(vector_magnitude(f, g, t), 2.0, g);
    });
    double v0_sq = 0.0;
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i) {
            const int n = g.idx(i, j);
            v0_sq += (sq(initial.v.vr.v[n]) + sq(initial.v.vphi.v[n]) +
                      sq(initial.v.vz.v[n])) * g.weight(i, j);
        }
    dc.D1 = std::sqrt(3.0 * sq(f_21) + 2.0 * v0_sq);
    dc.d1_additive = 3.0 * f_21 + 2.0 * std::sqrt(v0_sq);

    const double f0_inf1 = time_quad(horizon, nt, [&](double t) {
        return lp_norm(f.f0(g, t), kInf, g);
    });
    const double u0_inf = lp_norm(initial.u, kInf, g);
    dc.D2 = f0_inf1 + u0_inf;
    dc.Dstar = std::min(1.0, dc.D2);

    const double fbar_r_n = forcing_mixed(g, horizon, nt, 1.2, 2.0, [&](double t) {
        return f.fbar_r(g, t);
    });
    const double fbar_phi_n = forcing_mixed(g, horizon, nt, 1.2, 2.0, [&](double t) {
        return f.fbar_phi(g, t);
    });
    dc.D3 = (fbar_r_n + fbar_phi_n) / std::sqrt(2.0 * nu) +
            lp_norm(initial.phi, 2.0, g) + lp_norm(initial.gamma, 2.0, g);

    ScalarField u0z = d_dz(initial.u, g);
    ScalarField u0r = d_dr(initial.u, g);
    const double f0_22 = forcing_mixed(g, horizon, nt, 2.0, 2.0, [&](double t) {
        return f.f0(g, t);
    });
    dc.D4 = std::sqrt((sq(dc.D1) + sq(dc.D2) + sq(lp_norm(u0z, 2.0, g)) +
                       sq(f0_22)) / nu);
    dc.D5 = std::sqrt(sq(dc.D1) * (1.0 + dc.D2) + sq(dc.D1) * sq(dc.D2) +
                      sq(lp_norm(u0r, 2.0, g)) + sq(f0_22));

    // L2-in-time L3 norm of f_phi on the lateral wall
    auto wall_l3 = [&](double t) {
        if (!f.fphi) return 0.0;
        double acc = 0.0;
        for (int j = 0; j < g.nz; ++j)
            acc += std::pow(std::abs(f.fphi(g.R, g.z[j], t)), 3.0) * g.dz;
        acc *= 2.0 * std::numbers::pi * g.R;
        return std::pow(acc, 1.0 / 3.0);
    };
    const double fphi_wall =
        std::sqrt(time_quad(horizon, nt, [&](double t) { return sq(wall_l3(t)); }));

    const double Fr_n = forcing_mixed(g, horizon, nt, 1.2, 2.0, [&](double t) {
        return f.curl_r(g, t);
    });
    const double Fz_n = forcing_mixed(g, horizon, nt, 1.2, 2.0, [&](double t) {
        return f.curl_z(g, t);
    });
    ScalarField w_r0(g, Parity::odd, EdgeBC::extrapolate, EdgeBC::extrapolate);
    ScalarField w_z0(g, Parity::even, EdgeBC::extrapolate, EdgeBC::extrapolate);
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i) {
            w_r0.at(i, j) = -u0z.at(i, j) / g.r[i];
            w_z0.at(i, j) = u0r.at(i, j) / g.r[i];
        }
    dc.D6 = std::sqrt((dc.D4 + dc.D5) * fphi_wall +
                      (sq(Fr_n) + sq(Fz_n)) / nu +
                      sq(lp_norm(w_r0, 2.0, g)) + sq(lp_norm(w_z0, 2.0, g)));

    const double f1_inf1 = time_quad(horizon, nt, [&](double t) {
        return lp_norm(f.f1(g, t), kInf, g);
    });
    const double vphi0_inf = lp_norm(initial.v.vphi, kInf, g);
    dc.D7 = std::sqrt(2.0) * std::sqrt(dc.D2) * std::sqrt(f1_inf1) + vphi0_inf;

    dc.D8_sq = std::max({nu / 4.0, sq(nu) / 8.0, 27.0 / (4.0 * nu * nu * nu), 0.25});

    const double F1_n = forcing_mixed(g, horizon, nt, 1.2, 2.0, [&](double t) {
        return f.F1(g, t);
    });
    const double rfphi_4 = forcing_mixed(g, horizon, nt, 4.0, 4.0, [&](double t) {
        return f.f0(g, t);
    });
    ScalarField vphi0_sq_over_r(g, Parity::odd, EdgeBC::extrapolate,
                                EdgeBC::extrapolate);
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i)
            vphi0_sq_over_r.at(i, j) = sq(initial.v.vphi.at(i, j)) / g.r[i];
    dc.G = std::sqrt(sq(F1_n) + sq(lp_norm(initial.gamma, 2.0, g)) +
                     std::pow(rfphi_4, 4.0) +
                     sq(lp_norm(vphi0_sq_over_r, 2.0, g)));
    dc.G1 = time_quad(horizon, nt, [&](double t) {
                return lp_norm(f.sample_fphi(g, t), kInf, g);
            }) + vphi0_inf;
    dc.G2 = dc.G * dc.G * dc.G + dc.G1;
    return dc;
}

// ---------------------------------------------------------------------------
// Per-run ledgers

namespace {

LedgerEntry strict_entry(std::string name, double lhs, double rhs, double tol) {
    LedgerEntry e;
    e.name = std::move(name);
    e.mode = LedgerMode::strict;
    e.lhs = lhs;
    e.rhs = rhs;
    e.ratio = rhs > 0.0 ? lhs / rhs : 0.0;
    e.status = lhs <= rhs + tol * std::max(1.0, rhs) ? LedgerStatus::pass
                                                     : LedgerStatus::fail;
    return e;
}

LedgerEntry tracked_entry(std::string name, double lhs, double rhs) {
    LedgerEntry e;
    e.name = std::move(name);
    e.mode = LedgerMode::tracked;
    e.lhs = lhs;
    e.rhs = rhs;
    if (lhs == 0.0 && rhs == 0.0) {
        e.status = LedgerStatus::skipped;
        e.note = "0/0: nothing to track";
    } else if (rhs == 0.0) {
        e.status = LedgerStatus::skipped;
        e.note = "right side vanishes";
    } else {
        e.ratio = lhs / rhs;
        e.status = LedgerStatus::tracked;
    }
    return e;
}

double records_sup(const RunResult& run, double StepRecord::*field) {
    double m = 0.0;
    for (const StepRecord& r : run.records) m = std::max(m, r.*field);
    return m;
}

DataConstants run_constants(const RunData& rd, double nu) {
    return data_constants(rd.run.series.snaps.front(), rd.forcing,
                          rd.run.grid, rd.run.config.T, nu);
}

}  // namespace

LedgerEntry energy_ledger(const RunData& rd, double nu) {
    const RunResult& run = rd.run;
    if (run.records.empty())
        throw ContractError("energy_ledger: run has no records");
    const StepRecord& last = run.records.back();
    const StepRecord& first = run.records.front();
    const Grid& g = run.grid;
    const int nt = 64;
    const double f_21 = time_quad(last.t, nt, [&](double t) {
        return lp_norm(vector_magnitude(rd.forcing, g, t), 2.0, g);
    });
    const double lhs = sq(last.v_l2) + nu * last.grad_v_sq_cum +
                       nu * last.metric_sq_cum;
    const double rhs = 3.0 * sq(f_21) + 2.0 * sq(first.v_l2);
    return strict_entry("energy", lhs, rhs, 1e-3);
}

LedgerEntry max_principle_ledger(const RunData& rd) {
    const RunResult& run = rd.run;
    const double lhs = records_sup(run, &StepRecord::u_inf);
    const Grid& g = run.grid;
    const double f0_inf1 = time_quad(run.records.back().t, 64, [&](double t) {
        return lp_norm(rd.forcing.f0(g, t), kInf, g);
    });
    const double rhs = f0_inf1 + run.records.front().u_inf;
    if (run.config.advection == AdvectionScheme::upwind2)
        return strict_entry("swirl_max_principle", lhs, rhs, 1e-10);
    LedgerEntry e = tracked_entry("swirl_max_principle", lhs, rhs);
    e.note = "centered advection: monotonicity not guaranteed";
    return e;
}

std::pair<LedgerEntry, LedgerEntry> gradient_swirl_ledger(const RunData& rd,
                                                          double nu) {
    const TimeSeries& s = rd.run.series;
    const Grid& g = rd.run.grid;
    DataConstants dc = run_constants(rd, nu);

    auto uz_sel = [&g](const State& st) { return d_dz(st.u, g); };
    auto ur_sel = [&g](const State& st) { return d_dr(st.u, g); };
    const double uz_sup = mixed_norm(s, uz_sel, NormSpec{2.0, kInf, 0, 0.0});
    const double grad_uz = mixed_norm(s, uz_sel, NormSpec{2.0, 2.0, 1, 0.0});
    LedgerEntry a = tracked_entry("swirl_gradient_z",
                                  sq(uz_sup) + nu * sq(grad_uz), sq(dc.D4));

    const double ur_sup = mixed_norm(s, ur_sel, NormSpec{2.0, kInf, 0, 0.0});
    auto urr_sel = [&g](const State& st) { return d_dr(d_dr(st.u, g), g); };
    auto urz_sel = [&g](const State& st) { return d_dz(d_dr(st.u, g), g); };
    const double urr = mixed_norm(s, urr_sel, NormSpec{2.0, 2.0, 0, 0.0});
    const double urz = mixed_norm(s, urz_sel, NormSpec{2.0, 2.0, 0, 0.0});
    LedgerEntry b = tracked_entry("swirl_gradient_r",
                                  sq(ur_sup) + nu * (sq(urr) + sq(urz)),
                                  sq(dc.D5));
    return {a, b};
}

double interaction_integral(const TimeSeries& s) {
    const Grid& g = s.grid;
    std::vector<double> vals(s.size());
    for (int k = 0; k < s.size(); ++k) {
        const State& st = s.snaps[k];
        double acc = 0.0;
        for (int j = 0; j < g.nz; ++j)
            for (int i = 0; i < g.nr; ++i) {
                const int n = g.idx(i, j);
                acc += st.v.vphi.v[n] / g.r[i] * st.phi.v[n] * st.gamma.v[n] *
                       g.weight(i, j);
            }
        vals[k] = acc;
    }
    return time_integral(s, vals);
}

LedgerEntry order_reduction_ledger(const RunData& rd, double nu, double eps0) {
    if (!(eps0 > 0.0 && eps0 < 1.0))
        throw DomainError("order_reduction_ledger: eps0 must lie in (0,1)");
    const TimeSeries& s = rd.run.series;
    const Grid& g = rd.run.grid;
    DataConstants dc = run_constants(rd, nu);

    auto wr_sel = [&g](const State& st) {
        ScalarField uz = d_dz(st.u, g);
        ScalarField out(g, Parity::odd, EdgeBC::extrapolate, EdgeBC::extrapolate);
        for (int j = 0; j < g.nz; ++j)
            for (int i = 0; i < g.nr; ++i) out.at(i, j) = -uz.at(i, j) / g.r[i];
        return out;
    };
    auto wz_sel = [&g](const State& st) {
        ScalarField ur = d_dr(st.u, g);
        ScalarField out(g, Parity::even, EdgeBC::extrapolate, EdgeBC::extrapolate);
        for (int j = 0; j < g.nz; ++j)
            for (int i = 0; i < g.nr; ++i) out.at(i, j) = ur.at(i, j) / g.r[i];
        return out;
    };
    auto phi_sel = [](const State& st) { return st.phi; };
    auto gamma_sel = [](const State& st) { return st.gamma; };

    const double lhs = sq(v_norm(s, wr_sel)) + sq(v_norm(s, wz_sel)) +
                       sq(mixed_norm(s, phi_sel, NormSpec{2.0, 2.0, 0, 0.0}));
    const double m = records_sup(rd.run, &StepRecord::vphi_inf);
    const double grad_gamma =
        mixed_norm(s, gamma_sel, NormSpec{2.0, 2.0, 1, 0.0});
    const double R = g.R;
    const double rhs =
        (std::pow(R, eps0) / eps0 * std::pow(m, eps0) +
         std::pow(R, 2.0 * eps0) / sq(eps0) * std::pow(m, 2.0 * eps0)) /
            nu * grad_gamma +
        sq(dc.D6);
    LedgerEntry e = tracked_entry("order_reduction", lhs, rhs);
    std::ostringstream note;
    note << "eps0=" << eps0;
    e.note = e.note.empty() ? note.str() : e.note + "; " + note.str();
    return e;
}

std::pair<LedgerEntry, LedgerEntry> vphi_bounds_ledger(const RunData& rd,
                                                       double nu, double sexp) {
    const TimeSeries& s = rd.run.series;
    const Grid& g = rd.run.grid;
    DataConstants dc = run_constants(rd, nu);

    const double vphi_sup = records_sup(rd.run, &StepRecord::vphi_inf);
    const double X_final = rd.run.records.back().X;
    const double rhs_sup =
        dc.D2 / std::sqrt(nu) * std::pow(dc.D1, 0.25) * std::pow(X_final, 0.75) +
        dc.D7;
    LedgerEntry sup_entry = strict_entry("vphi_sup_bound", vphi_sup, rhs_sup, 1e-3);

    LambdaResult lam = lambda_s(s, sexp);
    LedgerEntry snorm;
    snorm.name = "vphi_s_norm_bound";
    snorm.mode = LedgerMode::tracked;
    if (!lam.defined) {
        snorm.status = LedgerStatus::skipped;
        snorm.note = "v_phi identically zero: lambda undefined";
        return {sup_entry, snorm};
    }
    const double c0 = lam.value;
    auto vphi_sel = [](const State& st) { return st.v.vphi; };
    const double lhs = mixed_norm(s, vphi_sel, NormSpec{sexp, kInf, 0, 0.0});
    const double fphi_s1 = time_quad(rd.run.records.back().t, 64, [&](double t) {
        return lp_norm(rd.forcing.sample_fphi(g, t), sexp, g);
    });
    const double vphi0_s = lp_norm(s.snaps.front().v.vphi, sexp, g);
    const double rhs =
        (sq(dc.D1) + fphi_s1) / std::pow(c0, sexp - 1.0) + vphi0_s;
    snorm = tracked_entry("vphi_s_norm_bound", lhs, rhs);
    std::ostringstream note;
    note << "s=" << sexp << ", hypothesis lambda(s)>=c0 holds with c0=" << c0;
    snorm.note = snorm.note.empty() ? note.str() : snorm.note + "; " + note.str();
    return {sup_entry, snorm};
}

std::pair<LedgerEntry, LedgerEntry> psi_energy_ledger(const RunData& rd) {
    const TimeSeries& s = rd.run.series;
    const Grid& g = rd.run.grid;
    DataConstants dc = run_constants(rd, rd.run.config.nu);

    auto psi_sel = [&g](const State& st) {
        ScalarField psi(g, Parity::odd, EdgeBC::dirichlet0, EdgeBC::dirichlet0);
        for (int j = 0; j < g.nz; ++j)
            for (int i = 0; i < g.nr; ++i)
                psi.at(i, j) = g.r[i] * st.psi1.at(i, j);
        return psi;
    };
    auto psi1_sel = [](const State& st) { return st.psi1; };

    std::vector<double> inst(s.size());
    for (int k = 0; k < s.size(); ++k) {
        ScalarField psi = psi_sel(s.snaps[k]);
        inst[k] = sq(lp_norm(psi, 2.0, g)) + sq(lp_norm_grad(psi, 2.0, g)) +
                  sq(lp_norm(s.snaps[k].psi1, 2.0, g));
    }
    double sup_inst = 0.0;
    for (double v : inst) sup_inst = std::max(sup_inst, v);
    LedgerEntry a = tracked_entry("psi_energy", sup_inst, sq(dc.D1));

    std::vector<double> zvals(s.size());
    for (int k = 0; k < s.size(); ++k) {
        ScalarField psiz = d_dz(psi_sel(s.snaps[k]), g);
        ScalarField psi1z = d_dz(psi1_sel(s.snaps[k]), g);
        zvals[k] = sq(lp_norm(psiz, 2.0, g)) + sq(lp_norm_grad(psiz, 2.0, g)) +
                   sq(lp_norm(psi1z, 2.0, g));
    }
    LedgerEntry b = tracked_entry("psi_z_energy", time_integral(s, zvals),
                                  sq(dc.D1));
    return {a, b};
}

LedgerEntry phi_gamma_energy_ledger(const RunData& rd, double nu, double delta) {
    DataConstants dc = run_constants(rd, nu);
    const double X_final = rd.run.records.back().X;
    if (dc.D2 <= 0.0) {
        LedgerEntry e;
        e.name = "phi_gamma_energy";
        e.status = LedgerStatus::skipped;
        e.note = "D2 = 0: swirl-free data";
        return e;
    }
    const double m = records_sup(rd.run, &StepRecord::vphi_inf);
    const double I = interaction_integral(rd.run.series);
    const double rhs =
        sq(dc.D2) / sq(dc.Dstar) *
        (1.0 + std::pow(m * rd.run.grid.R, 2.0 * delta) / (sq(delta) * sq(dc.D2))) *
        (std::abs(I) + sq(dc.D3));
    LedgerEntry e = tracked_entry("phi_gamma_energy", sq(X_final), rhs);
    std::ostringstream note;
    note << "delta=" << delta;
    e.note = e.note.empty() ? note.str() : e.note + "; " + note.str();
    return e;
}

LedgerEntry interaction_bound_ledger(const RunData& rd, double sigma, double d,
                                     double c0) {
    if (!(sigma > 3.0)) throw DomainError("interaction_bound: sigma must exceed 3");
    if (!(d > 0.0 && d < 1.0)) throw DomainError("interaction_bound: d in (0,1)");
    const TimeSeries& s = rd.run.series;
    const Grid& g = rd.run.grid;
    DataConstants dc = run_constants(rd, rd.run.config.nu);

    const double I = std::abs(interaction_integral(s));
    const double alpha0 = (sigma - 3.0) * (1.0 - d) / (3.0 * sigma);

    LambdaResult lam = lambda_s(s, sigma);
    double D0;
    std::string case_label;
    if (lam.defined && lam.value >= c0) {
        const double fphi_s1 = time_quad(rd.run.records.back().t, 64, [&](double t) {
            return lp_norm(rd.forcing.sample_fphi(g, t), sigma, g);
        });
        D0 = (sq(dc.D1) + fphi_s1) / std::pow(c0, sigma - 1.0) +
             lp_norm(s.snaps.front().v.vphi, sigma, g);
        case_label = "lambda>=c0";
    } else {
        D0 = c0 / std::sqrt(sq(dc.D1) + dc.D8_sq + 1.0);
        case_label = "lambda<c0";
    }

    auto phi_sel = [](const State& st) { return st.phi; };
    auto gamma_sel = [](const State& st) { return st.gamma; };
    const NormSpec l2{2.0, 2.0, 0, 0.0}, gr{2.0, 2.0, 1, 0.0};
    const double phi_l2 = mixed_norm(s, phi_sel, l2);
    const double gam_l2 = mixed_norm(s, gamma_sel, l2);
    const double phi_gr = mixed_norm(s, phi_sel, gr);
    const double gam_gr = mixed_norm(s, gamma_sel, gr);
    auto powz = [](double b, double e) { return e == 0.0 ? 1.0 : std::pow(b, e); };
    const double rhs = powz(dc.D2, d) * powz(D0, 1.0 - d) *
                       powz(phi_l2 * gam_l2, alpha0) *
                       powz(phi_gr * gam_gr, 1.0 - alpha0);
    LedgerEntry e = tracked_entry("interaction_bound", I, rhs);
    std::ostringstream note;
    note << "sigma=" << sigma << " d=" << d << " alpha0=" << alpha0 << " case "
         << case_label << " D0=" << D0;
    e.note = e.note.empty() ? note.str() : e.note + "; " + note.str();
    return e;
}

LedgerEntry h2_ledger(const RunData& rd) {
    const State& last = rd.run.series.snaps.back();
    EstimateReport rep = h2_report(last.psi1, last.gamma, rd.run.grid);
    LedgerEntry e = tracked_entry("h2_elliptic", rep.lhs_total, rep.rhs);
    return e;
}

LedgerEntry h3_ledger(const RunData& rd) {
    const State& last = rd.run.series.snaps.back();
    EstimateReport rep = h3_report(last.psi1, last.gamma, rd.run.grid);
    return tracked_entry("h3_elliptic", rep.lhs_total, rep.rhs);
}

LedgerEntry small_data_ledger(const RunData& rd, double nu) {
    DataConstants dc = run_constants(rd, nu);
    const double kappa = sq(dc.D1) + dc.D8_sq;
    const double threshold = std::pow(kappa + 1.0, -1.5);
    if (dc.G2 > threshold) {
        LedgerEntry e;
        e.name = "small_data_sup";
        e.mode = LedgerMode::strict;
        e.status = LedgerStatus::skipped;
        std::ostringstream note;
        note << "smallness hypothesis fails: G2=" << dc.G2 << " > " << threshold;
        e.note = note.str();
        return e;
    }
    const double lhs = records_sup(rd.run, &StepRecord::vphi_inf);
    const double rhs = 1.0 / std::sqrt(kappa + 1.0);
    LedgerEntry e = strict_entry("small_data_sup", lhs, rhs, 1e-12);
    e.note = "kappa=" + std::to_string(kappa);
    return e;
}

std::vector<std::pair<double, double>> x_trajectory(const TimeSeries& s) {
    const Grid& g = s.grid;
    std::vector<std::pair<double, double>> out;
    out.reserve(s.size());
    double sup_phi = 0.0, sup_gamma = 0.0;
    double cum_gphi = 0.0, cum_ggamma = 0.0;
    double prev_gphi = -1.0, prev_ggamma = -1.0;
    for (int k = 0; k < s.size(); ++k) {
        const State& st = s.snaps[k];
        sup_phi = std::max(sup_phi, lp_norm(st.phi, 2.0, g));
        sup_gamma = std::max(sup_gamma, lp_norm(st.gamma, 2.0, g));
        const double gphi = sq(lp_norm_grad(st.phi, 2.0, g));
        const double ggam = sq(lp_norm_grad(st.gamma, 2.0, g));
        if (k > 0) {
            const double dt = s.times[k] - s.times[k - 1];
            cum_gphi += 0.5 * dt * (prev_gphi + gphi);
            cum_ggamma += 0.5 * dt * (prev_ggamma + ggam);
        }
        prev_gphi = gphi;
        prev_ggamma = ggam;
        const double xphi = sup_phi + std::sqrt(cum_gphi);
        const double xgam = sup_gamma + std::sqrt(cum_ggamma);
        out.emplace_back(s.times[k], std::sqrt(sq(xphi) + sq(xgam)));
    }
    return out;
}

FixedPointResult small_data_fixed_point(double kappa, double G2) {
    if (kappa < 0.0 || G2 < 0.0)
        throw DomainError("small_data_fixed_point: inputs must be nonnegative");
    FixedPointResult res;
    res.hypothesis_ok = G2 <= std::pow(kappa + 1.0, -1.5);
    const double blowup = kappa > 0.0 ? 10.0 / std::sqrt(kappa) : kInf;
    double M = G2;
    for (int n = 0; n < 1000000; ++n) {
        const double next = kappa * M * M * M + G2;
        res.iterations = n + 1;
        if (next > blowup || !std::isfinite(next)) {
            res.diverged = true;
            res.M = next;
            return res;
        }
        if (std::abs(next - M) <= 1e-14) {
            M = next;
            res.converged = true;
            break;
        }
        M = next;
    }
    res.M = M;
    res.residual = std::abs(M - (kappa * M * M * M + G2));
    return res;
}

bool CertificateReport::all_strict_pass() const {
    for (const LedgerEntry& e : entries)
        if (e.mode == LedgerMode::strict && e.status == LedgerStatus::fail)
            return false;
    return true;
}

const LedgerEntry* CertificateReport::find(const std::string& name) const {
    for (const LedgerEntry& e : entries)
        if (e.name == name) return &e;
    return nullptr;
}

CertificateReport certificate_report(const RunData& rd) {
    const SimConfig& cfg = rd.run.config;
    CertificateReport rep;
    rep.constants = run_constants(rd, cfg.nu);

    auto guard = [&rep](const std::string& name, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& err) {
            LedgerEntry e;
            e.name = name;
            e.status = LedgerStatus::skipped;
            e.note = std::string("error: ") + err.what();
            rep.entries.push_back(e);
        }
    };

    guard("energy", [&] { rep.entries.push_back(energy_ledger(rd, cfg.nu)); });
    guard("swirl_max_principle",
          [&] { rep.entries.push_back(max_principle_ledger(rd)); });
    guard("psi_energy", [&] {
        auto [a, b] = psi_energy_ledger(rd);
        rep.entries.push_back(a);
        rep.entries.push_back(b);
    });
    guard("phi_gamma_energy", [&] {
        rep.entries.push_back(phi_gamma_energy_ledger(rd, cfg.nu, cfg.delta));
    });
    guard("interaction_bound", [&] {
        rep.entries.push_back(
            interaction_bound_ledger(rd, cfg.s_list.empty() ? 4.0 : cfg.s_list[0],
                                     cfg.interp_d, cfg.c0));
    });
    guard("h2_elliptic", [&] { rep.entries.push_back(h2_ledger(rd)); });
    guard("h3_elliptic", [&] { rep.entries.push_back(h3_ledger(rd)); });
    guard("swirl_gradients", [&] {
        auto [a, b] = gradient_swirl_ledger(rd, cfg.nu);
        rep.entries.push_back(a);
        rep.entries.push_back(b);
    });
    guard("order_reduction", [&] {
        rep.entries.push_back(order_reduction_ledger(rd, cfg.nu, cfg.eps0));
    });
    guard("vphi_bounds", [&] {
        auto [a, b] = vphi_bounds_ledger(rd, cfg.nu,
                                         cfg.s_list.empty() ? 4.0 : cfg.s_list[0]);
        rep.entries.push_back(a);
        rep.entries.push_back(b);
    });
    guard("small_data_sup",
          [&] { rep.entries.push_back(small_data_ledger(rd, cfg.nu)); });

    rep.x_of_t = x_trajectory(rd.run.series);
    rep.interaction = interaction_integral(rd.run.series);
    for (double sexp : cfg.s_list) {
        LambdaRecord lr;
        lr.s = sexp;
        LambdaResult res = lambda_s(rd.run.series, sexp);
        lr.defined = res.defined;
        lr.value = res.value;
        if (res.defined) {
            lr.case_label = res.value >= cfg.c0 ? "lambda>=c0" : "lambda<c0";
            if (res.value >= cfg.c0) {
                const double fphi_s1 =
                    time_quad(rd.run.records.back().t, 64, [&](double t) {
                        return lp_norm(rd.forcing.sample_fphi(rd.run.grid, t),
                                       sexp, rd.run.grid);
                    });
                lr.D0 = (sq(rep.constants.D1) + fphi_s1) /
                            std::pow(cfg.c0, sexp - 1.0) +
                        lp_norm(rd.run.series.snaps.front().v.vphi, sexp,
                                rd.run.grid);
            } else {
                lr.D0 = cfg.c0 /
                        std::sqrt(sq(rep.constants.D1) + rep.constants.D8_sq + 1.0);
            }
        } else {
            lr.case_label = "undefined";
        }
        rep.lambdas.push_back(lr);
    }
    return rep;
}

}  // namespace cylflow
