#include "cylflow/elliptic.hpp"

#include <cmath>

namespace cylflow {

RadialFluxOp::RadialFluxOp(double beta, const Grid& g, EdgeBC wall, EdgeBC lid)
    : beta_(beta), grid_(g), wall_(wall), lid_(lid) {
    if (wall == EdgeBC::extrapolate || lid == EdgeBC::extrapolate)
        throw ContractError("RadialFluxOp: operator edges need a boundary condition");
    const int nr = g.nr;
    face_.resize(nr + 1);
    for (int i = 0; i <= nr; ++i) face_[i] = std::pow(i * g.dr, beta);
    W_.resize(nr);
    for (int i = 0; i < nr; ++i) {
        const double rm = i * g.dr, rp = (i + 1) * g.dr;
        if (beta == -1.0) {
            // int 1/r over the axis cell diverges; the value below makes the
            // closed axis row exact on r^2 and first-order on r^3
            W_[i] = (i == 0) ? 1.5 : std::log(rp / rm);
        } else {
            W_[i] = (std::pow(rp, beta + 1.0) - std::pow(rm, beta + 1.0)) /
                    (beta + 1.0);
        }
    }
    if (beta == -1.0) {
        face_[0] = 0.0;  // never used; axis flux is the r^2-fit value
        axis_flux_coeff_ = 8.0 / (g.dr * g.dr);
    }

    // diagonal of L; fluxes are F = r^beta (df/dr) so each face contributes
    // face/(dr*W_i) to the row, the axis fit contributes coeff/W_0
    diag_.assign(g.cells(), 0.0);
    const double idr = 1.0 / g.dr, idz2 = 1.0 / (g.dz * g.dz);
    for (int j = 0; j < g.nz; ++j) {
        for (int i = 0; i < nr; ++i) {
            double d = 0.0;
            // high radial face
            if (i + 1 < nr)
                d -= face_[i + 1] * idr / W_[i];
            else if (wall_ == EdgeBC::dirichlet0)
                d -= 2.0 * face_[nr] * idr / W_[i];
            // low radial face
            if (i > 0)
                d -= face_[i] * idr / W_[i];
            else if (beta_ == -1.0)
                d -= axis_flux_coeff_ / W_[0];
            // vertical
            if (j > 0 && j + 1 < g.nz)
                d -= 2.0 * idz2;
            else if (lid_ == EdgeBC::dirichlet0)
                d -= 3.0 * idz2;
            else
                d -= 1.0 * idz2;
            diag_[g.idx(i, j)] = d;
        }
    }
}

void RadialFluxOp::apply(const std::vector<double>& x, std::vector<double>& y) const {
    const Grid& g = grid_;
    const int nr = g.nr, nz = g.nz;
    y.assign(g.cells(), 0.0);
    const double idr = 1.0 / g.dr, idz2 = 1.0 / (g.dz * g.dz);
    for (int j = 0; j < nz; ++j) {
        for (int i = 0; i < nr; ++i) {
            const int n = g.idx(i, j);
            const double xc = x[n];
            // radial fluxes
            double fhi, flo;
            if (i + 1 < nr)
                fhi = face_[i + 1] * (x[n + 1] - xc) * idr;
            else
                fhi = (wall_ == EdgeBC::dirichlet0)
                          ? face_[nr] * (-2.0 * xc) * idr
                          : 0.0;
            if (i > 0)
                flo = face_[i] * (xc - x[n - 1]) * idr;
            else
                flo = (beta_ == -1.0) ? axis_flux_coeff_ * xc : 0.0;
            double val = (fhi - flo) / W_[i];
            // vertical part
            double zhi, zlo;
            if (j + 1 < nz)
                zhi = x[n + nr] - xc;
            else
                zhi = (lid_ == EdgeBC::dirichlet0) ? -2.0 * xc : 0.0;
            if (j > 0)
                zlo = xc - x[n - nr];
            else
                zlo = (lid_ == EdgeBC::dirichlet0) ? 2.0 * xc : 0.0;
            val += (zhi - zlo) * idz2;
            y[n] = val;
        }
    }
}

double RadialFluxOp::inner(const std::vector<double>& x,
                           const std::vector<double>& y) const {
    double acc = 0.0;
    for (int j = 0; j < grid_.nz; ++j) {
        double row = 0.0;
        for (int i = 0; i < grid_.nr; ++i)
            row += x[grid_.idx(i, j)] * y[grid_.idx(i, j)] * W_[i];
        acc += row;
    }
    return acc * grid_.dz;
}

ShiftedSolver::ShiftedSolver(const RadialFluxOp& op, double shift, double scale,
                             std::vector<double> diag_term)
    : op_(op), shift_(shift), scale_(scale), extra_(std::move(diag_term)) {
    const int n = op.grid().cells();
    if (!extra_.empty() && static_cast<int>(extra_.size()) != n)
        throw DimensionError("ShiftedSolver: diagonal term size mismatch");
    precond_.resize(n);
    for (int k = 0; k < n; ++k) {
        double d = shift_ - scale_ * op.diag()[k];
        if (!extra_.empty()) d += extra_[k];
        precond_[k] = 1.0 / d;
    }
}

void ShiftedSolver::apply(const std::vector<double>& x, std::vector<double>& y) const {
    op_.apply(x, y);
    const int n = static_cast<int>(x.size());
    for (int k = 0; k < n; ++k) {
        y[k] = shift_ * x[k] - scale_ * y[k];
        if (!extra_.empty()) y[k] += extra_[k] * x[k];
    }
}

std::vector<double> ShiftedSolver::solve(const std::vector<double>& b,
                                         SolveInfo* info, double tol,
                                         int max_iter) const {
    const Grid& g = op_.grid();
    const int n = g.cells();
    if (static_cast<int>(b.size()) != n)
        throw DimensionError("ShiftedSolver::solve: rhs size mismatch");
    if (max_iter < 0) max_iter = 50 * (g.nr + g.nz);

    std::vector<double> x(n, 0.0);
    const double bnorm = std::sqrt(op_.inner(b, b));
    if (info) *info = SolveInfo{0, 0.0, true};
    if (bnorm == 0.0) return x;

    std::vector<double> r = b, z(n), p(n), Ap(n);
    for (int k = 0; k < n; ++k) z[k] = precond_[k] * r[k];
    p = z;
    double rz = op_.inner(r, z);
    double rel = 1.0;
    int it = 0;
    for (; it < max_iter; ++it) {
        apply(p, Ap);
        const double pAp = op_.inner(p, Ap);
        if (pAp <= 0.0) break;  // loss of definiteness: bail to the check below
        const double alpha = rz / pAp;
        for (int k = 0; k < n; ++k) {
            x[k] += alpha * p[k];
            r[k] -= alpha * Ap[k];
        }
        rel = std::sqrt(op_.inner(r, r)) / bnorm;
        if (rel <= tol) {
            ++it;
            break;
        }
        for (int k = 0; k < n; ++k) z[k] = precond_[k] * r[k];
        const double rz_new = op_.inner(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
    }
    if (info) {
        info->iterations = it;
        info->rel_residual = rel;
        info->converged = (rel <= tol);
    }
    if (rel > tol)
        throw NumericalError("conjugate gradient stalled at relative residual " +
                             std::to_string(rel));
    return x;
}

EllipticOperator::EllipticOperator(EllipticKind kind, const Grid& g)
    : kind_(kind),
      flux_(kind == EllipticKind::stream ? 1.0 : 3.0, g, EdgeBC::dirichlet0,
            EdgeBC::dirichlet0) {
    if (kind == EllipticKind::stream) {
        diag_term_.resize(g.cells());
        for (int j = 0; j < g.nz; ++j)
            for (int i = 0; i < g.nr; ++i)
                diag_term_[g.idx(i, j)] = 1.0 / (g.r[i] * g.r[i]);
    }
}

void EllipticOperator::apply(const std::vector<double>& x,
                             std::vector<double>& y) const {
    flux_.apply(x, y);
    const int n = static_cast<int>(x.size());
    for (int k = 0; k < n; ++k) {
        y[k] = -y[k];
        if (!diag_term_.empty()) y[k] += diag_term_[k] * x[k];
    }
}

static ScalarField run_solve(EllipticKind kind, const ScalarField& rhs,
                             const Grid& g, SolveInfo* info, double tol,
                             Parity out_parity) {
    EllipticOperator op(kind, g);
    ShiftedSolver solver(op.flux_op(), 0.0, 1.0, op.diag_term());
    SolveInfo local;
    std::vector<double> x = solver.solve(rhs.v, &local, tol);
    if (info) *info = local;
    ScalarField out(g, out_parity, EdgeBC::dirichlet0, EdgeBC::dirichlet0);
    out.v = std::move(x);
    return out;
}

ScalarField solve_modified_stream(const ScalarField& gamma, const Grid& g,
                                  SolveInfo* info, double tol) {
    require_match(gamma, g, "solve_modified_stream");
    if (gamma.parity != Parity::even)
        throw ContractError("solve_modified_stream: Gamma must carry even parity");
    return run_solve(EllipticKind::modified, gamma, g, info, tol, Parity::even);
}

ScalarField solve_stream(const ScalarField& omega_phi, const Grid& g,
                         SolveInfo* info, double tol) {
    require_match(omega_phi, g, "solve_stream");
    if (omega_phi.parity != Parity::odd)
        throw ContractError("solve_stream: omega_phi must carry odd parity");
    return run_solve(EllipticKind::stream, omega_phi, g, info, tol, Parity::odd);
}

std::vector<double> dense_solve(const EllipticOperator& op,
                                const std::vector<double>& rhs) {
    const int n = static_cast<int>(rhs.size());
    if (n > 4096)
        throw ContractError("dense_solve: oracle restricted to Nr*Nz <= 4096");
    std::vector<double> A(static_cast<size_t>(n) * n, 0.0);
    std::vector<double> e(n, 0.0), col(n);
    for (int k = 0; k < n; ++k) {
        e[k] = 1.0;
        op.apply(e, col);
        for (int i = 0; i < n; ++i) A[static_cast<size_t>(i) * n + k] = col[i];
        e[k] = 0.0;
    }
    std::vector<double> x = rhs;
    std::vector<int> piv(n);
    for (int k = 0; k < n; ++k) piv[k] = k;
    for (int k = 0; k < n; ++k) {
        int best = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(A[static_cast<size_t>(i) * n + k]) >
                std::abs(A[static_cast<size_t>(best) * n + k]))
                best = i;
        if (best != k) {
            for (int c = 0; c < n; ++c)
                std::swap(A[static_cast<size_t>(k) * n + c],
                          A[static_cast<size_t>(best) * n + c]);
            std::swap(x[k], x[best]);
        }
        const double pivv = A[static_cast<size_t>(k) * n + k];
        for (int i = k + 1; i < n; ++i) {
            const double m = A[static_cast<size_t>(i) * n + k] / pivv;
            if (m == 0.0) continue;
            for (int c = k; c < n; ++c)
                A[static_cast<size_t>(i) * n + c] -=
                    m * A[static_cast<size_t>(k) * n + c];
            x[i] -= m * x[k];
        }
    }
    for (int k = n - 1; k >= 0; --k) {
        double s = x[k];
        for (int c = k + 1; c < n; ++c)
            s -= A[static_cast<size_t>(k) * n + c] * x[c];
        x[k] = s / A[static_cast<size_t>(k) * n + k];
    }
    return x;
}

// ---------------------------------------------------------------------------
// Estimate reports

static double sq_l2(const ScalarField& f, const Grid& g) {
    double acc = 0.0;
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i)
            acc += f.at(i, j) * f.at(i, j) * g.weight(i, j);
    return acc;
}

static void check_residual(const ScalarField& psi1, const ScalarField& gamma,
                           const Grid& g) {
    EllipticOperator op(EllipticKind::modified, g);
    std::vector<double> y;
    op.apply(psi1.v, y);
    double num = 0.0, den = 0.0;
    for (int k = 0; k < g.cells(); ++k) {
        const double d = y[k] - gamma.v[k];
        num += d * d;
        den += gamma.v[k] * gamma.v[k];
    }
    const double scale = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    if (scale > 1e-6)
        throw ContractError("estimate report: psi1 does not solve the modified "
                            "stream problem (residual " + std::to_string(scale) + ")");
}

static double trace_sq_dz(const std::vector<double>& t, const Grid& g) {
    double acc = 0.0;
    for (double v : t) acc += v * v;
    return acc * g.dz;
}

EstimateReport h2_report(const ScalarField& psi1, const ScalarField& gamma,
                         const Grid& g) {
    require_match(psi1, g, "h2_report");
    require_match(gamma, g, "h2_report");
    check_residual(psi1, gamma, g);

    ScalarField pr = d_dr(psi1, g);
    ScalarField pz = d_dz(psi1, g);
    ScalarField prr = d_dr(pr, g);
    ScalarField prz = d_dz(pr, g);
    ScalarField pzz = d_dz(pz, g);

    ScalarField pr_over_r = pr;
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i) pr_over_r.at(i, j) /= g.r[i];

    EstimateReport rep;
    rep.terms["psi1_rr_sq"] = sq_l2(prr, g);
    rep.terms["psi1_rz_sq"] = sq_l2(prz, g);
    rep.terms["psi1_zz_sq"] = sq_l2(pzz, g);
    rep.terms["psi1_r_over_r_sq"] = sq_l2(pr_over_r, g);
    rep.terms["axis_trace_psi1_z_sq"] = trace_sq_dz(axis_trace(pz, g), g);
    rep.terms["wall_trace_psi1_r_sq"] = trace_sq_dz(wall_trace(pr, g), g);
    for (const auto& [k, v] : rep.terms) rep.lhs_total += v, (void)k;
    rep.rhs = sq_l2(gamma, g);
    rep.applicable = rep.rhs > 1e-300;
    rep.ratio = rep.applicable ? rep.lhs_total / rep.rhs : 0.0;
    return rep;
}

EstimateReport h3_report(const ScalarField& psi1, const ScalarField& gamma,
                         const Grid& g) {
    require_match(psi1, g, "h3_report");
    require_match(gamma, g, "h3_report");
    check_residual(psi1, gamma, g);

    ScalarField pz = d_dz(psi1, g);
    ScalarField prz = d_dz(d_dr(psi1, g), g);
    ScalarField pzz = d_dz(pz, g);
    ScalarField prrz = d_dr(d_dr(pz, g), g);
    ScalarField przz = d_dr(pzz, g);
    ScalarField pzzz = d_dz(pzz, g);

    ScalarField prz_over_r = prz;
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i) prz_over_r.at(i, j) /= g.r[i];

    EstimateReport rep;
    rep.terms["psi1_rrz_sq"] = sq_l2(prrz, g);
    rep.terms["psi1_rzz_sq"] = sq_l2(przz, g);
    rep.terms["psi1_zzz_sq"] = sq_l2(pzzz, g);
    rep.terms["axis_trace_psi1_zz_sq"] = trace_sq_dz(axis_trace(pzz, g), g);
    rep.terms["wall_trace_psi1_rz_sq"] = trace_sq_dz(wall_trace(prz, g), g);
    rep.terms["psi1_rz_over_r_sq"] = sq_l2(prz_over_r, g);
    for (const auto& [k, v] : rep.terms) rep.lhs_total += v, (void)k;

    ScalarField gz = d_dz(gamma, g);
    rep.rhs = sq_l2(gz, g);
    rep.applicable = rep.rhs > 1e-300;
    rep.ratio = rep.applicable ? rep.lhs_total / rep.rhs : 0.0;
    return rep;
}

}  // namespace cylflow
