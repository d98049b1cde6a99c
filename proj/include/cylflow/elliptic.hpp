#pragma once

#include <map>
#include <string>
#include <vector>

#include "cylflow/field.hpp"

namespace cylflow {

/// Second-order flux-form discretization of the operator family
///     L f = r^-beta (r^beta f_,r)_,r + f_,zz   (= f_,rr + (beta/r) f_,r + f_,zz)
/// on the cell-centered grid. The face weights r^beta close the axis naturally
/// for beta >= 1; beta = -1 (the swirl operator Delta - (2/r)d_r) uses a
/// one-cell r^2 fit for the axis flux, which keeps the row exact on r^2 and
/// the matrix symmetric and monotone. Cell measures W_i = int_cell r^beta dr
/// make the stencil self-adjoint in the inner product sum f g W_i dz.
class RadialFluxOp {
public:
    RadialFluxOp(double beta, const Grid& g, EdgeBC wall, EdgeBC lid);

    /// y = L x.
    void apply(const std::vector<double>& x, std::vector<double>& y) const;

    /// Symmetry weight of cell (i,j): W_i * dz.
    double weight(int i, int /*j*/) const { return W_[i] * grid_.dz; }
    double inner(const std::vector<double>& x, const std::vector<double>& y) const;

    /// Diagonal of L (for Jacobi preconditioning of shifted systems).
    const std::vector<double>& diag() const { return diag_; }

    const Grid& grid() const { return grid_; }
    double beta() const { return beta_; }

private:
    double beta_;
    Grid grid_;
    EdgeBC wall_, lid_;
    std::vector<double> W_;            // radial cell measures, size nr
    std::vector<double> face_;         // r^beta at faces 0..nr (face_[0] axis)
    std::vector<double> diag_;
    double axis_flux_coeff_ = 0.0;     // beta = -1: F_axis = coeff * f(0,j)
    friend class ShiftedSolver;
};

/// Conjugate-gradient solve of (shift*I + scale*(-L) + diag_term) x = b in the
/// operator's weighted inner product, Jacobi preconditioned.
struct SolveInfo {
    int iterations = 0;
    double rel_residual = 0.0;
    bool converged = false;
};

class ShiftedSolver {
public:
    /// diag_term may be empty (treated as zero); entries must be >= 0.
    ShiftedSolver(const RadialFluxOp& op, double shift, double scale,
                  std::vector<double> diag_term = {});
    std::vector<double> solve(const std::vector<double>& b, SolveInfo* info,
                              double tol = 1e-10, int max_iter = -1) const;
    void apply(const std::vector<double>& x, std::vector<double>& y) const;
    const RadialFluxOp& op() const { return op_; }

private:
    const RadialFluxOp& op_;
    double shift_, scale_;
    std::vector<double> extra_;
    std::vector<double> precond_;  // inverse diagonal
};

enum class EllipticKind {
    stream,    // -Delta psi + psi/r^2 = omega_phi   (beta = 1 + diagonal)
    modified,  // -Delta psi1 - (2/r) psi1_,r = Gamma (beta = 3)
};

/// Assembled operator for one of the stream-function problems with
/// homogeneous Dirichlet data on S and parity closure at the axis.
class EllipticOperator {
public:
    EllipticOperator(EllipticKind kind, const Grid& g);
    const RadialFluxOp& flux_op() const { return flux_; }
    const std::vector<double>& diag_term() const { return diag_term_; }
    EllipticKind kind() const { return kind_; }
    /// y = A x with A the positive-definite left-hand side.
    void apply(const std::vector<double>& x, std::vector<double>& y) const;
    double inner(const std::vector<double>& x, const std::vector<double>& y) const {
        return flux_.inner(x, y);
    }

private:
    EllipticKind kind_;
    RadialFluxOp flux_;
    std::vector<double> diag_term_;
};

ScalarField solve_modified_stream(const ScalarField& gamma, const Grid& g,
                                  SolveInfo* info = nullptr, double tol = 1e-10);
ScalarField solve_stream(const ScalarField& omega_phi, const Grid& g,
                         SolveInfo* info = nullptr, double tol = 1e-10);

/// Dense Gaussian-elimination oracle; restricted to small grids.
std::vector<double> dense_solve(const EllipticOperator& op,
                                const std::vector<double>& rhs);

/// Named nonnegative terms of one elliptic estimate, its c-free right-hand
/// side and the empirical lhs/rhs ratio.
struct EstimateReport {
    std::map<std::string, double> terms;
    double lhs_total = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool applicable = true;  // false when rhs vanishes
};

EstimateReport h2_report(const ScalarField& psi1, const ScalarField& gamma,
                         const Grid& g);
EstimateReport h3_report(const ScalarField& psi1, const ScalarField& gamma,
                         const Grid& g);

}  // namespace cylflow
