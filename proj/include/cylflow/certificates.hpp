#pragma once

#include <optional>

#include "cylflow/dynamics.hpp"

namespace cylflow {

/// Constants computed from the initial data and the forcing. D1 follows the
/// energy-inequality convention D1^2 = 3|f|^2_{2,1} + 2|v(0)|^2; the additive
/// variant is reported alongside as d1_additive.
struct DataConstants {
    double D1 = 0, d1_additive = 0;
    double D2 = 0, Dstar = 0, D3 = 0, D4 = 0, D5 = 0, D6 = 0, D7 = 0;
    double D8_sq = 0;
    double G = 0, G1 = 0, G2 = 0;
    double nu = 1.0;
    double horizon = 0.0;
};

DataConstants data_constants(const State& initial, const Forcing& f,
                             const Grid& g, double horizon, double nu,
                             int time_samples = 64);

enum class LedgerMode { strict, tracked };
enum class LedgerStatus { pass, fail, tracked, skipped };

/// One evaluated inequality: computed left side, right side with every
/// unspecified constant set to one, and either a strict verdict or a
/// recorded ratio.
struct LedgerEntry {
    std::string name;
    LedgerMode mode = LedgerMode::tracked;
    LedgerStatus status = LedgerStatus::tracked;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    std::string note;

    bool passed() const { return status != LedgerStatus::fail; }
};

/// Everything the per-run ledgers need.
struct RunData {
    const RunResult& run;
    const Forcing& forcing;
};

LedgerEntry energy_ledger(const RunData& rd, double nu);
LedgerEntry max_principle_ledger(const RunData& rd);
std::pair<LedgerEntry, LedgerEntry> gradient_swirl_ledger(const RunData& rd,
                                                          double nu);
double interaction_integral(const TimeSeries& series);
LedgerEntry order_reduction_ledger(const RunData& rd, double nu, double eps0);
std::pair<LedgerEntry, LedgerEntry> vphi_bounds_ledger(const RunData& rd,
                                                       double nu, double s);
std::pair<LedgerEntry, LedgerEntry> psi_energy_ledger(const RunData& rd);
LedgerEntry phi_gamma_energy_ledger(const RunData& rd, double nu, double delta);
LedgerEntry interaction_bound_ledger(const RunData& rd, double sigma, double d,
                                     double c0);
LedgerEntry h2_ledger(const RunData& rd);
LedgerEntry h3_ledger(const RunData& rd);
LedgerEntry small_data_ledger(const RunData& rd, double nu);

std::vector<std::pair<double, double>> x_trajectory(const TimeSeries& series);

/// Successive approximation M_{n+1} = kappa M_n^3 + G2 from M_0 = G2.
struct FixedPointResult {
    bool converged = false;
    bool diverged = false;
    bool hypothesis_ok = false;  // smallness restriction G2 <= 1/(kappa+1)^(3/2)
    double M = 0.0;
    double residual = 0.0;
    int iterations = 0;
};
FixedPointResult small_data_fixed_point(double kappa, double G2);

struct LambdaRecord {
    double s = 0.0;
    double value = 0.0;
    bool defined = false;
    std::string case_label;  // relative to the configured c0
    double D0 = 0.0;         // case-dependent s-norm bound
};

struct CertificateReport {
    DataConstants constants;
    std::vector<LedgerEntry> entries;
    std::vector<std::pair<double, double>> x_of_t;
    std::vector<LambdaRecord> lambdas;
    double interaction = 0.0;

    bool all_strict_pass() const;
    const LedgerEntry* find(const std::string& name) const;
};

CertificateReport certificate_report(const RunData& rd);

}  // namespace cylflow
