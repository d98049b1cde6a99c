#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "cylflow/cases.hpp"
#include "cylflow/certificates.hpp"

using namespace cylflow;
constexpr double kPi = std::numbers::pi;

namespace {

RunResult decay_run(int n = 32, double T = 0.1, double amp = 1.0,
                    AdvectionScheme adv = AdvectionScheme::upwind2) {
    SimConfig cfg;
    cfg.Nr = n;
    cfg.Nz = n;
    cfg.dt = 1e-3;
    cfg.T = T;
    cfg.advection = adv;
    cfg.record_every = 5;
    Grid g = make_grid(cfg.R, cfg.a, cfg.Nr, cfg.Nz);
    ScalarField u0 = sample(g, Parity::odd2, EdgeBC::dirichlet0, EdgeBC::neumann0,
                            [amp](double r, double z) {
                                const double c = std::cos(kPi * z / 2.0);
                                return amp * r * r * (1 - r) * (1 - r) * c * c;
                            });
    ScalarField gamma0(g, Parity::even, EdgeBC::dirichlet0, EdgeBC::dirichlet0);
    RunResult rr = run(cfg, u0, gamma0, Forcing{});
    REQUIRE(rr.completed);
    return rr;
}

RunResult zero_run() {
    SimConfig cfg;
    cfg.Nr = 16;
    cfg.Nz = 16;
    cfg.dt = 1e-3;
    cfg.T = 0.01;
    Grid g = make_grid(cfg.R, cfg.a, cfg.Nr, cfg.Nz);
    ScalarField u0(g, Parity::odd2, EdgeBC::dirichlet0, EdgeBC::neumann0);
    ScalarField gamma0(g, Parity::even, EdgeBC::dirichlet0, EdgeBC::dirichlet0);
    return run(cfg, u0, gamma0, Forcing{});
}

}  // namespace

TEST_CASE("data_constants") {
    Grid g = make_grid(1.0, 1.0, 24, 24);
    SUBCASE("zero data leaves only the viscosity constant") {
        ScalarField u0(g, Parity::odd2, EdgeBC::dirichlet0, EdgeBC::neumann0);
        ScalarField gamma0(g, Parity::even, EdgeBC::dirichlet0, EdgeBC::dirichlet0);
        State st = make_state(u0, gamma0, g);
        DataConstants dc = data_constants(st, Forcing{}, g, 1.0, 1.0);
        CHECK(dc.D1 == 0.0);
        CHECK(dc.D2 == 0.0);
        CHECK(dc.Dstar == 0.0);
        CHECK(dc.D3 == 0.0);
        CHECK(dc.G2 == 0.0);
        CHECK(dc.D8_sq == doctest::Approx(27.0 / 4.0).epsilon(1e-15));
    }
    SUBCASE("viscosity branch of the max constant") {
        ScalarField u0(g, Parity::odd2, EdgeBC::dirichlet0, EdgeBC::neumann0);
        ScalarField gamma0(g, Parity::even, EdgeBC::dirichlet0, EdgeBC::dirichlet0);
        State st = make_state(u0, gamma0, g);
        CHECK(data_constants(st, Forcing{}, g, 1.0, 1.0).D8_sq ==
              doctest::Approx(6.75));
        CHECK(data_constants(st, Forcing{}, g, 1.0, 4.0).D8_sq ==
              doctest::Approx(2.0));  // nu^2/8 branch
        CHECK(data_constants(st, Forcing{}, g, 1.0, 0.5).D8_sq ==
              doctest::Approx(27.0 / 0.5).epsilon(1e-12));  // 27/(4 nu^3)
    }
    SUBCASE("unforced D1 is sqrt(2) times the initial energy norm") {
        ScalarField u0 = sample(g, Parity::odd2, EdgeBC::dirichlet0,
                                EdgeBC::neumann0, [](double r, double z) {
                                    return r * r * (1 - r) * (1 + 0.2 * z * z);
                                });
        ScalarField gamma0(g, Parity::even, EdgeBC::dirichlet0, EdgeBC::dirichlet0);
        State st = make_state(u0, gamma0, g);
        DataConstants dc = data_constants(st, Forcing{}, g, 1.0, 1.0);
        const double v0 = lp_norm(st.v.vphi, 2.0, g);
        CHECK(dc.D1 == doctest::Approx(std::sqrt(2.0) * v0).epsilon(1e-12));
        // normalized data realizes the frozen value sqrt(2)
        ScalarField u0n = u0;
        for (double& x : u0n.v) x /= v0;
        State stn = make_state(u0n, gamma0, g);
        CHECK(data_constants(stn, Forcing{}, g, 1.0, 1.0).D1 ==
              doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("constants are monotone under data scaling") {
        ScalarField u0 = sample(g, Parity::odd2, EdgeBC::dirichlet0,
                                EdgeBC::neumann0, [](double r, double z) {
                                    return r * r * (1 - r) * (1 - 0.3 * z);
                                });
        ScalarField gamma0 = sample(g, Parity::even, EdgeBC::dirichlet0,
                                    EdgeBC::dirichlet0, [](double r, double z) {
                                        const double q = (1 - r * r) * (1 - z * z);
                                        return 0.4 * q * q;
                                    });
        Forcing f;
        f.fphi = [](double r, double z, double t) {
            return 0.2 * r * (1 - r) * std::cos(z) * std::exp(-t);
        };
        State st = make_state(u0, gamma0, g);
        DataConstants small = data_constants(st, f, g, 0.5, 1.0);
        for (double& x : u0.v) x *= 2.0;
        for (double& x : gamma0.v) x *= 2.0;
        Forcing f2;
        f2.fphi = [&f](double r, double z, double t) { return 2.0 * f.fphi(r, z, t); };
        State st2 = make_state(u0, gamma0, g);
        DataConstants big = data_constants(st2, f2, g, 0.5, 1.0);
        CHECK(big.D1 >= small.D1);
        CHECK(big.D2 >= small.D2);
        CHECK(big.D3 >= small.D3);
        CHECK(big.D4 >= small.D4);
        CHECK(big.D5 >= small.D5);
        CHECK(big.D6 >= small.D6);
        CHECK(big.D7 >= small.D7);
        CHECK(big.G2 >= small.G2);
    }
}

TEST_CASE("small_data_fixed_point") {
    SUBCASE("linear case converges in one step") {
        FixedPointResult r = small_data_fixed_point(0.0, 0.37);
        CHECK(r.converged);
        CHECK(r.M == doctest::Approx(0.37));
    }
    SUBCASE("zero source gives zero") {
        FixedPointResult r = small_data_fixed_point(3.0, 0.0);
        CHECK(r.converged);
        CHECK(r.M == 0.0);
    }
    SUBCASE("kappa=3, G2=1/8: converged root verified by substitution") {
        FixedPointResult r = small_data_fixed_point(3.0, 0.125);
        CHECK(r.converged);
        CHECK(r.hypothesis_ok);  // exactly at the smallness threshold
        CHECK(r.residual < 1e-12);
        // independent oracle: re-run the recursion and substitute
        double M = 0.125;
        for (int k = 0; k < 200; ++k) M = 3.0 * M * M * M + 0.125;
        CHECK(r.M == doctest::Approx(M).epsilon(1e-12));
        CHECK(std::abs(M - (3.0 * M * M * M + 0.125)) < 1e-14);
        CHECK(r.M <= std::cbrt(0.125) + 1e-12);  // M <= G2^(1/3)
        CHECK(r.M > 0.125);
    }
    SUBCASE("geometric contraction of the increments") {
        double M = 0.125, prev_inc = 0.0;
        bool checked = false;
        for (int k = 0; k < 30; ++k) {
            const double next = 3.0 * M * M * M + 0.125;
            const double inc = std::abs(next - M);
            if (k > 2 && prev_inc > 1e-15) {
                CHECK(inc / prev_inc < 1.0);
                checked = true;
            }
            prev_inc = inc;
            M = next;
        }
        CHECK(checked);
    }
    SUBCASE("hypothesis violated by a factor of ten diverges") {
        FixedPointResult r = small_data_fixed_point(3.0, 1.25);
        CHECK_FALSE(r.hypothesis_ok);
        CHECK(r.diverged);
    }
    SUBCASE("negative input rejected") {
        CHECK_THROWS_AS(small_data_fixed_point(-1.0, 0.1), DomainError);
    }
}

TEST_CASE("strict ledgers on runs") {
    SUBCASE("zero run passes trivially") {
        RunResult rr = zero_run();
        RunData rd{rr, Forcing{}};
        LedgerEntry e = energy_ledger(rd, rr.config.nu);
        CHECK(e.status == LedgerStatus::pass);
        CHECK(e.lhs == 0.0);
        LedgerEntry m = max_principle_ledger(rd);
        CHECK(m.status == LedgerStatus::pass);
    }
    SUBCASE("unforced decay passes with margin") {
        RunResult rr = decay_run();
        RunData rd{rr, Forcing{}};
        LedgerEntry e = energy_ledger(rd, rr.config.nu);
        CHECK(e.status == LedgerStatus::pass);
        CHECK(e.lhs < e.rhs);  // strict margin: lhs <= |v0|^2 < 2 |v0|^2
        LedgerEntry m = max_principle_ledger(rd);
        CHECK(m.status == LedgerStatus::pass);
        CHECK(m.lhs <= m.rhs + 1e-10);
    }
    SUBCASE("constant swirl source fills the budget exactly") {
        SimConfig cfg;
        cfg.Nr = 24;
        cfg.Nz = 24;
        cfg.dt = 1e-3;
        cfg.T = 0.1;
        Grid g = make_grid(cfg.R, cfg.a, cfg.Nr, cfg.Nz);
        ScalarField u0 = sample(g, Parity::odd2, EdgeBC::dirichlet0,
                                EdgeBC::neumann0, [](double r, double z) {
                                    const double c = std::cos(kPi * z / 2.0);
                                    return 0.5 * r * r * (1 - r) * (1 - r) * c * c;
                                });
        ScalarField gamma0(g, Parity::even, EdgeBC::dirichlet0, EdgeBC::dirichlet0);
        Forcing f;
        f.fphi = [](double r, double, double) { return 1.0 / r; };  // f0 = 1
        RunResult rr = run(cfg, u0, gamma0, f);
        REQUIRE(rr.completed);
        RunData rd{rr, f};
        LedgerEntry m = max_principle_ledger(rd);
        CHECK(m.status == LedgerStatus::pass);
        CHECK(m.rhs ==
              doctest::Approx(0.1 + rr.records.front().u_inf).epsilon(1e-12));
    }
    SUBCASE("forced run stays within the explicit budget") {
        SimConfig cfg;
        cfg.Nr = 32;
        cfg.Nz = 32;
        cfg.dt = 1e-3;
        cfg.T = 0.1;
        cfg.record_every = 5;
        Grid g = make_grid(cfg.R, cfg.a, cfg.Nr, cfg.Nz);
        ScalarField u0(g, Parity::odd2, EdgeBC::dirichlet0, EdgeBC::neumann0);
        ScalarField gamma0(g, Parity::even, EdgeBC::dirichlet0, EdgeBC::dirichlet0);
        Forcing f;
        f.fphi = [](double r, double z, double t) {
            return 0.5 * r * (1 - r * r) * std::cos(kPi * z) * std::exp(-2 * t);
        };
        RunResult rr = run(cfg, u0, gamma0, f);
        REQUIRE(rr.completed);
        RunData rd{rr, f};
        CHECK(energy_ledger(rd, cfg.nu).status == LedgerStatus::pass);
        LedgerEntry m = max_principle_ledger(rd);
        CHECK(m.status == LedgerStatus::pass);
        CHECK(m.rhs > 0.0);
    }
}

TEST_CASE("tracked ledgers") {
    RunResult rr = decay_run();
    RunData rd{rr, Forcing{}};
    SUBCASE("swirl gradient estimates") {
        auto [a, b] = gradient_swirl_ledger(rd, rr.config.nu);
        CHECK(a.status == LedgerStatus::tracked);
        CHECK(b.status == LedgerStatus::tracked);
        CHECK(a.ratio > 0.0);
        CHECK(std::isfinite(a.ratio));
        CHECK(std::isfinite(b.ratio));
    }
    SUBCASE("zero run is skipped") {
        RunResult zr = zero_run();
        RunData zd{zr, Forcing{}};
        auto [a, b] = gradient_swirl_ledger(zd, zr.config.nu);
        CHECK(a.status == LedgerStatus::skipped);
        CHECK(b.status == LedgerStatus::skipped);
    }
    SUBCASE("scaling leaves the tracked ratio comparable") {
        RunResult big = decay_run(32, 0.1, 2.0);
        RunData bd{big, Forcing{}};
        auto [a1, b1] = gradient_swirl_ledger(rd, rr.config.nu);
        auto [a2, b2] = gradient_swirl_ledger(bd, big.config.nu);
        CHECK(a2.ratio / a1.ratio > 0.5);
        CHECK(a2.ratio / a1.ratio < 2.0);
        CHECK(b2.ratio / b1.ratio > 0.4);
        CHECK(b2.ratio / b1.ratio < 2.5);
    }
    SUBCASE("order reduction") {
        CHECK_THROWS_AS(order_reduction_ledger(rd, 1.0, 1.5), DomainError);
        RunResult zr = zero_run();
        RunData zd{zr, Forcing{}};
        CHECK(order_reduction_ledger(zd, 1.0, 0.1).status ==
              LedgerStatus::skipped);
        LedgerEntry e = order_reduction_ledger(rd, 1.0, 0.1);
        CHECK(e.status == LedgerStatus::tracked);
        CHECK(std::isfinite(e.ratio));
        // right side grows with the data amplitude
        RunResult big = decay_run(32, 0.1, 2.0);
        RunData bd{big, Forcing{}};
        LedgerEntry e2 = order_reduction_ledger(bd, 1.0, 0.1);
        CHECK(e2.rhs >= e.rhs);
    }
    SUBCASE("azimuthal velocity bounds") {
        auto [sup, snorm] = vphi_bounds_ledger(rd, 1.0, 4.0);
        CHECK(sup.mode == LedgerMode::strict);
        CHECK(sup.status == LedgerStatus::pass);
        CHECK(snorm.status == LedgerStatus::tracked);
        CHECK(snorm.lhs <= snorm.rhs);
        CHECK(snorm.note.find("hypothesis") != std::string::npos);
        // zero swirl: both sides vanish, the s-norm entry is skipped
        RunResult zr = zero_run();
        RunData zd{zr, Forcing{}};
        auto [zsup, zsnorm] = vphi_bounds_ledger(zd, 1.0, 4.0);
        CHECK(zsup.status == LedgerStatus::pass);
        CHECK(zsup.lhs == 0.0);
        CHECK(zsnorm.status == LedgerStatus::skipped);
    }
    SUBCASE("stream function energies") {
        auto [a, b] = psi_energy_ledger(rd);
        CHECK(a.status == LedgerStatus::tracked);
        CHECK(std::isfinite(a.ratio));
        CHECK(b.status == LedgerStatus::tracked);
    }
    SUBCASE("combined energy of the rescaled vorticity") {
        LedgerEntry e = phi_gamma_energy_ledger(rd, 1.0, 0.1);
        CHECK(e.status == LedgerStatus::tracked);
        CHECK(std::isfinite(e.ratio));
    }
    SUBCASE("interaction bound") {
        LedgerEntry e = interaction_bound_ledger(rd, 4.0, 0.5, 1.0);
        CHECK((e.status == LedgerStatus::tracked ||
               e.status == LedgerStatus::skipped));
        CHECK_THROWS_AS(interaction_bound_ledger(rd, 2.0, 0.5, 1.0), DomainError);
        CHECK_THROWS_AS(interaction_bound_ledger(rd, 4.0, 1.5, 1.0), DomainError);
    }
    SUBCASE("elliptic estimate wrappers") {
        LedgerEntry h2 = h2_ledger(rd);
        CHECK(h2.status == LedgerStatus::tracked);
        LedgerEntry h3 = h3_ledger(rd);
        CHECK((h3.status == LedgerStatus::tracked ||
               h3.status == LedgerStatus::skipped));
    }
}

TEST_CASE("interaction integral") {
    SUBCASE("any zero factor kills it") {
        RunResult rr = zero_run();
        CHECK(interaction_integral(rr.series) == 0.0);
    }
    SUBCASE("reflection in z leaves it unchanged") {
        RunResult rr = decay_run(24, 0.05);
        TimeSeries flipped = rr.series;
        const Grid& g = rr.grid;
        for (State& st : flipped.snaps) {
            auto flip = [&](ScalarField& f) {
                ScalarField orig = f;
                for (int j = 0; j < g.nz; ++j)
                    for (int i = 0; i < g.nr; ++i)
                        f.at(i, j) = orig.at(i, g.nz - 1 - j);
            };
            flip(st.phi);
            flip(st.gamma);
            flip(st.v.vphi);
        }
        RunData rd{rr, Forcing{}};
        (void)rd;
        CHECK(interaction_integral(flipped) ==
              doctest::Approx(interaction_integral(rr.series)).epsilon(1e-12));
    }
    SUBCASE("refinement consistency") {
        const double i16 = interaction_integral(decay_run(16, 0.05).series);
        const double i32 = interaction_integral(decay_run(32, 0.05).series);
        const double i48 = interaction_integral(decay_run(48, 0.05).series);
        CHECK(std::abs(i32 - i48) < std::abs(i16 - i48));
    }
}

TEST_CASE("x trajectory") {
    SUBCASE("zero run stays zero") {
        RunResult rr = zero_run();
        for (auto [t, x] : x_trajectory(rr.series)) {
            CHECK(x == 0.0);
            (void)t;
        }
    }
    SUBCASE("nondecreasing along every run") {
        RunResult rr = decay_run();
        auto xs = x_trajectory(rr.series);
        for (size_t k = 1; k < xs.size(); ++k)
            CHECK(xs[k].second >= xs[k - 1].second - 1e-12);
        // dense in-run record agrees qualitatively
        for (size_t k = 1; k < rr.records.size(); ++k)
            CHECK(rr.records[k].X >= rr.records[k - 1].X - 1e-12);
    }
}

TEST_CASE("certificate report") {
    SUBCASE("zero run produces no failures") {
        RunResult rr = zero_run();
        RunData rd{rr, Forcing{}};
        CertificateReport rep = certificate_report(rd);
        CHECK(rep.all_strict_pass());
        for (const LedgerEntry& e : rep.entries)
            CHECK(e.status != LedgerStatus::fail);
    }
    SUBCASE("decaying scenario: strict entries pass, report is deterministic") {
        RunResult rr = decay_run();
        RunData rd{rr, Forcing{}};
        CertificateReport a = certificate_report(rd);
        CertificateReport b = certificate_report(rd);
        CHECK(a.all_strict_pass());
        REQUIRE(a.entries.size() == b.entries.size());
        for (size_t k = 0; k < a.entries.size(); ++k) {
            CHECK(a.entries[k].lhs == b.entries[k].lhs);
            CHECK(a.entries[k].rhs == b.entries[k].rhs);
        }
        CHECK(a.lambdas.size() == rr.config.s_list.size());
        for (const LambdaRecord& lr : a.lambdas) {
            if (!lr.defined) continue;
            CHECK(lr.value <=
                  std::pow(2.0 * kPi * rr.config.a * rr.config.R * rr.config.R,
                           1.0 / lr.s) + 1e-12);
        }
    }
}
