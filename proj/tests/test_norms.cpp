#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "cylflow/norms.hpp"

using namespace cylflow;
constexpr double kPi = std::numbers::pi;

namespace {

ScalarField random_field(const Grid& g, std::mt19937& rng) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    ScalarField f(g, Parity::even, EdgeBC::extrapolate, EdgeBC::extrapolate);
    for (double& x : f.v) x = U(rng);
    return f;
}

// series whose snapshots only vary v_phi / a chosen field by a time factor
TimeSeries scaled_series(const Grid& g, const ScalarField& base,
                         const std::vector<double>& times,
                         const std::function<double(double)>& factor) {
    TimeSeries s;
    s.grid = g;
    for (double t : times) {
        State st;
        st.t = t;
        st.u = ScalarField(g, Parity::odd2, EdgeBC::dirichlet0, EdgeBC::neumann0);
        st.gamma = ScalarField(g, Parity::even, EdgeBC::dirichlet0, EdgeBC::dirichlet0);
        st.psi1 = st.gamma;
        st.phi = ScalarField(g, Parity::even, EdgeBC::extrapolate, EdgeBC::extrapolate);
        st.v.vr = ScalarField(g, Parity::odd, EdgeBC::dirichlet0, EdgeBC::neumann0);
        st.v.vz = ScalarField(g, Parity::even, EdgeBC::neumann0, EdgeBC::dirichlet0);
        st.v.vphi = base;
        for (double& x : st.v.vphi.v) x *= factor(t);
        s.times.push_back(t);
        s.snaps.push_back(std::move(st));
    }
    return s;
}

}  // namespace

TEST_CASE("lp_norm basics") {
    Grid g = make_grid(1.0, 1.0, 32, 32);
    ScalarField ones = sample(g, Parity::even, EdgeBC::extrapolate,
                              EdgeBC::extrapolate, [](double, double) { return 1.0; });
    CHECK(lp_norm(ones, 2.0, g) ==
          doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-13));
    ScalarField r = sample(g, Parity::odd, EdgeBC::extrapolate,
                           EdgeBC::extrapolate, [](double rr, double) { return rr; });
    CHECK(lp_norm(r, kInf, g) == doctest::Approx(1.0 - g.dr / 2).epsilon(1e-15));
    CHECK_THROWS_AS(lp_norm(ones, 0.5, g), DomainError);
}

TEST_CASE("lp_norm of cos z against the closed-form integral") {
    // |cos z|_2^2 = 2pi int_0^1 r dr int_-1^1 cos^2 z dz = pi (1 + sin 2 / 2)
    const double exact = std::sqrt(kPi * (1.0 + std::sin(2.0) / 2.0));
    double errs[2];
    int k = 0;
    for (int n : {32, 64}) {
        Grid g = make_grid(1.0, 1.0, n, n);
        ScalarField f = sample(g, Parity::even, EdgeBC::extrapolate,
                               EdgeBC::extrapolate,
                               [](double, double z) { return std::cos(z); });
        errs[k++] = std::abs(lp_norm(f, 2.0, g) - exact);
    }
    CHECK(errs[0] < 1e-3);
    CHECK(errs[0] / errs[1] > 3.0);
}

TEST_CASE("norm axioms on random data") {
    Grid g = make_grid(1.2, 0.8, 10, 14);
    std::mt19937 rng(11);
    for (double p : {1.0, 2.0, kInf}) {
        for (int trial = 0; trial < 20; ++trial) {
            ScalarField f = random_field(g, rng), h = random_field(g, rng);
            const double alpha = -1.7;
            ScalarField af = f;
            for (double& x : af.v) x *= alpha;
            CHECK(lp_norm(af, p, g) ==
                  doctest::Approx(std::abs(alpha) * lp_norm(f, p, g)).epsilon(1e-12));
            ScalarField fh = f;
            for (int n = 0; n < g.cells(); ++n) fh.v[n] += h.v[n];
            CHECK(lp_norm(fh, p, g) <=
                  lp_norm(f, p, g) + lp_norm(h, p, g) + 1e-12);
        }
    }
}

TEST_CASE("mixed_norm") {
    Grid g = make_grid(1.0, 1.0, 16, 16);
    ScalarField base = sample(g, Parity::odd, EdgeBC::dirichlet0, EdgeBC::neumann0,
                              [](double r, double z) { return r * (1 - r) * (2 - z); });
    auto vphi = [](const State& st) { return st.v.vphi; };

    SUBCASE("constant in time, q = 1 integrates to c * T") {
        std::vector<double> times;
        for (int k = 0; k <= 10; ++k) times.push_back(0.13 * k);
        TimeSeries s = scaled_series(g, base, times, [](double) { return 1.0; });
        const double c = lp_norm(base, 2.0, g);
        CHECK(mixed_norm(s, vphi, NormSpec{2.0, 1.0, 0, 0.0}) ==
              doctest::Approx(c * 1.3).epsilon(1e-13));
    }
    SUBCASE("q = inf of a decaying signal is the initial value") {
        std::vector<double> times = {0.0, 0.1, 0.2, 0.5};
        TimeSeries s = scaled_series(g, base, times,
                                     [](double t) { return std::exp(-t); });
        CHECK(mixed_norm(s, vphi, NormSpec{2.0, kInf, 0, 0.0}) ==
              doctest::Approx(lp_norm(base, 2.0, g)).epsilon(1e-13));
    }
    SUBCASE("exponential decay, q = 2") {
        std::vector<double> times;
        const int n = 200;
        for (int k = 0; k <= n; ++k) times.push_back(k * 1.0 / n);
        TimeSeries s = scaled_series(g, base, times,
                                     [](double t) { return std::exp(-t); });
        const double expect =
            lp_norm(base, 2.0, g) * std::sqrt((1.0 - std::exp(-2.0)) / 2.0);
        CHECK(mixed_norm(s, vphi, NormSpec{2.0, 2.0, 0, 0.0}) ==
              doctest::Approx(expect).epsilon(1e-4));
    }
    SUBCASE("p = q equals the direct space-time norm") {
        std::vector<double> times = {0.0, 0.05, 0.2, 0.3};
        TimeSeries s = scaled_series(g, base, times,
                                     [](double t) { return 1.0 / (1.0 + t); });
        const double p = 3.0;
        const double via_mixed = mixed_norm(s, vphi, NormSpec{p, p, 0, 0.0});
        // direct: sum_k w_k int |f|^p dx
        double acc = 0.0;
        std::vector<double> w = s.dt_weights();
        for (int k = 0; k < s.size(); ++k)
            acc += w[k] * std::pow(lp_norm(s.snaps[k].v.vphi, p, g), p);
        CHECK(via_mixed == doctest::Approx(std::pow(acc, 1.0 / p)).epsilon(1e-12));
    }
    SUBCASE("empty series is a contract error") {
        TimeSeries s;
        s.grid = g;
        CHECK_THROWS_AS(mixed_norm(s, vphi, NormSpec{}), ContractError);
    }
}

TEST_CASE("v_norm") {
    Grid g = make_grid(1.0, 1.0, 64, 64);
    ScalarField f = sample(g, Parity::even, EdgeBC::dirichlet0, EdgeBC::dirichlet0,
                           [](double r, double z) {
                               return std::cos(kPi * z / 2.0) * (1.0 - r * r);
                           });
    std::vector<double> times = {0.0, 0.5, 1.0};
    TimeSeries s;
    s.grid = g;
    for (double t : times) {
        State st;
        st.t = t;
        st.phi = f;
        st.u = ScalarField(g, Parity::odd2, EdgeBC::dirichlet0, EdgeBC::neumann0);
        st.gamma = ScalarField(g, Parity::even, EdgeBC::dirichlet0, EdgeBC::dirichlet0);
        st.psi1 = st.gamma;
        st.v.vr = st.u;
        st.v.vphi = st.u;
        st.v.vz = st.gamma;
        s.times.push_back(t);
        s.snaps.push_back(st);
    }
    auto phi_sel = [](const State& st) { return st.phi; };

    SUBCASE("zero field") {
        TimeSeries z = s;
        for (State& st : z.snaps)
            for (double& x : st.phi.v) x = 0.0;
        CHECK(v_norm(z, phi_sel) == 0.0);
    }
    SUBCASE("matches a fine quadrature oracle for the separable profile") {
        // |f|_2 and |grad f|_2 by high-resolution 1D quadratures
        const int N = 4000;
        double l2 = 0.0, gr = 0.0;
        for (int i = 0; i < N; ++i) {
            const double r = (i + 0.5) / N;
            const double wr = 2.0 * kPi * r / N;
            for (int j = 0; j < N; ++j) {
                const double z = -1.0 + (j + 0.5) * 2.0 / N;
                const double dz = 2.0 / N;
                const double c = std::cos(kPi * z / 2.0), sn = std::sin(kPi * z / 2.0);
                const double val = c * (1.0 - r * r);
                const double fr = -2.0 * r * c;
                const double fz = -kPi / 2.0 * sn * (1.0 - r * r);
                l2 += val * val * wr * dz;
                gr += (fr * fr + fz * fz) * wr * dz;
            }
        }
        const double expect = std::sqrt(l2) + std::sqrt(gr);
        CHECK(v_norm(s, phi_sel) == doctest::Approx(expect).epsilon(5e-3));
    }
    SUBCASE("absolute homogeneity") {
        TimeSeries s2 = s;
        for (State& st : s2.snaps)
            for (double& x : st.phi.v) x *= -3.5;
        CHECK(v_norm(s2, phi_sel) ==
              doctest::Approx(3.5 * v_norm(s, phi_sel)).epsilon(1e-12));
    }
}

TEST_CASE("lambda_s") {
    Grid g = make_grid(1.0, 1.0, 16, 16);
    SUBCASE("constants achieve the Holder bound") {
        ScalarField c = sample(g, Parity::odd, EdgeBC::extrapolate,
                               EdgeBC::extrapolate, [](double, double) { return 0.3; });
        TimeSeries s = scaled_series(g, c, {0.0, 0.1}, [](double) { return 1.0; });
        for (double sexp : {4.0, 6.0, 10.0}) {
            LambdaResult lr = lambda_s(s, sexp);
            CHECK(lr.defined);
            CHECK(lr.value ==
                  doctest::Approx(std::pow(2.0 * kPi, 1.0 / sexp)).epsilon(1e-12));
        }
    }
    SUBCASE("Holder bound for random data") {
        std::mt19937 rng(3);
        ScalarField f = random_field(g, rng);
        TimeSeries s = scaled_series(g, f, {0.0, 0.1, 0.3},
                                     [](double t) { return 1.0 - t; });
        for (double sexp : {4.0, 6.0, 10.0}) {
            LambdaResult lr = lambda_s(s, sexp);
            CHECK(lr.value <= std::pow(2.0 * kPi, 1.0 / sexp) + 1e-12);
        }
    }
    SUBCASE("single occupied cell") {
        ScalarField f(g, Parity::odd, EdgeBC::extrapolate, EdgeBC::extrapolate);
        f.at(5, 7) = 2.0;
        TimeSeries s = scaled_series(g, f, {0.0, 0.1}, [](double) { return 1.0; });
        const double w = g.weight(5, 7);
        LambdaResult lr = lambda_s(s, 4.0);
        CHECK(lr.value == doctest::Approx(std::pow(w, 0.25)).epsilon(1e-12));
    }
    SUBCASE("identically zero swirl flags undefined") {
        ScalarField f(g, Parity::odd, EdgeBC::extrapolate, EdgeBC::extrapolate);
        TimeSeries s = scaled_series(g, f, {0.0, 0.1}, [](double) { return 1.0; });
        CHECK_FALSE(lambda_s(s, 4.0).defined);
    }
}

TEST_CASE("hardy_ratio") {
    SUBCASE("unit box, beta = 1, p = 2") {
        std::vector<double> f(2000, 1.0);
        HardySides hs = hardy_ratio(f, 1.0, 1.0, 2.0);
        CHECK(hs.lhs == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
        CHECK(hs.rhs == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(hs.lhs <= hs.rhs);
    }
    SUBCASE("zero field") {
        std::vector<double> f(100, 0.0);
        HardySides hs = hardy_ratio(f, 1.0, 1.0, 2.0);
        CHECK(hs.lhs == 0.0);
        CHECK(hs.rhs == 0.0);
    }
    SUBCASE("scaling both sides") {
        std::vector<double> f(500);
        for (size_t i = 0; i < f.size(); ++i)
            f[i] = std::sin(kPi * i / f.size());
        HardySides a = hardy_ratio(f, 2.0, 0.9, 2.0);
        for (double& x : f) x *= -4.0;
        HardySides b = hardy_ratio(f, 2.0, 0.9, 2.0);
        CHECK(b.lhs == doctest::Approx(4.0 * a.lhs).epsilon(1e-12));
        CHECK(b.rhs == doctest::Approx(4.0 * a.rhs).epsilon(1e-12));
    }
    SUBCASE("200 random compactly supported fields, both branches") {
        std::mt19937 rng(2024);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        int violations = 0;
        for (int trial = 0; trial < 200; ++trial) {
            const int n = 400;
            std::vector<double> f(n, 0.0);
            const double lo = 0.05 + 0.3 * U(rng), hi = lo + 0.1 + 0.5 * U(rng);
            const double amp = 2.0 * U(rng) - 1.0, freq = 1.0 + 6.0 * U(rng);
            for (int i = 0; i < n; ++i) {
                const double x = (i + 0.5) / n;
                if (x > lo && x < hi) {
                    const double s = (x - lo) / (hi - lo);
                    f[i] = amp * std::sin(freq * s) * s * (1.0 - s);
                }
            }
            const double p = 1.0 + 3.0 * U(rng);
            const double beta_hi = 1.0 / p + 0.05 + U(rng);
            const double beta_lo = 1.0 / p - 0.05 - 0.8 * U(rng);
            for (double beta : {beta_hi, beta_lo}) {
                HardySides hs = hardy_ratio(f, 1.0, beta, p);
                if (hs.lhs > hs.rhs * (1.0 + 1e-12)) ++violations;
            }
        }
        CHECK(violations == 0);
    }
    SUBCASE("beta = 1/p is excluded") {
        std::vector<double> f(10, 1.0);
        CHECK_THROWS_AS(hardy_ratio(f, 1.0, 0.5, 2.0), DomainError);
    }
}

TEST_CASE("interpolation_ratio") {
    Grid g = make_grid(1.0, 1.0, 32, 32);
    ScalarField f = sample(g, Parity::even, EdgeBC::dirichlet0, EdgeBC::dirichlet0,
                           [](double r, double z) {
                               return (1.0 - r * r) * std::cos(kPi * z / 2.0);
                           });
    SUBCASE("zero field gives ratio zero") {
        ScalarField zf(g, Parity::even, EdgeBC::dirichlet0, EdgeBC::dirichlet0);
        InterpParams prm;
        prm.p = 2.0;
        prm.s = 1.0;
        prm.q = 2.0;
        InterpReport rep = interpolation_ratio(InterpKind::hardy_weighted, zf, prm, g);
        CHECK(rep.ratio == 0.0);
    }
    SUBCASE("s = 0, q = p collapses to the identity bound") {
        InterpParams prm;
        prm.p = 2.0;
        prm.s = 0.0;
        prm.q = 2.0;
        InterpReport rep = interpolation_ratio(InterpKind::hardy_weighted, f, prm, g);
        CHECK(rep.ratio == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("ratio is scale invariant") {
        InterpParams prm;
        prm.p = 2.0;
        prm.s = 1.0;
        prm.q = 2.0;
        InterpReport a = interpolation_ratio(InterpKind::hardy_weighted, f, prm, g);
        ScalarField f2 = f;
        for (double& x : f2.v) x *= 17.3;
        InterpReport b = interpolation_ratio(InterpKind::hardy_weighted, f2, prm, g);
        CHECK(a.ratio == doctest::Approx(b.ratio).epsilon(1e-10));
    }
    SUBCASE("ratio is stable under refinement") {
        InterpParams prm;
        prm.p = 2.0;
        prm.s = 1.0;
        prm.q = 2.0;
        double ratios[3];
        int k = 0;
        for (int n : {32, 64, 128}) {
            Grid gg = make_grid(1.0, 1.0, n, n);
            ScalarField ff = sample(gg, Parity::even, EdgeBC::dirichlet0,
                                    EdgeBC::dirichlet0, [](double r, double z) {
                                        return (1.0 - r * r) * std::cos(kPi * z / 2.0);
                                    });
            ratios[k++] =
                interpolation_ratio(InterpKind::hardy_weighted, ff, prm, gg).ratio;
        }
        CHECK(std::abs(ratios[1] - ratios[2]) / ratios[2] < 0.1);
        CHECK(std::abs(ratios[0] - ratios[2]) / ratios[2] < 0.2);
    }
    SUBCASE("parameter validation lists the violated constraint") {
        InterpParams prm;
        prm.p = 4.0;  // outside (1, 3]
        CHECK_THROWS_AS(interpolation_ratio(InterpKind::hardy_weighted, f, prm, g),
                        DomainError);
        prm.p = 2.0;
        prm.s = 1.0;
        prm.q = 100.0;  // above p(3-s)/(3-p)
        CHECK_THROWS_AS(interpolation_ratio(InterpKind::hardy_weighted, f, prm, g),
                        DomainError);
    }
    SUBCASE("derivative interpolation exponent") {
        InterpParams prm;
        prm.r = 1;
        prm.l = 2;
        prm.p = 2.0;
        prm.p1 = 2.0;
        prm.p2 = 2.0;
        InterpReport rep = interpolation_ratio(InterpKind::sobolev, f, prm, g);
        CHECK(rep.theta == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(rep.ratio > 0.0);
        CHECK(std::isfinite(rep.ratio));
    }
}
