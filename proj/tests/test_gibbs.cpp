#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "diatomic/gibbs.hpp"
#include "diatomic/modes.hpp"
#include "diatomic/rng.hpp"

using namespace diatomic;

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// two-sided Kolmogorov-Smirnov statistic against the standard normal
double ks_statistic(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double f = normal_cdf(v[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

}  // namespace

TEST_CASE("estimate: edge cases and exact sequences") {
    CHECK_THROWS(estimate(std::vector<double>(10, 1.0)));

    std::vector<double> c(100, 3.25);
    EnsembleEstimate e = estimate(c);
    CHECK(e.mean == 3.25);
    CHECK(e.variance == 0.0);
    CHECK(e.stderr_mean == 0.0);
    CHECK(e.n_effective == 100.0);

    std::mt19937_64 rng(42);
    std::normal_distribution<double> g(0.0, 1.0);
    const int n = 10000;
    std::vector<double> x(n);
    for (auto& v : x) v = g(rng);
    e = estimate(x);
    CHECK(std::abs(e.mean) <= 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(e.variance == doctest::Approx(1.0).epsilon(0.1));
    CHECK(e.n_effective <= n);
    CHECK(e.n_effective >= 0.5 * n);  // iid: close to n
}

TEST_CASE("estimate: AR(1) effective sample size") {
    const double rho = 0.8;
    const int n = 1 << 15;
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> x(n);
    double v = 0.0;
    for (int i = 0; i < 200; ++i) v = rho * v + std::sqrt(1 - rho * rho) * g(rng);
    for (int i = 0; i < n; ++i) {
        v = rho * v + std::sqrt(1 - rho * rho) * g(rng);
        x[i] = v;
    }
    EnsembleEstimate e = estimate(x);
    const double want = n * (1.0 - rho) / (1.0 + rho);
    CHECK(e.n_effective >= want / 2.0);
    CHECK(e.n_effective <= want * 2.0);
}

TEST_CASE("momenta: projected Gaussian moments") {
    ChainParams p(16, 2.0, 1.0, 1.0, 0.0, 0.0);
    const double beta = 4.0;
    SamplerConfig sc;
    sc.beta = beta;
    sc.seed = 2;

    const int n = 10000;
    const int N = p.n_cells;
    const double mtot = N * (p.m1 + p.m2);

    std::vector<double> p11sq(n), cross(n);
    auto rng = make_stream(sc.seed, 0);
    for (int i = 0; i < n; ++i) {
        auto pp = sample_momenta(p, sc, rng);
        double tot = 0.0;
        for (double v : pp) tot += v;
        CHECK(std::abs(tot) <= 1e-12 * std::sqrt(mtot / beta) * 2 * N);
        p11sq[i] = pp[PhasePoint::slot(0, 0, N)] * pp[PhasePoint::slot(0, 0, N)];
        cross[i] = pp[PhasePoint::slot(0, 0, N)] * pp[PhasePoint::slot(3, 1, N)];
    }
    // conditioning on total momentum zero: var(p_i) = (m_i/beta)(1 - m_i/M),
    // cov(p_i, p_j) = -m_i m_j / (M beta)
    EnsembleEstimate e1 = estimate(p11sq);
    const double want_var = p.m1 / beta * (1.0 - p.m1 / mtot);
    CHECK(std::abs(e1.mean - want_var) <= 3.0 * e1.stderr_mean);

    EnsembleEstimate e2 = estimate(cross);
    const double want_cov = -p.m1 * p.m2 / (mtot * beta);
    CHECK(std::abs(e2.mean - want_cov) <= 3.0 * e2.stderr_mean);
}

TEST_CASE("momenta: variance collapses at huge beta") {
    ChainParams p(4, 2.0, 1.0, 1.0, 0.0, 0.0);
    SamplerConfig sc;
    sc.beta = 1e6;
    sc.seed = 5;
    auto rng = make_stream(sc.seed, 0);
    std::vector<double> v;
    for (int i = 0; i < 10000; ++i) {
        auto pp = sample_momenta(p, sc, rng);
        for (double q : pp) v.push_back(q * q);
    }
    EnsembleEstimate e = estimate(v);
    CHECK(e.mean <= 3e-6);
}

TEST_CASE("positions: harmonic equipartition with the closure constraint") {
    ChainParams p(8, 2.0, 1.0, 1.0, 0.0, 0.0);
    const double beta = 16.0;
    SamplerConfig sc;
    sc.beta = beta;
    sc.n_samples = 2048;
    sc.burn_in = 16;  // harmonic start is exact
    sc.thin = 4;
    sc.seed = 11;
    auto ens = sample_ensemble(p, sc, 2);

    std::vector<double> vtot;
    vtot.reserve(ens.size());
    for (const auto& s : ens) vtot.push_back(potential_energy(diff_coords(s), p));
    EnsembleEstimate e = estimate(vtot);
    const double want = (2.0 * p.n_cells - 1.0) / (2.0 * beta);
    CHECK(std::abs(e.mean - want) <= 3.0 * e.stderr_mean);
}

TEST_CASE("positions: optical quadratures pass a KS normality test") {
    ChainParams p(8, 2.0, 1.0, 1.0, 0.0, 0.0);
    const double beta = 16.0;
    SamplerConfig sc;
    sc.beta = beta;
    sc.n_samples = 2048;
    sc.burn_in = 16;
    sc.thin = 6;
    sc.seed = 13;
    auto ens = sample_ensemble(p, sc, 2);
    ModeBasis basis(p);

    std::vector<double> z;
    z.reserve(ens.size());
    const int k0 = 2;
    const double om = basis.omega(kOptical, k0);
    for (const auto& s : ens) {
        ModeState m = x_to_modes(s, basis);
        // per-quadrature variance 1/(2 beta): scale to standard normal
        z.push_back(om * m.qhat[kOptical][basis.index_of(k0)].real() *
                    std::sqrt(2.0 * beta));
    }
    const double d = ks_statistic(z);
    const double crit = 1.628 / std::sqrt(static_cast<double>(z.size()));  // 1% level
    CHECK(d <= crit);
}

TEST_CASE("positions: low-temperature limit of the specific energy") {
    ChainParams p(8, 2.0, 1.0, 1.0, 0.25, 0.25);
    const double beta = 1e4;
    SamplerConfig sc;
    sc.beta = beta;
    sc.n_samples = 1024;
    sc.burn_in = 64;
    sc.thin = 4;
    sc.seed = 17;
    auto ens = sample_ensemble(p, sc, 2);
    std::vector<double> h;
    h.reserve(ens.size());
    for (const auto& s : ens) h.push_back(hamiltonian(s, p));
    EnsembleEstimate e = estimate(h);
    // <H> = (2N-1)/beta up to anharmonic corrections below the noise
    const double want = (2.0 * p.n_cells - 1.0) / beta;
    CHECK(std::abs(e.mean - want) <= 3.0 * e.stderr_mean);
}

TEST_CASE("stationarity: one extra sweep leaves <H> unchanged") {
    ChainParams p(8, 2.0, 1.0, 1.0, 0.25, 0.25);
    const double beta = 16.0;
    SamplerConfig sc;
    sc.beta = beta;
    sc.n_samples = 1024;
    sc.burn_in = 200;
    sc.seed = 23;
    auto ens = sample_ensemble(p, sc, 2);

    std::vector<double> dh;
    dh.reserve(ens.size());
    const double step = 0.7 / std::sqrt(beta * p.stiffness);
    for (std::size_t i = 0; i < ens.size(); ++i) {
        auto rng = make_stream(991, i);
        PhasePoint s = ens[i];
        const double h0 = hamiltonian(s, p);
        metropolis_sweeps(s, p, beta, step, 1, rng);
        dh.push_back(hamiltonian(s, p) - h0);
    }
    EnsembleEstimate e = estimate(dh);
    CHECK(std::abs(e.mean) <= 3.0 * e.stderr_mean);
}

TEST_CASE("kinetic and potential sectors are uncorrelated") {
    ChainParams p(8, 2.0, 1.0, 1.0, 0.0, 0.0);
    SamplerConfig sc;
    sc.beta = 8.0;
    sc.n_samples = 2048;
    sc.burn_in = 16;
    sc.thin = 4;
    sc.seed = 29;
    auto ens = sample_ensemble(p, sc, 2);

    std::vector<double> t(ens.size()), v(ens.size());
    for (std::size_t i = 0; i < ens.size(); ++i) {
        t[i] = kinetic_energy(ens[i], p);
        v[i] = potential_energy(diff_coords(ens[i]), p);
    }
    EnsembleEstimate et = estimate(t), ev = estimate(v);
    std::vector<double> z(ens.size());
    for (std::size_t i = 0; i < ens.size(); ++i)
        z[i] = (t[i] - et.mean) * (v[i] - ev.mean) /
               std::sqrt(et.variance * ev.variance);
    EnsembleEstimate ez = estimate(z);
    CHECK(std::abs(ez.mean) <= 3.0 * ez.stderr_mean);
}

TEST_CASE("exchangeability spot check on bond pairs") {
    ChainParams p(8, 2.0, 1.0, 1.0, 0.2, 0.2);
    SamplerConfig sc;
    sc.beta = 16.0;
    sc.n_samples = 4096;
    sc.burn_in = 64;
    sc.thin = 4;
    sc.seed = 31;
    auto ens = sample_ensemble(p, sc, 2);

    std::vector<double> a(ens.size()), b(ens.size());
    for (std::size_t i = 0; i < ens.size(); ++i) {
        DiffCoords d = diff_coords(ens[i]);
        a[i] = d(0, 0) * d(1, 0);
        b[i] = d(2, 0) * d(4, 0);
    }
    EnsembleEstimate ea = estimate(a), eb = estimate(b);
    const double comb = std::sqrt(ea.stderr_mean * ea.stderr_mean +
                                  eb.stderr_mean * eb.stderr_mean);
    CHECK(std::abs(ea.mean - eb.mean) <= 3.0 * comb);
}

TEST_CASE("sampler diagnostics: acceptance band and reproducibility") {
    ChainParams p(8, 2.0, 1.0, 1.0, 0.25, 0.25);
    SamplerConfig sc;
    sc.beta = 16.0;
    sc.burn_in = 300;
    sc.seed = 37;

    PositionDiagnostics diag;
    auto rng = make_stream(sc.seed, 0);
    auto x1 = sample_positions(p, sc, rng, &diag);
    CHECK(diag.acceptance_in_band);
    CHECK(diag.acceptance_rate > 0.2);
    CHECK(diag.acceptance_rate < 0.8);

    auto rng2 = make_stream(sc.seed, 0);
    auto x2 = sample_positions(p, sc, rng2);
    REQUIRE(x1.size() == x2.size());
    for (std::size_t i = 0; i < x1.size(); ++i) CHECK(x1[i] == x2[i]);
}
