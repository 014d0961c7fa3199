#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "diatomic/dynamics.hpp"
#include "diatomic/modes.hpp"
#include "test_support.hpp"

using namespace diatomic;
using diatomic::testing::random_state;

namespace {

// exact harmonic flow: xi -> xi e^{i omega t} slotwise
PhasePoint exact_harmonic_evolve(const PhasePoint& s, const ModeBasis& basis, double t) {
    ModeState m = x_to_modes(s, basis);
    XiEta z = modes_to_xieta(m, basis);
    const int N = basis.n_cells();
    for (int b : {0, 1})
        for (int idx = 0; idx < N; ++idx) {
            const int k = basis.k_at(idx);
            if (b == kAcoustic && k == 0) continue;
            const double om = basis.omega(b, k);
            z.xi[b][idx] *= std::polar(1.0, om * t);
            z.eta[b][idx] *= std::polar(1.0, -om * t);
        }
    // free slot: q0 += t * phat0 (zero when drift is removed)
    z.qhat0_acoustic += t * z.phat0_acoustic;
    return modes_to_x(xieta_to_modes(z, basis), basis);
}

double state_distance(const PhasePoint& a, const PhasePoint& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a.x[i] - b.x[i]));
        d = std::max(d, std::abs(a.p[i] - b.p[i]));
    }
    return d;
}

}  // namespace

TEST_CASE("rest state is a fixed point") {
    ChainParams p(4, 2.0, 1.0, 1.0, 0.25, 0.25);
    PhasePoint s(p.n_cells);
    PhasePoint t = s;
    step(t, p, 0.01, Scheme::verlet2);
    CHECK(state_distance(s, t) == 0.0);
}

TEST_CASE("reversibility: step, flip momenta, step, flip") {
    ChainParams p(6, 2.0, 1.0, 1.0, 0.3, 0.2);
    std::mt19937_64 rng(3);
    PhasePoint s = random_state(p, rng, 0.3);
    for (Scheme sch : {Scheme::verlet2, Scheme::yoshida4}) {
        PhasePoint t = s;
        step(t, p, 0.02, sch);
        for (auto& v : t.p) v = -v;
        step(t, p, 0.02, sch);
        for (auto& v : t.p) v = -v;
        CHECK(state_distance(s, t) <= 1e-12);
    }
}

TEST_CASE("single harmonic mode returns after one period") {
    ChainParams p(8, 2.0, 1.0, 1.0, 0.0, 0.0);
    ModeBasis basis(p);
    const int k0 = 3;
    const double om = basis.omega(kOptical, k0);

    ModeState inj(p.n_cells);
    inj.qhat[kOptical][basis.index_of(k0)] = cplx{0.05, 0.02};
    inj.qhat[kOptical][basis.index_of(-k0)] = std::conj(cplx{0.05, 0.02});
    PhasePoint s0 = modes_to_x(inj, basis);

    const double T = 2.0 * 3.14159265358979323846 / om;
    const long n = std::lround(T / (0.05 / om));
    const double dt = T / static_cast<double>(n);  // dt*omega ~ 0.05

    PhasePoint s = s0;
    Stepper st(p, Scheme::verlet2);
    for (long i = 0; i < n; ++i) st.step(s, dt);
    CHECK(state_distance(s, s0) < 1e-4);
}

TEST_CASE("convergence orders: verlet ~2, yoshida ~4") {
    ChainParams p(6, 2.0, 1.0, 1.0, 0.0, 0.0);
    ModeBasis basis(p);
    std::mt19937_64 rng(5);
    PhasePoint s0 = random_state(p, rng, 0.2);
    remove_drift(s0, p);
    const double t_final = 4.0;
    PhasePoint exact = exact_harmonic_evolve(s0, basis, t_final);

    auto run = [&](Scheme sch, double dt) {
        const long n = std::lround(t_final / dt);
        PhasePoint s = s0;
        Stepper st(p, sch);
        for (long i = 0; i < n; ++i) st.step(s, t_final / static_cast<double>(n));
        return state_distance(s, exact);
    };

    {
        const double dt = 0.05 / basis.Omega();
        const double e1 = run(Scheme::verlet2, dt), e2 = run(Scheme::verlet2, dt / 2);
        const double order = std::log2(e1 / e2);
        CHECK(order > 1.6);
        CHECK(order < 2.4);
    }
    {
        const double dt = 0.1 / basis.Omega();
        const double e1 = run(Scheme::yoshida4, dt), e2 = run(Scheme::yoshida4, dt / 2);
        const double order = std::log2(e1 / e2);
        CHECK(order > 3.2);
        CHECK(order < 4.8);
    }
}

TEST_CASE("evolve: records, drift metric, exact momentum conservation") {
    ChainParams p(8, 2.0, 1.0, 1.0, 0.25, 0.25);
    ModeBasis basis(p);
    std::mt19937_64 rng(7);
    PhasePoint s = random_state(p, rng, 0.3);
    remove_drift(s, p);

    IntegratorConfig cfg;
    cfg.dt = 0.05 / basis.Omega();
    cfg.t_final = 50.0;
    cfg.record_stride = 10;
    cfg.scheme = Scheme::yoshida4;

    auto res = evolve(s, p, cfg,
                      {[&](const PhasePoint& q) { return hamiltonian(q, p); },
                       [](const PhasePoint& q) { return total_momentum(q); }});
    REQUIRE(res.times.size() == res.observables[0].size());
    CHECK(res.times.front() == 0.0);
    CHECK(res.max_rel_energy_drift < 1e-6);
    CHECK(!res.drift_flagged);
    for (double mom : res.observables[1]) CHECK(std::abs(mom) <= 1e-12);

    // H observable equals the drift metric's source
    for (double h : res.observables[0])
        CHECK(std::abs(h - res.observables[0][0]) <=
              res.max_rel_energy_drift * std::abs(res.observables[0][0]) + 1e-15);
}

TEST_CASE("harmonic branch energies are constants of the linear flow") {
    ChainParams p(8, 2.0, 1.0, 1.0, 0.0, 0.0);
    ModeBasis basis(p);
    std::mt19937_64 rng(11);
    PhasePoint s = random_state(p, rng, 0.2);
    remove_drift(s, p);

    IntegratorConfig cfg;
    cfg.dt = 0.02 / basis.Omega();
    cfg.t_final = 30.0;
    cfg.record_stride = 50;
    cfg.scheme = Scheme::yoshida4;

    auto eplus = [&](const PhasePoint& q) {
        ModeState m = x_to_modes(q, basis);
        double e = 0.0;
        for (int idx = 0; idx < p.n_cells; ++idx) {
            const double om = basis.omega(kOptical, basis.k_at(idx));
            e += 0.5 * (std::norm(m.phat[kOptical][idx]) +
                        om * om * std::norm(m.qhat[kOptical][idx]));
        }
        return e;
    };
    auto res = evolve(s, p, cfg, {eplus});
    const double e0 = res.observables[0][0];
    REQUIRE(e0 > 0.0);
    for (double e : res.observables[0]) CHECK(std::abs(e - e0) / e0 <= 1e-8);
}

TEST_CASE("config validation: the dt guard") {
    ChainParams p(4, 2.0, 1.0, 1.0, 0.0, 0.0);
    ModeBasis basis(p);
    IntegratorConfig cfg;
    cfg.dt = 0.3 / basis.Omega();  // dt * Omega = 0.3 > 0.2
    cfg.t_final = 1.0;
    CHECK_THROWS(cfg.validate(basis));
    cfg.dt = 0.1 / basis.Omega();
    CHECK_NOTHROW(cfg.validate(basis));
}

TEST_CASE("evolve detects non-finite states") {
    ChainParams p(4, 2.0, 1.0, 1.0, 0.0, 0.0);
    PhasePoint s(p.n_cells);
    s.x[0] = std::numeric_limits<double>::quiet_NaN();
    IntegratorConfig cfg;
    cfg.dt = 0.01;
    cfg.t_final = 0.1;
    CHECK_THROWS(evolve(s, p, cfg, {}));
}
