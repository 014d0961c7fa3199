#ifndef DIATOMIC_TEST_SUPPORT_HPP
#define DIATOMIC_TEST_SUPPORT_HPP

#include <cmath>
#include <complex>
#include <random>

#include "diatomic/chain.hpp"

namespace diatomic::testing {

// Poisson bracket of two scalar (possibly complex-valued) functions of the
// phase point, by central differences. Independent of the symbolic engine.
template <typename F, typename G>
std::complex<double> fd_bracket(const F& f, const G& g, const PhasePoint& s, double h = 1e-5) {
    std::complex<double> acc{0.0, 0.0};
    PhasePoint t = s;
    for (std::size_t a = 0; a < s.size(); ++a) {
        const double x0 = t.x[a];
        t.x[a] = x0 + h;
        const std::complex<double> fxp = f(t), gxp = g(t);
        t.x[a] = x0 - h;
        const std::complex<double> fxm = f(t), gxm = g(t);
        t.x[a] = x0;
        const double p0 = t.p[a];
        t.p[a] = p0 + h;
        const std::complex<double> fpp = f(t), gpp = g(t);
        t.p[a] = p0 - h;
        const std::complex<double> fpm = f(t), gpm = g(t);
        t.p[a] = p0;
        acc += (fxp - fxm) * (gpp - gpm) / (4.0 * h * h) -
               (fpp - fpm) * (gxp - gxm) / (4.0 * h * h);
    }
    return acc;
}

inline PhasePoint random_state(const ChainParams& params, std::mt19937_64& rng,
                               double amp = 0.3) {
    std::normal_distribution<double> g(0.0, amp);
    PhasePoint s(params.n_cells);
    for (auto& v : s.x) v = g(rng);
    for (auto& v : s.p) v = g(rng);
    return s;
}

// Central-difference gradient of the Hamiltonian in x, an independent check
// of the analytic forces.
inline std::vector<double> fd_forces(const PhasePoint& state, const ChainParams& params,
                                     double h = 1e-6) {
    std::vector<double> f(state.size());
    PhasePoint s = state;
    for (std::size_t a = 0; a < state.size(); ++a) {
        const double x0 = s.x[a];
        s.x[a] = x0 + h;
        const double hp = hamiltonian(s, params);
        s.x[a] = x0 - h;
        const double hm = hamiltonian(s, params);
        s.x[a] = x0;
        f[a] = -(hp - hm) / (2.0 * h);
    }
    return f;
}

}  // namespace diatomic::testing

#endif
