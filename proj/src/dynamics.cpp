#include "diatomic/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace diatomic {

Scheme scheme_from_string(const std::string& name) {
    if (name == "verlet2") return Scheme::verlet2;
    if (name == "yoshida4") return Scheme::yoshida4;
    throw std::invalid_argument("unknown scheme: " + name);
}

std::string to_string(Scheme s) { return s == Scheme::verlet2 ? "verlet2" : "yoshida4"; }

void IntegratorConfig::validate(const ModeBasis& basis) const {
    if (!(dt > 0.0)) throw std::invalid_argument("IntegratorConfig: dt must be > 0");
    if (record_stride < 1)
        throw std::invalid_argument("IntegratorConfig: record_stride must be >= 1");
    if (dt * basis.Omega() > 0.2 + 1e-12)
        throw std::invalid_argument("IntegratorConfig: dt * max(omega+) must be <= 0.2");
}

Stepper::Stepper(const ChainParams& params, Scheme scheme)
    : params_(params), scheme_(scheme) {}

void Stepper::verlet(PhasePoint& state, double dt) {
    const int N = state.n_cells();
    if (!force_valid_) {
        forces(state, params_, force_);
        force_valid_ = true;
    }
    const double h2 = 0.5 * dt;
    for (std::size_t a = 0; a < state.size(); ++a) state.p[a] += h2 * force_[a];
    for (int j = 0; j < N; ++j) {
        state.xx(j, 0) += dt * state.px(j, 0) / params_.m1;
        state.xx(j, 1) += dt * state.px(j, 1) / params_.m2;
    }
    forces(state, params_, force_);
    for (std::size_t a = 0; a < state.size(); ++a) state.p[a] += h2 * force_[a];
}

void Stepper::step(PhasePoint& state, double dt) {
    if (scheme_ == Scheme::verlet2) {
        verlet(state, dt);
        return;
    }
    // Yoshida triple jump: w1, w0, w1 with w1 = 1/(2 - 2^{1/3})
    static const double w1 = 1.0 / (2.0 - std::cbrt(2.0));
    static const double w0 = 1.0 - 2.0 * w1;
    verlet(state, w1 * dt);
    verlet(state, w0 * dt);
    verlet(state, w1 * dt);
}

void step(PhasePoint& state, const ChainParams& params, double dt, Scheme scheme) {
    Stepper s(params, scheme);
    s.step(state, dt);
}

EvolveResult evolve(PhasePoint state, const ChainParams& params, const IntegratorConfig& config,
                    const std::vector<Observable>& observables) {
    const ModeBasis basis(params);
    config.validate(basis);

    EvolveResult res;
    res.observables.resize(observables.size());

    Stepper stepper(params, config.scheme);
    const double h0 = hamiltonian(state, params);
    const double href = std::max(std::abs(h0), 1e-300);
    const long n_steps = static_cast<long>(std::llround(config.t_final / config.dt));

    auto record = [&](long stepno) {
        res.times.push_back(static_cast<double>(stepno) * config.dt);
        for (std::size_t o = 0; o < observables.size(); ++o)
            res.observables[o].push_back(observables[o](state));
    };
    record(0);
    for (long n = 1; n <= n_steps; ++n) {
        stepper.step(state, config.dt);
        if (n % config.record_stride == 0 || n == n_steps) {
            const double h = hamiltonian(state, params);
            if (!std::isfinite(h))
                throw std::runtime_error("evolve: non-finite state at step " + std::to_string(n));
            res.max_rel_energy_drift =
                std::max(res.max_rel_energy_drift, std::abs(h - h0) / href);
            if (n % config.record_stride == 0) record(n);
        }
    }
    res.drift_flagged = res.max_rel_energy_drift > 1e-5;
    return res;
}

}  // namespace diatomic
