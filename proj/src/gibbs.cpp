#include "diatomic/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "diatomic/modes.hpp"
#include "diatomic/rng.hpp"

namespace diatomic {

EnsembleEstimate estimate(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n < 16) throw std::invalid_argument("estimate: need at least 16 values");

    EnsembleEstimate e;
    double sum = 0.0;
    for (double v : values) sum += v;
    e.mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) ss += (v - e.mean) * (v - e.mean);
    e.variance = ss / static_cast<double>(n);

    const std::size_t n_b = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    const std::size_t blen = n / n_b;
    std::vector<double> bmean(n_b, 0.0), bvar(n_b, 0.0);
    for (std::size_t b = 0; b < n_b; ++b) {
        for (std::size_t i = 0; i < blen; ++i) bmean[b] += values[b * blen + i];
        bmean[b] /= static_cast<double>(blen);
        for (std::size_t i = 0; i < blen; ++i) {
            const double d = values[b * blen + i] - e.mean;
            bvar[b] += d * d;
        }
        bvar[b] /= static_cast<double>(blen);
    }
    auto sd_of = [n_b](const std::vector<double>& b) {
        double m = 0.0;
        for (double v : b) m += v;
        m /= static_cast<double>(n_b);
        double s = 0.0;
        for (double v : b) s += (v - m) * (v - m);
        return std::sqrt(s / static_cast<double>(n_b - 1));
    };
    e.stderr_mean = sd_of(bmean) / std::sqrt(static_cast<double>(n_b));
    e.stderr_variance = sd_of(bvar) / std::sqrt(static_cast<double>(n_b));
    e.n_effective = (e.stderr_mean > 0.0)
                        ? std::min(static_cast<double>(n),
                                   e.variance / (e.stderr_mean * e.stderr_mean))
                        : static_cast<double>(n);
    return e;
}

std::vector<double> sample_momenta(const ChainParams& params, const SamplerConfig& config,
                                   std::mt19937_64& rng) {
    config.validate();
    const int N = params.n_cells;
    std::normal_distribution<double> g1(0.0, std::sqrt(params.m1 / config.beta));
    std::normal_distribution<double> g2(0.0, std::sqrt(params.m2 / config.beta));
    std::vector<double> p(2 * static_cast<std::size_t>(N));
    double ptot = 0.0;
    for (int j = 0; j < N; ++j) {
        p[PhasePoint::slot(j, 0, N)] = g1(rng);
        p[PhasePoint::slot(j, 1, N)] = g2(rng);
        ptot += p[PhasePoint::slot(j, 0, N)] + p[PhasePoint::slot(j, 1, N)];
    }
    // project onto total momentum zero (mass-weighted shift = conditioning
    // the Gaussian on sum p = 0)
    const double mtot = N * (params.m1 + params.m2);
    for (int j = 0; j < N; ++j) {
        p[PhasePoint::slot(j, 0, N)] -= params.m1 / mtot * ptot;
        p[PhasePoint::slot(j, 1, N)] -= params.m2 / mtot * ptot;
    }
    return p;
}

void metropolis_sweeps(PhasePoint& state, const ChainParams& params, double beta,
                       double step_scale, int sweeps, std::mt19937_64& rng,
                       int* accepted, int* proposed) {
    const int N = state.n_cells();
    std::uniform_real_distribution<double> ustep(-step_scale, step_scale);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    int acc = 0, tot = 0;
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        for (int j = 0; j < N; ++j) {
            for (int i = 0; i < 2; ++i) {
                const double d = ustep(rng);
                double dv;
                if (i == 0) {
                    // bonds r(j,0) = x(j,1)-x(j,0), r(j,1) = x(j,0)-x(j-1,1)
                    const double r0 = state.xx(j, 1) - state.xx(j, 0);
                    const double r1 = state.xx(j, 0) - state.xx(j - 1, 1);
                    dv = potential(r0 - d, params) - potential(r0, params) +
                         potential(r1 + d, params) - potential(r1, params);
                } else {
                    // bonds r(j,0) and r(j+1,1) = x(j+1,0)-x(j,1)
                    const double r0 = state.xx(j, 1) - state.xx(j, 0);
                    const double r1 = state.xx(j + 1, 0) - state.xx(j, 1);
                    dv = potential(r0 + d, params) - potential(r0, params) +
                         potential(r1 - d, params) - potential(r1, params);
                }
                ++tot;
                if (dv <= 0.0 || u01(rng) < std::exp(-beta * dv)) {
                    state.xx(j, i) += d;
                    ++acc;
                }
            }
        }
    }
    if (accepted) *accepted += acc;
    if (proposed) *proposed += tot;
}

namespace {

// Exact draw from the harmonic (A = B = 0) position marginal, via Gaussian
// mode amplitudes. Zero modes pinned to zero. Used to start the chain near
// equilibrium.
void harmonic_position_init(PhasePoint& state, const ChainParams& params, double beta,
                            std::mt19937_64& rng) {
    const ModeBasis basis(params);
    const int N = params.n_cells;
    ModeState m(N);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int bidx : {kAcoustic, kOptical}) {
        for (int idx = 0; idx < N; ++idx) {
            const int k = basis.k_at(idx);
            if (k < 0) continue;  // filled by conjugation
            const double om = basis.omega(bidx, k);
            if (om == 0.0) continue;
            const bool self = (k == 0) || (2 * k == N);
            if (self) {
                m.qhat[bidx][idx] = cplx{g(rng) / (om * std::sqrt(beta)), 0.0};
            } else {
                const double s = 1.0 / (om * std::sqrt(2.0 * beta));
                const cplx v{s * g(rng), s * g(rng)};
                m.qhat[bidx][idx] = v;
                m.qhat[bidx][basis.index_of(-k)] = std::conj(v);
            }
        }
    }
    PhasePoint xs = modes_to_x(m, basis);
    state.x = xs.x;
}

double half_autocorr_time(const std::vector<double>& series) {
    // integrated autocorrelation time with a self-consistent cutoff
    const std::size_t n = series.size();
    if (n < 8) return 0.0;
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : series) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    if (var <= 0.0) return 0.0;
    double tau = 0.5;
    for (std::size_t t = 1; t < n / 2; ++t) {
        double c = 0.0;
        for (std::size_t i = 0; i + t < n; ++i)
            c += (series[i] - mean) * (series[i + t] - mean);
        c /= static_cast<double>(n - t) * var;
        tau += c;
        if (static_cast<double>(t) > 6.0 * tau) break;
    }
    return tau;
}

}  // namespace

std::vector<double> sample_positions(const ChainParams& params, const SamplerConfig& config,
                                     std::mt19937_64& rng, PositionDiagnostics* diag) {
    config.validate();
    PhasePoint state(params.n_cells);
    harmonic_position_init(state, params, config.beta, rng);

    double step = config.step_scale;
    int acc_total = 0, prop_total = 0;
    std::vector<double> vseries;
    vseries.reserve(static_cast<std::size_t>(std::max(config.burn_in / 2, 0)));

    // burn-in with step auto-tuning toward ~50% acceptance
    const int tune_block = 25;
    int done = 0;
    while (done < config.burn_in) {
        const int todo = std::min(tune_block, config.burn_in - done);
        int acc = 0, prop = 0;
        metropolis_sweeps(state, params, config.beta, step, todo, rng, &acc, &prop);
        done += todo;
        acc_total += acc;
        prop_total += prop;
        const double rate = prop > 0 ? static_cast<double>(acc) / prop : 0.0;
        if (done < config.burn_in) {  // freeze the step after burn-in
            const double f = std::clamp(rate / 0.5, 0.5, 2.0);
            step = std::clamp(step * f, 1e-6, 1e6);
        }
        if (done > config.burn_in / 2)
            vseries.push_back(potential_energy(diff_coords(state), params));
    }
    int acc = 0, prop = 0;
    metropolis_sweeps(state, params, config.beta, step, config.thin, rng, &acc, &prop);
    acc_total += acc;
    prop_total += prop;

    if (diag) {
        diag->acceptance_rate =
            prop_total > 0 ? static_cast<double>(acc_total) / prop_total : 0.0;
        diag->step_scale = step;
        diag->autocorr_time = half_autocorr_time(vseries);
        diag->acceptance_in_band =
            diag->acceptance_rate >= 0.1 && diag->acceptance_rate <= 0.9;
    }

    // fix the center of mass
    const double c = center_of_mass(state, params);
    for (auto& v : state.x) v -= c;
    return state.x;
}

PhasePoint sample_state(const ChainParams& params, const SamplerConfig& config,
                        std::mt19937_64& rng, PositionDiagnostics* diag) {
    PhasePoint s(params.n_cells);
    s.p = sample_momenta(params, config, rng);
    s.x = sample_positions(params, config, rng, diag);
    return s;
}

std::vector<PhasePoint> sample_ensemble(const ChainParams& params, const SamplerConfig& config,
                                        int n_workers) {
    config.validate();
    const int n = config.n_samples;
    std::vector<PhasePoint> out(static_cast<std::size_t>(n), PhasePoint(params.n_cells));
    const int workers = std::max(1, n_workers);
    auto work = [&](int w) {
        for (int i = w; i < n; i += workers) {
            auto rng = make_stream(config.seed, static_cast<std::uint64_t>(i));
            out[static_cast<std::size_t>(i)] = sample_state(params, config, rng);
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    return out;
}

}  // namespace diatomic
