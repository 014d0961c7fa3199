#ifndef DIATOMIC_GIBBS_HPP
#define DIATOMIC_GIBBS_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "diatomic/chain.hpp"

namespace diatomic {

struct SamplerConfig {
    double beta = 1.0;
    int n_samples = 1;
    int burn_in = 1000;       // sweeps
    int thin = 10;            // sweeps between draws
    double step_scale = 0.5;  // Metropolis proposal half-width (auto-tuned)
    std::uint64_t seed = 0;

    void validate() const {
        if (!(beta > 0.0)) throw std::invalid_argument("SamplerConfig: beta must be > 0");
        if (n_samples < 1) throw std::invalid_argument("SamplerConfig: n_samples must be >= 1");
        if (thin < 1) throw std::invalid_argument("SamplerConfig: thin must be >= 1");
        if (!(step_scale > 0.0)) throw std::invalid_argument("SamplerConfig: step_scale must be > 0");
    }
};

struct EnsembleEstimate {
    double mean = 0.0;
    double variance = 0.0;
    double stderr_mean = 0.0;
    double stderr_variance = 0.0;
    double n_effective = 0.0;
};

// Batch-means statistics over a (possibly autocorrelated) scalar series.
// Uses floor(sqrt(n)) batches. Throws below 16 entries.
EnsembleEstimate estimate(const std::vector<double>& values);

struct PositionDiagnostics {
    double acceptance_rate = 0.0;
    double step_scale = 0.0;
    double autocorr_time = 0.0;  // integrated, in sweeps, from the V series
    bool acceptance_in_band = true;  // [0.1, 0.9] after tuning
};

// Gaussian momenta (variance m_i / beta per particle), then projected onto
// total momentum zero.
std::vector<double> sample_momenta(const ChainParams& params, const SamplerConfig& config,
                                   std::mt19937_64& rng);

// Single-site Metropolis over x for the position marginal of the Gibbs
// measure; center of mass fixed to zero on output. Step size auto-tunes
// toward ~50% acceptance during burn-in.
std::vector<double> sample_positions(const ChainParams& params, const SamplerConfig& config,
                                     std::mt19937_64& rng,
                                     PositionDiagnostics* diag = nullptr);

// One draw (p, x) from the Gibbs measure, drift removed.
PhasePoint sample_state(const ChainParams& params, const SamplerConfig& config,
                        std::mt19937_64& rng, PositionDiagnostics* diag = nullptr);

// Ensemble of n_samples independent draws; stream i derives from
// (config.seed, i), so the result does not depend on scheduling.
std::vector<PhasePoint> sample_ensemble(const ChainParams& params, const SamplerConfig& config,
                                        int n_workers = 1);

// Extra Metropolis sweeps applied in place to an existing state (used by the
// stationarity checks).
void metropolis_sweeps(PhasePoint& state, const ChainParams& params, double beta,
                       double step_scale, int sweeps, std::mt19937_64& rng,
                       int* accepted = nullptr, int* proposed = nullptr);

}  // namespace diatomic

#endif
