#ifndef DIATOMIC_OBSERVABLES_HPP
#define DIATOMIC_OBSERVABLES_HPP

#include <vector>

#include "diatomic/chain.hpp"
#include "diatomic/modes.hpp"

namespace diatomic {

struct BranchEnergies {
    double e_plus = 0.0;   // optical branch energy
    double e_minus = 0.0;  // acoustic branch energy (includes the k=0 kinetic term)
    double h_nl = 0.0;     // H - H0
    double phi0 = 0.0;     // sum of optical actions
};

BranchEnergies branch_energies(const PhasePoint& state, const ModeBasis& basis);

int s_order(const ChainParams& params);

struct CorrelationSeries {
    std::vector<double> lags;
    std::vector<double> c_f;
    std::vector<double> stderr_c;
    double c0 = 0.0;  // variance at lag 0
};

// Ensemble estimator of C_F(t) = <F_t F> - <F>^2 from >= 64 trajectories
// sharing a time grid: series[i][t] is trajectory i at grid point t.
// Standard errors by batch means over trajectories.
CorrelationSeries autocorrelation(const std::vector<std::vector<double>>& series,
                                  const std::vector<double>& lags);

struct FreezingRow {
    double t = 0.0;
    double fraction_within = 0.0;   // |F(t) - F(0)| / sigma_F <= threshold
    double normalized_drift = 0.0;  // |C_F(t) - C_F(0)| / sigma_F^2
    double drift_stderr = 0.0;
};

// Per-time freezing statistics of one observable over an ensemble of
// trajectories; sigma_F is taken from the initial ensemble.
std::vector<FreezingRow> freezing_report(const std::vector<std::vector<double>>& series,
                                         const std::vector<double>& times, double threshold);

}  // namespace diatomic

#endif
