#include "diatomic/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace diatomic {

BranchEnergies branch_energies(const PhasePoint& state, const ModeBasis& basis) {
    const ModeState m = x_to_modes(state, basis);
    const int N = basis.n_cells();
    BranchEnergies out;
    for (int idx = 0; idx < N; ++idx) {
        const int k = basis.k_at(idx);
        const double wp = basis.omega(kOptical, k), wm = basis.omega(kAcoustic, k);
        const double ep = 0.5 * (std::norm(m.phat[kOptical][idx]) +
                                 wp * wp * std::norm(m.qhat[kOptical][idx]));
        out.e_plus += ep;
        out.phi0 += ep / wp;
        out.e_minus += 0.5 * (std::norm(m.phat[kAcoustic][idx]) +
                              wm * wm * std::norm(m.qhat[kAcoustic][idx]));
    }
    out.h_nl = hamiltonian(state, basis.params()) - out.e_plus - out.e_minus;
    return out;
}

int s_order(const ChainParams& params) { return params.s_order(); }

CorrelationSeries autocorrelation(const std::vector<std::vector<double>>& series,
                                  const std::vector<double>& lags) {
    const std::size_t n = series.size();
    if (n < 64) throw std::invalid_argument("autocorrelation: need >= 64 trajectories");
    const std::size_t nt = lags.size();
    for (const auto& s : series)
        if (s.size() < nt)
            throw std::invalid_argument("autocorrelation: trajectory shorter than lag grid");

    CorrelationSeries out;
    out.lags = lags;
    out.c_f.resize(nt);
    out.stderr_c.resize(nt);

    const std::size_t n_b = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    const std::size_t blen = n / n_b;

    std::vector<double> f0(n);
    for (std::size_t i = 0; i < n; ++i) f0[i] = series[i][0];

    for (std::size_t t = 0; t < nt; ++t) {
        double mean0 = 0.0, meant = 0.0, prod = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mean0 += f0[i];
            meant += series[i][t];
            prod += series[i][t] * f0[i];
        }
        mean0 /= static_cast<double>(n);
        meant /= static_cast<double>(n);
        prod /= static_cast<double>(n);
        out.c_f[t] = prod - meant * mean0;

        // batch means over trajectories
        double bm = 0.0, bs = 0.0;
        std::vector<double> bc(n_b);
        for (std::size_t b = 0; b < n_b; ++b) {
            double m0 = 0.0, mt = 0.0, pr = 0.0;
            for (std::size_t i = 0; i < blen; ++i) {
                const std::size_t a = b * blen + i;
                m0 += f0[a];
                mt += series[a][t];
                pr += series[a][t] * f0[a];
            }
            m0 /= static_cast<double>(blen);
            mt /= static_cast<double>(blen);
            pr /= static_cast<double>(blen);
            bc[b] = pr - mt * m0;
            bm += bc[b];
        }
        bm /= static_cast<double>(n_b);
        for (double v : bc) bs += (v - bm) * (v - bm);
        out.stderr_c[t] = std::sqrt(bs / static_cast<double>(n_b - 1)) /
                          std::sqrt(static_cast<double>(n_b));
    }
    out.c0 = out.c_f.empty() ? 0.0 : out.c_f[0];
    return out;
}

std::vector<FreezingRow> freezing_report(const std::vector<std::vector<double>>& series,
                                         const std::vector<double>& times, double threshold) {
    const std::size_t n = series.size();
    if (n == 0) return {};
    const std::size_t nt = times.size();

    double mean0 = 0.0;
    for (const auto& s : series) mean0 += s[0];
    mean0 /= static_cast<double>(n);
    double var0 = 0.0;
    for (const auto& s : series) var0 += (s[0] - mean0) * (s[0] - mean0);
    var0 /= static_cast<double>(n);
    const double sigma = std::sqrt(var0);

    CorrelationSeries corr = n >= 64 ? autocorrelation(series, times) : CorrelationSeries{};

    std::vector<FreezingRow> out(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        FreezingRow row;
        row.t = times[t];
        std::size_t within = 0;
        for (const auto& s : series)
            if (std::abs(s[t] - s[0]) <= threshold * sigma) ++within;
        row.fraction_within = static_cast<double>(within) / static_cast<double>(n);
        if (n >= 64 && var0 > 0.0) {
            row.normalized_drift = std::abs(corr.c_f[t] - corr.c0) / var0;
            row.drift_stderr = (corr.stderr_c[t] + corr.stderr_c[0]) / var0;
        }
        out[t] = row;
    }
    return out;
}

}  // namespace diatomic
