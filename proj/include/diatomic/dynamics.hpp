#ifndef DIATOMIC_DYNAMICS_HPP
#define DIATOMIC_DYNAMICS_HPP

#include <functional>
#include <string>
#include <vector>

#include "diatomic/chain.hpp"
#include "diatomic/modes.hpp"

namespace diatomic {

enum class Scheme { verlet2, yoshida4 };

Scheme scheme_from_string(const std::string& name);
std::string to_string(Scheme s);

struct IntegratorConfig {
    double dt = 0.01;
    double t_final = 1.0;
    int record_stride = 1;
    Scheme scheme = Scheme::verlet2;

    // dt * max omega+ <= 0.2: resolve the fastest optical period
    void validate(const ModeBasis& basis) const;
};

// One step of the chosen scheme; forces buffer is reused between calls when
// the caller keeps the Stepper alive.
class Stepper {
public:
    Stepper(const ChainParams& params, Scheme scheme);
    void step(PhasePoint& state, double dt);

private:
    void verlet(PhasePoint& state, double dt);
    ChainParams params_;
    Scheme scheme_;
    std::vector<double> force_;
    bool force_valid_ = false;
};

void step(PhasePoint& state, const ChainParams& params, double dt,
          Scheme scheme = Scheme::verlet2);

using Observable = std::function<double(const PhasePoint&)>;

struct EvolveResult {
    std::vector<double> times;
    std::vector<std::vector<double>> observables;  // [obs][record]
    double max_rel_energy_drift = 0.0;
    bool drift_flagged = false;  // relative drift above 1e-5
};

EvolveResult evolve(PhasePoint state, const ChainParams& params, const IntegratorConfig& config,
                    const std::vector<Observable>& observables);

}  // namespace diatomic

#endif
