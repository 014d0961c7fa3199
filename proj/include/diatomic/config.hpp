#ifndef DIATOMIC_CONFIG_HPP
#define DIATOMIC_CONFIG_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "diatomic/chain.hpp"
#include "diatomic/dynamics.hpp"
#include "diatomic/gibbs.hpp"

namespace diatomic {

// Configuration problems carry the offending field name.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& field, const std::string& what)
        : std::runtime_error("config field '" + field + "': " + what), field_name(field) {}
    std::string field_name;
};

enum class ExperimentKind { sample, evolve, correlate, normalform, sweep };
ExperimentKind kind_from_string(const std::string& s);
std::string to_string(ExperimentKind k);

struct ExperimentConfig {
    ChainParams chain;
    SamplerConfig sampler;
    IntegratorConfig integrator;

    ExperimentKind kind = ExperimentKind::sample;
    int ensemble_size = 64;
    int lag_count = 0;  // 0: every recorded time
    int normalform_order = 1;
    double freezing_threshold = 0.2;

    // sweep axes (kind = sweep); empty axis = keep the base value
    std::vector<double> sweep_beta;
    std::vector<double> sweep_mass_ratio;
    std::vector<int> sweep_n;

    std::string raw_text;  // original file contents (hashed into the manifest)

    void validate() const;
};

// Flat `key = value` format with dotted section prefixes and # comments.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

std::uint64_t text_hash(const std::string& text);

}  // namespace diatomic

#endif
