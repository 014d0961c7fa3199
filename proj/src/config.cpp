#include "diatomic/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace diatomic {

ExperimentKind kind_from_string(const std::string& s) {
    if (s == "sample") return ExperimentKind::sample;
    if (s == "evolve") return ExperimentKind::evolve;
    if (s == "correlate") return ExperimentKind::correlate;
    if (s == "normalform") return ExperimentKind::normalform;
    if (s == "sweep") return ExperimentKind::sweep;
    throw ConfigError("experiment.kind", "unknown kind '" + s + "'");
}

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::sample: return "sample";
        case ExperimentKind::evolve: return "evolve";
        case ExperimentKind::correlate: return "correlate";
        case ExperimentKind::normalform: return "normalform";
        case ExperimentKind::sweep: return "sweep";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

class KeyValues {
public:
    explicit KeyValues(const std::string& text) {
        std::istringstream is(text);
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno),
                                  "expected 'key = value', got '" + line + "'");
            const std::string key = trim(line.substr(0, eq));
            const std::string val = trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError("line " + std::to_string(lineno), "empty key");
            map_[key] = val;
        }
    }

    bool has(const std::string& key) const { return map_.count(key) != 0; }

    std::string str(const std::string& key, const std::string& dflt) const {
        auto it = map_.find(key);
        return it == map_.end() ? dflt : it->second;
    }

    double num(const std::string& key, double dflt) const {
        auto it = map_.find(key);
        if (it == map_.end()) return dflt;
        return parse_num(key, it->second);
    }

    int integer(const std::string& key, int dflt) const {
        const double v = num(key, static_cast<double>(dflt));
        const int i = static_cast<int>(v);
        if (static_cast<double>(i) != v)
            throw ConfigError(key, "expected an integer");
        return i;
    }

    std::uint64_t u64(const std::string& key, std::uint64_t dflt) const {
        auto it = map_.find(key);
        if (it == map_.end()) return dflt;
        try {
            return std::stoull(it->second);
        } catch (...) {
            throw ConfigError(key, "expected an unsigned integer");
        }
    }

    std::vector<double> num_list(const std::string& key) const {
        std::vector<double> out;
        auto it = map_.find(key);
        if (it == map_.end()) return out;
        std::stringstream ss(it->second);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) throw ConfigError(key, "empty list element");
            out.push_back(parse_num(key, item));
        }
        return out;
    }

    std::vector<std::string> unused(const std::vector<std::string>& known_prefixes) const {
        std::vector<std::string> out;
        for (const auto& [k, v] : map_) {
            bool ok = false;
            for (const auto& p : known_prefixes)
                if (k.rfind(p, 0) == 0) ok = true;
            if (!ok) out.push_back(k);
        }
        return out;
    }

private:
    static double parse_num(const std::string& key, const std::string& s) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw ConfigError(key, "expected a number, got '" + s + "'");
        }
    }
    std::map<std::string, std::string> map_;
};

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    KeyValues kv(text);
    ExperimentConfig c;
    c.raw_text = text;

    c.chain.n_cells = kv.integer("chain.N", c.chain.n_cells);
    c.chain.m1 = kv.num("chain.m1", c.chain.m1);
    c.chain.m2 = kv.num("chain.m2", c.chain.m2);
    c.chain.stiffness = kv.num("chain.K", c.chain.stiffness);
    c.chain.cubic = kv.num("chain.A", c.chain.cubic);
    c.chain.quartic = kv.num("chain.B", c.chain.quartic);

    c.sampler.beta = kv.num("sampler.beta", c.sampler.beta);
    c.sampler.n_samples = kv.integer("sampler.n_samples", c.sampler.n_samples);
    c.sampler.burn_in = kv.integer("sampler.burn_in", c.sampler.burn_in);
    c.sampler.thin = kv.integer("sampler.thin", c.sampler.thin);
    c.sampler.step_scale = kv.num("sampler.step_scale", c.sampler.step_scale);
    c.sampler.seed = kv.u64("sampler.seed", c.sampler.seed);

    // dt given either directly or in units of 1/Omega
    const double omega = std::sqrt(2.0 * c.chain.stiffness * (c.chain.m1 + c.chain.m2) /
                                   (c.chain.m1 * c.chain.m2));
    if (kv.has("integrator.dt") && kv.has("integrator.dt_omega"))
        throw ConfigError("integrator.dt", "give either dt or dt_omega, not both");
    if (kv.has("integrator.dt_omega"))
        c.integrator.dt = kv.num("integrator.dt_omega", 0.1) / omega;
    else
        c.integrator.dt = kv.num("integrator.dt", 0.1 / omega);
    c.integrator.t_final = kv.num("integrator.t_final", c.integrator.t_final);
    c.integrator.record_stride = kv.integer("integrator.record_stride", 1);
    c.integrator.scheme = scheme_from_string(kv.str("integrator.scheme", "yoshida4"));

    c.kind = kind_from_string(kv.str("experiment.kind", "sample"));
    c.ensemble_size = kv.integer("experiment.ensemble_size", c.ensemble_size);
    c.lag_count = kv.integer("experiment.lag_count", 0);
    c.normalform_order = kv.integer("experiment.normalform_order", 1);
    c.freezing_threshold = kv.num("experiment.threshold", 0.2);

    c.sweep_beta = kv.num_list("sweep.beta");
    c.sweep_mass_ratio = kv.num_list("sweep.mass_ratio");
    {
        auto ns = kv.num_list("sweep.N");
        for (double v : ns) {
            const int i = static_cast<int>(v);
            if (static_cast<double>(i) != v) throw ConfigError("sweep.N", "expected integers");
            c.sweep_n.push_back(i);
        }
    }

    const auto stray =
        kv.unused({"chain.", "sampler.", "integrator.", "experiment.", "sweep."});
    if (!stray.empty()) throw ConfigError(stray.front(), "unknown key");

    c.validate();
    return c;
}

void ExperimentConfig::validate() const {
    try {
        chain.validate();
    } catch (const std::exception& e) {
        throw ConfigError("chain", e.what());
    }
    try {
        sampler.validate();
    } catch (const std::exception& e) {
        throw ConfigError("sampler", e.what());
    }
    if (!(integrator.dt > 0.0)) throw ConfigError("integrator.dt", "must be > 0");
    if (integrator.record_stride < 1)
        throw ConfigError("integrator.record_stride", "must be >= 1");
    if (ensemble_size < 1) throw ConfigError("experiment.ensemble_size", "must be >= 1");
    if (kind == ExperimentKind::sweep && sweep_beta.empty() && sweep_mass_ratio.empty() &&
        sweep_n.empty())
        throw ConfigError("sweep", "kind = sweep requires at least one non-empty axis");
    if (kind == ExperimentKind::normalform) {
        if (normalform_order < 0) throw ConfigError("experiment.normalform_order", "must be >= 0");
        if (normalform_order > chain.s_order())
            throw ConfigError("experiment.normalform_order",
                              "exceeds floor(sqrt(m1/m2)/2) = " + std::to_string(chain.s_order()));
    }
    for (double b : sweep_beta)
        if (!(b > 0.0)) throw ConfigError("sweep.beta", "entries must be > 0");
    for (double r : sweep_mass_ratio)
        if (!(r > 1.0)) throw ConfigError("sweep.mass_ratio", "entries must be > 1");
    for (int n : sweep_n)
        if (n < 2) throw ConfigError("sweep.N", "entries must be >= 2");
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config", "cannot open file '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::uint64_t text_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace diatomic
