#include "diatomic/poly.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace diatomic {

MonomialKey::MonomialKey(const std::vector<Factor>& factors) {
    if (factors.size() > kMaxDegree)
        throw std::invalid_argument("MonomialKey: degree above capacity");
    for (const auto& f : factors) push_sorted(encode(f));
}

void MonomialKey::push_sorted(std::uint32_t e) {
    int i = deg_;
    while (i > 0 && enc_[i - 1] > e) {
        enc_[i] = enc_[i - 1];
        --i;
    }
    enc_[i] = e;
    ++deg_;
}

MonomialKey MonomialKey::without(int i) const {
    MonomialKey out;
    out.deg_ = deg_ - 1;
    for (int a = 0, b = 0; a < deg_; ++a)
        if (a != i) out.enc_[b++] = enc_[a];
    return out;
}

MonomialKey MonomialKey::merged(const MonomialKey& other) const {
    if (deg_ + other.deg_ > kMaxDegree)
        throw std::invalid_argument("MonomialKey: merged degree above capacity");
    MonomialKey out;
    out.deg_ = deg_ + other.deg_;
    int a = 0, b = 0, c = 0;
    while (a < deg_ && b < other.deg_)
        out.enc_[c++] = (enc_[a] <= other.enc_[b]) ? enc_[a++] : other.enc_[b++];
    while (a < deg_) out.enc_[c++] = enc_[a++];
    while (b < other.deg_) out.enc_[c++] = other.enc_[b++];
    return out;
}

MonomialKey MonomialKey::conjugated() const {
    MonomialKey out;
    for (int i = 0; i < deg_; ++i) out.push_sorted(enc_[i] ^ 1u);
    return out;
}

int MonomialKey::momentum_mod(int n_cells) const {
    int s = 0;
    for (int i = 0; i < deg_; ++i) {
        const Factor f = decode(enc_[i]);
        s += f.sigma * f.k;
    }
    int r = s % n_cells;
    if (r < 0) r += n_cells;
    return r;
}

int MonomialKey::lomega_count() const {
    int m = 0;
    for (int i = 0; i < deg_; ++i) {
        const Factor f = decode(enc_[i]);
        if (f.branch == kOptical) m += f.sigma;
    }
    return m;
}

bool MonomialKey::operator<(const MonomialKey& o) const {
    if (deg_ != o.deg_) return deg_ < o.deg_;
    for (int i = 0; i < deg_; ++i)
        if (enc_[i] != o.enc_[i]) return enc_[i] < o.enc_[i];
    return false;
}

std::size_t MonomialKey::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (int i = 0; i < deg_; ++i) {
        h ^= enc_[i];
        h *= 1099511628211ull;
    }
    h ^= deg_;
    h *= 1099511628211ull;
    return static_cast<std::size_t>(h);
}

double SparsePoly::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

double SparsePoly::plus_norm() const {
    return std::pow(static_cast<double>(n_cells_), 0.5 * (degree_ - 2)) * max_abs_coeff();
}

double plus_norm(const SparsePoly& f) { return f.plus_norm(); }

bool SparsePoly::momentum_ok() const {
    for (const auto& [k, c] : terms_)
        if (k.momentum_mod(n_cells_) != 0) return false;
    return true;
}

bool SparsePoly::reality_ok(double tol) const {
    const double scale = std::max(max_abs_coeff(), 1e-300);
    for (const auto& [k, c] : terms_) {
        const cplx cc = coeff(k.conjugated());
        if (std::abs(cc - std::conj(c)) > tol * scale) return false;
    }
    return true;
}

cplx SparsePoly::coeff(const MonomialKey& key) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                               [](const auto& t, const MonomialKey& k) { return t.first < k; });
    if (it != terms_.end() && it->first == key) return it->second;
    return cplx{0.0, 0.0};
}

cplx SparsePoly::evaluate(const XiEta& z, const ModeBasis& basis) const {
    cplx acc{0.0, 0.0};
    for (const auto& [key, c] : terms_) {
        cplx prod = c;
        for (int i = 0; i < key.degree(); ++i) {
            const Factor f = key.factor(i);
            const int idx = basis.index_of(f.k);
            prod *= (f.sigma > 0) ? z.xi[f.branch][idx] : z.eta[f.branch][idx];
        }
        acc += prod;
    }
    return acc;
}

SparsePoly& SparsePoly::operator+=(const SparsePoly& other) {
    if (other.empty()) return *this;
    if (empty() && degree_ == other.degree_) {
        terms_ = other.terms_;
        return *this;
    }
    if (degree_ != other.degree_ || n_cells_ != other.n_cells_)
        throw std::invalid_argument("SparsePoly: degree/N mismatch in +=");
    std::vector<std::pair<MonomialKey, cplx>> merged;
    merged.reserve(terms_.size() + other.terms_.size());
    std::size_t a = 0, b = 0;
    while (a < terms_.size() && b < other.terms_.size()) {
        if (terms_[a].first == other.terms_[b].first) {
            const cplx c = terms_[a].second + other.terms_[b].second;
            if (c != cplx{0.0, 0.0}) merged.emplace_back(terms_[a].first, c);
            ++a;
            ++b;
        } else if (terms_[a].first < other.terms_[b].first) {
            merged.push_back(terms_[a++]);
        } else {
            merged.push_back(other.terms_[b++]);
        }
    }
    while (a < terms_.size()) merged.push_back(terms_[a++]);
    while (b < other.terms_.size()) merged.push_back(other.terms_[b++]);
    terms_ = std::move(merged);
    return *this;
}

SparsePoly& SparsePoly::operator*=(double s) {
    for (auto& [k, c] : terms_) c *= s;
    return *this;
}
SparsePoly& SparsePoly::operator*=(cplx s) {
    for (auto& [k, c] : terms_) c *= s;
    return *this;
}

void SparsePoly::finalize(double rel_tol) {
    std::sort(terms_.begin(), terms_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    const double cut = rel_tol * max_abs_coeff();
    std::vector<std::pair<MonomialKey, cplx>> out;
    out.reserve(terms_.size());
    for (const auto& [k, c] : terms_)
        if (std::abs(c) > cut) out.push_back({k, c});
    terms_ = std::move(out);
}

SparsePoly::Builder::Builder(int degree, int n_cells, std::size_t term_budget)
    : degree_(degree), n_cells_(n_cells), budget_(term_budget) {}

void SparsePoly::Builder::add(const MonomialKey& key, cplx c) {
    if (c == cplx{0.0, 0.0}) return;
    if (key.degree() != degree_)
        throw std::invalid_argument("Builder: key degree mismatch");
    flat_.emplace_back(key, c);
    if (flat_.size() > budget_)
        throw std::runtime_error("SparsePoly::Builder: term budget exceeded");
}

std::size_t SparsePoly::Builder::size() const { return flat_.size(); }

SparsePoly SparsePoly::Builder::take(double prune_rel_tol) {
    // Deterministic merge: sort (stable on key, insertion order breaks ties
    // deterministically because the sort is stable) and accumulate runs.
    std::stable_sort(flat_.begin(), flat_.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    SparsePoly out(degree_, n_cells_);
    out.terms_.reserve(flat_.size() / 2 + 1);
    std::size_t i = 0;
    while (i < flat_.size()) {
        MonomialKey key = flat_[i].first;
        cplx acc{0.0, 0.0};
        while (i < flat_.size() && flat_[i].first == key) acc += flat_[i++].second;
        if (acc != cplx{0.0, 0.0}) out.terms_.emplace_back(key, acc);
    }
    flat_.clear();
    out.finalize(prune_rel_tol);
    return out;
}

SparsePoly poisson_bracket(const SparsePoly& f, const SparsePoly& g, const ModeBasis& basis) {
    if (f.degree() < 2 || g.degree() < 2)
        throw std::invalid_argument("poisson_bracket: degrees must be >= 2");
    const int out_deg = f.degree() + g.degree() - 2;
    SparsePoly::Builder builder(out_deg, f.n_cells());

    // index: raw factor encoding -> list of (term index, factor position, multiplicity)
    struct Entry {
        std::uint32_t enc;
        std::uint32_t term;
        std::uint8_t pos;
        std::uint8_t mult;
    };
    auto build_index = [](const SparsePoly& p) {
        std::vector<Entry> v;
        const auto& terms = p.terms();
        for (std::uint32_t t = 0; t < terms.size(); ++t) {
            const MonomialKey& key = terms[t].first;
            int i = 0;
            while (i < key.degree()) {
                int j = i;
                while (j < key.degree() && key.raw(j) == key.raw(i)) ++j;
                v.push_back({key.raw(i), t, static_cast<std::uint8_t>(i),
                             static_cast<std::uint8_t>(j - i)});
                i = j;
            }
        }
        std::sort(v.begin(), v.end(), [](const Entry& a, const Entry& b) {
            return a.enc < b.enc || (a.enc == b.enc && a.term < b.term);
        });
        return v;
    };
    const auto fi = build_index(f);
    const auto gi = build_index(g);

    struct EncLess {
        bool operator()(const Entry& a, std::uint32_t b) const { return a.enc < b; }
        bool operator()(std::uint32_t a, const Entry& b) const { return a < b.enc; }
    };
    auto contract = [&](std::uint32_t enc_f, std::uint32_t enc_g, cplx weight) {
        auto fr = std::equal_range(fi.begin(), fi.end(), enc_f, EncLess{});
        auto gr = std::equal_range(gi.begin(), gi.end(), enc_g, EncLess{});
        for (auto ef = fr.first; ef != fr.second; ++ef)
            for (auto eg = gr.first; eg != gr.second; ++eg) {
                const auto& [fkey, fc] = f.terms()[ef->term];
                const auto& [gkey, gc] = g.terms()[eg->term];
                const cplx c = weight * static_cast<double>(ef->mult) *
                               static_cast<double>(eg->mult) * fc * gc;
                builder.add(fkey.without(ef->pos).merged(gkey.without(eg->pos)), c);
            }
    };

    // distinct (k, l) slots present in f; every contraction needs one there
    std::uint32_t last = 0xffffffffu;
    for (const auto& e : fi) {
        const std::uint32_t slot = e.enc >> 1;  // drop sigma bit
        if (slot == last) continue;
        last = slot;
        const Factor fac = MonomialKey::decode(e.enc);
        const cplx iw{0.0, basis.omega(fac.branch, fac.k)};
        contract((slot << 1) | 1u, slot << 1, iw);        // xi_f against eta_g
        contract(slot << 1, (slot << 1) | 1u, -iw);       // eta_f against xi_g
    }
    return builder.take();
}

std::uint64_t params_hash(const ChainParams& params) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xffu;
            h *= 1099511628211ull;
        }
    };
    mix(static_cast<std::uint64_t>(params.n_cells));
    for (double d : {params.m1, params.m2, params.stiffness, params.cubic, params.quartic}) {
        std::uint64_t bits;
        std::memcpy(&bits, &d, 8);
        mix(bits);
    }
    return h;
}

void save_poly(const SparsePoly& f, const ChainParams& params, std::ostream& os) {
    char buf[64];
    os << "# diatomic poly v1\n";
    os << "degree " << f.degree() << "\n";
    os << "n_cells " << f.n_cells() << "\n";
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(params_hash(params)));
    os << "params_hash " << buf << "\n";
    os << "terms " << f.n_terms() << "\n";
    for (const auto& [key, c] : f.terms()) {
        for (int i = 0; i < key.degree(); ++i) {
            const Factor fac = key.factor(i);
            os << (fac.sigma > 0 ? "+1 " : "-1 ")
               << (fac.branch == kOptical ? "+ " : "- ") << fac.k << "  ";
        }
        std::snprintf(buf, sizeof buf, "%.17g", c.real());
        os << "; " << buf;
        std::snprintf(buf, sizeof buf, "%.17g", c.imag());
        os << " " << buf << "\n";
    }
}

void save_poly_file(const SparsePoly& f, const ChainParams& params, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("save_poly_file: cannot open " + path);
    save_poly(f, params, os);
}

SparsePoly load_poly(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("# diatomic poly", 0) != 0)
        throw std::runtime_error("load_poly: bad header");
    int degree = -1, n_cells = -1;
    std::size_t n_terms = 0;
    std::string word;
    is >> word >> degree;
    if (word != "degree") throw std::runtime_error("load_poly: expected degree");
    is >> word >> n_cells;
    if (word != "n_cells") throw std::runtime_error("load_poly: expected n_cells");
    std::string hash_hex;
    is >> word >> hash_hex;
    if (word != "params_hash") throw std::runtime_error("load_poly: expected params_hash");
    is >> word >> n_terms;
    if (word != "terms") throw std::runtime_error("load_poly: expected terms");

    SparsePoly::Builder b(degree, n_cells);
    for (std::size_t t = 0; t < n_terms; ++t) {
        std::vector<Factor> factors;
        for (int i = 0; i < degree; ++i) {
            int sigma;
            std::string lch;
            int k;
            is >> sigma >> lch >> k;
            factors.push_back({sigma, k, lch == "+" ? kOptical : kAcoustic});
        }
        std::string semi;
        double re, im;
        is >> semi >> re >> im;
        if (semi != ";") throw std::runtime_error("load_poly: malformed term line");
        b.add(MonomialKey(factors), cplx{re, im});
    }
    return b.take(0.0);
}

SparsePoly load_poly_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_poly_file: cannot open " + path);
    return load_poly(is);
}

}  // namespace diatomic
