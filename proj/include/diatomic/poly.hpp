#ifndef DIATOMIC_POLY_HPP
#define DIATOMIC_POLY_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "diatomic/modes.hpp"

namespace diatomic {

// One factor of a monomial: xi (sigma = +1) or eta (sigma = -1) at slot (k, l).
struct Factor {
    int sigma;  // +1 -> xi, -1 -> eta
    int k;
    int branch;  // kAcoustic / kOptical
};

// Degree-s monomial as a canonically ordered factor list. The order on
// factors is (branch, k, sigma); two keys describing the same product
// compare equal. Encoded factors fit one uint32 so comparison and hashing
// are cheap.
class MonomialKey {
public:
    static constexpr int kMaxDegree = 8;
    static constexpr int kKOffset = 1 << 11;

    MonomialKey() = default;
    explicit MonomialKey(const std::vector<Factor>& factors);

    static std::uint32_t encode(const Factor& f) {
        return (static_cast<std::uint32_t>(f.branch) << 16) |
               (static_cast<std::uint32_t>(f.k + kKOffset) << 1) |
               (f.sigma > 0 ? 1u : 0u);
    }
    static Factor decode(std::uint32_t e) {
        return Factor{(e & 1u) ? +1 : -1,
                      static_cast<int>((e >> 1) & 0x7fffu) - kKOffset,
                      static_cast<int>(e >> 16)};
    }

    int degree() const { return deg_; }
    Factor factor(int i) const { return decode(enc_[i]); }
    std::uint32_t raw(int i) const { return enc_[i]; }

    void push_sorted(std::uint32_t e);  // insert keeping canonical order

    // key with factor i removed
    MonomialKey without(int i) const;
    // merged factor multiset of *this and other
    MonomialKey merged(const MonomialKey& other) const;
    // sigma -> -sigma on every factor (phase-space conjugation)
    MonomialKey conjugated() const;

    int momentum_mod(int n_cells) const;      // sum_j sigma_j k_j mod N, in [0, N)
    int lomega_count() const;                 // sum_j sigma_j [l_j = optical]

    bool operator==(const MonomialKey& o) const {
        if (deg_ != o.deg_) return false;
        for (int i = 0; i < deg_; ++i)
            if (enc_[i] != o.enc_[i]) return false;
        return true;
    }
    bool operator<(const MonomialKey& o) const;
    std::size_t hash() const;

private:
    std::uint8_t deg_ = 0;
    std::array<std::uint32_t, kMaxDegree> enc_{};
};

// Element of the class P_s at finite N: canonical monomials with complex
// coefficients. Stored coefficients are the full numeric monomial
// coefficients (the class prefactor 1/N^{(s-2)/2} folded in); the plus norm
// multiplies it back out.
class SparsePoly {
public:
    SparsePoly() = default;
    SparsePoly(int degree, int n_cells) : degree_(degree), n_cells_(n_cells) {}

    int degree() const { return degree_; }
    int n_cells() const { return n_cells_; }
    std::size_t n_terms() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    const std::vector<std::pair<MonomialKey, cplx>>& terms() const { return terms_; }

    double max_abs_coeff() const;
    double plus_norm() const;  // N^{(s-2)/2} * max |coefficient|

    bool momentum_ok() const;
    // coefficient(conjugated key) == conj(coefficient) within tol * max|c|
    bool reality_ok(double tol = 1e-12) const;

    cplx coeff(const MonomialKey& key) const;

    cplx evaluate(const XiEta& z, const ModeBasis& basis) const;

    SparsePoly& operator+=(const SparsePoly& other);
    SparsePoly& operator*=(double scale);
    SparsePoly& operator*=(cplx scale);
    friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
    friend SparsePoly operator*(double s, SparsePoly p) { return p *= s; }

    // Per-key multiply by a function of the key (diagonal operators).
    template <typename Fn>
    SparsePoly mapped(Fn&& fn) const {
        SparsePoly out(degree_, n_cells_);
        out.terms_.reserve(terms_.size());
        for (const auto& [key, c] : terms_) {
            const cplx v = fn(key) * c;
            if (v != cplx{0.0, 0.0}) out.terms_.emplace_back(key, v);
        }
        return out;
    }
    template <typename Pred>
    SparsePoly filtered(Pred&& pred) const {
        SparsePoly out(degree_, n_cells_);
        for (const auto& [key, c] : terms_)
            if (pred(key)) out.terms_.emplace_back(key, c);
        return out;
    }

    // Drop coefficients below rel_tol * max|c| and sort canonically.
    void finalize(double rel_tol = 1e-15);

    class Builder;

private:
    friend class Builder;
    int degree_ = 0;
    int n_cells_ = 0;
    std::vector<std::pair<MonomialKey, cplx>> terms_;  // sorted by key
};

// Accumulates (key, coefficient) pairs with merging; deterministic result
// independent of insertion order.
class SparsePoly::Builder {
public:
    Builder(int degree, int n_cells, std::size_t term_budget = 10'000'000);
    void add(const MonomialKey& key, cplx c);
    SparsePoly take(double prune_rel_tol = 1e-15);
    std::size_t size() const;

private:
    struct Impl;
    int degree_, n_cells_;
    std::size_t budget_;
    std::vector<std::pair<MonomialKey, cplx>> flat_;  // unsorted accumulation
};

// {f, g} by Leibniz contraction with the canonical weights
// {xi_k^l, eta_k^l} = i omega_k^l. Degree r + s - 2.
SparsePoly poisson_bracket(const SparsePoly& f, const SparsePoly& g, const ModeBasis& basis);

double plus_norm(const SparsePoly& f);

// Line-oriented text serialization; bit-exact round trip.
void save_poly(const SparsePoly& f, const ChainParams& params, std::ostream& os);
void save_poly_file(const SparsePoly& f, const ChainParams& params, const std::string& path);
SparsePoly load_poly(std::istream& is);
SparsePoly load_poly_file(const std::string& path);

std::uint64_t params_hash(const ChainParams& params);

}  // namespace diatomic

#endif
