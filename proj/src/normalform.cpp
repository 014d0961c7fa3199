#include "diatomic/normalform.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace diatomic {

namespace {
const cplx kI{0.0, 1.0};

std::vector<std::pair<int, int>> included_slots(const ModeBasis& basis) {
    std::vector<std::pair<int, int>> slots;  // (branch, k)
    for (int b : {kAcoustic, kOptical})
        for (int idx = 0; idx < basis.n_cells(); ++idx) {
            const int k = basis.k_at(idx);
            if (b == kAcoustic && k == 0) continue;
            slots.push_back({b, k});
        }
    return slots;
}
}  // namespace

SparsePoly build_H0(const ModeBasis& basis) {
    SparsePoly::Builder b(2, basis.n_cells());
    for (auto [br, k] : included_slots(basis))
        b.add(MonomialKey({{+1, k, br}, {-1, k, br}}), cplx{1.0, 0.0});
    return b.take(0.0);
}

SparsePoly build_Phi0(const ModeBasis& basis) {
    SparsePoly::Builder b(2, basis.n_cells());
    for (int idx = 0; idx < basis.n_cells(); ++idx) {
        const int k = basis.k_at(idx);
        b.add(MonomialKey({{+1, k, kOptical}, {-1, k, kOptical}}),
              cplx{1.0 / basis.omega(kOptical, k), 0.0});
    }
    return b.take(0.0);
}

SparsePoly build_HOmega(const ModeBasis& basis) {
    SparsePoly p = build_Phi0(basis);
    p *= basis.Omega();
    return p;
}

SparsePoly build_Theta0(const ModeBasis& basis) {
    SparsePoly p = build_H0(basis);
    SparsePoly hw = build_HOmega(basis);
    hw *= -1.0;
    p += hw;
    p.finalize();
    return p;
}

namespace {

// sum_j r_{j,m}^s in mode coordinates: ordered (k, l) tuples with
// sum k = 0 mod N, weight N * prod_i w^{l_i}_{k_i, m}, then
// qhat_k = (xi_{-k} - eta_k) / (i sqrt(2) omega_k) expanded per slot.
SparsePoly build_anharmonic(const ModeBasis& basis, int s, double prefactor) {
    const int N = basis.n_cells();
    SparsePoly::Builder builder(s, N);
    if (prefactor == 0.0) return builder.take(0.0);

    const auto slots = included_slots(basis);
    const int n_slots = static_cast<int>(slots.size());

    // per slot: w components, 1/(i sqrt(2) omega)
    std::vector<std::array<cplx, 2>> w(n_slots);
    std::vector<cplx> inv_om(n_slots);
    std::vector<int> slot_k(n_slots), slot_b(n_slots);
    for (int i = 0; i < n_slots; ++i) {
        auto [br, k] = slots[i];
        w[i] = basis.w(br, k);
        inv_om[i] = 1.0 / (kI * std::sqrt(2.0) * basis.omega(br, k));
        slot_k[i] = k;
        slot_b[i] = br;
    }

    std::vector<int> pick(s, 0);
    // enumerate the first s-1 slots freely; the last k is fixed mod N
    std::vector<int> idx(s - 1, 0);
    while (true) {
        int ksum = 0;
        for (int i = 0; i < s - 1; ++i) ksum += slot_k[idx[i]];
        for (int last = 0; last < n_slots; ++last) {
            if ((((ksum + slot_k[last]) % N) + N) % N != 0) continue;
            // assemble the ordered tuple
            std::array<int, 8> tup{};
            for (int i = 0; i < s - 1; ++i) tup[i] = idx[i];
            tup[s - 1] = last;

            // bond-species sum of w products
            cplx wprod0{prefactor, 0.0}, wprod1{prefactor, 0.0};
            for (int i = 0; i < s; ++i) {
                wprod0 *= w[tup[i]][0];
                wprod1 *= w[tup[i]][1];
            }
            cplx base = wprod0 + wprod1;
            if (base == cplx{0.0, 0.0}) continue;
            for (int i = 0; i < s; ++i) base *= inv_om[tup[i]];

            // expand prod_i (xi_{-k_i} - eta_{k_i})
            for (int mask = 0; mask < (1 << s); ++mask) {
                MonomialKey key;
                int sign = 0;
                for (int i = 0; i < s; ++i) {
                    const int sl = tup[i];
                    if (mask & (1 << i)) {
                        key.push_sorted(MonomialKey::encode(
                            {+1, basis.wrap_k(-slot_k[sl]), slot_b[sl]}));
                    } else {
                        key.push_sorted(MonomialKey::encode({-1, slot_k[sl], slot_b[sl]}));
                        ++sign;
                    }
                }
                builder.add(key, (sign % 2 ? -base : base));
            }
        }
        // advance the odometer
        int pos = s - 2;
        while (pos >= 0 && ++idx[pos] == n_slots) idx[pos--] = 0;
        if (pos < 0) break;
    }
    (void)pick;
    return builder.take();
}

}  // namespace

SparsePoly build_H1(const ModeBasis& basis) {
    const auto& p = basis.params();
    return build_anharmonic(basis, 3,
                            0.5 * p.stiffness * p.cubic * static_cast<double>(p.n_cells));
}

SparsePoly build_H2(const ModeBasis& basis) {
    const auto& p = basis.params();
    return build_anharmonic(basis, 4,
                            0.5 * p.stiffness * p.quartic * static_cast<double>(p.n_cells));
}

double l0_eigenvalue_im(const MonomialKey& key, const ModeBasis& basis) {
    double s = 0.0;
    for (int i = 0; i < key.degree(); ++i) {
        const Factor f = key.factor(i);
        s += f.sigma * basis.omega(f.branch, f.k);
    }
    return s;
}

SparsePoly l0_apply(const SparsePoly& f, const ModeBasis& basis) {
    return f.mapped([&](const MonomialKey& k) { return kI * l0_eigenvalue_im(k, basis); });
}

SparsePoly lomega_apply(const SparsePoly& f, const ModeBasis& basis) {
    const double W = basis.Omega();
    return f.mapped([&](const MonomialKey& k) {
        return kI * (W * static_cast<double>(k.lomega_count()));
    });
}

SparsePoly ltheta0_apply(const SparsePoly& f, const ModeBasis& basis) {
    const double W = basis.Omega();
    return f.mapped([&](const MonomialKey& k) {
        return kI * (l0_eigenvalue_im(k, basis) - W * static_cast<double>(k.lomega_count()));
    });
}

SparsePoly project_kernel(const SparsePoly& f) {
    return f.filtered([](const MonomialKey& k) { return k.lomega_count() == 0; });
}

SparsePoly project_range(const SparsePoly& f) {
    return f.filtered([](const MonomialKey& k) { return k.lomega_count() != 0; });
}

std::string key_to_string(const MonomialKey& key) {
    std::ostringstream os;
    for (int i = 0; i < key.degree(); ++i) {
        const Factor f = key.factor(i);
        os << (f.sigma > 0 ? "xi" : "eta") << (f.branch == kOptical ? "+" : "-")
           << "(" << f.k << ")";
        if (i + 1 < key.degree()) os << " ";
    }
    return os.str();
}

HomologicalSolution solve_homological(const SparsePoly& psi, const ModeBasis& basis,
                                      bool run_neumann_check, double hard_floor,
                                      int max_neumann_iterations) {
    HomologicalSolution out;
    out.z = project_kernel(psi);
    SparsePoly rng_part = project_range(psi);
    const double W = basis.Omega();

    out.diag.min_divisor = std::numeric_limits<double>::infinity();
    for (const auto& [key, c] : rng_part.terms()) {
        const double div = std::abs(l0_eigenvalue_im(key, basis));
        if (div < out.diag.min_divisor) {
            out.diag.min_divisor = div;
            out.diag.worst_key = key_to_string(key);
        }
        if (div < 0.5 * W) ++out.diag.keys_below_omega_half;
        if (div < hard_floor * W)
            throw std::runtime_error("solve_homological: resonant divisor on key " +
                                     key_to_string(key));
    }
    if (rng_part.empty()) out.diag.min_divisor = 0.0;
    out.diag.guard_margin = rng_part.empty() ? std::numeric_limits<double>::infinity()
                                             : out.diag.min_divisor / (0.5 * W);

    // direct per-key division: L0 chi = Pi_R psi
    out.chi = rng_part.mapped([&](const MonomialKey& k) {
        return 1.0 / (kI * l0_eigenvalue_im(k, basis));
    });

    if (run_neumann_check && !rng_part.empty()) {
        // chi = sum_m (-K)^m LOmega^{-1} Pi_R psi, K = LOmega^{-1} LTheta0
        auto lomega_inv = [&](const SparsePoly& f) {
            return f.mapped([&](const MonomialKey& k) {
                return 1.0 / (kI * (W * static_cast<double>(k.lomega_count())));
            });
        };
        SparsePoly acc = lomega_inv(rng_part);
        SparsePoly incr = acc;
        int it = 0;
        for (; it < max_neumann_iterations; ++it) {
            incr = lomega_inv(ltheta0_apply(incr, basis));
            incr *= -1.0;
            acc += incr;
            if (incr.plus_norm() < 1e-14 * std::max(acc.plus_norm(), 1e-300)) break;
        }
        if (it == max_neumann_iterations)
            throw std::runtime_error("solve_homological: Neumann series did not converge");
        out.diag.neumann_iterations = it + 1;
        SparsePoly diff = acc;
        SparsePoly neg = out.chi;
        neg *= -1.0;
        diff += neg;
        diff.finalize(0.0);
        out.diag.neumann_disagreement = diff.plus_norm();
    }
    return out;
}

namespace {

// E_s f = sum_{j=1..s} (j/s) L_{chi_j} E_{s-j} f   with L_chi f = {f, chi}
SparsePoly apply_E(int s, const SparsePoly& f, const std::vector<SparsePoly>& chi,
                   const ModeBasis& basis) {
    if (s == 0) return f;
    SparsePoly acc(f.degree() + s, f.n_cells());
    for (int j = 1; j <= s; ++j) {
        if (chi[j - 1].empty()) continue;
        SparsePoly inner = apply_E(s - j, f, chi, basis);
        if (inner.empty()) continue;
        SparsePoly term = poisson_bracket(inner, chi[j - 1], basis);
        term *= static_cast<double>(j) / s;
        acc += term;
    }
    acc.finalize();
    return acc;
}

// Inverse-series components: G_s f = -sum_{j=1..s} (j/s) G_{s-j} (L_{chi_j} f).
// T^{-1} = sum G_s inverts T = sum E_s; this is the transform that carries
// Phi0 to the adiabatic invariant.
SparsePoly apply_G(int s, const SparsePoly& f, const std::vector<SparsePoly>& chi,
                   const ModeBasis& basis) {
    if (s == 0) return f;
    SparsePoly acc(f.degree() + s, f.n_cells());
    for (int j = 1; j <= s; ++j) {
        if (chi[j - 1].empty()) continue;
        SparsePoly inner = poisson_bracket(f, chi[j - 1], basis);
        if (inner.empty()) continue;
        SparsePoly term = apply_G(s - j, inner, chi, basis);
        term *= static_cast<double>(j) / s;
        acc += term;
    }
    acc *= -1.0;
    acc.finalize();
    return acc;
}

void check_physical(const SparsePoly& f, const char* what) {
    if (!f.momentum_ok())
        throw std::logic_error(std::string(what) + ": selection rule violated");
    if (!f.reality_ok(1e-9))
        throw std::logic_error(std::string(what) + ": reality violated");
}

}  // namespace

NormalFormResult lie_construct(const ModeBasis& basis, int S_req, bool run_neumann_check) {
    const auto& params = basis.params();
    if (S_req < 0) throw std::invalid_argument("lie_construct: order must be >= 0");
    if (S_req > params.s_order())
        throw std::invalid_argument("lie_construct: requested order exceeds floor(sqrt(m1/m2)/2)");

    NormalFormResult res;
    res.order = S_req;
    res.h1 = build_H1(basis);
    res.h2 = build_H2(basis);
    check_physical(res.h1, "H1");
    check_physical(res.h2, "H2");

    const SparsePoly phi0 = build_Phi0(basis);
    res.phi.push_back(phi0);

    const int N = basis.n_cells();
    auto H_of = [&](int s) -> const SparsePoly& {
        static const SparsePoly empty3(3, 0), empty4(4, 0);
        if (s == 1) return res.h1;
        if (s == 2) return res.h2;
        throw std::logic_error("H_of: only s = 1, 2 exist");
    };

    for (int s = 1; s <= S_req; ++s) {
        // Psi_s = H_s + sum_{l<s} (l/s) [ L_{chi_l} H_{s-l} + E_{s-l} Z_l ]
        SparsePoly psi(s + 2, N);
        if (s <= 2) psi += H_of(s);
        for (int l = 1; l <= s - 1; ++l) {
            const double wgt = static_cast<double>(l) / s;
            if (s - l <= 2 && !H_of(s - l).empty() && !res.chi[l - 1].empty()) {
                SparsePoly t = poisson_bracket(H_of(s - l), res.chi[l - 1], basis);
                t *= wgt;
                psi += t;
            }
            if (!res.z[l - 1].empty()) {
                SparsePoly t = apply_E(s - l, res.z[l - 1], res.chi, basis);
                t *= wgt;
                psi += t;
            }
        }
        psi.finalize();
        check_physical(psi, "Psi_s");

        HomologicalSolution sol = solve_homological(psi, basis, run_neumann_check);

        OrderDiagnostics d;
        d.order = s;
        d.psi_norm = psi.plus_norm();
        d.z_norm = sol.z.plus_norm();
        d.chi_norm = sol.chi.plus_norm();
        d.psi_terms = psi.n_terms();
        d.homological = sol.diag;
        {
            SparsePoly resid = l0_apply(sol.chi, basis);
            resid += sol.z;
            SparsePoly neg = psi;
            neg *= -1.0;
            resid += neg;
            resid.finalize(0.0);
            d.residual = resid.plus_norm();
        }
        res.diagnostics.push_back(d);

        res.z.push_back(std::move(sol.z));
        res.chi.push_back(std::move(sol.chi));
        res.phi.push_back(apply_G(s, phi0, res.chi, basis));
        check_physical(res.phi.back(), "Phi_s");
    }

    // remainder brackets: Upsilon_S = {Phi_S, H1} + {Phi_{S-1}, H2},
    // Upsilon_{S+1} = {Phi_S, H2}
    {
        SparsePoly u_s(S_req + 3, N);
        if (!res.h1.empty() && !res.phi[S_req].empty())
            u_s += poisson_bracket(res.phi[S_req], res.h1, basis);
        if (S_req >= 1 && !res.h2.empty() && !res.phi[S_req - 1].empty())
            u_s += poisson_bracket(res.phi[S_req - 1], res.h2, basis);
        u_s.finalize();
        res.upsilon_s = std::move(u_s);

        SparsePoly u_s1(S_req + 4, N);
        if (!res.h2.empty() && !res.phi[S_req].empty())
            u_s1 += poisson_bracket(res.phi[S_req], res.h2, basis);
        u_s1.finalize();
        res.upsilon_s1 = std::move(u_s1);
    }
    return res;
}

double NormalFormResult::evaluate_phi_s(const XiEta& z_state, const ModeBasis& basis) const {
    cplx acc{0.0, 0.0};
    for (const auto& p : phi) acc += p.evaluate(z_state, basis);
    return acc.real();
}

cplx evaluate(const SparsePoly& f, const PhasePoint& state, const ModeBasis& basis) {
    const XiEta z = modes_to_xieta(x_to_modes(state, basis), basis);
    return f.evaluate(z, basis);
}

double evaluate_real(const SparsePoly& f, const PhasePoint& state, const ModeBasis& basis,
                     double rel_tol) {
    const cplx v = evaluate(f, state, basis);
    // scale: the plus norm is the natural coefficient scale of the class
    const double scale = std::max(std::abs(v), f.plus_norm());
    if (std::abs(v.imag()) > rel_tol * std::max(scale, 1e-300))
        throw std::runtime_error("evaluate_real: imaginary residue above tolerance");
    return v.real();
}

EnsembleEstimate mc_variance_of_poly(const SparsePoly& f,
                                     const std::vector<PhasePoint>& ensemble,
                                     const ModeBasis& basis) {
    std::vector<double> vals;
    vals.reserve(ensemble.size());
    for (const auto& s : ensemble) vals.push_back(evaluate(f, s, basis).real());
    return estimate(vals);
}

}  // namespace diatomic
