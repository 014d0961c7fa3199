#ifndef DIATOMIC_NORMALFORM_HPP
#define DIATOMIC_NORMALFORM_HPP

#include <string>
#include <vector>

#include "diatomic/gibbs.hpp"
#include "diatomic/poly.hpp"

namespace diatomic {

// Degree-2 generators of the construction, as elements of the monomial
// algebra (the acoustic k = 0 slot is excluded throughout):
//   H0      = sum xi eta
//   Phi0    = sum_optical xi eta / omega_k^+      (sum of optical actions)
//   HOmega  = Omega Phi0
//   Theta0  = H0 - HOmega
SparsePoly build_H0(const ModeBasis& basis);
SparsePoly build_Phi0(const ModeBasis& basis);
SparsePoly build_HOmega(const ModeBasis& basis);
SparsePoly build_Theta0(const ModeBasis& basis);

// Cubic and quartic parts of the Hamiltonian, expanded through the bond
// vectors w and qhat = (xi_{-k} - eta_k) / (i sqrt(2) omega_k). Zero
// polynomial when the corresponding coupling vanishes.
SparsePoly build_H1(const ModeBasis& basis);
SparsePoly build_H2(const ModeBasis& basis);

// Diagonal operators on monomials (eigenvalue form of Lie derivatives along
// H0, HOmega, Theta0):
//   l0:      i sum_j sigma_j omega_{k_j}^{l_j}
//   lomega:  i Omega sum_j sigma_j [l_j = +]
//   ltheta0: their difference
SparsePoly l0_apply(const SparsePoly& f, const ModeBasis& basis);
SparsePoly lomega_apply(const SparsePoly& f, const ModeBasis& basis);
SparsePoly ltheta0_apply(const SparsePoly& f, const ModeBasis& basis);

double l0_eigenvalue_im(const MonomialKey& key, const ModeBasis& basis);

SparsePoly project_kernel(const SparsePoly& f);  // L_Omega eigenvalue 0
SparsePoly project_range(const SparsePoly& f);

struct HomologicalDiagnostics {
    double min_divisor = 0.0;        // min |L0 eigenvalue| over range keys
    double guard_margin = 0.0;       // min_divisor / (Omega / 2)
    int keys_below_omega_half = 0;   // range keys with divisor < Omega/2
    std::string worst_key;           // textual form of the minimizing key
    int neumann_iterations = 0;      // 0 when the cross-check is skipped
    double neumann_disagreement = 0.0;
};

struct HomologicalSolution {
    SparsePoly z;
    SparsePoly chi;
    HomologicalDiagnostics diag;
};

// Solve L0 chi = Pi_R psi, z = Pi_N psi. Direct per-key division by the L0
// eigenvalue; optional Neumann-series cross-check through the splitting
// L0 = LOmega (I + K), K = LOmega^{-1} LTheta0. Divisors below
// hard_floor * Omega throw; divisors below Omega/2 are reported in the
// diagnostics (the s <= S margin of the construction).
HomologicalSolution solve_homological(const SparsePoly& psi, const ModeBasis& basis,
                                      bool run_neumann_check = true,
                                      double hard_floor = 1e-9,
                                      int max_neumann_iterations = 200);

struct OrderDiagnostics {
    int order = 0;
    double psi_norm = 0.0;
    double z_norm = 0.0;
    double chi_norm = 0.0;
    double residual = 0.0;  // plus_norm(l0 chi + z - psi)
    std::size_t psi_terms = 0;
    HomologicalDiagnostics homological;
};

struct NormalFormResult {
    int order = 0;  // S
    SparsePoly h1, h2;
    std::vector<SparsePoly> chi;  // chi_1 .. chi_S
    std::vector<SparsePoly> z;    // Z_1 .. Z_S
    std::vector<SparsePoly> phi;  // Phi_0 .. Phi_S
    SparsePoly upsilon_s;         // {Phi_S, H1} + {Phi_{S-1}, H2}
    SparsePoly upsilon_s1;        // {Phi_S, H2}
    std::vector<OrderDiagnostics> diagnostics;

    // Phi^(S) evaluated on a state.
    double evaluate_phi_s(const XiEta& z_state, const ModeBasis& basis) const;
};

// Full construction of the truncated invariant through order S_req:
// generating functions, normal-form terms, Phi_s, and the two remainder
// brackets. Requires S_req <= s_order(params).
NormalFormResult lie_construct(const ModeBasis& basis, int S_req,
                               bool run_neumann_check = true);

cplx evaluate(const SparsePoly& f, const PhasePoint& state, const ModeBasis& basis);
// For reality-invariant polynomials: asserts the imaginary residue is below
// tol * scale and returns the real part.
double evaluate_real(const SparsePoly& f, const PhasePoint& state, const ModeBasis& basis,
                     double rel_tol = 1e-10);

// Monte Carlo variance of Re f over an ensemble of states.
EnsembleEstimate mc_variance_of_poly(const SparsePoly& f,
                                     const std::vector<PhasePoint>& ensemble,
                                     const ModeBasis& basis);

std::string key_to_string(const MonomialKey& key);

}  // namespace diatomic

#endif
