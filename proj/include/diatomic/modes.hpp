#ifndef DIATOMIC_MODES_HPP
#define DIATOMIC_MODES_HPP

#include <array>
#include <complex>
#include <vector>

#include "diatomic/chain.hpp"

namespace diatomic {

using cplx = std::complex<double>;

enum class Branch : int { acoustic = 0, optical = 1 };
inline constexpr int kAcoustic = 0;
inline constexpr int kOptical = 1;

// Wavenumber grid floor(-N/2)+1 .. floor(N/2).
inline constexpr int grid_k_max(int N) { return N / 2; }
inline constexpr int grid_k_min(int N) { return N / 2 - (N - 1); }
inline constexpr int grid_index_of_zero(int N) { return -grid_k_min(N); }

// Two-branch mode basis on the wavenumber grid k = floor(-N/2)+1 .. floor(N/2).
//
// Frequencies: omega_{k,±}^2 = K (m1 + m2 ± sqrt(Delta_k)) / (m1 m2),
// Delta_k = m1^2 + m2^2 + 2 m1 m2 cos(2 pi k / N).  Eigenvectors u are
// M-orthonormal, <u_k^l, M u_k^l'> = delta_ll' / N with M = diag(m1, m2).
// w_k^l are the bond-difference vectors entering the r <-> qhat transform.
class ModeBasis {
public:
    ModeBasis(const ChainParams& params);

    const ChainParams& params() const { return params_; }
    int n_cells() const { return params_.n_cells; }
    int k_min() const { return k_min_; }
    int k_max() const { return k_max_; }
    int n_modes() const { return params_.n_cells; }

    // k-value <-> storage index; k arithmetic is mod N onto the grid.
    int wrap_k(int k) const;
    int index_of(int k) const { return wrap_k(k) - k_min_; }
    int k_at(int idx) const { return k_min_ + idx; }

    double omega(int branch, int k) const { return omega_[branch][index_of(k)]; }
    double Omega() const { return Omega_; }
    double delta(int k) const { return delta_[index_of(k)]; }
    double kappa(int k) const;

    const std::array<cplx, 2>& u(int branch, int k) const { return u_[branch][index_of(k)]; }
    const std::array<cplx, 2>& w(int branch, int k) const { return w_[branch][index_of(k)]; }
    // arg of the first w component in the (e^{i a}, -e^{-i a}) gauge; NaN on
    // slots where that form does not hold (w = 0, and the real-gauge optical
    // vector at k = N/2).
    double alpha(int branch, int k) const { return alpha_[branch][index_of(k)]; }

    double max_omega_minus() const;  // sqrt(2K/m1)
    double min_omega_plus() const;   // sqrt(2K/m2)

private:
    ChainParams params_;
    int k_min_, k_max_;
    double Omega_;
    std::vector<double> delta_;
    std::array<std::vector<double>, 2> omega_;
    std::array<std::vector<std::array<cplx, 2>>, 2> u_;
    std::array<std::vector<std::array<cplx, 2>>, 2> w_;
    std::array<std::vector<double>, 2> alpha_;
};

ModeBasis build_basis(const ChainParams& params);

// Complex normal-mode amplitudes qhat, phat and the diagonal pair (xi, eta).
// Reality of the particle state gives qhat(-k) = conj(qhat(k)); the acoustic
// k = 0 slot is excluded from (xi, eta) because omega = 0 there.
struct ModeState {
    int n_cells = 0;
    std::array<std::vector<cplx>, 2> qhat;  // [branch][k index]
    std::array<std::vector<cplx>, 2> phat;

    explicit ModeState(int N)
        : n_cells(N) {
        for (auto a : {0, 1}) {
            qhat[a].assign(static_cast<std::size_t>(N), cplx{0.0, 0.0});
            phat[a].assign(static_cast<std::size_t>(N), cplx{0.0, 0.0});
        }
    }
};

struct XiEta {
    int n_cells = 0;
    std::array<std::vector<cplx>, 2> xi;   // [branch][k index]; (acoustic, k=0) unused
    std::array<std::vector<cplx>, 2> eta;
    cplx qhat0_acoustic{0.0, 0.0};  // carried through, not part of (xi, eta)
    cplx phat0_acoustic{0.0, 0.0};

    explicit XiEta(int N) : n_cells(N) {
        for (auto a : {0, 1}) {
            xi[a].assign(static_cast<std::size_t>(N), cplx{0.0, 0.0});
            eta[a].assign(static_cast<std::size_t>(N), cplx{0.0, 0.0});
        }
    }
};

ModeState x_to_modes(const PhasePoint& state, const ModeBasis& basis);
PhasePoint modes_to_x(const ModeState& modes, const ModeBasis& basis);

// qhat on the omega != 0 slots straight from the difference coordinates,
// via the projection on w (the acoustic k = 0 slot is not produced).
ModeState r_to_modes(const DiffCoords& r, const ModeBasis& basis);

XiEta modes_to_xieta(const ModeState& modes, const ModeBasis& basis);
ModeState xieta_to_modes(const XiEta& z, const ModeBasis& basis);

// sum_{k,l} xi eta over the included slots (complex; real up to rounding
// for states coming from a real PhasePoint).
cplx h0_xieta(const XiEta& z);

// Quadratic (A=B=0) energy of a state, evaluated in particle coordinates.
double quadratic_energy(const PhasePoint& state, const ChainParams& params);

}  // namespace diatomic

#endif
