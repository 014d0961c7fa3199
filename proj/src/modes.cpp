#include "diatomic/modes.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace diatomic {

namespace {
constexpr double kPi = 3.14159265358979323846;
const cplx kI{0.0, 1.0};
}  // namespace

ModeBasis::ModeBasis(const ChainParams& params) : params_(params) {
    params_.validate();
    const int N = params_.n_cells;
    const double m1 = params_.m1, m2 = params_.m2, K = params_.stiffness;
    k_min_ = grid_k_min(N);
    k_max_ = grid_k_max(N);

    delta_.resize(N);
    for (int b : {0, 1}) {
        omega_[b].resize(N);
        u_[b].resize(N);
        w_[b].resize(N);
        alpha_[b].assign(N, std::numeric_limits<double>::quiet_NaN());
    }

    Omega_ = std::sqrt(2.0 * K * (m1 + m2) / (m1 * m2));

    for (int idx = 0; idx < N; ++idx) {
        const int k = k_min_ + idx;
        const double kap = 2.0 * kPi * k / N;
        const double c2 = std::cos(kap / 2.0), s2 = std::sin(kap / 2.0);
        const double delta = m1 * m1 + m2 * m2 + 2.0 * m1 * m2 * std::cos(kap);
        const double sq = std::sqrt(delta);
        delta_[idx] = delta;

        // Cancellation-free forms:
        //   m1 + m2 - sqrt(D) = 4 m1 m2 sin^2(kap/2) / (m1 + m2 + sqrt(D))
        //   sqrt(D) - (m1 - m2) = 4 m1 m2 cos^2(kap/2) / (sqrt(D) + m1 - m2)
        const double wm2 = 4.0 * K * s2 * s2 / (m1 + m2 + sq);
        const double wp2 = K * (m1 + m2 + sq) / (m1 * m2);
        omega_[kAcoustic][idx] = std::sqrt(wm2);
        omega_[kOptical][idx] = std::sqrt(wp2);

        const bool special = (N % 2 == 0) && (k == N / 2);
        if (special) {
            u_[kOptical][idx] = {cplx{0.0, 0.0}, cplx{1.0 / std::sqrt(N * m2), 0.0}};
            u_[kAcoustic][idx] = {cplx{1.0 / std::sqrt(N * m1), 0.0}, cplx{0.0, 0.0}};
        } else {
            const cplx half_phase = std::polar(1.0, kap / 2.0);
            // optical: second component uses m2 - m1 - sqrt(D) (no cancellation)
            {
                const double denom = sq + (m1 - m2);
                const double c = std::sqrt(2.0 * m2 / (N * sq * denom));
                u_[kOptical][idx] = {cplx{c * c2, 0.0},
                                     c * ((m2 - m1 - sq) / (2.0 * m2)) * half_phase};
            }
            // acoustic: sqrt(D) + (m2 - m1) = 4 m1 m2 cos^2(kap/2) / (sq + m1 - m2)
            {
                const double sm = 4.0 * m1 * m2 * c2 * c2 / (sq + (m1 - m2));
                const double c = std::sqrt(2.0 * m2 / (N * sq * sm));
                u_[kAcoustic][idx] = {cplx{c * c2, 0.0}, c * (sm / (2.0 * m2)) * half_phase};
            }
        }

        // w_k^l = (u2 - u1, u1 - u2 e^{-i kap}) from the bond differences.
        const cplx em = std::polar(1.0, -kap);
        for (int b : {0, 1}) {
            const auto& uu = u_[b][idx];
            w_[b][idx] = {uu[1] - uu[0], uu[0] - uu[1] * em};
            // alpha from |w1| = omega / sqrt(2NK) when the canonical gauge holds
            const double scale = omega_[b][idx] / std::sqrt(2.0 * N * K);
            if (scale > 1e-300) {
                const cplx e1 = w_[b][idx][0] / scale;
                const cplx e2 = -w_[b][idx][1] / scale;
                // gauge form requires e2 == conj(e1) and |e1| == 1
                if (std::abs(std::abs(e1) - 1.0) < 1e-9 &&
                    std::abs(e2 - std::conj(e1)) < 1e-9)
                    alpha_[b][idx] = std::arg(e1);
            }
        }
    }
}

int ModeBasis::wrap_k(int k) const {
    const int N = params_.n_cells;
    int r = k % N;
    if (r < k_min_) r += N;
    if (r > k_max_) r -= N;
    return r;
}

double ModeBasis::kappa(int k) const { return 2.0 * kPi * wrap_k(k) / params_.n_cells; }

double ModeBasis::max_omega_minus() const {
    return std::sqrt(2.0 * params_.stiffness / params_.m1);
}
double ModeBasis::min_omega_plus() const {
    return std::sqrt(2.0 * params_.stiffness / params_.m2);
}

ModeBasis build_basis(const ChainParams& params) { return ModeBasis(params); }

ModeState x_to_modes(const PhasePoint& state, const ModeBasis& basis) {
    const int N = basis.n_cells();
    const double m1 = basis.params().m1, m2 = basis.params().m2;
    ModeState out(N);
    for (int idx = 0; idx < N; ++idx) {
        const int k = basis.k_at(idx);
        const double kap = basis.kappa(k);
        for (int b : {0, 1}) {
            const auto& u = basis.u(b, k);
            cplx q{0.0, 0.0}, p{0.0, 0.0};
            for (int j = 0; j < N; ++j) {
                const cplx em = std::polar(1.0, -kap * j);
                // qhat_k = sum_j <u_k, M x_j> e^{-i kap j}
                q += (m1 * state.xx(j, 0) * std::conj(u[0]) +
                      m2 * state.xx(j, 1) * std::conj(u[1])) * em;
                // canonicity fixes phat_k = sum_j (p_j . u_k) e^{+i kap j}
                p += (state.px(j, 0) * u[0] + state.px(j, 1) * u[1]) * std::conj(em);
            }
            out.qhat[b][idx] = q;
            out.phat[b][idx] = p;
        }
    }
    return out;
}

PhasePoint modes_to_x(const ModeState& modes, const ModeBasis& basis) {
    const int N = basis.n_cells();
    const double m1 = basis.params().m1, m2 = basis.params().m2;

    // reality check: qhat(-k) == conj(qhat(k))
    double scale = 1e-300, viol = 0.0;
    for (int b : {0, 1})
        for (int idx = 0; idx < N; ++idx) {
            const int k = basis.k_at(idx);
            const cplx q = modes.qhat[b][idx], qm = modes.qhat[b][basis.index_of(-k)];
            const cplx p = modes.phat[b][idx], pm = modes.phat[b][basis.index_of(-k)];
            scale = std::max({scale, std::abs(q), std::abs(p)});
            viol = std::max({viol, std::abs(qm - std::conj(q)), std::abs(pm - std::conj(p))});
        }
    if (viol > 1e-9 * std::max(1.0, scale))
        throw std::invalid_argument("modes_to_x: reality condition violated");

    PhasePoint out(N);
    for (int j = 0; j < N; ++j) {
        cplx x1{0.0, 0.0}, x2{0.0, 0.0}, p1{0.0, 0.0}, p2{0.0, 0.0};
        for (int idx = 0; idx < N; ++idx) {
            const int k = basis.k_at(idx);
            const double kap = basis.kappa(k);
            const cplx e = std::polar(1.0, kap * j);
            for (int b : {0, 1}) {
                const auto& u = basis.u(b, k);
                x1 += u[0] * modes.qhat[b][idx] * e;
                x2 += u[1] * modes.qhat[b][idx] * e;
                p1 += m1 * std::conj(u[0]) * modes.phat[b][idx] * std::conj(e);
                p2 += m2 * std::conj(u[1]) * modes.phat[b][idx] * std::conj(e);
            }
        }
        out.xx(j, 0) = x1.real();
        out.xx(j, 1) = x2.real();
        out.px(j, 0) = p1.real();
        out.px(j, 1) = p2.real();
    }
    return out;
}

ModeState r_to_modes(const DiffCoords& r, const ModeBasis& basis) {
    const int N = basis.n_cells();
    const double K = basis.params().stiffness;
    ModeState out(N);
    for (int idx = 0; idx < N; ++idx) {
        const int k = basis.k_at(idx);
        const double kap = basis.kappa(k);
        for (int b : {0, 1}) {
            const double om = basis.omega(b, k);
            if (om < 1e-300) continue;  // acoustic k = 0: no qhat produced
            const auto& w = basis.w(b, k);
            cplx acc{0.0, 0.0};
            for (int j = 0; j < N; ++j) {
                const cplx em = std::polar(1.0, -kap * j);
                acc += (std::conj(w[0]) * r(j, 0) + std::conj(w[1]) * r(j, 1)) * em;
            }
            // <w, w> = omega^2 / (N K)  =>  qhat = K acc / omega^2
            out.qhat[b][idx] = K * acc / (om * om);
        }
    }
    return out;
}

XiEta modes_to_xieta(const ModeState& modes, const ModeBasis& basis) {
    const int N = basis.n_cells();
    const double rt2 = std::sqrt(2.0);
    XiEta z(N);
    for (int idx = 0; idx < N; ++idx) {
        const int k = basis.k_at(idx);
        const int idxm = basis.index_of(-k);
        for (int b : {0, 1}) {
            if (b == kAcoustic && k == 0) continue;
            const double om = basis.omega(b, k);
            z.xi[b][idx] = (modes.phat[b][idx] + kI * om * modes.qhat[b][idxm]) / rt2;
            z.eta[b][idx] = (modes.phat[b][idxm] - kI * om * modes.qhat[b][idx]) / rt2;
        }
    }
    z.qhat0_acoustic = modes.qhat[kAcoustic][basis.index_of(0)];
    z.phat0_acoustic = modes.phat[kAcoustic][basis.index_of(0)];
    return z;
}

ModeState xieta_to_modes(const XiEta& z, const ModeBasis& basis) {
    const int N = basis.n_cells();
    const double rt2 = std::sqrt(2.0);
    ModeState out(N);
    for (int idx = 0; idx < N; ++idx) {
        const int k = basis.k_at(idx);
        const int idxm = basis.index_of(-k);
        for (int b : {0, 1}) {
            if (b == kAcoustic && k == 0) continue;
            const double om = basis.omega(b, k);
            out.qhat[b][idx] = (z.xi[b][idxm] - z.eta[b][idx]) / (kI * rt2 * om);
            out.phat[b][idx] = (z.xi[b][idx] + z.eta[b][idxm]) / rt2;
        }
    }
    out.qhat[kAcoustic][basis.index_of(0)] = z.qhat0_acoustic;
    out.phat[kAcoustic][basis.index_of(0)] = z.phat0_acoustic;
    return out;
}

cplx h0_xieta(const XiEta& z) {
    cplx h{0.0, 0.0};
    const int N = z.n_cells;
    const int idx0 = grid_index_of_zero(N);
    for (int b : {0, 1})
        for (int idx = 0; idx < N; ++idx) {
            if (b == kAcoustic && idx == idx0) continue;
            h += z.xi[b][idx] * z.eta[b][idx];
        }
    return h;
}

double quadratic_energy(const PhasePoint& state, const ChainParams& params) {
    ChainParams harm = params;
    harm.cubic = 0.0;
    harm.quartic = 0.0;
    return hamiltonian(state, harm);
}

}  // namespace diatomic
