#include "diatomic/chain.hpp"

namespace diatomic {

double potential(double r, const ChainParams& params) {
    const double K = params.stiffness, A = params.cubic, B = params.quartic;
    return 0.5 * K * r * r * (1.0 + A * r + B * r * r);
}

double potential_derivative(double r, const ChainParams& params) {
    const double K = params.stiffness, A = params.cubic, B = params.quartic;
    return K * r * (1.0 + 1.5 * A * r + 2.0 * B * r * r);
}

double kinetic_energy(const PhasePoint& state, const ChainParams& params) {
    const int N = state.n_cells();
    double t = 0.0;
    for (int j = 0; j < N; ++j) {
        const double p1 = state.px(j, 0), p2 = state.px(j, 1);
        t += p1 * p1 / (2.0 * params.m1) + p2 * p2 / (2.0 * params.m2);
    }
    return t;
}

double potential_energy(const DiffCoords& r, const ChainParams& params) {
    double v = 0.0;
    for (double ri : r.r) v += potential(ri, params);
    return v;
}

double hamiltonian(const PhasePoint& state, const ChainParams& params) {
    const int N = state.n_cells();
    double h = kinetic_energy(state, params);
    for (int j = 0; j < N; ++j) {
        h += potential(state.xx(j, 1) - state.xx(j, 0), params);
        h += potential(state.xx(j + 1, 0) - state.xx(j, 1), params);
    }
    return h;
}

DiffCoords diff_coords(const PhasePoint& state) {
    const int N = state.n_cells();
    DiffCoords d(N);
    for (int j = 0; j < N; ++j) {
        d(j, 0) = state.xx(j, 1) - state.xx(j, 0);
        d(j, 1) = state.xx(j, 0) - state.xx(j - 1, 1);
    }
    return d;
}

void forces(const PhasePoint& state, const ChainParams& params, std::vector<double>& f) {
    const int N = state.n_cells();
    f.assign(state.size(), 0.0);
    // Each bond r(j,0) couples (j,0)-(j,1); bond r(j,1) couples (j-1,1)-(j,0).
    for (int j = 0; j < N; ++j) {
        const double g0 = potential_derivative(state.xx(j, 1) - state.xx(j, 0), params);
        const double g1 = potential_derivative(state.xx(j, 0) - state.xx(j - 1, 1), params);
        f[PhasePoint::slot(j, 0, N)] += g0 - g1;
        f[PhasePoint::slot(j, 1, N)] -= g0;
        f[PhasePoint::slot(j - 1, 1, N)] += g1;
    }
}

std::vector<double> forces(const PhasePoint& state, const ChainParams& params) {
    std::vector<double> f;
    forces(state, params, f);
    return f;
}

double total_momentum(const PhasePoint& state) {
    double s = 0.0;
    for (double pi : state.p) s += pi;
    return s;
}

double center_of_mass(const PhasePoint& state, const ChainParams& params) {
    const int N = state.n_cells();
    double mx = 0.0;
    for (int j = 0; j < N; ++j)
        mx += params.m1 * state.xx(j, 0) + params.m2 * state.xx(j, 1);
    return mx / (static_cast<double>(N) * (params.m1 + params.m2));
}

void remove_drift(PhasePoint& state, const ChainParams& params) {
    const int N = state.n_cells();
    const double mtot = static_cast<double>(N) * (params.m1 + params.m2);
    const double v = total_momentum(state) / mtot;
    const double c = center_of_mass(state, params);
    for (int j = 0; j < N; ++j) {
        state.px(j, 0) -= params.m1 * v;
        state.px(j, 1) -= params.m2 * v;
        state.xx(j, 0) -= c;
        state.xx(j, 1) -= c;
    }
}

}  // namespace diatomic
