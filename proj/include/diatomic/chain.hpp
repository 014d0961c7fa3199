#ifndef DIATOMIC_CHAIN_HPP
#define DIATOMIC_CHAIN_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace diatomic {

// Physical constants of the alternating-mass chain. N cells, two particles
// per cell (species 1 heavy, species 2 light), nearest-neighbour potential
//   V(r) = (K/2) r^2 (1 + A r + B r^2).
struct ChainParams {
    int n_cells = 2;      // N
    double m1 = 2.0;      // heavy mass
    double m2 = 1.0;      // light mass
    double stiffness = 1.0;  // K
    double cubic = 0.0;      // A
    double quartic = 0.0;    // B

    ChainParams() = default;
    ChainParams(int N, double m1_, double m2_, double K_, double A_, double B_)
        : n_cells(N), m1(m1_), m2(m2_), stiffness(K_), cubic(A_), quartic(B_) {
        validate();
    }

    void validate() const {
        if (n_cells < 2) throw std::invalid_argument("ChainParams: N must be >= 2");
        if (!(m1 > m2) || !(m2 > 0.0))
            throw std::invalid_argument("ChainParams: need m1 > m2 > 0");
        if (!(stiffness > 0.0)) throw std::invalid_argument("ChainParams: need K > 0");
    }

    double mass_ratio() const { return m1 / m2; }
    int s_order() const { return static_cast<int>(std::floor(std::sqrt(mass_ratio()) / 2.0)); }
    double mass(int species) const { return species == 0 ? m1 : m2; }
    std::size_t n_particles() const { return 2 * static_cast<std::size_t>(n_cells); }
};

// Canonical state of the 2N particles. Flat stride-2 layout: slot(j, i) with
// cell j = 0..N-1 and species i = 0 (heavy) or 1 (light).
struct PhasePoint {
    std::vector<double> p;
    std::vector<double> x;

    PhasePoint() = default;
    explicit PhasePoint(int n_cells)
        : p(2 * static_cast<std::size_t>(n_cells), 0.0),
          x(2 * static_cast<std::size_t>(n_cells), 0.0) {}

    std::size_t size() const { return p.size(); }
    int n_cells() const { return static_cast<int>(p.size() / 2); }

    static std::size_t slot(int j, int i, int n_cells) {
        int jm = j % n_cells;
        if (jm < 0) jm += n_cells;
        return 2 * static_cast<std::size_t>(jm) + static_cast<std::size_t>(i);
    }
    double& px(int j, int i) { return p[slot(j, i, n_cells())]; }
    double& xx(int j, int i) { return x[slot(j, i, n_cells())]; }
    double px(int j, int i) const { return p[slot(j, i, n_cells())]; }
    double xx(int j, int i) const { return x[slot(j, i, n_cells())]; }
};

// Relative displacements r(j,0) = x(j,1) - x(j,0), r(j,1) = x(j,0) - x(j-1,1).
// Telescoping around the ring gives sum_j (r(j,0) + r(j,1)) = 0.
struct DiffCoords {
    int n_cells = 0;
    std::vector<double> r;  // stride-2: r[2j] = r(j,0), r[2j+1] = r(j,1)

    DiffCoords() = default;
    explicit DiffCoords(int N) : n_cells(N), r(2 * static_cast<std::size_t>(N), 0.0) {}
    double& operator()(int j, int m) { return r[2 * static_cast<std::size_t>(j) + m]; }
    double operator()(int j, int m) const { return r[2 * static_cast<std::size_t>(j) + m]; }
};

// Bond potential and its derivative.
double potential(double r, const ChainParams& params);
double potential_derivative(double r, const ChainParams& params);

double kinetic_energy(const PhasePoint& state, const ChainParams& params);
double potential_energy(const DiffCoords& r, const ChainParams& params);
double hamiltonian(const PhasePoint& state, const ChainParams& params);

DiffCoords diff_coords(const PhasePoint& state);

// -dH/dx for all 2N particles, same layout as PhasePoint::x.
void forces(const PhasePoint& state, const ChainParams& params, std::vector<double>& f);
std::vector<double> forces(const PhasePoint& state, const ChainParams& params);

double total_momentum(const PhasePoint& state);
double center_of_mass(const PhasePoint& state, const ChainParams& params);

// Shift to zero total momentum (mass-weighted) and zero center of mass.
void remove_drift(PhasePoint& state, const ChainParams& params);

}  // namespace diatomic

#endif
