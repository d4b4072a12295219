#pragma once

#include <memory>

#include <Eigen/Dense>

#include "boseloc/fockspace.hpp"

namespace boseloc {

enum class Boundary { Open, Periodic };

// Bose-Hubbard superlattice parameters. Energies in units of J; the
// modulated potential is V_j = V cos(2 pi (p/q) (j+1/2) + xi), j = 1..L.
struct ModelParams {
    double J = 1.0;
    double U = 0.0;
    double V = 0.0;
    int p = 1;
    int q = 1;
    double xi = 0.0;
    int L = 1;
    int N = 0;
    Boundary boundary = Boundary::Open;

    double beta() const { return static_cast<double>(p) / q; }
    void validate() const;
    ModelParams with_particles(int n) const {
        ModelParams m = *this;
        m.N = n;
        return m;
    }
};

struct HamiltonianMatrix {
    std::shared_ptr<const FockBasis> basis;
    Eigen::MatrixXd mat;
};

// V cos(2 pi beta (j+1/2) + xi), j is 1-based
double onsite_potential(const ModelParams& params, int j);

HamiltonianMatrix build_hamiltonian(const ModelParams& params,
                                    std::size_t capacity = FockBasis::kDefaultCapacity);

// Single-particle L x L matrix (no interaction term enters for N=1).
Eigen::MatrixXd build_single_particle(const ModelParams& params);

// (N-1)-particle Hamiltonian with the interaction-dressed potential
// V_eff(j) = V_j + 2 U |phi_j|^2. `params.N` is already the reduced particle
// count. The pair-breaking correction U sum_{ij} (phi_i phi_j b+_i b+_j b_j b_j + h.c.)
// is off by default; its effect is negligible for the states of interest.
HamiltonianMatrix build_effective_hamiltonian(const ModelParams& params,
                                              const Eigen::VectorXd& phi,
                                              bool include_pair_breaking = false);

}  // namespace boseloc
