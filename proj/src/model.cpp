#include "boseloc/model.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace boseloc {

void ModelParams::validate() const {
    if (L < 1) throw ConfigError("ModelParams: L must be >= 1");
    if (N < 0) throw ConfigError("ModelParams: N must be >= 0");
    if (p < 1 || q < 1) throw ConfigError("ModelParams: p, q must be positive");
    if (std::gcd(p, q) != 1) throw ConfigError("ModelParams: p and q must be coprime");
}

double onsite_potential(const ModelParams& params, int j) {
    if (j < 1 || j > params.L) throw ConfigError("onsite_potential: site index out of range");
    return params.V * std::cos(2.0 * std::numbers::pi * params.beta() * (j + 0.5) + params.xi);
}

namespace {

void add_hopping(Eigen::MatrixXd& H, const FockBasis& basis, double J, int from, int to) {
    // -J b+_to b_from summed over all basis states (0-based sites)
    Occupations occ;
    for (std::size_t a = 0; a < basis.size(); ++a) {
        const Occupations& n = basis.state(a);
        if (n[from] == 0) continue;
        occ = n;
        --occ[from];
        ++occ[to];
        const std::size_t b = basis.index(occ);
        H(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) +=
            -J * std::sqrt(static_cast<double>(n[from]) * (n[to] + 1));
    }
}

}  // namespace

HamiltonianMatrix build_hamiltonian(const ModelParams& params, std::size_t capacity) {
    params.validate();
    HamiltonianMatrix H;
    H.basis = enumerate_basis(params.L, params.N, capacity);
    const FockBasis& basis = *H.basis;
    const auto dim = static_cast<Eigen::Index>(basis.size());
    H.mat = Eigen::MatrixXd::Zero(dim, dim);

    for (std::size_t a = 0; a < basis.size(); ++a) {
        const Occupations& n = basis.state(a);
        double diag = 0.0;
        for (int j = 0; j < params.L; ++j) {
            diag += onsite_potential(params, j + 1) * n[j] +
                    0.5 * params.U * n[j] * (n[j] - 1);
        }
        H.mat(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) = diag;
    }
    for (int j = 0; j + 1 < params.L; ++j) {
        add_hopping(H.mat, basis, params.J, j, j + 1);
        add_hopping(H.mat, basis, params.J, j + 1, j);
    }
    if (params.boundary == Boundary::Periodic && params.L > 2) {
        add_hopping(H.mat, basis, params.J, params.L - 1, 0);
        add_hopping(H.mat, basis, params.J, 0, params.L - 1);
    }
    return H;
}

Eigen::MatrixXd build_single_particle(const ModelParams& params) {
    params.validate();
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(params.L, params.L);
    for (int j = 0; j < params.L; ++j) H(j, j) = onsite_potential(params, j + 1);
    for (int j = 0; j + 1 < params.L; ++j) {
        H(j, j + 1) = -params.J;
        H(j + 1, j) = -params.J;
    }
    if (params.boundary == Boundary::Periodic && params.L > 2) {
        H(0, params.L - 1) = -params.J;
        H(params.L - 1, 0) = -params.J;
    }
    return H;
}

HamiltonianMatrix build_effective_hamiltonian(const ModelParams& params,
                                              const Eigen::VectorXd& phi,
                                              bool include_pair_breaking) {
    if (phi.size() != params.L)
        throw ConfigError("build_effective_hamiltonian: phi length does not match L");
    HamiltonianMatrix H = build_hamiltonian(params);
    const FockBasis& basis = *H.basis;
    for (std::size_t a = 0; a < basis.size(); ++a) {
        const Occupations& n = basis.state(a);
        double shift = 0.0;
        for (int j = 0; j < params.L; ++j)
            shift += 2.0 * params.U * phi[j] * phi[j] * n[j];
        H.mat(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) += shift;
    }
    if (include_pair_breaking) {
        // U sum_{ij} (phi_i phi_j b+_i b+_j b_j b_j + h.c.)
        Occupations occ;
        for (std::size_t a = 0; a < basis.size(); ++a) {
            const Occupations& n = basis.state(a);
            for (int j = 0; j < params.L; ++j) {
                if (n[j] < 2) continue;
                for (int i = 0; i < params.L; ++i) {
                    const double c = params.U * phi[i] * phi[j];
                    if (i == j) {
                        H.mat(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) +=
                            2.0 * c * n[j] * (n[j] - 1);
                        continue;
                    }
                    occ = n;
                    occ[j] -= 1;
                    occ[i] += 1;
                    const std::size_t b = basis.index(occ);
                    const double amp =
                        c * std::sqrt(static_cast<double>(n[j]) * (n[j] - 1)) *
                        std::sqrt(static_cast<double>(n[j] - 1)) * std::sqrt(n[i] + 1.0);
                    H.mat(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) += amp;
                    H.mat(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += amp;
                }
            }
        }
    }
    return H;
}

}  // namespace boseloc
