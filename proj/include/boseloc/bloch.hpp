#pragma once

#include <vector>

#include <Eigen/Dense>

#include "boseloc/model.hpp"

namespace boseloc {

// Single-particle bands of the period-q superlattice under periodic
// boundaries. k is in radians per site, k_m = 2 pi m / L with k q in
// (-pi, pi]; M = L/q momenta, q bands.
struct BandStructure {
    std::vector<double> momenta;                // M values, ascending
    Eigen::MatrixXd bands;                      // q x M energies, bands ascending per k
    std::vector<Eigen::MatrixXcd> bloch_states; // per k: L x q columns (band index)
    int L = 0;
    int q = 0;

    int momentum_count() const { return static_cast<int>(momenta.size()); }
    // index of -k within momenta (BZ edge and k=0 map to themselves)
    int minus_index(int m) const;
};

BandStructure band_structure(const ModelParams& params);

// weights(band, k) = |<psi~(band,k)|phi>|^2; all entries sum to 1 for unit phi.
Eigen::MatrixXd bloch_projection(const Eigen::VectorXd& phi, const BandStructure& bands);
Eigen::MatrixXd bloch_projection(const Eigen::VectorXcd& phi, const BandStructure& bands);

// 1 - sum_k |w(k)-w(-k)| / sum_k (w(k)+w(-k)); 1 for a perfect standing wave.
double standing_wave_score(const Eigen::MatrixXd& weights, const BandStructure& bands);

// fraction of total weight carried by the two middle bands (q even)
double middle_band_weight(const Eigen::MatrixXd& weights);

}  // namespace boseloc
