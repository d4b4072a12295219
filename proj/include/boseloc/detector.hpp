#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "boseloc/fockspace.hpp"
#include "boseloc/model.hpp"
#include "boseloc/spectral.hpp"

namespace boseloc {

enum class StateClass { IndependentALL, CorrelatedALL, OneLocalized, NotSelfLocalized };

const char* to_string(StateClass c);

// Screening conditions: (i) sum of the leading three (two) singular values
// > sv_sum_min; (ii) fidelities among the extended single-particle states
// > extended_overlap_min; (iii) IPR of chi > 0.4 (0.8) for the independent
// (correlated) class; plus the reconstruction-fidelity gate |<Psi|Psi~>| >
// fidelity_min, the extended-state IPR cap, and the edge-manifold exclusion.
struct ScreeningThresholds {
    double sv_sum_min = 0.8;
    double extended_overlap_min = 0.9;
    double ipr_chi_min_independent = 0.4;
    double ipr_chi_min_correlated = 0.8;
    double fidelity_min = 0.9;
    double ipr_phi_max = 0.3;          // 0.06 for the level-statistics ensembles
    double near_equal_ratio = 1.5;     // max/min of the three leading singular values
    double one_localized_weight_min = 0.8;
    double one_localized_density_max = 0.4;
    double edge_overlap_max = 0.9;     // overlap with the single-particle edge manifold
    double edge_ipr_min = 0.4;
    double edge_cell_weight_max = 0.6; // chi density allowed in the first/last unit cell
};

struct ClassificationReport {
    StateClass state_class = StateClass::NotSelfLocalized;
    double energy = 0.0;
    std::optional<Eigen::VectorXd> phi;         // extended single-particle state, unit norm
    std::optional<Eigen::MatrixXd> chi;         // (N-1)-particle wavefunction (N=3: L x L)
    std::optional<Eigen::VectorXd> chi_vec;     // N=2: single-particle chi
    Eigen::VectorXd singular_values;            // leading values of the first SVD
    std::vector<double> extended_state_overlaps;
    double ipr_chi = 0.0;
    double ipr_phi = 0.0;
    double fidelity_reconstruction = 0.0;       // |<Psi|Psi_tilde>| from the SVD pieces
    double fidelity_effective = 0.0;            // max fidelity over H_eff eigenstates
    std::string note;
};

// Two-particle decomposition psi_{ij} = phi_i chi_j + phi_j chi_i. The
// symmetric rank-2 factorization is solved in closed form from the signed
// eigenpair, which stays exact when the two singular values are degenerate;
// the higher-IPR factor is chi.
struct TwoParticleDecomposition {
    Eigen::VectorXd phi;
    Eigen::VectorXd chi;
    Eigen::VectorXd singular_values;
    bool ambiguous = false;  // factor IPRs equal within 1e-6
};

TwoParticleDecomposition decompose_two_particle(const SymmetricTensor& psi);

// Symmetrized ansatz product of one extended particle and N-1 localized
// ones, renormalized. chi is a vector for N=2 and an L x L matrix for N=3.
ManyBodyState reconstruct(const Eigen::VectorXd& phi, const Eigen::VectorXd& chi,
                          std::shared_ptr<const FockBasis> basis);
ManyBodyState reconstruct(const Eigen::VectorXd& phi, const Eigen::MatrixXd& chi,
                          std::shared_ptr<const FockBasis> basis);

struct RefineResult {
    Eigen::VectorXd chi_vec;   // N=2
    Eigen::MatrixXd chi_mat;   // N=3
    double fidelity = 0.0;
    double energy = 0.0;       // effective-Hamiltonian eigenvalue of the best chi'
};

// Diagonalize H_eff(phi) for N-1 particles and return the eigenstate chi'
// whose reconstruction has the highest fidelity with psi.
RefineResult refine_chi(const ManyBodyState& psi, const Eigen::VectorXd& phi,
                        const ModelParams& params, bool include_pair_breaking = false);

bool detect_one_localized(const SymmetricTensor& psi, const ScreeningThresholds& thresholds);

// Classifier caches the single-particle edge manifold for one parameter set.
class Classifier {
  public:
    Classifier(const ModelParams& params, const ScreeningThresholds& thresholds);

    ClassificationReport classify(const ManyBodyState& psi) const;

    ClassificationReport decompose_three_independent(const SymmetricTensor& psi) const;
    ClassificationReport decompose_three_correlated(const SymmetricTensor& psi) const;

    // true if v overlaps the open-boundary single-particle edge manifold
    bool is_edge_like(const Eigen::VectorXd& v) const;
    // true if the site density concentrates in the first or last unit cell
    // (catches boundary-bound states that leave no trace in the
    // non-interacting manifold, e.g. pairs stuck at the wall when V = 0)
    bool edge_cell_heavy(const Eigen::VectorXd& density) const;
    int edge_manifold_size() const { return static_cast<int>(edge_states_.cols()); }

    const ModelParams& params() const { return params_; }
    const ScreeningThresholds& thresholds() const { return thresholds_; }

  private:
    ClassificationReport classify_two_particle(const ManyBodyState& psi,
                                               const SymmetricTensor& t) const;
    ClassificationReport classify_three_particle(const ManyBodyState& psi,
                                                 const SymmetricTensor& t) const;
    bool passes_validation(const ManyBodyState& psi, ClassificationReport& rep) const;

    ModelParams params_;
    ScreeningThresholds thresholds_;
    Eigen::MatrixXd edge_states_;  // columns: boundary-localized H^(1) eigenstates
};

struct FractionRow {
    double U = 0.0;
    double V = 0.0;
    double xi = 0.0;
    std::size_t total = 0;
    std::size_t independent = 0;
    std::size_t correlated = 0;
    std::size_t one_localized = 0;
};

struct ScanPoint {
    double U, V, xi;
};

std::vector<FractionRow> fraction_scan(const std::vector<ScanPoint>& grid,
                                       const ModelParams& base,
                                       const ScreeningThresholds& thresholds,
                                       int threads = 1);

}  // namespace boseloc
