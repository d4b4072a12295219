#pragma once

#include <vector>

#include <Eigen/Dense>

#include "boseloc/detector.hpp"
#include "boseloc/model.hpp"

namespace boseloc {

// Level-spacing-ratio statistics: r_m = min(d_m, d_{m+1}) / max(...).
struct SpacingStatistics {
    std::vector<double> r_values;
    Eigen::VectorXd bin_edges;   // nbins + 1
    Eigen::VectorXd densities;   // normalized so the histogram integrates to 1
    double mean_r = 0.0;
    int excluded_count = 0;      // r-values dropped by gap-edge exclusion
};

// levels must be strictly ascending with >= 3 entries. With exclusion on, the
// r-values straddling the gap_count largest spacings are dropped (the band
// gaps otherwise pile up at r -> 0).
SpacingStatistics r_ratios(const std::vector<double>& levels, bool exclude_gap_edges,
                           int gap_count = 2);

// Folded-ratio Poisson density 2/(1+r)^2 on [0,1]; mean 2 ln 2 - 1.
double poisson_reference(double r);

// xi-window ensembles of effective single-particle Hamiltonians around the
// fraction peaks xi_n = pi/4 + n pi/2 (two-particle model, one sample per
// accepted self-localized eigenstate).
struct EnsembleConfig {
    ModelParams params;              // defaults: L=64, N=2, V=10J, p/q=1/4
    ScreeningThresholds thresholds;  // ipr_phi_max tightened to 0.06
    std::vector<double> xi_centers;
    double window_halfwidth = 0.002 * 3.14159265358979323846;
    double sample_step = 5e-5 * 2.0 * 3.14159265358979323846;
    bool window_in_xi_over_2pi = false;  // alternative caption reading
    std::size_t max_samples = 0;         // 0 = no cap
    std::size_t max_xi_points = 0;       // 0 = full window sweep

    void validate() const;
    static EnsembleConfig defaults(double U);
};

std::vector<Eigen::MatrixXd> build_ensemble(const EnsembleConfig& config, int threads = 1);

SpacingStatistics aggregate(const std::vector<Eigen::MatrixXd>& hamiltonians,
                            bool exclude_gap_edges = true, int gap_count = 2, int bins = 20);

// Histogram + mean for a raw pool of r-values (also used by aggregate).
SpacingStatistics summarize_r(std::vector<double> r_values, int excluded, int bins = 20);

}  // namespace boseloc
