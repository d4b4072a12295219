#pragma once

#include <vector>

#include <Eigen/Dense>

#include "boseloc/fockspace.hpp"

namespace boseloc {

// Normal-ordered correlation functions: c1_i = <n_i>,
// c2_{ij} = <b+_i b+_j b_j b_i>, c3_{ijk} = <b+_i b+_j b+_k b_k b_j b_i>.
struct CorrelationSet {
    Eigen::VectorXd c1;
    Eigen::MatrixXd c2;            // empty unless max_order >= 2
    std::vector<double> c3;        // row-major L^3, empty unless max_order == 3
    int L = 0;

    double c3_at(int i, int j, int k) const {
        return c3[(static_cast<std::size_t>(i) * L + j) * L + k];
    }
};

CorrelationSet correlations(const ManyBodyState& state, int max_order);

// sum |v_i|^4 / (sum |v_i|^2)^2
double ipr_vector(const Eigen::VectorXcd& v);
double ipr_vector(const Eigen::VectorXd& v);

// Same formula on all L^2 entries of a two-particle tensor.
double ipr_two_particle(const Eigen::MatrixXcd& chi);
double ipr_two_particle(const Eigen::MatrixXd& chi);

}  // namespace boseloc
