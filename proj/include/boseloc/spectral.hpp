#pragma once

#include <Eigen/Dense>

#include "boseloc/errors.hpp"

namespace boseloc {

struct EigenSystem {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // columns, orthonormal
};

struct SvdResult {
    Eigen::VectorXd singular_values;  // descending, non-negative
    Eigen::MatrixXcd left_vectors;    // columns
    Eigen::MatrixXcd right_vectors;   // columns; M = U diag(s) V^H
};

struct SvdResultReal {
    Eigen::VectorXd singular_values;
    Eigen::MatrixXd left_vectors;
    Eigen::MatrixXd right_vectors;  // M = U diag(s) V^T
};

struct EigenSystemC {
    Eigen::VectorXd eigenvalues;    // ascending, real
    Eigen::MatrixXcd eigenvectors;  // columns, orthonormal
};

// Dense symmetric/Hermitian eigendecomposition (LAPACK dsyevd/zheevd). Throws
// NumericalError on a non-Hermitian input or failed convergence.
EigenSystem eigh(const Eigen::MatrixXd& H, double symmetry_tol = 1e-10);
EigenSystemC eigh(const Eigen::MatrixXcd& H, double symmetry_tol = 1e-10);

SvdResult svd(const Eigen::MatrixXcd& M);
SvdResultReal svd(const Eigen::MatrixXd& M);

}  // namespace boseloc
