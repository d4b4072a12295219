#include "boseloc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <lapacke.h>

namespace boseloc {

EigenSystem eigh(const Eigen::MatrixXd& H, double symmetry_tol) {
    if (H.rows() != H.cols()) throw NumericalError("eigh: matrix not square");
    const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
    if ((H - H.transpose()).cwiseAbs().maxCoeff() > symmetry_tol * scale)
        throw NumericalError("eigh: matrix not symmetric within tolerance");

    EigenSystem es;
    es.eigenvectors = 0.5 * (H + H.transpose());
    es.eigenvalues.resize(H.rows());
    const lapack_int n = static_cast<lapack_int>(H.rows());
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                           es.eigenvectors.data(), n, es.eigenvalues.data());
    if (info != 0) throw NumericalError("eigh: dsyevd failed, info=" + std::to_string(info));
    return es;
}

EigenSystemC eigh(const Eigen::MatrixXcd& H, double symmetry_tol) {
    if (H.rows() != H.cols()) throw NumericalError("eigh: matrix not square");
    const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
    if ((H - H.adjoint()).cwiseAbs().maxCoeff() > symmetry_tol * scale)
        throw NumericalError("eigh: matrix not Hermitian within tolerance");

    EigenSystemC es;
    es.eigenvectors = 0.5 * (H + H.adjoint());
    es.eigenvalues.resize(H.rows());
    const lapack_int n = static_cast<lapack_int>(H.rows());
    const lapack_int info = LAPACKE_zheevd(
        LAPACK_COL_MAJOR, 'V', 'L', n,
        reinterpret_cast<lapack_complex_double*>(es.eigenvectors.data()), n,
        es.eigenvalues.data());
    if (info != 0) throw NumericalError("eigh: zheevd failed, info=" + std::to_string(info));
    return es;
}

SvdResultReal svd(const Eigen::MatrixXd& M) {
    if (!M.allFinite()) throw NumericalError("svd: non-finite entries");
    const lapack_int m = static_cast<lapack_int>(M.rows());
    const lapack_int n = static_cast<lapack_int>(M.cols());
    const lapack_int k = std::min(m, n);
    Eigen::MatrixXd A = M;
    SvdResultReal r;
    r.singular_values.resize(k);
    r.left_vectors.resize(m, k);
    Eigen::MatrixXd VT(k, n);
    const lapack_int info =
        LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'S', m, n, A.data(), m, r.singular_values.data(),
                       r.left_vectors.data(), m, VT.data(), k);
    if (info != 0) throw NumericalError("svd: dgesdd failed, info=" + std::to_string(info));
    r.right_vectors = VT.transpose();
    return r;
}

SvdResult svd(const Eigen::MatrixXcd& M) {
    if (!M.allFinite()) throw NumericalError("svd: non-finite entries");
    const lapack_int m = static_cast<lapack_int>(M.rows());
    const lapack_int n = static_cast<lapack_int>(M.cols());
    const lapack_int k = std::min(m, n);
    Eigen::MatrixXcd A = M;
    SvdResult r;
    r.singular_values.resize(k);
    r.left_vectors.resize(m, k);
    Eigen::MatrixXcd VH(k, n);
    const lapack_int info = LAPACKE_zgesdd(
        LAPACK_COL_MAJOR, 'S', m, n, reinterpret_cast<lapack_complex_double*>(A.data()), m,
        r.singular_values.data(), reinterpret_cast<lapack_complex_double*>(r.left_vectors.data()),
        m, reinterpret_cast<lapack_complex_double*>(VH.data()), k);
    if (info != 0) throw NumericalError("svd: zgesdd failed, info=" + std::to_string(info));
    r.right_vectors = VH.adjoint();
    return r;
}

}  // namespace boseloc
