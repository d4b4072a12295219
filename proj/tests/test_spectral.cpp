#include <doctest.h>

#include <random>

#include "boseloc/spectral.hpp"

using namespace boseloc;

TEST_CASE("real symmetric eigendecomposition") {
    std::mt19937 rng(11);
    std::normal_distribution<double> g;
    Eigen::MatrixXd A(6, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) A(i, j) = g(rng);
    A = (A + A.transpose()).eval();

    const EigenSystem es = eigh(A);
    for (int i = 1; i < 6; ++i) CHECK(es.eigenvalues[i] >= es.eigenvalues[i - 1]);
    const Eigen::MatrixXd R =
        es.eigenvectors * es.eigenvalues.asDiagonal() * es.eigenvectors.transpose();
    CHECK((R - A).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((es.eigenvectors.transpose() * es.eigenvectors -
           Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);

    Eigen::MatrixXd bad = A;
    bad(0, 1) += 1.0;
    CHECK_THROWS_AS(eigh(bad), NumericalError);
}

TEST_CASE("complex Hermitian eigendecomposition") {
    std::mt19937 rng(12);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd A(5, 5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) A(i, j) = std::complex<double>(g(rng), g(rng));
    A = (A + A.adjoint()).eval();

    const EigenSystemC es = eigh(A);
    const Eigen::MatrixXcd R = es.eigenvectors *
                               es.eigenvalues.cast<std::complex<double>>().asDiagonal() *
                               es.eigenvectors.adjoint();
    CHECK((R - A).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("real SVD") {
    std::mt19937 rng(13);
    std::normal_distribution<double> g;
    Eigen::MatrixXd M(5, 8);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 8; ++j) M(i, j) = g(rng);

    const SvdResultReal r = svd(M);
    REQUIRE(r.singular_values.size() == 5);
    for (int i = 1; i < 5; ++i) CHECK(r.singular_values[i] <= r.singular_values[i - 1]);
    const Eigen::MatrixXd R =
        r.left_vectors * r.singular_values.asDiagonal() * r.right_vectors.transpose();
    CHECK((R - M).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("complex SVD") {
    std::mt19937 rng(14);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd M(4, 6);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 6; ++j) M(i, j) = std::complex<double>(g(rng), g(rng));

    const SvdResult r = svd(M);
    const Eigen::MatrixXcd R = r.left_vectors *
                               r.singular_values.cast<std::complex<double>>().asDiagonal() *
                               r.right_vectors.adjoint();
    CHECK((R - M).cwiseAbs().maxCoeff() < 1e-12);
}
