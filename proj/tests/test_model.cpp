#include <doctest.h>

#include <cmath>
#include <numbers>

#include "boseloc/model.hpp"
#include "boseloc/fockspace.hpp"

using namespace boseloc;

namespace {

ModelParams fig3_params(int N) {
    ModelParams p;
    p.J = 1.0;
    p.U = 20.0;
    p.V = 10.0;
    p.p = 1;
    p.q = 4;
    p.xi = -std::numbers::pi / 4.0;
    p.L = 28;
    p.N = N;
    return p;
}

// first-quantized two-particle Hamiltonian on the L^2 product space
Eigen::MatrixXd brute_force_two_particle(const ModelParams& p) {
    Eigen::MatrixXd H1 = build_single_particle(p.with_particles(1));
    const int L = p.L;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(L * L, L * L);
    for (int a = 0; a < L; ++a)
        for (int b = 0; b < L; ++b) {
            for (int c = 0; c < L; ++c) {
                H(c * L + b, a * L + b) += H1(c, a);  // particle 1
                H(a * L + c, a * L + b) += H1(c, b);  // particle 2
            }
            if (a == b) H(a * L + b, a * L + b) += p.U;
        }
    return H;
}

}  // namespace

TEST_CASE("superlattice potential values") {
    ModelParams p = fig3_params(3);
    // V_j = 10 cos(pi j / 2) at these parameters
    CHECK(onsite_potential(p, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(onsite_potential(p, 2) == doctest::Approx(-10.0).epsilon(1e-12));
    CHECK(onsite_potential(p, 4) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(onsite_potential(p, 6) == doctest::Approx(-10.0).epsilon(1e-12));
    CHECK_THROWS_AS(onsite_potential(p, 0), ConfigError);
    CHECK_THROWS_AS(onsite_potential(p, 29), ConfigError);
}

TEST_CASE("parameter validation") {
    ModelParams p = fig3_params(2);
    p.p = 2;
    p.q = 4;  // not coprime
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = fig3_params(2);
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("Hamiltonian matches brute-force first quantization, N=2") {
    for (int L : {2, 3, 4}) {
        ModelParams p = fig3_params(2);
        p.L = L;
        for (Boundary b : {Boundary::Open, Boundary::Periodic}) {
            p.boundary = b;
            HamiltonianMatrix H = build_hamiltonian(p);
            const Eigen::MatrixXd Hfq = brute_force_two_particle(p);
            // map Fock basis into the product space via the symmetric tensors
            const auto dim = static_cast<Eigen::Index>(H.basis->size());
            Eigen::MatrixXd B(L * L, dim);
            for (Eigen::Index c = 0; c < dim; ++c) {
                ManyBodyState st{H.basis, Eigen::VectorXcd::Zero(dim), 0.0};
                st.coefficients[c] = 1.0;
                const SymmetricTensor t = tensor_from_vector(st);
                for (int i = 0; i < L * L; ++i) B(i, c) = t.values[i].real();
            }
            const Eigen::MatrixXd projected = B.transpose() * Hfq * B;
            CHECK((projected - H.mat).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("single-particle matrix agrees with N=1 Fock Hamiltonian") {
    ModelParams p = fig3_params(1);
    p.L = 6;
    const Eigen::MatrixXd H1 = build_single_particle(p);
    const HamiltonianMatrix Hf = build_hamiltonian(p);
    CHECK((H1 - Hf.mat).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("effective Hamiltonian dresses the diagonal") {
    ModelParams p = fig3_params(1);
    p.L = 8;
    Eigen::VectorXd phi(8);
    phi << 0.1, 0.5, 0.2, 0.3, 0.4, 0.1, 0.6, 0.2;
    phi.normalize();
    const HamiltonianMatrix He = build_effective_hamiltonian(p, phi);
    const Eigen::MatrixXd H1 = build_single_particle(p);
    for (int j = 0; j < 8; ++j)
        CHECK(He.mat(j, j) == doctest::Approx(H1(j, j) + 2.0 * p.U * phi[j] * phi[j]));
    CHECK((He.mat - He.mat.transpose()).cwiseAbs().maxCoeff() < 1e-14);

    // pair-breaking term only acts on doubly occupied sites; symmetric too
    ModelParams p2 = p.with_particles(2);
    const HamiltonianMatrix Hpb = build_effective_hamiltonian(p2, phi, true);
    CHECK((Hpb.mat - Hpb.mat.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    const HamiltonianMatrix Hnb = build_effective_hamiltonian(p2, phi, false);
    CHECK((Hpb.mat - Hnb.mat).cwiseAbs().maxCoeff() > 0.0);
}
