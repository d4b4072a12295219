#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "boseloc/bloch.hpp"

using namespace boseloc;

namespace {

ModelParams pbc_params(int L, int q, double V) {
    ModelParams p;
    p.J = 1.0;
    p.V = V;
    p.p = 1;
    p.q = q;
    p.xi = -std::numbers::pi / 4.0;
    p.L = L;
    p.N = 1;
    p.boundary = Boundary::Periodic;
    return p;
}

}  // namespace

TEST_CASE("free tight-binding band") {
    ModelParams p = pbc_params(20, 1, 0.0);
    p.xi = 0.0;
    const BandStructure bs = band_structure(p);
    REQUIRE(bs.momenta.size() == 20);
    REQUIRE(bs.bands.rows() == 1);
    for (int m = 0; m < 20; ++m)
        CHECK(bs.bands(0, m) == doctest::Approx(-2.0 * std::cos(bs.momenta[m])).epsilon(1e-12));
}

TEST_CASE("superlattice bands at p/q=1/4, V=10, L=44") {
    const ModelParams p = pbc_params(44, 4, 10.0);
    const BandStructure bs = band_structure(p);
    REQUIRE(bs.bands.rows() == 4);
    REQUIRE(bs.momenta.size() == 11);
    // time reversal: E(k) = E(-k)
    for (int m = 0; m < bs.momentum_count(); ++m) {
        const int mm = bs.minus_index(m);
        for (int b = 0; b < 4; ++b)
            CHECK(std::abs(bs.bands(b, m) - bs.bands(b, mm)) < 1e-10);
    }
    // the two middle bands are very close, top/bottom bands are flatter
    Eigen::Vector4d wmin = bs.bands.rowwise().minCoeff();
    Eigen::Vector4d wmax = bs.bands.rowwise().maxCoeff();
    const double mid_gap = (bs.bands.row(2) - bs.bands.row(1)).cwiseAbs().minCoeff();
    CHECK(mid_gap < 0.5);
    const Eigen::Vector4d widths = wmax - wmin;
    CHECK(widths[0] < widths[1]);
    CHECK(widths[3] < widths[2]);
}

TEST_CASE("bloch states are translation and Hamiltonian eigenstates") {
    const ModelParams p = pbc_params(24, 4, 10.0);
    const BandStructure bs = band_structure(p);
    const Eigen::MatrixXd H1 = build_single_particle(p);
    for (int m = 0; m < bs.momentum_count(); ++m)
        for (int b = 0; b < 4; ++b) {
            const Eigen::VectorXcd v = bs.bloch_states[m].col(b);
            CHECK(std::abs(v.norm() - 1.0) < 1e-10);
            // H eigenstate
            const Eigen::VectorXcd Hv = H1.cast<std::complex<double>>() * v;
            CHECK((Hv - bs.bands(b, m) * v).norm() < 1e-8);
            // translation by q sites multiplies by exp(-i k q)
            Eigen::VectorXcd shifted(24);
            for (int j = 0; j < 24; ++j) shifted[j] = v[(j + 4) % 24];
            const std::complex<double> expect = std::exp(std::complex<double>(0.0, bs.momenta[m] * 4));
            CHECK((shifted - expect * v).norm() < 1e-8);
        }
}

TEST_CASE("projection completeness and trivial cases") {
    const ModelParams p = pbc_params(24, 4, 10.0);
    const BandStructure bs = band_structure(p);
    std::mt19937 rng(31);
    std::normal_distribution<double> g;
    Eigen::VectorXd phi(24);
    for (int j = 0; j < 24; ++j) phi[j] = g(rng);
    phi.normalize();
    const Eigen::MatrixXd w = bloch_projection(phi, bs);
    CHECK(std::abs(w.sum() - 1.0) < 1e-10);

    // a Bloch state projects onto itself only
    const Eigen::VectorXcd v = bs.bloch_states[2].col(1);
    const Eigen::MatrixXd wv = bloch_projection(v, bs);
    CHECK(wv(1, 2) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(wv.sum() - 1.0) < 1e-10);
    // and is a running wave unless k = 0 or the zone edge
    if (std::abs(bs.momenta[2]) > 1e-9 &&
        std::abs(std::abs(bs.momenta[2]) - std::numbers::pi / 4) > 1e-9)
        CHECK(standing_wave_score(wv, bs) == doctest::Approx(0.0).epsilon(1e-10));

    // equal-weight k and -k superposition is a perfect standing wave
    const int mm = bs.minus_index(2);
    Eigen::VectorXcd sw = (bs.bloch_states[2].col(1) + bs.bloch_states[mm].col(1));
    sw.normalize();
    const Eigen::MatrixXd wsw = bloch_projection(sw, bs);
    CHECK(standing_wave_score(wsw, bs) == doctest::Approx(1.0).epsilon(1e-9));

    Eigen::VectorXd wrong(10);
    CHECK_THROWS_AS(bloch_projection(wrong, bs), ConfigError);
    ModelParams bad = p;
    bad.L = 26;  // not commensurate
    CHECK_THROWS_AS(band_structure(bad), ConfigError);
}
