#include <doctest.h>

#include <complex>
#include <random>

#include "boseloc/fockspace.hpp"

using namespace boseloc;

TEST_CASE("basis dimension and ordering") {
    CHECK(FockBasis::dimension(4, 2) == 10);
    CHECK(FockBasis::dimension(28, 3) == 4060);
    CHECK(FockBasis::dimension(3, 0) == 1);

    FockBasis b(3, 2);
    REQUIRE(b.size() == 6);
    CHECK(b.state(0) == Occupations{2, 0, 0});
    CHECK(b.state(1) == Occupations{1, 1, 0});
    CHECK(b.state(b.size() - 1) == Occupations{0, 0, 2});
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(b.index(b.state(i)) == i);
    CHECK_THROWS_AS(b.index(Occupations{3, 0, 0}), NumericalError);
}

TEST_CASE("capacity guard") {
    CHECK_THROWS_AS(FockBasis(100, 10, 1000), CapacityError);
}

TEST_CASE("tensor convention for simple Fock states") {
    auto basis = enumerate_basis(3, 2);
    ManyBodyState st{basis, Eigen::VectorXcd::Zero(6), 0.0};
    st.coefficients[basis->index({1, 1, 0})] = 1.0;
    SymmetricTensor t = tensor_from_vector(st);
    // one boson each on sites 0 and 1: value 1/sqrt(2) at both orderings
    CHECK(std::abs(t.at({0, 1}) - std::complex<double>(1.0 / std::sqrt(2.0))) < 1e-14);
    CHECK(std::abs(t.at({1, 0}) - std::complex<double>(1.0 / std::sqrt(2.0))) < 1e-14);
    CHECK(std::abs(t.at({0, 0})) == 0.0);
    CHECK(t.squared_norm() == doctest::Approx(1.0).epsilon(1e-14));

    st.coefficients.setZero();
    st.coefficients[basis->index({2, 0, 0})] = 1.0;
    t = tensor_from_vector(st);
    CHECK(std::abs(t.at({0, 0}) - std::complex<double>(1.0)) < 1e-14);
}

TEST_CASE("tensor roundtrip preserves random states") {
    auto basis = enumerate_basis(4, 3);
    std::mt19937 rng(7);
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 5; ++rep) {
        ManyBodyState st{basis, Eigen::VectorXcd(static_cast<Eigen::Index>(basis->size())), 0.0};
        for (Eigen::Index i = 0; i < st.coefficients.size(); ++i)
            st.coefficients[i] = std::complex<double>(g(rng), g(rng));
        st.normalize();
        SymmetricTensor t = tensor_from_vector(st);
        CHECK(t.squared_norm() == doctest::Approx(1.0).epsilon(1e-12));
        ManyBodyState back = vector_from_tensor(t, basis);
        CHECK((back.coefficients - st.coefficients).norm() < 1e-12);
    }
}

TEST_CASE("vector_from_tensor rejects asymmetric input") {
    auto basis = enumerate_basis(3, 2);
    SymmetricTensor t;
    t.order = 2;
    t.extent = 3;
    t.values.assign(9, {0.0, 0.0});
    t.at({0, 1}) = 1.0;  // missing the (1,0) partner
    CHECK_THROWS_AS(vector_from_tensor(t, basis), NumericalError);
}

TEST_CASE("real_tensor_values strips a global phase") {
    auto basis = enumerate_basis(3, 2);
    ManyBodyState st{basis, Eigen::VectorXcd::Zero(6), 0.0};
    const std::complex<double> phase = std::polar(1.0, 0.83);
    st.coefficients[basis->index({1, 0, 1})] = 0.8 * phase;
    st.coefficients[basis->index({0, 2, 0})] = -0.6 * phase;
    SymmetricTensor t = tensor_from_vector(st);
    const auto vals = real_tensor_values(t);
    double n2 = 0.0;
    for (double v : vals) n2 += v * v;
    CHECK(n2 == doctest::Approx(1.0).epsilon(1e-12));
    // genuinely complex tensor must throw
    st.coefficients[basis->index({0, 2, 0})] = std::complex<double>(0.0, -0.6);
    CHECK_THROWS_AS(real_tensor_values(tensor_from_vector(st)), NumericalError);
}
