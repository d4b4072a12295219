#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "boseloc/errors.hpp"

namespace boseloc {

using Occupations = std::vector<int>;  // n_j per site, length L, sum N

// Occupation-number basis of N bosons on L sites, ordered lexicographically
// descending on the occupation vector: (N,0,...,0) first, (0,...,0,N) last.
class FockBasis {
  public:
    static constexpr std::size_t kDefaultCapacity = std::size_t(1) << 24;

    FockBasis(int L, int N, std::size_t capacity = kDefaultCapacity);

    int sites() const { return L_; }
    int particles() const { return N_; }
    std::size_t size() const { return states_.size(); }
    const Occupations& state(std::size_t i) const { return states_[i]; }
    const std::vector<Occupations>& states() const { return states_; }
    std::size_t index(const Occupations& occ) const;

    static std::size_t dimension(int L, int N);

  private:
    int L_;
    int N_;
    std::vector<Occupations> states_;
    struct OccHash {
        std::size_t operator()(const Occupations& v) const noexcept {
            std::size_t h = 1469598103934665603ull;
            for (int x : v) {
                h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
                h *= 1099511628211ull;
            }
            return h;
        }
    };
    std::unordered_map<Occupations, std::size_t, OccHash> index_;
};

// Coefficient vector over a FockBasis. Eigenstates carry their eigenvalue.
struct ManyBodyState {
    std::shared_ptr<const FockBasis> basis;
    Eigen::VectorXcd coefficients;
    double energy = 0.0;

    double norm() const { return coefficients.norm(); }
    void normalize();
};

// Dense first-quantized tensor psi_{i1..iN}, fully symmetric, extent L per index.
struct SymmetricTensor {
    int order = 0;   // N
    int extent = 0;  // L
    std::vector<std::complex<double>> values;  // size L^order, row-major

    std::size_t flat(const std::vector<int>& idx) const;  // idx 0-based
    std::complex<double>& at(const std::vector<int>& idx) { return values[flat(idx)]; }
    const std::complex<double>& at(const std::vector<int>& idx) const { return values[flat(idx)]; }
    double squared_norm() const;
};

std::shared_ptr<const FockBasis> enumerate_basis(int L, int N,
                                                 std::size_t capacity = FockBasis::kDefaultCapacity);

// c_n -> psi_{i1..iN}: every permutation of the sorted site tuple of n carries
// c_n * sqrt(prod_j n_j! / N!).
SymmetricTensor tensor_from_vector(const ManyBodyState& state);

// Inverse of tensor_from_vector; throws NumericalError if the input violates
// permutation symmetry beyond `symmetry_tol`.
ManyBodyState vector_from_tensor(const SymmetricTensor& t,
                                 std::shared_ptr<const FockBasis> basis,
                                 double symmetry_tol = 1e-8, bool renormalize = false);

// Strip the global phase so the largest-magnitude entry is real positive;
// throws NumericalError if the residual imaginary part exceeds `tol`.
std::vector<double> real_tensor_values(const SymmetricTensor& t, double tol = 1e-6);

}  // namespace boseloc
