#include "boseloc/fockspace.hpp"

#include <algorithm>
#include <cmath>

namespace boseloc {

std::size_t FockBasis::dimension(int L, int N) {
    // binomial(L+N-1, N), with overflow guard good enough for this scale
    long double d = 1.0L;
    for (int k = 1; k <= N; ++k) d = d * (L - 1 + k) / k;
    return static_cast<std::size_t>(std::llroundl(d));
}

FockBasis::FockBasis(int L, int N, std::size_t capacity) : L_(L), N_(N) {
    if (L < 1 || N < 0) throw ConfigError("FockBasis: need L >= 1, N >= 0");
    const std::size_t dim = dimension(L, N);
    if (dim > capacity) {
        throw CapacityError("FockBasis: dimension " + std::to_string(dim) +
                            " exceeds capacity " + std::to_string(capacity));
    }
    states_.reserve(dim);
    Occupations occ(L, 0);
    // descending lexicographic enumeration
    auto recurse = [&](auto&& self, int site, int remaining) -> void {
        if (site == L - 1) {
            occ[site] = remaining;
            states_.push_back(occ);
            return;
        }
        for (int n = remaining; n >= 0; --n) {
            occ[site] = n;
            self(self, site + 1, remaining - n);
        }
        occ[site] = 0;
    };
    recurse(recurse, 0, N);
    index_.reserve(states_.size());
    for (std::size_t i = 0; i < states_.size(); ++i) index_[states_[i]] = i;
}

std::size_t FockBasis::index(const Occupations& occ) const {
    auto it = index_.find(occ);
    if (it == index_.end()) throw NumericalError("FockBasis::index: state not in basis");
    return it->second;
}

void ManyBodyState::normalize() {
    const double n = coefficients.norm();
    if (n == 0.0) throw NumericalError("ManyBodyState::normalize: zero vector");
    coefficients /= n;
}

std::size_t SymmetricTensor::flat(const std::vector<int>& idx) const {
    std::size_t f = 0;
    for (int i : idx) f = f * extent + static_cast<std::size_t>(i);
    return f;
}

double SymmetricTensor::squared_norm() const {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    return s;
}

std::shared_ptr<const FockBasis> enumerate_basis(int L, int N, std::size_t capacity) {
    return std::make_shared<FockBasis>(L, N, capacity);
}

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

// occupation -> sorted 0-based site tuple (site repeated n_j times)
std::vector<int> sorted_tuple(const Occupations& occ) {
    std::vector<int> t;
    for (int j = 0; j < static_cast<int>(occ.size()); ++j)
        for (int c = 0; c < occ[j]; ++c) t.push_back(j);
    return t;
}

void occupation_of(const std::vector<int>& idx, int L, Occupations& occ) {
    occ.assign(L, 0);
    for (int i : idx) ++occ[i];
}

// iterate over all ordered index tuples in [0,L)^N
template <typename F>
void for_all_tuples(int L, int N, F&& f) {
    std::vector<int> idx(N, 0);
    while (true) {
        f(idx);
        int p = N - 1;
        while (p >= 0 && ++idx[p] == L) idx[p--] = 0;
        if (p < 0) break;
    }
}

}  // namespace

SymmetricTensor tensor_from_vector(const ManyBodyState& state) {
    const FockBasis& basis = *state.basis;
    const int L = basis.sites();
    const int N = basis.particles();
    SymmetricTensor t;
    t.order = N;
    t.extent = L;
    std::size_t total = 1;
    for (int k = 0; k < N; ++k) total *= static_cast<std::size_t>(L);
    t.values.assign(total, {0.0, 0.0});

    const double invNfact = 1.0 / factorial(N);
    Occupations occ;
    for_all_tuples(L, N, [&](const std::vector<int>& idx) {
        occupation_of(idx, L, occ);
        const std::size_t b = basis.index(occ);
        double w = invNfact;
        for (int j = 0; j < L; ++j) w *= factorial(occ[j]);
        t.values[t.flat(idx)] = state.coefficients[static_cast<Eigen::Index>(b)] * std::sqrt(w);
    });
    return t;
}

ManyBodyState vector_from_tensor(const SymmetricTensor& t,
                                 std::shared_ptr<const FockBasis> basis,
                                 double symmetry_tol, bool renormalize) {
    const int L = basis->sites();
    const int N = basis->particles();
    if (t.extent != L || t.order != N)
        throw ConfigError("vector_from_tensor: tensor shape does not match basis");

    // symmetry check against the value at the sorted tuple
    Occupations occ;
    for_all_tuples(L, N, [&](const std::vector<int>& idx) {
        std::vector<int> s = idx;
        std::sort(s.begin(), s.end());
        if (std::abs(t.values[t.flat(idx)] - t.values[t.flat(s)]) > symmetry_tol)
            throw NumericalError("vector_from_tensor: tensor not symmetric within tolerance");
    });

    ManyBodyState out;
    out.basis = basis;
    out.coefficients.resize(static_cast<Eigen::Index>(basis->size()));
    const double Nfact = factorial(N);
    for (std::size_t b = 0; b < basis->size(); ++b) {
        const Occupations& n = basis->state(b);
        double w = Nfact;
        for (int j = 0; j < L; ++j) w /= factorial(n[j]);
        out.coefficients[static_cast<Eigen::Index>(b)] =
            std::sqrt(w) * t.values[t.flat(sorted_tuple(n))];
    }
    if (renormalize) out.normalize();
    return out;
}

std::vector<double> real_tensor_values(const SymmetricTensor& t, double tol) {
    // global phase from the largest-magnitude entry
    std::size_t imax = 0;
    double amax = 0.0;
    for (std::size_t i = 0; i < t.values.size(); ++i) {
        const double a = std::abs(t.values[i]);
        if (a > amax) { amax = a; imax = i; }
    }
    if (amax == 0.0) throw NumericalError("real_tensor_values: zero tensor");
    const std::complex<double> phase = std::conj(t.values[imax]) / amax;
    std::vector<double> out(t.values.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < t.values.size(); ++i) {
        const std::complex<double> v = t.values[i] * phase;
        worst = std::max(worst, std::abs(v.imag()));
        out[i] = v.real();
    }
    if (worst > tol * amax)
        throw NumericalError("real_tensor_values: tensor is not real up to a global phase");
    return out;
}

}  // namespace boseloc
