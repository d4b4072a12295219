#include "boseloc/observables.hpp"

#include <cmath>

namespace boseloc {

CorrelationSet correlations(const ManyBodyState& state, int max_order) {
    const FockBasis& basis = *state.basis;
    const int L = basis.sites();
    const int N = basis.particles();
    if (max_order < 1 || max_order > 3) throw ConfigError("correlations: max_order must be 1..3");
    if (max_order > N) throw ConfigError("correlations: order exceeds particle number");

    CorrelationSet cs;
    cs.L = L;
    cs.c1 = Eigen::VectorXd::Zero(L);
    if (max_order >= 2) cs.c2 = Eigen::MatrixXd::Zero(L, L);
    if (max_order >= 3) cs.c3.assign(static_cast<std::size_t>(L) * L * L, 0.0);

    for (std::size_t a = 0; a < basis.size(); ++a) {
        const double p = std::norm(state.coefficients[static_cast<Eigen::Index>(a)]);
        if (p == 0.0) continue;
        const Occupations& n = basis.state(a);
        for (int i = 0; i < L; ++i) {
            if (n[i] == 0) continue;
            cs.c1[i] += p * n[i];
            if (max_order < 2) continue;
            for (int j = 0; j < L; ++j) {
                const double nj = n[j] - (j == i ? 1 : 0);
                if (nj <= 0) continue;
                cs.c2(i, j) += p * n[i] * nj;
                if (max_order < 3) continue;
                for (int k = 0; k < L; ++k) {
                    const double nk = n[k] - (k == i ? 1 : 0) - (k == j ? 1 : 0);
                    if (nk <= 0) continue;
                    cs.c3[(static_cast<std::size_t>(i) * L + j) * L + k] += p * n[i] * nj * nk;
                }
            }
        }
    }
    return cs;
}

namespace {

template <typename Derived>
double ipr_impl(const Eigen::MatrixBase<Derived>& v) {
    double s2 = 0.0, s4 = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a2 = std::norm(std::complex<double>(v.derived()(i)));
        s2 += a2;
        s4 += a2 * a2;
    }
    if (s2 == 0.0) throw NumericalError("ipr: zero vector");
    return s4 / (s2 * s2);
}

}  // namespace

double ipr_vector(const Eigen::VectorXcd& v) { return ipr_impl(v); }
double ipr_vector(const Eigen::VectorXd& v) { return ipr_impl(v); }

double ipr_two_particle(const Eigen::MatrixXcd& chi) {
    return ipr_impl(Eigen::Map<const Eigen::VectorXcd>(chi.data(), chi.size()));
}
double ipr_two_particle(const Eigen::MatrixXd& chi) {
    return ipr_impl(Eigen::Map<const Eigen::VectorXd>(chi.data(), chi.size()));
}

}  // namespace boseloc
