#include "boseloc/bloch.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "boseloc/spectral.hpp"

namespace boseloc {

int BandStructure::minus_index(int m) const {
    const double k = momenta[m];
    const double edge = std::numbers::pi / q;
    if (std::abs(k - edge) < 1e-12 || std::abs(k) < 1e-12) return m;  // self-paired
    double best = 1e300;
    int idx = m;
    for (int j = 0; j < momentum_count(); ++j) {
        const double dkk = std::abs(momenta[j] + k);
        if (dkk < best) {
            best = dkk;
            idx = j;
        }
    }
    return idx;
}

BandStructure band_structure(const ModelParams& params) {
    ModelParams p = params.with_particles(1);
    p.validate();
    if (p.L % p.q != 0) throw ConfigError("band_structure: L must be divisible by q");
    const int q = p.q;
    const int M = p.L / q;
    BandStructure bs;
    bs.L = p.L;
    bs.q = q;
    bs.bands.resize(q, M);
    bs.bloch_states.resize(M);
    const std::complex<double> I(0.0, 1.0);

    // m in (-M/2, M/2] so that k q lies in (-pi, pi]
    std::vector<int> ms;
    for (int m = -(M / 2) + (M % 2 == 0 ? 1 : 0); m <= M / 2; ++m) ms.push_back(m);
    for (int mi = 0; mi < M; ++mi) {
        const double k = 2.0 * std::numbers::pi * ms[mi] / p.L;
        bs.momenta.push_back(k);
        Eigen::MatrixXcd Hk = Eigen::MatrixXcd::Zero(q, q);
        for (int s = 0; s < q; ++s) {
            Hk(s, s) += onsite_potential(p, s + 1);
            Hk(s, (s + 1) % q) += -p.J * std::exp(I * k);
            Hk(s, (s + q - 1) % q) += -p.J * std::exp(-I * k);
        }
        const EigenSystemC es = eigh(Hk, 1e-9);
        bs.bands.col(mi) = es.eigenvalues;
        Eigen::MatrixXcd states(p.L, q);
        const double nrm = 1.0 / std::sqrt(static_cast<double>(M));
        for (int b = 0; b < q; ++b)
            for (int j = 1; j <= p.L; ++j)
                states(j - 1, b) = std::exp(I * (k * j)) * es.eigenvectors((j - 1) % q, b) * nrm;
        bs.bloch_states[mi] = std::move(states);
    }
    return bs;
}

Eigen::MatrixXd bloch_projection(const Eigen::VectorXcd& phi, const BandStructure& bands) {
    if (phi.size() != bands.L) throw ConfigError("bloch_projection: dimension mismatch");
    const int M = bands.momentum_count();
    Eigen::MatrixXd w(bands.q, M);
    for (int m = 0; m < M; ++m) {
        const Eigen::VectorXcd amp = bands.bloch_states[m].adjoint() * phi;
        for (int b = 0; b < bands.q; ++b) w(b, m) = std::norm(amp[b]);
    }
    return w;
}

Eigen::MatrixXd bloch_projection(const Eigen::VectorXd& phi, const BandStructure& bands) {
    return bloch_projection(Eigen::VectorXcd(phi.cast<std::complex<double>>()), bands);
}

double standing_wave_score(const Eigen::MatrixXd& weights, const BandStructure& bands) {
    double asym = 0.0, total = 0.0;
    for (int m = 0; m < bands.momentum_count(); ++m) {
        const int mm = bands.minus_index(m);
        for (int b = 0; b < bands.q; ++b) {
            asym += std::abs(weights(b, m) - weights(b, mm));
            total += weights(b, m) + weights(b, mm);
        }
    }
    if (total == 0.0) return 0.0;
    return 1.0 - asym / total;
}

double middle_band_weight(const Eigen::MatrixXd& weights) {
    const int q = static_cast<int>(weights.rows());
    if (q < 2 || q % 2 != 0) throw ConfigError("middle_band_weight: needs even band count");
    const double total = weights.sum();
    if (total == 0.0) return 0.0;
    return (weights.row(q / 2 - 1).sum() + weights.row(q / 2).sum()) / total;
}

}  // namespace boseloc
