#include "boseloc/spectstats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <thread>

#include "boseloc/observables.hpp"

namespace boseloc {

SpacingStatistics r_ratios(const std::vector<double>& levels, bool exclude_gap_edges,
                           int gap_count) {
    if (levels.size() < 3) throw ConfigError("r_ratios: need at least 3 levels");
    const std::size_t ns = levels.size() - 1;
    std::vector<double> d(ns);
    for (std::size_t m = 0; m < ns; ++m) {
        d[m] = levels[m + 1] - levels[m];
        if (d[m] <= 0.0)
            throw NumericalError("r_ratios: levels not strictly ascending (degenerate pair)");
    }
    std::vector<bool> gap(ns, false);
    int excluded = 0;
    if (exclude_gap_edges && gap_count > 0) {
        std::vector<std::size_t> order(ns);
        for (std::size_t m = 0; m < ns; ++m) order[m] = m;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });
        for (int g = 0; g < gap_count && g < static_cast<int>(ns); ++g) gap[order[g]] = true;
    }
    std::vector<double> r;
    r.reserve(ns - 1);
    for (std::size_t m = 0; m + 1 < ns; ++m) {
        if (gap[m] || gap[m + 1]) {
            ++excluded;
            continue;
        }
        r.push_back(std::min(d[m], d[m + 1]) / std::max(d[m], d[m + 1]));
    }
    SpacingStatistics st = summarize_r(std::move(r), excluded);
    return st;
}

double poisson_reference(double r) {
    if (r < 0.0 || r > 1.0) throw ConfigError("poisson_reference: r outside [0,1]");
    return 2.0 / ((1.0 + r) * (1.0 + r));
}

SpacingStatistics summarize_r(std::vector<double> r_values, int excluded, int bins) {
    if (bins < 1) throw ConfigError("summarize_r: bins must be positive");
    SpacingStatistics st;
    st.r_values = std::move(r_values);
    st.excluded_count = excluded;
    st.bin_edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) st.bin_edges[b] = static_cast<double>(b) / bins;
    st.densities = Eigen::VectorXd::Zero(bins);
    if (st.r_values.empty()) return st;
    double sum = 0.0;
    for (double r : st.r_values) {
        sum += r;
        int b = static_cast<int>(r * bins);
        if (b >= bins) b = bins - 1;
        if (b < 0) b = 0;
        st.densities[b] += 1.0;
    }
    st.mean_r = sum / static_cast<double>(st.r_values.size());
    st.densities *= static_cast<double>(bins) / static_cast<double>(st.r_values.size());
    return st;
}

void EnsembleConfig::validate() const {
    params.validate();
    if (window_halfwidth <= 0.0 || sample_step <= 0.0)
        throw ConfigError("EnsembleConfig: window and step must be positive");
    if (xi_centers.empty()) throw ConfigError("EnsembleConfig: no xi centers");
}

EnsembleConfig EnsembleConfig::defaults(double U) {
    EnsembleConfig c;
    c.params.L = 64;
    c.params.N = 2;
    c.params.J = 1.0;
    c.params.U = U;
    c.params.V = 10.0;
    c.params.p = 1;
    c.params.q = 4;
    c.params.boundary = Boundary::Open;
    c.thresholds.ipr_phi_max = 0.06;
    for (int n = 0; n < 4; ++n)
        c.xi_centers.push_back(std::numbers::pi / 4.0 + n * std::numbers::pi / 2.0);
    return c;
}

std::vector<Eigen::MatrixXd> build_ensemble(const EnsembleConfig& config, int threads) {
    config.validate();
    const double scale = config.window_in_xi_over_2pi ? 1.0 / (2.0 * std::numbers::pi) : 1.0;
    const double hw = config.window_halfwidth * scale;
    std::vector<double> xis;
    for (double c : config.xi_centers) {
        std::vector<double> pts;
        for (double x = c - hw; x <= c + hw + 1e-15; x += config.sample_step) pts.push_back(x);
        if (config.max_xi_points > 0 && pts.size() > config.max_xi_points) {
            // thin the sweep evenly, keeping the window coverage
            std::vector<double> kept;
            for (std::size_t i = 0; i < config.max_xi_points; ++i)
                kept.push_back(pts[i * pts.size() / config.max_xi_points]);
            pts = kept;
        }
        xis.insert(xis.end(), pts.begin(), pts.end());
    }

    std::vector<std::vector<Eigen::MatrixXd>> per_point(xis.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> collected{0};
    auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < xis.size(); i = next.fetch_add(1)) {
            if (config.max_samples > 0 && collected.load() >= config.max_samples) return;
            ModelParams p = config.params;
            p.xi = xis[i];
            const Classifier cls(p, config.thresholds);
            const HamiltonianMatrix H = build_hamiltonian(p);
            const EigenSystem es = eigh(H.mat);
            const ModelParams sp = p.with_particles(1);
            for (Eigen::Index m = 0; m < es.eigenvalues.size(); ++m) {
                ManyBodyState st{H.basis, es.eigenvectors.col(m).cast<std::complex<double>>(),
                                 es.eigenvalues[m]};
                const ClassificationReport rep = cls.classify(st);
                if (rep.state_class == StateClass::NotSelfLocalized || !rep.phi) continue;
                per_point[i].push_back(build_effective_hamiltonian(sp, *rep.phi).mat);
                collected.fetch_add(1);
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    std::vector<Eigen::MatrixXd> out;
    for (auto& v : per_point) {
        for (auto& H : v) {
            if (config.max_samples > 0 && out.size() >= config.max_samples) return out;
            out.push_back(std::move(H));
        }
    }
    return out;
}

SpacingStatistics aggregate(const std::vector<Eigen::MatrixXd>& hamiltonians,
                            bool exclude_gap_edges, int gap_count, int bins) {
    if (hamiltonians.empty()) throw ConfigError("aggregate: empty ensemble");
    std::vector<double> pool;
    int excluded = 0;
    for (const auto& H : hamiltonians) {
        const EigenSystem es = eigh(H);
        std::vector<double> levels(es.eigenvalues.data(),
                                   es.eigenvalues.data() + es.eigenvalues.size());
        const SpacingStatistics one = r_ratios(levels, exclude_gap_edges, gap_count);
        pool.insert(pool.end(), one.r_values.begin(), one.r_values.end());
        excluded += one.excluded_count;
    }
    return summarize_r(std::move(pool), excluded, bins);
}

}  // namespace boseloc
