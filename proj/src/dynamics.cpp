#include "boseloc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "boseloc/observables.hpp"
#include "boseloc/spectral.hpp"

namespace boseloc {

int ExtendedLattice::loaded_bosons() const {
    int n = 0;
    for (int b : aux_bosons) n += b;
    return n;
}

ExtendedLattice make_extended(ProtocolKind kind, const ModelParams& base) {
    base.validate();
    ExtendedLattice lat;
    lat.base = base;
    if (kind == ProtocolKind::Correlated) {
        lat.aux_attach = {8};
        lat.aux_bosons = {2};
        lat.J_prime = 4.0 * base.J;
        lat.bias_sign = 1.0;
    } else {
        lat.aux_attach = {2, 10};
        lat.aux_bosons = {1, 1};
        lat.J_prime = 1.5 * base.J;
        lat.bias_sign = -1.0;
    }
    for (int s : lat.aux_attach)
        if (s < 1 || s > base.L) throw ConfigError("make_extended: attach site outside lattice");
    return lat;
}

ProtocolSchedule ProtocolSchedule::defaults(ProtocolKind kind) {
    ProtocolSchedule s;
    if (kind == ProtocolKind::Correlated) {
        // pair co-tunneling resonance near V_A = +11; sweep 200 -> -90
        s.VA_final = -90.0;
        s.ramp_nodes = {{0.0, 1.0}, {0.04, 0.3793}, {0.88, 0.3241}, {0.97, 0.241}, {1.0, 0.0}};
    } else {
        // single-boson resonance near V_A = 0; sweep -200 -> +20
        s.VA_final = 20.0;
        s.ramp_nodes = {{0.0, 1.0}, {0.05, 0.1818}, {0.9, 0.0455}, {1.0, 0.0}};
    }
    return s;
}

void ProtocolSchedule::validate() const {
    if (!(0.0 < T1 && T1 < T2 && T2 < T3))
        throw ConfigError("ProtocolSchedule: need 0 < T1 < T2 < T3");
    if (dt <= 0.0) throw ConfigError("ProtocolSchedule: dt must be positive");
    if (walk_start_site < 1) throw ConfigError("ProtocolSchedule: bad walk start site");
    if (ramp_nodes.size() < 2 || ramp_nodes.front().first != 0.0 ||
        ramp_nodes.back().first != 1.0)
        throw ConfigError("ProtocolSchedule: ramp nodes must span [0,1]");
    for (std::size_t i = 1; i < ramp_nodes.size(); ++i)
        if (ramp_nodes[i].first <= ramp_nodes[i - 1].first)
            throw ConfigError("ProtocolSchedule: ramp node times must increase");
}

double aux_potential(const ExtendedLattice& lattice, const ProtocolSchedule& schedule,
                     double t) {
    const double va0 = lattice.bias_sign * std::abs(schedule.VA_initial);
    const double va1 = schedule.VA_final
                           ? *schedule.VA_final
                           : onsite_potential(lattice.base, lattice.aux_attach.front());
    if (t <= schedule.T1) return va0;
    if (t >= schedule.T2) return va1;
    const double s = (t - schedule.T1) / (schedule.T2 - schedule.T1);
    double f = 0.0;
    for (std::size_t i = 1; i < schedule.ramp_nodes.size(); ++i) {
        const auto& [s0, f0] = schedule.ramp_nodes[i - 1];
        const auto& [s1, f1] = schedule.ramp_nodes[i];
        if (s <= s1 || i + 1 == schedule.ramp_nodes.size()) {
            f = f0 + (f1 - f0) * (s - s0) / (s1 - s0);
            break;
        }
    }
    return va1 + (va0 - va1) * f;
}

Eigen::MatrixXd build_extended_hamiltonian(const ExtendedLattice& lattice, double VA,
                                           double J_prime, const FockBasis& basis) {
    const int L = lattice.base.L;
    const int S = lattice.total_sites();
    if (basis.sites() != S) throw ConfigError("build_extended_hamiltonian: basis mismatch");
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);

    for (std::size_t a = 0; a < basis.size(); ++a) {
        const Occupations& n = basis.state(a);
        double diag = 0.0;
        for (int j = 0; j < S; ++j) {
            const double vj = (j < L) ? onsite_potential(lattice.base, j + 1) : VA;
            diag += vj * n[j] + 0.5 * lattice.base.U * n[j] * (n[j] - 1);
        }
        H(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) = diag;
    }

    auto hop = [&](double J, int from, int to) {
        if (J == 0.0) return;
        Occupations occ;
        for (std::size_t a = 0; a < basis.size(); ++a) {
            const Occupations& n = basis.state(a);
            if (n[from] == 0) continue;
            occ = n;
            --occ[from];
            ++occ[to];
            const std::size_t b = basis.index(occ);
            H(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) +=
                -J * std::sqrt(static_cast<double>(n[from]) * (n[to] + 1));
        }
    };
    for (int j = 0; j + 1 < L; ++j) {
        hop(lattice.base.J, j, j + 1);
        hop(lattice.base.J, j + 1, j);
    }
    for (std::size_t k = 0; k < lattice.aux_attach.size(); ++k) {
        const int aux = L + static_cast<int>(k);
        const int site = lattice.aux_attach[k] - 1;
        hop(J_prime, aux, site);
        hop(J_prime, site, aux);
    }
    return H;
}

namespace {

Eigen::VectorXd density_of(const ManyBodyState& st) { return correlations(st, 1).c1; }

void record_sample(EvolutionRecord& rec, double t, const ManyBodyState& st) {
    rec.times.push_back(t);
    rec.densities.push_back(density_of(st));
    rec.norms.push_back(st.norm());
}

void append_record(EvolutionRecord& rec, const EvolutionRecord& more) {
    // drop the duplicated first sample when stitching steps together
    const std::size_t start = rec.times.empty() ? 0 : 1;
    for (std::size_t i = start; i < more.times.size(); ++i) {
        rec.times.push_back(more.times[i]);
        rec.densities.push_back(more.densities[i]);
        rec.norms.push_back(more.norms[i]);
    }
    rec.final_state = more.final_state;
}

}  // namespace

EvolutionRecord propagate(const ManyBodyState& psi0,
                          const std::function<Eigen::MatrixXd(double)>& H_of_t, double t0,
                          double t1, double dt, int sample_every) {
    if (dt <= 0.0 || t1 < t0) throw ConfigError("propagate: bad time range or dt");
    if (sample_every < 1) sample_every = 1;
    EvolutionRecord rec;
    ManyBodyState st = psi0;
    record_sample(rec, t0, st);
    const auto steps = static_cast<long>(std::ceil((t1 - t0) / dt - 1e-12));
    double t = t0;
    for (long s = 0; s < steps; ++s) {
        const double h = std::min(dt, t1 - t);
        const EigenSystem es = eigh(H_of_t(t + 0.5 * h), 1e-9);
        const Eigen::MatrixXcd Q = es.eigenvectors.cast<std::complex<double>>();
        const Eigen::VectorXcd amp = Q.adjoint() * st.coefficients;
        const Eigen::VectorXcd phase =
            (std::complex<double>(0.0, -h) * es.eigenvalues.cast<std::complex<double>>().array())
                .exp()
                .matrix();
        st.coefficients = Q * amp.cwiseProduct(phase);
        t += h;
        if ((s + 1) % sample_every == 0 || s + 1 == steps) record_sample(rec, t, st);
        if (std::abs(st.norm() - 1.0) > 1e-8)
            throw NumericalError("propagate: norm drift exceeded contract");
    }
    st.energy = 0.0;
    rec.final_state = st;
    return rec;
}

EvolutionRecord propagate_constant(const ManyBodyState& psi0, const Eigen::MatrixXd& H,
                                   double t0, double t1, int samples) {
    if (t1 < t0) throw ConfigError("propagate_constant: bad time range");
    if (samples < 2) samples = 2;
    const EigenSystem es = eigh(H, 1e-9);
    const Eigen::MatrixXcd Q = es.eigenvectors.cast<std::complex<double>>();
    const Eigen::VectorXcd amp = Q.adjoint() * psi0.coefficients;
    EvolutionRecord rec;
    ManyBodyState st = psi0;
    for (int i = 0; i < samples; ++i) {
        const double t = t0 + (t1 - t0) * i / (samples - 1);
        const Eigen::VectorXcd phase = (std::complex<double>(0.0, -(t - t0)) *
                                        es.eigenvalues.cast<std::complex<double>>().array())
                                           .exp()
                                           .matrix();
        st.coefficients = Q * amp.cwiseProduct(phase);
        record_sample(rec, t, st);
    }
    st.energy = 0.0;
    rec.final_state = st;
    return rec;
}

EvolutionRecord run_protocol(ProtocolKind kind, const ProtocolSchedule& schedule,
                             const ModelParams& base) {
    schedule.validate();
    const ExtendedLattice lat = make_extended(kind, base);
    if (schedule.walk_start_site > base.L)
        throw ConfigError("run_protocol: walk start site outside lattice");
    const int loaded = lat.loaded_bosons();
    if (base.N != loaded + 1)
        throw ConfigError("run_protocol: base.N must count the walker plus loaded bosons");

    auto basis = enumerate_basis(lat.total_sites(), base.N);
    Occupations occ(static_cast<std::size_t>(lat.total_sites()), 0);
    occ[schedule.walk_start_site - 1] = 1;
    for (std::size_t k = 0; k < lat.aux_bosons.size(); ++k)
        occ[static_cast<std::size_t>(base.L) + k] = lat.aux_bosons[k];
    ManyBodyState psi{basis, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size())),
                      0.0};
    psi.coefficients[static_cast<Eigen::Index>(basis->index(occ))] = 1.0;

    const double va0 = aux_potential(lat, schedule, 0.0);
    const double va1 = aux_potential(lat, schedule, schedule.T3);

    EvolutionRecord rec;
    const int walk_samples =
        std::max(2, static_cast<int>(schedule.T1 / (schedule.dt * schedule.sample_every)));
    append_record(rec, propagate_constant(psi, build_extended_hamiltonian(lat, va0, 0.0, *basis),
                                          0.0, schedule.T1, walk_samples));

    auto H_of_t = [&](double t) {
        return build_extended_hamiltonian(lat, aux_potential(lat, schedule, t), lat.J_prime,
                                          *basis);
    };
    append_record(rec, propagate(rec.final_state, H_of_t, schedule.T1, schedule.T2, schedule.dt,
                                 schedule.sample_every));
    rec.state_at_T2 = rec.final_state;

    const Eigen::VectorXd dens_T2 = density_of(rec.state_at_T2);
    double aux_left = 0.0;
    for (std::size_t k = 0; k < lat.aux_attach.size(); ++k)
        aux_left += dens_T2[base.L + static_cast<int>(k)];
    rec.transfer_efficiency = 1.0 - aux_left / loaded;

    const int free_samples = std::max(
        2, static_cast<int>((schedule.T3 - schedule.T2) / (schedule.dt * schedule.sample_every)));
    append_record(rec,
                  propagate_constant(rec.state_at_T2,
                                     build_extended_hamiltonian(lat, va1, 0.0, *basis),
                                     schedule.T2, schedule.T3, free_samples));

    const Eigen::VectorXd dens_T3 = density_of(rec.final_state);
    double near = 0.0;
    for (int site : lat.aux_attach)
        for (int j = std::max(1, site - 1); j <= std::min(base.L, site + 1); ++j)
            near += dens_T3[j - 1];
    rec.retention = near / loaded;
    return rec;
}

std::vector<ProjectionEntry> project_onto_initial_eigenstates(
    const ManyBodyState& state, const ExtendedLattice& lattice,
    const ScreeningThresholds& thresholds) {
    const HamiltonianMatrix H0 = build_hamiltonian(lattice.base);
    const EigenSystem es = eigh(H0.mat);
    const FockBasis& ext = *state.basis;
    const FockBasis& bare = *H0.basis;
    const int L = lattice.base.L;

    // aux-empty sector of the extended basis, expressed in the bare basis
    Eigen::VectorXcd restricted =
        Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(bare.size()));
    Occupations trimmed(static_cast<std::size_t>(L));
    for (std::size_t a = 0; a < ext.size(); ++a) {
        const Occupations& n = ext.state(a);
        bool aux_empty = true;
        for (int j = L; j < ext.sites(); ++j)
            if (n[j] != 0) { aux_empty = false; break; }
        if (!aux_empty) continue;
        std::copy(n.begin(), n.begin() + L, trimmed.begin());
        restricted[static_cast<Eigen::Index>(bare.index(trimmed))] =
            state.coefficients[static_cast<Eigen::Index>(a)];
    }

    const Classifier cls(lattice.base, thresholds);
    std::vector<ProjectionEntry> table;
    table.reserve(bare.size());
    for (Eigen::Index m = 0; m < es.eigenvalues.size(); ++m) {
        const std::complex<double> ov =
            es.eigenvectors.col(m).cast<std::complex<double>>().dot(restricted);
        ManyBodyState eig{H0.basis, es.eigenvectors.col(m).cast<std::complex<double>>(),
                          es.eigenvalues[m]};
        table.push_back({es.eigenvalues[m], std::norm(ov), cls.classify(eig).state_class});
    }
    return table;
}

}  // namespace boseloc
