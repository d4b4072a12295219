#include "boseloc/detector.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "boseloc/observables.hpp"

namespace boseloc {

const char* to_string(StateClass c) {
    switch (c) {
        case StateClass::IndependentALL: return "independent";
        case StateClass::CorrelatedALL: return "correlated";
        case StateClass::OneLocalized: return "one_localized";
        case StateClass::NotSelfLocalized: return "not_self_localized";
    }
    return "?";
}

namespace {

void sign_fix(Eigen::VectorXd& v) {
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0) v = -v;
}

Eigen::MatrixXd tensor_as_matrix(const SymmetricTensor& t) {
    // order 2 -> L x L; order 3 -> L x L^2 with column r = (i2, i3) row-major
    const auto vals = real_tensor_values(t);
    const int L = t.extent;
    const Eigen::Index cols = static_cast<Eigen::Index>(vals.size()) / L;
    Eigen::MatrixXd M(L, cols);
    for (int i = 0; i < L; ++i)
        for (Eigen::Index r = 0; r < cols; ++r)
            M(i, r) = vals[static_cast<std::size_t>(i) * cols + r];
    return M;
}

struct PairSplit {
    Eigen::VectorXd a, b;  // A ~ a b^T + b a^T
};

// Exact symmetric rank-2 factorization from the extreme signed eigenpair.
// Stays well defined when the two singular values are degenerate, where the
// raw singular vectors are an arbitrary mixture of the factors.
PairSplit split_symmetric_pair(const Eigen::MatrixXd& A) {
    Eigen::MatrixXd S = 0.5 * (A + A.transpose());
    const EigenSystem es = eigh(S, 1e-6);
    const Eigen::Index n = es.eigenvalues.size();
    const double lp = es.eigenvalues[n - 1];
    const double lm = es.eigenvalues[0];
    PairSplit ps;
    if (lp <= 0.0 && lm < 0.0) {
        // flipped overall sign
        return split_symmetric_pair(-A);
    }
    const double ap = std::sqrt(std::max(lp, 0.0) / 2.0);
    const double am = std::sqrt(std::max(-lm, 0.0) / 2.0);
    ps.a = ap * es.eigenvectors.col(n - 1) + am * es.eigenvectors.col(0);
    ps.b = ap * es.eigenvectors.col(n - 1) - am * es.eigenvectors.col(0);
    return ps;
}

// maximize IPR(S r) over unit r in R^3; S has orthonormal columns. The
// localized factors are sharp IPR maxima, so they are pulled out first and the
// extended state is the orthogonal remainder (a direct IPR minimum would let
// the localized spikes cancel against the extended state's peaks).
Eigen::Vector3d max_ipr_direction(const Eigen::MatrixXd& S) {
    auto value = [&](const Eigen::Vector3d& r) { return ipr_vector(Eigen::VectorXd(S * r)); };
    // Fibonacci-sphere coarse pass
    Eigen::Vector3d best = Eigen::Vector3d::UnitX();
    double fbest = value(best);
    const int n = 800;
    const double ga = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / n;
        const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
        const Eigen::Vector3d r(rad * std::cos(ga * i), rad * std::sin(ga * i), z);
        const double f = value(r);
        if (f > fbest) { fbest = f; best = r; }
    }
    // projected gradient ascent, backtracking
    double step = 0.1;
    for (int it = 0; it < 300 && step > 1e-14; ++it) {
        const Eigen::VectorXd v = S * best;
        Eigen::Vector3d grad = S.transpose() * (4.0 * v.array().cube()).matrix();
        grad -= grad.dot(best) * best;
        Eigen::Vector3d trial = (best + step * grad).normalized();
        const double f = value(trial);
        if (f > fbest) {
            fbest = f;
            best = trial;
            step *= 1.5;
        } else {
            step *= 0.5;
        }
    }
    return best;
}

// maximize IPR(cos(t) u1 + sin(t) u2) over t in [0, pi)
double max_ipr_angle(const Eigen::VectorXd& u1, const Eigen::VectorXd& u2) {
    auto value = [&](double t) {
        return ipr_vector(Eigen::VectorXd(std::cos(t) * u1 + std::sin(t) * u2));
    };
    double best = 0.0, fbest = value(0.0);
    const int n = 512;
    for (int i = 1; i < n; ++i) {
        const double t = std::numbers::pi * i / n;
        const double f = value(t);
        if (f > fbest) { fbest = f; best = t; }
    }
    // golden-section polish
    double a = best - std::numbers::pi / n, b = best + std::numbers::pi / n;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    for (int it = 0; it < 60; ++it) {
        if (value(c) > value(d)) b = d; else a = c;
        c = b - gr * (b - a);
        d = a + gr * (b - a);
    }
    return 0.5 * (a + b);
}

// Least-squares chi for psi ~ phi_i chi_jk + phi_j chi_ik + phi_k chi_ij,
// given unit phi. Closed form of the normal equations.
Eigen::MatrixXd project_chi(const Eigen::MatrixXd& psi3, const Eigen::VectorXd& phi) {
    const int L = static_cast<int>(phi.size());
    Eigen::MatrixXd T(L, L);  // T_jk = sum_i phi_i psi_ijk
    for (int j = 0; j < L; ++j)
        for (int k = 0; k < L; ++k) {
            double s = 0.0;
            for (int i = 0; i < L; ++i) s += phi[i] * psi3(i, j * L + k);
            T(j, k) = s;
        }
    T = 0.5 * (T + T.transpose().eval());
    const Eigen::VectorXd t = T * phi;
    const double tau = phi.dot(t);
    const Eigen::VectorXd g = 0.5 * (t - (tau / 3.0) * phi);
    return T - phi * g.transpose() - g * phi.transpose();
}

// |<psi3 | Sym(phi x chi)>| in tensor space, both normalized
double tensor_fidelity3(const Eigen::MatrixXd& psi3, const Eigen::VectorXd& phi,
                        const Eigen::MatrixXd& chi) {
    const int L = static_cast<int>(phi.size());
    double dot = 0.0, nrm2 = 0.0;
    for (int i = 0; i < L; ++i)
        for (int j = 0; j < L; ++j)
            for (int k = 0; k < L; ++k) {
                const double r = phi[i] * chi(j, k) + phi[j] * chi(i, k) + phi[k] * chi(i, j);
                dot += r * psi3(i, j * L + k);
                nrm2 += r * r;
            }
    if (nrm2 == 0.0) return 0.0;
    return std::abs(dot) / std::sqrt(nrm2 * psi3.squaredNorm());
}

Eigen::VectorXd density_from_tensor3(const Eigen::MatrixXd& psi3) {
    const int L = static_cast<int>(psi3.rows());
    Eigen::VectorXd c1(L);
    for (int i = 0; i < L; ++i) c1[i] = 3.0 * psi3.row(i).squaredNorm();
    return c1;
}

}  // namespace

TwoParticleDecomposition decompose_two_particle(const SymmetricTensor& psi) {
    if (psi.order != 2) throw ConfigError("decompose_two_particle: order must be 2");
    const Eigen::MatrixXd M = tensor_as_matrix(psi);
    const Eigen::MatrixXd Ms = 0.5 * (M + M.transpose());
    const EigenSystem es = eigh(Ms, 1e-6);
    TwoParticleDecomposition d;
    d.singular_values = es.eigenvalues.cwiseAbs();
    std::sort(d.singular_values.data(), d.singular_values.data() + d.singular_values.size(),
              std::greater<double>());
    PairSplit ps = split_symmetric_pair(M);
    Eigen::VectorXd a = ps.a, b = ps.b;
    if (a.norm() == 0.0) throw NumericalError("decompose_two_particle: zero tensor");
    a.normalize();
    if (b.norm() > 1e-14) b.normalize(); else b = a;  // rank-1: phi = chi
    const double ia = ipr_vector(a), ib = ipr_vector(b);
    d.ambiguous = std::abs(ia - ib) < 1e-6;
    if (ia >= ib) { d.chi = a; d.phi = b; } else { d.chi = b; d.phi = a; }
    sign_fix(d.chi);
    sign_fix(d.phi);
    return d;
}

ManyBodyState reconstruct(const Eigen::VectorXd& phi, const Eigen::VectorXd& chi,
                          std::shared_ptr<const FockBasis> basis) {
    const int L = basis->sites();
    if (basis->particles() != 2 || phi.size() != L || chi.size() != L)
        throw ConfigError("reconstruct: shape mismatch (expected N=2)");
    SymmetricTensor t;
    t.order = 2;
    t.extent = L;
    t.values.resize(static_cast<std::size_t>(L) * L);
    for (int i = 0; i < L; ++i)
        for (int j = 0; j < L; ++j)
            t.values[static_cast<std::size_t>(i) * L + j] = phi[i] * chi[j] + phi[j] * chi[i];
    ManyBodyState out = vector_from_tensor(t, basis, 1e-6);
    if (out.coefficients.norm() < 1e-14)
        throw NumericalError("reconstruct: symmetrization produced a zero state");
    out.normalize();
    return out;
}

ManyBodyState reconstruct(const Eigen::VectorXd& phi, const Eigen::MatrixXd& chi,
                          std::shared_ptr<const FockBasis> basis) {
    const int L = basis->sites();
    if (basis->particles() != 3 || phi.size() != L || chi.rows() != L || chi.cols() != L)
        throw ConfigError("reconstruct: shape mismatch (expected N=3)");
    const Eigen::MatrixXd cs = 0.5 * (chi + chi.transpose());
    SymmetricTensor t;
    t.order = 3;
    t.extent = L;
    t.values.resize(static_cast<std::size_t>(L) * L * L);
    for (int i = 0; i < L; ++i)
        for (int j = 0; j < L; ++j)
            for (int k = 0; k < L; ++k)
                t.values[(static_cast<std::size_t>(i) * L + j) * L + k] =
                    phi[i] * cs(j, k) + phi[j] * cs(i, k) + phi[k] * cs(i, j);
    ManyBodyState out = vector_from_tensor(t, basis, 1e-6);
    if (out.coefficients.norm() < 1e-14)
        throw NumericalError("reconstruct: symmetrization produced a zero state");
    out.normalize();
    return out;
}

RefineResult refine_chi(const ManyBodyState& psi, const Eigen::VectorXd& phi,
                        const ModelParams& params, bool include_pair_breaking) {
    const int N = psi.basis->particles();
    if (N != 2 && N != 3) throw ConfigError("refine_chi: N must be 2 or 3");
    if (std::abs(phi.norm() - 1.0) > 1e-8) throw ConfigError("refine_chi: phi must be unit norm");
    const ModelParams reduced = params.with_particles(N - 1);
    const HamiltonianMatrix Heff =
        build_effective_hamiltonian(reduced, phi, include_pair_breaking);
    const EigenSystem es = eigh(Heff.mat);

    RefineResult best;
    for (Eigen::Index m = 0; m < es.eigenvalues.size(); ++m) {
        const Eigen::VectorXd chi_fock = es.eigenvectors.col(m);
        ManyBodyState rec;
        Eigen::MatrixXd chi_mat;
        Eigen::VectorXd chi_vec;
        if (N == 2) {
            chi_vec = chi_fock;  // single-particle Fock basis is the site basis
            rec = reconstruct(phi, chi_vec, psi.basis);
        } else {
            ManyBodyState chi_state{Heff.basis, chi_fock.cast<std::complex<double>>(), 0.0};
            const SymmetricTensor ct = tensor_from_vector(chi_state);
            const auto vals = real_tensor_values(ct);
            chi_mat.resize(params.L, params.L);
            for (int j = 0; j < params.L; ++j)
                for (int k = 0; k < params.L; ++k)
                    chi_mat(j, k) = vals[static_cast<std::size_t>(j) * params.L + k];
            rec = reconstruct(phi, chi_mat, psi.basis);
        }
        const double f = std::abs(psi.coefficients.dot(rec.coefficients));
        if (f > best.fidelity) {
            best.fidelity = f;
            best.energy = es.eigenvalues[m];
            if (N == 2) best.chi_vec = chi_vec; else best.chi_mat = chi_mat;
        }
    }
    return best;
}

bool detect_one_localized(const SymmetricTensor& psi, const ScreeningThresholds& th) {
    const auto vals = real_tensor_values(psi);
    const int L = psi.extent;
    const int N = psi.order;
    // density from the tensor marginal
    Eigen::VectorXd c1 = Eigen::VectorXd::Zero(L);
    std::vector<int> idx(N, 0);
    std::size_t flat = 0;
    const std::size_t total = vals.size();
    for (flat = 0; flat < total; ++flat) {
        std::size_t f = flat;
        const double p = vals[flat] * vals[flat];
        for (int d = N - 1; d >= 0; --d) { idx[d] = static_cast<int>(f % L); f /= L; }
        c1[idx[0]] += N * p;
    }
    Eigen::Index ia = 0;
    c1.maxCoeff(&ia);
    for (int i = 0; i < L; ++i)
        if (i != ia && c1[i] >= th.one_localized_density_max) return false;
    // weight of all tuples touching site ia
    double away = 0.0;
    for (flat = 0; flat < total; ++flat) {
        std::size_t f = flat;
        bool touches = false;
        for (int d = 0; d < N; ++d) {
            if (static_cast<int>(f % L) == ia) { touches = true; break; }
            f /= L;
        }
        if (!touches) away += vals[flat] * vals[flat];
    }
    return (1.0 - away) > th.one_localized_weight_min;
}

Classifier::Classifier(const ModelParams& params, const ScreeningThresholds& thresholds)
    : params_(params), thresholds_(thresholds) {
    params_.validate();
    const EigenSystem sp = eigh(build_single_particle(params_.with_particles(1)));
    std::vector<Eigen::Index> edge;
    for (Eigen::Index m = 0; m < sp.eigenvalues.size(); ++m) {
        const Eigen::VectorXd v = sp.eigenvectors.col(m);
        if (ipr_vector(v) < thresholds_.edge_ipr_min) continue;
        Eigen::Index peak = 0;
        v.cwiseAbs().maxCoeff(&peak);
        if (peak < params_.q || peak >= params_.L - params_.q) edge.push_back(m);
    }
    edge_states_.resize(params_.L, static_cast<Eigen::Index>(edge.size()));
    for (std::size_t c = 0; c < edge.size(); ++c)
        edge_states_.col(static_cast<Eigen::Index>(c)) = sp.eigenvectors.col(edge[c]);
}

bool Classifier::edge_cell_heavy(const Eigen::VectorXd& density) const {
    const int L = params_.L, q = params_.q;
    const double total = density.sum();
    if (total <= 0.0 || L <= 2 * q) return false;
    const double head = density.head(q).sum() / total;
    const double tail = density.tail(q).sum() / total;
    return head > thresholds_.edge_cell_weight_max || tail > thresholds_.edge_cell_weight_max;
}

bool Classifier::is_edge_like(const Eigen::VectorXd& v) const {
    if (edge_states_.cols() == 0) return false;
    const double proj = (edge_states_.transpose() * v).norm() / v.norm();
    return proj > thresholds_.edge_overlap_max;
}

ClassificationReport Classifier::decompose_three_independent(const SymmetricTensor& psi) const {
    ClassificationReport rep;
    const Eigen::MatrixXd psi3 = tensor_as_matrix(psi);
    const SvdResultReal sv = svd(psi3);
    const int nrec = static_cast<int>(std::min<Eigen::Index>(6, sv.singular_values.size()));
    rep.singular_values = sv.singular_values.head(nrec);

    const double s1 = sv.singular_values[0], s2 = sv.singular_values[1],
                 s3 = sv.singular_values[2];
    if (s1 + s2 + s3 <= thresholds_.sv_sum_min ||
        s3 <= 0.0 || s1 / s3 > thresholds_.near_equal_ratio) {
        rep.note = "singular-value pattern is not three-dominant";
        return rep;
    }

    const int L = psi.extent;
    const Eigen::MatrixXd S3 = sv.left_vectors.leftCols(3);
    Eigen::MatrixXd A3(3, L * L);  // weighted right vectors, paired row-wise with S3
    for (int m = 0; m < 3; ++m)
        A3.row(m) = sv.singular_values[m] * sv.right_vectors.col(m).transpose();

    // the extended direction hides in the near-degenerate triple; pull out the
    // two localized directions first, the extended state is the remainder
    const Eigen::Vector3d rl1 = max_ipr_direction(S3);
    Eigen::Vector3d c1 = rl1.unitOrthogonal();
    Eigen::Vector3d c2 = rl1.cross(c1);
    const double theta = max_ipr_angle(S3 * c1, S3 * c2);
    Eigen::Matrix3d R;
    R.col(0) = rl1;                                          // s~(l)
    R.col(1) = std::cos(theta) * c1 + std::sin(theta) * c2;  // s(l)
    R.col(2) = rl1.cross(R.col(1));                          // s(f)
    const Eigen::MatrixXd Srot = S3 * R;
    const Eigen::MatrixXd B = R.transpose() * A3;

    Eigen::VectorXd sf = Srot.col(2);
    // split the two localized-branch pair states into mu/nu factors
    std::array<Eigen::VectorXd, 2> loc_factor, ext_factor;
    for (int m = 0; m < 2; ++m) {
        Eigen::MatrixXd W(L, L);
        for (int j = 0; j < L; ++j)
            for (int k = 0; k < L; ++k) W(j, k) = B(m, j * L + k);
        PairSplit ps = split_symmetric_pair(W);
        Eigen::VectorXd a = ps.a.normalized();
        Eigen::VectorXd b = (ps.b.norm() > 1e-14) ? ps.b.normalized() : a;
        if (ipr_vector(a) >= ipr_vector(b)) { loc_factor[m] = a; ext_factor[m] = b; }
        else { loc_factor[m] = b; ext_factor[m] = a; }
    }
    rep.extended_state_overlaps = {std::abs(sf.dot(ext_factor[0])),
                                   std::abs(sf.dot(ext_factor[1])),
                                   std::abs(ext_factor[0].dot(ext_factor[1]))};

    Eigen::VectorXd phi = sf;
    sign_fix(phi);
    Eigen::MatrixXd chi = project_chi(psi3, phi);
    const double cn = chi.norm();
    if (cn < 1e-14) {
        rep.note = "projected chi vanished";
        return rep;
    }
    chi /= cn;
    rep.phi = phi;
    rep.chi = chi;
    rep.ipr_chi = ipr_two_particle(chi);
    rep.ipr_phi = ipr_vector(phi);
    rep.fidelity_reconstruction = tensor_fidelity3(psi3, phi, chi);

    const bool overlaps_ok =
        *std::min_element(rep.extended_state_overlaps.begin(),
                          rep.extended_state_overlaps.end()) > thresholds_.extended_overlap_min;
    if (overlaps_ok && rep.ipr_chi > thresholds_.ipr_chi_min_independent &&
        rep.ipr_phi < thresholds_.ipr_phi_max) {
        rep.state_class = StateClass::IndependentALL;
    } else {
        rep.note = "independent screening conditions failed";
    }
    return rep;
}

ClassificationReport Classifier::decompose_three_correlated(const SymmetricTensor& psi) const {
    ClassificationReport rep;
    const Eigen::MatrixXd psi3 = tensor_as_matrix(psi);
    const SvdResultReal sv = svd(psi3);
    const int nrec = static_cast<int>(std::min<Eigen::Index>(6, sv.singular_values.size()));
    rep.singular_values = sv.singular_values.head(nrec);

    const double s1 = sv.singular_values[0], s2 = sv.singular_values[1];
    if (s1 + s2 <= thresholds_.sv_sum_min) {
        rep.note = "singular-value pattern is not two-dominant";
        return rep;
    }

    const int L = psi.extent;
    Eigen::VectorXd u0 = sv.left_vectors.col(0), u1 = sv.left_vectors.col(1);
    const int loc = (ipr_vector(u0) >= ipr_vector(u1)) ? 0 : 1;
    Eigen::VectorXd sf = sv.left_vectors.col(1 - loc);
    // w^(l,f) rides with the localized single-particle state
    Eigen::MatrixXd W(L, L);
    for (int j = 0; j < L; ++j)
        for (int k = 0; k < L; ++k)
            W(j, k) = sv.singular_values[loc] * sv.right_vectors(j * L + k, loc);
    PairSplit ps = split_symmetric_pair(W);
    Eigen::VectorXd a = ps.a.normalized();
    Eigen::VectorXd b = (ps.b.norm() > 1e-14) ? ps.b.normalized() : a;
    const Eigen::VectorXd mu_f = (ipr_vector(a) >= ipr_vector(b)) ? b : a;
    rep.extended_state_overlaps = {std::abs(sf.dot(mu_f))};

    Eigen::VectorXd phi = sf;
    sign_fix(phi);
    Eigen::MatrixXd chi = project_chi(psi3, phi);
    const double cn = chi.norm();
    if (cn < 1e-14) {
        rep.note = "projected chi vanished";
        return rep;
    }
    chi /= cn;
    rep.phi = phi;
    rep.chi = chi;
    rep.ipr_chi = ipr_two_particle(chi);
    rep.ipr_phi = ipr_vector(phi);
    rep.fidelity_reconstruction = tensor_fidelity3(psi3, phi, chi);

    if (rep.extended_state_overlaps[0] > thresholds_.extended_overlap_min &&
        rep.ipr_chi > thresholds_.ipr_chi_min_correlated &&
        rep.ipr_phi < thresholds_.ipr_phi_max) {
        rep.state_class = StateClass::CorrelatedALL;
    } else {
        rep.note = "correlated screening conditions failed";
    }
    return rep;
}

ClassificationReport Classifier::classify_two_particle(const ManyBodyState& psi,
                                                       const SymmetricTensor& t) const {
    ClassificationReport rep;
    rep.energy = psi.energy;
    TwoParticleDecomposition d = decompose_two_particle(t);
    rep.singular_values = d.singular_values.head(std::min<Eigen::Index>(4, d.singular_values.size()));
    rep.phi = d.phi;
    rep.chi_vec = d.chi;
    rep.ipr_chi = ipr_vector(d.chi);
    rep.ipr_phi = ipr_vector(d.phi);
    if (d.ambiguous) {
        rep.note = "ambiguous factor assignment (equal IPRs)";
        return rep;
    }
    if (d.singular_values[0] + d.singular_values[1] <= thresholds_.sv_sum_min) return rep;
    if (rep.ipr_chi <= thresholds_.ipr_chi_min_correlated) return rep;
    if (rep.ipr_phi >= thresholds_.ipr_phi_max) return rep;
    if (is_edge_like(d.chi) || is_edge_like(d.phi)) {
        rep.note = "matches the non-interacting edge-state manifold";
        return rep;
    }
    if (edge_cell_heavy(d.chi.cwiseAbs2())) {
        rep.note = "chi is bound to a boundary unit cell";
        return rep;
    }
    {
        const ManyBodyState rec = reconstruct(d.phi, d.chi, psi.basis);
        rep.fidelity_reconstruction = std::abs(psi.coefficients.dot(rec.coefficients));
    }
    if (rep.fidelity_reconstruction <= thresholds_.fidelity_min) {
        rep.note = "reconstruction fidelity below threshold";
        return rep;
    }
    rep.fidelity_effective = refine_chi(psi, d.phi, params_).fidelity;
    rep.state_class = StateClass::OneLocalized;  // one localized + one extended particle
    return rep;
}

ClassificationReport Classifier::classify_three_particle(const ManyBodyState& psi,
                                                         const SymmetricTensor& t) const {
    // independent -> correlated -> one-localized; first pass wins
    ClassificationReport rep = decompose_three_independent(t);
    rep.energy = psi.energy;
    if (rep.state_class == StateClass::IndependentALL) {
        if (passes_validation(psi, rep)) return rep;
        rep.state_class = StateClass::NotSelfLocalized;
    }
    ClassificationReport repc = decompose_three_correlated(t);
    repc.energy = psi.energy;
    if (repc.state_class == StateClass::CorrelatedALL) {
        if (passes_validation(psi, repc)) return repc;
        repc.state_class = StateClass::NotSelfLocalized;
    }
    if (detect_one_localized(t, thresholds_)) {
        repc.state_class = StateClass::OneLocalized;
        repc.note = "one localized particle, two extended";
        return repc;
    }
    repc.note = repc.note.empty() ? rep.note : repc.note;
    return repc;
}

bool Classifier::passes_validation(const ManyBodyState& psi, ClassificationReport& rep) const {
    // edge exclusion on phi and on the natural orbitals of chi
    if (is_edge_like(*rep.phi)) {
        rep.note = "phi matches the non-interacting edge-state manifold";
        return false;
    }
    const Eigen::MatrixXd rho = *rep.chi * rep.chi->transpose();
    const EigenSystem orb = eigh(rho);
    for (Eigen::Index m = 0; m < orb.eigenvalues.size(); ++m) {
        if (orb.eigenvalues[m] < 0.2) continue;
        if (is_edge_like(orb.eigenvectors.col(m))) {
            rep.note = "chi matches the non-interacting edge-state manifold";
            return false;
        }
    }
    if (edge_cell_heavy(Eigen::VectorXd(rep.chi->cwiseAbs2().rowwise().sum()))) {
        rep.note = "chi is bound to a boundary unit cell";
        return false;
    }
    if (rep.fidelity_reconstruction <= thresholds_.fidelity_min) {
        rep.note = "reconstruction fidelity below threshold";
        return false;
    }
    // informational: best effective-Hamiltonian eigenstate chi'. Near-degenerate
    // dressed sites can hybridize chi', so this is reported, not gated on.
    rep.fidelity_effective = refine_chi(psi, *rep.phi, params_).fidelity;
    return true;
}

ClassificationReport Classifier::classify(const ManyBodyState& psi) const {
    const int N = psi.basis->particles();
    const SymmetricTensor t = tensor_from_vector(psi);
    if (N == 2) return classify_two_particle(psi, t);
    if (N == 3) return classify_three_particle(psi, t);
    throw ConfigError("Classifier::classify: N must be 2 or 3");
}

std::vector<FractionRow> fraction_scan(const std::vector<ScanPoint>& grid,
                                       const ModelParams& base,
                                       const ScreeningThresholds& thresholds, int threads) {
    std::vector<FractionRow> rows(grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t g = next.fetch_add(1); g < grid.size(); g = next.fetch_add(1)) {
            ModelParams p = base;
            p.U = grid[g].U;
            p.V = grid[g].V;
            p.xi = grid[g].xi;
            const Classifier cls(p, thresholds);
            const HamiltonianMatrix H = build_hamiltonian(p);
            const EigenSystem es = eigh(H.mat);
            FractionRow row;
            row.U = p.U;
            row.V = p.V;
            row.xi = p.xi;
            row.total = H.basis->size();
            for (Eigen::Index m = 0; m < es.eigenvalues.size(); ++m) {
                ManyBodyState st{H.basis, es.eigenvectors.col(m).cast<std::complex<double>>(),
                                 es.eigenvalues[m]};
                switch (cls.classify(st).state_class) {
                    case StateClass::IndependentALL: ++row.independent; break;
                    case StateClass::CorrelatedALL: ++row.correlated; break;
                    case StateClass::OneLocalized: ++row.one_localized; break;
                    default: break;
                }
            }
            rows[g] = row;
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return rows;
}

}  // namespace boseloc
