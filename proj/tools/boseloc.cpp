#include <complex>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "boseloc/bloch.hpp"
#include "boseloc/config.hpp"
#include "boseloc/detector.hpp"
#include "boseloc/dynamics.hpp"
#include "boseloc/io.hpp"
#include "boseloc/model.hpp"
#include "boseloc/observables.hpp"
#include "boseloc/spectral.hpp"
#include "boseloc/spectstats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace boseloc;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::string format = "csv";
    int threads = 0;  // 0 = resolve from env / default 1
};

int resolve_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("BOSELOC_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

void check_format(const std::string& fmt) {
    if (fmt != "csv" && fmt != "json")
        throw ConfigError("unsupported --format '" + fmt + "' (use csv or json)");
}

json report_to_json(const ClassificationReport& rep) {
    json j;
    j["energy"] = rep.energy;
    j["class"] = to_string(rep.state_class);
    j["ipr_chi"] = rep.ipr_chi;
    j["ipr_phi"] = rep.ipr_phi;
    j["fidelity_reconstruction"] = rep.fidelity_reconstruction;
    j["fidelity_effective"] = rep.fidelity_effective;
    j["singular_values"] = std::vector<double>(
        rep.singular_values.data(), rep.singular_values.data() + rep.singular_values.size());
    j["extended_state_overlaps"] = rep.extended_state_overlaps;
    if (!rep.note.empty()) j["note"] = rep.note;
    if (rep.phi)
        j["phi"] = std::vector<double>(rep.phi->data(), rep.phi->data() + rep.phi->size());
    return j;
}

int cmd_spectrum(const CommonArgs& args) {
    const Config cfg = Config::from_file(args.config_path);
    ModelParams params = model_from_config(cfg);
    params.validate();
    const bool dump_vectors = cfg.get_bool("spectrum.eigenvectors", false);
    const HamiltonianMatrix H = build_hamiltonian(params);
    const EigenSystem es = eigh(H.mat);
    ensure_directory(args.out_dir);
    if (args.format == "json") {
        json j;
        j["L"] = params.L;
        j["N"] = params.N;
        j["eigenvalues"] = std::vector<double>(
            es.eigenvalues.data(), es.eigenvalues.data() + es.eigenvalues.size());
        write_text_file(fs::path(args.out_dir) / "eigenvalues.json", j.dump(2) + "\n");
    } else {
        CsvWriter w(fs::path(args.out_dir) / "eigenvalues.csv", {"index", "energy"});
        for (Eigen::Index m = 0; m < es.eigenvalues.size(); ++m)
            w.row({std::to_string(m), format_g(es.eigenvalues[m])});
    }
    if (dump_vectors) {
        CsvWriter w(fs::path(args.out_dir) / "eigenvectors.csv", {"state", "basis_index", "amplitude"});
        for (Eigen::Index m = 0; m < es.eigenvectors.cols(); ++m)
            for (Eigen::Index a = 0; a < es.eigenvectors.rows(); ++a)
                w.row({std::to_string(m), std::to_string(a), format_g(es.eigenvectors(a, m))});
    }
    return 0;
}

int cmd_classify(const CommonArgs& args) {
    const Config cfg = Config::from_file(args.config_path);
    ModelParams params = model_from_config(cfg);
    params.validate();
    const ScreeningThresholds thresholds = thresholds_from_config(cfg);
    const HamiltonianMatrix H = build_hamiltonian(params);
    const EigenSystem es = eigh(H.mat);
    const Classifier cls(params, thresholds);
    ensure_directory(args.out_dir);

    std::string lines;
    std::size_t counts[3] = {0, 0, 0};  // independent, correlated, one_localized
    for (Eigen::Index m = 0; m < es.eigenvalues.size(); ++m) {
        const ManyBodyState st{H.basis, es.eigenvectors.col(m).cast<std::complex<double>>(),
                               es.eigenvalues[m]};
        const ClassificationReport rep = cls.classify(st);
        if (rep.state_class == StateClass::IndependentALL) ++counts[0];
        if (rep.state_class == StateClass::CorrelatedALL) ++counts[1];
        if (rep.state_class == StateClass::OneLocalized) ++counts[2];
        lines += report_to_json(rep).dump() + "\n";
    }
    write_text_file(fs::path(args.out_dir) / "classification.jsonl", lines);

    json summary;
    summary["total"] = es.eigenvalues.size();
    summary["independent"] = counts[0];
    summary["correlated"] = counts[1];
    summary["one_localized"] = counts[2];
    summary["fraction_independent"] = static_cast<double>(counts[0]) / es.eigenvalues.size();
    summary["fraction_correlated"] = static_cast<double>(counts[1]) / es.eigenvalues.size();
    write_text_file(fs::path(args.out_dir) / "summary.json", summary.dump(2) + "\n");
    return 0;
}

std::vector<double> axis_values(const Config& cfg, const std::string& key, double fallback) {
    if (cfg.has(key)) return cfg.get_doubles(key);
    return {fallback};
}

int cmd_scan(const CommonArgs& args) {
    const Config cfg = Config::from_file(args.config_path);
    ModelParams base = model_from_config(cfg);
    base.validate();
    const ScreeningThresholds thresholds = thresholds_from_config(cfg);
    const std::vector<double> Us = axis_values(cfg, "scan.U_values", base.U);
    const std::vector<double> Vs = axis_values(cfg, "scan.V_values", base.V);
    const std::vector<double> xis = axis_values(cfg, "scan.xi_values", base.xi);
    std::vector<ScanPoint> grid;
    for (double U : Us)
        for (double V : Vs)
            for (double xi : xis) grid.push_back({U, V, xi});
    const std::vector<FractionRow> rows =
        fraction_scan(grid, base, thresholds, resolve_threads(args.threads));
    ensure_directory(args.out_dir);
    if (args.format == "json") {
        json j = json::array();
        for (const FractionRow& r : rows)
            j.push_back({{"U", r.U},
                         {"V", r.V},
                         {"xi", r.xi},
                         {"total", r.total},
                         {"independent", r.independent},
                         {"correlated", r.correlated},
                         {"one_localized", r.one_localized}});
        write_text_file(fs::path(args.out_dir) / "fractions.json", j.dump(2) + "\n");
    } else {
        CsvWriter w(fs::path(args.out_dir) / "fractions.csv",
                    {"U", "V", "xi", "total", "independent", "correlated", "one_localized"});
        for (const FractionRow& r : rows)
            w.row({format_g(r.U), format_g(r.V), format_g(r.xi), std::to_string(r.total),
                   std::to_string(r.independent), std::to_string(r.correlated),
                   std::to_string(r.one_localized)});
    }
    return 0;
}

int cmd_rstats(const CommonArgs& args) {
    const Config cfg = Config::from_file(args.config_path);
    EnsembleConfig ec = EnsembleConfig::defaults(cfg.get_double("rstats.U", 50.0));
    ec.params = model_from_config(cfg, ec.params);
    ec.thresholds = thresholds_from_config(cfg, ec.thresholds);
    if (cfg.has("rstats.xi_centers")) ec.xi_centers = cfg.get_doubles("rstats.xi_centers");
    ec.window_halfwidth = cfg.get_double("rstats.window_halfwidth", ec.window_halfwidth);
    ec.sample_step = cfg.get_double("rstats.sample_step", ec.sample_step);
    ec.max_samples = static_cast<std::size_t>(cfg.get_int("rstats.max_samples", 0));
    ec.max_xi_points = static_cast<std::size_t>(cfg.get_int("rstats.max_xi_points", 0));
    ec.validate();
    const bool exclude = cfg.get_bool("rstats.exclude_gap_edges", true);
    const int gap_count = cfg.get_int("rstats.gap_count", 2);
    const int bins = cfg.get_int("rstats.bins", 20);

    const std::vector<Eigen::MatrixXd> ensemble =
        build_ensemble(ec, resolve_threads(args.threads));
    if (ensemble.empty()) throw NumericalError("rstats: empty ensemble, nothing to aggregate");
    const SpacingStatistics st = aggregate(ensemble, exclude, gap_count, bins);

    ensure_directory(args.out_dir);
    CsvWriter w(fs::path(args.out_dir) / "histogram.csv", {"r_low", "r_high", "density"});
    for (int b = 0; b < st.densities.size(); ++b)
        w.row({format_g(st.bin_edges[b]), format_g(st.bin_edges[b + 1]),
               format_g(st.densities[b])});
    json summary;
    summary["mean_r"] = st.mean_r;
    summary["samples"] = ensemble.size();
    summary["r_count"] = st.r_values.size();
    summary["excluded"] = st.excluded_count;
    write_text_file(fs::path(args.out_dir) / "summary.json", summary.dump(2) + "\n");
    return 0;
}

int cmd_bloch(const CommonArgs& args) {
    const Config cfg = Config::from_file(args.config_path);
    ModelParams params = model_from_config(cfg);
    const BandStructure bs = band_structure(params);
    ensure_directory(args.out_dir);
    CsvWriter w(fs::path(args.out_dir) / "bands.csv", {"k", "band", "energy"});
    for (int m = 0; m < bs.momentum_count(); ++m)
        for (int b = 0; b < bs.q; ++b)
            w.row({format_g(bs.momenta[m]), std::to_string(b), format_g(bs.bands(b, m))});

    if (cfg.get_bool("bloch.project", false)) {
        // classify the interacting open-boundary spectrum and project each
        // accepted extended state onto the Bloch bands
        ModelParams ip = params;
        ip.boundary = Boundary::Open;
        ip.validate();
        const ScreeningThresholds thresholds = thresholds_from_config(cfg);
        const HamiltonianMatrix H = build_hamiltonian(ip);
        const EigenSystem es = eigh(H.mat);
        const Classifier cls(ip, thresholds);
        CsvWriter pw(fs::path(args.out_dir) / "projections.csv",
                     {"energy", "band", "k", "weight", "standing_wave_score",
                      "middle_band_weight"});
        for (Eigen::Index m = 0; m < es.eigenvalues.size(); ++m) {
            const ManyBodyState st{H.basis,
                                   es.eigenvectors.col(m).cast<std::complex<double>>(),
                                   es.eigenvalues[m]};
            const ClassificationReport rep = cls.classify(st);
            if (rep.state_class == StateClass::NotSelfLocalized || !rep.phi) continue;
            const Eigen::MatrixXd wts = bloch_projection(*rep.phi, bs);
            const double sws = standing_wave_score(wts, bs);
            const double mbw = middle_band_weight(wts);
            for (int mi = 0; mi < bs.momentum_count(); ++mi)
                for (int b = 0; b < bs.q; ++b)
                    pw.row({format_g(rep.energy), std::to_string(b), format_g(bs.momenta[mi]),
                            format_g(wts(b, mi)), format_g(sws), format_g(mbw)});
        }
    }
    return 0;
}

int cmd_protocol(const CommonArgs& args) {
    const Config cfg = Config::from_file(args.config_path);
    ModelParams base = model_from_config(cfg);
    base.validate();
    const std::string kind_name = cfg.get("protocol.kind", "correlated");
    ProtocolKind kind;
    if (kind_name == "correlated")
        kind = ProtocolKind::Correlated;
    else if (kind_name == "independent")
        kind = ProtocolKind::Independent;
    else
        throw ConfigError("protocol.kind must be 'correlated' or 'independent'");

    ProtocolSchedule sched = ProtocolSchedule::defaults(kind);
    sched.T1 = cfg.get_double("protocol.T1", sched.T1);
    sched.T2 = cfg.get_double("protocol.T2", sched.T2);
    sched.T3 = cfg.get_double("protocol.T3", sched.T3);
    sched.dt = cfg.get_double("protocol.dt", sched.dt);
    sched.walk_start_site = cfg.get_int("protocol.walk_start_site", sched.walk_start_site);
    sched.VA_initial = cfg.get_double("protocol.VA_initial", sched.VA_initial);
    if (cfg.has("protocol.VA_final")) sched.VA_final = cfg.get_double("protocol.VA_final", 0.0);
    sched.sample_every = cfg.get_int("protocol.sample_every", sched.sample_every);
    if (cfg.has("protocol.ramp_nodes")) {
        const std::vector<double> flat = cfg.get_doubles("protocol.ramp_nodes");
        if (flat.size() < 4 || flat.size() % 2 != 0)
            throw ConfigError("protocol.ramp_nodes needs an even number (>= 4) of entries");
        sched.ramp_nodes.clear();
        for (std::size_t i = 0; i < flat.size(); i += 2)
            sched.ramp_nodes.push_back({flat[i], flat[i + 1]});
    }
    sched.validate();

    const EvolutionRecord rec = run_protocol(kind, sched, base);
    const ExtendedLattice lat = make_extended(kind, base);
    const ScreeningThresholds thresholds = thresholds_from_config(cfg);
    const std::vector<ProjectionEntry> table =
        project_onto_initial_eigenstates(rec.state_at_T2, lat, thresholds);
    double on_selfloc = 0.0;
    for (const ProjectionEntry& e : table)
        if (e.label != StateClass::NotSelfLocalized) on_selfloc += e.probability;

    ensure_directory(args.out_dir);
    {
        CsvWriter w(fs::path(args.out_dir) / "density.csv", {"t", "site", "density"});
        for (std::size_t i = 0; i < rec.times.size(); ++i)
            for (Eigen::Index j = 0; j < rec.densities[i].size(); ++j)
                w.row({format_g(rec.times[i]), std::to_string(j + 1),
                       format_g(rec.densities[i][j])});
    }
    {
        CsvWriter w(fs::path(args.out_dir) / "projection.csv",
                    {"energy", "probability", "class"});
        for (const ProjectionEntry& e : table)
            w.row({format_g(e.energy), format_g(e.probability), to_string(e.label)});
    }
    json summary;
    summary["transfer_efficiency"] = rec.transfer_efficiency;
    summary["retention"] = rec.retention;
    summary["projection_on_selflocalized"] = on_selfloc;
    summary["final_norm"] = rec.norms.back();
    write_text_file(fs::path(args.out_dir) / "summary.json", summary.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bose-Hubbard superlattice self-localization toolkit"};
    app.require_subcommand(1);

    CommonArgs args;
    int (*handler)(const CommonArgs&) = nullptr;
    const std::vector<std::pair<std::string, int (*)(const CommonArgs&)>> commands = {
        {"spectrum", &cmd_spectrum}, {"classify", &cmd_classify}, {"scan", &cmd_scan},
        {"rstats", &cmd_rstats},     {"bloch", &cmd_bloch},       {"protocol", &cmd_protocol}};
    for (const auto& [name, fn] : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", args.config_path, "run configuration file")->required();
        sub->add_option("--out", args.out_dir, "output directory");
        sub->add_option("--format", args.format, "csv or json");
        sub->add_option("--threads", args.threads, "worker count (env BOSELOC_THREADS)");
        sub->callback([&handler, fn = fn] { handler = fn; });
    }

    try {
        app.parse(argc, argv);
        check_format(args.format);
        return handler(args);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 4;
    }
}
