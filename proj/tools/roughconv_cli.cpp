#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "roughconv/analysis.hpp"
#include "roughconv/config.hpp"
#include "roughconv/plot.hpp"
#include "roughconv/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace roughconv;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_override;
    std::string input_csv;
    std::optional<std::size_t> horizon;
    std::optional<double> resolution;
    std::optional<std::uint64_t> seed;
    bool plot = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_config) {
    auto* c = cmd->add_option("--config", o.config_path, "run configuration JSON");
    if (needs_config) c->required();
    cmd->add_option("--out", o.out_override, "output directory (overrides config and ROUGHCONV_OUT)");
    cmd->add_option("--horizon", o.horizon, "prefix length override");
    cmd->add_option("--resolution", o.resolution, "grid resolution override");
    cmd->add_option("--seed", o.seed, "seed override");
    cmd->add_flag("--plot", o.plot, "emit plot csv/svg next to the report");
}

RunConfig load_config(const CommonOpts& o) {
    RunConfig cfg = RunConfig::from_file(o.config_path);
    if (o.horizon) {
        if (*o.horizon < 1) throw ConfigError("horizon", "must be at least 1");
        cfg.horizon = *o.horizon;
    }
    if (o.resolution) {
        if (!(*o.resolution > 0)) throw ConfigError("resolution", "must be positive");
        cfg.resolution = *o.resolution;
    }
    if (o.seed) {
        cfg.seed = *o.seed;
        if (cfg.sequence.kind == SequenceSpec::Kind::RandomBounded) cfg.sequence.seed = *o.seed;
    }
    if (!o.input_csv.empty()) cfg.sequence = SequenceSpec::csv(o.input_csv);
    if (!o.out_override.empty()) {
        cfg.out_dir = o.out_override;
    } else if (const char* env = std::getenv("ROUGHCONV_OUT"); env && *env) {
        cfg.out_dir = env;
    }
    return cfg;
}

fs::path ensure_out_dir(const RunConfig& cfg) {
    fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    return dir;
}

void write_json(const fs::path& p, const json& j) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + p.string() + "' for writing");
    out << j.dump(2) << '\n';
}

void write_region_csv(const fs::path& p, const GridRegion& region) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + p.string() + "' for writing");
    region.to_csv(out);
}

json data_facts(const SequencePrefix& prefix) {
    json j;
    j["hash"] = prefix.data_hash();
    j["horizon"] = prefix.horizon;
    j["dim"] = prefix.dim;
    return j;
}

// Reports stay reproducible: everything identifying how the data reached the
// tool (paths, generator spec, seeds) goes to meta.json instead.
void write_meta(const fs::path& dir, const std::string& command, const RunConfig& cfg, double elapsed_ms) {
    json meta;
    meta["command"] = command;
    meta["sequence"] = cfg.sequence_json();
    meta["out_dir"] = cfg.out_dir;
    meta["seed"] = cfg.seed;
    meta["elapsed_ms"] = elapsed_ms;
    write_json(dir / "meta.json", meta);
}

// A region dominated by uncertain cells usually means the horizon or the
// ideal's thresholds cannot resolve the question at this resolution.
std::string region_status(const GridRegion& region) {
    std::size_t u = region.count(CellLabel::Uncertain);
    std::size_t total = region.cell_count();
    return total > 0 && 2 * u > total ? "warning" : "ok";
}

void warn_if_inconclusive(const json& report) {
    if (report.contains("status") && report["status"] == "warning")
        std::cerr << "warning: uncertain cells dominate the region; "
                     "raise the horizon or coarsen the resolution\n";
}

Box resolve_box(const RunConfig& cfg, const SequencePrefix& prefix, const IdealSpec& ideal, bool for_limit) {
    if (cfg.box) {
        if (cfg.box->dim() != prefix.dim) throw ConfigError("box", "dimension mismatch with the data");
        return *cfg.box;
    }
    if (for_limit) return auto_limit_box(prefix, ideal, *cfg.family, cfg.resolution).box;
    return auto_core_box(prefix, ideal, cfg.resolution).box;
}

int cmd_generate(const CommonOpts& o) {
    detail::StopWatch sw;
    RunConfig cfg = load_config(o);
    SequencePrefix prefix = generate(cfg.sequence, cfg.horizon);
    fs::path dir = ensure_out_dir(cfg);
    {
        std::ofstream out(dir / "sequence.csv", std::ios::binary);
        if (!out) throw std::runtime_error("cannot open '" + (dir / "sequence.csv").string() + "' for writing");
        write_csv(prefix, out);
    }
    json report;
    report["command"] = "generate";
    report["data"] = data_facts(prefix);
    write_json(dir / "report.json", report);
    write_meta(dir, "generate", cfg, sw.ms());
    std::cout << "wrote " << (dir / "sequence.csv").string() << " (" << prefix.horizon << " rows, dim "
              << prefix.dim << ", hash " << prefix.data_hash() << ")\n";
    return 0;
}

int cmd_cluster(const CommonOpts& o) {
    detail::StopWatch sw;
    RunConfig cfg = load_config(o);
    SequencePrefix prefix = generate(cfg.sequence, cfg.horizon);
    IdealSpec ideal = cfg.make_ideal();
    Box box = resolve_box(cfg, prefix, ideal, false);
    ClusterReport cluster = cluster_set(prefix, ideal, box, cfg.resolution, cfg.eps_schedule);

    fs::path dir = ensure_out_dir(cfg);
    json report;
    report["command"] = "cluster";
    report["params"] = cfg.analysis_echo();
    report["data"] = data_facts(prefix);
    report["cluster"] = cluster.summary_json();
    report["status"] = region_status(cluster.region);
    write_json(dir / "report.json", report);
    write_region_csv(dir / "cluster_region.csv", cluster.region);
    if (o.plot) emit_plot_data(cluster.region, (dir / "cluster_plot").string());
    write_meta(dir, "cluster", cfg, sw.ms());
    warn_if_inconclusive(report);
    std::cout << "cluster set: " << cluster.region.count(CellLabel::In) << " in, "
              << cluster.region.count(CellLabel::Uncertain) << " uncertain of " << cluster.region.cell_count()
              << " cells -> " << (dir / "report.json").string() << "\n";
    return 0;
}

int cmd_limitset(const CommonOpts& o, const std::string& method) {
    detail::StopWatch sw;
    RunConfig cfg = load_config(o);
    if (!cfg.family) throw ConfigError("family", "required for limitset");
    SequencePrefix prefix = generate(cfg.sequence, cfg.horizon);
    IdealSpec ideal = cfg.make_ideal();
    Box box = resolve_box(cfg, prefix, ideal, true);

    const bool want_direct = method != "via";
    const bool want_via = method != "direct" && cfg.family->closed();
    if (method == "via" && !cfg.family->closed())
        throw ConfigError("family", "characterization route requires a closed family");

    fs::path dir = ensure_out_dir(cfg);
    json report;
    report["command"] = "limitset";
    report["params"] = cfg.analysis_echo();
    report["data"] = data_facts(prefix);

    std::optional<LimitReport> direct, via;
    std::optional<ClusterReport> cluster;
    if (want_direct) {
        direct = rough_limit_direct(prefix, ideal, *cfg.family, box, cfg.resolution);
        report["direct"] = direct->summary_json();
        write_region_csv(dir / "limit_direct.csv", direct->region);
    }
    if (want_via) {
        cluster = cluster_set(prefix, ideal, box, cfg.resolution, cfg.eps_schedule);
        if (cluster->nonempty()) {
            via = rough_limit_via_clusters(*cluster, *cfg.family, box, cfg.resolution);
            report["via"] = via->summary_json();
            write_region_csv(dir / "limit_via.csv", via->region);
        } else {
            report["via"] = {{"object", "limit_set"}, {"method", "via_clusters"}, {"skipped", "empty cluster set"}};
        }
    }
    if (direct && via) {
        auto conflicts = detail::banded_conflicts(direct->region.labels, via->region.labels);
        json agree;
        agree["conflicts"] = conflicts.size();
        agree["agree"] = conflicts.empty();
        report["agreement"] = agree;
    }

    const GridRegion& shown = direct ? direct->region : via->region;
    report["status"] = region_status(shown);
    write_json(dir / "report.json", report);
    if (o.plot)
        emit_plot_data(shown, (dir / "limit_plot").string(),
                       cluster ? cluster->crisp_in_centers() : std::vector<Point>{});
    write_meta(dir, "limitset", cfg, sw.ms());
    warn_if_inconclusive(report);
    std::cout << "limit set (" << (direct && via ? "both methods" : method) << "): " << shown.count(CellLabel::In)
              << " in cells -> " << (dir / "report.json").string() << "\n";
    return 0;
}

int cmd_core(const CommonOpts& o, double cert_radius, bool with_cert) {
    detail::StopWatch sw;
    RunConfig cfg = load_config(o);
    SequencePrefix prefix = generate(cfg.sequence, cfg.horizon);
    IdealSpec ideal = cfg.make_ideal();
    Box box = resolve_box(cfg, prefix, ideal, false);
    ClusterReport cluster = cluster_set(prefix, ideal, box, cfg.resolution, cfg.eps_schedule);
    if (!cluster.nonempty()) throw std::runtime_error("core undefined for empty cluster set");
    GridRegion core = core_set(cluster);

    fs::path dir = ensure_out_dir(cfg);
    json report;
    report["command"] = "core";
    report["params"] = cfg.analysis_echo();
    report["data"] = data_facts(prefix);
    report["cluster"] = cluster.summary_json();
    json cj;
    cj["object"] = "core";
    cj["region"] = core.summary_json();
    report["core"] = cj;
    if (with_cert) {
        Certificate cert = nonemptiness_certificate(cluster, cert_radius);
        json j;
        j["radius"] = cert_radius;
        j["nonempty"] = cert.nonempty;
        j["witness"] = std::vector<double>(cert.witness.begin(), cert.witness.end());
        j["meb_radius"] = cert.meb_radius;
        j["gap"] = cert.gap;
        report["certificate"] = j;
    }
    report["status"] = region_status(core);
    write_json(dir / "report.json", report);
    write_region_csv(dir / "core_region.csv", core);
    if (o.plot) emit_plot_data(core, (dir / "core_plot").string(), cluster.crisp_in_centers());
    write_meta(dir, "core", cfg, sw.ms());
    warn_if_inconclusive(report);
    std::cout << "core: " << core.count(CellLabel::In) << " in cells -> " << (dir / "report.json").string()
              << "\n";
    return 0;
}

int cmd_meb(const std::string& input, const std::string& out_override) {
    SequencePrefix pts = load_csv(input);
    std::vector<Point> v;
    v.reserve(pts.horizon);
    for (std::size_t i = 0; i < pts.horizon; ++i) {
        auto s = pts.point(i);
        v.emplace_back(s.begin(), s.end());
    }
    Ball b = minimal_enclosing_ball(v);

    auto round5 = [](double x) { return std::round(x * 1e5) / 1e5; };
    std::string center = "(";
    for (std::size_t a = 0; a < b.center.size(); ++a) {
        if (a) center += ", ";
        center += format_double(round5(b.center[a]));
    }
    center += ")";
    std::cout << "center " << center << " radius " << format_double(round5(b.radius)) << "\n";

    std::string dir = out_override;
    if (dir.empty())
        if (const char* env = std::getenv("ROUGHCONV_OUT"); env && *env) dir = env;
    if (!dir.empty()) {
        fs::create_directories(dir);
        json j;
        j["center"] = std::vector<double>(b.center.begin(), b.center.end());
        j["radius"] = b.radius;
        j["points"] = pts.horizon;
        write_json(fs::path(dir) / "meb.json", j);
    }
    return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, const std::string& out_override, bool quiet) {
    std::vector<SuiteResult> results = run_suites(suite, seed);
    bool all_ok = true;
    json out = json::array();
    for (const auto& sr : results) {
        for (const auto& c : sr.cases) {
            bool ok = c.as_expected();
            all_ok = all_ok && ok;
            if (!quiet || !ok)
                std::cout << (ok ? "    ok  " : "  FAIL  ") << sr.suite << "/" << c.id << ": "
                          << check_status_name(c.report.status)
                          << (ok ? "" : " (expected " + std::string(check_status_name(c.expected)) + ")")
                          << "\n";
        }
        out.push_back(sr.to_json());
    }
    std::string dir = out_override;
    if (dir.empty())
        if (const char* env = std::getenv("ROUGHCONV_OUT"); env && *env) dir = env;
    if (!dir.empty()) {
        fs::create_directories(dir);
        json top;
        top["suites"] = out;
        top["all_expected"] = all_ok;
        write_json(fs::path(dir) / "verify_report.json", top);
    }
    std::size_t total = 0;
    for (const auto& sr : results) total += sr.cases.size();
    std::cout << (all_ok ? "verify: all " : "verify: NOT all ") << total << " checks behaved as expected\n";
    return all_ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-prefix analysis of rough ideal convergence"};
    app.require_subcommand(1);

    CommonOpts gen_o, clu_o, lim_o, core_o;
    std::string method = "both";
    double cert_radius = 0;
    bool with_cert = false;
    std::string meb_input, meb_out;
    std::string suite = "golden";
    std::uint64_t verify_seed = 20240915;
    std::string verify_out;
    bool verify_quiet = false;

    auto* gen = app.add_subcommand("generate", "materialize a sequence prefix to csv");
    add_common(gen, gen_o, true);

    auto* clu = app.add_subcommand("cluster", "cluster set of a prefix on a grid");
    add_common(clu, clu_o, true);
    clu->add_option("--input", clu_o.input_csv, "read the prefix from csv instead of the config spec");

    auto* lim = app.add_subcommand("limitset", "rough limit set, by definition and via cluster points");
    add_common(lim, lim_o, true);
    lim->add_option("--input", lim_o.input_csv, "read the prefix from csv instead of the config spec");
    lim->add_option("--method", method, "direct | via | both")
        ->check(CLI::IsMember({"direct", "via", "both"}));

    auto* cor = app.add_subcommand("core", "convex core of the cluster set");
    add_common(cor, core_o, true);
    cor->add_option("--input", core_o.input_csv, "read the prefix from csv instead of the config spec");
    cor->add_option("--certify", cert_radius, "also certify ball-family nonemptiness at this radius")
        ->each([&](const std::string&) { with_cert = true; });

    auto* meb = app.add_subcommand("meb", "minimal enclosing ball of a point csv");
    meb->add_option("--input", meb_input, "point csv, one point per row")->required();
    meb->add_option("--out", meb_out, "also write meb.json into this directory");

    auto* ver = app.add_subcommand("verify", "run the property-check suites");
    ver->add_option("--suite", suite, "golden | random | all")
        ->check(CLI::IsMember({"golden", "random", "all"}));
    ver->add_option("--seed", verify_seed, "base seed for the random suite");
    ver->add_option("--out", verify_out, "write verify_report.json into this directory");
    ver->add_flag("--quiet", verify_quiet, "print only unexpected outcomes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) return cmd_generate(gen_o);
        if (clu->parsed()) return cmd_cluster(clu_o);
        if (lim->parsed()) return cmd_limitset(lim_o, method);
        if (cor->parsed()) return cmd_core(core_o, cert_radius, with_cert);
        if (meb->parsed()) return cmd_meb(meb_input, meb_out);
        if (ver->parsed()) return cmd_verify(suite, verify_seed, verify_out, verify_quiet);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
