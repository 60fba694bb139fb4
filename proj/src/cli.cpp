#include "attackscore/cli.hpp"

#include <pthread.h>
#include <signal.h>

#include <algorithm>
#include <filesystem>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "attackscore/api_service.hpp"
#include "attackscore/assessment.hpp"
#include "attackscore/assessment_io.hpp"
#include "attackscore/config.hpp"
#include "attackscore/error.hpp"
#include "attackscore/io.hpp"
#include "attackscore/labels.hpp"
#include "attackscore/report.hpp"
#include "attackscore/stix.hpp"

namespace attackscore {

namespace {

namespace fs = std::filesystem;

struct CliConfig {
    std::string config_path;
    std::string catalog_path;
    std::string labels_path;
    std::optional<double> adjustment;
    std::string bands;
    std::string weights;
    std::string format = "text";
    std::string layer_version;
};

struct Loaded {
    LabeledCatalog catalog;
    ScoringConstants consts;
    OutputFormat format = OutputFormat::Text;
    LayerOptions layer;
    std::vector<std::string> label_diagnostics;
};

void require_readable(const fs::path& path, const char* what)
{
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) {
        throw Error(ErrorCode::Io, std::string(what) + " not found: " + path.string());
    }
}

Loaded load_inputs(const CliConfig& cfg, bool need_catalog = true)
{
    Loaded loaded;
    FileConfig file;
    if (!cfg.config_path.empty()) {
        require_readable(cfg.config_path, "config file");
        file = load_config_file(cfg.config_path);
    }

    ConstantsOverrides flags;
    flags.adjustment = cfg.adjustment;
    if (!cfg.bands.empty()) flags.band_edges = parse_band_edges(cfg.bands);
    if (!cfg.weights.empty()) flags.category_weights = parse_category_weights(cfg.weights);
    auto overrides = file.constants;
    overrides.merge(flags);
    loaded.consts = overrides.apply();

    auto format = parse_output_format(cfg.format);
    if (!format) throw Error(ErrorCode::Io, "unknown format '" + cfg.format + "'");
    loaded.format = *format;
    if (!cfg.layer_version.empty()) loaded.layer.layer_version = cfg.layer_version;

    fs::path catalog_path = cfg.catalog_path;
    if (catalog_path.empty() && file.catalog) catalog_path = *file.catalog;
    fs::path labels_path = cfg.labels_path;
    if (labels_path.empty() && file.labels) labels_path = *file.labels;

    if (!need_catalog) return loaded;
    if (catalog_path.empty()) {
        throw Error(ErrorCode::Io, "no catalog given (use --catalog or a config file)");
    }
    require_readable(catalog_path, "catalog");
    const auto catalog = load_stix_bundle(catalog_path);

    std::vector<TechniqueLabel> labels;
    if (!labels_path.empty()) {
        require_readable(labels_path, "label file");
        auto parsed = load_labels(labels_path);
        labels = std::move(parsed.labels);
        loaded.label_diagnostics = std::move(parsed.diagnostics);
    }
    loaded.catalog = resolve(catalog, labels);
    for (const auto& d : catalog.diagnostics) loaded.label_diagnostics.push_back(d);
    return loaded;
}

int exit_code_for(const Error& e)
{
    return e.code() == ErrorCode::Io ? kExitUsage : kExitDomain;
}

int cmd_catalog(const CliConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto loaded = load_inputs(cfg);
    const auto& lc = loaded.catalog;
    const auto& s = lc.stats();
    const auto n_tactics = lc.tactics().size();
    out << s.total << (s.total == 1 ? " technique, " : " techniques, ") << n_tactics
        << (n_tactics == 1 ? " tactic" : " tactics") << "\n";
    out << "labels: " << s.labeled << " curated, " << s.defaulted << " defaulted, " << s.excluded
        << " excluded\n";
    out << "constants: a=" << loaded.consts.adjustment()
        << " fingerprint=" << loaded.consts.fingerprint() << "\n";
    for (const auto& t : lc.tactics()) {
        out << "  " << std::left << std::setw(22) << t.shortname << std::setw(8)
            << (t.id.empty() ? "-" : t.id) << techniques_in_tactic(lc, t.shortname).size() << "\n";
    }
    for (const auto& d : loaded.label_diagnostics) err << "warning: " << d << "\n";
    for (const auto& d : lc.diagnostics()) err << "warning: " << d << "\n";
    return kExitOk;
}

int cmd_labels_lint(const CliConfig& cfg, std::ostream& out, std::ostream& err)
{
    if (cfg.labels_path.empty()) throw Error(ErrorCode::Io, "labels-lint needs --labels");
    require_readable(cfg.labels_path, "label file");
    const auto parsed = load_labels(cfg.labels_path);
    for (const auto& d : parsed.diagnostics) err << "warning: " << d << "\n";

    std::size_t unknown = 0;
    if (!cfg.catalog_path.empty()) {
        const auto loaded = load_inputs(cfg);
        unknown = loaded.catalog.diagnostics().size();
        for (const auto& d : loaded.catalog.diagnostics()) err << "warning: " << d << "\n";
    }
    out << parsed.labels.size() << " labels ok";
    if (!cfg.catalog_path.empty()) out << ", " << unknown << " not in catalog";
    out << "\n";
    return kExitOk;
}

int cmd_record(const CliConfig& cfg, const std::string& path, const std::string& technique,
               const std::string& tactic, const std::string& status_text, const std::string& note,
               const std::string& at, const std::string& target, std::ostream& out)
{
    const auto status = parse_status(status_text);
    if (!status) {
        throw Error(ErrorCode::InvalidArgument,
                    "status must be success or failure, got '" + status_text + "'", "status");
    }
    Timestamp observed = now_utc();
    if (!at.empty()) {
        auto t = parse_utc(at);
        if (!t) throw Error(ErrorCode::InvalidArgument, "--at must be YYYY-MM-DDTHH:MM:SSZ");
        observed = *t;
    }
    const auto loaded = load_inputs(cfg);

    io::FileLock lock(path);
    Assessment assessment;
    if (fs::exists(path)) {
        assessment = read_assessment(path);
    } else {
        auto name = target.empty() ? fs::path(path).stem().string() : target;
        assessment = new_assessment(name, observed);
    }
    assessment = record(std::move(assessment),
                        TechniqueExecution{technique, tactic, *status, observed, note},
                        loaded.catalog);
    write_assessment(path, assessment);
    out << "recorded " << technique << " " << tactic << " " << to_string(*status) << " ("
        << assessment.executions.size() << " executions)\n";
    return kExitOk;
}

int cmd_score(const CliConfig& cfg, const std::string& path, std::ostream& out)
{
    const auto loaded = load_inputs(cfg);
    require_readable(path, "assessment");
    const auto card = compute_scorecard(read_assessment(path), loaded.catalog, loaded.consts);
    out << render(card, loaded.catalog, loaded.format, loaded.layer);
    return kExitOk;
}

int cmd_serve(const CliConfig& cfg, const std::string& bind, const std::string& data_dir,
              std::ostream& err)
{
    auto loaded = load_inputs(cfg);
    const auto colon = bind.rfind(':');
    if (colon == std::string::npos) throw Error(ErrorCode::Io, "--bind must be host:port");
    const auto host = bind.substr(0, colon);
    int port = 0;
    try {
        port = std::stoi(bind.substr(colon + 1));
    } catch (const std::exception&) {
        throw Error(ErrorCode::Io, "invalid port in --bind " + bind);
    }

    // Signals are taken synchronously by this thread; server threads inherit
    // the mask.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    ApiService service(std::move(loaded.catalog), loaded.consts,
                       ServiceOptions{data_dir, loaded.layer});
    const int bound = service.bind(host, port);
    err << "listening on " << host << ":" << bound << " (data: " << data_dir << ")\n";
    err.flush();

    std::thread server([&] { service.run(); });
    int sig = 0;
    sigwait(&signals, &sig);
    service.stop();
    server.join();
    err << "stopped\n";
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Protection scoring for ATT&CK technique assessments", "attackscore"};
    app.require_subcommand(1);
    app.fallthrough();

    CliConfig cfg;
    app.add_option("--config", cfg.config_path, "JSON config file (paths and constants)");
    app.add_option("--catalog", cfg.catalog_path, "ATT&CK STIX 2.x bundle");
    app.add_option("--labels", cfg.labels_path, "Impact/Exploitability label file");
    app.add_option("--a", cfg.adjustment, "Graph adjustment constant");
    app.add_option("--bands", cfg.bands, "Category band edges, e.g. 20,40,60,80");
    app.add_option("--weights", cfg.weights, "Category weights, e.g. very_high=1,high=0.8");
    app.add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"text", "structured", "json", "layer"}));
    app.add_option("--layer-version", cfg.layer_version, "Navigator layer format version");

    auto* catalog_cmd = app.add_subcommand("catalog", "Show catalog and label counts");
    auto* lint_cmd = app.add_subcommand("labels-lint", "Validate a label file");

    std::string assessment_path, technique, tactic, status, note, at, target;
    auto* record_cmd = app.add_subcommand("record", "Append one technique execution");
    record_cmd->add_option("assessment", assessment_path, "Assessment file")->required();
    record_cmd->add_option("--technique", technique, "Technique id, e.g. T1135")->required();
    record_cmd->add_option("--tactic", tactic, "Tactic shortname, e.g. discovery")->required();
    record_cmd->add_option("--status", status, "success or failure")->required();
    record_cmd->add_option("--note", note, "Free-text note");
    record_cmd->add_option("--at", at, "Observation time (UTC, YYYY-MM-DDTHH:MM:SSZ)");
    record_cmd->add_option("--target", target, "Target name when creating the file");

    auto* score_cmd = app.add_subcommand("score", "Compute and render a scorecard");
    score_cmd->add_option("assessment", assessment_path, "Assessment file")->required();

    std::string bind = "127.0.0.1:8080", data_dir = "assessments";
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
    serve_cmd->add_option("--bind", bind, "host:port")->capture_default_str();
    serve_cmd->add_option("--data-dir", data_dir, "Assessment directory")->capture_default_str();
    if (const char* env = std::getenv("ATTACKSCORE_BIND")) bind = env;
    if (const char* env = std::getenv("ATTACKSCORE_DATA_DIR")) data_dir = env;

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*catalog_cmd) return cmd_catalog(cfg, out, err);
        if (*lint_cmd) return cmd_labels_lint(cfg, out, err);
        if (*record_cmd) {
            return cmd_record(cfg, assessment_path, technique, tactic, status, note, at, target, out);
        }
        if (*score_cmd) return cmd_score(cfg, assessment_path, out);
        if (*serve_cmd) return cmd_serve(cfg, bind, data_dir, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace attackscore
