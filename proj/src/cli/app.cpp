#include "macrovar/cli.hpp"

#include "macrovar/error.hpp"
#include "macrovar/kernels.hpp"
#include "macrovar/pipeline.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

namespace macrovar {

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string config;
    std::string out;
    std::string format = "text";
    std::vector<std::string> samples;
    std::optional<int> lags;
    std::optional<int> max_lags;
    std::optional<int> reps;
    std::optional<std::uint64_t> seed;
    std::optional<int> horizon;
    std::optional<std::string> shock;
    std::optional<unsigned> threads;
    // fetch
    std::string series_id;
    std::string base_url = kDefaultFetchBase;
    std::string output_file;
    int timeout = 30;
};

struct Context {
    PipelineConfig cfg;
    fs::path out_dir;
};

std::uint64_t parse_seed(const std::string& text, const char* what) {
    std::uint64_t v = 0;
    std::size_t used = 0;
    try {
        v = std::stoull(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw Error(Errc::config, fmt::format("{}: '{}' is not a valid seed", what, text));
    return v;
}

// Flags override the environment, which overrides the config file.
Context resolve(const Options& o) {
    Context c{load_config(o.config), {}};
    if (o.lags) {
        if (*o.lags < 1) throw Error(Errc::config, "--lags must be >= 1");
        c.cfg.var.lags = *o.lags;
    }
    if (o.max_lags) {
        if (*o.max_lags < 1) throw Error(Errc::config, "--max-lags must be >= 1");
        c.cfg.lag_select_max = *o.max_lags;
    }
    if (const char* env = std::getenv("MACROVAR_SEED"); env && *env) c.cfg.irf.seed = parse_seed(env, "MACROVAR_SEED");
    if (o.seed) c.cfg.irf.seed = *o.seed;
    if (o.reps) {
        if (*o.reps < 100) throw Error(Errc::config, "--reps must be >= 100");
        c.cfg.irf.bootstrap_reps = *o.reps;
    }
    if (o.horizon) {
        if (*o.horizon < 0) throw Error(Errc::config, "--horizon must be >= 0");
        c.cfg.irf.horizon = *o.horizon;
    }
    if (o.shock) c.cfg.irf.shock_size = *o.shock == "unit" ? ShockSize::unit : ShockSize::one_sd;
    if (o.threads) c.cfg.irf.threads = *o.threads;
    if (!o.out.empty()) c.cfg.output_dir = o.out;
    c.out_dir = c.cfg.output_dir;
    fs::create_directories(c.out_dir);
    write_text_file(c.out_dir / "resolved_config.yaml", render_config(c.cfg));
    return c;
}

std::vector<SampleRange> selected_samples(const PipelineConfig& cfg, const std::vector<std::string>& filter) {
    auto all = cfg.samples();
    if (filter.empty()) return all;
    std::vector<SampleRange> out;
    for (const auto& name : filter) {
        const auto it = std::find_if(all.begin(), all.end(), [&](const SampleRange& s) { return s.label == name; });
        if (it == all.end()) throw Error(Errc::config, fmt::format("--samples: unknown sample '{}'", name));
        out.push_back(*it);
    }
    return out;
}

VarSpec pipeline_var_spec(const PipelineConfig& cfg) { return cfg.var; }

int cmd_unitroot(const Options& o, std::ostream& out) {
    const Context c = resolve(o);
    const auto rows = unitroot_table(c.cfg);
    out << (o.format == "csv" ? render_unitroot_csv(rows) : render_unitroot_text(rows, c.cfg));
    return 0;
}

int cmd_lagselect(const Options& o, std::ostream& out) {
    const Context c = resolve(o);
    const Dataset d = assemble(c.cfg);
    const Dataset ordered = c.cfg.var.ordering.empty() ? d : d.reordered(c.cfg.var.ordering);
    const auto sel = select_lag(ordered, c.cfg.lag_select_max, c.cfg.var.include_constant);
    out << (o.format == "csv" ? render_lagselect_csv(sel) : render_lagselect_text(sel, c.cfg.var.lags));
    return 0;
}

int cmd_granger(const Options& o, std::ostream& out) {
    const Context c = resolve(o);
    const Dataset d = assemble(c.cfg);
    const auto samples = selected_samples(c.cfg, o.samples);
    const auto rows = granger_table(d, pipeline_var_spec(c.cfg), samples, c.cfg.shock().name, c.cfg.granger_mode);
    out << (o.format == "csv" ? render_granger_csv(rows) : render_granger_text(rows, samples));
    return 0;
}

std::string irf_summary(const IrfResult& irf, const PipelineConfig& cfg) {
    const auto& shock = cfg.shock().name;
    const auto s = static_cast<Eigen::Index>(std::find(irf.names.begin(), irf.names.end(), shock) - irf.names.begin());
    std::string out = fmt::format("Responses to a {} {} shock", shock_size_name(irf.spec.shock_size), shock);
    if (irf.has_bands())
        out += fmt::format(" ({:.0f}% percentile bands, {} replications used, {} skipped)\n", 100.0 * irf.spec.ci_level,
                           irf.reps_used, irf.reps_failed);
    else
        out += " (point estimates)\n";
    out += fmt::format("{:>3}", "h");
    for (std::size_t r = 0; r < irf.names.size(); ++r)
        if (static_cast<Eigen::Index>(r) != s) out += fmt::format("  {:>34}", irf.names[r]);
    out += '\n';
    for (std::size_t h = 0; h < irf.point.size(); ++h) {
        out += fmt::format("{:>3}", h);
        for (std::size_t r = 0; r < irf.names.size(); ++r) {
            if (static_cast<Eigen::Index>(r) == s) continue;
            const auto ri = static_cast<Eigen::Index>(r);
            if (irf.has_bands())
                out += fmt::format("  {:>10.5f} [{:>10.5f}, {:>10.5f}]", irf.point[h](ri, s), irf.lower[h](ri, s),
                                   irf.upper[h](ri, s));
            else
                out += fmt::format("  {:>34.5f}", irf.point[h](ri, s));
        }
        out += '\n';
    }
    return out;
}

IrfResult run_irf(const PipelineConfig& cfg) {
    const Dataset d = assemble(cfg);
    return bootstrap_bands(d, pipeline_var_spec(cfg), cfg.irf);
}

int cmd_irf(const Options& o, std::ostream& out) {
    const Context c = resolve(o);
    const IrfResult irf = run_irf(c.cfg);
    const IrfFiles files = write_irf_outputs(irf, c.cfg, c.out_dir);
    out << irf_summary(irf, c.cfg);
    for (std::size_t i = 0; i < files.csv.size(); ++i)
        out << "wrote " << files.csv[i].string() << "\nwrote " << files.svg[i].string() << '\n';
    return 0;
}

int cmd_report(const Options& o, std::ostream& out) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    const Context c = resolve(o);
    nlohmann::ordered_json stages = nlohmann::ordered_json::array();
    auto stage = [&](const char* name, auto&& fn) {
        const auto s0 = clock::now();
        out << "[" << name << "]\n";
        fn();
        stages.push_back({{"stage", name},
                          {"seconds", std::chrono::duration<double>(clock::now() - s0).count()}});
    };

    stage("unitroot", [&] {
        const auto rows = unitroot_table(c.cfg);
        const std::string text = render_unitroot_text(rows, c.cfg);
        write_text_file(c.out_dir / "unitroot.txt", text);
        write_text_file(c.out_dir / "unitroot.csv", render_unitroot_csv(rows));
        out << text;
    });
    const Dataset d = assemble(c.cfg);
    const Dataset ordered = c.cfg.var.ordering.empty() ? d : d.reordered(c.cfg.var.ordering);
    stage("lagselect", [&] {
        const auto sel = select_lag(ordered, c.cfg.lag_select_max, c.cfg.var.include_constant);
        const std::string text = render_lagselect_text(sel, c.cfg.var.lags);
        write_text_file(c.out_dir / "lagselect.txt", text);
        write_text_file(c.out_dir / "lagselect.csv", render_lagselect_csv(sel));
        out << text;
    });
    stage("granger", [&] {
        const auto samples = c.cfg.samples();
        const auto rows = granger_table(d, pipeline_var_spec(c.cfg), samples, c.cfg.shock().name, c.cfg.granger_mode);
        const std::string text = render_granger_text(rows, samples);
        write_text_file(c.out_dir / "granger.txt", text);
        write_text_file(c.out_dir / "granger.csv", render_granger_csv(rows));
        out << text;
    });
    stage("irf", [&] {
        const IrfResult irf = run_irf(c.cfg);
        write_irf_outputs(irf, c.cfg, c.out_dir);
        const VarModel m = fit_var(d, pipeline_var_spec(c.cfg));
        IrfSpec unit = c.cfg.irf;
        unit.shock_size = unit.shock_size == ShockSize::unit ? ShockSize::one_sd : ShockSize::unit;
        const IrfResult other = orthogonalized_irf(m, unit);
        const Stability st = stability(m);
        std::string text = fmt::format("VAR({}) on {} observations, max companion modulus {:.4f}\n\n", m.p, m.nobs,
                                       st.max_modulus);
        text += irf_summary(irf, c.cfg) + "\n" + irf_summary(other, c.cfg);
        write_text_file(c.out_dir / "irf_summary.txt", text);
        out << text;
    });

    nlohmann::ordered_json manifest;
    manifest["tool"] = "macrovar";
    manifest["version"] = kVersion;
    manifest["config"] = {{"source", c.cfg.source.string()},
                          {"resolved", "resolved_config.yaml"},
                          {"hash", config_hash(c.cfg)}};
    manifest["growth_basis"] = c.cfg.growth_basis == GrowthBasis::qoq ? "qoq" : "yoy";
    manifest["seed"] = c.cfg.irf.seed;
    manifest["bootstrap_reps"] = c.cfg.irf.bootstrap_reps;
    manifest["seed_rule"] = "mt19937_64(splitmix64(seed + rep * 0x9E3779B97F4A7C15))";
    manifest["kernels"] = std::string(kernels::isa_name(kernels::active().isa));
    manifest["compiler"] = __VERSION__;
    manifest["eigen"] = fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION);
    manifest["stages"] = stages;
    manifest["wall_time_seconds"] = std::chrono::duration<double>(clock::now() - t0).count();
    write_text_file(c.out_dir / "manifest.json", manifest.dump(2) + "\n");
    out << "report written to " << c.out_dir.string() << '\n';
    return 0;
}

int cmd_fetch(const Options& o, std::ostream& out) {
    const std::string body = fetch_series_csv(o.series_id, o.base_url, std::chrono::seconds(o.timeout));
    if (o.output_file.empty()) {
        out << body;
    } else {
        write_text_file(o.output_file, body);
        out << "wrote " << o.output_file << '\n';
    }
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"unit-root tests, VAR estimation, Granger causality and impulse responses", "macrovar"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "pipeline config (YAML)")->required();
        sub->add_option("--out", o.out, "output directory (default: config output_dir, ./out)");
    };
    auto format = [&](CLI::App* sub) {
        sub->add_option("--format", o.format, "table format")->check(CLI::IsMember({"text", "csv"}));
    };
    auto irf_flags = [&](CLI::App* sub) {
        sub->add_option("--reps", o.reps, "bootstrap replications (>= 100)");
        sub->add_option("--seed", o.seed, "bootstrap seed (default: $MACROVAR_SEED, then config)");
        sub->add_option("--horizon", o.horizon, "IRF horizon in quarters");
        sub->add_option("--shock", o.shock, "shock scaling")->check(CLI::IsMember({"unit", "one-sd"}));
        sub->add_option("--threads", o.threads, "bootstrap worker threads (0 = hardware)");
        sub->add_option("--lags", o.lags, "VAR lag order");
    };

    auto* unitroot = app.add_subcommand("unitroot", "ADF and KPSS table, levels and first differences");
    common(unitroot);
    format(unitroot);
    auto* lagselect = app.add_subcommand("lagselect", "AIC/BIC/HQ lag-order table");
    common(lagselect);
    format(lagselect);
    lagselect->add_option("--max-lags", o.max_lags, "largest candidate lag order");
    auto* granger = app.add_subcommand("granger", "Granger causality Wald tests per sample");
    common(granger);
    format(granger);
    granger->add_option("--samples", o.samples, "samples to report (full, or subsample labels)")->delimiter(',');
    granger->add_option("--lags", o.lags, "VAR lag order");
    auto* irf = app.add_subcommand("irf", "orthogonalized impulse responses with bootstrap bands");
    common(irf);
    irf_flags(irf);
    auto* report = app.add_subcommand("report", "run every stage and write all outputs with a manifest");
    common(report);
    irf_flags(report);
    report->add_option("--max-lags", o.max_lags, "largest candidate lag order");
    auto* fetch = app.add_subcommand("fetch", "download a series CSV by identifier");
    fetch->add_option("--series", o.series_id, "series identifier")->required();
    fetch->add_option("--base-url", o.base_url, "CSV endpoint; the id is sent as ?id=");
    fetch->add_option("--output", o.output_file, "destination file (default: stdout)");
    fetch->add_option("--timeout", o.timeout, "timeout in seconds");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*unitroot) return cmd_unitroot(o, out);
        if (*lagselect) return cmd_lagselect(o, out);
        if (*granger) return cmd_granger(o, out);
        if (*irf) return cmd_irf(o, out);
        if (*report) return cmd_report(o, out);
        if (*fetch) return cmd_fetch(o, out);
    } catch (const Error& e) {
        err << "macrovar: " << errc_name(e.code()) << " error: " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const fs::filesystem_error& e) {
        err << "macrovar: io error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "macrovar: error: " << e.what() << '\n';
        return 4;
    }
    return 2;
}

}  // namespace macrovar
