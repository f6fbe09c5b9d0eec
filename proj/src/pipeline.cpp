#include "macrovar/pipeline.hpp"

#include "macrovar/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>

namespace macrovar {

namespace fs = std::filesystem;

namespace {

std::string chain_label(const std::string& name, const std::vector<Transform>& chain) {
    std::string out = name;
    for (Transform t : chain) {
        switch (t) {
            case Transform::raw: break;
            case Transform::log: out = "log(" + out + ")"; break;
            case Transform::diff: out = "D." + out; break;
            case Transform::growth: out = "growth(" + out + ")"; break;
            case Transform::growth_yoy: out = "growth_yoy(" + out + ")"; break;
        }
    }
    return out;
}

std::string adf_cell(const AdfResult& r) {
    return fmt::format("{:.3f}{}", r.statistic, r.reject_at == Level::p01 ? "*" : "");
}

std::string kpss_cell(const KpssResult& r) {
    return fmt::format("{:.3f}{}", r.statistic, r.statistic <= r.critical_values.at(Level::p01) ? "*" : "");
}

}  // namespace

std::vector<UnitRootRow> unitroot_table(const PipelineConfig& cfg) {
    std::vector<UnitRootRow> rows;
    for (const auto& s : cfg.series) {
        auto chain = resolved_chain(cfg, s);
        if (!chain.empty() && chain.back() == Transform::diff) chain.pop_back();
        const TimeSeries level = load_level(cfg, s);
        const TimeSeries diff = difference(level);

        UnitRootRow row;
        row.name = s.name;
        row.level_label = chain_label(s.name, chain);
        row.diff_label = "D." + row.level_label;
        AdfSpec adf{Deterministic::constant_trend, cfg.unitroot.adf_max_lags, cfg.unitroot.adf_lag_selection};
        const KpssSpec kpss{cfg.unitroot.kpss_null, cfg.unitroot.kpss_bandwidth};
        try {
            row.adf_level = adf_test(level, adf);
            row.kpss_level = kpss_test(level, kpss);
            adf.deterministic = Deterministic::constant;
            row.adf_diff = adf_test(diff, adf);
            row.kpss_diff = kpss_test(diff, kpss);
        } catch (const Error& e) {
            throw Error(e.code(), fmt::format("unit root '{}': {}", s.name, e.what()));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string render_unitroot_text(const std::vector<UnitRootRow>& rows, const PipelineConfig& cfg) {
    std::size_t w1 = 5;
    std::size_t w2 = 16;
    for (const auto& r : rows) {
        w1 = std::max(w1, r.level_label.size());
        w2 = std::max(w2, r.diff_label.size());
    }
    std::string out = fmt::format("Unit root tests, {} - {}\n", cfg.sample_from.str(), cfg.sample_to.str());
    out += fmt::format("{:<{}}  {:>9}  {:>8}  {:>9} | {:<{}}  {:>9}  {:>8}  {:>9}\n", "Level", w1, "ADF", "KPSS",
                       "confirmed", "First difference", w2, "ADF", "KPSS", "confirmed");
    for (const auto& r : rows) {
        out += fmt::format("{:<{}}  {:>9}  {:>8}  {:>9} | {:<{}}  {:>9}  {:>8}  {:>9}\n", r.level_label, w1,
                           adf_cell(r.adf_level), kpss_cell(r.kpss_level), r.level_verdict().confirmed() ? "yes" : "no",
                           r.diff_label, w2, adf_cell(r.adf_diff), kpss_cell(r.kpss_diff),
                           r.diff_verdict().confirmed() ? "yes" : "no");
    }
    out += "* stationary at the 1% level (ADF: unit root rejected; KPSS: stationarity not rejected).\n";
    out += "confirmed: both tests classify the series as stationary at 1%.\n";
    return out;
}

std::string render_unitroot_csv(const std::vector<UnitRootRow>& rows) {
    std::string out =
        "variable,form,label,adf_stat,adf_lags,adf_nobs,adf_cv1,adf_cv5,adf_cv10,adf_stationary_1pct,"
        "kpss_stat,kpss_bandwidth,kpss_cv1,kpss_cv5,kpss_cv10,kpss_stationary_1pct,confirmed\n";
    auto line = [&](const UnitRootRow& r, bool level) {
        const AdfResult& a = level ? r.adf_level : r.adf_diff;
        const KpssResult& k = level ? r.kpss_level : r.kpss_diff;
        const StationarityVerdict v = level ? r.level_verdict() : r.diff_verdict();
        out += fmt::format("{},{},{},{:.6f},{},{},{:.4f},{:.4f},{:.4f},{},{:.6f},{},{:.3f},{:.3f},{:.3f},{},{}\n", r.name,
                           level ? "level" : "diff", level ? r.level_label : r.diff_label, a.statistic, a.lags_used,
                           a.nobs, a.critical_values.values[0], a.critical_values.values[1],
                           a.critical_values.values[2], v.adf_stationary ? 1 : 0, k.statistic, k.bandwidth_used,
                           k.critical_values.values[0], k.critical_values.values[1], k.critical_values.values[2],
                           v.kpss_stationary ? 1 : 0, v.confirmed() ? 1 : 0);
    };
    for (const auto& r : rows) {
        line(r, true);
        line(r, false);
    }
    return out;
}

std::string render_lagselect_text(const LagSelection& sel, int lags_used) {
    std::string out = fmt::format("{:>3}  {:>12}  {:>12}  {:>12}\n", "p", "AIC", "BIC", "HQ");
    for (const auto& r : sel.rows) {
        out += fmt::format("{:>3}  {:>11.5f}{}  {:>11.5f}{}  {:>11.5f}{}\n", r.p, r.ic.aic,
                           r.p == sel.best_aic ? "*" : " ", r.ic.bic, r.p == sel.best_bic ? "*" : " ", r.ic.hq,
                           r.p == sel.best_hq ? "*" : " ");
    }
    out += fmt::format("* minimum. Selected: AIC p={}, BIC p={}, HQ p={}. Lag order used by the pipeline: p={}.\n",
                       sel.best_aic, sel.best_bic, sel.best_hq, lags_used);
    return out;
}

std::string render_lagselect_csv(const LagSelection& sel) {
    std::string out = "p,aic,bic,hq\n";
    for (const auto& r : sel.rows) out += fmt::format("{},{:.10f},{:.10f},{:.10f}\n", r.p, r.ic.aic, r.ic.bic, r.ic.hq);
    return out;
}

std::string granger_stars(double pvalue) {
    if (pvalue < 0.05) return "**";
    if (pvalue < 0.10) return "*";
    return "";
}

std::string render_granger_text(const std::vector<GrangerRow>& rows, const std::vector<SampleRange>& samples) {
    std::vector<std::pair<std::string, std::string>> hyps;
    for (const auto& r : rows) {
        const std::pair<std::string, std::string> key{r.cause, r.effect};
        if (std::find(hyps.begin(), hyps.end(), key) == hyps.end()) hyps.push_back(key);
    }
    std::size_t w = 15;
    for (const auto& [c, e] : hyps) w = std::max(w, c.size() + e.size() + 20);
    std::string out = fmt::format("{:<{}}", "Null hypothesis", w);
    for (const auto& s : samples) out += fmt::format(" | {:^21}", fmt::format("{} {}-{}", s.label, s.from.str(), s.to.str()));
    out += '\n';
    out += fmt::format("{:<{}}", "", w);
    for (std::size_t i = 0; i < samples.size(); ++i) out += fmt::format(" | {:>9}  {:>9}", "chi2", "p-value");
    out += '\n';
    for (const auto& [c, e] : hyps) {
        out += fmt::format("{:<{}}", fmt::format("{} does not cause {}", c, e), w);
        for (const auto& s : samples) {
            const auto it = std::find_if(rows.begin(), rows.end(), [&](const GrangerRow& r) {
                return r.cause == c && r.effect == e && r.sample_label == s.label;
            });
            if (it == rows.end() || !it->result) {
                out += fmt::format(" | {:>9}  {:>9}", "n/a", "n/a");
            } else {
                out += fmt::format(" | {:>9.3f}  {:>9}", it->result->chi2,
                                   fmt::format("{:.3f}{}", it->result->pvalue, granger_stars(it->result->pvalue)));
            }
        }
        out += '\n';
    }
    out += "** and * reject the null at the 5% and 10% level. n/a: sample too short to estimate.\n";
    return out;
}

std::string render_granger_csv(const std::vector<GrangerRow>& rows) {
    std::string out = "sample,cause,effect,chi2,df,pvalue,stars,error\n";
    for (const auto& r : rows) {
        if (r.result) {
            out += fmt::format("{},{},{},{:.6f},{},{:.6f},{},\n", r.sample_label, r.cause, r.effect, r.result->chi2,
                               r.result->df, r.result->pvalue, granger_stars(r.result->pvalue));
        } else {
            std::string msg = r.error;
            std::replace(msg.begin(), msg.end(), ',', ';');
            out += fmt::format("{},{},{},,,,,{}\n", r.sample_label, r.cause, r.effect, msg);
        }
    }
    return out;
}

std::uint64_t fnv1a(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string config_hash(const PipelineConfig& cfg) {
    PipelineConfig c = cfg;
    c.output_dir.clear();
    return fmt::format("{:016x}", fnv1a(render_config(c))).substr(0, 8);
}

std::string render_irf_csv(const IrfResult& irf, Eigen::Index shock, Eigen::Index response) {
    std::string out = "h,point,lower,upper\n";
    for (std::size_t h = 0; h < irf.point.size(); ++h) {
        const double pt = irf.point[h](response, shock);
        if (irf.has_bands()) {
            out += fmt::format("{},{:.10e},{:.10e},{:.10e}\n", h, pt, irf.lower[h](response, shock),
                               irf.upper[h](response, shock));
        } else {
            out += fmt::format("{},{:.10e},,\n", h, pt);
        }
    }
    return out;
}

std::string render_irf_svg(const IrfResult& irf, Eigen::Index shock, Eigen::Index response, const std::string& title) {
    constexpr double x0 = 70.0, x1 = 610.0, ytop = 50.0, ybot = 420.0;
    const std::size_t n = irf.point.size();
    std::vector<double> pt(n), lo(n), hi(n);
    double vmin = 0.0, vmax = 0.0;
    for (std::size_t h = 0; h < n; ++h) {
        pt[h] = irf.point[h](response, shock);
        lo[h] = irf.has_bands() ? irf.lower[h](response, shock) : pt[h];
        hi[h] = irf.has_bands() ? irf.upper[h](response, shock) : pt[h];
        vmin = std::min({vmin, lo[h], pt[h]});
        vmax = std::max({vmax, hi[h], pt[h]});
    }
    if (vmax - vmin <= 0.0) {
        vmax += 1.0;
        vmin -= 1.0;
    }
    const double pad = 0.05 * (vmax - vmin);
    vmin -= pad;
    vmax += pad;
    const double span = n > 1 ? static_cast<double>(n - 1) : 1.0;
    auto X = [&](std::size_t h) { return x0 + (x1 - x0) * static_cast<double>(h) / span; };
    auto Y = [&](double v) { return ybot - (ybot - ytop) * (v - vmin) / (vmax - vmin); };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 480\" width=\"640\" height=\"480\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";
    s += fmt::format("<text x=\"320\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{}</text>\n",
                     title);
    if (irf.has_bands()) {
        std::string poly;
        for (std::size_t h = 0; h < n; ++h) poly += fmt::format("{:.2f},{:.2f} ", X(h), Y(hi[h]));
        for (std::size_t h = n; h-- > 0;) poly += fmt::format("{:.2f},{:.2f} ", X(h), Y(lo[h]));
        poly.pop_back();
        s += fmt::format("<polygon points=\"{}\" fill=\"#9ecae1\" fill-opacity=\"0.6\" stroke=\"none\"/>\n", poly);
    }
    s += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\" stroke-dasharray=\"4 3\"/>\n",
                     x0, Y(0.0), x1, Y(0.0));
    std::string line;
    for (std::size_t h = 0; h < n; ++h) line += fmt::format("{:.2f},{:.2f} ", X(h), Y(pt[h]));
    if (!line.empty()) line.pop_back();
    s += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"#08519c\" stroke-width=\"2\"/>\n", line);
    s += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n", x0, ytop, ybot);
    s += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n", x0, ybot, x1, ybot);
    for (std::size_t h = 0; h < n; ++h)
        s += fmt::format("<text x=\"{:.2f}\" y=\"440\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
                         X(h), h);
    for (int i = 0; i <= 4; ++i) {
        const double v = vmin + (vmax - vmin) * i / 4.0;
        s += fmt::format("<text x=\"64\" y=\"{:.2f}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{:.4g}</text>\n",
                         Y(v) + 4.0, v);
    }
    s += "<text x=\"340\" y=\"468\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">quarters after shock</text>\n";
    s += fmt::format("<text x=\"16\" y=\"235\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
                     "transform=\"rotate(-90 16 235)\">response ({} shock)</text>\n",
                     shock_size_name(irf.spec.shock_size));
    s += "</svg>\n";
    return s;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io, fmt::format("cannot write {}", path.string()));
    out << content;
    if (!out) throw Error(Errc::io, fmt::format("failed writing {}", path.string()));
}

IrfFiles write_irf_outputs(const IrfResult& irf, const PipelineConfig& cfg, const fs::path& dir) {
    fs::create_directories(dir);
    const std::string hash = config_hash(cfg);
    const std::string& shock_name = cfg.shock().name;
    const auto shock_it = std::find(irf.names.begin(), irf.names.end(), shock_name);
    if (shock_it == irf.names.end()) throw Error(Errc::config, fmt::format("shock '{}' missing from IRF", shock_name));
    const auto shock = static_cast<Eigen::Index>(shock_it - irf.names.begin());
    IrfFiles files;
    for (std::size_t r = 0; r < irf.names.size(); ++r) {
        if (static_cast<Eigen::Index>(r) == shock) continue;
        const std::string& resp = irf.names[r];
        std::string label = resp;
        for (const auto& s : cfg.series)
            if (s.name == resp) label = s.label;
        std::string shock_label = shock_name;
        for (const auto& s : cfg.series)
            if (s.name == shock_name) shock_label = s.label;
        const fs::path base = dir / fmt::format("irf_{}_{}", hash, resp);
        fs::path csv = base;
        csv += ".csv";
        fs::path svg = base;
        svg += ".svg";
        write_text_file(csv, render_irf_csv(irf, shock, static_cast<Eigen::Index>(r)));
        write_text_file(svg, render_irf_svg(irf, shock, static_cast<Eigen::Index>(r),
                                            fmt::format("Response of {} to {} shock", label, shock_label)));
        files.csv.push_back(csv);
        files.svg.push_back(svg);
    }
    return files;
}

}  // namespace macrovar
