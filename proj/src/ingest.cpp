#include "macrovar/ingest.hpp"

#include "macrovar/error.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace macrovar {

namespace fs = std::filesystem;

const SeriesConfig& PipelineConfig::shock() const {
    const SeriesConfig* found = nullptr;
    for (const auto& s : series) {
        if (s.role != SeriesRole::shock) continue;
        if (found) throw Error(Errc::config, "config flags more than one shock series");
        found = &s;
    }
    if (!found) throw Error(Errc::config, "config flags no shock series");
    return *found;
}

std::vector<SampleRange> PipelineConfig::samples() const {
    std::vector<SampleRange> out{{"full", sample_from, sample_to}};
    out.insert(out.end(), subsamples.begin(), subsamples.end());
    return out;
}

// ---------------------------------------------------------------- CSV

namespace {

std::string trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"'))
        s.remove_suffix(1);
    return std::string(s);
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> out;
    std::size_t begin = 0;
    while (true) {
        const auto comma = line.find(',', begin);
        out.push_back(trim(std::string_view(line).substr(begin, comma == std::string::npos ? comma : comma - begin)));
        if (comma == std::string::npos) break;
        begin = comma + 1;
    }
    return out;
}

std::optional<Period> parse_date(std::string_view text, DateFormat fmt) {
    auto p = Period::parse(text);
    if (!p) return std::nullopt;
    const bool iso = text.size() == 10 && text[4] == '-';
    if (fmt == DateFormat::iso && !iso) return std::nullopt;
    if (fmt == DateFormat::quarter && iso) return std::nullopt;
    return p;
}

std::optional<double> parse_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    if (*b == '+') ++b;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || ptr != e) return std::nullopt;
    return v;
}

}  // namespace

TimeSeries read_series(const SeriesConfig& cfg) {
    std::ifstream in(cfg.path);
    if (!in) throw Error(Errc::io, fmt::format("series '{}': cannot open {}", cfg.name, cfg.path.string()));
    std::string line;
    if (!std::getline(in, line)) throw Error(Errc::parse, fmt::format("{}: empty file, header row required", cfg.path.string()));
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // UTF-8 BOM
    const auto header = split_row(line);
    auto find_col = [&](const std::string& name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        return std::nullopt;
    };
    const auto dcol = find_col(cfg.date_column);
    if (!dcol)
        throw Error(Errc::parse, fmt::format("{}: no date column '{}' in header", cfg.path.string(), cfg.date_column));
    std::optional<std::size_t> vcol;
    if (!cfg.value_column.empty()) {
        vcol = find_col(cfg.value_column);
        if (!vcol)
            throw Error(Errc::parse,
                        fmt::format("{}: no value column '{}' in header", cfg.path.string(), cfg.value_column));
    } else if (header.size() == 2) {
        vcol = *dcol == 0 ? 1 : 0;
    } else {
        throw Error(Errc::config, fmt::format("{}: value_column must be set for a {}-column file",
                                              cfg.path.string(), header.size()));
    }

    std::map<Period, double> rows;
    std::vector<Period> missing;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cells = split_row(line);
        if (cells.size() != header.size())
            throw Error(Errc::parse, fmt::format("{}:{}: expected {} cells, found {}", cfg.path.string(), lineno,
                                                 header.size(), cells.size()));
        const auto period = parse_date(cells[*dcol], cfg.date_format);
        if (!period)
            throw Error(Errc::parse,
                        fmt::format("{}:{}: cannot parse date '{}'", cfg.path.string(), lineno, cells[*dcol]));
        if (rows.count(*period) || std::count(missing.begin(), missing.end(), *period))
            throw Error(Errc::duplicate,
                        fmt::format("{}:{}: duplicate period {}", cfg.path.string(), lineno, period->str()));
        const std::string& cell = cells[*vcol];
        if (cell == "." || cell == "NA" || cell.empty()) {
            missing.push_back(*period);
            continue;
        }
        const auto value = parse_number(cell);
        if (!value)
            throw Error(Errc::parse,
                        fmt::format("{}:{}: cannot parse value '{}'", cfg.path.string(), lineno, cell));
        rows.emplace(*period, *value);
    }
    if (!missing.empty())
        throw Error(Errc::gap, fmt::format("series '{}': missing value at {}", cfg.name, missing.front().str()));
    if (rows.empty()) throw Error(Errc::insufficient_data, fmt::format("{}: no data rows", cfg.path.string()));

    std::vector<double> values;
    values.reserve(rows.size());
    Period expect = rows.begin()->first;
    for (const auto& [p, v] : rows) {
        if (p != expect) {
            std::string gaps;
            for (Period q = expect; q < p; q = q + 1) gaps += (gaps.empty() ? "" : ", ") + q.str();
            throw Error(Errc::gap, fmt::format("series '{}': gap in quarters, missing {}", cfg.name, gaps));
        }
        values.push_back(v);
        expect = expect + 1;
    }
    return TimeSeries(cfg.name, rows.begin()->first, std::move(values));
}

void write_series_csv(const TimeSeries& s, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::io, fmt::format("cannot write {}", path.string()));
    out << "DATE," << s.name() << '\n';
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Period p = s.period_at(i);
        out << fmt::format("{:04d}-{:02d}-01,{}\n", p.year, 3 * (p.quarter - 1) + 1, s[i]);
    }
}

// ---------------------------------------------------------------- config

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(Errc::config, "config: " + msg); }

Period parse_period(const YAML::Node& n, const std::string& where) {
    const auto text = n.as<std::string>();
    const auto p = Period::parse(text);
    if (!p) config_error(fmt::format("{}: cannot parse period '{}'", where, text));
    return *p;
}

template <typename T>
T get(const YAML::Node& n, const char* key, T fallback) {
    if (!n || !n[key]) return fallback;
    try {
        return n[key].as<T>();
    } catch (const YAML::Exception& e) {
        config_error(fmt::format("key '{}': {}", key, e.what()));
    }
}

int get_auto_int(const YAML::Node& n, const char* key) {
    if (!n || !n[key]) return -1;
    if (n[key].as<std::string>() == "auto") return -1;
    return get<int>(n, key, -1);
}

const char* role_name(SeriesRole r) {
    switch (r) {
        case SeriesRole::shock: return "shock";
        case SeriesRole::endogenous: return "endogenous";
        case SeriesRole::table_only: return "table_only";
    }
    return "";
}

const char* date_format_name(DateFormat f) {
    switch (f) {
        case DateFormat::automatic: return "auto";
        case DateFormat::iso: return "iso";
        case DateFormat::quarter: return "quarter";
    }
    return "";
}

const char* lag_selection_name(LagCriterion l) {
    switch (l) {
        case LagCriterion::fixed: return "fixed";
        case LagCriterion::aic: return "aic";
        case LagCriterion::bic: return "bic";
    }
    return "";
}

}  // namespace

PipelineConfig parse_config(const std::string& yaml_text, const fs::path& base_dir) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        config_error(e.what());
    }
    if (!root.IsMap()) config_error("top level must be a mapping");

    PipelineConfig cfg;
    cfg.name = get<std::string>(root, "name", cfg.name);
    fs::path data_dir = base_dir / get<std::string>(root, "data_dir", ".");

    if (const auto s = root["sample"]) {
        if (s["from"]) cfg.sample_from = parse_period(s["from"], "sample.from");
        if (s["to"]) cfg.sample_to = parse_period(s["to"], "sample.to");
    }
    if (cfg.sample_to < cfg.sample_from) config_error("sample.from is after sample.to");
    if (const auto subs = root["subsamples"]) {
        for (const auto& n : subs) {
            SampleRange r{get<std::string>(n, "label", ""), parse_period(n["from"], "subsamples.from"),
                          parse_period(n["to"], "subsamples.to")};
            if (r.label.empty()) config_error("every subsample needs a label");
            if (r.to < r.from) config_error(fmt::format("subsample '{}' ends before it starts", r.label));
            cfg.subsamples.push_back(std::move(r));
        }
    }

    const auto basis = get<std::string>(root, "growth_basis", "qoq");
    if (basis == "qoq") cfg.growth_basis = GrowthBasis::qoq;
    else if (basis == "yoy") cfg.growth_basis = GrowthBasis::yoy;
    else config_error(fmt::format("growth_basis must be qoq or yoy, got '{}'", basis));

    const auto series = root["series"];
    if (!series || !series.IsSequence() || series.size() == 0) config_error("'series' must be a non-empty list");
    for (const auto& n : series) {
        SeriesConfig s;
        s.name = get<std::string>(n, "name", "");
        if (s.name.empty()) config_error("every series needs a name");
        s.label = get<std::string>(n, "label", s.name);
        const auto file = get<std::string>(n, "file", "");
        if (file.empty()) config_error(fmt::format("series '{}' needs a file", s.name));
        s.path = fs::path(file).is_absolute() ? fs::path(file) : data_dir / file;
        s.date_column = get<std::string>(n, "date_column", s.date_column);
        s.value_column = get<std::string>(n, "value_column", "");
        const auto df = get<std::string>(n, "date_format", "auto");
        if (df == "auto") s.date_format = DateFormat::automatic;
        else if (df == "iso") s.date_format = DateFormat::iso;
        else if (df == "quarter") s.date_format = DateFormat::quarter;
        else config_error(fmt::format("series '{}': unknown date_format '{}'", s.name, df));
        if (const auto t = n["transforms"]) {
            for (const auto& item : t) {
                const auto name = item.as<std::string>();
                const auto tr = parse_transform(name);
                if (!tr) config_error(fmt::format("series '{}': unknown transform '{}'", s.name, name));
                if (*tr != Transform::raw) s.transforms.push_back(*tr);
            }
        }
        const auto role = get<std::string>(n, "role", "endogenous");
        if (role == "shock") s.role = SeriesRole::shock;
        else if (role == "endogenous") s.role = SeriesRole::endogenous;
        else if (role == "table_only") s.role = SeriesRole::table_only;
        else config_error(fmt::format("series '{}': unknown role '{}'", s.name, role));
        for (const auto& other : cfg.series)
            if (other.name == s.name) config_error(fmt::format("duplicate series name '{}'", s.name));
        cfg.series.push_back(std::move(s));
    }
    (void)cfg.shock();

    const auto var = root["var"];
    cfg.var.lags = get<int>(var, "lags", 1);
    if (cfg.var.lags < 1) config_error("var.lags must be >= 1");
    cfg.var.include_constant = get<bool>(var, "constant", true);
    if (var && var["ordering"]) {
        for (const auto& item : var["ordering"]) cfg.var.ordering.push_back(item.as<std::string>());
    }
    cfg.lag_select_max = get<int>(var, "lag_select_max", 4);
    if (cfg.lag_select_max < 1) config_error("var.lag_select_max must be >= 1");
    {
        std::vector<std::string> members;
        for (const auto& s : cfg.series)
            if (s.role != SeriesRole::table_only) members.push_back(s.name);
        if (!cfg.var.ordering.empty()) {
            auto a = members;
            auto b = cfg.var.ordering;
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            if (a != b) config_error("var.ordering must list exactly the shock and endogenous series");
        }
    }

    const auto mode = get<std::string>(root["granger"], "mode", "conditional");
    if (mode == "conditional") cfg.granger_mode = GrangerMode::conditional;
    else if (mode == "bivariate") cfg.granger_mode = GrangerMode::bivariate;
    else config_error(fmt::format("granger.mode must be conditional or bivariate, got '{}'", mode));

    const auto ur = root["unitroot"];
    const auto sel = get<std::string>(ur, "adf_lag_selection", "bic");
    if (sel == "bic") cfg.unitroot.adf_lag_selection = LagCriterion::bic;
    else if (sel == "aic") cfg.unitroot.adf_lag_selection = LagCriterion::aic;
    else if (sel == "fixed") cfg.unitroot.adf_lag_selection = LagCriterion::fixed;
    else config_error(fmt::format("unitroot.adf_lag_selection: unknown '{}'", sel));
    cfg.unitroot.adf_max_lags = get_auto_int(ur, "adf_max_lags");
    const auto kn = get<std::string>(ur, "kpss_null", "level");
    if (kn == "level") cfg.unitroot.kpss_null = KpssNull::level;
    else if (kn == "trend") cfg.unitroot.kpss_null = KpssNull::trend;
    else config_error(fmt::format("unitroot.kpss_null must be level or trend, got '{}'", kn));
    cfg.unitroot.kpss_bandwidth = get_auto_int(ur, "kpss_bandwidth");

    const auto irf = root["irf"];
    cfg.irf.horizon = get<int>(irf, "horizon", 8);
    cfg.irf.ci_level = get<double>(irf, "ci_level", 0.95);
    cfg.irf.bootstrap_reps = get<int>(irf, "reps", 1000);
    cfg.irf.seed = get<std::uint64_t>(irf, "seed", 20211);
    const auto shock = get<std::string>(irf, "shock_size", "one-sd");
    if (shock == "one-sd") cfg.irf.shock_size = ShockSize::one_sd;
    else if (shock == "unit") cfg.irf.shock_size = ShockSize::unit;
    else config_error(fmt::format("irf.shock_size must be one-sd or unit, got '{}'", shock));
    cfg.irf.allow_ridge_jitter = get<bool>(irf, "ridge_jitter", false);
    if (cfg.irf.horizon < 0) config_error("irf.horizon must be >= 0");
    if (!(cfg.irf.ci_level > 0.0 && cfg.irf.ci_level < 1.0)) config_error("irf.ci_level must lie in (0, 1)");
    if (cfg.irf.bootstrap_reps < 100) config_error("irf.reps must be >= 100");

    cfg.output_dir = get<std::string>(root, "output_dir", "out");
    return cfg;
}

PipelineConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::config, fmt::format("config: cannot open {}", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    auto base = fs::absolute(path).parent_path();
    PipelineConfig cfg = parse_config(ss.str(), base);
    cfg.source = fs::absolute(path).lexically_normal();
    return cfg;
}

std::string render_config(const PipelineConfig& cfg) {
    YAML::Emitter e;
    e << YAML::BeginMap;
    e << YAML::Key << "name" << YAML::Value << cfg.name;
    e << YAML::Key << "sample" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "from" << YAML::Value
      << cfg.sample_from.str() << YAML::Key << "to" << YAML::Value << cfg.sample_to.str() << YAML::EndMap;
    e << YAML::Key << "subsamples" << YAML::Value << YAML::BeginSeq;
    for (const auto& s : cfg.subsamples)
        e << YAML::Flow << YAML::BeginMap << YAML::Key << "label" << YAML::Value << s.label << YAML::Key << "from"
          << YAML::Value << s.from.str() << YAML::Key << "to" << YAML::Value << s.to.str() << YAML::EndMap;
    e << YAML::EndSeq;
    e << YAML::Key << "growth_basis" << YAML::Value << (cfg.growth_basis == GrowthBasis::qoq ? "qoq" : "yoy");
    e << YAML::Key << "series" << YAML::Value << YAML::BeginSeq;
    for (const auto& s : cfg.series) {
        e << YAML::BeginMap;
        e << YAML::Key << "name" << YAML::Value << s.name;
        e << YAML::Key << "label" << YAML::Value << s.label;
        e << YAML::Key << "file" << YAML::Value << s.path.lexically_normal().string();
        e << YAML::Key << "date_column" << YAML::Value << s.date_column;
        e << YAML::Key << "value_column" << YAML::Value << s.value_column;
        e << YAML::Key << "date_format" << YAML::Value << date_format_name(s.date_format);
        e << YAML::Key << "transforms" << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (Transform t : resolved_chain(cfg, s)) e << std::string(transform_name(t));
        e << YAML::EndSeq;
        e << YAML::Key << "role" << YAML::Value << role_name(s.role);
        e << YAML::EndMap;
    }
    e << YAML::EndSeq;
    e << YAML::Key << "var" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "lags" << YAML::Value << cfg.var.lags;
    e << YAML::Key << "constant" << YAML::Value << cfg.var.include_constant;
    e << YAML::Key << "ordering" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    if (cfg.var.ordering.empty()) {
        for (const auto& s : cfg.series)
            if (s.role != SeriesRole::table_only) e << s.name;
    } else {
        for (const auto& n : cfg.var.ordering) e << n;
    }
    e << YAML::EndSeq;
    e << YAML::Key << "lag_select_max" << YAML::Value << cfg.lag_select_max;
    e << YAML::EndMap;
    e << YAML::Key << "granger" << YAML::Value << YAML::BeginMap << YAML::Key << "mode" << YAML::Value
      << (cfg.granger_mode == GrangerMode::conditional ? "conditional" : "bivariate") << YAML::EndMap;
    e << YAML::Key << "unitroot" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "adf_lag_selection" << YAML::Value << lag_selection_name(cfg.unitroot.adf_lag_selection);
    e << YAML::Key << "adf_max_lags" << YAML::Value
      << (cfg.unitroot.adf_max_lags < 0 ? std::string("auto") : std::to_string(cfg.unitroot.adf_max_lags));
    e << YAML::Key << "kpss_null" << YAML::Value << (cfg.unitroot.kpss_null == KpssNull::level ? "level" : "trend");
    e << YAML::Key << "kpss_bandwidth" << YAML::Value
      << (cfg.unitroot.kpss_bandwidth < 0 ? std::string("auto") : std::to_string(cfg.unitroot.kpss_bandwidth));
    e << YAML::EndMap;
    e << YAML::Key << "irf" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "horizon" << YAML::Value << cfg.irf.horizon;
    e << YAML::Key << "ci_level" << YAML::Value << fmt::format("{}", cfg.irf.ci_level);
    e << YAML::Key << "reps" << YAML::Value << cfg.irf.bootstrap_reps;
    e << YAML::Key << "seed" << YAML::Value << cfg.irf.seed;
    e << YAML::Key << "shock_size" << YAML::Value << shock_size_name(cfg.irf.shock_size);
    e << YAML::Key << "ridge_jitter" << YAML::Value << cfg.irf.allow_ridge_jitter;
    e << YAML::EndMap;
    e << YAML::Key << "output_dir" << YAML::Value << cfg.output_dir.string();
    e << YAML::EndMap;
    return std::string(e.c_str()) + "\n";
}

// ---------------------------------------------------------------- assembly

std::vector<Transform> resolved_chain(const PipelineConfig& cfg, const SeriesConfig& s) {
    std::vector<Transform> out = s.transforms;
    for (auto& t : out)
        if (t == Transform::growth && cfg.growth_basis == GrowthBasis::yoy) t = Transform::growth_yoy;
    return out;
}

namespace {

template <typename Fn>
auto with_context(const SeriesConfig& s, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(e.code(), fmt::format("series '{}': {}", s.name, e.what()));
    }
}

TimeSeries load_raw(const PipelineConfig& cfg, const SeriesConfig& s) {
    return read_series(s).slice(cfg.sample_from, cfg.sample_to);
}

}  // namespace

TimeSeries load_transformed(const PipelineConfig& cfg, const SeriesConfig& s) {
    return with_context(s, [&] {
        TimeSeries out = load_raw(cfg, s);
        for (Transform t : resolved_chain(cfg, s)) out = apply_transform(out, t);
        return out;
    });
}

TimeSeries load_level(const PipelineConfig& cfg, const SeriesConfig& s) {
    return with_context(s, [&] {
        auto chain = resolved_chain(cfg, s);
        if (!chain.empty() && chain.back() == Transform::diff) chain.pop_back();
        TimeSeries out = load_raw(cfg, s);
        for (Transform t : chain) out = apply_transform(out, t);
        return out;
    });
}

Dataset assemble(const PipelineConfig& cfg) {
    (void)cfg.shock();
    std::vector<TimeSeries> series;
    for (const auto& s : cfg.series)
        if (s.role != SeriesRole::table_only) series.push_back(load_transformed(cfg, s));
    return align(series);
}

}  // namespace macrovar
