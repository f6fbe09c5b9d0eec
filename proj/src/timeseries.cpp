#include "macrovar/timeseries.hpp"

#include "macrovar/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

namespace macrovar {

Period::Period(int y, int q) : year(y), quarter(q) {
    if (q < 1 || q > 4) throw Error(Errc::domain, fmt::format("quarter {} outside 1..4", q));
}

Period Period::operator+(long quarters) const {
    const long idx = static_cast<long>(year) * 4 + (quarter - 1) + quarters;
    const long y = idx >= 0 ? idx / 4 : (idx - 3) / 4;
    return Period(static_cast<int>(y), static_cast<int>(idx - y * 4) + 1);
}

long Period::operator-(const Period& other) const {
    return (static_cast<long>(year) - other.year) * 4 + (quarter - other.quarter);
}

std::string Period::str() const { return fmt::format("{}Q{}", year, quarter); }

std::optional<Period> Period::parse(std::string_view text) {
    auto to_int = [](std::string_view s, int& out) {
        if (s.empty()) return false;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc{} && p == s.data() + s.size();
    };
    int y = 0;
    int q = 0;
    // YYYYQn and YYYY-Qn
    if (text.size() >= 6) {
        const auto qpos = text.find_first_of("Qq");
        if (qpos != std::string_view::npos) {
            std::string_view ys = text.substr(0, qpos);
            if (!ys.empty() && ys.back() == '-') ys.remove_suffix(1);
            if (ys.size() == 4 && to_int(ys, y) && to_int(text.substr(qpos + 1), q) && q >= 1 && q <= 4)
                return Period(y, q);
            return std::nullopt;
        }
    }
    // YYYY-MM-DD, month must open a quarter
    if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
        int m = 0;
        int d = 0;
        if (!to_int(text.substr(0, 4), y) || !to_int(text.substr(5, 2), m) || !to_int(text.substr(8, 2), d))
            return std::nullopt;
        if (m < 1 || m > 12 || d < 1 || d > 31 || (m - 1) % 3 != 0) return std::nullopt;
        return Period(y, (m - 1) / 3 + 1);
    }
    return std::nullopt;
}

std::string_view transform_name(Transform t) noexcept {
    switch (t) {
        case Transform::raw: return "raw";
        case Transform::log: return "log";
        case Transform::diff: return "diff";
        case Transform::growth: return "growth";
        case Transform::growth_yoy: return "growth_yoy";
    }
    return "raw";
}

std::optional<Transform> parse_transform(std::string_view name) noexcept {
    if (name == "none" || name == "raw") return Transform::raw;
    if (name == "log") return Transform::log;
    if (name == "diff") return Transform::diff;
    if (name == "growth") return Transform::growth;
    if (name == "growth_yoy") return Transform::growth_yoy;
    return std::nullopt;
}

TimeSeries::TimeSeries(std::string name, Period start, std::vector<double> values,
                       std::vector<Transform> history)
    : name_(std::move(name)), start_(start), values_(std::move(values)), history_(std::move(history)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]))
            throw Error(Errc::gap, fmt::format("series '{}': missing value at {}", name_, period_at(i).str()));
    }
}

Period TimeSeries::end() const {
    if (values_.empty()) throw Error(Errc::insufficient_data, fmt::format("series '{}' is empty", name_));
    return start_ + static_cast<long>(values_.size() - 1);
}

TimeSeries TimeSeries::slice(Period from, Period to) const {
    const Period lo = std::max(from, start_);
    const Period hi = values_.empty() ? lo + -1 : std::min(to, end());
    if (from > to || hi < lo)
        throw Error(Errc::range, fmt::format("series '{}': [{}, {}] does not intersect [{}, {}]", name_,
                                             from.str(), to.str(), start_.str(),
                                             values_.empty() ? start_.str() : end().str()));
    const auto first = static_cast<std::size_t>(lo - start_);
    const auto count = static_cast<std::size_t>(hi - lo + 1);
    return TimeSeries(name_, lo,
                      std::vector<double>(values_.begin() + static_cast<long>(first),
                                          values_.begin() + static_cast<long>(first + count)),
                      history_);
}

TimeSeries TimeSeries::renamed(std::string name) const {
    return TimeSeries(std::move(name), start_, values_, history_);
}

namespace {

std::vector<Transform> with(std::vector<Transform> h, Transform t) {
    h.push_back(t);
    return h;
}

void require_nonempty(const TimeSeries& s) {
    if (s.size() == 0) throw Error(Errc::insufficient_data, fmt::format("series '{}' is empty", s.name()));
}

}  // namespace

TimeSeries log_transform(const TimeSeries& s) {
    require_nonempty(s);
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!(s[i] > 0.0))
            throw Error(Errc::domain, fmt::format("series '{}': log of non-positive value {} at {}", s.name(),
                                                  s[i], s.period_at(i).str()));
        out[i] = std::log(s[i]);
    }
    return TimeSeries(s.name(), s.start(), std::move(out), with(s.history(), Transform::log));
}

TimeSeries exp_transform(const TimeSeries& s) {
    require_nonempty(s);
    std::vector<double> out(s.size());
    std::transform(s.values().begin(), s.values().end(), out.begin(), [](double v) { return std::exp(v); });
    auto h = s.history();
    if (!h.empty() && h.back() == Transform::log) h.pop_back();
    return TimeSeries(s.name(), s.start(), std::move(out), std::move(h));
}

TimeSeries difference(const TimeSeries& s) {
    if (s.size() < 2)
        throw Error(Errc::insufficient_data,
                    fmt::format("series '{}': difference needs at least 2 values, have {}", s.name(), s.size()));
    std::vector<double> out(s.size() - 1);
    for (std::size_t i = 0; i + 1 < s.size(); ++i) out[i] = s[i + 1] - s[i];
    return TimeSeries(s.name(), s.start() + 1, std::move(out), with(s.history(), Transform::diff));
}

TimeSeries growth(const TimeSeries& s) {
    const TimeSeries d = difference(log_transform(s));
    std::vector<double> out(d.values().begin(), d.values().end());
    for (double& v : out) v *= 100.0;
    return TimeSeries(s.name(), d.start(), std::move(out), with(s.history(), Transform::growth));
}

TimeSeries growth_yoy(const TimeSeries& s) {
    if (s.size() < 5)
        throw Error(Errc::insufficient_data,
                    fmt::format("series '{}': year-over-year growth needs at least 5 values", s.name()));
    const TimeSeries l = log_transform(s);
    std::vector<double> out(s.size() - 4);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = 100.0 * (l[i + 4] - l[i]);
    return TimeSeries(s.name(), s.start() + 4, std::move(out), with(s.history(), Transform::growth_yoy));
}

TimeSeries apply_transform(const TimeSeries& s, Transform t) {
    switch (t) {
        case Transform::raw: return s;
        case Transform::log: return log_transform(s);
        case Transform::diff: return difference(s);
        case Transform::growth: return growth(s);
        case Transform::growth_yoy: return growth_yoy(s);
    }
    return s;
}

Dataset::Dataset(std::vector<TimeSeries> variables) : vars_(std::move(variables)) {
    if (vars_.empty()) throw Error(Errc::insufficient_data, "dataset needs at least one variable");
    std::set<std::string, std::less<>> seen;
    for (const auto& v : vars_) {
        if (v.size() == 0) throw Error(Errc::insufficient_data, fmt::format("variable '{}' is empty", v.name()));
        if (v.start() != vars_.front().start() || v.size() != vars_.front().size())
            throw Error(Errc::range, fmt::format("variable '{}' spans [{}, {}], expected [{}, {}]", v.name(),
                                                 v.start().str(), v.end().str(), vars_.front().start().str(),
                                                 vars_.front().end().str()));
        if (!seen.insert(v.name()).second)
            throw Error(Errc::duplicate, fmt::format("duplicate variable name '{}'", v.name()));
    }
}

const TimeSeries& Dataset::at(std::string_view name) const {
    if (auto i = index_of(name)) return vars_[*i];
    throw Error(Errc::config, fmt::format("unknown variable '{}'", name));
}

std::optional<std::size_t> Dataset::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name() == name) return i;
    return std::nullopt;
}

std::vector<std::string> Dataset::names() const {
    std::vector<std::string> out;
    out.reserve(vars_.size());
    for (const auto& v : vars_) out.push_back(v.name());
    return out;
}

Dataset Dataset::reordered(std::span<const std::string> order) const {
    if (order.size() != vars_.size())
        throw Error(Errc::config, fmt::format("ordering lists {} names for {} variables", order.size(), vars_.size()));
    std::vector<TimeSeries> out;
    out.reserve(order.size());
    for (const auto& name : order) out.push_back(at(name));
    return Dataset(std::move(out));
}

Eigen::MatrixXd Dataset::matrix() const {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(length()), static_cast<Eigen::Index>(num_vars()));
    for (std::size_t j = 0; j < vars_.size(); ++j) {
        const auto v = vars_[j].values();
        for (std::size_t t = 0; t < v.size(); ++t)
            m(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) = v[t];
    }
    return m;
}

Dataset align(std::span<const TimeSeries> series) {
    if (series.empty()) throw Error(Errc::no_overlap, "align: no series given");
    Period lo = series.front().start();
    Period hi = series.front().end();
    for (const auto& s : series) {
        lo = std::max(lo, s.start());
        hi = std::min(hi, s.end());
    }
    if (hi < lo) {
        std::string spans;
        for (const auto& s : series)
            spans += fmt::format("{}{}=[{}, {}]", spans.empty() ? "" : ", ", s.name(), s.start().str(), s.end().str());
        throw Error(Errc::no_overlap, "align: spans do not overlap: " + spans);
    }
    std::vector<TimeSeries> out;
    out.reserve(series.size());
    for (const auto& s : series) out.push_back(s.slice(lo, hi));
    return Dataset(std::move(out));
}

Dataset subsample(const Dataset& d, Period from, Period to) {
    if (from > to) throw Error(Errc::range, fmt::format("subsample: {} is after {}", from.str(), to.str()));
    std::vector<TimeSeries> out;
    out.reserve(d.num_vars());
    for (const auto& v : d.variables()) out.push_back(v.slice(from, to));
    return Dataset(std::move(out));
}

}  // namespace macrovar
