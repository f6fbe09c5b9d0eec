#pragma once

#include <Eigen/Dense>

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace macrovar {

struct Period {
    int year = 0;
    int quarter = 1;

    Period() = default;
    // Throws Errc::domain unless quarter is in 1..4.
    Period(int year, int quarter);

    auto operator<=>(const Period&) const = default;

    // Shift by a signed number of quarters.
    Period operator+(long quarters) const;
    // Signed number of quarters from `other` to *this.
    long operator-(const Period& other) const;

    std::string str() const;  // "2004Q1"
    static std::optional<Period> parse(std::string_view text);
};

enum class Transform { raw, log, diff, growth, growth_yoy };

std::string_view transform_name(Transform t) noexcept;
std::optional<Transform> parse_transform(std::string_view name) noexcept;

/// Contiguous quarterly series. Values are finite; NaN or inf is treated as a
/// missing observation and rejected at construction.
class TimeSeries {
public:
    TimeSeries(std::string name, Period start, std::vector<double> values,
               std::vector<Transform> history = {});

    const std::string& name() const noexcept { return name_; }
    Period start() const noexcept { return start_; }
    Period end() const;
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    Period period_at(std::size_t i) const { return start_ + static_cast<long>(i); }
    const std::vector<Transform>& history() const noexcept { return history_; }

    // Restriction to [from, to] ∩ span. Throws Errc::range on an empty result.
    TimeSeries slice(Period from, Period to) const;
    TimeSeries renamed(std::string name) const;

    bool operator==(const TimeSeries&) const = default;

private:
    std::string name_;
    Period start_;
    std::vector<double> values_;
    std::vector<Transform> history_;
};

TimeSeries log_transform(const TimeSeries& s);
TimeSeries exp_transform(const TimeSeries& s);
TimeSeries difference(const TimeSeries& s);
// 100 * first difference of logs (quarter over quarter).
TimeSeries growth(const TimeSeries& s);
// 100 * four-quarter difference of logs (year over year).
TimeSeries growth_yoy(const TimeSeries& s);
TimeSeries apply_transform(const TimeSeries& s, Transform t);

/// Panel of equally spanned series. Variable order is the identification order.
class Dataset {
public:
    explicit Dataset(std::vector<TimeSeries> variables);

    std::size_t num_vars() const noexcept { return vars_.size(); }
    std::size_t length() const noexcept { return vars_.front().size(); }
    Period start() const noexcept { return vars_.front().start(); }
    Period end() const { return vars_.front().end(); }

    const std::vector<TimeSeries>& variables() const noexcept { return vars_; }
    const TimeSeries& operator[](std::size_t i) const { return vars_[i]; }
    const TimeSeries& at(std::string_view name) const;
    std::optional<std::size_t> index_of(std::string_view name) const;
    std::vector<std::string> names() const;

    // Same data with variables in the given order. Throws Errc::config unless
    // `order` is a permutation of names().
    Dataset reordered(std::span<const std::string> order) const;

    // T x k matrix with one column per variable.
    Eigen::MatrixXd matrix() const;

    bool operator==(const Dataset&) const = default;

private:
    std::vector<TimeSeries> vars_;
};

Dataset align(std::span<const TimeSeries> series);
Dataset subsample(const Dataset& d, Period from, Period to);

}  // namespace macrovar
