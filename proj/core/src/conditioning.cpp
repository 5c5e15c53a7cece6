#include "xva/conditioning.hpp"

#include "xva/common.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace xva {

std::string SelectorDescriptor::label() const {
    switch (kind) {
    case SelectorKind::SignPositive:
        return "sign(+)";
    case SelectorKind::SignNegative:
        return "sign(-)";
    case SelectorKind::EsTail:
        return "ES(" + std::to_string(alpha) + ")";
    case SelectorKind::VarBand:
        return "VaR(" + std::to_string(alpha) + ")";
    case SelectorKind::All:
        return "all";
    }
    return "?";
}

ConditioningSet::ConditioningSet(SelectorDescriptor selector, std::size_t n_total,
                                 std::vector<std::vector<std::size_t>> per_date)
    : selector_(selector), n_total_(n_total), per_date_(std::move(per_date)) {
    for (auto& ix : per_date_) {
        if (!std::is_sorted(ix.begin(), ix.end()))
            throw config_error("conditioning: indices must be sorted");
        if (std::adjacent_find(ix.begin(), ix.end()) != ix.end())
            throw config_error("conditioning: duplicate index");
        if (!ix.empty() && ix.back() >= n_total_)
            throw config_error("conditioning: index out of range");
    }
}

const std::vector<std::size_t>& ConditioningSet::indices(std::size_t date) const {
    if (date >= per_date_.size())
        throw config_error("conditioning: date index out of range");
    return per_date_[date];
}

bool ConditioningSet::contains(std::size_t date, std::size_t path) const {
    const auto& ix = indices(date);
    return std::binary_search(ix.begin(), ix.end(), path);
}

std::string ConditioningSet::to_json(std::span<const double> dates) const {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t k = 0; k < per_date_.size(); ++k) {
        nlohmann::json entry;
        entry["date"] = dates.size() == per_date_.size() ? dates[k] : static_cast<double>(k);
        entry["selector"] = selector_.label();
        entry["indices"] = per_date_[k];
        arr.push_back(std::move(entry));
    }
    return arr.dump();
}

std::uint64_t value_matrix_fingerprint(const Eigen::MatrixXd& values) {
    return fnv1a(values.data(), static_cast<std::size_t>(values.size()) * sizeof(double));
}

ConditioningSet sign_condition(const Eigen::MatrixXd& values, Sign sign) {
    const auto n_paths = static_cast<std::size_t>(values.rows());
    const auto n_dates = static_cast<std::size_t>(values.cols());
    std::vector<std::vector<std::size_t>> per_date(n_dates);
    for (std::size_t k = 0; k < n_dates; ++k) {
        auto& ix = per_date[k];
        for (std::size_t j = 0; j < n_paths; ++j) {
            const double v = values(static_cast<long>(j), static_cast<long>(k));
            if (!std::isfinite(v))
                throw input_error("sign_condition: non-finite portfolio value at path " +
                                  std::to_string(j));
            // V = 0 belongs to the positive set; the negative set is the
            // strict complement.
            const bool pos = v >= 0.0;
            if ((sign == Sign::Positive) == pos)
                ix.push_back(j);
        }
    }
    SelectorDescriptor sel{sign == Sign::Positive ? SelectorKind::SignPositive
                                                  : SelectorKind::SignNegative,
                           0.0};
    ConditioningSet out(sel, n_paths, std::move(per_date));
    out.set_source_fingerprint(value_matrix_fingerprint(values));
    return out;
}

std::size_t es_tail_count(double alpha, std::size_t n) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw config_error("es: alpha must lie in (0,1)");
    if (n == 0)
        throw config_error("es: no scenarios");
    const double v = (1.0 - alpha) * static_cast<double>(n);
    // Snap binary noise in (1-alpha)*n onto the half-integer grid first.
    double snapped = std::round(v * 2.0) / 2.0;
    if (std::abs(v - snapped) > 1e-9 * std::max(1.0, v))
        snapped = v;
    double k;
    if (snapped == std::floor(snapped))
        k = snapped;
    else if (snapped - std::floor(snapped) == 0.5)
        k = std::floor(snapped);
    else
        k = std::ceil(snapped);
    const auto count = static_cast<std::size_t>(std::max(1.0, k));
    return std::min(count, n);
}

namespace {
std::vector<std::size_t> worst_loss_indices(std::span<const double> losses, std::size_t count) {
    std::vector<std::size_t> order(losses.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // worst loss first; ties by ascending scenario index
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return losses[a] > losses[b];
    });
    order.resize(count);
    return order;
}
} // namespace

ConditioningSet es_condition(std::span<const double> losses, double alpha) {
    if (losses.size() < 2)
        throw config_error("es: at least 2 scenarios required");
    for (std::size_t i = 0; i < losses.size(); ++i)
        if (!std::isfinite(losses[i]))
            throw input_error("es: non-finite loss at scenario " + std::to_string(i));
    const std::size_t count = es_tail_count(alpha, losses.size());
    auto worst = worst_loss_indices(losses, count);
    std::sort(worst.begin(), worst.end());
    ConditioningSet out(SelectorDescriptor{SelectorKind::EsTail, alpha}, losses.size(),
                        {std::move(worst)});
    out.set_source_fingerprint(fnv1a(losses.data(), losses.size() * sizeof(double)));
    return out;
}

ConditioningSet var_condition(std::span<const double> losses, double alpha) {
    if (losses.empty())
        throw config_error("var: no scenarios");
    std::size_t boundary;
    if (losses.size() == 1) {
        boundary = 0;
    } else {
        const std::size_t count = es_tail_count(alpha, losses.size());
        // the least-bad member of the ES tail: the beta->alpha limit band
        boundary = worst_loss_indices(losses, count).back();
    }
    ConditioningSet out(SelectorDescriptor{SelectorKind::VarBand, alpha}, losses.size(),
                        {{boundary}});
    out.set_source_fingerprint(fnv1a(losses.data(), losses.size() * sizeof(double)));
    return out;
}

double conditional_mean(std::span<const double> values, const ConditioningSet& set,
                        std::size_t date, TailNorm norm) {
    const auto& ix = set.indices(date);
    if (values.size() != set.n_total())
        throw config_error("conditional_mean: values must cover all paths");
    if (ix.empty()) {
        if (norm == TailNorm::SetSize)
            throw config_error("conditional_mean: empty set under set-size normalization");
        return 0.0;
    }
    CompensatedSum acc;
    for (std::size_t j : ix)
        acc.add(values[j]);
    const double n = norm == TailNorm::TotalCount ? static_cast<double>(set.n_total())
                                                  : static_cast<double>(ix.size());
    return acc.value() / n;
}

} // namespace xva
