#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace xva {

enum class Sign { Positive, Negative };

enum class SelectorKind { SignPositive, SignNegative, EsTail, VarBand, All };

struct SelectorDescriptor {
    SelectorKind kind = SelectorKind::All;
    double alpha = 0.0;

    std::string label() const;
};

// Per stopping date, the path indices selected by a global criterion.
// Averages over the set are normalized either by the total path count
// (the adjustment-integral convention) or by the set size (the tail
// convention); callers always state which.
class ConditioningSet {
public:
    ConditioningSet() = default;
    ConditioningSet(SelectorDescriptor selector, std::size_t n_total,
                    std::vector<std::vector<std::size_t>> per_date);

    std::size_t n_dates() const { return per_date_.size(); }
    std::size_t n_total() const { return n_total_; }
    const std::vector<std::size_t>& indices(std::size_t date) const;
    const SelectorDescriptor& selector() const { return selector_; }

    bool contains(std::size_t date, std::size_t path) const;

    // Fingerprint of the portfolio data the set was built from; allocation
    // refuses sets built from a different portfolio.
    std::uint64_t source_fingerprint() const { return source_fingerprint_; }
    void set_source_fingerprint(std::uint64_t f) { source_fingerprint_ = f; }

    std::string to_json(std::span<const double> dates = {}) const;

private:
    SelectorDescriptor selector_;
    std::size_t n_total_ = 0;
    std::vector<std::vector<std::size_t>> per_date_;
    std::uint64_t source_fingerprint_ = 0;
};

// values: paths x dates. Positive selects {V >= 0}, negative the strict
// complement, so the two partitions cover every path exactly once.
ConditioningSet sign_condition(const Eigen::MatrixXd& values, Sign sign);

std::uint64_t value_matrix_fingerprint(const Eigen::MatrixXd& values);

// Number of tail scenarios backing ES(alpha) on n scenarios. The tail mass
// (1-alpha)*n maps to a whole count: fractions round up, exact halves
// round down (97.5% of 2500 keeps 62 scenarios), never below one.
std::size_t es_tail_count(double alpha, std::size_t n);

// Selects the worst-loss scenarios; ties at the cutoff resolve by
// ascending scenario index.
ConditioningSet es_condition(std::span<const double> losses, double alpha);

// The single scenario at the empirical alpha-quantile: the boundary of the
// ES(alpha) tail, i.e. the limiting ES band as beta -> alpha.
ConditioningSet var_condition(std::span<const double> losses, double alpha);

enum class TailNorm { TotalCount, SetSize };

// (1/n) * sum over the selected indices, n per the chosen normalization.
// Empty set: 0 under TotalCount, error under SetSize.
double conditional_mean(std::span<const double> values, const ConditioningSet& set,
                        std::size_t date, TailNorm norm = TailNorm::TotalCount);

} // namespace xva
