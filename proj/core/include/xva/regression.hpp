#pragma once

#include "xva/basis.hpp"
#include "xva/credit.hpp"
#include "xva/portfolio.hpp"
#include "xva/scenario.hpp"

#include <Eigen/Core>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace xva {

// SVD of the design matrix (basis values over fitting paths) at one
// stopping date. Factored once; every trade then solves by
// back-substitution against the same factors.
class DesignFactorization {
public:
    DesignFactorization() = default;
    explicit DesignFactorization(Eigen::MatrixXd design, double truncation_rel = 1e-12);

    // Least-squares solve via the factorization (the back-substitution step).
    Eigen::VectorXd back_substitute(const Eigen::VectorXd& targets) const;

    const Eigen::MatrixXd& design() const { return design_; }
    std::size_t n_paths() const { return static_cast<std::size_t>(design_.rows()); }
    std::size_t n_basis() const { return static_cast<std::size_t>(design_.cols()); }

    double condition_number() const { return condition_; }
    double reconstruction_error() const { return reconstruction_error_; }
    bool truncated() const { return truncated_count_ > 0; }
    int truncated_count() const { return truncated_count_; }
    const Eigen::VectorXd& singular_values() const { return singular_values_; }

private:
    Eigen::MatrixXd design_;
    Eigen::MatrixXd u_, v_;
    Eigen::VectorXd singular_values_;
    Eigen::VectorXd inv_singular_; // zeroed below the truncation threshold
    double condition_ = 0.0;
    double reconstruction_error_ = 0.0;
    int truncated_count_ = 0;
};

// Builds the design matrix from basis values at one date and factorizes it.
// An empty fitting_paths span means all paths.
DesignFactorization factorize_design(const ScenarioCube& cube, const BasisSpec& spec,
                                     std::size_t date,
                                     std::span<const std::size_t> fitting_paths = {});

struct FitResult {
    Eigen::VectorXd coefficients;
    double residual_rms = 0.0;
};

FitResult fit_trade(const DesignFactorization& factorization, const Eigen::VectorXd& targets);

// Per-trade, per-date coefficients on the shared basis, additive across
// trades by construction.
class RegressionSet {
public:
    RegressionSet() = default;
    RegressionSet(BasisSpec spec, std::vector<std::string> trade_ids, std::size_t n_dates);

    std::size_t n_trades() const { return trade_ids_.size(); }
    std::size_t n_dates() const { return n_dates_; }
    const BasisSpec& basis() const { return spec_; }
    const std::vector<std::string>& trade_ids() const { return trade_ids_; }
    std::size_t trade_index(const std::string& id) const;

    const Eigen::VectorXd& coefficients(std::size_t trade, std::size_t date) const;
    double residual_rms(std::size_t trade, std::size_t date) const;
    void set_fit(std::size_t trade, std::size_t date, FitResult fit);

    // Element-wise coefficient sums over a trade-id group, summed in
    // ascending trade-index order so partitioned groups reproduce the full
    // portfolio bit-for-bit.
    std::vector<Eigen::VectorXd> portfolio_coefficients() const;
    std::vector<Eigen::VectorXd> portfolio_coefficients(std::span<const std::string> group) const;

    std::uint64_t fingerprint() const;

private:
    BasisSpec spec_;
    std::vector<std::string> trade_ids_;
    std::size_t n_dates_ = 0;
    std::vector<std::vector<Eigen::VectorXd>> coeffs_; // [trade][date]
    std::vector<std::vector<double>> residuals_;
};

double evaluate_regression(const Eigen::VectorXd& coefficients, const BasisSpec& spec,
                           std::span<const double> state);

// Backward-induction continuation-value regression for a Bermudan trade on
// the shared factorizations; returns the per-date fits of the stopped
// value process.
std::vector<FitResult> fit_bermudan(const Trade& trade, const ScenarioCube& cube,
                                    const std::vector<DesignFactorization>& factorizations,
                                    const CreditCurve& credit);

// Fits every trade at every stopping date: one factorization per date,
// reused across trades.
RegressionSet fit_portfolio(const Portfolio& portfolio, const ScenarioCube& fit_cube,
                            const BasisSpec& spec, const CreditCurve& credit);
RegressionSet fit_portfolio(const Portfolio& portfolio, const ScenarioCube& fit_cube,
                            const std::vector<DesignFactorization>& factorizations,
                            const BasisSpec& spec, const CreditCurve& credit);

// Plain Monte Carlo value of the stopped cashflows at t = 0 (no regression),
// used for Bermudan-vs-European dominance checks.
double bermudan_t0_value(const Trade& trade, const ScenarioCube& cube,
                         const std::vector<DesignFactorization>& factorizations,
                         const CreditCurve& credit);

} // namespace xva
