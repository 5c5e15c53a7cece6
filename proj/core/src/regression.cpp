#include "xva/regression.hpp"

#include "xva/common.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace xva {

DesignFactorization::DesignFactorization(Eigen::MatrixXd design, double truncation_rel)
    : design_(std::move(design)) {
    if (design_.rows() < design_.cols())
        throw config_error("regression: fewer fitting paths than basis functions");
    work_counters().svd_factorizations++;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(design_, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u_ = svd.matrixU();
    v_ = svd.matrixV();
    singular_values_ = svd.singularValues();

    const double smax = singular_values_.size() > 0 ? singular_values_[0] : 0.0;
    if (!(smax > 0.0))
        throw numeric_error("regression: design matrix has rank zero");
    const double threshold = truncation_rel * smax;
    inv_singular_.resize(singular_values_.size());
    for (long i = 0; i < singular_values_.size(); ++i) {
        if (singular_values_[i] > threshold) {
            inv_singular_[i] = 1.0 / singular_values_[i];
        } else {
            inv_singular_[i] = 0.0;
            ++truncated_count_;
        }
    }
    const double smin = singular_values_[singular_values_.size() - 1];
    condition_ = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    reconstruction_error_ =
        (design_ - u_ * singular_values_.asDiagonal() * v_.transpose()).norm() / design_.norm();
}

Eigen::VectorXd DesignFactorization::back_substitute(const Eigen::VectorXd& targets) const {
    if (targets.size() != design_.rows())
        throw config_error("regression: target length must equal fitting-path count");
    work_counters().back_substitutions++;
    return v_ * (inv_singular_.asDiagonal() * (u_.transpose() * targets));
}

DesignFactorization factorize_design(const ScenarioCube& cube, const BasisSpec& spec,
                                     std::size_t date, std::span<const std::size_t> fitting_paths) {
    if (date >= cube.n_dates())
        throw config_error("regression: date index out of range");
    std::vector<std::size_t> all;
    if (fitting_paths.empty()) {
        all.resize(cube.n_paths());
        std::iota(all.begin(), all.end(), std::size_t{0});
        fitting_paths = all;
    }
    Eigen::MatrixXd design(static_cast<long>(fitting_paths.size()), static_cast<long>(spec.size()));
    std::vector<double> state(cube.n_underlyings());
    for (std::size_t r = 0; r < fitting_paths.size(); ++r) {
        for (std::size_t b = 0; b < cube.n_underlyings(); ++b)
            state[b] = cube.value(fitting_paths[r], date, b);
        design.row(static_cast<long>(r)) = spec.eval(state).transpose();
    }
    return DesignFactorization(std::move(design));
}

FitResult fit_trade(const DesignFactorization& factorization, const Eigen::VectorXd& targets) {
    for (long j = 0; j < targets.size(); ++j)
        if (!std::isfinite(targets[j]))
            throw input_error("regression: non-finite target at path " + std::to_string(j));
    FitResult out;
    out.coefficients = factorization.back_substitute(targets);
    const Eigen::VectorXd residual = targets - factorization.design() * out.coefficients;
    out.residual_rms = std::sqrt(residual.squaredNorm() / static_cast<double>(targets.size()));
    return out;
}

RegressionSet::RegressionSet(BasisSpec spec, std::vector<std::string> trade_ids,
                             std::size_t n_dates)
    : spec_(std::move(spec)), trade_ids_(std::move(trade_ids)), n_dates_(n_dates) {
    coeffs_.assign(trade_ids_.size(),
                   std::vector<Eigen::VectorXd>(
                       n_dates_, Eigen::VectorXd::Zero(static_cast<long>(spec_.size()))));
    residuals_.assign(trade_ids_.size(), std::vector<double>(n_dates_, 0.0));
}

std::size_t RegressionSet::trade_index(const std::string& id) const {
    for (std::size_t i = 0; i < trade_ids_.size(); ++i)
        if (trade_ids_[i] == id)
            return i;
    throw config_error("regression: unknown trade id " + id);
}

const Eigen::VectorXd& RegressionSet::coefficients(std::size_t trade, std::size_t date) const {
    return coeffs_.at(trade).at(date);
}

double RegressionSet::residual_rms(std::size_t trade, std::size_t date) const {
    return residuals_.at(trade).at(date);
}

void RegressionSet::set_fit(std::size_t trade, std::size_t date, FitResult fit) {
    coeffs_.at(trade).at(date) = std::move(fit.coefficients);
    residuals_.at(trade).at(date) = fit.residual_rms;
}

std::vector<Eigen::VectorXd> RegressionSet::portfolio_coefficients() const {
    std::vector<std::string> all = trade_ids_;
    return portfolio_coefficients(all);
}

std::vector<Eigen::VectorXd>
RegressionSet::portfolio_coefficients(std::span<const std::string> group) const {
    std::vector<std::size_t> members;
    members.reserve(group.size());
    for (const auto& id : group)
        members.push_back(trade_index(id));
    std::sort(members.begin(), members.end());

    std::vector<Eigen::VectorXd> out(
        n_dates_, Eigen::VectorXd::Zero(static_cast<long>(spec_.size())));
    for (std::size_t k = 0; k < n_dates_; ++k)
        for (std::size_t i : members)
            out[k] += coeffs_[i][k];
    return out;
}

std::uint64_t RegressionSet::fingerprint() const {
    std::uint64_t h = spec_.fingerprint();
    for (std::size_t i = 0; i < trade_ids_.size(); ++i) {
        h = fnv1a(trade_ids_[i], h);
        for (std::size_t k = 0; k < n_dates_; ++k)
            h = fnv1a(coeffs_[i][k].data(),
                      static_cast<std::size_t>(coeffs_[i][k].size()) * sizeof(double), h);
    }
    return h;
}

double evaluate_regression(const Eigen::VectorXd& coefficients, const BasisSpec& spec,
                           std::span<const double> state) {
    if (coefficients.size() != static_cast<long>(spec.size()))
        throw config_error("regression: coefficient length does not match basis");
    const Eigen::VectorXd f = spec.eval(state);
    return coefficients.dot(f);
}

namespace {

struct StoppedCashflows {
    std::vector<double> amount;   // exercise payoff, 0 if never exercised
    std::vector<double> pay_time; // exercise time, -1 if never exercised
};

// Backward induction: regress the continuation value at each exercise date
// and exercise where intrinsic >= continuation.
StoppedCashflows bermudan_induction(const Trade& trade, const ScenarioCube& cube,
                                    const std::vector<DesignFactorization>& factorizations,
                                    const CreditCurve& credit) {
    const std::size_t n_paths = cube.n_paths();
    std::vector<std::size_t> exercise_idx;
    for (double d : trade.dates)
        exercise_idx.push_back(cube.date_index(d));

    StoppedCashflows sc;
    sc.amount.assign(n_paths, 0.0);
    sc.pay_time.assign(n_paths, -1.0);
    for (std::size_t e = exercise_idx.size(); e-- > 0;) {
        const std::size_t k = exercise_idx[e];
        const double t = cube.dates()[k];
        Eigen::VectorXd disc(static_cast<long>(n_paths));
        for (std::size_t j = 0; j < n_paths; ++j)
            disc[static_cast<long>(j)] =
                sc.pay_time[j] >= 0.0 ? sc.amount[j] * credit.discount_r(t, sc.pay_time[j]) : 0.0;
        const Eigen::VectorXd cont_coeffs = factorizations[k].back_substitute(disc);
        const Eigen::VectorXd cont = factorizations[k].design() * cont_coeffs;
        for (std::size_t j = 0; j < n_paths; ++j) {
            const double intrinsic = intrinsic_value(trade, cube.value(j, k, trade.underlying));
            if (intrinsic >= cont[static_cast<long>(j)]) {
                sc.amount[j] = intrinsic;
                sc.pay_time[j] = t;
            }
        }
    }
    return sc;
}

} // namespace

std::vector<FitResult> fit_bermudan(const Trade& trade, const ScenarioCube& cube,
                                    const std::vector<DesignFactorization>& factorizations,
                                    const CreditCurve& credit) {
    if (trade.type != TradeType::BermudanOption)
        throw config_error("regression: fit_bermudan expects a bermudan trade");
    if (factorizations.size() != cube.n_dates())
        throw config_error("regression: one factorization per stopping date required");

    const std::size_t n_paths = cube.n_paths();
    const StoppedCashflows sc = bermudan_induction(trade, cube, factorizations, credit);

    // Regress the stopped value process at every stopping date.
    const double dir = static_cast<double>(trade.direction);
    std::vector<FitResult> out(cube.n_dates());
    for (std::size_t k = 0; k < cube.n_dates(); ++k) {
        const double t = cube.dates()[k];
        Eigen::VectorXd targets(static_cast<long>(n_paths));
        for (std::size_t j = 0; j < n_paths; ++j) {
            const bool alive = sc.pay_time[j] >= t;
            targets[static_cast<long>(j)] =
                alive ? dir * sc.amount[j] * credit.discount_r(t, sc.pay_time[j]) : 0.0;
        }
        out[k] = fit_trade(factorizations[k], targets);
    }
    return out;
}

double bermudan_t0_value(const Trade& trade, const ScenarioCube& cube,
                         const std::vector<DesignFactorization>& factorizations,
                         const CreditCurve& credit) {
    const StoppedCashflows sc = bermudan_induction(trade, cube, factorizations, credit);
    CompensatedSum acc;
    for (std::size_t j = 0; j < cube.n_paths(); ++j)
        acc.add(sc.pay_time[j] >= 0.0 ? sc.amount[j] * credit.discount_r(0.0, sc.pay_time[j]) : 0.0);
    return static_cast<double>(trade.direction) * acc.value() / static_cast<double>(cube.n_paths());
}

RegressionSet fit_portfolio(const Portfolio& portfolio, const ScenarioCube& fit_cube,
                            const std::vector<DesignFactorization>& factorizations,
                            const BasisSpec& spec, const CreditCurve& credit) {
    if (factorizations.size() != fit_cube.n_dates())
        throw config_error("regression: one factorization per stopping date required");
    std::vector<std::string> ids;
    ids.reserve(portfolio.trades.size());
    for (const auto& t : portfolio.trades)
        ids.push_back(t.id);
    RegressionSet set(spec, std::move(ids), fit_cube.n_dates());

    parallel_for(portfolio.trades.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const Trade& trade = portfolio.trades[i];
            if (trade.type == TradeType::BermudanOption) {
                auto fits = fit_bermudan(trade, fit_cube, factorizations, credit);
                for (std::size_t k = 0; k < fits.size(); ++k)
                    set.set_fit(i, k, std::move(fits[k]));
            } else {
                const Eigen::MatrixXd targets = trade_targets(trade, fit_cube, credit);
                for (std::size_t k = 0; k < fit_cube.n_dates(); ++k)
                    set.set_fit(i, k, fit_trade(factorizations[k], targets.col(static_cast<long>(k))));
            }
        }
    });
    return set;
}

RegressionSet fit_portfolio(const Portfolio& portfolio, const ScenarioCube& fit_cube,
                            const BasisSpec& spec, const CreditCurve& credit) {
    std::vector<DesignFactorization> factorizations;
    factorizations.reserve(fit_cube.n_dates());
    for (std::size_t k = 0; k < fit_cube.n_dates(); ++k)
        factorizations.push_back(factorize_design(fit_cube, spec, k));
    return fit_portfolio(portfolio, fit_cube, factorizations, spec, credit);
}

} // namespace xva
