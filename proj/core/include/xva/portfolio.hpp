#pragma once

#include "xva/credit.hpp"
#include "xva/scenario.hpp"

#include <Eigen/Core>
#include <string>
#include <vector>

namespace xva {

enum class TradeType { Forward, Swaplet, EuropeanOption, BermudanOption, Polynomial };
enum class OptionRight { Call, Put };

struct Trade {
    std::string id;
    TradeType type = TradeType::Forward;
    std::size_t underlying = 0;
    double strike = 0.0;
    double notional = 1.0;
    int direction = 1; // +1 long, -1 short
    std::vector<double> dates;
    OptionRight right = OptionRight::Call;
    double accrual = 1.0;                  // swaplet day-count fraction
    std::vector<double> poly_coeffs;       // Polynomial: value = sum_d c_d x^d

    double maturity() const { return dates.empty() ? 0.0 : dates.back(); }
    void validate(const ModelConfig& config) const;
};

struct Portfolio {
    std::vector<Trade> trades;
    bool increment = false;

    static Portfolio from_json_text(const std::string& text, const ModelConfig& config);
    static Portfolio from_json_file(const std::string& path, const ModelConfig& config);

    const Trade& by_id(const std::string& id) const;
};

// Signed exercise value of an option-like payoff; shared between the
// European targets and the Bermudan induction so degenerate schedules
// reproduce European results bit-for-bit.
double intrinsic_value(const Trade& trade, double x);

// Per-path discounted trade values at one stopping date: the future
// cashflows of the trade on each path, discounted to that date at the
// riskless rate. Cashflows falling exactly on the date are included.
// Bermudan trades need regressions and are handled in fit_portfolio.
Eigen::MatrixXd trade_targets(const Trade& trade, const ScenarioCube& cube,
                              const CreditCurve& credit);

} // namespace xva
