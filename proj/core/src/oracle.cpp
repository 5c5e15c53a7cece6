#include "xva/oracle.hpp"

#include "xva/common.hpp"
#include "xva/rng.hpp"

#include <cmath>
#include <cstring>

namespace xva {

void OracleConfig::validate() const {
    if (!(bump_size > 0.0))
        throw config_error("oracle: bump size must be positive");
}

namespace oracle {

double black_scholes(double forward, double strike, double stddev, bool call) {
    const double cp = call ? 1.0 : -1.0;
    if (stddev <= 0.0)
        return std::max(cp * (forward - strike), 0.0);
    const double d1 = std::log(forward / strike) / stddev + 0.5 * stddev;
    const double d2 = d1 - stddev;
    return cp * (forward * rng::normal_cdf(cp * d1) - strike * rng::normal_cdf(cp * d2));
}

double closed_form_value(const Trade& trade, std::span<const double> state,
                         const ModelConfig& config, const CreditCurve& credit, double t) {
    if (state.size() != config.underlyings.size())
        throw config_error("oracle: state must cover each underlying");
    const auto& u = config.underlyings[trade.underlying];
    const double x = state[trade.underlying];
    const double dir = static_cast<double>(trade.direction);

    switch (trade.type) {
    case TradeType::Polynomial: {
        double v = 0.0;
        for (std::size_t d = trade.poly_coeffs.size(); d-- > 0;)
            v = v * x + trade.poly_coeffs[d];
        return dir * trade.notional * v;
    }
    case TradeType::Forward: {
        if (u.kind != ModelKind::Gbm)
            throw config_error("oracle: no closed form for forward on this model");
        const double T = trade.maturity();
        if (t > T)
            return 0.0;
        const double fwd = x * std::exp(u.drift * (T - t));
        return dir * trade.notional * credit.discount_r(t, T) * (fwd - trade.strike);
    }
    case TradeType::EuropeanOption: {
        if (u.kind != ModelKind::Gbm)
            throw config_error("oracle: no closed form for option on this model");
        const double T = trade.maturity();
        if (t > T)
            return 0.0;
        const double fwd = x * std::exp(u.drift * (T - t));
        const double stddev = u.volatility * std::sqrt(T - t);
        const double premium =
            black_scholes(fwd, trade.strike, stddev, trade.right == OptionRight::Call);
        return dir * trade.notional * credit.discount_r(t, T) * premium;
    }
    case TradeType::Swaplet: {
        if (u.kind != ModelKind::GaussianRate)
            throw config_error("oracle: no closed form for swaplet on this model");
        const double T = trade.dates.front();
        if (t > T)
            return 0.0;
        const double expected = u.mean_level + (x - u.mean_level) * std::exp(-u.reversion * (T - t));
        return dir * trade.notional * trade.accrual * credit.discount_r(t, T) *
               (expected - trade.strike);
    }
    case TradeType::BermudanOption:
        throw config_error("oracle: unsupported trade/model pair (bermudan has no closed form)");
    }
    throw config_error("oracle: unhandled trade type");
}

Eigen::MatrixXd brute_force_values(std::span<const Trade> trades, const ScenarioCube& cube,
                                   const ModelConfig& config, const CreditCurve& credit) {
    const auto n_paths = static_cast<long>(cube.n_paths());
    const auto n_dates = static_cast<long>(cube.n_dates());
    Eigen::MatrixXd values = Eigen::MatrixXd::Zero(n_paths, n_dates);
    std::vector<double> state(cube.n_underlyings());
    for (long k = 0; k < n_dates; ++k) {
        const double t = cube.dates()[static_cast<std::size_t>(k)];
        for (long j = 0; j < n_paths; ++j) {
            for (std::size_t b = 0; b < cube.n_underlyings(); ++b)
                state[b] = cube.value(static_cast<std::size_t>(j), static_cast<std::size_t>(k), b);
            double v = 0.0;
            for (const auto& trade : trades)
                v += closed_form_value(trade, state, config, credit, t);
            values(j, k) = v;
        }
    }
    return values;
}

double brute_force_xva(std::span<const Trade> trades, const ScenarioCube& cube,
                       const ModelConfig& config, const CreditCurve& credit, XvaKind kind) {
    const Eigen::MatrixXd values = brute_force_values(trades, cube, config, credit);
    const Party party = kind == XvaKind::Cva ? Party::Counterparty : Party::Bank;
    const auto n = static_cast<double>(cube.n_paths());
    double total = 0.0;
    double t_prev = 0.0;
    for (std::size_t k = 0; k < cube.n_dates(); ++k) {
        const double t = cube.dates()[k];
        double acc = 0.0;
        for (long j = 0; j < values.rows(); ++j) {
            const double v = values(j, static_cast<long>(k));
            switch (kind) {
            case XvaKind::Cva:
            case XvaKind::Fca:
                acc += v >= 0.0 ? v : 0.0;
                break;
            case XvaKind::Dva:
                acc += v < 0.0 ? v : 0.0;
                break;
            case XvaKind::Fva:
                acc += v;
                break;
            }
        }
        const double weight = -(credit.lgd(party)) * (t - t_prev) * credit.hazard(party, t) *
                              credit.discount_q(0.0, t);
        total += weight * acc / n;
        t_prev = t;
    }
    return total;
}

namespace {
double checked_base(const std::function<double(double)>& pipeline) {
    const double b1 = pipeline(0.0);
    const double b2 = pipeline(0.0);
    if (std::memcmp(&b1, &b2, sizeof(double)) != 0)
        throw numeric_error("oracle: pipeline is not deterministic under repeated evaluation");
    return b1;
}
} // namespace

double bump_first(const std::function<double(double)>& pipeline, double h) {
    if (!(h > 0.0))
        throw config_error("oracle: bump size must be positive");
    checked_base(pipeline);
    return (pipeline(h) - pipeline(-h)) / (2.0 * h);
}

double bump_second(const std::function<double(double)>& pipeline, double h) {
    if (!(h > 0.0))
        throw config_error("oracle: bump size must be positive");
    const double base = checked_base(pipeline);
    return (pipeline(h) - 2.0 * base + pipeline(-h)) / (h * h);
}

double bump_cross(const std::function<double(double, double)>& pipeline, double h) {
    if (!(h > 0.0))
        throw config_error("oracle: bump size must be positive");
    const double b1 = pipeline(0.0, 0.0);
    const double b2 = pipeline(0.0, 0.0);
    if (std::memcmp(&b1, &b2, sizeof(double)) != 0)
        throw numeric_error("oracle: pipeline is not deterministic under repeated evaluation");
    return (pipeline(h, h) - pipeline(h, -h) - pipeline(-h, h) + pipeline(-h, -h)) /
           (4.0 * h * h);
}

} // namespace oracle
} // namespace xva
