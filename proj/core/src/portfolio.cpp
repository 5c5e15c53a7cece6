#include "xva/portfolio.hpp"

#include "xva/common.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace xva {

void Trade::validate(const ModelConfig& config) const {
    if (id.empty())
        throw config_error("portfolio: trade id must not be empty");
    if (underlying >= config.underlyings.size())
        throw config_error("portfolio: trade " + id + " references unknown underlying");
    if (direction != 1 && direction != -1)
        throw config_error("portfolio: trade " + id + " direction must be long or short");
    if (type == TradeType::Polynomial) {
        if (poly_coeffs.empty())
            throw config_error("portfolio: trade " + id + " needs polynomial coefficients");
        return;
    }
    if (dates.empty())
        throw config_error("portfolio: trade " + id + " needs at least one date");
    for (std::size_t i = 1; i < dates.size(); ++i)
        if (dates[i] <= dates[i - 1])
            throw config_error("portfolio: trade " + id + " dates must be increasing");
    const auto& grid = config.dates;
    for (double d : dates) {
        const bool on_grid = std::any_of(grid.begin(), grid.end(),
                                         [d](double g) { return std::abs(g - d) <= 1e-12; });
        if (!on_grid)
            throw config_error("portfolio: trade " + id + " date " + std::to_string(d) +
                               " is not a stopping date");
    }
    const auto kind = config.underlyings[underlying].kind;
    if (type == TradeType::Swaplet && kind != ModelKind::GaussianRate)
        throw config_error("portfolio: swaplet " + id + " requires a rate underlying");
    if ((type == TradeType::Forward || type == TradeType::EuropeanOption ||
         type == TradeType::BermudanOption) &&
        kind != ModelKind::Gbm)
        throw config_error("portfolio: trade " + id + " requires a GBM underlying");
}

const Trade& Portfolio::by_id(const std::string& id) const {
    for (const auto& t : trades)
        if (t.id == id)
            return t;
    throw config_error("portfolio: unknown trade id " + id);
}

double intrinsic_value(const Trade& trade, double x) {
    const double cp = trade.right == OptionRight::Call ? 1.0 : -1.0;
    return trade.notional * (cp * (x - trade.strike));
}

Eigen::MatrixXd trade_targets(const Trade& trade, const ScenarioCube& cube,
                              const CreditCurve& credit) {
    const auto n_paths = static_cast<long>(cube.n_paths());
    const auto n_dates = static_cast<long>(cube.n_dates());
    Eigen::MatrixXd targets = Eigen::MatrixXd::Zero(n_paths, n_dates);
    const auto& dates = cube.dates();
    const double dir = static_cast<double>(trade.direction);

    switch (trade.type) {
    case TradeType::Polynomial: {
        for (long k = 0; k < n_dates; ++k) {
            for (long j = 0; j < n_paths; ++j) {
                const double x = cube.value(static_cast<std::size_t>(j),
                                            static_cast<std::size_t>(k), trade.underlying);
                double v = 0.0;
                for (std::size_t d = trade.poly_coeffs.size(); d-- > 0;)
                    v = v * x + trade.poly_coeffs[d];
                targets(j, k) = dir * trade.notional * v;
            }
        }
        return targets;
    }
    case TradeType::Forward: {
        const double T = trade.maturity();
        const std::size_t kT = cube.date_index(T);
        for (long k = 0; k < n_dates; ++k) {
            const double t = dates[static_cast<std::size_t>(k)];
            if (t > T)
                continue;
            const double df = credit.discount_r(t, T);
            for (long j = 0; j < n_paths; ++j) {
                const double xT = cube.value(static_cast<std::size_t>(j), kT, trade.underlying);
                targets(j, k) = dir * trade.notional * (xT - trade.strike) * df;
            }
        }
        return targets;
    }
    case TradeType::EuropeanOption: {
        const double T = trade.maturity();
        const std::size_t kT = cube.date_index(T);
        for (long k = 0; k < n_dates; ++k) {
            const double t = dates[static_cast<std::size_t>(k)];
            if (t > T)
                continue;
            const double df = credit.discount_r(t, T);
            for (long j = 0; j < n_paths; ++j) {
                const double xT = cube.value(static_cast<std::size_t>(j), kT, trade.underlying);
                const double payoff = std::max(intrinsic_value(trade, xT), 0.0);
                targets(j, k) = dir * payoff * df;
            }
        }
        return targets;
    }
    case TradeType::Swaplet: {
        const double T = trade.dates.front();
        const std::size_t kT = cube.date_index(T);
        for (long k = 0; k < n_dates; ++k) {
            const double t = dates[static_cast<std::size_t>(k)];
            if (t > T)
                continue;
            const double df = credit.discount_r(t, T);
            for (long j = 0; j < n_paths; ++j) {
                const double rT = cube.value(static_cast<std::size_t>(j), kT, trade.underlying);
                targets(j, k) = dir * trade.notional * trade.accrual * (rT - trade.strike) * df;
            }
        }
        return targets;
    }
    case TradeType::BermudanOption:
        throw config_error("portfolio: Bermudan targets require fit_portfolio");
    }
    throw config_error("portfolio: unhandled trade type");
}

namespace {

TradeType parse_trade_type(const std::string& s) {
    if (s == "forward")
        return TradeType::Forward;
    if (s == "swaplet")
        return TradeType::Swaplet;
    if (s == "european_option")
        return TradeType::EuropeanOption;
    if (s == "bermudan_option")
        return TradeType::BermudanOption;
    if (s == "polynomial")
        return TradeType::Polynomial;
    throw config_error("portfolio: unknown trade type " + s);
}

Trade parse_trade(const nlohmann::json& tj, const ModelConfig& config) {
    Trade t;
    t.id = tj.at("id").get<std::string>();
    t.type = parse_trade_type(tj.at("type").get<std::string>());
    t.underlying = config.underlying_index(tj.at("underlying").get<std::string>());
    if (tj.contains("strike"))
        t.strike = tj["strike"].get<double>();
    else if (tj.contains("rate"))
        t.strike = tj["rate"].get<double>();
    t.notional = tj.value("notional", 1.0);
    const std::string dir = tj.value("direction", "long");
    if (dir == "long")
        t.direction = 1;
    else if (dir == "short")
        t.direction = -1;
    else
        throw config_error("portfolio: trade " + t.id + " direction must be long or short");
    if (tj.contains("dates"))
        t.dates = tj["dates"].get<std::vector<double>>();
    if (tj.contains("right"))
        t.right = tj["right"].get<std::string>() == "put" ? OptionRight::Put : OptionRight::Call;
    t.accrual = tj.value("accrual", 1.0);
    if (tj.contains("coefficients"))
        t.poly_coeffs = tj["coefficients"].get<std::vector<double>>();
    t.validate(config);
    return t;
}

} // namespace

Portfolio Portfolio::from_json_text(const std::string& text, const ModelConfig& config) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw input_error(std::string("portfolio: ") + e.what());
    }
    Portfolio p;
    const nlohmann::json* trades = &j;
    if (j.is_object()) {
        p.increment = j.value("increment", false);
        trades = &j.at("trades");
    }
    if (!trades->is_array())
        throw input_error("portfolio: expected an array of trades");
    for (const auto& tj : *trades)
        p.trades.push_back(parse_trade(tj, config));
    // ids must be unique for allocation and regrouping
    std::vector<std::string> ids;
    for (const auto& t : p.trades)
        ids.push_back(t.id);
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
        throw config_error("portfolio: duplicate trade id");
    return p;
}

Portfolio Portfolio::from_json_file(const std::string& path, const ModelConfig& config) {
    std::ifstream in(path);
    if (!in)
        throw config_error("portfolio: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str(), config);
}

} // namespace xva
