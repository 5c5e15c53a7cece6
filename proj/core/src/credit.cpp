#include "xva/credit.hpp"

#include "xva/common.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace xva {

XvaKindSpec kind_spec(XvaKind kind) {
    switch (kind) {
    case XvaKind::Cva:
        return {Party::Counterparty, ExposureSelector::Positive};
    case XvaKind::Dva:
        return {Party::Bank, ExposureSelector::Negative};
    case XvaKind::Fca:
        return {Party::Bank, ExposureSelector::Positive};
    case XvaKind::Fva:
        return {Party::Bank, ExposureSelector::Blank};
    }
    throw config_error("xva: unknown kind");
}

std::string to_string(XvaKind kind) {
    switch (kind) {
    case XvaKind::Cva:
        return "cva";
    case XvaKind::Dva:
        return "dva";
    case XvaKind::Fca:
        return "fca";
    case XvaKind::Fva:
        return "fva";
    }
    return "?";
}

XvaKind parse_xva_kind(const std::string& s) {
    if (s == "cva")
        return XvaKind::Cva;
    if (s == "dva")
        return XvaKind::Dva;
    if (s == "fca")
        return XvaKind::Fca;
    if (s == "fva")
        return XvaKind::Fva;
    throw config_error("xva: unknown measure " + s);
}

PiecewiseFlatCurve::PiecewiseFlatCurve(std::vector<double> pillars, std::vector<double> values)
    : pillars_(std::move(pillars)), values_(std::move(values)) {
    if (values_.empty())
        throw config_error("curve: needs at least one value");
    if (pillars_.size() != values_.size())
        throw config_error("curve: pillars and values must have equal length");
    if (!std::is_sorted(pillars_.begin(), pillars_.end()))
        throw config_error("curve: pillars must be increasing");
    for (double p : pillars_)
        if (!(p > 0.0))
            throw config_error("curve: pillars must be positive");
}

PiecewiseFlatCurve PiecewiseFlatCurve::flat(double value) {
    return PiecewiseFlatCurve({1.0}, {value});
}

double PiecewiseFlatCurve::operator()(double t) const {
    const auto it = std::upper_bound(pillars_.begin(), pillars_.end(), t);
    const auto idx = static_cast<std::size_t>(it - pillars_.begin());
    return values_[std::min(idx, values_.size() - 1)];
}

double PiecewiseFlatCurve::integral(double a, double b) const {
    if (b < a)
        return -integral(b, a);
    double acc = 0.0;
    double lo = a;
    for (std::size_t i = 0; i < pillars_.size() && lo < b; ++i) {
        const double hi = std::min(b, pillars_[i]);
        if (hi > lo) {
            acc += values_[i] * (hi - lo);
            lo = hi;
        }
    }
    if (lo < b)
        acc += values_.back() * (b - lo);
    return acc;
}

CreditCurve::CreditCurve(PiecewiseFlatCurve lambda_bank, PiecewiseFlatCurve lambda_cpty,
                         PiecewiseFlatCurve riskless, double lgd_bank, double lgd_cpty)
    : lambda_bank_(std::move(lambda_bank)), lambda_cpty_(std::move(lambda_cpty)),
      riskless_(std::move(riskless)), lgd_bank_(lgd_bank), lgd_cpty_(lgd_cpty) {
    for (double v : lambda_bank_.values())
        if (v < 0.0)
            throw config_error("credit: lambdaB must be nonnegative");
    for (double v : lambda_cpty_.values())
        if (v < 0.0)
            throw config_error("credit: lambdaC must be nonnegative");
    if (lgd_bank_ < 0.0 || lgd_bank_ > 1.0 || lgd_cpty_ < 0.0 || lgd_cpty_ > 1.0)
        throw config_error("credit: LGD must lie in [0,1]");
}

double CreditCurve::hazard(Party p, double t) const {
    return p == Party::Bank ? lambda_bank_(t) : lambda_cpty_(t);
}

double CreditCurve::lgd(Party p) const { return p == Party::Bank ? lgd_bank_ : lgd_cpty_; }

double CreditCurve::riskless(double t) const { return riskless_(t); }

double CreditCurve::discount_q(double t, double u) const {
    return std::exp(-(riskless_.integral(t, u) + lambda_bank_.integral(t, u) +
                      lambda_cpty_.integral(t, u)));
}

double CreditCurve::discount_r(double t, double u) const {
    return std::exp(-riskless_.integral(t, u));
}

double CreditCurve::survival(double t, double u) const {
    return std::exp(-(lambda_bank_.integral(t, u) + lambda_cpty_.integral(t, u)));
}

CreditCurve CreditCurve::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw input_error(std::string("credit: ") + e.what());
    }
    const auto pillars = j.at("pillars").get<std::vector<double>>();
    auto curve = [&](const char* key) {
        auto vals = j.at(key).get<std::vector<double>>();
        return PiecewiseFlatCurve(pillars, std::move(vals));
    };
    CreditCurve out(curve("lambdaB"), curve("lambdaC"), curve("r"), j.at("lgdB").get<double>(),
                    j.at("lgdC").get<double>());
    if (j.contains("lgdRegression"))
        out.lgd_regression = j["lgdRegression"].get<std::vector<double>>();
    if (j.contains("pdRegression"))
        out.pd_regression = j["pdRegression"].get<std::vector<double>>();
    return out;
}

CreditCurve CreditCurve::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw config_error("credit: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

} // namespace xva
