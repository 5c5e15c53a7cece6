#pragma once

#include <string>
#include <vector>

namespace xva {

enum class Party { Bank, Counterparty };

// Exposure selector: positive part, negative part, or the whole value.
enum class ExposureSelector { Positive, Negative, Blank };

enum class XvaKind { Cva, Dva, Fca, Fva };

struct XvaKindSpec {
    Party party;
    ExposureSelector selector;
};

// The selector table: CVA=(C,+), DVA=(B,-), FCA=(B,+), FVA=DVA+FCA=(B,blank).
XvaKindSpec kind_spec(XvaKind kind);

std::string to_string(XvaKind kind);
XvaKind parse_xva_kind(const std::string& s);

// Right-continuous piecewise-flat curve: value(t) = values[i] for
// t in [pillars[i-1], pillars[i]), extended flat beyond the last pillar.
class PiecewiseFlatCurve {
public:
    PiecewiseFlatCurve() = default;
    PiecewiseFlatCurve(std::vector<double> pillars, std::vector<double> values);
    static PiecewiseFlatCurve flat(double value);

    double operator()(double t) const;
    // exact integral over [a, b]
    double integral(double a, double b) const;

    const std::vector<double>& pillars() const { return pillars_; }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> pillars_;
    std::vector<double> values_;
};

// Hazard rates, recoveries and the riskless rate entering the adjustment
// integral; the effective discount rate is q = r + lambda_B + lambda_C.
class CreditCurve {
public:
    CreditCurve() = default;
    CreditCurve(PiecewiseFlatCurve lambda_bank, PiecewiseFlatCurve lambda_cpty,
                PiecewiseFlatCurve riskless, double lgd_bank, double lgd_cpty);

    static CreditCurve from_json_text(const std::string& text);
    static CreditCurve from_json_file(const std::string& path);

    double hazard(Party p, double t) const;
    double lgd(Party p) const;
    double riskless(double t) const;

    // exp(-int_t^u q(s) ds), q = r + lambda_B + lambda_C
    double discount_q(double t, double u) const;
    // exp(-int_t^u r(s) ds)
    double discount_r(double t, double u) const;
    // exp(-int_t^u (lambda_B + lambda_C)(s) ds)
    double survival(double t, double u) const;

    // Optional regressions for state-dependent LGD/PD live in the xva
    // module; these raw coefficient vectors are carried from config.
    std::vector<double> lgd_regression;
    std::vector<double> pd_regression;

private:
    PiecewiseFlatCurve lambda_bank_;
    PiecewiseFlatCurve lambda_cpty_;
    PiecewiseFlatCurve riskless_;
    double lgd_bank_ = 0.0;
    double lgd_cpty_ = 0.0;
};

} // namespace xva
