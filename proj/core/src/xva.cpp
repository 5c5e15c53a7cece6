#include "xva/xva.hpp"

#include "xva/common.hpp"

#include <algorithm>
#include <cmath>

namespace xva {

namespace {
double clamp01(double v, long long& counter) {
    if (v < 0.0) {
        ++counter;
        return 0.0;
    }
    if (v > 1.0) {
        ++counter;
        return 1.0;
    }
    return v;
}
} // namespace

double eval_g(const Eigen::VectorXd& coefficients, const BasisSpec& spec,
              const LgdPdRegression& lgdpd, std::span<const double> state,
              ClampCounters* clamps) {
    ClampCounters local;
    ClampCounters& c = clamps ? *clamps : local;
    const Eigen::VectorXd f = spec.eval(state);
    const double value = coefficients.dot(f);
    double lgd = 1.0;
    if (lgdpd.lgd_coefficients)
        lgd = clamp01(lgdpd.lgd_coefficients->dot(f), c.lgd);
    double pd = 1.0;
    if (lgdpd.pd_coefficients)
        pd = clamp01(lgdpd.pd_coefficients->dot(f), c.pd);
    return value * lgd * pd;
}

const ConditioningSet& PortfolioConditioning::for_selector(ExposureSelector sel) const {
    switch (sel) {
    case ExposureSelector::Positive:
        return positive;
    case ExposureSelector::Negative:
        return negative;
    case ExposureSelector::Blank:
        break;
    }
    throw config_error("xva: blank selector has no single conditioning set");
}

XvaEngine::XvaEngine(const ScenarioCube& pricing_cube, BasisSpec spec, CreditCurve credit)
    : cube_(&pricing_cube), spec_(std::move(spec)), credit_(std::move(credit)) {
    basis_matrices_.resize(cube_->n_dates());
    std::vector<std::size_t> dates_idx(cube_->n_dates());
    parallel_for(cube_->n_dates(), [&](std::size_t begin, std::size_t end) {
        std::vector<double> state(cube_->n_underlyings());
        for (std::size_t k = begin; k < end; ++k) {
            Eigen::MatrixXd m(static_cast<long>(cube_->n_paths()),
                              static_cast<long>(spec_.size()));
            for (std::size_t j = 0; j < cube_->n_paths(); ++j) {
                for (std::size_t b = 0; b < cube_->n_underlyings(); ++b)
                    state[b] = cube_->value(j, k, b);
                m.row(static_cast<long>(j)) = spec_.eval(state).transpose();
            }
            basis_matrices_[k] = std::move(m);
        }
    });
    (void)dates_idx;
}

const Eigen::MatrixXd& XvaEngine::basis_matrix(std::size_t date) const {
    if (date >= basis_matrices_.size())
        throw config_error("xva: date index out of range");
    return basis_matrices_[date];
}

Eigen::MatrixXd XvaEngine::path_values(const std::vector<Eigen::VectorXd>& coefficients) const {
    if (coefficients.size() != cube_->n_dates())
        throw config_error("xva: coefficients must cover all stopping dates");
    Eigen::MatrixXd values(static_cast<long>(cube_->n_paths()),
                           static_cast<long>(cube_->n_dates()));
    for (std::size_t k = 0; k < cube_->n_dates(); ++k)
        values.col(static_cast<long>(k)) = basis_matrices_[k] * coefficients[k];
    return values;
}

PortfolioConditioning
XvaEngine::build_conditioning(const std::vector<Eigen::VectorXd>& coefficients) const {
    PortfolioConditioning out;
    out.values = path_values(coefficients);
    out.positive = sign_condition(out.values, Sign::Positive);
    out.negative = sign_condition(out.values, Sign::Negative);
    out.fingerprint = value_matrix_fingerprint(out.values);
    return out;
}

std::vector<Eigen::VectorXd>
XvaEngine::conditioned_basis_sums(const ConditioningSet& set) const {
    if (set.n_dates() != cube_->n_dates())
        throw config_error("xva: conditioning set does not cover all dates");
    std::vector<Eigen::VectorXd> sums(cube_->n_dates());
    for (std::size_t k = 0; k < cube_->n_dates(); ++k) {
        const auto& m = basis_matrices_[k];
        std::vector<CompensatedSum> acc(spec_.size());
        for (std::size_t j : set.indices(k))
            for (std::size_t l = 0; l < spec_.size(); ++l)
                acc[l].add(m(static_cast<long>(j), static_cast<long>(l)));
        Eigen::VectorXd s(static_cast<long>(spec_.size()));
        for (std::size_t l = 0; l < spec_.size(); ++l)
            s[static_cast<long>(l)] = acc[l].value();
        sums[k] = std::move(s);
    }
    return sums;
}

double XvaEngine::integration_weight(XvaKind kind, std::size_t date) const {
    const XvaKindSpec ks = kind_spec(kind);
    const double t = cube_->dates()[date];
    const double t_prev = date == 0 ? 0.0 : cube_->dates()[date - 1];
    return (t - t_prev) * credit_.hazard(ks.party, t) * credit_.discount_q(0.0, t);
}

double XvaEngine::conditioned_g_sum(const Eigen::VectorXd& coeffs, const ConditioningSet& set,
                                    std::size_t date, const LgdPdRegression& lgdpd,
                                    double pd_const, double lgd_const,
                                    ClampCounters& clamps) const {
    // State-dependent LGD/PD: per-path product of the three regressions.
    const auto& m = basis_matrices_[date];
    CompensatedSum acc;
    for (std::size_t j : set.indices(date)) {
        const Eigen::VectorXd f = m.row(static_cast<long>(j)).transpose();
        const double value = coeffs.dot(f);
        const double lgd = lgdpd.lgd_coefficients
                               ? clamp01(lgdpd.lgd_coefficients->dot(f), clamps.lgd)
                               : lgd_const;
        const double pd =
            lgdpd.pd_coefficients ? clamp01(lgdpd.pd_coefficients->dot(f), clamps.pd) : pd_const;
        acc.add(value * lgd * pd);
    }
    return acc.value();
}

XvaResult XvaEngine::compute_xva(const std::vector<Eigen::VectorXd>& coefficients, XvaKind kind,
                                 const PortfolioConditioning* conditioning,
                                 const LgdPdRegression* lgdpd) const {
    if (coefficients.size() != cube_->n_dates())
        throw config_error("xva: coefficients must cover all stopping dates");
    const XvaKindSpec ks = kind_spec(kind);
    PortfolioConditioning local;
    if (!conditioning) {
        local = build_conditioning(coefficients);
        conditioning = &local;
    }

    XvaResult out;
    out.kind = kind;
    out.per_date.resize(cube_->n_dates());
    const double n = static_cast<double>(cube_->n_paths());
    const double lgd_const = credit_.lgd(ks.party);
    const bool state_dependent = lgdpd && lgdpd->state_dependent();

    // Cached basis sums make the conditioned value sum a dot product per
    // date; they are shared by every trade and every group of trades.
    std::vector<Eigen::VectorXd> s_pos, s_neg;
    if (!state_dependent) {
        if (ks.selector != ExposureSelector::Negative)
            s_pos = conditioned_basis_sums(conditioning->positive);
        if (ks.selector != ExposureSelector::Positive)
            s_neg = conditioned_basis_sums(conditioning->negative);
    }

    double t_prev = 0.0;
    for (std::size_t k = 0; k < cube_->n_dates(); ++k) {
        const double t = cube_->dates()[k];
        const double dt = t - t_prev;
        const double lambda = credit_.hazard(ks.party, t);
        const double dq = credit_.discount_q(0.0, t);

        double contribution;
        if (state_dependent) {
            // PD regression replaces lambda*dt, LGD regression replaces the
            // curve constant; either may fall back independently.
            const double pd_const = lambda * dt;
            const double w = -dq / n;
            switch (ks.selector) {
            case ExposureSelector::Positive:
                contribution = w * conditioned_g_sum(coefficients[k], conditioning->positive, k,
                                                     *lgdpd, pd_const, lgd_const, out.clamps);
                break;
            case ExposureSelector::Negative:
                contribution = w * conditioned_g_sum(coefficients[k], conditioning->negative, k,
                                                     *lgdpd, pd_const, lgd_const, out.clamps);
                break;
            case ExposureSelector::Blank:
                contribution = w * conditioned_g_sum(coefficients[k], conditioning->positive, k,
                                                     *lgdpd, pd_const, lgd_const, out.clamps) +
                               w * conditioned_g_sum(coefficients[k], conditioning->negative, k,
                                                     *lgdpd, pd_const, lgd_const, out.clamps);
                break;
            default:
                throw config_error("xva: bad selector");
            }
        } else {
            const double w = -lgd_const * dt * lambda * dq / n;
            switch (ks.selector) {
            case ExposureSelector::Positive:
                contribution = w * coefficients[k].dot(s_pos[k]);
                break;
            case ExposureSelector::Negative:
                contribution = w * coefficients[k].dot(s_neg[k]);
                break;
            case ExposureSelector::Blank:
                // Written as positive-part plus negative-part so the
                // FVA = DVA + FCA identity holds bit-for-bit.
                contribution =
                    w * coefficients[k].dot(s_pos[k]) + w * coefficients[k].dot(s_neg[k]);
                break;
            default:
                throw config_error("xva: bad selector");
            }
        }
        out.per_date[k] = contribution;
        t_prev = t;
    }

    double total = 0.0;
    for (double v : out.per_date)
        total += v;
    out.total = total;

    switch (ks.selector) {
    case ExposureSelector::Positive:
        out.conditioning = conditioning->positive;
        break;
    case ExposureSelector::Negative:
        out.conditioning = conditioning->negative;
        break;
    case ExposureSelector::Blank: {
        out.conditioning = conditioning->positive;
        out.conditioning_negative = conditioning->negative;
        // Direct unconditioned value as a cross-check (single pass over all
        // paths, no indicator).
        if (!state_dependent) {
            double direct = 0.0;
            double tp = 0.0;
            for (std::size_t k = 0; k < cube_->n_dates(); ++k) {
                const double t = cube_->dates()[k];
                const double w = -lgd_const * (t - tp) * credit_.hazard(ks.party, t) *
                                 credit_.discount_q(0.0, t) / n;
                CompensatedSum acc;
                const Eigen::VectorXd vals = basis_matrices_[k] * coefficients[k];
                for (long j = 0; j < vals.size(); ++j)
                    acc.add(vals[j]);
                direct += w * acc.value();
                tp = t;
            }
            out.unconditioned_cross_check = direct;
        }
        break;
    }
    }
    return out;
}

XvaResult compute_xva(const std::vector<Eigen::VectorXd>& portfolio_coefficients,
                      const ScenarioCube& cube, const BasisSpec& spec, const CreditCurve& credit,
                      XvaKind kind, const LgdPdRegression* lgdpd) {
    XvaEngine engine(cube, spec, credit);
    return engine.compute_xva(portfolio_coefficients, kind, nullptr, lgdpd);
}

MarginResult compute_initial_margin(const Eigen::VectorXd& coefficients, const BasisSpec& spec,
                                    const ShockSet& shocks, double alpha, RiskMeasure measure) {
    if (shocks.scenarios.empty())
        throw config_error("margin: shock set is empty");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw config_error("margin: alpha must lie in (0,1)");
    const double base_value = evaluate_regression(coefficients, spec, shocks.base_state);
    MarginResult out;
    out.losses.resize(shocks.scenarios.size());
    for (std::size_t m = 0; m < shocks.scenarios.size(); ++m) {
        const auto state = shocks.shocked_state(m);
        const double shocked = evaluate_regression(coefficients, spec, state);
        out.losses[m] = base_value - shocked;
    }
    if (measure == RiskMeasure::Es) {
        out.set = es_condition(out.losses, alpha);
        const auto& ix = out.set.indices(0);
        CompensatedSum num;
        double denom = 0.0;
        for (std::size_t m : ix) {
            num.add(shocks.scenarios[m].weight * out.losses[m]);
            denom += shocks.scenarios[m].weight;
        }
        out.margin = denom > 0.0 ? num.value() / denom : 0.0;
    } else {
        out.set = var_condition(out.losses, alpha);
        out.margin = out.losses[out.set.indices(0).front()];
    }
    return out;
}

std::vector<double> lifetime_margins(const XvaEngine& engine,
                                     const std::vector<Eigen::VectorXd>& coefficients,
                                     const ShockSet& shocks, double alpha, RiskMeasure measure,
                                     std::size_t lifetime_paths) {
    const auto& cube = engine.cube();
    const std::size_t n_use =
        lifetime_paths == 0 ? cube.n_paths() : std::min(lifetime_paths, cube.n_paths());
    std::vector<double> margins(cube.n_dates(), 0.0);
    parallel_for(cube.n_dates(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            CompensatedSum acc;
            for (std::size_t j = 0; j < n_use; ++j) {
                const ShockSet local = shocks.rebase(cube.state(j, k));
                acc.add(compute_initial_margin(coefficients[k], engine.basis(), local, alpha,
                                               measure)
                            .margin);
            }
            margins[k] = acc.value() / static_cast<double>(n_use);
        }
    });
    return margins;
}

MvaResult compute_mva(std::span<const double> per_date_margins, std::span<const double> dates,
                      const PiecewiseFlatCurve& funding_spread, const CreditCurve& credit,
                      bool survival_weighting) {
    if (per_date_margins.size() != dates.size())
        throw config_error("mva: margins must cover every stopping date");
    MvaResult out;
    out.per_date.resize(dates.size());
    out.margins.assign(per_date_margins.begin(), per_date_margins.end());
    double t_prev = 0.0;
    for (std::size_t k = 0; k < dates.size(); ++k) {
        const double t = dates[k];
        double w = (t - t_prev) * funding_spread(t) * credit.discount_q(0.0, t);
        if (survival_weighting)
            w *= credit.survival(0.0, t);
        out.per_date[k] = w * per_date_margins[k];
        t_prev = t;
    }
    double total = 0.0;
    for (double v : out.per_date)
        total += v;
    out.total = total;
    return out;
}

double trade_value_at(const RegressionSet& reg, std::size_t trade, std::size_t date,
                      std::span<const double> state) {
    work_counters().trade_valuations++;
    return evaluate_regression(reg.coefficients(trade, date), reg.basis(), state);
}

} // namespace xva
