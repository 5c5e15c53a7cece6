#pragma once

#include "xva/basis.hpp"
#include "xva/conditioning.hpp"
#include "xva/credit.hpp"
#include "xva/regression.hpp"
#include "xva/scenario.hpp"

#include <Eigen/Core>
#include <optional>
#include <span>
#include <vector>

namespace xva {

// Optional regressions for LGD(x,y) and PD(y) on the shared basis. Absent
// coefficients fall back to the neutral constants (1), so the product
// g = f * LGD * PD degenerates to f. Evaluated PD and LGD are clamped to
// [0,1]; clamps are counted and reported.
struct LgdPdRegression {
    std::optional<Eigen::VectorXd> lgd_coefficients;
    std::optional<Eigen::VectorXd> pd_coefficients;

    bool state_dependent() const {
        return lgd_coefficients.has_value() || pd_coefficients.has_value();
    }
};

struct ClampCounters {
    long long lgd = 0;
    long long pd = 0;
};

// The product function g(x) = f(x) * LGD(x) * PD(x) with clamped factors.
double eval_g(const Eigen::VectorXd& coefficients, const BasisSpec& spec,
              const LgdPdRegression& lgdpd, std::span<const double> state,
              ClampCounters* clamps = nullptr);

struct XvaResult {
    XvaKind kind = XvaKind::Cva;
    double total = 0.0;
    std::vector<double> per_date; // stored summands; total is their fixed-order sum
    ConditioningSet conditioning; // positive or negative set per the selector
    std::optional<ConditioningSet> conditioning_negative; // FVA carries both
    // FVA only: the same value computed directly without conditioning.
    std::optional<double> unconditioned_cross_check;
    ClampCounters clamps;
};

// Sign-based conditioning derived once from portfolio path values and
// shared by pricing, sensitivities, allocation and incremental updates.
struct PortfolioConditioning {
    Eigen::MatrixXd values; // paths x dates portfolio values on the pricing cube
    ConditioningSet positive;
    ConditioningSet negative;
    std::uint64_t fingerprint = 0;

    const ConditioningSet& for_selector(ExposureSelector sel) const;
};

// Binds the pricing cube, the shared basis and the credit curve; caches the
// per-date basis matrices so trade values are matrix-vector products.
class XvaEngine {
public:
    XvaEngine(const ScenarioCube& pricing_cube, BasisSpec spec, CreditCurve credit);

    const ScenarioCube& cube() const { return *cube_; }
    const BasisSpec& basis() const { return spec_; }
    const CreditCurve& credit() const { return credit_; }

    // paths x n_basis values of the shared basis at one stopping date
    const Eigen::MatrixXd& basis_matrix(std::size_t date) const;

    // path value matrix (paths x dates) for a coefficient vector per date
    Eigen::MatrixXd path_values(const std::vector<Eigen::VectorXd>& coefficients) const;

    PortfolioConditioning build_conditioning(const std::vector<Eigen::VectorXd>& coefficients) const;

    // Unnormalized basis sums over a selected set, one vector per date:
    // S_k[l] = sum_{j in set_k} f_l(x_{j,k}). Dotting with coefficient
    // vectors reproduces the conditioned value sums for any trade group.
    std::vector<Eigen::VectorXd> conditioned_basis_sums(const ConditioningSet& set) const;

    // Date-k integrand weight w_k = (t_k - t_{k-1}) lambda_*(t_k) D_q(0,t_k),
    // the -LGD_* factor applied separately.
    double integration_weight(XvaKind kind, std::size_t date) const;

    XvaResult compute_xva(const std::vector<Eigen::VectorXd>& coefficients, XvaKind kind,
                          const PortfolioConditioning* conditioning = nullptr,
                          const LgdPdRegression* lgdpd = nullptr) const;

private:
    const ScenarioCube* cube_;
    BasisSpec spec_;
    CreditCurve credit_;
    std::vector<Eigen::MatrixXd> basis_matrices_;

    double conditioned_g_sum(const Eigen::VectorXd& coeffs, const ConditioningSet& set,
                             std::size_t date, const LgdPdRegression& lgdpd, double pd_const,
                             double lgd_const, ClampCounters& clamps) const;
    friend struct XvaTermAccess;
};

// Free-function form: builds the engine pieces on the fly.
XvaResult compute_xva(const std::vector<Eigen::VectorXd>& portfolio_coefficients,
                      const ScenarioCube& cube, const BasisSpec& spec, const CreditCurve& credit,
                      XvaKind kind, const LgdPdRegression* lgdpd = nullptr);

enum class RiskMeasure { Es, Var };

struct MarginResult {
    double margin = 0.0;
    ConditioningSet set;
    std::vector<double> losses; // per shock scenario, loss = V(base) - V(shock)
};

// Portfolio P&L under each shock by regression evaluation at the shocked
// states; ES margin averages the selected losses (set-size normalization,
// weight-proportional within the set), VaR takes the boundary scenario.
MarginResult compute_initial_margin(const Eigen::VectorXd& coefficients, const BasisSpec& spec,
                                    const ShockSet& shocks, double alpha,
                                    RiskMeasure measure = RiskMeasure::Es);

// Per-date margins averaged over lifetime scenarios: at each stopping date
// the shock displacements are re-anchored at the first `lifetime_paths`
// path states and the scenario-level ES margins averaged.
std::vector<double> lifetime_margins(const XvaEngine& engine,
                                     const std::vector<Eigen::VectorXd>& coefficients,
                                     const ShockSet& shocks, double alpha, RiskMeasure measure,
                                     std::size_t lifetime_paths = 0);

struct MvaResult {
    double total = 0.0;
    std::vector<double> per_date;
    std::vector<double> margins;
};

// MVA = sum_k (t_k - t_{k-1}) spread(t_k) D_q(0,t_k) margin_k, optionally
// survival-weighted.
MvaResult compute_mva(std::span<const double> per_date_margins, std::span<const double> dates,
                      const PiecewiseFlatCurve& funding_spread, const CreditCurve& credit,
                      bool survival_weighting = false);

// Single-state trade valuation through the trade's regression; increments
// the trade-valuation work counter. This is the unit the tail-allocation
// and incremental work bounds are stated in.
double trade_value_at(const RegressionSet& reg, std::size_t trade, std::size_t date,
                      std::span<const double> state);

} // namespace xva
