#pragma once

#include "xva/credit.hpp"
#include "xva/portfolio.hpp"
#include "xva/scenario.hpp"

#include <functional>
#include <span>
#include <vector>

namespace xva {

struct OracleConfig {
    double bump_size = 1e-5;
    bool common_random_numbers = true;
    bool frozen_conditioning = true;

    void validate() const;
};

namespace oracle {

// Analytic value of a trade at a given per-underlying state and date.
// Supported pairs: forward/european option on GBM, swaplet on the Gaussian
// rate, polynomial marks on anything. Bermudans have no closed form here.
double closed_form_value(const Trade& trade, std::span<const double> state,
                         const ModelConfig& config, const CreditCurve& credit, double t);

double black_scholes(double forward, double strike, double stddev, bool call);

// Direct pathwise xVA: closed-form netting-set values per path, indicator
// applied pathwise, same rectangle time integration as the engine. Never
// touches regression code.
double brute_force_xva(std::span<const Trade> trades, const ScenarioCube& cube,
                       const ModelConfig& config, const CreditCurve& credit, XvaKind kind);

// Per-path per-date closed-form netting values (paths x dates).
Eigen::MatrixXd brute_force_values(std::span<const Trade> trades, const ScenarioCube& cube,
                                   const ModelConfig& config, const CreditCurve& credit);

// Central difference (f(+h)-f(-h))/2h. Evaluates f(0) twice first and
// hard-errors if the pipeline is not deterministic.
double bump_first(const std::function<double(double)>& pipeline, double h);

// Three-point second difference (f(h)-2f(0)+f(-h))/h^2.
double bump_second(const std::function<double(double)>& pipeline, double h);

// Four-point cross stencil (f(+,+)-f(+,-)-f(-,+)+f(-,-))/(4h^2).
double bump_cross(const std::function<double(double, double)>& pipeline, double h);

} // namespace oracle

} // namespace xva
