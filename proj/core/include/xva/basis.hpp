#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

namespace xva {

enum class BasisFamily { Monomial, Chebyshev };

// Shared basis-function set. Every trade at a given stopping date is
// regressed on exactly this set; only coefficients are trade-specific.
class BasisSpec {
public:
    BasisSpec() = default;
    // max_degree: per-underlying cap. With cross_terms, all multi-indices up
    // to max_total_degree are included; without, only pure powers.
    BasisSpec(BasisFamily family, std::vector<int> max_degree, bool cross_terms, int max_total_degree);

    static BasisSpec quadratic(std::size_t n_underlyings, BasisFamily family = BasisFamily::Monomial);

    std::size_t size() const { return exponents_.size(); }
    std::size_t n_underlyings() const { return max_degree_.size(); }
    BasisFamily family() const { return family_; }

    // Multi-indices in graded-lexicographic order. exponents()[l][b] is the
    // degree of underlying b in basis function l.
    const std::vector<std::vector<int>>& exponents() const { return exponents_; }

    Eigen::VectorXd eval(std::span<const double> state) const;
    // gradient(l, b) = d f_l / d x_b
    Eigen::MatrixXd gradient(std::span<const double> state) const;
    // hessians[l](b, c) = d^2 f_l / d x_b d x_c
    std::vector<Eigen::MatrixXd> hessians(std::span<const double> state) const;

    std::uint64_t fingerprint() const;

private:
    BasisFamily family_ = BasisFamily::Monomial;
    std::vector<int> max_degree_;
    bool cross_terms_ = true;
    int max_total_degree_ = 2;
    std::vector<std::vector<int>> exponents_;

    void enumerate();
};

// 1-D family values and first two derivatives for degrees 0..max_degree.
// Monomials are exact in exact arithmetic; Chebyshev uses the standard
// three-term recurrences (no domain rescaling is applied).
void family_values(BasisFamily family, double x, int max_degree, std::vector<double>& p,
                   std::vector<double>& dp, std::vector<double>& d2p);

Eigen::VectorXd eval_basis(const BasisSpec& spec, std::span<const double> state);

// order 1: size x n_underlyings gradient matrix.
Eigen::MatrixXd basis_gradient(const BasisSpec& spec, std::span<const double> state);
// order 2: per basis function, an n_underlyings x n_underlyings Hessian.
std::vector<Eigen::MatrixXd> basis_hessians(const BasisSpec& spec, std::span<const double> state);

} // namespace xva
