#include "xva/basis.hpp"

#include "xva/common.hpp"

#include <algorithm>
#include <numeric>

namespace xva {

BasisSpec::BasisSpec(BasisFamily family, std::vector<int> max_degree, bool cross_terms,
                     int max_total_degree)
    : family_(family), max_degree_(std::move(max_degree)), cross_terms_(cross_terms),
      max_total_degree_(max_total_degree) {
    if (max_degree_.empty())
        throw config_error("basis: at least one underlying required");
    for (int d : max_degree_)
        if (d < 0)
            throw config_error("basis: degrees must be nonnegative");
    if (cross_terms_ && max_total_degree_ < 0)
        throw config_error("basis: max total degree must be nonnegative");
    enumerate();
}

BasisSpec BasisSpec::quadratic(std::size_t n_underlyings, BasisFamily family) {
    return BasisSpec(family, std::vector<int>(n_underlyings, 2), true, 2);
}

void BasisSpec::enumerate() {
    const std::size_t n = max_degree_.size();
    std::vector<std::vector<int>> out;
    std::vector<int> idx(n, 0);
    // Enumerate all exponent tuples within the per-underlying caps, then
    // filter and sort graded-lexicographically.
    while (true) {
        const int total = std::accumulate(idx.begin(), idx.end(), 0);
        bool keep;
        if (cross_terms_) {
            keep = total <= max_total_degree_;
        } else {
            const auto nonzero = std::count_if(idx.begin(), idx.end(), [](int e) { return e > 0; });
            keep = nonzero <= 1;
        }
        if (keep)
            out.push_back(idx);
        // odometer increment
        std::size_t b = 0;
        for (; b < n; ++b) {
            if (idx[b] < max_degree_[b]) {
                ++idx[b];
                std::fill(idx.begin(), idx.begin() + static_cast<long>(b), 0);
                break;
            }
        }
        if (b == n)
            break;
    }
    std::sort(out.begin(), out.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
        const int ta = std::accumulate(a.begin(), a.end(), 0);
        const int tb = std::accumulate(b.begin(), b.end(), 0);
        if (ta != tb)
            return ta < tb;
        return a < b;
    });
    exponents_ = std::move(out);
    if (exponents_.empty())
        throw config_error("basis: empty function set");
}

void family_values(BasisFamily family, double x, int max_degree, std::vector<double>& p,
                   std::vector<double>& dp, std::vector<double>& d2p) {
    const std::size_t m = static_cast<std::size_t>(max_degree) + 1;
    p.assign(m, 0.0);
    dp.assign(m, 0.0);
    d2p.assign(m, 0.0);
    p[0] = 1.0;
    if (m == 1)
        return;
    p[1] = x;
    dp[1] = 1.0;
    if (family == BasisFamily::Monomial) {
        for (std::size_t k = 2; k < m; ++k) {
            p[k] = p[k - 1] * x;
            dp[k] = static_cast<double>(k) * p[k - 1];
            d2p[k] = static_cast<double>(k) * static_cast<double>(k - 1) * p[k - 2];
        }
    } else {
        // T_{k+1} = 2x T_k - T_{k-1}, differentiated twice.
        for (std::size_t k = 2; k < m; ++k) {
            p[k] = 2.0 * x * p[k - 1] - p[k - 2];
            dp[k] = 2.0 * p[k - 1] + 2.0 * x * dp[k - 1] - dp[k - 2];
            d2p[k] = 4.0 * dp[k - 1] + 2.0 * x * d2p[k - 1] - d2p[k - 2];
        }
    }
}

namespace {

struct FamilyTable {
    // per underlying: values/derivatives for degrees 0..max_degree[b]
    std::vector<std::vector<double>> p, dp, d2p;
};

FamilyTable make_table(const BasisSpec& spec, std::span<const double> state, bool derivs) {
    if (state.size() != spec.n_underlyings())
        throw config_error("basis: state dimension mismatch");
    FamilyTable t;
    const std::size_t n = spec.n_underlyings();
    t.p.resize(n);
    t.dp.resize(n);
    t.d2p.resize(n);
    for (std::size_t b = 0; b < n; ++b) {
        int maxd = 0;
        for (const auto& e : spec.exponents())
            maxd = std::max(maxd, e[b]);
        family_values(spec.family(), state[b], maxd, t.p[b], t.dp[b], t.d2p[b]);
        (void)derivs;
    }
    return t;
}

} // namespace

Eigen::VectorXd BasisSpec::eval(std::span<const double> state) const {
    const FamilyTable t = make_table(*this, state, false);
    Eigen::VectorXd out(static_cast<long>(size()));
    for (std::size_t l = 0; l < size(); ++l) {
        double v = 1.0;
        for (std::size_t b = 0; b < n_underlyings(); ++b)
            v *= t.p[b][static_cast<std::size_t>(exponents_[l][b])];
        out[static_cast<long>(l)] = v;
    }
    return out;
}

Eigen::MatrixXd BasisSpec::gradient(std::span<const double> state) const {
    const FamilyTable t = make_table(*this, state, true);
    Eigen::MatrixXd out(static_cast<long>(size()), static_cast<long>(n_underlyings()));
    for (std::size_t l = 0; l < size(); ++l) {
        for (std::size_t c = 0; c < n_underlyings(); ++c) {
            double v = 1.0;
            for (std::size_t b = 0; b < n_underlyings(); ++b) {
                const auto e = static_cast<std::size_t>(exponents_[l][b]);
                v *= (b == c) ? t.dp[b][e] : t.p[b][e];
            }
            out(static_cast<long>(l), static_cast<long>(c)) = v;
        }
    }
    return out;
}

std::vector<Eigen::MatrixXd> BasisSpec::hessians(std::span<const double> state) const {
    const FamilyTable t = make_table(*this, state, true);
    const std::size_t n = n_underlyings();
    std::vector<Eigen::MatrixXd> out(size());
    for (std::size_t l = 0; l < size(); ++l) {
        Eigen::MatrixXd h(static_cast<long>(n), static_cast<long>(n));
        for (std::size_t c = 0; c < n; ++c) {
            for (std::size_t d = c; d < n; ++d) {
                double v = 1.0;
                for (std::size_t b = 0; b < n; ++b) {
                    const auto e = static_cast<std::size_t>(exponents_[l][b]);
                    if (b == c && b == d)
                        v *= t.d2p[b][e];
                    else if (b == c || b == d)
                        v *= t.dp[b][e];
                    else
                        v *= t.p[b][e];
                }
                h(static_cast<long>(c), static_cast<long>(d)) = v;
                h(static_cast<long>(d), static_cast<long>(c)) = v;
            }
        }
        out[l] = std::move(h);
    }
    return out;
}

std::uint64_t BasisSpec::fingerprint() const {
    std::uint64_t h = fnv1a(&family_, sizeof(family_));
    h = fnv1a(max_degree_.data(), max_degree_.size() * sizeof(int), h);
    h = fnv1a(&cross_terms_, sizeof(cross_terms_), h);
    h = fnv1a(&max_total_degree_, sizeof(max_total_degree_), h);
    return h;
}

Eigen::VectorXd eval_basis(const BasisSpec& spec, std::span<const double> state) {
    return spec.eval(state);
}

Eigen::MatrixXd basis_gradient(const BasisSpec& spec, std::span<const double> state) {
    return spec.gradient(state);
}

std::vector<Eigen::MatrixXd> basis_hessians(const BasisSpec& spec, std::span<const double> state) {
    return spec.hessians(state);
}

} // namespace xva
