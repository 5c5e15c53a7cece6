#pragma once

#include "xva/common.hpp"

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace xva {

enum class ModelKind { Gbm, GaussianRate };

// Model parameters admitting exact pathwise derivatives.
enum class ParamKind { Initial, Volatility, Drift, MeanLevel };

struct UnderlyingModel {
    std::string name;
    ModelKind kind = ModelKind::Gbm;
    double initial = 0.0;
    double volatility = 0.0;
    double drift = 0.0;      // GBM growth rate
    double reversion = 0.0;  // Gaussian rate kappa
    double mean_level = 0.0; // Gaussian rate theta
};

struct InstrumentTarget {
    std::size_t underlying = 0;
    ParamKind parameter = ParamKind::Initial;
};

// A named quote mapped to the model parameter(s) it determines.
struct CalibrationInstrument {
    std::string name;
    std::vector<InstrumentTarget> targets;
};

struct AugmentationSpec {
    std::size_t subsample = 0;                  // paths replicated per displacement
    std::vector<std::vector<double>> scenarios; // per scenario: factor per underlying
    bool additive = false;
};

struct ModelConfig {
    std::vector<UnderlyingModel> underlyings;
    Eigen::MatrixXd correlation; // empty = identity
    std::vector<CalibrationInstrument> instruments;
    std::vector<double> dates;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
    std::optional<AugmentationSpec> augmentation;

    void validate() const;
    std::size_t underlying_index(const std::string& name) const;
    const CalibrationInstrument& instrument(const std::string& name) const;
    std::uint64_t fingerprint() const;

    // Lower Cholesky-like factor of the correlation matrix (LDL-based so
    // positive semi-definite inputs are accepted; indefinite ones throw).
    Eigen::MatrixXd correlation_root() const;

    static ModelConfig from_json_text(const std::string& text);
    static ModelConfig from_json_file(const std::string& path);
};

enum class CubeMeasure { RiskNeutral, HistoricalShock };

// Underlying values per (path, stopping date, underlying). Immutable once
// generated; date-major storage so per-date slices are contiguous.
class ScenarioCube {
public:
    ScenarioCube() = default;
    ScenarioCube(std::vector<double> dates, std::size_t n_paths, std::size_t n_underlyings,
                 CubeMeasure measure, std::uint64_t seed);

    std::size_t n_paths() const { return n_paths_; }
    std::size_t n_dates() const { return dates_.size(); }
    std::size_t n_underlyings() const { return n_underlyings_; }
    const std::vector<double>& dates() const { return dates_; }
    std::size_t date_index(double t) const; // exact membership; throws otherwise
    CubeMeasure measure() const { return measure_; }
    std::uint64_t seed() const { return seed_; }

    double value(std::size_t path, std::size_t date, std::size_t underlying) const {
        return data_[offset(path, date, underlying)];
    }
    double& value(std::size_t path, std::size_t date, std::size_t underlying) {
        return data_[offset(path, date, underlying)];
    }
    // per-underlying state of one path at one date
    std::vector<double> state(std::size_t path, std::size_t date) const;

    std::size_t n_original_paths() const { return n_original_paths_; }
    bool augmented() const { return n_original_paths_ != n_paths_; }
    void mark_augmented(std::size_t original_paths) { n_original_paths_ = original_paths; }

    std::uint64_t model_digest() const { return model_digest_; }
    void set_model_digest(std::uint64_t d) { model_digest_ = d; }
    // Identity for incremental updates: ties saved state to this cube.
    std::uint64_t fingerprint() const;

    const std::vector<double>& raw() const { return data_; }

private:
    std::vector<double> dates_;
    std::size_t n_paths_ = 0;
    std::size_t n_original_paths_ = 0;
    std::size_t n_underlyings_ = 0;
    CubeMeasure measure_ = CubeMeasure::RiskNeutral;
    std::uint64_t seed_ = 0;
    std::uint64_t model_digest_ = 0;
    std::vector<double> data_;

    std::size_t offset(std::size_t path, std::size_t date, std::size_t underlying) const {
        return (date * n_paths_ + path) * n_underlyings_ + underlying;
    }
};

// Exact-in-distribution stepping (no Euler bias); deterministic for a fixed
// seed regardless of thread count.
ScenarioCube generate_scenarios(const ModelConfig& config, std::size_t n_paths,
                                std::vector<double> dates, std::uint64_t seed);
ScenarioCube generate_scenarios(const ModelConfig& config);

// Direct state-space augmentation: replicates the first `subsample` paths
// under each displacement scenario and appends them after the originals.
ScenarioCube augment_state_space(const ScenarioCube& cube, const ModelConfig& config,
                                 const AugmentationSpec& spec);

// Analytic pathwise derivatives of underlying values with respect to
// calibration instruments, on the same index layout as the cube.
class UnderlyingJacobian {
public:
    UnderlyingJacobian(std::vector<std::string> instruments, bool second_order,
                       std::size_t n_paths, std::size_t n_dates, std::size_t n_underlyings);

    bool has_instrument(const std::string& name) const;
    std::size_t instrument_index(const std::string& name) const;
    const std::vector<std::string>& instruments() const { return names_; }
    bool has_second_order() const { return second_order_; }

    double first(std::size_t instrument, std::size_t path, std::size_t date,
                 std::size_t underlying) const;
    double second(std::size_t instrument_s, std::size_t instrument_r, std::size_t path,
                  std::size_t date, std::size_t underlying) const;

    double& first_ref(std::size_t instrument, std::size_t path, std::size_t date,
                      std::size_t underlying);
    double& second_ref(std::size_t instrument_s, std::size_t instrument_r, std::size_t path,
                       std::size_t date, std::size_t underlying);

private:
    std::vector<std::string> names_;
    bool second_order_ = false;
    std::size_t n_paths_ = 0, n_dates_ = 0, n_underlyings_ = 0;
    std::vector<std::vector<double>> first_;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> second_;

    std::size_t offset(std::size_t path, std::size_t date, std::size_t underlying) const {
        return (date * n_paths_ + path) * n_underlyings_ + underlying;
    }
};

UnderlyingJacobian underlying_jacobian(const ScenarioCube& cube, const ModelConfig& config,
                                       const std::vector<std::string>& instruments,
                                       bool second_order = true);

struct ShockScenario {
    std::string name;
    std::vector<double> factors; // per underlying
    double weight = 0.0;
};

// Displacements applied at a base state, with normalized weights.
struct ShockSet {
    std::vector<double> base_state;
    std::vector<ShockScenario> scenarios;
    bool additive = false;

    std::vector<double> shocked_state(std::size_t m) const;
    bool identity(std::size_t m) const;
    // Re-anchor the same displacements at another base state.
    ShockSet rebase(std::vector<double> base) const;
};

ShockSet generate_shock_scenarios(std::vector<double> base_state, const std::string& json_text,
                                  const ModelConfig& config);
ShockSet load_shock_file(std::vector<double> base_state, const std::string& path,
                         const ModelConfig& config);

} // namespace xva
