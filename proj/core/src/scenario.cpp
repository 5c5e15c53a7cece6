#include "xva/scenario.hpp"

#include "xva/rng.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace xva {

namespace {

std::size_t line_of_offset(const std::string& text, std::size_t byte) {
    return 1 + static_cast<std::size_t>(
                   std::count(text.begin(), text.begin() + static_cast<long>(std::min(byte, text.size())), '\n'));
}

nlohmann::json parse_with_location(const std::string& text, const char* what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw input_error(std::string(what) + ": parse error at line " +
                          std::to_string(line_of_offset(text, e.byte)) + ": " + e.what());
    }
}

std::string read_file(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in)
        throw config_error(std::string(what) + ": cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool param_valid_for(ModelKind kind, ParamKind p) {
    switch (p) {
    case ParamKind::Initial:
    case ParamKind::Volatility:
        return true;
    case ParamKind::Drift:
        return kind == ModelKind::Gbm;
    case ParamKind::MeanLevel:
        return kind == ModelKind::GaussianRate;
    }
    return false;
}

} // namespace

void ModelConfig::validate() const {
    if (underlyings.empty())
        throw config_error("market: at least one underlying required");
    for (const auto& u : underlyings) {
        if (u.volatility < 0.0)
            throw config_error("market: volatility must be nonnegative for " + u.name);
        if (u.kind == ModelKind::Gbm && u.initial <= 0.0)
            throw config_error("market: GBM initial level must be positive for " + u.name);
        if (u.kind == ModelKind::GaussianRate && u.reversion < 0.0)
            throw config_error("market: reversion must be nonnegative for " + u.name);
    }
    const auto n = static_cast<long>(underlyings.size());
    if (correlation.size() != 0) {
        if (correlation.rows() != n || correlation.cols() != n)
            throw config_error("market: correlation dimension mismatch");
        if ((correlation - correlation.transpose()).cwiseAbs().maxCoeff() > 1e-12)
            throw config_error("market: correlation matrix must be symmetric");
        correlation_root(); // PSD check
    }
    for (const auto& inst : instruments) {
        if (inst.targets.empty())
            throw config_error("market: instrument " + inst.name + " maps to no model parameter");
        for (const auto& t : inst.targets) {
            if (t.underlying >= underlyings.size())
                throw config_error("market: instrument " + inst.name + " targets unknown underlying");
            if (!param_valid_for(underlyings[t.underlying].kind, t.parameter))
                throw config_error("market: instrument " + inst.name +
                                   " targets a parameter its model does not have");
        }
    }
    if (!dates.empty()) {
        if (dates.front() <= 0.0)
            throw config_error("market: stopping dates must be positive");
        for (std::size_t k = 1; k < dates.size(); ++k)
            if (dates[k] <= dates[k - 1])
                throw config_error("market: stopping dates must be strictly increasing");
    }
    if (augmentation) {
        if (augmentation->scenarios.empty() && augmentation->subsample != 0)
            throw config_error("market: augmentation lists no displacement scenarios");
        for (const auto& s : augmentation->scenarios)
            if (s.size() != underlyings.size())
                throw config_error("market: displacement scenario must cover each underlying");
    }
}

std::size_t ModelConfig::underlying_index(const std::string& name) const {
    for (std::size_t b = 0; b < underlyings.size(); ++b)
        if (underlyings[b].name == name)
            return b;
    throw config_error("market: unknown underlying " + name);
}

const CalibrationInstrument& ModelConfig::instrument(const std::string& name) const {
    for (const auto& inst : instruments)
        if (inst.name == name)
            return inst;
    throw config_error("market: unknown instrument " + name);
}

Eigen::MatrixXd ModelConfig::correlation_root() const {
    const auto n = static_cast<long>(underlyings.size());
    if (correlation.size() == 0)
        return Eigen::MatrixXd::Identity(n, n);
    Eigen::LLT<Eigen::MatrixXd> llt(correlation);
    if (llt.info() == Eigen::Success)
        return llt.matrixL();
    // Semi-definite case: eigenvalue root; indefinite input is rejected.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(correlation);
    const Eigen::VectorXd ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    if (ev.minCoeff() < -1e-10 * scale)
        throw config_error("market: correlation matrix is not positive semi-definite");
    return es.eigenvectors() * ev.cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

std::uint64_t ModelConfig::fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& u : underlyings) {
        h = fnv1a(u.name, h);
        h = fnv1a(&u.kind, sizeof(u.kind), h);
        const double params[] = {u.initial, u.volatility, u.drift, u.reversion, u.mean_level};
        h = fnv1a(params, sizeof(params), h);
    }
    if (correlation.size() != 0)
        h = fnv1a(correlation.data(), static_cast<std::size_t>(correlation.size()) * sizeof(double), h);
    h = fnv1a(dates.data(), dates.size() * sizeof(double), h);
    h = fnv1a(&n_paths, sizeof(n_paths), h);
    h = fnv1a(&seed, sizeof(seed), h);
    return h;
}

ScenarioCube::ScenarioCube(std::vector<double> dates, std::size_t n_paths,
                           std::size_t n_underlyings, CubeMeasure measure, std::uint64_t seed)
    : dates_(std::move(dates)), n_paths_(n_paths), n_original_paths_(n_paths),
      n_underlyings_(n_underlyings), measure_(measure), seed_(seed),
      data_(dates_.size() * n_paths * n_underlyings, 0.0) {
    if (n_paths_ == 0)
        throw config_error("cube: at least one path required");
    for (std::size_t k = 1; k < dates_.size(); ++k)
        if (dates_[k] <= dates_[k - 1])
            throw config_error("cube: dates must be strictly increasing");
}

std::size_t ScenarioCube::date_index(double t) const {
    for (std::size_t k = 0; k < dates_.size(); ++k)
        if (std::abs(dates_[k] - t) <= 1e-12)
            return k;
    throw config_error("cube: date " + std::to_string(t) + " is not on the stopping grid");
}

std::vector<double> ScenarioCube::state(std::size_t path, std::size_t date) const {
    std::vector<double> s(n_underlyings_);
    for (std::size_t b = 0; b < n_underlyings_; ++b)
        s[b] = value(path, date, b);
    return s;
}

std::uint64_t ScenarioCube::fingerprint() const {
    std::uint64_t h = fnv1a(&seed_, sizeof(seed_));
    h = fnv1a(dates_.data(), dates_.size() * sizeof(double), h);
    h = fnv1a(&n_paths_, sizeof(n_paths_), h);
    h = fnv1a(&n_original_paths_, sizeof(n_original_paths_), h);
    h = fnv1a(&n_underlyings_, sizeof(n_underlyings_), h);
    h = fnv1a(&measure_, sizeof(measure_), h);
    h = fnv1a(&model_digest_, sizeof(model_digest_), h);
    return h;
}

namespace {

// Exact one-step transition factors for the Gaussian rate model.
struct RateStep {
    double pull;  // exp(-kappa dt)
    double noise; // sigma * sqrt((1 - exp(-2 kappa dt)) / (2 kappa))
    double noise_per_vol;
};

RateStep rate_step(const UnderlyingModel& u, double dt) {
    RateStep s;
    const double k = u.reversion;
    s.pull = std::exp(-k * dt);
    const double var_unit = k > 1e-12 ? -std::expm1(-2.0 * k * dt) / (2.0 * k) : dt;
    s.noise_per_vol = std::sqrt(var_unit);
    s.noise = u.volatility * s.noise_per_vol;
    return s;
}

} // namespace

ScenarioCube generate_scenarios(const ModelConfig& config, std::size_t n_paths,
                                std::vector<double> dates, std::uint64_t seed) {
    config.validate();
    if (n_paths < 1)
        throw config_error("market: n_paths must be at least 1");
    if (dates.empty())
        throw config_error("market: at least one stopping date required");
    for (std::size_t k = 0; k < dates.size(); ++k)
        if (dates[k] <= (k == 0 ? 0.0 : dates[k - 1]))
            throw config_error("market: stopping dates must be strictly increasing and positive");

    const std::size_t n_und = config.underlyings.size();
    ScenarioCube cube(dates, n_paths, n_und, CubeMeasure::RiskNeutral, seed);
    cube.set_model_digest(config.fingerprint());
    const Eigen::MatrixXd root = config.correlation_root();

    parallel_for(n_paths, [&](std::size_t begin, std::size_t end) {
        std::vector<double> raw(n_und), corr(n_und), x(n_und);
        for (std::size_t j = begin; j < end; ++j) {
            for (std::size_t b = 0; b < n_und; ++b)
                x[b] = config.underlyings[b].initial;
            double t_prev = 0.0;
            for (std::size_t k = 0; k < dates.size(); ++k) {
                const double dt = dates[k] - t_prev;
                for (std::size_t d = 0; d < n_und; ++d)
                    raw[d] = rng::normal(seed, j, k, d);
                for (std::size_t b = 0; b < n_und; ++b) {
                    double z = 0.0;
                    for (std::size_t d = 0; d < n_und; ++d)
                        z += root(static_cast<long>(b), static_cast<long>(d)) * raw[d];
                    corr[b] = z;
                }
                for (std::size_t b = 0; b < n_und; ++b) {
                    const auto& u = config.underlyings[b];
                    if (u.kind == ModelKind::Gbm) {
                        const double drift = (u.drift - 0.5 * u.volatility * u.volatility) * dt;
                        x[b] *= std::exp(drift + u.volatility * std::sqrt(dt) * corr[b]);
                    } else {
                        const RateStep s = rate_step(u, dt);
                        x[b] = u.mean_level + (x[b] - u.mean_level) * s.pull + s.noise * corr[b];
                    }
                    cube.value(j, k, b) = x[b];
                }
                t_prev = dates[k];
            }
        }
    });
    return cube;
}

ScenarioCube generate_scenarios(const ModelConfig& config) {
    return generate_scenarios(config, config.n_paths, config.dates, config.seed);
}

ScenarioCube augment_state_space(const ScenarioCube& cube, const ModelConfig& config,
                                 const AugmentationSpec& spec) {
    if (spec.scenarios.empty())
        return cube; // zero displacements: identity
    for (const auto& s : spec.scenarios)
        if (s.size() != cube.n_underlyings())
            throw config_error("augmentation: displacement must cover each underlying");
    const std::size_t sub = spec.subsample == 0 ? cube.n_paths() : spec.subsample;
    if (sub > cube.n_paths())
        throw config_error("augmentation: subsample exceeds path count");
    (void)config;

    const std::size_t extra = sub * spec.scenarios.size();
    ScenarioCube out(cube.dates(), cube.n_paths() + extra, cube.n_underlyings(),
                     CubeMeasure::HistoricalShock, cube.seed());
    out.set_model_digest(cube.model_digest());
    for (std::size_t k = 0; k < cube.n_dates(); ++k) {
        for (std::size_t j = 0; j < cube.n_paths(); ++j)
            for (std::size_t b = 0; b < cube.n_underlyings(); ++b)
                out.value(j, k, b) = cube.value(j, k, b);
        std::size_t dst = cube.n_paths();
        for (const auto& disp : spec.scenarios) {
            for (std::size_t j = 0; j < sub; ++j, ++dst) {
                for (std::size_t b = 0; b < cube.n_underlyings(); ++b) {
                    const double v = cube.value(j, k, b);
                    out.value(dst, k, b) = spec.additive ? v + disp[b] : v * disp[b];
                }
            }
        }
    }
    out.mark_augmented(cube.n_paths());
    return out;
}

UnderlyingJacobian::UnderlyingJacobian(std::vector<std::string> instruments, bool second_order,
                                       std::size_t n_paths, std::size_t n_dates,
                                       std::size_t n_underlyings)
    : names_(std::move(instruments)), second_order_(second_order), n_paths_(n_paths),
      n_dates_(n_dates), n_underlyings_(n_underlyings) {
    const std::size_t sz = n_paths_ * n_dates_ * n_underlyings_;
    first_.assign(names_.size(), std::vector<double>(sz, 0.0));
    if (second_order_) {
        for (std::size_t s = 0; s < names_.size(); ++s)
            for (std::size_t r = s; r < names_.size(); ++r)
                second_[{s, r}] = std::vector<double>(sz, 0.0);
    }
}

bool UnderlyingJacobian::has_instrument(const std::string& name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::size_t UnderlyingJacobian::instrument_index(const std::string& name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end())
        throw config_error("jacobian: instrument " + name + " not present");
    return static_cast<std::size_t>(it - names_.begin());
}

double UnderlyingJacobian::first(std::size_t instrument, std::size_t path, std::size_t date,
                                 std::size_t underlying) const {
    return first_.at(instrument)[offset(path, date, underlying)];
}

double& UnderlyingJacobian::first_ref(std::size_t instrument, std::size_t path, std::size_t date,
                                      std::size_t underlying) {
    return first_.at(instrument)[offset(path, date, underlying)];
}

double UnderlyingJacobian::second(std::size_t s, std::size_t r, std::size_t path, std::size_t date,
                                  std::size_t underlying) const {
    if (!second_order_)
        throw config_error("jacobian: second order not computed");
    const auto key = std::minmax(s, r);
    return second_.at({key.first, key.second})[offset(path, date, underlying)];
}

double& UnderlyingJacobian::second_ref(std::size_t s, std::size_t r, std::size_t path,
                                       std::size_t date, std::size_t underlying) {
    const auto key = std::minmax(s, r);
    return second_.at({key.first, key.second})[offset(path, date, underlying)];
}

UnderlyingJacobian underlying_jacobian(const ScenarioCube& cube, const ModelConfig& config,
                                       const std::vector<std::string>& instruments,
                                       bool second_order) {
    config.validate();
    if (cube.augmented())
        throw config_error("jacobian: derivatives are defined on generated cubes only");
    if (cube.model_digest() != config.fingerprint())
        throw config_error("jacobian: cube was not generated from this model config");
    std::vector<const CalibrationInstrument*> insts;
    insts.reserve(instruments.size());
    for (const auto& name : instruments)
        insts.push_back(&config.instrument(name));

    const std::size_t n_und = config.underlyings.size();
    const std::size_t n_dates = cube.n_dates();
    UnderlyingJacobian jac(instruments, second_order, cube.n_paths(), n_dates, n_und);
    const Eigen::MatrixXd root = config.correlation_root();
    const std::uint64_t seed = cube.seed();
    const auto& dates = cube.dates();

    parallel_for(cube.n_paths(), [&](std::size_t begin, std::size_t end) {
        std::vector<double> raw(n_und), corr(n_und), x(n_und);
        // per-underlying tangent state
        std::vector<double> log_vol_accum(n_und), time_accum(n_und); // GBM: A and t
        std::vector<double> d_init(n_und), d_mean(n_und), d_vol(n_und); // Gaussian rate
        for (std::size_t j = begin; j < end; ++j) {
            for (std::size_t b = 0; b < n_und; ++b) {
                x[b] = config.underlyings[b].initial;
                log_vol_accum[b] = 0.0;
                time_accum[b] = 0.0;
                d_init[b] = 1.0;
                d_mean[b] = 0.0;
                d_vol[b] = 0.0;
            }
            double t_prev = 0.0;
            for (std::size_t k = 0; k < n_dates; ++k) {
                const double dt = dates[k] - t_prev;
                for (std::size_t d = 0; d < n_und; ++d)
                    raw[d] = rng::normal(seed, j, k, d);
                for (std::size_t b = 0; b < n_und; ++b) {
                    double z = 0.0;
                    for (std::size_t d = 0; d < n_und; ++d)
                        z += root(static_cast<long>(b), static_cast<long>(d)) * raw[d];
                    corr[b] = z;
                }
                for (std::size_t b = 0; b < n_und; ++b) {
                    const auto& u = config.underlyings[b];
                    if (u.kind == ModelKind::Gbm) {
                        const double drift = (u.drift - 0.5 * u.volatility * u.volatility) * dt;
                        x[b] *= std::exp(drift + u.volatility * std::sqrt(dt) * corr[b]);
                        log_vol_accum[b] += -u.volatility * dt + std::sqrt(dt) * corr[b];
                        time_accum[b] += dt;
                    } else {
                        const RateStep s = rate_step(u, dt);
                        x[b] = u.mean_level + (x[b] - u.mean_level) * s.pull + s.noise * corr[b];
                        d_init[b] *= s.pull;
                        d_mean[b] = d_mean[b] * s.pull + (1.0 - s.pull);
                        d_vol[b] = d_vol[b] * s.pull + s.noise_per_vol * corr[b];
                    }
                }
                // map parameter tangents onto instruments
                for (std::size_t si = 0; si < insts.size(); ++si) {
                    for (std::size_t b = 0; b < n_und; ++b) {
                        double g = 0.0;
                        for (const auto& t : insts[si]->targets) {
                            if (t.underlying != b)
                                continue;
                            const auto& u = config.underlyings[b];
                            if (u.kind == ModelKind::Gbm) {
                                switch (t.parameter) {
                                case ParamKind::Initial:
                                    g += x[b] / u.initial;
                                    break;
                                case ParamKind::Volatility:
                                    g += x[b] * log_vol_accum[b];
                                    break;
                                case ParamKind::Drift:
                                    g += x[b] * time_accum[b];
                                    break;
                                default:
                                    break;
                                }
                            } else {
                                switch (t.parameter) {
                                case ParamKind::Initial:
                                    g += d_init[b];
                                    break;
                                case ParamKind::Volatility:
                                    g += d_vol[b];
                                    break;
                                case ParamKind::MeanLevel:
                                    g += d_mean[b];
                                    break;
                                default:
                                    break;
                                }
                            }
                        }
                        jac.first_ref(si, j, k, b) = g;
                    }
                }
                if (second_order) {
                    for (std::size_t si = 0; si < insts.size(); ++si) {
                        for (std::size_t ri = si; ri < insts.size(); ++ri) {
                            for (std::size_t b = 0; b < n_und; ++b) {
                                const auto& u = config.underlyings[b];
                                if (u.kind != ModelKind::Gbm) {
                                    jac.second_ref(si, ri, j, k, b) = 0.0; // affine model
                                    continue;
                                }
                                double h = 0.0;
                                for (const auto& ts : insts[si]->targets) {
                                    if (ts.underlying != b)
                                        continue;
                                    for (const auto& tr : insts[ri]->targets) {
                                        if (tr.underlying != b)
                                            continue;
                                        const double A = log_vol_accum[b];
                                        const double T = time_accum[b];
                                        const ParamKind p = ts.parameter, q = tr.parameter;
                                        auto both = [&](ParamKind a1, ParamKind a2) {
                                            return (p == a1 && q == a2) || (p == a2 && q == a1);
                                        };
                                        if (p == ParamKind::Initial && q == ParamKind::Initial)
                                            h += 0.0;
                                        else if (both(ParamKind::Initial, ParamKind::Volatility))
                                            h += (x[b] / u.initial) * A;
                                        else if (both(ParamKind::Initial, ParamKind::Drift))
                                            h += (x[b] / u.initial) * T;
                                        else if (p == ParamKind::Volatility && q == ParamKind::Volatility)
                                            h += x[b] * (A * A - T);
                                        else if (both(ParamKind::Volatility, ParamKind::Drift))
                                            h += x[b] * T * A;
                                        else if (p == ParamKind::Drift && q == ParamKind::Drift)
                                            h += x[b] * T * T;
                                    }
                                }
                                jac.second_ref(si, ri, j, k, b) = h;
                            }
                        }
                    }
                }
                t_prev = dates[k];
            }
        }
    });
    return jac;
}

std::vector<double> ShockSet::shocked_state(std::size_t m) const {
    const auto& f = scenarios.at(m).factors;
    std::vector<double> out(base_state.size());
    for (std::size_t b = 0; b < base_state.size(); ++b)
        out[b] = additive ? base_state[b] + f[b] : base_state[b] * f[b];
    return out;
}

bool ShockSet::identity(std::size_t m) const {
    for (double f : scenarios.at(m).factors)
        if (f != (additive ? 0.0 : 1.0))
            return false;
    return true;
}

ShockSet ShockSet::rebase(std::vector<double> base) const {
    ShockSet out = *this;
    out.base_state = std::move(base);
    return out;
}

ShockSet generate_shock_scenarios(std::vector<double> base_state, const std::string& json_text,
                                  const ModelConfig& config) {
    const nlohmann::json j = parse_with_location(json_text, "shocks");
    if (!j.is_array())
        throw input_error("shocks: expected a top-level array of scenarios");
    if (j.size() < 2)
        throw config_error("shocks: at least 2 scenarios required");
    if (base_state.size() != config.underlyings.size())
        throw config_error("shocks: base state must cover each underlying");

    ShockSet out;
    out.base_state = std::move(base_state);
    double total_weight = 0.0;
    for (const auto& entry : j) {
        ShockScenario s;
        s.name = entry.value("name", "shock" + std::to_string(out.scenarios.size()));
        s.factors.assign(config.underlyings.size(), out.additive ? 0.0 : 1.0);
        if (entry.contains("displacements")) {
            for (const auto& [key, val] : entry["displacements"].items())
                s.factors[config.underlying_index(key)] = val.get<double>();
        }
        s.weight = entry.value("weight", 1.0);
        if (s.weight < 0.0)
            throw config_error("shocks: weights must be nonnegative");
        total_weight += s.weight;
        out.scenarios.push_back(std::move(s));
    }
    if (total_weight <= 0.0)
        throw config_error("shocks: weights must not all vanish");
    for (auto& s : out.scenarios)
        s.weight /= total_weight;
    return out;
}

ShockSet load_shock_file(std::vector<double> base_state, const std::string& path,
                         const ModelConfig& config) {
    return generate_shock_scenarios(std::move(base_state), read_file(path, "shocks"), config);
}

namespace {

ModelKind parse_model_kind(const std::string& s) {
    if (s == "gbm")
        return ModelKind::Gbm;
    if (s == "gaussian_rate")
        return ModelKind::GaussianRate;
    throw config_error("market: unknown model kind " + s);
}

ParamKind parse_param_kind(const std::string& s) {
    if (s == "initial")
        return ParamKind::Initial;
    if (s == "volatility")
        return ParamKind::Volatility;
    if (s == "drift")
        return ParamKind::Drift;
    if (s == "mean_level")
        return ParamKind::MeanLevel;
    throw config_error("market: unknown parameter kind " + s);
}

} // namespace

ModelConfig ModelConfig::from_json_text(const std::string& text) {
    const nlohmann::json j = parse_with_location(text, "market");
    ModelConfig cfg;
    for (const auto& uj : j.at("underlyings")) {
        UnderlyingModel u;
        u.name = uj.at("name").get<std::string>();
        u.kind = parse_model_kind(uj.at("model").get<std::string>());
        u.initial = uj.at("initial").get<double>();
        u.volatility = uj.at("volatility").get<double>();
        u.drift = uj.value("drift", 0.0);
        u.reversion = uj.value("reversion", 0.0);
        u.mean_level = uj.value("mean_level", u.initial);
        cfg.underlyings.push_back(std::move(u));
    }
    const auto n = static_cast<long>(cfg.underlyings.size());
    if (j.contains("correlation")) {
        const auto rows = j["correlation"].get<std::vector<std::vector<double>>>();
        cfg.correlation.resize(n, n);
        if (static_cast<long>(rows.size()) != n)
            throw config_error("market: correlation dimension mismatch");
        for (long r = 0; r < n; ++r) {
            if (static_cast<long>(rows[static_cast<std::size_t>(r)].size()) != n)
                throw config_error("market: correlation dimension mismatch");
            for (long c = 0; c < n; ++c)
                cfg.correlation(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        }
    }
    if (j.contains("instruments")) {
        for (const auto& ij : j["instruments"]) {
            CalibrationInstrument inst;
            inst.name = ij.at("name").get<std::string>();
            for (const auto& tj : ij.at("targets")) {
                InstrumentTarget t;
                t.underlying = cfg.underlying_index(tj.at("underlying").get<std::string>());
                t.parameter = parse_param_kind(tj.at("parameter").get<std::string>());
                inst.targets.push_back(t);
            }
            cfg.instruments.push_back(std::move(inst));
        }
    }
    cfg.dates = j.at("dates").get<std::vector<double>>();
    cfg.n_paths = j.at("paths").get<std::size_t>();
    cfg.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("augmentation")) {
        const auto& aj = j["augmentation"];
        AugmentationSpec spec;
        spec.subsample = aj.value("subsample", std::size_t{0});
        spec.additive = aj.value("additive", false);
        if (!aj.contains("displacements"))
            throw config_error("market: augmentation requires a displacements list");
        for (const auto& dj : aj["displacements"]) {
            std::vector<double> factors(cfg.underlyings.size(), spec.additive ? 0.0 : 1.0);
            for (const auto& [key, val] : dj.items())
                factors[cfg.underlying_index(key)] = val.get<double>();
            spec.scenarios.push_back(std::move(factors));
        }
        cfg.augmentation = std::move(spec);
    }
    cfg.validate();
    return cfg;
}

ModelConfig ModelConfig::from_json_file(const std::string& path) {
    return from_json_text(read_file(path, "market"));
}

} // namespace xva
