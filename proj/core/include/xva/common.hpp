#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace xva {

// Bad configuration or inconsistent inputs supplied by the caller.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed numeric input (NaN targets, bad file contents with location info).
class input_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical failure inside a solver (rank collapse past recoverable truncation).
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Saved state and requested operation refer to different scenario cubes.
class state_mismatch_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Neumaier-compensated accumulator. Used wherever a reduction feeds an
// additivity identity that is tested at the ulp level.
class CompensatedSum {
public:
    void add(double v) {
        double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Global work counters backing the spec'd cost claims (one SVD per date,
// |set| x |trades| evaluations for tail allocation, zero original-trade
// revaluations in incremental updates). Tests reset and read them.
struct WorkCounters {
    std::atomic<long long> svd_factorizations{0};
    std::atomic<long long> back_substitutions{0};
    std::atomic<long long> trade_valuations{0};

    void reset() {
        svd_factorizations = 0;
        back_substitutions = 0;
        trade_valuations = 0;
    }
};

WorkCounters& work_counters();

// Degree of parallelism used by parallel_for. Results never depend on it.
void set_max_threads(unsigned n);
unsigned max_threads();

// Runs fn(begin, end) over disjoint chunks of [0, n), possibly on several
// threads. fn must only write to slots it owns. Exceptions propagate.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

// 64-bit FNV-1a, used for content fingerprints of cubes and saved state.
std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a(const std::string& s, std::uint64_t seed = 0xcbf29ce484222325ULL);

} // namespace xva
