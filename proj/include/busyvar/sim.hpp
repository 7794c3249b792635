#pragma once

#include <cstdint>
#include <vector>

#include "busyvar/dist.hpp"

namespace busyvar {

struct SimConfig {
    double lambda = 1.0;
    ServiceTimeModel model;
    std::uint64_t n_busy_periods = 1;
    std::uint64_t seed = 0;
    unsigned n_streams = 1;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct SimStats {
    std::uint64_t n = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased, n-1 denominator
    Interval ci95_mean;
    Interval ci95_variance;
    std::uint64_t events = 0;  // arrivals processed
};

// Streaming central-moment accumulator (up to the fourth power), mergeable in
// a deterministic fixed order.
class MomentAccumulator {
public:
    void update(double x);
    void merge(const MomentAccumulator& other);

    std::uint64_t count() const { return n_; }
    double mean() const { return m1_; }
    // Central sums: m2 = sum (x - mean)^2 etc.
    double m2() const { return m2_; }
    double m3() const { return m3_; }
    double m4() const { return m4_; }
    double sample_variance() const;  // n-1 denominator
    double fourth_central_moment() const;

private:
    std::uint64_t n_ = 0;
    double m1_ = 0.0, m2_ = 0.0, m3_ = 0.0, m4_ = 0.0;
};

// Monte Carlo busy periods via the renewal scan: a busy period opens at an
// arrival to an empty system with coverage end E = t0 + S0; each exponential
// inter-arrival giving t < E extends E to max(E, t + S), otherwise the busy
// period closes with length E - t0 and the next opens at t. With infinitely
// many servers, departures never interact, so the coverage maximum carries
// the whole state.
//
// Busy periods are split across n_streams with substream seeds derived from
// (seed, stream); streams run in parallel and are merged in stream order, so
// a config maps to bit-identical statistics regardless of scheduling.
SimStats simulate_busy_periods(const SimConfig& cfg);

// Raw busy-period lengths in generation order per stream; identical seed
// gives an identical vector. Throws std::length_error above 1e8 samples.
std::vector<double> busy_period_samples(const SimConfig& cfg);

}  // namespace busyvar
