#include "busyvar/sim.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "busyvar/errors.hpp"
#include "busyvar/rng.hpp"

namespace busyvar {

namespace {

constexpr double kZ975 = 1.959963984540054;  // standard normal 97.5% point

void validate(const SimConfig& cfg) {
    if (!(cfg.lambda > 0) || !std::isfinite(cfg.lambda)) {
        throw std::invalid_argument("simulate: lambda must be positive and finite");
    }
    if (cfg.n_busy_periods < 1) {
        throw std::invalid_argument("simulate: need at least one busy period");
    }
    if (cfg.n_streams < 1) {
        throw std::invalid_argument("simulate: need at least one stream");
    }
    if (!std::isfinite(cfg.model.moments().alpha)) {
        throw InfiniteMomentError("simulate: mean service time is infinite");
    }
}

std::uint64_t stream_share(std::uint64_t total, unsigned streams, unsigned index) {
    const std::uint64_t base = total / streams;
    return base + (index < total % streams ? 1 : 0);
}

// Renewal scan of one stream: emits busy-period lengths and counts arrivals.
template <class Emit>
void run_stream(double lambda, const ServiceTimeModel& model, std::uint64_t n,
                Rng rng, std::uint64_t& arrivals, Emit&& emit) {
    double t = 0.0;
    ++arrivals;  // the arrival opening the first busy period
    for (std::uint64_t k = 0; k < n; ++k) {
        const double t0 = t;
        double cover = t + model.sample(rng);
        for (;;) {
            t += -std::log1p(-rng.u01()) / lambda;
            ++arrivals;
            if (t < cover) {
                cover = std::max(cover, t + model.sample(rng));
            } else {
                emit(cover - t0);
                break;  // this arrival opens the next busy period
            }
        }
    }
}

}  // namespace

void MomentAccumulator::update(double x) {
    const double n1 = static_cast<double>(n_);
    ++n_;
    const double n = static_cast<double>(n_);
    const double delta = x - m1_;
    const double delta_n = delta / n;
    const double delta_n2 = delta_n * delta_n;
    const double term1 = delta * delta_n * n1;
    m1_ += delta_n;
    m4_ += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * m2_ -
           4.0 * delta_n * m3_;
    m3_ += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * m2_;
    m2_ += term1;
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
    if (other.n_ == 0) return;
    if (n_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(other.n_);
    const double n = na + nb;
    const double delta = other.m1_ - m1_;
    const double d2 = delta * delta;
    const double d3 = d2 * delta;
    const double d4 = d2 * d2;

    const double m4 = m4_ + other.m4_ + d4 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
                      6.0 * d2 * (na * na * other.m2_ + nb * nb * m2_) / (n * n) +
                      4.0 * delta * (na * other.m3_ - nb * m3_) / n;
    const double m3 = m3_ + other.m3_ + d3 * na * nb * (na - nb) / (n * n) +
                      3.0 * delta * (na * other.m2_ - nb * m2_) / n;
    const double m2 = m2_ + other.m2_ + d2 * na * nb / n;
    m1_ = m1_ + delta * nb / n;
    m2_ = m2;
    m3_ = m3;
    m4_ = m4;
    n_ += other.n_;
}

double MomentAccumulator::sample_variance() const {
    return n_ >= 2 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

double MomentAccumulator::fourth_central_moment() const {
    return n_ >= 1 ? m4_ / static_cast<double>(n_) : 0.0;
}

SimStats simulate_busy_periods(const SimConfig& cfg) {
    validate(cfg);
    const unsigned streams = cfg.n_streams;
    std::vector<MomentAccumulator> accs(streams);
    std::vector<std::uint64_t> arrivals(streams, 0);

    auto work = [&](unsigned i) {
        run_stream(cfg.lambda, cfg.model, stream_share(cfg.n_busy_periods, streams, i),
                   Rng(substream_seed(cfg.seed, i)), arrivals[i],
                   [&accs, i](double len) { accs[i].update(len); });
    };
    if (streams == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(streams);
        for (unsigned i = 0; i < streams; ++i) pool.emplace_back(work, i);
        for (auto& th : pool) th.join();
    }

    MomentAccumulator total;
    std::uint64_t events = 0;
    for (unsigned i = 0; i < streams; ++i) {
        total.merge(accs[i]);
        events += arrivals[i];
    }

    SimStats out;
    out.n = total.count();
    out.mean = total.mean();
    out.variance = total.sample_variance();
    out.events = events;
    if (out.n >= 2) {
        const double fn = static_cast<double>(out.n);
        boost::math::students_t_distribution<double> tdist(fn - 1.0);
        const double half_mean =
            boost::math::quantile(tdist, 0.975) * std::sqrt(out.variance / fn);
        out.ci95_mean = {out.mean - half_mean, out.mean + half_mean};
        // Large-sample interval for the variance via the fourth central moment.
        const double m4 = total.fourth_central_moment();
        const double s2 = out.variance;
        const double var_of_s2 =
            std::max(m4 - s2 * s2 * (fn - 3.0) / (fn - 1.0), 0.0) / fn;
        const double half_var = kZ975 * std::sqrt(var_of_s2);
        out.ci95_variance = {std::max(s2 - half_var, 0.0), s2 + half_var};
    } else {
        out.ci95_mean = {out.mean, out.mean};
        out.ci95_variance = {0.0, 0.0};
    }
    return out;
}

std::vector<double> busy_period_samples(const SimConfig& cfg) {
    validate(cfg);
    if (cfg.n_busy_periods > 100'000'000ull) {
        throw std::length_error("busy_period_samples: sample budget above 1e8");
    }
    std::vector<double> out;
    out.reserve(cfg.n_busy_periods);
    for (unsigned i = 0; i < cfg.n_streams; ++i) {
        std::uint64_t arrivals = 0;
        run_stream(cfg.lambda, cfg.model,
                   stream_share(cfg.n_busy_periods, cfg.n_streams, i),
                   Rng(substream_seed(cfg.seed, i)), arrivals,
                   [&out](double len) { out.push_back(len); });
    }
    return out;
}

}  // namespace busyvar
