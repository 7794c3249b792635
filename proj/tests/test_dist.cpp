#include "busyvar/dist.hpp"

#include <cmath>
#include <vector>

#include "busyvar/errors.hpp"
#include "busyvar/sim.hpp"
#include "doctest.h"
#include "oracle_values.hpp"

using namespace busyvar;

namespace {

std::vector<ServiceTimeModel> finite_mu2_families() {
    return {
        ServiceTimeModel::deterministic(1.0),
        ServiceTimeModel::exponential(1.0),
        ServiceTimeModel::erlang(2, 1.0),
        ServiceTimeModel::gamma(2.5, 1.0),
        ServiceTimeModel::hyperexponential({0.5, 0.5}, {0.5, 1.5}),
        ServiceTimeModel::uniform(0.0, 2.0),
        ServiceTimeModel::weibull_with_mean(1.5, 1.0),
        ServiceTimeModel::lomax(3.5, 1.0),
    };
}

// Composite Simpson over [lo, hi] split at the given knots; independent
// reference for the integrated-tail implementations.
double simpson_survival(const ServiceTimeModel& m, double lo, double hi,
                        std::vector<double> knots, int n_per_piece = 20000) {
    knots.push_back(lo);
    knots.push_back(hi);
    std::sort(knots.begin(), knots.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double a = std::clamp(knots[i], lo, hi);
        const double b = std::clamp(knots[i + 1], lo, hi);
        if (b <= a) continue;
        const double h = (b - a) / n_per_piece;
        double s = m.survival(a) + m.survival(b);
        for (int j = 1; j < n_per_piece; ++j) {
            s += (j % 2 ? 4.0 : 2.0) * m.survival(a + j * h);
        }
        total += s * h / 3.0;
    }
    return total;
}

// Reference integrated tail: composite quadrature out to a far truncation
// point plus an analytic remainder for the one power-tailed family. The
// deterministic indicator uses the midpoint rule (exact for a step), and the
// near field is meshed finely because some survival curves have derivative
// singularities at zero.
double reference_integrated_tail(const ServiceTimeModel& m, double t) {
    const double alpha = m.moments().alpha;
    if (m.family() == Family::deterministic) {
        if (t >= alpha) return 0.0;
        const int n = 4096;
        const double h = (alpha - t) / n;
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += m.survival(t + (j + 0.5) * h);
        return s * h;
    }
    std::vector<double> knots;
    double t_max = t + 80.0 * alpha;
    double remainder = 0.0;
    if (m.family() == Family::uniform) {
        const double b = 2.0 * alpha;  // test models use uniform(0, 2*mean)
        knots.push_back(b);
        t_max = std::min(t_max, b);
        if (t >= t_max) return 0.0;
    }
    if (m.family() == Family::lomax) {
        // shape c, scale s: tail beyond t_max is s/(c-1) (1 + T/s)^{1-c}
        const double c = 3.5, s = 1.0;  // matches the test model
        remainder = s / (c - 1.0) * std::pow(1.0 + t_max / s, 1.0 - c);
    }
    const double near_end = std::min(t + alpha, t_max);
    return simpson_survival(m, t, near_end, knots, 200000) +
           simpson_survival(m, near_end, t_max, knots, 40000) + remainder;
}

}  // namespace

TEST_CASE("survival closed forms") {
    CHECK(ServiceTimeModel::exponential(1.0).survival(0.0) == 1.0);
    CHECK(ServiceTimeModel::deterministic(1.0).survival(2.0) == 0.0);
    CHECK(ServiceTimeModel::exponential(2.0).survival(2.0) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    for (const auto& m : finite_mu2_families()) {
        CAPTURE(m.format());
        CHECK(m.survival(0.0) == 1.0);
        double prev = 1.0;
        for (double t : {0.1, 0.5, 1.0, 2.0, 5.0, 20.0}) {
            const double s = m.survival(t);
            CHECK(s >= 0.0);
            CHECK(s <= prev + 1e-15);
            prev = s;
        }
        CHECK(m.survival(200.0) <= 1e-6);
    }
    CHECK_THROWS_AS(ServiceTimeModel::exponential(1.0).survival(-0.5),
                    std::invalid_argument);
}

TEST_CASE("integrated tail examples and error paths") {
    CHECK(ServiceTimeModel::exponential(1.0).integrated_tail(0.0) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ServiceTimeModel::deterministic(1.0).integrated_tail(0.4) ==
          doctest::Approx(0.6).epsilon(1e-15));
    CHECK(ServiceTimeModel::hyperexponential({0.5, 0.5}, {0.5, 1.5}).integrated_tail(0.0) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(ServiceTimeModel::lomax(1.0, 1.0).integrated_tail(0.0),
                    InfiniteMomentError);
    CHECK_THROWS_AS(ServiceTimeModel::lomax(0.8, 1.0).integrated_tail(1.0),
                    InfiniteMomentError);
}

TEST_CASE("integrated tail agrees with direct quadrature of the survival") {
    for (const auto& m : finite_mu2_families()) {
        CAPTURE(m.format());
        const double alpha = m.moments().alpha;
        for (double frac : {0.0, 0.3, 1.0, 2.7}) {
            const double t = frac * alpha;
            const double got = m.integrated_tail(t);
            const double want = reference_integrated_tail(m, t);
            CHECK(std::fabs(got - want) <= 1e-10 * alpha);
        }
    }
}

TEST_CASE("integrated tail is non-increasing and starts at the mean") {
    for (const auto& m : finite_mu2_families()) {
        CAPTURE(m.format());
        const double alpha = m.moments().alpha;
        CHECK(m.integrated_tail(0.0) == doctest::Approx(alpha).epsilon(1e-12));
        double prev = m.integrated_tail(0.0);
        for (double frac : {0.2, 0.6, 1.0, 1.8, 3.0, 7.0}) {
            const double h = m.integrated_tail(frac * alpha);
            CHECK(h <= prev + 1e-13 * alpha);
            prev = h;
        }
    }
}

TEST_CASE("partial and full tails partition the mean") {
    CHECK(ServiceTimeModel::exponential(3.0).partial_integrated_tail(0.0) == 0.0);
    CHECK(ServiceTimeModel::deterministic(1.0).partial_integrated_tail(0.4) ==
          doctest::Approx(0.4).epsilon(1e-15));
    CHECK(ServiceTimeModel::exponential(1.0).partial_integrated_tail(40.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& m : finite_mu2_families()) {
        CAPTURE(m.format());
        const double alpha = m.moments().alpha;
        for (double frac : {0.0, 0.4, 1.0, 2.5, 6.0}) {
            const double t = frac * alpha;
            CHECK(m.partial_integrated_tail(t) + m.integrated_tail(t) ==
                  doctest::Approx(alpha).epsilon(1e-12));
        }
    }
}

TEST_CASE("moments per family") {
    SUBCASE("exponential") {
        const MomentSet m = ServiceTimeModel::exponential(2.0).moments();
        CHECK(m.alpha == 2.0);
        CHECK(m.mu2 == 8.0);
        CHECK(m.mu3 == 48.0);
        CHECK(m.gamma_s2 == 1.0);
    }
    SUBCASE("deterministic") {
        const MomentSet m = ServiceTimeModel::deterministic(1.0).moments();
        CHECK(m.mu2 == 1.0);
        CHECK(m.sigma2 == 0.0);
        CHECK(m.gamma_s2 == 0.0);
    }
    SUBCASE("hyperexponential mixture") {
        const MomentSet m =
            ServiceTimeModel::hyperexponential({0.5, 0.5}, {0.5, 1.5}).moments();
        CHECK(m.alpha == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(m.mu2 == doctest::Approx(2.5).epsilon(1e-15));
        CHECK(m.mu3 == doctest::Approx(10.5).epsilon(1e-15));
        CHECK(m.gamma_s2 == doctest::Approx(1.5).epsilon(1e-14));
    }
    SUBCASE("erlang") {
        const MomentSet m = ServiceTimeModel::erlang(2, 1.0).moments();
        CHECK(m.mu2 == doctest::Approx(1.5).epsilon(1e-15));
        CHECK(m.mu3 == doctest::Approx(3.0).epsilon(1e-15));
        CHECK(m.gamma_s2 == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("uniform") {
        const MomentSet m = ServiceTimeModel::uniform(0.0, 2.0).moments();
        CHECK(m.alpha == 1.0);
        CHECK(m.mu2 == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
        CHECK(m.mu3 == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(m.gamma_s2 == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    }
    SUBCASE("weibull") {
        const MomentSet m = ServiceTimeModel::weibull_with_mean(1.5, 1.0).moments();
        CHECK(m.alpha == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(m.mu2 == doctest::Approx(1.4609984862063184).epsilon(1e-13));
        CHECK(m.mu3 == doctest::Approx(2.7185310504440093).epsilon(1e-13));
    }
    SUBCASE("gamma") {
        const MomentSet m = ServiceTimeModel::gamma(2.5, 1.0).moments();
        CHECK(m.mu2 == doctest::Approx(1.4).epsilon(1e-15));
        CHECK(m.mu3 == doctest::Approx(2.52).epsilon(1e-15));
    }
    SUBCASE("lomax moment cutoffs") {
        const MomentSet m35 = ServiceTimeModel::lomax(3.5, 1.0).moments();
        CHECK(m35.alpha == doctest::Approx(0.4).epsilon(1e-15));
        CHECK(m35.mu2 == doctest::Approx(0.53333333333333333).epsilon(1e-15));
        CHECK(m35.mu3 == doctest::Approx(3.2).epsilon(1e-14));
        CHECK(std::isinf(ServiceTimeModel::lomax(2.5, 1.0).moments().mu3));
        CHECK(std::isinf(ServiceTimeModel::lomax(1.5, 1.0).moments().mu2));
        CHECK(std::isfinite(ServiceTimeModel::lomax(1.5, 1.0).moments().alpha));
        CHECK(std::isinf(ServiceTimeModel::lomax(0.9, 1.0).moments().alpha));
    }
    SUBCASE("identities") {
        for (const auto& m : finite_mu2_families()) {
            CAPTURE(m.format());
            const MomentSet ms = m.moments();
            CHECK(ms.mu2 >= ms.alpha * ms.alpha);
            CHECK(ms.mu2 ==
                  doctest::Approx(ms.alpha * ms.alpha * (1.0 + ms.gamma_s2)).epsilon(1e-12));
            CHECK(ms.sigma2 == doctest::Approx(ms.mu2 - ms.alpha * ms.alpha).epsilon(1e-12));
        }
    }
}

TEST_CASE("quantiles") {
    Rng rng(7);
    CHECK(ServiceTimeModel::deterministic(1.0).sample(rng) == 1.0);
    CHECK(ServiceTimeModel::exponential(1.0).quantile(0.5) ==
          doctest::Approx(-std::log(0.5)).epsilon(1e-15));
    CHECK(ServiceTimeModel::uniform(0.0, 2.0).quantile(0.0) == 0.0);
    CHECK_THROWS_AS(ServiceTimeModel::exponential(1.0).quantile(1.0),
                    std::invalid_argument);
    // Inverse-CDF consistency: survival(quantile(u)) == 1 - u.
    for (const auto& m : finite_mu2_families()) {
        if (m.family() == Family::deterministic) continue;
        CAPTURE(m.format());
        for (double u : {0.01, 0.2, 0.5, 0.9, 0.999}) {
            const double q = m.quantile(u);
            CHECK(m.survival(q) == doctest::Approx(1.0 - u).epsilon(1e-9));
        }
    }
}

TEST_CASE("sample moments match the analytic ones within four standard errors") {
    constexpr int kN = 1'000'000;
    for (const auto& m : finite_mu2_families()) {
        CAPTURE(m.format());
        const MomentSet ms = m.moments();
        Rng rng(20240817);
        MomentAccumulator acc;
        for (int i = 0; i < kN; ++i) acc.update(m.sample(rng));
        if (m.family() == Family::deterministic) {
            CHECK(acc.mean() == ms.alpha);
            CHECK(acc.sample_variance() == 0.0);
            continue;
        }
        const double se_mean = std::sqrt(ms.sigma2 / kN);
        CHECK(std::fabs(acc.mean() - ms.alpha) <= 4.0 * se_mean);
        const double m4 = acc.fourth_central_moment();
        const double s2 = acc.sample_variance();
        const double se_var = std::sqrt(std::max(m4 - s2 * s2, 0.0) / kN);
        CHECK(std::fabs(s2 - ms.sigma2) <= 4.0 * se_var);
    }
}

TEST_CASE("mini-DSL parsing") {
    CHECK(ServiceTimeModel::parse("exp:mean=1") == ServiceTimeModel::exponential(1.0));
    CHECK(ServiceTimeModel::parse("hyperexp:p=0.5|0.5,mean=0.5|1.5") ==
          ServiceTimeModel::hyperexponential({0.5, 0.5}, {0.5, 1.5}));
    CHECK(ServiceTimeModel::parse("lomax:shape=1.5,scale=1") ==
          ServiceTimeModel::lomax(1.5, 1.0));
    CHECK(std::isinf(ServiceTimeModel::parse("lomax:shape=1.5,scale=1").moments().mu2));
    CHECK(ServiceTimeModel::parse("det:mean=2.5e-1") ==
          ServiceTimeModel::deterministic(0.25));
    CHECK(ServiceTimeModel::parse("deterministic:mean=1") ==
          ServiceTimeModel::parse("det:mean=1"));

    SUBCASE("errors carry a position") {
        try {
            ServiceTimeModel::parse("frobnicate:mean=1");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.position() == 0);
        }
        try {
            ServiceTimeModel::parse("hyperexp:p=0.6|0.5,mean=1|1");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.position() == 9);
        }
        CHECK_THROWS_AS(ServiceTimeModel::parse("exp:mean=banana"), ParseError);
        CHECK_THROWS_AS(ServiceTimeModel::parse("exp:"), ParseError);
        CHECK_THROWS_AS(ServiceTimeModel::parse("exp:rate=1"), ParseError);
        CHECK_THROWS_AS(ServiceTimeModel::parse("erlang:k=2.5,mean=1"), ParseError);
        CHECK_THROWS_AS(ServiceTimeModel::parse("weibull:shape=1"), ParseError);
        CHECK_THROWS_AS(ServiceTimeModel::parse("weibull:shape=1,scale=1,mean=1"),
                        ParseError);
        CHECK_THROWS_AS(ServiceTimeModel::parse("exp:mean=1,mean=2"), ParseError);
        CHECK_THROWS_AS(ServiceTimeModel::parse("uniform:a=2,b=1"), ParseError);
    }
}

TEST_CASE("canonical format round-trips") {
    for (const auto& m : finite_mu2_families()) {
        CAPTURE(m.format());
        CHECK(ServiceTimeModel::parse(m.format()) == m);
    }
    // Also through a second formatting pass.
    const auto h = ServiceTimeModel::parse("hyperexp:p=0.25|0.75,mean=2|0.125");
    CHECK(ServiceTimeModel::parse(h.format()).format() == h.format());
}

TEST_CASE("reliability tags") {
    auto tags_of = [](const char* spec) { return ServiceTimeModel::parse(spec).tags(); };
    CHECK(tags_of("det:mean=1").nbue == Tri::yes);
    CHECK(tags_of("det:mean=1").nwue == Tri::no);
    CHECK(tags_of("exp:mean=1").nbue == Tri::yes);
    CHECK(tags_of("exp:mean=1").nwue == Tri::yes);
    CHECK(tags_of("exp:mean=1").dfr == Tri::yes);
    CHECK(tags_of("erlang:k=2,mean=1").nbue == Tri::yes);
    CHECK(tags_of("erlang:k=2,mean=1").dfr == Tri::no);
    CHECK(tags_of("erlang:k=1,mean=1").dfr == Tri::yes);
    CHECK(tags_of("hyperexp:p=0.5|0.5,mean=0.5|1.5").dfr == Tri::yes);
    CHECK(tags_of("hyperexp:p=0.5|0.5,mean=0.5|1.5").imrl == Tri::yes);
    CHECK(tags_of("hyperexp:p=0.5|0.5,mean=0.5|1.5").nwue == Tri::yes);
    CHECK(tags_of("hyperexp:p=0.5|0.5,mean=0.5|1.5").nbue == Tri::no);
    CHECK(tags_of("hyperexp:p=0.5|0.5,mean=1|1").nbue == Tri::unknown);
    CHECK(tags_of("lomax:shape=3.5,scale=1").dfr == Tri::yes);
    CHECK(tags_of("weibull:shape=0.5,scale=1").dfr == Tri::yes);
    CHECK(tags_of("weibull:shape=2,scale=1").nbue == Tri::yes);
    CHECK(tags_of("gamma:shape=0.5,mean=1").nwue == Tri::yes);
    CHECK(tags_of("uniform:a=0,b=2").nbue == Tri::yes);

    // Class implications.
    std::vector<std::string> specs = {
        "det:mean=1", "exp:mean=1", "erlang:k=1,mean=1", "erlang:k=3,mean=1",
        "gamma:shape=0.5,mean=1", "gamma:shape=1,mean=1", "gamma:shape=2,mean=1",
        "hyperexp:p=0.5|0.5,mean=0.5|1.5", "uniform:a=0,b=2",
        "weibull:shape=0.5,scale=1", "weibull:shape=1,scale=1",
        "weibull:shape=2,scale=1", "lomax:shape=2.5,scale=1"};
    for (const auto& s : specs) {
        CAPTURE(s);
        const auto m = ServiceTimeModel::parse(s);
        const ReliabilityTags t = m.tags();
        if (t.dfr == Tri::yes) {
            CHECK(t.imrl == Tri::yes);
            CHECK(t.nwue == Tri::yes);
        }
        if (t.nbue == Tri::yes && t.nwue == Tri::yes) {
            // Only distributions that are exactly exponential may carry both.
            const MomentSet ms = m.moments();
            CHECK(ms.gamma_s2 == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(m.survival(ms.alpha) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
        }
    }
}

TEST_CASE("rescaling preserves the family shape") {
    for (const auto& m : finite_mu2_families()) {
        CAPTURE(m.format());
        const auto scaled = m.scaled_to_mean(2.5);
        CHECK(scaled.moments().alpha == doctest::Approx(2.5).epsilon(1e-12));
        CHECK(scaled.moments().gamma_s2 ==
              doctest::Approx(m.moments().gamma_s2).epsilon(1e-12));
        CHECK(scaled.family() == m.family());
    }
    CHECK_THROWS_AS(ServiceTimeModel::lomax(0.9, 1.0).scaled_to_mean(1.0),
                    InfiniteMomentError);
}

TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(ServiceTimeModel::exponential(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(ServiceTimeModel::erlang(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ServiceTimeModel::hyperexponential({0.5, 0.6}, {1.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ServiceTimeModel::hyperexponential({1.0}, {1.0, 2.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ServiceTimeModel::uniform(-0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ServiceTimeModel::weibull(1.5, 0.0), std::invalid_argument);
}
