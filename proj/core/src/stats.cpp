#include "brownsim/stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <vector>

#include "brownsim/errors.hpp"

namespace brownsim {

double mean(std::span<const double> samples) {
    if (samples.empty()) {
        throw StatsError("mean: no samples");
    }
    double sum = 0.0;
    for (const double x : samples) {
        sum += x;
    }
    return sum / static_cast<double>(samples.size());
}

double sample_stddev(std::span<const double> samples) {
    if (samples.size() < 2) {
        throw StatsError("sample_stddev: need at least 2 samples");
    }
    const double m = mean(samples);
    double ss = 0.0;
    for (const double x : samples) {
        ss += (x - m) * (x - m);
    }
    return std::sqrt(ss / static_cast<double>(samples.size() - 1));
}

std::pair<double, double> confidence_interval_95(std::span<const double> samples) {
    if (samples.size() < 2) {
        throw StatsError("confidence_interval_95: need at least 2 samples");
    }
    const double m = mean(samples);
    const double s = sample_stddev(samples);
    const auto n = static_cast<double>(samples.size());
    const boost::math::students_t dist(n - 1.0);
    const double t = boost::math::quantile(dist, 0.975);
    const double half_width = t * s / std::sqrt(n);
    return {m - half_width, m + half_width};
}

double paired_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw StatsError("paired_t_test: sample lengths differ");
    }
    if (a.size() < 2) {
        throw StatsError("paired_t_test: need at least 2 pairs");
    }
    std::vector<double> diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff[i] = a[i] - b[i];
    }
    const double m = mean(diff);
    const double s = sample_stddev(diff);
    if (s == 0.0) {
        return m == 0.0 ? 1.0 : 0.0;
    }
    const auto n = static_cast<double>(a.size());
    const double t = m / (s / std::sqrt(n));
    const boost::math::students_t dist(n - 1.0);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

}  // namespace brownsim
