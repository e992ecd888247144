#ifndef BROWNSIM_STATS_HPP
#define BROWNSIM_STATS_HPP

#include <span>
#include <utility>

namespace brownsim {

double mean(std::span<const double> samples);
double sample_stddev(std::span<const double> samples);

// 95% two-sided Student-t interval around the mean. Needs >= 2 samples.
std::pair<double, double> confidence_interval_95(std::span<const double> samples);

// Two-sided paired-t p-value over equal-length samples. A zero-variance
// difference yields 1.0 when the means agree, else 0.0.
double paired_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace brownsim

#endif
