// Copyright 2026 The Statewalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace statewalk::stats {

struct Moments {
    double mean;
    double variance;         // unbiased (n-1 denominator)
    double skewness;         // m3 / m2^{3/2}
    double excess_kurtosis;  // m4 / m2^2 - 3
};

Moments sample_moments(const std::vector<double> &samples);

/// Wilson 95% score interval for k successes out of n.
struct Interval {
    double lo;
    double hi;
};
Interval wilson_interval(std::int64_t successes, std::int64_t total, double z = 1.959963984540054);

/// Upper regularized incomplete gamma Q(a, x).
double gamma_q(double a, double x);

/// Survival function of the chi-square distribution with `dof` degrees.
double chi_square_sf(double statistic, int dof);

/// Kolmogorov asymptotic tail Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} e^{-2 j^2 lambda^2}.
double kolmogorov_q(double lambda);

/// One-sample KS test of sorted-or-not samples against a CDF. Applies the
/// Stephens small-sample correction to the p-value.
struct KsResult {
    double statistic;
    double p_value;
};
KsResult ks_test(std::vector<double> samples, const std::function<double(double)> &cdf);

/// Two-sample KS test.
KsResult ks_test_two_sample(std::vector<double> a, std::vector<double> b);

/// Least-squares line y = slope x + intercept with coefficient of determination.
struct LinearFit {
    double slope;
    double intercept;
    double r_squared;
};
LinearFit linear_fit(const std::vector<double> &x, const std::vector<double> &y);

}  // namespace statewalk::stats
