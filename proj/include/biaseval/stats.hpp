#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace biaseval {

struct NormalityResult
{
  double w = 1.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

struct DensityCurve
{
  std::vector<double> grid;
  std::vector<double> density;
  double bandwidth = 0.0;
};

// Shapiro-Wilk W and p-value (Royston's AS R94 approximation).
// Valid for 3 <= n <= 5000: throws SampleSizeError outside that range and
// DegenerateSample when all values are equal.
NormalityResult shapiro_wilk(std::span<const double> sample);

// Silverman's rule of thumb, 0.9 * min(sd, IQR / 1.34) * n^(-1/5). When the
// IQR vanishes the standard deviation alone is used. Throws DegenerateSample
// when the bandwidth is zero.
double silverman_bandwidth(std::span<const double> sample);

// Gaussian-kernel density on an evenly spaced grid over
// [min - 3h, max + 3h]. grid_size is a lower bound: the grid is refined until
// the spacing is at most h / 2, which keeps the trapezoidal integral within
// 1e-3 of the kernel mass on the grid.
DensityCurve kde(std::span<const double> sample, std::size_t grid_size = 512);

// Trapezoidal integral of a curve.
double integrate(const DensityCurve& curve);

// CSV with header "grid,density" (and optional third overlay column).
std::string to_csv(const DensityCurve& curve,
                   const std::vector<double>* overlay = nullptr,
                   const std::string& overlay_name = "gaussian");

// Sample Pearson correlation. Throws LengthMismatch, SampleSizeError (n < 3)
// or DegenerateSample (zero variance).
double pearson(std::span<const double> x, std::span<const double> y);

// Kraskov-Stoegbauer-Grassberger estimator (algorithm 1, max-norm) of the
// mutual information in nats. Negative estimates are clamped to 0.
double mutual_information(std::span<const double> x,
                          std::span<const double> y,
                          std::size_t k = 3);

} // namespace biaseval
