#include "biaseval/stats.hpp"

#include "biaseval/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <queue>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/digamma.hpp>

namespace biaseval {

namespace {

// Ascending-power polynomial c[0] + c[1] x + ...
template<std::size_t N>
double poly(const double (&c)[N], double x)
{
  double result = 0.0;
  for (std::size_t i = N; i-- > 0;)
    result = result * x + c[i];
  return result;
}

double normal_quantile(double p)
{
  return boost::math::quantile(boost::math::normal(), p);
}

double normal_upper_tail(double z)
{
  return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

// Royston (1995) coefficients
constexpr double kSmall = 1e-19;
constexpr double kG[] = { -2.273, 0.459 };
constexpr double kC1[] = { 0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056 };
constexpr double kC2[] = { 0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633 };
constexpr double kC3[] = { 0.544, -0.39978, 0.025054, -6.714e-4 };
constexpr double kC4[] = { 1.3822, -0.77857, 0.062767, -0.0020322 };
constexpr double kC5[] = { -1.5861, -0.31082, -0.083751, 0.0038915 };
constexpr double kC6[] = { -0.4803, -0.082676, 0.0030302 };

// Half of the antisymmetric Shapiro-Wilk weight vector, a_1 .. a_{n/2}.
std::vector<double> shapiro_weights(std::size_t n)
{
  const std::size_t half = n / 2;
  std::vector<double> a(half);
  if (n == 3) {
    a[0] = std::numbers::sqrt2 / 2.0;
    return a;
  }
  const double an = static_cast<double>(n);
  std::vector<double> m(half);
  double summ2 = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    m[i] = normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
    summ2 += m[i] * m[i];
  }
  summ2 *= 2.0;
  const double ssumm2 = std::sqrt(summ2);
  const double rsn = 1.0 / std::sqrt(an);
  const double a1 = poly(kC1, rsn) - m[0] / ssumm2;

  std::size_t first_scaled;
  double fac;
  if (n > 5) {
    const double a2 = -m[1] / ssumm2 + poly(kC2, rsn);
    fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                    (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
    a[1] = a2;
    first_scaled = 2;
  } else {
    fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
    first_scaled = 1;
  }
  a[0] = a1;
  for (std::size_t i = first_scaled; i < half; ++i)
    a[i] = -m[i] / fac;
  return a;
}

double sample_sd(std::span<const double> x)
{
  double mean = 0.0;
  for (double v : x)
    mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x)
    ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

// Linear-interpolated quantile of sorted data (R type 7).
double quantile_sorted(const std::vector<double>& sorted, double q)
{
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::string format_number(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

} // namespace

NormalityResult shapiro_wilk(std::span<const double> sample)
{
  const std::size_t n = sample.size();
  if (n < 3 || n > 5000)
    throw SampleSizeError("Shapiro-Wilk needs 3 <= n <= 5000, got n = " +
                          std::to_string(n));
  std::vector<double> x(sample.begin(), sample.end());
  for (double v : x)
    if (!std::isfinite(v))
      throw DegenerateSample("Shapiro-Wilk sample contains a non-finite value");
  std::sort(x.begin(), x.end());
  const double range = x.back() - x.front();
  if (range < kSmall)
    throw DegenerateSample("Shapiro-Wilk sample has zero range");

  const auto a = shapiro_weights(n);
  const std::size_t half = n / 2;

  // W is the squared correlation between the ordered sample and the weights.
  double mean = 0.0;
  for (double v : x)
    mean += v / range;
  mean /= static_cast<double>(n);
  double ssa = 0.0;
  double ssx = 0.0;
  double sax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double coef = 0.0;
    if (i < half)
      coef = -a[i];
    else if (i >= n - half)
      coef = a[n - 1 - i];
    const double dx = x[i] / range - mean;
    ssa += coef * coef;
    ssx += dx * dx;
    sax += coef * dx;
  }
  const double ssassx = std::sqrt(ssa * ssx);
  const double w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);
  const double w = std::min(1.0 - w1, 1.0);

  NormalityResult result;
  result.w = w;
  result.n = n;

  if (n == 3) {
    constexpr double pi6 = 6.0 / std::numbers::pi;
    constexpr double stqr = std::numbers::pi / 3.0;
    result.p_value = std::clamp(pi6 * (std::asin(std::sqrt(w)) - stqr), 0.0, 1.0);
    return result;
  }

  const double an = static_cast<double>(n);
  double y = std::log(w1);
  double mu;
  double sigma;
  if (n <= 11) {
    const double gamma = poly(kG, an);
    if (y >= gamma) {
      result.p_value = 1e-99;
      return result;
    }
    y = -std::log(gamma - y);
    mu = poly(kC3, an);
    sigma = std::exp(poly(kC4, an));
  } else {
    const double log_n = std::log(an);
    mu = poly(kC5, log_n);
    sigma = std::exp(poly(kC6, log_n));
  }
  result.p_value = std::clamp(normal_upper_tail((y - mu) / sigma), 0.0, 1.0);
  return result;
}

double silverman_bandwidth(std::span<const double> sample)
{
  if (sample.size() < 2)
    throw SampleSizeError("bandwidth selection needs at least 2 values");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double sd = sample_sd(sample);
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  double spread = sd;
  if (iqr > 0.0)
    spread = std::min(sd, iqr / 1.34);
  const double h =
    0.9 * spread * std::pow(static_cast<double>(sample.size()), -0.2);
  if (!(h > 0.0) || !std::isfinite(h))
    throw DegenerateSample("kernel bandwidth is zero (sample has no spread)");
  return h;
}

DensityCurve kde(std::span<const double> sample, std::size_t grid_size)
{
  if (grid_size < 16)
    throw SampleSizeError("KDE grid needs at least 16 points");
  const double h = silverman_bandwidth(sample);
  const auto [lo_it, hi_it] = std::minmax_element(sample.begin(), sample.end());
  const double lo = *lo_it - 3.0 * h;
  const double hi = *hi_it + 3.0 * h;

  constexpr std::size_t kMaxGrid = std::size_t{ 1 } << 20;
  const auto needed = static_cast<std::size_t>(std::ceil((hi - lo) / (0.5 * h))) + 1;
  const std::size_t points = std::min(std::max(grid_size, needed), kMaxGrid);

  DensityCurve curve;
  curve.bandwidth = h;
  curve.grid.resize(points);
  curve.density.assign(points, 0.0);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i)
    curve.grid[i] = lo + step * static_cast<double>(i);

  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double norm = 1.0 / (static_cast<double>(sorted.size()) * h *
                             std::sqrt(2.0 * std::numbers::pi));
  // kernels are truncated at 40 h, far below double resolution
  const double cutoff = 40.0 * h;
  for (std::size_t i = 0; i < points; ++i) {
    const double g = curve.grid[i];
    auto first = std::lower_bound(sorted.begin(), sorted.end(), g - cutoff);
    auto last = std::upper_bound(first, sorted.end(), g + cutoff);
    double sum = 0.0;
    for (auto it = first; it != last; ++it) {
      const double z = (g - *it) / h;
      sum += std::exp(-0.5 * z * z);
    }
    curve.density[i] = sum * norm;
  }
  return curve;
}

double integrate(const DensityCurve& curve)
{
  double total = 0.0;
  for (std::size_t i = 1; i < curve.grid.size(); ++i)
    total += 0.5 * (curve.density[i] + curve.density[i - 1]) *
             (curve.grid[i] - curve.grid[i - 1]);
  return total;
}

std::string to_csv(const DensityCurve& curve,
                   const std::vector<double>* overlay,
                   const std::string& overlay_name)
{
  std::string out = "grid,density";
  if (overlay)
    out += "," + overlay_name;
  out += '\n';
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    out += format_number(curve.grid[i]);
    out += ',';
    out += format_number(curve.density[i]);
    if (overlay) {
      out += ',';
      out += format_number((*overlay)[i]);
    }
    out += '\n';
  }
  return out;
}

double pearson(std::span<const double> x, std::span<const double> y)
{
  if (x.size() != y.size())
    throw LengthMismatch("pearson: inputs have lengths " + std::to_string(x.size()) +
                         " and " + std::to_string(y.size()));
  if (x.size() < 3)
    throw SampleSizeError("pearson needs at least 3 paired values");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0)
    throw DegenerateSample("pearson: an input has zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double mutual_information(std::span<const double> x,
                          std::span<const double> y,
                          std::size_t k)
{
  if (x.size() != y.size())
    throw LengthMismatch("mutual information: inputs have lengths " +
                         std::to_string(x.size()) + " and " +
                         std::to_string(y.size()));
  if (k < 1)
    throw SampleSizeError("mutual information needs k >= 1");
  if (x.size() < k + 1)
    throw SampleSizeError("mutual information needs at least k + 1 = " +
                          std::to_string(k + 1) + " points, got " +
                          std::to_string(x.size()));
  const std::size_t n = x.size();

  // points ordered by x: neighbour search scans outward and stops once the
  // x gap alone exceeds the current k-th distance
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i)
    order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && a < b);
  });
  std::vector<double> xs(n);
  std::vector<double> ys(y.begin(), y.end());
  for (std::size_t r = 0; r < n; ++r)
    xs[r] = x[order[r]];
  std::sort(ys.begin(), ys.end());

  auto count_within = [](const std::vector<double>& sorted, double centre, double eps) {
    auto first = std::upper_bound(sorted.begin(), sorted.end(), centre - eps);
    auto last = std::lower_bound(first, sorted.end(), centre + eps);
    // strictly inside (centre - eps, centre + eps), excluding the point itself
    const auto inside = static_cast<std::size_t>(last - first);
    return inside > 0 ? inside - 1 : 0;
  };

  std::vector<double> psi(n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t i = order[r];
    std::priority_queue<double> nearest;
    auto consider = [&](std::size_t j) {
      const double d = std::max(std::abs(x[i] - x[j]), std::abs(y[i] - y[j]));
      if (nearest.size() < k) {
        nearest.push(d);
      } else if (d < nearest.top()) {
        nearest.pop();
        nearest.push(d);
      }
    };
    std::size_t left = r;
    std::size_t right = r + 1;
    while (left > 0 || right < n) {
      const double bound = nearest.size() == k ? nearest.top()
                                               : std::numeric_limits<double>::infinity();
      bool progressed = false;
      if (left > 0 && x[i] - xs[left - 1] <= bound) {
        consider(order[--left]);
        progressed = true;
      }
      if (right < n && xs[right] - x[i] <= bound) {
        consider(order[right++]);
        progressed = true;
      }
      if (!progressed)
        break;
    }
    const double eps = nearest.top();
    const std::size_t nx = eps > 0.0 ? count_within(xs, x[i], eps) : 0;
    const std::size_t ny = eps > 0.0 ? count_within(ys, y[i], eps) : 0;
    psi[i] = boost::math::digamma(static_cast<double>(nx + 1)) +
             boost::math::digamma(static_cast<double>(ny + 1));
  }
  // summed in input order so that swapping x and y is exact
  double psi_sum = 0.0;
  for (double v : psi)
    psi_sum += v;
  const double estimate = boost::math::digamma(static_cast<double>(k)) +
                          boost::math::digamma(static_cast<double>(n)) -
                          psi_sum / static_cast<double>(n);
  return std::max(estimate, 0.0);
}

} // namespace biaseval
