#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace percchem {

// compensated accumulator, so reductions do not depend on magnitude order
struct KahanSum {
  double sum = 0, carry = 0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

struct MeanSe {
  double mean = 0;
  double se = 0;
  std::uint64_t n = 0;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
  MeanSe r;
  r.n = xs.size();
  if (xs.empty()) return r;
  KahanSum s;
  for (double x : xs) s.add(x);
  r.mean = s.value() / static_cast<double>(xs.size());
  if (xs.size() < 2) return r;
  KahanSum q;
  for (double x : xs) q.add((x - r.mean) * (x - r.mean));
  const double var = q.value() / static_cast<double>(xs.size() - 1);
  r.se = std::sqrt(var / static_cast<double>(xs.size()));
  return r;
}

// frequency standard error with the half-count smoothing, finite at k = 0, n
inline double wilson_se(std::uint64_t k, std::uint64_t n) {
  const double pt = (static_cast<double>(k) + 0.5) / (static_cast<double>(n) + 1.0);
  return std::sqrt(pt * (1.0 - pt) / (static_cast<double>(n) + 1.0));
}

struct SlopeFit {
  double slope = 0;
  double intercept = 0;
  double slope_se = 0;
  std::size_t used = 0;
};

// weighted least squares, weights = 1 / variance; slope SE from the inverse
// information, sqrt(1 / Sxx)
inline SlopeFit wls_fit(const std::vector<double>& xs, const std::vector<double>& ys,
                        const std::vector<double>& ws) {
  SlopeFit f;
  f.used = xs.size();
  if (xs.size() < 2) return f;
  KahanSum W, Wx, Wy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    W.add(ws[i]);
    Wx.add(ws[i] * xs[i]);
    Wy.add(ws[i] * ys[i]);
  }
  const double xbar = Wx.value() / W.value();
  const double ybar = Wy.value() / W.value();
  KahanSum Sxx, Sxy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Sxx.add(ws[i] * (xs[i] - xbar) * (xs[i] - xbar));
    Sxy.add(ws[i] * (xs[i] - xbar) * (ys[i] - ybar));
  }
  if (Sxx.value() <= 0) return f;
  f.slope = Sxy.value() / Sxx.value();
  f.intercept = ybar - f.slope * xbar;
  f.slope_se = std::sqrt(1.0 / Sxx.value());
  return f;
}

// WLS on log-frequencies: y = ln((k+1/2)/(n+1)), sigma = se / p-tilde by the
// delta method; zero-count rows are dropped
inline SlopeFit log_frequency_slope(const std::vector<double>& ts,
                                    const std::vector<std::uint64_t>& ks,
                                    const std::vector<std::uint64_t>& ns) {
  std::vector<double> xs, ys, ws;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ks[i] == 0) continue;
    const double pt =
        (static_cast<double>(ks[i]) + 0.5) / (static_cast<double>(ns[i]) + 1.0);
    const double sigma = wilson_se(ks[i], ns[i]) / pt;
    xs.push_back(ts[i]);
    ys.push_back(std::log(pt));
    ws.push_back(1.0 / (sigma * sigma));
  }
  return wls_fit(xs, ys, ws);
}

}  // namespace percchem
