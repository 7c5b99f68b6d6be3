// Copyright 2026 The lpginv Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lpginv/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "lpginv/error.hpp"
#include "lpginv/matrix_io.hpp"
#include "lpginv/rng.hpp"
#include "lpginv/special_functions.hpp"
#include "parallel.hpp"

namespace lpginv {
namespace {

constexpr std::size_t kBlockSize = 4096;
constexpr int kMaxBracketSteps = 60;

// Magnitude y in [0, a] solving y + w y^(q-1) = a, for q >= 2 and w >= 0,
// started from guess. Newton on the convex left side, kept inside the
// bracket [0, a]. Returns y and stores y^(q-1) in power_out.
double ShrinkCoordinate(double a, double w, double q, double guess,
                        double& power_out) {
  if (a == 0.0 || w == 0.0) {
    power_out = std::pow(a, q - 1.0);
    return a;
  }
  double lo = 0.0;
  double hi = a;
  double y = (guess > 0.0 && guess <= a) ? guess : a;
  for (int iter = 0; iter < 200; ++iter) {
    const double power_q2 = std::pow(y, q - 2.0);
    const double power = power_q2 * y;
    const double f = y + w * power - a;
    if (f > 0.0) {
      hi = y;
    } else {
      lo = y;
    }
    const double df = 1.0 + w * (q - 1.0) * power_q2;
    double next = y - f / df;
    if (!(next >= lo && next <= hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (std::abs(next - y) <= 1e-13 * a) {
      power_out = std::pow(next, q - 1.0);
      return next;
    }
    y = next;
  }
  power_out = std::pow(y, q - 1.0);
  return y;
}

// Projection of |h| (entries >= 0) onto the unit l^q ball, q > 2 finite.
// The multiplier mu solves sum y_i(mu)^q = 1 with y_i(mu) from
// ShrinkCoordinate(|h_i|, mu q, q).
std::vector<double> ProjectUnitLqBall(const std::vector<double>& a, double q) {
  std::vector<double> y(a);
  std::vector<double> power(a.size());
  auto constraint = [&](double mu) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      y[i] = ShrinkCoordinate(a[i], mu * q, q, y[i], power[i]);
      sum += power[i] * y[i];
    }
    return sum - 1.0;
  };
  // y_i <= (a_i / (mu q))^(1/(q-1)), so sum y_i^q <= 1 once
  // mu q >= ||a||_p with p the conjugate exponent: that mu brackets the root.
  const double p = q / (q - 1.0);
  double norm_p = 0.0;
  for (double v : a) norm_p += std::pow(v, p);
  norm_p = std::pow(norm_p, 1.0 / p);
  double lo = 0.0;
  double hi = norm_p / q;
  for (std::size_t i = 0; i < a.size(); ++i) {
    y[i] = std::min(a[i], std::pow(a[i] / norm_p, 1.0 / (q - 1.0)));
  }
  int guard = 0;
  while (constraint(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 2000) throw NumericalFailure("l^q projection multiplier diverged");
  }
  // Safeguarded Newton on the multiplier equation.
  double mu = hi;
  double phi = constraint(mu);
  for (int iter = 0; iter < 300 && std::abs(phi) > 1e-11; ++iter) {
    if (phi > 0.0) {
      lo = mu;
    } else {
      hi = mu;
    }
    double dphi = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (y[i] == 0.0) continue;
      const double dy = -q * power[i] / (1.0 + mu * q * (q - 1.0) * power[i] / y[i]);
      dphi += q * power[i] * dy;
    }
    double next = dphi < 0.0 ? mu - phi / dphi : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == mu) break;
    mu = next;
    phi = constraint(mu);
  }
  if (std::abs(phi) > 1e-10) {
    throw NumericalFailure("l^q projection multiplier residual " + std::to_string(phi));
  }
  return y;
}

struct BlockSums {
  double count = 0.0;
  double sum_y = 0.0;
  double sum_yy = 0.0;
  double sum_c = 0.0;
  double sum_cc = 0.0;
  double sum_yc = 0.0;
  double sum_s = 0.0;  // slope d/dt of the scaled distance

  void Add(double y, double c, double slope) {
    sum_s += slope;
    count += 1.0;
    sum_y += y;
    sum_yy += y * y;
    sum_c += c;
    sum_cc += c * c;
    sum_yc += y * c;
  }
  void Merge(const BlockSums& o) {
    count += o.count;
    sum_y += o.sum_y;
    sum_yy += o.sum_yy;
    sum_c += o.sum_c;
    sum_cc += o.sum_cc;
    sum_yc += o.sum_yc;
    sum_s += o.sum_s;
  }
};

// Distance from h to the l^(p*) ball of radius t and, when slope is set, its
// derivative in t. With r = h - proj(h), the derivative is -||r||_p / ||r||_2.
double DistAndSlope(const Vector& h, double p, double t, double* slope) {
  if (slope) *slope = 0.0;
  if (!(t >= 0.0)) throw DomainError("ball radius t must be non-negative");
  if (!(p >= 1.0 && p <= 2.0)) throw DomainError("p must lie in [1, 2]");
  if (p == 1.0) {
    double sq = 0.0;
    double l1 = 0.0;
    for (Eigen::Index i = 0; i < h.size(); ++i) {
      const double excess = std::abs(h(i)) - t;
      if (excess > 0.0) {
        sq += excess * excess;
        l1 += excess;
      }
    }
    const double d = std::sqrt(sq);
    if (slope && d > 0.0) *slope = -l1 / d;
    return d;
  }
  if (p == 2.0) {
    const double d = std::max(h.norm() - t, 0.0);
    if (slope && d > 0.0) *slope = -1.0;
    return d;
  }

  const double q = p / (p - 1.0);
  if (t == 0.0) return h.norm();
  std::vector<double> a(static_cast<std::size_t>(h.size()));
  double dual_norm_pow = 0.0;
  const double amax = h.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    a[static_cast<std::size_t>(i)] = std::abs(h(i)) / t;
    if (amax > 0.0) dual_norm_pow += std::pow(std::abs(h(i)) / amax, q);
  }
  // ||h||_q <= t  <=>  amax * dual_norm_pow^(1/q) <= t
  if (amax == 0.0 || amax * std::pow(dual_norm_pow, 1.0 / q) <= t) return 0.0;
  const std::vector<double> y = ProjectUnitLqBall(a, q);
  double sq = 0.0;
  double lp = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - y[i];
    sq += diff * diff;
    if (slope) lp += std::pow(diff, p);
  }
  if (slope && sq > 0.0) *slope = -std::pow(lp, 1.0 / p) / std::sqrt(sq);
  return t * std::sqrt(sq);
}

// Holds the common random number stream for one query. For p = 2 the distance
// depends only on ||h||, so the norms are drawn once and cached.
class DistanceSampler {
 public:
  explicit DistanceSampler(const TheoryQuery& q) : q_(q) {
    q_.Validate();
    if (!q_.n) throw DomainError("Monte-Carlo estimation needs a finite n");
    n_ = *q_.n;
    blocks_ = (q_.mc_samples + kBlockSize - 1) / kBlockSize;
    if (q_.p == 2.0) {
      norms_.resize(q_.mc_samples);
      internal::ParallelFor(blocks_, [&](std::size_t b) {
        SeededRng rng(MixSeed(q_.seed, b));
        const std::size_t begin = b * kBlockSize;
        const std::size_t end = std::min(begin + kBlockSize, q_.mc_samples);
        for (std::size_t s = begin; s < end; ++s) {
          double sq = 0.0;
          for (std::size_t i = 0; i < n_; ++i) {
            const double g = rng.Normal();
            sq += g * g;
          }
          norms_[s] = std::sqrt(sq);
        }
      });
    }
  }

  McEstimate Estimate(double t) const { return Pass(t).first; }

  // g(t) = D(t) - (t/2) D'(t).
  double G(double t) const {
    if (q_.slope == TheoryQuery::Slope::kPathwise) {
      // With m = E dist / sqrt(n): D = m^2, D' = 2 m m', m' the mean slope.
      const auto [est, slope] = Pass(t);
      return est.estimate - t * est.mean_dist * slope;
    }
    const double step = std::max(1e-3, 1e-2 * t);
    const double d = Estimate(t).estimate;
    double slope;
    if (t - step >= 0.0) {
      slope = (Estimate(t + step).estimate - Estimate(t - step).estimate) / (2.0 * step);
    } else {
      slope = (Estimate(t + step).estimate - d) / step;
    }
    return d - 0.5 * t * slope;
  }

  bool pathwise() const { return q_.slope == TheoryQuery::Slope::kPathwise; }

 private:
  // Estimate at t plus the sample mean of d/dt dist / sqrt(n).
  std::pair<McEstimate, double> Pass(double t) const {
    if (!(t >= 0.0)) throw DomainError("t must be non-negative");
    std::vector<BlockSums> sums(blocks_);
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n_));
    internal::ParallelFor(blocks_, [&](std::size_t b) {
      const std::size_t begin = b * kBlockSize;
      const std::size_t end = std::min(begin + kBlockSize, q_.mc_samples);
      BlockSums acc;
      if (!norms_.empty()) {
        for (std::size_t s = begin; s < end; ++s) {
          const double d = std::max(norms_[s] - t, 0.0);
          acc.Add(d * inv_sqrt_n, d * d * inv_sqrt_n * inv_sqrt_n,
                  d > 0.0 ? -inv_sqrt_n : 0.0);
        }
      } else {
        SeededRng rng(MixSeed(q_.seed, b));
        Vector h(static_cast<Eigen::Index>(n_));
        for (std::size_t s = begin; s < end; ++s) {
          for (Eigen::Index i = 0; i < h.size(); ++i) h(i) = rng.Normal();
          double slope = 0.0;
          const double d = DistAndSlope(h, q_.p, t, &slope);
          acc.Add(d * inv_sqrt_n, d * d * inv_sqrt_n * inv_sqrt_n, slope * inv_sqrt_n);
        }
      }
      sums[b] = acc;
    });
    BlockSums total;
    for (const auto& s : sums) total.Merge(s);

    const double count = total.count;
    double mean = total.sum_y / count;
    double var = std::max(total.sum_yy / count - mean * mean, 0.0) * count /
                 std::max(count - 1.0, 1.0);
    if (q_.theta_control_variate && q_.p == 1.0) {
      const double mean_c = total.sum_c / count;
      const double var_c = std::max(total.sum_cc / count - mean_c * mean_c, 0.0);
      const double cov = total.sum_yc / count - mean * mean_c;
      if (var_c > 0.0) {
        const double beta = cov / var_c;
        mean -= beta * (mean_c - Theta(t));
        var = std::max(var - beta * cov, 0.0);
      }
    }
    McEstimate out;
    out.mean_dist = mean;
    out.estimate = mean * mean;
    out.stderr_ = 2.0 * std::abs(mean) * std::sqrt(var) / std::sqrt(count);
    return {out, total.sum_s / count};
  }

  TheoryQuery q_;
  std::size_t n_ = 0;
  std::size_t blocks_ = 0;
  std::vector<double> norms_;
};

double TStarFinite(const DistanceSampler& sampler, double delta) {
  double lo = 0.0;
  double hi = 1.0;
  double g_hi = sampler.G(hi);
  if (g_hi > delta) {
    int steps = 0;
    while (g_hi > delta) {
      lo = hi;
      hi *= 2.0;
      g_hi = sampler.G(hi);
      if (++steps > kMaxBracketSteps) {
        throw NumericalFailure("t* bracket not found after " +
                               std::to_string(kMaxBracketSteps) +
                               " doublings (g stays above delta)");
      }
    }
  } else {
    lo = 0.5;
    int steps = 0;
    while (sampler.G(lo) <= delta) {
      hi = lo;
      lo *= 0.5;
      if (++steps > kMaxBracketSteps) {
        throw NumericalFailure("t* bracket not found: g(t) <= delta near t = 0");
      }
    }
  }
  if (!sampler.pathwise()) {
    for (int iter = 0; iter < 100 && hi - lo > 1e-6 * hi; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (sampler.G(mid) > delta) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }
  // Illinois regula falsi on g(t) - delta, which decreases in t.
  double f_lo = sampler.G(lo) - delta;
  double f_hi = sampler.G(hi) - delta;
  int side = 0;
  double prev = lo;
  for (int iter = 0; iter < 100 && hi - lo > 1e-6 * hi; ++iter) {
    double mid = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
    if (std::abs(mid - prev) <= 1e-8 * mid) return mid;
    prev = mid;
    const double f_mid = sampler.G(mid) - delta;
    if (f_mid == 0.0) return mid;
    if (f_mid > 0.0) {
      lo = mid;
      f_lo = f_mid;
      if (side == 1) f_hi *= 0.5;
      side = 1;
    } else {
      hi = mid;
      f_hi = f_mid;
      if (side == -1) f_lo *= 0.5;
      side = -1;
    }
    if (std::abs(f_mid) < 1e-12) return mid;
  }
  return 0.5 * (lo + hi);
}

void FinishAlpha(TheoryResult& r) {
  const double d = r.d_at_tstar;
  if (!(d < r.delta) || !(d > 0.0)) {
    throw NumericalFailure("D(t*) = " + FormatDouble(d) +
                           " is outside (0, delta = " + FormatDouble(r.delta) + ")");
  }
  r.alpha_star_sq = d / (r.delta * (r.delta - d));
  r.alpha_star = std::sqrt(r.alpha_star_sq);
}

}  // namespace

void TheoryQuery::Validate() const {
  if (!(p >= 1.0 && p <= 2.0)) throw DomainError("p must lie in [1, 2]");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  if (n && *n == 0) throw DomainError("n must be positive");
  if (mc_samples < 1000) throw DomainError("mc_samples must be at least 1000");
}

double DistToDualBall(const Vector& h, double p, double t) {
  return DistAndSlope(h, p, t, nullptr);
}

McEstimate MonteCarloD(const TheoryQuery& q, double t) {
  return DistanceSampler(q).Estimate(t);
}

double TStar(const TheoryQuery& q) {
  q.Validate();
  if (!q.n) {
    if (q.p == 1.0) return std::numbers::sqrt2 * ErfcInv(q.delta);
    if (q.p == 2.0) return 1.0 - q.delta;
    throw DomainError("closed-form limits exist only for p = 1 and p = 2");
  }
  return TStarFinite(DistanceSampler(q), q.delta);
}

double LimitAlphaStarL1(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  const double t = std::numbers::sqrt2 * ErfcInv(delta);
  const double gauss = std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * t * t) * t;
  return std::sqrt(1.0 / (gauss - delta * t * t) - 1.0 / delta);
}

double LimitAlphaStarL2(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  return 1.0 / std::sqrt(1.0 - delta);
}

TheoryResult AlphaStar(const TheoryQuery& q) {
  q.Validate();
  TheoryResult r;
  r.p = q.p;
  r.delta = q.delta;
  r.n = q.n;
  if (!q.n) {
    r.method = TheoryMethod::kClosedFormLimit;
    if (q.p == 1.0) {
      // D_1 -> theta in the limit, and g = theta - (t/2) theta' = erfc(t/sqrt2).
      r.t_star = TStar(q);
      r.d_at_tstar = Theta(r.t_star);
    } else if (q.p == 2.0) {
      // With tau = t / sqrt(n): D_2 -> (1 - tau)^2 and tau* -> 1 - delta.
      r.t_star = 1.0 - q.delta;
      r.t_star_normalized = true;
      r.d_at_tstar = q.delta * q.delta;
    } else {
      throw DomainError("closed-form limits exist only for p = 1 and p = 2");
    }
    FinishAlpha(r);
    return r;
  }

  r.method = TheoryMethod::kMonteCarloFiniteN;
  r.unverified_hypothesis = q.p != 1.0 && q.p != 2.0;
  const DistanceSampler sampler(q);
  r.t_star = TStarFinite(sampler, q.delta);
  const McEstimate d = sampler.Estimate(r.t_star);
  r.d_at_tstar = d.estimate;
  r.stderr_d = d.stderr_;
  FinishAlpha(r);
  return r;
}

std::string ToString(TheoryMethod method) {
  return method == TheoryMethod::kClosedFormLimit ? "closed_form_limit"
                                                  : "monte_carlo_finite_n";
}

nlohmann::json ToJson(const TheoryResult& r) {
  nlohmann::json j;
  j["p"] = r.p;
  j["delta"] = r.delta;
  if (r.n) {
    j["n"] = *r.n;
  } else {
    j["n"] = "inf";
  }
  j["t_star"] = r.t_star;
  j["t_star_unit"] = r.t_star_normalized ? "t/sqrt(n)" : "t";
  j["D_at_tstar"] = r.d_at_tstar;
  j["alpha_star"] = r.alpha_star;
  j["alpha_star_sq"] = r.alpha_star_sq;
  j["method"] = ToString(r.method);
  j["stderr"] = r.stderr_d;
  j["unverified_hypothesis"] = r.unverified_hypothesis;
  return j;
}

std::string ToCsvRow(const TheoryResult& r) {
  std::string row = FormatDouble(r.p) + "," + FormatDouble(r.delta) + ",";
  row += r.n ? std::to_string(*r.n) : std::string("inf");
  row += "," + FormatDouble(r.t_star) + "," + FormatDouble(r.d_at_tstar) + "," +
         FormatDouble(r.alpha_star) + "," + FormatDouble(r.alpha_star_sq) + "," +
         FormatDouble(r.stderr_d);
  return row;
}

}  // namespace lpginv
