// Copyright 2026 The chanalloc Authors
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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "chanalloc/channel.hpp"
#include "chanalloc/errors.hpp"
#include "chanalloc/numerics.hpp"

namespace chanalloc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = 1e-8;
constexpr double kLambdaMax = 1e6;

// Moments of the two pieces of the conditional law at a = 1 - lambda:
// the outage interval [1/snr, e^Rc/snr] and the tail [e^Rc/snr, inf).
struct Pieces {
  bool has_interval = false;
  bool has_tail = false;
  GammaMoments interval;
  GammaMoments tail;
};

Pieces pieces(double lambda, const SaddleInputs& in) {
  const double beta = in.beta();
  const double lo = 1.0 / in.snr;
  const double mid = std::exp(in.rc) / in.snr;
  Pieces p;
  p.has_interval = beta > 0.0;
  p.has_tail = beta < 1.0;
  if (p.has_interval) p.interval = gamma_moments(1.0 - lambda, lo, mid);
  if (p.has_tail) p.tail = gamma_moments(1.0 - lambda, mid, kInf);
  if ((p.has_interval && !(p.interval.scaled[0] > 0.0)) ||
      (p.has_tail && !(p.tail.scaled[0] > 0.0))) {
    throw DomainError("incomplete gamma term lost positivity at lambda = " +
                      std::to_string(lambda));
  }
  return p;
}

double log_pq(const SaddleInputs& in) {
  const OutageProbability o = subchannel_outage_prob(in.rc, in.snr);
  const double beta = in.beta();
  double j1 = 0.0;
  if (beta > 0.0) j1 += beta * std::log(o.p);
  if (beta < 1.0) j1 += (1.0 - beta) * std::log(o.q);
  return j1;
}

// J0 = 1/snr + (1-beta) ln Gamma(1-l, e^Rc/snr) + beta ln(interval integral).
double j0_of(const Pieces& p, const SaddleInputs& in) {
  const double beta = in.beta();
  double j0 = 1.0 / in.snr;
  if (p.has_tail) j0 += (1.0 - beta) * p.tail.log_value();
  if (p.has_interval) j0 += beta * p.interval.log_value();
  return j0;
}

double d1_of(const Pieces& p, const SaddleInputs& in) {
  const double beta = in.beta();
  double d = in.rc - std::log(in.snr);
  if (p.has_interval) d -= beta * p.interval.mean_log();
  if (p.has_tail) d -= (1.0 - beta) * p.tail.mean_log();
  return d;
}

double d2_of(const Pieces& p, const SaddleInputs& in) {
  const double beta = in.beta();
  double d = 0.0;
  if (p.has_interval) d += beta * p.interval.var_log();
  if (p.has_tail) d += (1.0 - beta) * p.tail.var_log();
  return d;
}

// Safeguarded Newton on f' with f'' as slope, inside [lo, hi] where
// f'(lo) < 0 < f'(hi).
template <typename D1, typename D2>
double newton_bisect(const D1& d1, const D2& d2, double lo, double hi,
                     double tol) {
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double g = d1(x);
    if (std::abs(g) <= tol) return x;
    if (g < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double slope = d2(x);
    double next = x - g / slope;
    if (!(slope > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 1e-15 * std::max(1.0, hi)) return next;
    x = next;
  }
  return x;
}

SaddleSolution empty_tail() {
  SaddleSolution s;
  s.status = SaddleStatus::kEmptyTail;
  s.bound = 0.0;
  s.bound_cgf_form = 0.0;
  s.log_bound = -kInf;
  return s;
}

SaddleSolution no_saddle() {
  SaddleSolution s;
  s.status = SaddleStatus::kNoSaddle;
  s.bound = 1.0;
  s.bound_cgf_form = 1.0;
  s.log_bound = 0.0;
  return s;
}

// Grows the bracket geometrically from 1 until d1 turns positive.
template <typename D1>
bool bracket(const D1& d1, double* lo, double* hi) {
  *lo = kEps;
  *hi = 1.0;
  for (;;) {
    double g;
    try {
      g = d1(*hi);
    } catch (const DomainError&) {
      return false;
    }
    if (!std::isfinite(g)) return false;
    if (g > 0.0) return true;
    *lo = *hi;
    *hi *= 2.0;
    if (*hi > kLambdaMax) return false;
  }
}

}  // namespace

void SaddleInputs::Validate() const {
  if (K < 1) throw DomainError("saddle inputs need K >= 1");
  if (k < 0 || k > K) throw DomainError("saddle inputs need 0 <= k <= K");
  if (!(snr > 0.0) || !std::isfinite(snr)) throw DomainError("snr must be > 0");
  if (!(rc >= 0.0) || !std::isfinite(rc)) throw DomainError("R_c must be >= 0");
}

double cgf(double lambda, const SaddleInputs& in) {
  in.Validate();
  const Pieces p = pieces(lambda, in);
  return (in.rc - std::log(in.snr)) * lambda + j0_of(p, in) - log_pq(in);
}

double cgf_d1(double lambda, const SaddleInputs& in) {
  in.Validate();
  return d1_of(pieces(lambda, in), in);
}

double cgf_d2(double lambda, const SaddleInputs& in) {
  in.Validate();
  return d2_of(pieces(lambda, in), in);
}

SaddleSolution solve_saddle(const SaddleInputs& in) {
  in.Validate();
  // Every good subchannel already carries R_c, so the sum cannot fall short.
  if (in.rc == 0.0 || in.k == in.K) return empty_tail();
  auto d1 = [&](double x) { return d1_of(pieces(x, in), in); };
  auto d2 = [&](double x) { return d2_of(pieces(x, in), in); };
  if (!(d1(kEps) < 0.0)) return no_saddle();
  double lo, hi;
  if (!bracket(d1, &lo, &hi)) return no_saddle();
  const double tol = 1e-9 * std::max(1.0, std::abs(in.rc));
  SaddleSolution s;
  s.lambda_star = newton_bisect(d1, d2, lo, hi, tol);
  const Pieces p = pieces(s.lambda_star, in);
  s.sigma_sq = d2_of(p, in);
  const double h = 1e-5 * std::max(1.0, s.lambda_star);
  s.sigma_sq_fd = (d1(s.lambda_star + h) - d1(s.lambda_star - h)) / (2.0 * h);
  s.J0 = j0_of(p, in);
  s.J1 = log_pq(in);
  s.J2 = s.lambda_star;
  s.psi = 1.0 / (std::sqrt(2.0 * std::numbers::pi * in.K * s.sigma_sq) *
                 s.lambda_star);
  s.log_bound = std::log(s.psi) -
                in.K * ((std::log(in.snr) - in.rc) * s.J2 + s.J1 - s.J0);
  s.bound = std::exp(s.log_bound);
  s.bound_cgf_form = s.psi * std::exp(in.K * cgf(s.lambda_star, in));
  return s;
}

double cond_outage_upper(const SaddleInputs& in) {
  return solve_saddle(in).reported();
}

double interleaved_cgf(double lambda, double snr, double rc) {
  const GammaMoments g = gamma_moments(1.0 - lambda, 1.0 / snr, kInf);
  return (rc - std::log(snr)) * lambda + 1.0 / snr + g.log_value();
}

double interleaved_cgf_d1(double lambda, double snr, double rc) {
  const GammaMoments g = gamma_moments(1.0 - lambda, 1.0 / snr, kInf);
  return rc - std::log(snr) - g.mean_log();
}

double interleaved_cgf_d2(double lambda, double snr, double /*rc*/) {
  return gamma_moments(1.0 - lambda, 1.0 / snr, kInf).var_log();
}

SaddleSolution interleaved_saddle(double count, double snr, double rc) {
  if (!(count > 0.0)) throw DomainError("subchannel count must be positive");
  if (!(snr > 0.0)) throw DomainError("snr must be > 0");
  if (!(rc >= 0.0)) throw DomainError("R_c must be >= 0");
  if (rc == 0.0) return empty_tail();
  auto d1 = [&](double x) { return interleaved_cgf_d1(x, snr, rc); };
  auto d2 = [&](double x) { return interleaved_cgf_d2(x, snr, rc); };
  if (!(d1(kEps) < 0.0)) return no_saddle();
  double lo, hi;
  if (!bracket(d1, &lo, &hi)) return no_saddle();
  SaddleSolution s;
  s.lambda_star = newton_bisect(d1, d2, lo, hi, 1e-9 * std::max(1.0, rc));
  const GammaMoments g = gamma_moments(1.0 - s.lambda_star, 1.0 / snr, kInf);
  s.sigma_sq = g.var_log();
  const double h = 1e-5 * std::max(1.0, s.lambda_star);
  s.sigma_sq_fd = (d1(s.lambda_star + h) - d1(s.lambda_star - h)) / (2.0 * h);
  s.J0 = 1.0 / snr + g.log_value();
  s.J1 = 0.0;
  s.J2 = s.lambda_star;
  s.psi = 1.0 / (std::sqrt(2.0 * std::numbers::pi * count * s.sigma_sq) *
                 s.lambda_star);
  s.log_bound =
      std::log(s.psi) - count * ((std::log(snr) - rc) * s.J2 - s.J0);
  s.bound = std::exp(s.log_bound);
  s.bound_cgf_form =
      s.psi * std::exp(count * interleaved_cgf(s.lambda_star, snr, rc));
  return s;
}

double interleaved_upper(double count, double snr, double rc) {
  return interleaved_saddle(count, snr, rc).reported();
}

double cond_dmt(int K, int k, double r) {
  if (K < 1 || k < 0 || k > K) throw DomainError("cond_dmt needs 0 <= k <= K");
  if (!(r >= 0.0 && r <= K)) throw DomainError("cond_dmt needs 0 <= r <= K");
  return k * (1.0 - r / K);
}

}  // namespace chanalloc
