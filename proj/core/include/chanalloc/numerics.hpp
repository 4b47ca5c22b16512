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

#ifndef CHANALLOC_NUMERICS_HPP_
#define CHANALLOC_NUMERICS_HPP_

#include <array>
#include <cmath>

namespace chanalloc {

// Moments I_k = integral_lo^hi t^(a-1) e^(-t) (ln t)^k dt, k = 0, 1, 2, held
// as exp(log_scale) * scaled[k] so that extreme parameters neither overflow
// nor underflow. hi may be +infinity.
struct GammaMoments {
  double log_scale = 0.0;
  std::array<double, 3> scaled{};

  double value(int k) const { return std::exp(log_scale) * scaled[k]; }
  double log_value() const { return log_scale + std::log(scaled[0]); }
  // E[(ln t)^k] under the normalized density; k = 1, 2.
  double mean_log() const { return scaled[1] / scaled[0]; }
  double var_log() const {
    const double m = mean_log();
    return scaled[2] / scaled[0] - m * m;
  }
};

// Computed by adaptive Gauss-Kronrod (7/15) after the substitution
// t = lo * e^s, with relative tolerance rel_tol per moment.
GammaMoments gamma_moments(double a, double lo, double hi,
                           double rel_tol = 1e-13);

// Gamma(a, z) for any real a, z > 0.
double upper_inc_gamma(double a, double z);
// d/da Gamma(a, z) = integral_z^inf t^(a-1) e^(-t) ln t dt.
double inc_gamma_d1(double a, double z);
// d^2/da^2 Gamma(a, z).
double inc_gamma_d2(double a, double z);

// K subchannels of which k are known non-outage; the target is K * R_c on
// the band-level rates ln(1 + |g|^2 snr).
struct SaddleInputs {
  int K = 1;
  int k = 0;
  double snr = 1.0;
  double rc = 0.0;

  double beta() const { return 1.0 - static_cast<double>(k) / K; }
  void Validate() const;
};

enum class SaddleStatus {
  kOk,
  kNoSaddle,   // tail condition fails or no sign change: bound reported as 1
  kEmptyTail,  // the event has probability zero (rate 0, or all k = K good)
};

struct SaddleSolution {
  SaddleStatus status = SaddleStatus::kOk;
  double lambda_star = 0.0;
  double sigma_sq = 0.0;
  double sigma_sq_fd = 0.0;  // central difference of the first derivative
  double J0 = 0.0;
  double J1 = 0.0;
  double J2 = 0.0;
  double psi = 0.0;
  double bound = 1.0;           // J-form, unclamped
  double bound_cgf_form = 1.0;  // psi * exp(K * cgf(lambda_star))
  double log_bound = 0.0;

  double reported() const { return bound < 1.0 ? bound : 1.0; }
};

// Cumulant-generating function per subchannel of Y = R_c - ln(1 + x snr)
// under the conditional law, and its first two derivatives in lambda.
double cgf(double lambda, const SaddleInputs& in);
double cgf_d1(double lambda, const SaddleInputs& in);
double cgf_d2(double lambda, const SaddleInputs& in);

SaddleSolution solve_saddle(const SaddleInputs& in);

// Reported conditional outage bound, min(bound, 1).
double cond_outage_upper(const SaddleInputs& in);

// Unconditioned variant for a fixed allocation of `count` independent
// subchannels: no p_s/q_s terms and a single Gamma(1 - lambda, 1/snr).
double interleaved_cgf(double lambda, double snr, double rc);
double interleaved_cgf_d1(double lambda, double snr, double rc);
double interleaved_cgf_d2(double lambda, double snr, double rc);
SaddleSolution interleaved_saddle(double count, double snr, double rc);
double interleaved_upper(double count, double snr, double rc);

// k (1 - r / K).
double cond_dmt(int K, int k, double r);

}  // namespace chanalloc

#endif  // CHANALLOC_NUMERICS_HPP_
