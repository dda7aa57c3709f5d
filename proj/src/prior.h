// src/prior.h

// Copyright 2026  fhkit authors
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

#ifndef FHKIT_PRIOR_H_
#define FHKIT_PRIOR_H_

#include <Eigen/Dense>

#include "net.h"

namespace fhkit {

constexpr double kPriorFloor = 1e-12;
constexpr double kPosteriorFloor = 1e-20;

// Per-head label priors; strictly positive and normalized.
struct PriorState {
  Eigen::VectorXd left;
  Eigen::VectorXd center;
  Eigen::VectorXd right;
  double decay = 0.001;  // per-update weight of the new estimate

  static PriorState Uniform(const PhonemeInventory& inv, double decay = 0.001);
  void Validate() const;
};

// prior <- normalize((1 - decay) * prior + decay * frame-mean(posteriors)),
// floored to stay strictly positive.
void UpdatePriorOnline(PriorState& priors, const PosteriorBatch& posteriors);

Eigen::VectorXd NormalizeFloored(const Eigen::VectorXd& v, double floor = kPriorFloor);

// Per-epoch acoustic-model and per-factor prior scales: linear ramp from the
// start values to the maxima over ramp_epochs, then clamped.
struct ScaleSchedule {
  double am_start = 0.01;
  double am_max = 0.3;
  double prior_start = 0.1;
  double prior_left_max = 0.3;
  double prior_center_max = 0.7;
  double prior_right_max = 0.4;
  int ramp_epochs = 10;
};

struct Scales {
  double am = 1.0;
  double prior_left = 0.0;
  double prior_center = 0.0;
  double prior_right = 0.0;
};

Scales ScaleAtEpoch(const ScaleSchedule& schedule, int epoch);

}  // namespace fhkit

#endif  // FHKIT_PRIOR_H_
