// src/prior.cc

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

#include "prior.h"

namespace fhkit {

Eigen::VectorXd NormalizeFloored(const Eigen::VectorXd& v, double floor) {
  Eigen::VectorXd out = v.cwiseMax(floor);
  const double sum = out.sum();
  if (!(sum > 0) || !std::isfinite(sum))
    throw NumericalError("cannot normalize prior vector");
  out /= sum;
  return out.cwiseMax(floor);
}

PriorState PriorState::Uniform(const PhonemeInventory& inv, double decay) {
  PriorState p;
  p.left = Eigen::VectorXd::Constant(inv.ContextCount(),
                                     1.0 / inv.ContextCount());
  p.center = Eigen::VectorXd::Constant(inv.CenterStateCount(),
                                       1.0 / inv.CenterStateCount());
  p.right = p.left;
  p.decay = decay;
  return p;
}

void PriorState::Validate() const {
  auto check = [](const Eigen::VectorXd& v) {
    if (v.size() == 0 || v.minCoeff() <= 0)
      throw DataError("prior vector must be strictly positive");
    if (std::abs(v.sum() - 1.0) > 1e-8)
      throw DataError("prior vector must sum to 1");
  };
  check(left);
  check(center);
  check(right);
  if (decay < 0 || decay > 1) throw DataError("prior decay must lie in [0, 1]");
}

void UpdatePriorOnline(PriorState& priors, const PosteriorBatch& posteriors) {
  if (posteriors.left.rows() == 0) throw DataError("empty posterior batch");
  auto update = [&](Eigen::VectorXd& prior, const Eigen::MatrixXd& post) {
    if (post.cols() != prior.size())
      throw DataError("posterior/prior dimension mismatch");
    if (priors.decay == 0) return;
    const Eigen::VectorXd mean = post.colwise().mean().transpose();
    prior = NormalizeFloored((1.0 - priors.decay) * prior + priors.decay * mean);
  };
  update(priors.left, posteriors.left);
  update(priors.center, posteriors.center);
  update(priors.right, posteriors.right);
}

Scales ScaleAtEpoch(const ScaleSchedule& schedule, int epoch) {
  if (epoch < 0) throw DataError("negative epoch");
  if (schedule.ramp_epochs < 1) throw DataError("ramp_epochs must be >= 1");
  const double frac =
      std::min(1.0, static_cast<double>(epoch) / schedule.ramp_epochs);
  auto ramp = [frac](double start, double max) {
    return start + (max - start) * frac;
  };
  Scales s;
  s.am = ramp(schedule.am_start, schedule.am_max);
  s.prior_left = ramp(schedule.prior_start, schedule.prior_left_max);
  s.prior_center = ramp(schedule.prior_start, schedule.prior_center_max);
  s.prior_right = ramp(schedule.prior_start, schedule.prior_right_max);
  return s;
}

}  // namespace fhkit
