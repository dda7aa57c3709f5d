// src/fullsum.cc

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

#include "fullsum.h"

#include <cmath>

namespace fhkit {

namespace {

inline double FlooredLog(double p) {
  return std::log(std::max(p, kPosteriorFloor));
}

}  // namespace

Eigen::MatrixXd PseudoEmissions(const PosteriorBatch& posteriors,
                                const PriorState& priors, const Scales& scales,
                                const StateGraphCore& core) {
  const int T = static_cast<int>(posteriors.center.rows());
  if (posteriors.left.rows() != T || posteriors.right.rows() != T)
    throw DataError("posterior batch frame count mismatch");
  if (priors.left.size() != posteriors.left.cols() ||
      priors.center.size() != posteriors.center.cols() ||
      priors.right.size() != posteriors.right.cols())
    throw DataError("prior/posterior dimension mismatch");

  Eigen::MatrixXd emissions(T, core.NumNodes());
  for (int q = 0; q < core.NumNodes(); ++q) {
    const FactoredIndices& fi = core.nodes[q].factored;
    if (fi.left >= posteriors.left.cols() || fi.center_state >= posteriors.center.cols() ||
        fi.right >= posteriors.right.cols())
      throw DataError("graph node indices exceed posterior dimensions");
    const double prior_term =
        scales.prior_left * std::log(priors.left(fi.left)) +
        scales.prior_center * std::log(priors.center(fi.center_state)) +
        scales.prior_right * std::log(priors.right(fi.right));
    for (int t = 0; t < T; ++t) {
      const double am = FlooredLog(posteriors.left(t, fi.left)) +
                        FlooredLog(posteriors.center(t, fi.center_state)) +
                        FlooredLog(posteriors.right(t, fi.right));
      emissions(t, q) = scales.am * am - prior_term;
    }
  }
  return emissions;
}

Occupancies MarginalizeOccupancies(const StateGraphCore& core,
                                   const Eigen::MatrixXd& node_occupancy,
                                   const PhonemeInventory& inv,
                                   double log_likelihood) {
  const int T = static_cast<int>(node_occupancy.rows());
  if (node_occupancy.cols() != core.NumNodes())
    throw DataError("occupancy column count does not match graph");
  Occupancies occ;
  occ.log_likelihood = log_likelihood;
  occ.left = Eigen::MatrixXd::Zero(T, inv.ContextCount());
  occ.center = Eigen::MatrixXd::Zero(T, inv.CenterStateCount());
  occ.right = Eigen::MatrixXd::Zero(T, inv.ContextCount());
  for (int q = 0; q < core.NumNodes(); ++q) {
    const FactoredIndices& fi = core.nodes[q].factored;
    occ.left.col(fi.left) += node_occupancy.col(q);
    occ.center.col(fi.center_state) += node_occupancy.col(q);
    occ.right.col(fi.right) += node_occupancy.col(q);
  }
  return occ;
}

double FullSumLoss(const PosteriorBatch& posteriors, const Occupancies& gamma,
                   double am_scale) {
  double loss = 0.0;
  auto accumulate = [&](const Eigen::MatrixXd& p, const Eigen::MatrixXd& g) {
    for (Eigen::Index t = 0; t < p.rows(); ++t)
      for (Eigen::Index c = 0; c < p.cols(); ++c)
        if (g(t, c) != 0.0) loss -= am_scale * g(t, c) * FlooredLog(p(t, c));
  };
  accumulate(posteriors.left, gamma.left);
  accumulate(posteriors.center, gamma.center);
  accumulate(posteriors.right, gamma.right);
  return loss;
}

HeadGrads FullSumHeadGrads(const PosteriorBatch& posteriors,
                           const Occupancies& gamma, double am_scale) {
  HeadGrads grads;
  grads.left = am_scale * (posteriors.left - gamma.left);
  grads.center = am_scale * (posteriors.center - gamma.center);
  grads.right = am_scale * (posteriors.right - gamma.right);
  return grads;
}

FullSumStepResult FullSumStep(const FactoredModel& model,
                              const std::vector<FullSumUtterance>& batch,
                              PriorState& priors, const Scales& scales,
                              bool train_mode, uint64_t dropout_seed,
                              int jobs) {
  if (model.CenterUsesLeft() || model.RightUsesContexts())
    throw DataError("full-sum training requires context-independent heads");

  struct PerUtterance {
    bool ok = false;
    double loss = 0.0;
    double log_likelihood = 0.0;
    int64_t frames = 0;
    ParamSet grads;
    Eigen::VectorXd mean_left, mean_center, mean_right;
  };
  std::vector<PerUtterance> partial(batch.size());

  ParallelFor(jobs, static_cast<int>(batch.size()), [&](int i) {
    const FullSumUtterance& utt = batch[i];
    const int T = static_cast<int>(utt.features->rows());
    PerUtterance& out = partial[i];
    if (T < MinPathLength(*utt.graph)) return;  // reported as skipped
    ForwardCache cache = model.Forward(*utt.features, nullptr, train_mode,
                                       MixSeed(dropout_seed, i));
    Eigen::MatrixXd emissions =
        PseudoEmissions(cache.posteriors, priors, scales, utt.graph->core);
    ForwardBackwardResult fb = ForwardBackward(utt.graph->core, emissions);
    Occupancies gamma = MarginalizeOccupancies(utt.graph->core, fb.occupancy,
                                               model.inventory(),
                                               fb.log_likelihood);
    out.loss = FullSumLoss(cache.posteriors, gamma, scales.am);
    out.grads =
        model.Backward(cache, FullSumHeadGrads(cache.posteriors, gamma, scales.am));
    out.log_likelihood = fb.log_likelihood;
    out.frames = T;
    out.mean_left = cache.posteriors.left.colwise().mean().transpose();
    out.mean_center = cache.posteriors.center.colwise().mean().transpose();
    out.mean_right = cache.posteriors.right.colwise().mean().transpose();
    out.ok = true;
  });

  FullSumStepResult result;
  result.grads = model.params().ZerosLike();
  Eigen::VectorXd sum_left, sum_center, sum_right;
  int64_t posterior_frames = 0;
  for (const auto& p : partial) {
    if (!p.ok) {
      ++result.skipped;
      continue;
    }
    result.loss += p.loss;
    result.log_likelihood += p.log_likelihood;
    result.frames += p.frames;
    result.grads.Add(p.grads);
    if (posterior_frames == 0) {
      sum_left = p.frames * p.mean_left;
      sum_center = p.frames * p.mean_center;
      sum_right = p.frames * p.mean_right;
    } else {
      sum_left += p.frames * p.mean_left;
      sum_center += p.frames * p.mean_center;
      sum_right += p.frames * p.mean_right;
    }
    posterior_frames += p.frames;
  }
  if (result.skipped > 0)
    FHKIT_WARN(("skipped ", result.skipped,
                " infeasible utterances (frames < minimum path length)"));
  if (posterior_frames > 0) {
    PosteriorBatch batch_mean;
    batch_mean.left = (sum_left / posterior_frames).transpose();
    batch_mean.center = (sum_center / posterior_frames).transpose();
    batch_mean.right = (sum_right / posterior_frames).transpose();
    UpdatePriorOnline(priors, batch_mean);
  }
  return result;
}

}  // namespace fhkit
