// src/ce-train.cc

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

#include "ce-train.h"

#include <cmath>

#include "prior.h"

namespace fhkit {

std::vector<Chunk> ChunkSequence(int frames, int length, double overlap) {
  if (frames < 1) throw DataError("cannot chunk an empty sequence");
  if (length < 1) throw DataError("chunk length must be >= 1");
  if (overlap < 0 || overlap >= 1) throw DataError("overlap must lie in [0, 1)");
  int stride = static_cast<int>(std::lround(length * (1.0 - overlap)));
  if (stride < 1) stride = 1;
  std::vector<Chunk> chunks;
  for (int start = 0;; start += stride) {
    const int len = std::min(length, frames - start);
    chunks.push_back({start, len});
    if (start + length >= frames) break;
  }
  return chunks;
}

double FocalLossTerm(double p_target, double gamma) {
  const double p = std::max(p_target, kPosteriorFloor);
  return -std::pow(1.0 - p, gamma) * std::log(p);
}

double FocalLogitCoefficient(double p_target, double gamma) {
  const double p = std::max(p_target, kPosteriorFloor);
  if (gamma == 0.0) return -1.0;
  return gamma * p * std::pow(1.0 - p, gamma - 1.0) * std::log(p) -
         std::pow(1.0 - p, gamma);
}

namespace {

struct ExampleView {
  Eigen::MatrixXd features;
  std::vector<int> target_left, target_center, target_right;
  ContextInputs contexts;
};

ExampleView SliceExample(const PhonemeInventory& inv, const CeExample& ex) {
  if (ex.features == nullptr || ex.labels == nullptr)
    throw DataError("CE example missing features or labels");
  const int total = static_cast<int>(ex.features->rows());
  if (ex.labels->size() != static_cast<size_t>(total))
    throw DataError("alignment length does not match feature frames");
  const int length = ex.length < 0 ? total - ex.start : ex.length;
  if (ex.start < 0 || length < 1 || ex.start + length > total)
    throw DataError("chunk outside utterance bounds");

  ExampleView view;
  view.features = ex.features->middleRows(ex.start, length);
  view.target_left.resize(length);
  view.target_center.resize(length);
  view.target_right.resize(length);
  view.contexts.left.resize(length);
  view.contexts.center_state.resize(length);
  for (int t = 0; t < length; ++t) {
    const FactoredIndices fi =
        inv.ToFactored(inv.Unpack((*ex.labels)[ex.start + t]));
    view.target_left[t] = fi.left;
    view.target_center[t] = fi.center_state;
    view.target_right[t] = fi.right;
    view.contexts.left[t] = fi.left;
    view.contexts.center_state[t] = fi.center_state;
  }
  return view;
}

// Focal loss and logit gradient for one head over the batch posteriors.
double HeadFocal(const Eigen::MatrixXd& post, const std::vector<int>& targets,
                 double gamma, Eigen::MatrixXd* dlogits, int64_t* errors) {
  double loss = 0.0;
  dlogits->setZero(post.rows(), post.cols());
  for (Eigen::Index t = 0; t < post.rows(); ++t) {
    const int y = targets[t];
    if (y < 0 || y >= post.cols())
      throw DataError(StrCat("target label out of range: ", y));
    const double p = post(t, y);
    loss += FocalLossTerm(p, gamma);
    const double coef = FocalLogitCoefficient(p, gamma);
    dlogits->row(t) = -coef * post.row(t);
    (*dlogits)(t, y) += coef;
    Eigen::Index argmax;
    post.row(t).maxCoeff(&argmax);
    if (static_cast<int>(argmax) != y) ++(*errors);
  }
  return loss;
}

}  // namespace

CeStepResult CeStep(const FactoredModel& model,
                    const std::vector<CeExample>& batch, double focal_gamma,
                    double l2, bool train_mode, uint64_t dropout_seed,
                    int jobs) {
  const PhonemeInventory& inv = model.inventory();
  struct Partial {
    double loss = 0.0;
    int64_t frames = 0;
    int64_t errors = 0;
    ParamSet grads;
  };
  std::vector<Partial> partial(batch.size());

  ParallelFor(jobs, static_cast<int>(batch.size()), [&](int i) {
    ExampleView view = SliceExample(inv, batch[i]);
    const bool conditioned = model.CenterUsesLeft() || model.RightUsesContexts();
    ForwardCache cache =
        model.Forward(view.features, conditioned ? &view.contexts : nullptr,
                      train_mode, MixSeed(dropout_seed, i));
    HeadGrads dlogits;
    Partial& out = partial[i];
    out.loss += HeadFocal(cache.posteriors.left, view.target_left, focal_gamma,
                          &dlogits.left, &out.errors);
    out.loss += HeadFocal(cache.posteriors.center, view.target_center,
                          focal_gamma, &dlogits.center, &out.errors);
    out.loss += HeadFocal(cache.posteriors.right, view.target_right,
                          focal_gamma, &dlogits.right, &out.errors);
    out.frames = view.features.rows();
    out.grads = model.Backward(cache, dlogits);
  });

  CeStepResult result;
  result.grads = model.params().ZerosLike();
  for (const auto& p : partial) {
    result.data_loss += p.loss;
    result.frames += p.frames;
    result.head_errors += p.errors;
    result.grads.Add(p.grads);
  }
  result.loss = result.data_loss;
  if (l2 > 0) {
    double sq = 0.0;
    for (size_t i = 0; i < model.params().tensors.size(); ++i) {
      const auto& theta = model.params().tensors[i].value;
      sq += theta.squaredNorm();
      result.grads.tensors[i].value += l2 * theta;
    }
    result.loss += 0.5 * l2 * sq;
  }
  return result;
}

FrameAccuracy EvalFrameAccuracy(const FactoredModel& model,
                                const std::vector<CeExample>& examples,
                                int jobs) {
  const PhonemeInventory& inv = model.inventory();
  std::vector<FrameAccuracy> partial(examples.size());
  ParallelFor(jobs, static_cast<int>(examples.size()), [&](int i) {
    ExampleView view = SliceExample(inv, examples[i]);
    const bool conditioned = model.CenterUsesLeft() || model.RightUsesContexts();
    PosteriorBatch post =
        model.Posteriors(view.features, conditioned ? &view.contexts : nullptr);
    FrameAccuracy& acc = partial[i];
    acc.frames = view.features.rows();
    auto count = [](const Eigen::MatrixXd& p, const std::vector<int>& targets,
                    int64_t* errors) {
      for (Eigen::Index t = 0; t < p.rows(); ++t) {
        Eigen::Index argmax;
        p.row(t).maxCoeff(&argmax);
        if (static_cast<int>(argmax) != targets[t]) ++(*errors);
      }
    };
    count(post.left, view.target_left, &acc.errors_left);
    count(post.center, view.target_center, &acc.errors_center);
    count(post.right, view.target_right, &acc.errors_right);
  });
  FrameAccuracy total;
  for (const auto& p : partial) {
    total.frames += p.frames;
    total.errors_left += p.errors_left;
    total.errors_center += p.errors_center;
    total.errors_right += p.errors_right;
  }
  return total;
}

}  // namespace fhkit
