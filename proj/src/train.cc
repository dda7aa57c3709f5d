// src/train.cc

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

#include "train.h"

#include <algorithm>
#include <numeric>

#include "ce-train.h"
#include "optimizer.h"

namespace fhkit {

namespace {

std::vector<std::vector<int>> LengthSortedBatches(const Dataset& data,
                                                  const std::vector<int>& indices,
                                                  int batch_size) {
  std::vector<int> order = indices;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (data.utterances[a].features.rows() != data.utterances[b].features.rows())
      return data.utterances[a].features.rows() < data.utterances[b].features.rows();
    return data.utterances[a].id < data.utterances[b].id;
  });
  std::vector<std::vector<int>> batches;
  for (size_t i = 0; i < order.size(); i += batch_size) {
    const size_t end = std::min(order.size(), i + batch_size);
    batches.emplace_back(order.begin() + i, order.begin() + end);
  }
  return batches;
}

}  // namespace

double FullSumEvalLoss(const FactoredModel& model, const Dataset& data,
                       const std::vector<int>& indices,
                       const PriorState& priors, const Scales& scales,
                       int jobs) {
  struct Partial {
    double loss = 0.0;
    int64_t frames = 0;
  };
  std::vector<Partial> partial(indices.size());
  ParallelFor(jobs, static_cast<int>(indices.size()), [&](int i) {
    const Utterance& utt = data.utterances[indices[i]];
    const int T = static_cast<int>(utt.features.rows());
    if (T < MinPathLength(utt.graph)) return;
    PosteriorBatch post = model.Posteriors(utt.features);
    Eigen::MatrixXd emissions = PseudoEmissions(post, priors, scales, utt.graph.core);
    ForwardBackwardResult fb = ForwardBackward(utt.graph.core, emissions);
    Occupancies gamma = MarginalizeOccupancies(utt.graph.core, fb.occupancy,
                                               model.inventory(), fb.log_likelihood);
    partial[i].loss = FullSumLoss(post, gamma, scales.am);
    partial[i].frames = T;
  });
  double loss = 0.0;
  int64_t frames = 0;
  for (const auto& p : partial) {
    loss += p.loss;
    frames += p.frames;
  }
  return frames > 0 ? loss / static_cast<double>(frames) : 0.0;
}

double CrossEntropyEvalFer(const FactoredModel& model, const Dataset& data,
                           const std::vector<int>& indices, int jobs) {
  std::vector<CeExample> examples;
  examples.reserve(indices.size());
  for (int i : indices)
    examples.push_back(
        {&data.utterances[i].features, &data.utterances[i].alignment, 0, -1});
  return EvalFrameAccuracy(model, examples, jobs).FrameErrorRate();
}

std::vector<EpochStats> TrainFullSum(FactoredModel& model, PriorState& priors,
                                     const Dataset& data,
                                     const TrainConfig& cfg, int epochs,
                                     int jobs, std::ostream* log) {
  if (model.CenterUsesLeft() || model.RightUsesContexts())
    throw DataError("full-sum training requires context-independent heads");
  if (data.utterances.empty()) throw DataError("empty training corpus");

  std::vector<int> train_indices;
  std::vector<int> holdout = HoldoutSplit(
      static_cast<int>(data.utterances.size()), cfg.holdout_fraction,
      cfg.seed, &train_indices);
  auto batches = LengthSortedBatches(data, train_indices, cfg.fs.batch_size);

  NadamOptimizer optimizer(model.params(), cfg.optimizer.beta1,
                           cfg.optimizer.beta2, cfg.optimizer.epsilon);
  Rng noise_rng(MixSeed(cfg.seed, 0x6015eu));
  double lr = cfg.fs.lr;
  std::vector<double> criterion_history;
  std::vector<EpochStats> stats;

  for (int epoch = 0; epoch < epochs; ++epoch) {
    const Scales scales = ScaleAtEpoch(cfg.fs.schedule, epoch);
    std::vector<int> batch_order(batches.size());
    std::iota(batch_order.begin(), batch_order.end(), 0);
    Rng shuffle_rng(MixSeed(cfg.seed, epoch, 0xba7c4u));
    std::shuffle(batch_order.begin(), batch_order.end(), shuffle_rng);

    double epoch_loss = 0.0, epoch_ll = 0.0;
    int64_t epoch_frames = 0;
    for (size_t bi = 0; bi < batch_order.size(); ++bi) {
      const std::vector<int>& batch_ids = batches[batch_order[bi]];
      std::vector<FullSumUtterance> batch;
      batch.reserve(batch_ids.size());
      for (int u : batch_ids)
        batch.push_back({&data.utterances[u].features, &data.utterances[u].graph});
      FullSumStepResult step =
          FullSumStep(model, batch, priors, scales, /*train_mode=*/true,
                      MixSeed(cfg.seed, epoch, bi), jobs);
      if (step.frames == 0) continue;
      epoch_loss += step.loss;
      epoch_ll += step.log_likelihood;
      epoch_frames += step.frames;
      step.grads.Scale(1.0 / static_cast<double>(step.frames));
      if (cfg.l2 > 0) step.grads.Add(model.params(), cfg.l2);
      AddGradientNoise(step.grads, cfg.fs.grad_noise, noise_rng);
      optimizer.Step(model.params(), step.grads, lr);
    }

    EpochStats es;
    es.epoch = epoch;
    es.loss_per_frame = epoch_frames ? epoch_loss / epoch_frames : 0.0;
    es.log_likelihood_per_frame = epoch_frames ? epoch_ll / epoch_frames : 0.0;
    es.holdout_criterion =
        holdout.empty() ? es.loss_per_frame
                        : FullSumEvalLoss(model, data, holdout, priors, scales, jobs);
    es.lr = lr;
    es.scales = scales;
    AppendEpochLog(log, "train-fs", es);
    stats.push_back(es);

    criterion_history.push_back(es.holdout_criterion);
    lr = NewbobUpdate(criterion_history, lr, cfg.fs.newbob_decay, cfg.fs.lr_min);
  }
  return stats;
}

std::vector<EpochStats> TrainCrossEntropy(FactoredModel& model,
                                          const Dataset& data,
                                          const TrainConfig& cfg, int epochs,
                                          int jobs, std::ostream* log) {
  if (data.utterances.empty()) throw DataError("empty training corpus");
  for (const auto& utt : data.utterances) {
    if (utt.alignment.size() != static_cast<size_t>(utt.features.rows()))
      throw DataError("utterance without alignment: " + utt.id);
  }

  std::vector<int> train_indices;
  std::vector<int> holdout = HoldoutSplit(
      static_cast<int>(data.utterances.size()), cfg.holdout_fraction,
      cfg.seed, &train_indices);

  struct ChunkRef {
    int utterance;
    Chunk chunk;
  };
  std::vector<ChunkRef> pool;
  for (int u : train_indices) {
    const int frames = static_cast<int>(data.utterances[u].features.rows());
    for (const Chunk& c : ChunkSequence(frames, cfg.chunk, cfg.overlap))
      pool.push_back({u, c});
  }
  if (pool.empty()) throw DataError("no training chunks");

  NadamOptimizer optimizer(model.params(), cfg.optimizer.beta1,
                           cfg.optimizer.beta2, cfg.optimizer.epsilon);
  Rng noise_rng(MixSeed(cfg.seed, 0xce015eu));
  double lr = cfg.ce.lr;
  std::vector<double> criterion_history;
  std::vector<EpochStats> stats;

  for (int epoch = 0; epoch < epochs; ++epoch) {
    std::vector<int> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng(MixSeed(cfg.seed, epoch, 0xcebadu));
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    double epoch_loss = 0.0;
    int64_t epoch_frames = 0;
    size_t batch_index = 0;
    for (size_t pos = 0; pos < order.size(); pos += cfg.ce.batch_size, ++batch_index) {
      const size_t end = std::min(order.size(), pos + cfg.ce.batch_size);
      std::vector<CeExample> batch;
      batch.reserve(end - pos);
      for (size_t k = pos; k < end; ++k) {
        const ChunkRef& ref = pool[order[k]];
        batch.push_back({&data.utterances[ref.utterance].features,
                         &data.utterances[ref.utterance].alignment,
                         ref.chunk.start, ref.chunk.length});
      }
      // Weight decay is applied here rather than inside the step so that the
      // data gradient can be frame averaged first.
      CeStepResult step = CeStep(model, batch, cfg.focal, /*l2=*/0.0,
                                 /*train_mode=*/true,
                                 MixSeed(cfg.seed, epoch, batch_index), jobs);
      if (step.frames == 0) continue;
      epoch_loss += step.data_loss;
      epoch_frames += step.frames;
      step.grads.Scale(1.0 / static_cast<double>(step.frames));
      if (cfg.l2 > 0) step.grads.Add(model.params(), cfg.l2);
      AddGradientNoise(step.grads, cfg.ce.grad_noise, noise_rng);
      optimizer.Step(model.params(), step.grads, lr);
    }

    EpochStats es;
    es.epoch = epoch;
    es.loss_per_frame = epoch_frames ? epoch_loss / epoch_frames : 0.0;
    es.log_likelihood_per_frame = 0.0;
    es.holdout_criterion =
        holdout.empty() ? es.loss_per_frame
                        : CrossEntropyEvalFer(model, data, holdout, jobs);
    es.lr = lr;
    AppendEpochLog(log, "train-ce", es);
    stats.push_back(es);

    criterion_history.push_back(es.holdout_criterion);
    lr = NewbobUpdate(criterion_history, lr, cfg.ce.newbob_decay, cfg.ce.lr_min);
  }
  return stats;
}

}  // namespace fhkit
