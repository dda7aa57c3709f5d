// src/fullsum.h

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

#ifndef FHKIT_FULLSUM_H_
#define FHKIT_FULLSUM_H_

#include "graph.h"
#include "lattice.h"
#include "net.h"
#include "prior.h"

namespace fhkit {

// Per-frame per-node lattice scores: the acoustic-scaled sum of the three
// factored log posteriors minus the scaled log priors of the node's labels.
// Posteriors are floored at kPosteriorFloor before taking logs.
Eigen::MatrixXd PseudoEmissions(const PosteriorBatch& posteriors,
                                const PriorState& priors, const Scales& scales,
                                const StateGraphCore& core);

// Factored occupancies: node occupancies marginalized onto the left
// context, center state and right context label sets.
struct Occupancies {
  Eigen::MatrixXd left;    // T x (|P|+1)
  Eigen::MatrixXd center;  // T x (3|P|+1)
  Eigen::MatrixXd right;   // T x (|P|+1)
  double log_likelihood = kLogZero;
};

Occupancies MarginalizeOccupancies(const StateGraphCore& core,
                                   const Eigen::MatrixXd& node_occupancy,
                                   const PhonemeInventory& inv,
                                   double log_likelihood = kLogZero);

// Full-sum loss with the occupancies held constant (generalized EM):
// -am_scale * sum_t sum_heads sum_labels gamma * log p. Prior terms enter
// the lattice scores only; they are parameter independent.
double FullSumLoss(const PosteriorBatch& posteriors, const Occupancies& gamma,
                   double am_scale);
// d loss / d logits = am_scale * (p - gamma), per head and frame.
HeadGrads FullSumHeadGrads(const PosteriorBatch& posteriors,
                           const Occupancies& gamma, double am_scale);

struct FullSumUtterance {
  const Eigen::MatrixXd* features = nullptr;
  const TrainingGraph* graph = nullptr;
};

struct FullSumStepResult {
  double loss = 0.0;
  double log_likelihood = 0.0;
  int64_t frames = 0;
  int skipped = 0;  // infeasible utterances
  ParamSet grads;
};

// One generalized-EM step over a batch: occupancy estimation with the
// current parameters, gradient accumulation with those occupancies frozen,
// then the online prior update. Gradients and losses are sums over the
// batch. Requires context-independent head wiring.
FullSumStepResult FullSumStep(const FactoredModel& model,
                              const std::vector<FullSumUtterance>& batch,
                              PriorState& priors, const Scales& scales,
                              bool train_mode, uint64_t dropout_seed,
                              int jobs = 1);

}  // namespace fhkit

#endif  // FHKIT_FULLSUM_H_
