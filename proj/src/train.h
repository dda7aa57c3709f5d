// src/train.h

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

#ifndef FHKIT_TRAIN_H_
#define FHKIT_TRAIN_H_

#include "config.h"
#include "dataset.h"
#include "fullsum.h"
#include "trainer-common.h"

namespace fhkit {

// Flat-start full-sum training: whole utterances batched by similar length,
// scale/prior schedules per epoch, Newbob on the held-out full-sum score.
std::vector<EpochStats> TrainFullSum(FactoredModel& model, PriorState& priors,
                                     const Dataset& data,
                                     const TrainConfig& cfg, int epochs,
                                     int jobs, std::ostream* log);

// Frame-wise focal CE training from fixed alignments, with chunking,
// gradient noise and Newbob on the held-out frame error rate. Alignments
// must be attached to every utterance.
std::vector<EpochStats> TrainCrossEntropy(FactoredModel& model,
                                          const Dataset& data,
                                          const TrainConfig& cfg, int epochs,
                                          int jobs, std::ostream* log);

// Held-out criteria, exposed for tests.
double FullSumEvalLoss(const FactoredModel& model, const Dataset& data,
                       const std::vector<int>& indices,
                       const PriorState& priors, const Scales& scales,
                       int jobs);
double CrossEntropyEvalFer(const FactoredModel& model, const Dataset& data,
                           const std::vector<int>& indices, int jobs);

}  // namespace fhkit

#endif  // FHKIT_TRAIN_H_
