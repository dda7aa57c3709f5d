// src/ce-train.h

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

#ifndef FHKIT_CE_TRAIN_H_
#define FHKIT_CE_TRAIN_H_

#include <vector>

#include "net.h"

namespace fhkit {

struct Chunk {
  int start = 0;
  int length = 0;
};

// Fixed-length overlapping chunks with stride length*(1-overlap); the last
// chunk is truncated at the sequence end and generation stops once the end
// is reached. Every frame is covered at least once.
std::vector<Chunk> ChunkSequence(int frames, int length, double overlap);

// Focal cross entropy -(1-p)^gamma * log p and its logit-gradient
// coefficient: dL/dz_j = coef * (onehot_j - p_j).
double FocalLossTerm(double p_target, double gamma);
double FocalLogitCoefficient(double p_target, double gamma);

// A (possibly chunked) view into an aligned utterance.
struct CeExample {
  const Eigen::MatrixXd* features = nullptr;
  const std::vector<uint32_t>* labels = nullptr;  // packed state classes
  int start = 0;
  int length = -1;  // -1: to the end
};

struct CeStepResult {
  double loss = 0.0;       // focal data term plus L2
  double data_loss = 0.0;  // focal term alone
  int64_t frames = 0;
  int64_t head_errors = 0;  // argmax mismatches summed over the three heads
  ParamSet grads;
};

// Frame-wise focal cross entropy on all three heads with teacher-forced
// context inputs from the alignment. Losses and gradients are sums over
// the batch; the L2 term enters once per step.
CeStepResult CeStep(const FactoredModel& model,
                    const std::vector<CeExample>& batch, double focal_gamma,
                    double l2, bool train_mode, uint64_t dropout_seed,
                    int jobs = 1);

struct FrameAccuracy {
  int64_t frames = 0;
  int64_t errors_left = 0;
  int64_t errors_center = 0;
  int64_t errors_right = 0;

  double FrameErrorRate() const {
    return frames == 0 ? 0.0
                       : static_cast<double>(errors_left + errors_center +
                                             errors_right) /
                             static_cast<double>(3 * frames);
  }
  double CenterAccuracy() const {
    return frames == 0 ? 0.0
                       : 1.0 - static_cast<double>(errors_center) /
                                   static_cast<double>(frames);
  }
};

// Evaluation-mode argmax accuracy against the alignment labels.
FrameAccuracy EvalFrameAccuracy(const FactoredModel& model,
                                const std::vector<CeExample>& examples,
                                int jobs = 1);

}  // namespace fhkit

#endif  // FHKIT_CE_TRAIN_H_
