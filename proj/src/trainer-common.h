// src/trainer-common.h

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

#ifndef FHKIT_TRAINER_COMMON_H_
#define FHKIT_TRAINER_COMMON_H_

#include <ostream>
#include <vector>

#include "prior.h"
#include "util.h"

namespace fhkit {

// Newbob: decay the learning rate whenever the latest criterion value
// (lower is better) fails to improve on the best seen so far.
double NewbobUpdate(const std::vector<double>& history, double lr,
                    double decay, double lr_min);

// Seeded fixed split; returns held-out indices, the rest go to train_out.
// At least one utterance is held out when fraction > 0 and n > 1.
std::vector<int> HoldoutSplit(int n, double fraction, uint64_t seed,
                              std::vector<int>* train_out);

struct EpochStats {
  int epoch = 0;
  double loss_per_frame = 0.0;
  double log_likelihood_per_frame = 0.0;
  double holdout_criterion = 0.0;
  double lr = 0.0;
  Scales scales;
};

void AppendEpochLog(std::ostream* log, const std::string& task,
                    const EpochStats& stats);

}  // namespace fhkit

#endif  // FHKIT_TRAINER_COMMON_H_
