// src/trainer-common.cc

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

#include "trainer-common.h"

#include <algorithm>
#include <numeric>

#include <nlohmann/json.hpp>

namespace fhkit {

double NewbobUpdate(const std::vector<double>& history, double lr,
                    double decay, double lr_min) {
  if (history.empty()) throw DataError("newbob needs at least one epoch");
  if (history.size() == 1) return lr;
  const double latest = history.back();
  double best = history.front();
  for (size_t i = 0; i + 1 < history.size(); ++i)
    best = std::min(best, history[i]);
  if (latest < best) return lr;
  return std::max(lr * decay, lr_min);
}

std::vector<int> HoldoutSplit(int n, double fraction, uint64_t seed,
                              std::vector<int>* train_out) {
  if (fraction < 0 || fraction >= 1) throw DataError("bad holdout fraction");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(MixSeed(seed, 0x5317u));
  std::shuffle(order.begin(), order.end(), rng);
  int held = static_cast<int>(fraction * n);
  if (fraction > 0 && held == 0 && n > 1) held = 1;
  std::vector<int> holdout(order.begin(), order.begin() + held);
  if (train_out) train_out->assign(order.begin() + held, order.end());
  std::sort(holdout.begin(), holdout.end());
  if (train_out) std::sort(train_out->begin(), train_out->end());
  return holdout;
}

void AppendEpochLog(std::ostream* log, const std::string& task,
                    const EpochStats& stats) {
  if (log == nullptr) return;
  nlohmann::json j;
  j["task"] = task;
  j["epoch"] = stats.epoch;
  j["loss"] = stats.loss_per_frame;
  j["log_likelihood_per_frame"] = stats.log_likelihood_per_frame;
  j["holdout_criterion"] = stats.holdout_criterion;
  j["lr"] = stats.lr;
  j["scales"] = {{"am", stats.scales.am},
                 {"prior_left", stats.scales.prior_left},
                 {"prior_center", stats.scales.prior_center},
                 {"prior_right", stats.scales.prior_right}};
  (*log) << j.dump() << "\n";
  log->flush();
}

}  // namespace fhkit
