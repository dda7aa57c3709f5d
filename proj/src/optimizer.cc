// src/optimizer.cc

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

#include "optimizer.h"

#include <cmath>

namespace fhkit {

void NadamOptimizer::Step(ParamSet& params, const ParamSet& grads, double lr) {
  if (params.tensors.size() != m_.tensors.size() ||
      grads.tensors.size() != m_.tensors.size())
    throw DataError("optimizer state does not match parameter shapes");
  ++step_;
  const double bias1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
  const double bias2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
  for (size_t i = 0; i < params.tensors.size(); ++i) {
    auto& theta = params.tensors[i].value;
    const auto& g = grads.tensors[i].value;
    auto& m = m_.tensors[i].value;
    auto& v = v_.tensors[i].value;
    m = beta1_ * m + (1.0 - beta1_) * g;
    v = beta2_ * v + (1.0 - beta2_) * g.cwiseProduct(g);
    // Nesterov lookahead: blend the bias-corrected moment with the raw
    // gradient before the usual Adam update.
    Eigen::MatrixXd m_hat =
        (beta1_ * m + (1.0 - beta1_) * g) / bias1;
    Eigen::MatrixXd denom =
        (v / bias2).cwiseSqrt().array() + epsilon_;
    theta -= lr * (m_hat.array() / denom.array()).matrix();
  }
}

void NadamOptimizer::Reset() {
  step_ = 0;
  m_.SetZero();
  v_.SetZero();
}

void AddGradientNoise(ParamSet& grads, double variance, Rng& rng) {
  if (variance < 0) throw DataError("negative gradient noise variance");
  if (variance == 0) return;
  const double stddev = std::sqrt(variance);
  std::normal_distribution<double> noise(0.0, stddev);
  for (auto& t : grads.tensors) {
    for (Eigen::Index c = 0; c < t.value.cols(); ++c)
      for (Eigen::Index r = 0; r < t.value.rows(); ++r)
        t.value(r, c) += noise(rng);
  }
}

}  // namespace fhkit
