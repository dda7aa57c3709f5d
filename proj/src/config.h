// src/config.h

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

#ifndef FHKIT_CONFIG_H_
#define FHKIT_CONFIG_H_

#include <string>
#include <vector>

#include "prior.h"

namespace fhkit {

// Training hyperparameters. Every knob has a named JSON key; the defaults
// are the published values the experiments in this codebase standardize on.
struct TrainConfig {
  struct CeSection {
    double lr = 1e-3;
    double newbob_decay = 0.9;
    double lr_min = 2e-5;
    double grad_noise = 0.1;
    int batch_size = 16;
  } ce;

  struct FsSection {
    double lr = 5e-4;
    double newbob_decay = 0.894427;  // sqrt(0.8)
    double lr_min = 1e-6;
    double grad_noise = 0.3;
    int batch_size = 8;
    double prior_decay = 0.001;
    ScaleSchedule schedule;
  } fs;

  double l2 = 0.01;
  double focal = 2.0;
  int chunk = 128;
  double overlap = 0.5;
  double dropout = 0.1;
  double holdout_fraction = 0.05;

  struct OptimizerSection {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
  } optimizer;

  struct EncoderSection {
    int context_window = 4;
    std::vector<int> hidden = {256, 256};
    std::string nonlinearity = "relu";
  } encoder;

  struct TopologySection {
    double loop_prob = 0.5;
    double silence_loop_prob = 0.5;
    bool optional_silence = true;
  } topology;

  struct DecodeSection {
    double beta_left = 0.3;
    double beta_center = 0.7;
    double beta_right = 0.4;
    double lm_scale = 1.0;
  } decode;

  uint64_t seed = 1;

  std::string ToJson(int indent = -1) const;
  static TrainConfig FromJson(const std::string& json_text);
  static TrainConfig Load(const std::string& path);  // defaults when empty
  std::string Hash() const;

  Topology MakeTopology() const {
    return Topology::FromProbs(topology.loop_prob, topology.silence_loop_prob,
                               topology.optional_silence);
  }
  EncoderConfig MakeEncoderConfig(int input_dim) const {
    EncoderConfig cfg;
    cfg.input_dim = input_dim;
    cfg.context_window = encoder.context_window;
    cfg.hidden = encoder.hidden;
    cfg.nonlinearity = encoder.nonlinearity;
    cfg.dropout = dropout;
    return cfg;
  }
};

}  // namespace fhkit

#endif  // FHKIT_CONFIG_H_
