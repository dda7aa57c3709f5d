// src/dataset.h

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

#ifndef FHKIT_DATASET_H_
#define FHKIT_DATASET_H_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "graph.h"

namespace fhkit {

struct Utterance {
  std::string id;
  Eigen::MatrixXd features;  // T x D
  TrainingGraph graph;
  std::vector<std::string> transcript;
  std::vector<uint32_t> alignment;  // packed state classes; empty when unset
};

struct Dataset {
  PhonemeInventory inventory;
  Lexicon lexicon;
  Topology topology = Topology::Default();
  std::vector<Utterance> utterances;

  int64_t TotalFrames() const {
    int64_t n = 0;
    for (const auto& u : utterances) n += u.features.rows();
    return n;
  }
};

}  // namespace fhkit

#endif  // FHKIT_DATASET_H_
