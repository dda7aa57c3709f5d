// src/align.h

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

#ifndef FHKIT_ALIGN_H_
#define FHKIT_ALIGN_H_

#include <string>
#include <vector>

#include "lattice.h"

namespace fhkit {

struct AlignmentEntry {
  std::string id;
  std::vector<uint32_t> labels;  // packed StateClass per frame
  std::string provenance;        // linear|fs-falign|mono-falign|di-falign|external
};

struct ForcedAlignment {
  std::vector<uint32_t> labels;
  std::vector<int> node_path;
  double score = kLogZero;
};

// Best topology-valid state sequence for the given frame scores (T x nodes).
ForcedAlignment ViterbiAlign(const TrainingGraph& graph,
                             const PhonemeInventory& inv,
                             const Eigen::MatrixXd& frame_scores);

// Frames split as evenly as possible over one canonical path. The canonical
// path visits every node of the graph in order (including optional silence)
// when the frame budget allows, otherwise it falls back to the shortest
// path; remainder frames go to the earlier states.
std::vector<uint32_t> LinearAlign(const TrainingGraph& graph,
                                  const PhonemeInventory& inv, int frames);

struct AlignmentStats {
  int64_t frames = 0;
  double silence_fraction = 0.0;
  double mean_state_duration = 0.0;
  std::vector<int64_t> center_state_histogram;
};

AlignmentStats ComputeAlignmentStats(const std::vector<AlignmentEntry>& entries,
                                     const PhonemeInventory& inv);

// F-align provenance tag for a model: "fs-falign" for full-sum-trained
// models, otherwise "<order>-falign".
std::string ProvenanceForModel(const std::string& trained_with,
                               const std::string& order);

}  // namespace fhkit

#endif  // FHKIT_ALIGN_H_
