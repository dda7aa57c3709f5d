// src/wer.h

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

#ifndef FHKIT_WER_H_
#define FHKIT_WER_H_

#include <string>
#include <vector>

namespace fhkit {

struct WerResult {
  int substitutions = 0;
  int deletions = 0;
  int insertions = 0;
  int ref_length = 0;
  bool degenerate = false;  // empty reference with non-empty hypothesis

  int Errors() const { return substitutions + deletions + insertions; }
  double Percent() const {
    return 100.0 * Errors() / std::max(1, ref_length);
  }

  void Accumulate(const WerResult& other) {
    substitutions += other.substitutions;
    deletions += other.deletions;
    insertions += other.insertions;
    ref_length += other.ref_length;
    degenerate = degenerate || other.degenerate;
  }
};

// Unit-cost Levenshtein alignment of hypothesis against reference.
WerResult ScoreWer(const std::vector<std::string>& hyp,
                   const std::vector<std::string>& ref);

}  // namespace fhkit

#endif  // FHKIT_WER_H_
