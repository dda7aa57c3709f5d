// src/inventory.h

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

#ifndef FHKIT_INVENTORY_H_
#define FHKIT_INVENTORY_H_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "util.h"

namespace fhkit {

// Unclustered context-dependent state identity. Contexts and the center
// phoneme are stored as dense label ids relative to a PhonemeInventory:
//   left/right: phoneme ordinal, or |P| for the word/utterance boundary.
//   center:     phoneme ordinal, or |P| for the single-state silence entity.
// Silence is context independent: center == silence forces hmm_state == 0
// and boundary contexts on both sides.
struct StateClass {
  int left = 0;
  int center = 0;
  int hmm_state = 0;
  int right = 0;

  bool operator==(const StateClass& other) const = default;
};

// Per-head output indices of a state class: left/right context heads run
// over |P|+1 labels (phonemes + boundary), the center head over 3|P|+1
// states (three HMM states per phoneme + silence).
struct FactoredIndices {
  int left = 0;
  int center_state = 0;
  int right = 0;

  bool operator==(const FactoredIndices& other) const = default;
};

class PhonemeInventory {
 public:
  PhonemeInventory() = default;
  PhonemeInventory(std::vector<std::string> phonemes, std::string silence,
                   std::string boundary);

  int NumPhonemes() const { return static_cast<int>(phonemes_.size()); }
  // Left/right context heads: phonemes plus the boundary label.
  int ContextCount() const { return NumPhonemes() + 1; }
  // Center head: three HMM states per phoneme plus single-state silence.
  int CenterStateCount() const { return 3 * NumPhonemes() + 1; }
  // Diagnostic count of phoneme-context triphone states.
  int64_t TriphoneClassCount() const {
    int64_t p = NumPhonemes();
    return 3 * p * p * p;
  }

  int BoundaryLabel() const { return NumPhonemes(); }
  int SilenceLabel() const { return NumPhonemes(); }
  int SilenceCenterState() const { return 3 * NumPhonemes(); }

  const std::vector<std::string>& phonemes() const { return phonemes_; }
  const std::string& silence_symbol() const { return silence_symbol_; }
  const std::string& boundary_symbol() const { return boundary_symbol_; }

  int PhonemeOrdinal(const std::string& symbol) const;  // throws on unknown
  // Context label id for a symbol: phoneme ordinal or boundary.
  int ContextLabel(const std::string& symbol) const;
  const std::string& ContextSymbol(int label) const;
  const std::string& CenterSymbol(int label) const;

  StateClass SilenceClass() const;
  bool IsValid(const StateClass& sc) const;
  void Check(const StateClass& sc) const;  // throws DataError when invalid

  FactoredIndices ToFactored(const StateClass& sc) const;
  StateClass FromFactored(const FactoredIndices& fi) const;

  // Dense packing of a StateClass into a u32, used by alignment caches.
  uint32_t Pack(const StateClass& sc) const;
  StateClass Unpack(uint32_t packed) const;

  std::string ToJson() const;
  static PhonemeInventory FromJson(const std::string& json_text);
  // Fingerprint of the canonical JSON form; embedded into checkpoints and
  // alignment caches for consistency checks.
  std::string Hash() const;

  bool operator==(const PhonemeInventory& other) const;

 private:
  std::vector<std::string> phonemes_;
  std::string silence_symbol_ = "[SIL]";
  std::string boundary_symbol_ = "#";
  std::unordered_map<std::string, int> ordinal_;
};

PhonemeInventory BuildInventory(const std::vector<std::string>& symbols,
                                const std::string& silence = "[SIL]",
                                const std::string& boundary = "#");

}  // namespace fhkit

#endif  // FHKIT_INVENTORY_H_
