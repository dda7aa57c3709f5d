// src/inventory.cc

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

#include "inventory.h"

#include <nlohmann/json.hpp>

namespace fhkit {

using nlohmann::json;

PhonemeInventory::PhonemeInventory(std::vector<std::string> phonemes,
                                   std::string silence, std::string boundary)
    : phonemes_(std::move(phonemes)),
      silence_symbol_(std::move(silence)),
      boundary_symbol_(std::move(boundary)) {
  if (phonemes_.empty()) throw DataError("inventory needs at least one phoneme");
  if (silence_symbol_ == boundary_symbol_)
    throw DataError("silence and boundary symbols must differ");
  for (size_t i = 0; i < phonemes_.size(); ++i) {
    const std::string& p = phonemes_[i];
    if (p.empty()) throw DataError("empty phoneme symbol");
    if (p == silence_symbol_ || p == boundary_symbol_)
      throw DataError("reserved symbol used as phoneme: " + p);
    if (!ordinal_.emplace(p, static_cast<int>(i)).second)
      throw DataError("duplicate phoneme symbol: " + p);
  }
}

int PhonemeInventory::PhonemeOrdinal(const std::string& symbol) const {
  auto it = ordinal_.find(symbol);
  if (it == ordinal_.end()) throw DataError("unknown phoneme: " + symbol);
  return it->second;
}

int PhonemeInventory::ContextLabel(const std::string& symbol) const {
  if (symbol == boundary_symbol_) return BoundaryLabel();
  return PhonemeOrdinal(symbol);
}

const std::string& PhonemeInventory::ContextSymbol(int label) const {
  if (label == BoundaryLabel()) return boundary_symbol_;
  if (label < 0 || label > NumPhonemes())
    throw DataError(StrCat("context label out of range: ", label));
  return phonemes_[label];
}

const std::string& PhonemeInventory::CenterSymbol(int label) const {
  if (label == SilenceLabel()) return silence_symbol_;
  if (label < 0 || label > NumPhonemes())
    throw DataError(StrCat("center label out of range: ", label));
  return phonemes_[label];
}

StateClass PhonemeInventory::SilenceClass() const {
  return StateClass{BoundaryLabel(), SilenceLabel(), 0, BoundaryLabel()};
}

bool PhonemeInventory::IsValid(const StateClass& sc) const {
  const int p = NumPhonemes();
  if (sc.left < 0 || sc.left > p) return false;
  if (sc.right < 0 || sc.right > p) return false;
  if (sc.center < 0 || sc.center > p) return false;
  if (sc.hmm_state < 0 || sc.hmm_state >= 3) return false;
  if (sc.center == SilenceLabel())
    return sc.hmm_state == 0 && sc.left == BoundaryLabel() &&
           sc.right == BoundaryLabel();
  return true;
}

void PhonemeInventory::Check(const StateClass& sc) const {
  if (!IsValid(sc))
    throw DataError(StrCat("invalid state class (", sc.left, ",", sc.center,
                           ",", sc.hmm_state, ",", sc.right, ")"));
}

FactoredIndices PhonemeInventory::ToFactored(const StateClass& sc) const {
  Check(sc);
  FactoredIndices fi;
  fi.left = sc.left;
  fi.right = sc.right;
  fi.center_state = sc.center == SilenceLabel() ? SilenceCenterState()
                                                : 3 * sc.center + sc.hmm_state;
  return fi;
}

StateClass PhonemeInventory::FromFactored(const FactoredIndices& fi) const {
  StateClass sc;
  sc.left = fi.left;
  sc.right = fi.right;
  if (fi.center_state == SilenceCenterState()) {
    sc.center = SilenceLabel();
    sc.hmm_state = 0;
  } else {
    if (fi.center_state < 0 || fi.center_state >= SilenceCenterState())
      throw DataError(StrCat("center state index out of range: ", fi.center_state));
    sc.center = fi.center_state / 3;
    sc.hmm_state = fi.center_state % 3;
  }
  Check(sc);
  return sc;
}

uint32_t PhonemeInventory::Pack(const StateClass& sc) const {
  FactoredIndices fi = ToFactored(sc);
  const uint32_t contexts = static_cast<uint32_t>(ContextCount());
  const uint32_t states = static_cast<uint32_t>(CenterStateCount());
  return (static_cast<uint32_t>(fi.left) * contexts +
          static_cast<uint32_t>(fi.right)) *
             states +
         static_cast<uint32_t>(fi.center_state);
}

StateClass PhonemeInventory::Unpack(uint32_t packed) const {
  const uint32_t contexts = static_cast<uint32_t>(ContextCount());
  const uint32_t states = static_cast<uint32_t>(CenterStateCount());
  FactoredIndices fi;
  fi.center_state = static_cast<int>(packed % states);
  uint32_t rest = packed / states;
  fi.right = static_cast<int>(rest % contexts);
  fi.left = static_cast<int>(rest / contexts);
  if (fi.left >= ContextCount())
    throw DataError(StrCat("packed state class out of range: ", packed));
  return FromFactored(fi);
}

std::string PhonemeInventory::ToJson() const {
  json j;
  j["phonemes"] = phonemes_;
  j["silence"] = silence_symbol_;
  j["boundary"] = boundary_symbol_;
  return j.dump();
}

PhonemeInventory PhonemeInventory::FromJson(const std::string& json_text) {
  json j = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object() || !j.contains("phonemes"))
    throw DataError("malformed inventory JSON");
  std::vector<std::string> phonemes = j.at("phonemes").get<std::vector<std::string>>();
  std::string silence = j.value("silence", std::string("[SIL]"));
  std::string boundary = j.value("boundary", std::string("#"));
  return PhonemeInventory(std::move(phonemes), std::move(silence), std::move(boundary));
}

std::string PhonemeInventory::Hash() const { return HashHex(Fnv1a(ToJson())); }

bool PhonemeInventory::operator==(const PhonemeInventory& other) const {
  return phonemes_ == other.phonemes_ &&
         silence_symbol_ == other.silence_symbol_ &&
         boundary_symbol_ == other.boundary_symbol_;
}

PhonemeInventory BuildInventory(const std::vector<std::string>& symbols,
                                const std::string& silence,
                                const std::string& boundary) {
  return PhonemeInventory(symbols, silence, boundary);
}

}  // namespace fhkit
