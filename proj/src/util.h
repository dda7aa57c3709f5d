// src/util.h

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

#ifndef FHKIT_UTIL_H_
#define FHKIT_UTIL_H_

#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fhkit {

// Exit-code contract of the command line tools: usage errors map to 1,
// data/format errors to 2, numerical failures to 3.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

constexpr double kLogZero = -std::numeric_limits<double>::infinity();

inline double LogAdd(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

double LogSumExp(const std::vector<double>& values);

// FNV-1a, used for inventory/config fingerprints embedded in file headers.
uint64_t Fnv1a(const void* data, size_t size);
uint64_t Fnv1a(const std::string& s);
std::string HashHex(uint64_t h);

// splitmix64 step; combines seed material into per-task RNG streams.
uint64_t MixSeed(uint64_t a, uint64_t b, uint64_t c = 0, uint64_t d = 0);

using Rng = std::mt19937_64;

template <typename... Args>
std::string StrCat(Args&&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

void LogMessage(const std::string& tag, const std::string& msg);

#define FHKIT_LOG(msg) ::fhkit::LogMessage("INFO", ::fhkit::StrCat msg)
#define FHKIT_WARN(msg) ::fhkit::LogMessage("WARNING", ::fhkit::StrCat msg)

// Deterministic parallel map; f(i) for i in [0, n). Exceptions from workers
// are captured and the first one rethrown on the calling thread.
void ParallelFor(int num_jobs, int n, const std::function<void(int)>& f);

}  // namespace fhkit

#endif  // FHKIT_UTIL_H_
