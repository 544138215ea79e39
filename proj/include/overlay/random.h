// Copyright 2026 The Overlay Authors.
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

#ifndef OVERLAY_RANDOM_H_
#define OVERLAY_RANDOM_H_

#include <cstdint>
#include <random>

namespace overlay {

// SplitMix64 finalizer. Used to derive independent sub-seeds.
uint64_t Mix64(uint64_t x);

// Sub-seed for stream `index` of a run seeded with `seed`: attempt t of the
// rounding loop and shard t of the loss simulator both use
// DeriveSeed(seed, t).
uint64_t DeriveSeed(uint64_t seed, uint64_t index);

// Portable seeded generator. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; the distributions below are written
// out by hand so results do not depend on the standard library vendor.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }

  // Uniform integer in [lo, hi], unbiased (rejection sampling).
  int64_t UniformInt(int64_t lo, int64_t hi);

  // True with probability p. p <= 0 never fires, p >= 1 always fires; one
  // draw is consumed either way so the stream position is data-independent.
  bool Bernoulli(double p) { return Uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace overlay

#endif  // OVERLAY_RANDOM_H_
