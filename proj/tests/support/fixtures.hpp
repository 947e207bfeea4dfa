#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include <unistd.h>

#include "axplore/encode.hpp"
#include "axplore/model_io.hpp"
#include "axplore/snn.hpp"

namespace axplore::testing {

inline std::filesystem::path data_path(const std::filesystem::path& rel) {
  return std::filesystem::path(AXPLORE_TEST_DATA) / rel;
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("axplore_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

inline snn::LayerParams random_network(std::mt19937_64& rng, std::size_t max_neurons = 8, std::size_t max_inputs = 16) {
  auto pick = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };
  snn::LayerParams p;
  p.n_neurons = static_cast<std::size_t>(pick(1, static_cast<std::int64_t>(max_neurons)));
  p.n_inputs = static_cast<std::size_t>(pick(1, static_cast<std::int64_t>(max_inputs)));
  const std::int64_t one = fixed::kOne;
  for (std::size_t n = 0; n < p.n_neurons * p.n_inputs; ++n) {
    p.weights.push_back(fixed::FixQ16x16::from_raw(static_cast<std::int32_t>(pick(-one / 4, one))));
  }
  p.v_thresh = fixed::FixQ16x16::from_raw(static_cast<std::int32_t>(pick(one / 2, 3 * one)));
  p.v_reset = fixed::FixQ16x16::from_raw(static_cast<std::int32_t>(pick(-one / 4, one / 4)));
  p.exp_decay = static_cast<int>(pick(1, 3));
  p.w_inh = fixed::FixQ16x16::from_raw(static_cast<std::int32_t>(rng() % 2 ? pick(0, one / 2) : 0));
  p.validate();
  return p;
}

inline snn::SpikeTrain random_train(std::mt19937_64& rng, std::size_t steps, std::size_t width, double p = 0.3) {
  snn::SpikeTrain t(steps, width);
  std::bernoulli_distribution on(p);
  for (std::size_t s = 0; s < steps; ++s) {
    // Leave some all-zero steps so decay is exercised.
    if (rng() % 5 == 0) {
      continue;
    }
    for (std::size_t j = 0; j < width; ++j) {
      t.set(s, j, on(rng));
    }
  }
  return t;
}

inline snn::CutMatrix random_cuts(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int max_k = 15) {
  snn::CutMatrix k(rows, cols);
  std::uniform_int_distribution<int> d(0, max_k);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      k.at(i, j) = fixed::CutDepth{d(rng)};
    }
  }
  return k;
}

inline std::vector<snn::SpikeTrain> load_fixture_trains(const std::filesystem::path& dir, std::size_t count) {
  std::vector<snn::SpikeTrain> out;
  for (std::size_t i = 0; i < count; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "image_%05zu.spkt", i);
    out.push_back(encode::read_cache(dir / name));
  }
  return out;
}

// One neuron, one always-active input with all fractional bits set. The
// threshold sits one grid unit under w - error_bounds(k_star).hi, so the
// decision is certain exactly when k <= k_star.
struct SingleNeuronFixture {
  snn::LayerParams params;
  snn::SpikeTrain train;
  Interval hidden_tau;
};

inline SingleNeuronFixture single_neuron_fixture(int k_star) {
  SingleNeuronFixture f;
  f.params.n_inputs = 1;
  f.params.n_neurons = 1;
  const auto w = fixed::FixQ16x16::from_raw(0x0001FFFF);
  f.params.weights = {w};
  const auto eb = fixed::error_bounds(fixed::CutDepth{k_star});
  f.params.v_thresh = fixed::FixQ16x16::from_raw(static_cast<std::int32_t>(w.raw() - eb.hi() - 1));
  f.params.v_reset = fixed::FixQ16x16{};
  f.params.exp_decay = 1;
  f.train = snn::SpikeTrain(1, 1);
  f.train.set(0, 0);
  f.hidden_tau = eb;
  return f;
}

// Two neurons whose argmax flips when every weight loses 15 bits: at full
// precision neuron 1 (w = 1.99) outfires neuron 0 (w = 1.5); truncated both
// weights are 1.5 and the tie resolves to neuron 0.
inline snn::LayerParams argmax_flip_network() {
  snn::LayerParams p;
  p.n_inputs = 1;
  p.n_neurons = 2;
  p.weights = {fixed::quantize(1.5), fixed::quantize(1.99)};
  p.v_thresh = fixed::quantize(3.5);
  p.v_reset = fixed::FixQ16x16{};
  p.exp_decay = 1;
  return p;
}

inline snn::SpikeTrain always_on(std::size_t steps, std::size_t width) {
  snn::SpikeTrain t(steps, width);
  for (std::size_t s = 0; s < steps; ++s) {
    for (std::size_t j = 0; j < width; ++j) {
      t.set(s, j);
    }
  }
  return t;
}

// Decay operator with the error upper bound rounded inward. Unsound.
inline IaNum floor_eps_shr(const IaNum& a, int s) {
  return {Interval::from_raw(a.v.lo() >> s, a.v.hi() >> s), Interval::from_raw(a.eps.lo() >> s, a.eps.hi() >> s)};
}

// One neuron fed by an exact odd weight (raw 3) and a weight of raw 1 cut by
// one bit, over spikes / silence / spikes. Truncating the second weight makes
// the potential odd before the decay, which the floored error bound misses;
// the mutant then claims a certain spike the truncated network never emits.
struct MutationFixture {
  snn::LayerParams params;
  snn::CutMatrix k_best;
  snn::SpikeTrain train;
};

inline MutationFixture mutation_fixture() {
  MutationFixture f;
  f.params.n_inputs = 2;
  f.params.n_neurons = 1;
  f.params.weights = {fixed::FixQ16x16::from_raw(3), fixed::FixQ16x16::from_raw(1)};
  f.params.v_thresh = fixed::FixQ16x16::from_raw(4);
  f.params.v_reset = fixed::FixQ16x16{};
  f.params.exp_decay = 1;
  f.k_best = snn::CutMatrix(1, 2);
  f.k_best.at(0, 1) = fixed::CutDepth{1};
  f.train = snn::SpikeTrain(3, 2);
  f.train.set(0, 0);
  f.train.set(0, 1);
  f.train.set(2, 0);
  f.train.set(2, 1);
  return f;
}

}  // namespace axplore::testing
