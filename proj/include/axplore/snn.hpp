#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "axplore/fixed_point.hpp"
#include "axplore/ia_num.hpp"

// Single-layer spiking network flow: excite, decay, fire/reset, inhibit,
// count. The flow is written once over a scalar semantics so that the
// fixed-point simulator and the interval simulator cannot drift apart.
namespace axplore::snn {

using fixed::CutDepth;
using fixed::FixQ16x16;

struct LayerParams {
  std::size_t n_inputs = 0;
  std::size_t n_neurons = 0;
  std::vector<FixQ16x16> weights;  // n_neurons x n_inputs, row-major
  FixQ16x16 v_thresh;
  FixQ16x16 v_reset;
  int exp_decay = 1;
  FixQ16x16 w_inh;  // lateral inhibition per peer spike; zero disables it

  FixQ16x16 weight(std::size_t neuron, std::size_t input) const {
    return weights[neuron * n_inputs + input];
  }
  // Throws ShapeError / ConfigError on broken invariants.
  void validate() const;
};

// One timestep of input spikes, one byte (0 or 1) per input.
using SpikeVector = std::span<const std::uint8_t>;

class SpikeTrain {
 public:
  SpikeTrain() = default;
  SpikeTrain(std::size_t steps, std::size_t width) : steps_(steps), width_(width), bits_(steps * width, 0) {}

  std::size_t steps() const { return steps_; }
  std::size_t width() const { return width_; }
  SpikeVector row(std::size_t t) const { return {bits_.data() + t * width_, width_}; }
  bool get(std::size_t t, std::size_t j) const { return bits_[t * width_ + j] != 0; }
  void set(std::size_t t, std::size_t j, bool on = true) { bits_[t * width_ + j] = on ? 1 : 0; }
  void push_back(SpikeVector spikes);
  std::size_t total_spikes() const;

  friend bool operator==(const SpikeTrain&, const SpikeTrain&) = default;

 private:
  std::size_t steps_ = 0;
  std::size_t width_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Integer range of feasible spike counts.
struct CountRange {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;

  bool contains(std::uint32_t c) const { return lo <= c && c <= hi; }
  bool is_degenerate() const { return lo == hi; }
  friend bool operator==(const CountRange&, const CountRange&) = default;
};

// Plain fixed-point semantics over (possibly already truncated) parameters.
class ExactSemantics {
 public:
  using Scalar = FixQ16x16;
  using Decision = bool;
  using Counter = std::uint32_t;

  explicit ExactSemantics(const LayerParams& params);

  const LayerParams& params() const { return *params_; }
  Scalar zero() const { return FixQ16x16{}; }
  Scalar weight(std::size_t i, std::size_t j) const { return params_->weight(i, j); }
  Scalar accumulate(Scalar v, Scalar w) const { return v + w; }
  Scalar decay(Scalar v) const { return v >> params_->exp_decay; }
  Decision decide(Scalar v) const { return v > params_->v_thresh; }
  void fire(Scalar& v, Counter& counter, Decision d) const;
  Scalar inhibit(Scalar v, std::uint32_t peers_lo, std::uint32_t peers_hi) const;

  static bool surely_fired(Decision d) { return d; }
  static bool maybe_fired(Decision d) { return d; }

 private:
  const LayerParams* params_;
};

using ShiftOp = IaNum (*)(const IaNum&, int);

struct IaOptions {
  CutDepth thresh_cut{};
  CutDepth reset_cut{};
  // Decay operator; replaced only by mutation tests.
  ShiftOp shift = &shr;
};

// Row-major n_neurons x n_inputs matrix of cut depths.
class CutMatrix {
 public:
  CutMatrix() = default;
  CutMatrix(std::size_t rows, std::size_t cols, CutDepth fill = CutDepth{})
      : rows_(rows), cols_(cols), k_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  CutDepth at(std::size_t i, std::size_t j) const { return k_[i * cols_ + j]; }
  CutDepth& at(std::size_t i, std::size_t j) { return k_[i * cols_ + j]; }
  std::span<const CutDepth> values() const { return k_; }
  int min_bits() const;
  int max_bits() const;
  bool all_zero() const { return max_bits() == 0; }

  friend bool operator==(const CutMatrix&, const CutMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<CutDepth> k_;
};

// Interval semantics: each weight w is the IA number {[w,w], error_bounds(k)}.
class IaSemantics {
 public:
  using Scalar = IaNum;
  using Decision = TriBool;
  using Counter = CountRange;

  IaSemantics(const LayerParams& params, const CutMatrix& cuts, IaOptions options = {});

  const LayerParams& params() const { return *params_; }
  Scalar zero() const { return from_exact(FixQ16x16{}); }
  const Scalar& weight(std::size_t i, std::size_t j) const { return weights_[i * params_->n_inputs + j]; }
  Scalar accumulate(const Scalar& v, const Scalar& w) const { return add(v, w); }
  Scalar decay(const Scalar& v) const { return options_.shift(v, params_->exp_decay); }
  Decision decide(const Scalar& v) const { return cmp_gt(v, thresh_); }
  void fire(Scalar& v, Counter& counter, Decision d) const;
  Scalar inhibit(const Scalar& v, std::uint32_t peers_lo, std::uint32_t peers_hi) const;

  static bool surely_fired(Decision d) { return d == TriBool::DefinitelyTrue; }
  static bool maybe_fired(Decision d) { return d != TriBool::DefinitelyFalse; }

 private:
  const LayerParams* params_;
  IaOptions options_;
  std::vector<IaNum> weights_;
  IaNum thresh_;
  IaNum reset_;
  IaNum inh_;
};

template <class S>
struct NeuronState {
  typename S::Scalar v;
  typename S::Counter counter{};
};

// Hooks at every watch point of the flow. The default does nothing.
struct NullObserver {
  template <class Scalar>
  void after_term(std::size_t, std::size_t, const Scalar&) {}
  template <class Scalar>
  void after_decay(std::size_t, const Scalar&) {}
  template <class Decision, class Counter>
  void after_fire(std::size_t, Decision, const Counter&) {}
  template <class Scalar>
  void after_inhibit(std::size_t, const Scalar&) {}
};

inline bool all_zero(SpikeVector spikes) {
  for (auto s : spikes) {
    if (s != 0) {
      return false;
    }
  }
  return true;
}

// v += sum of w[i][j] over inputs j that spiked.
template <class S, class Obs = NullObserver>
void excite(NeuronState<S>& state, const S& sem, SpikeVector spikes, std::size_t i, Obs& obs) {
  for (std::size_t j = 0; j < spikes.size(); ++j) {
    if (spikes[j] != 0) {
      state.v = sem.accumulate(state.v, sem.weight(i, j));
      obs.after_term(i, j, state.v);
    }
  }
}

template <class S, class Obs = NullObserver>
void decay(NeuronState<S>& state, const S& sem, std::size_t i, Obs& obs) {
  state.v = sem.decay(state.v);
  obs.after_decay(i, state.v);
}

template <class S, class Obs = NullObserver>
typename S::Decision fire_and_reset(NeuronState<S>& state, const S& sem, std::size_t i, Obs& obs) {
  const auto d = sem.decide(state.v);
  sem.fire(state.v, state.counter, d);
  obs.after_fire(i, d, state.counter);
  return d;
}

// Applies lateral inhibition after all fire decisions of a step; a neuron's
// own spike never inhibits itself.
template <class S, class Obs = NullObserver>
void inhibit(std::span<NeuronState<S>> states, const S& sem, const std::vector<typename S::Decision>& fired,
             Obs& obs) {
  std::uint32_t sure = 0;
  std::uint32_t maybe = 0;
  for (const auto& d : fired) {
    sure += S::surely_fired(d) ? 1 : 0;
    maybe += S::maybe_fired(d) ? 1 : 0;
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::uint32_t lo = sure - (S::surely_fired(fired[i]) ? 1 : 0);
    const std::uint32_t hi = maybe - (S::maybe_fired(fired[i]) ? 1 : 0);
    if (hi > 0) {
      states[i].v = sem.inhibit(states[i].v, lo, hi);
    }
    obs.after_inhibit(i, states[i].v);
  }
}

template <class S, class Obs = NullObserver>
class Layer {
 public:
  using Decision = typename S::Decision;
  using Counter = typename S::Counter;

  explicit Layer(const S& sem, Obs& obs) : sem_(&sem), obs_(&obs) { reset(); }

  void reset() {
    states_.assign(sem_->params().n_neurons, NeuronState<S>{sem_->zero(), Counter{}});
    fired_.assign(states_.size(), Decision{});
  }

  // One timestep: excite or decay, fire/reset, then inhibition across the
  // layer using the decisions of this step.
  const std::vector<Decision>& step(SpikeVector spikes) {
    if (spikes.size() != sem_->params().n_inputs) {
      throw ShapeError("spike vector width does not match n_inputs");
    }
    const bool quiet = all_zero(spikes);
    for (std::size_t i = 0; i < states_.size(); ++i) {
      if (quiet) {
        decay(states_[i], *sem_, i, *obs_);
      } else {
        excite(states_[i], *sem_, spikes, i, *obs_);
      }
      fired_[i] = fire_and_reset(states_[i], *sem_, i, *obs_);
    }
    inhibit<S, Obs>(states_, *sem_, fired_, *obs_);
    return fired_;
  }

  std::span<const NeuronState<S>> states() const { return states_; }

  std::vector<Counter> counters() const {
    std::vector<Counter> out;
    out.reserve(states_.size());
    for (const auto& s : states_) {
      out.push_back(s.counter);
    }
    return out;
  }

 private:
  const S* sem_;
  Obs* obs_;
  std::vector<NeuronState<S>> states_;
  std::vector<Decision> fired_;
};

// Folds step over the whole train from a zero state.
template <class S, class Obs>
std::vector<typename S::Counter> run(const S& sem, const SpikeTrain& train, Obs& obs) {
  if (train.steps() > 0 && train.width() != sem.params().n_inputs) {
    throw ShapeError("spike train width " + std::to_string(train.width()) + " does not match n_inputs " +
                     std::to_string(sem.params().n_inputs));
  }
  Layer<S, Obs> layer(sem, obs);
  for (std::size_t t = 0; t < train.steps(); ++t) {
    layer.step(train.row(t));
  }
  return layer.counters();
}

template <class S>
std::vector<typename S::Counter> run(const S& sem, const SpikeTrain& train) {
  NullObserver obs;
  return run(sem, train, obs);
}

std::vector<std::uint32_t> run_exact(const LayerParams& params, const SpikeTrain& train);
std::vector<CountRange> run_ia(const LayerParams& params, const CutMatrix& cuts, const SpikeTrain& train,
                               IaOptions options = {});

// Copy of params with every weight truncated by its cut depth and the
// threshold/reset truncated by the given depths.
LayerParams truncated(const LayerParams& params, const CutMatrix& cuts, CutDepth thresh_cut = {},
                      CutDepth reset_cut = {});

}  // namespace axplore::snn
