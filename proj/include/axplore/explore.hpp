#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "axplore/ia_num.hpp"
#include "axplore/snn.hpp"

// Watcher-driven search for per-weight precision reductions.
//
// Every weight starts at the maximal cut (15 bits). Each round runs the
// interval model over all trains with watchers embedded in the flow, then,
// for every neuron whose output watcher fired, walks that neuron's hidden
// watchers from the last to the first and removes one bit of reduction from
// each weight whose watcher fired. The loop stops when a round fires no
// output watcher (converged) or when no reduction is left.
namespace axplore::explore {

using fixed::CutDepth;
using snn::CutMatrix;

enum class WatcherKind { Hidden, Active };

enum class FlowPoint {
  Term,     // after accumulating w[neuron][input]; attributes to that weight
  Decay,    // after the decay shift; diagnostic only
  Inhibit,  // after lateral inhibition; diagnostic only
  Output,   // neuron output / spike counter
};

struct WatchTarget {
  FlowPoint point = FlowPoint::Term;
  std::size_t neuron = 0;
  std::size_t input = 0;  // meaningful for FlowPoint::Term only
};

class Watcher {
 public:
  Watcher(WatcherKind kind, WatchTarget target, Interval acceptable)
      : kind_(kind), target_(target), acceptable_(acceptable) {}

  // Sets the fired flag when x.eps is not enclosed by the acceptable range.
  // Never clears it.
  void compare_data(const IaNum& x) {
    if (!acceptable_.encloses(x.eps)) {
      fired_ = true;
    }
    if (x.eps.hi() > 0) {
      saw_error_ = true;
    }
  }
  bool watch_fired() const { return fired_; }
  // Whether any observed value carried a nonzero error.
  bool saw_error() const { return saw_error_; }
  void reset() {
    fired_ = false;
    saw_error_ = false;
  }

  WatcherKind kind() const { return kind_; }
  const WatchTarget& target() const { return target_; }
  const Interval& acceptable() const { return acceptable_; }

 private:
  WatcherKind kind_;
  WatchTarget target_;
  Interval acceptable_;
  bool fired_ = false;
  bool saw_error_ = false;
};

// [0, midpoint of error_bounds(k_max)].
Interval acceptable_range(CutDepth k_max);

// Error view of a counter range for the output watcher: zero error for a
// single feasible count, otherwise width * (tau.hi + one grid unit), which
// always falls outside tau.
IaNum counter_error(const snn::CountRange& counter, const Interval& tau);

struct ExploreConfig {
  Interval tau = acceptable_range(CutDepth{fixed::kMaxCut});
  // Per-watcher override of tau.
  std::function<std::optional<Interval>(const WatchTarget&)> tau_override;
  // 0 selects the bound 15 * N * H + 1.
  std::size_t max_rounds = 0;
  snn::IaOptions ia{};
  bool keep_history = false;
};

struct RoundRecord {
  std::size_t round = 0;  // 1-based
  std::size_t neurons_involved = 0;
  double fraction = 0.0;
  std::size_t active_fired = 0;
  std::size_t hidden_fired = 0;
  std::size_t decay_fired = 0;
  std::size_t inhibit_fired = 0;
  std::size_t decrements = 0;
  // Neurons whose output fired without any fired term watcher; their
  // error-carrying terms were decremented instead.
  std::size_t fallback_neurons = 0;
  int min_k = 0;
  int max_k = 0;
  std::array<std::size_t, fixed::kMaxCut + 1> histogram{};
};

enum class Outcome {
  Converged,  // last round fired no output watcher
  Exhausted,  // every entry reached 0
  Stalled,    // output watchers fired but nothing could be decremented
  RoundCap,   // max_rounds reached
};

struct ExplorationReport {
  std::vector<RoundRecord> rounds;
  bool converged = false;
  Outcome outcome = Outcome::Exhausted;
  CutMatrix final_k;
  // k after each round, filled when keep_history is set.
  std::vector<CutMatrix> history;
};

// Watchers of one layer, laid out as the flow visits them. Plugs into the
// simulator as its observer.
class WatchSet {
 public:
  WatchSet(std::size_t n_neurons, std::size_t n_inputs, const ExploreConfig& config);

  void reset();

  void after_term(std::size_t i, std::size_t j, const IaNum& v) { hidden(i, j).compare_data(v); }
  void after_decay(std::size_t i, const IaNum& v) { decay_[i].compare_data(v); }
  void after_fire(std::size_t i, TriBool, const snn::CountRange& counter) {
    active_[i].compare_data(counter_error(counter, active_[i].acceptable()));
  }
  void after_inhibit(std::size_t i, const IaNum& v) { inhibit_[i].compare_data(v); }

  Watcher& hidden(std::size_t i, std::size_t j) { return hidden_[i * n_inputs_ + j]; }
  const Watcher& hidden(std::size_t i, std::size_t j) const { return hidden_[i * n_inputs_ + j]; }
  const Watcher& active(std::size_t i) const { return active_[i]; }
  const Watcher& decay_watcher(std::size_t i) const { return decay_[i]; }
  const Watcher& inhibit_watcher(std::size_t i) const { return inhibit_[i]; }
  std::size_t n_neurons() const { return active_.size(); }
  std::size_t n_inputs() const { return n_inputs_; }

 private:
  std::size_t n_inputs_;
  std::vector<Watcher> hidden_;
  std::vector<Watcher> active_;
  std::vector<Watcher> decay_;
  std::vector<Watcher> inhibit_;
};

// Applies one round of backward analysis to k and fills the decrement
// fields of `record`. Returns true when any output watcher fired.
bool backward_analysis(const WatchSet& watchers, CutMatrix& k, RoundRecord& record);

// Throws Error naming the round when the simulator fails.
ExplorationReport explore(const snn::LayerParams& params, std::span<const snn::SpikeTrain> trains,
                          const ExploreConfig& config = {});

std::string outcome_name(Outcome o);

// One row per round: round,neurons_involved,fraction,active_fired,min_k,max_k
std::string report_csv(const ExplorationReport& report);
std::string report_json(const ExplorationReport& report);

}  // namespace axplore::explore
