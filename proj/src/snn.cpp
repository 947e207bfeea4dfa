#include "axplore/snn.hpp"

#include <algorithm>
#include <string>

namespace axplore::snn {

void LayerParams::validate() const {
  if (n_inputs == 0 || n_neurons == 0) {
    throw ShapeError("layer needs at least one input and one neuron");
  }
  if (weights.size() != n_inputs * n_neurons) {
    throw ShapeError("weights hold " + std::to_string(weights.size()) + " entries, expected " +
                     std::to_string(n_inputs * n_neurons));
  }
  if (exp_decay < 1 || exp_decay > 31) {
    throw ConfigError("exp_decay must be in [1, 31]");
  }
  if (!(v_reset < v_thresh)) {
    throw ConfigError("v_reset must be below v_thresh");
  }
}

void SpikeTrain::push_back(SpikeVector spikes) {
  if (steps_ == 0 && bits_.empty()) {
    width_ = spikes.size();
  }
  if (spikes.size() != width_) {
    throw ShapeError("spike vector width mismatch");
  }
  for (auto s : spikes) {
    bits_.push_back(s != 0 ? 1 : 0);
  }
  ++steps_;
}

std::size_t SpikeTrain::total_spikes() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

int CutMatrix::min_bits() const {
  int m = fixed::kMaxCut;
  for (auto k : k_) {
    m = std::min(m, k.bits());
  }
  return k_.empty() ? 0 : m;
}

int CutMatrix::max_bits() const {
  int m = 0;
  for (auto k : k_) {
    m = std::max(m, k.bits());
  }
  return m;
}

ExactSemantics::ExactSemantics(const LayerParams& params) : params_(&params) {}

void ExactSemantics::fire(Scalar& v, Counter& counter, Decision d) const {
  if (d) {
    v = params_->v_reset;
    ++counter;
  }
}

ExactSemantics::Scalar ExactSemantics::inhibit(Scalar v, std::uint32_t peers_lo, std::uint32_t) const {
  const std::int64_t amount = std::int64_t{params_->w_inh.raw()} * peers_lo;
  return FixQ16x16::from_raw_checked(std::int64_t{v.raw()} - amount);
}

IaSemantics::IaSemantics(const LayerParams& params, const CutMatrix& cuts, IaOptions options)
    : params_(&params),
      options_(options),
      thresh_(from_param(params.v_thresh, options.thresh_cut)),
      reset_(from_param(params.v_reset, options.reset_cut)),
      inh_(from_exact(params.w_inh)) {
  if (cuts.rows() != params.n_neurons || cuts.cols() != params.n_inputs) {
    throw ShapeError("cut matrix shape does not match the layer");
  }
  weights_.reserve(params.weights.size());
  for (std::size_t i = 0; i < params.n_neurons; ++i) {
    for (std::size_t j = 0; j < params.n_inputs; ++j) {
      weights_.push_back(from_param(params.weight(i, j), cuts.at(i, j)));
    }
  }
}

void IaSemantics::fire(Scalar& v, Counter& counter, Decision d) const {
  switch (d) {
    case TriBool::DefinitelyTrue:
      v = reset_;
      ++counter.lo;
      ++counter.hi;
      break;
    case TriBool::DefinitelyFalse:
      break;
    case TriBool::Uncertain:
      // Join of the fired and the quiet branch.
      v = hull(reset_, v);
      ++counter.hi;
      break;
  }
}

IaSemantics::Scalar IaSemantics::inhibit(const Scalar& v, std::uint32_t peers_lo, std::uint32_t peers_hi) const {
  const IaNum peers{Interval::from_raw(std::int64_t{peers_lo} << fixed::kFracBits,
                                       std::int64_t{peers_hi} << fixed::kFracBits),
                    Interval::point_raw(0)};
  return sub(v, mul(inh_, peers));
}

std::vector<std::uint32_t> run_exact(const LayerParams& params, const SpikeTrain& train) {
  return run(ExactSemantics(params), train);
}

std::vector<CountRange> run_ia(const LayerParams& params, const CutMatrix& cuts, const SpikeTrain& train,
                               IaOptions options) {
  return run(IaSemantics(params, cuts, options), train);
}

LayerParams truncated(const LayerParams& params, const CutMatrix& cuts, CutDepth thresh_cut, CutDepth reset_cut) {
  if (cuts.rows() != params.n_neurons || cuts.cols() != params.n_inputs) {
    throw ShapeError("cut matrix shape does not match the layer");
  }
  LayerParams out = params;
  for (std::size_t i = 0; i < params.n_neurons; ++i) {
    for (std::size_t j = 0; j < params.n_inputs; ++j) {
      out.weights[i * params.n_inputs + j] = fixed::truncate(params.weight(i, j), cuts.at(i, j));
    }
  }
  out.v_thresh = fixed::truncate(params.v_thresh, thresh_cut);
  out.v_reset = fixed::truncate(params.v_reset, reset_cut);
  return out;
}

}  // namespace axplore::snn
