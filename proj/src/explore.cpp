#include "axplore/explore.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace axplore::explore {

Interval acceptable_range(CutDepth k_max) {
  const Interval limits = fixed::error_bounds(k_max);
  // The midpoint may sit half a grid unit off the grid; flooring it changes
  // no containment decision, since every observed error lies on the grid.
  return Interval::from_raw(0, (limits.lo() + limits.hi()) / 2);
}

IaNum counter_error(const snn::CountRange& counter, const Interval& tau) {
  const std::int64_t width = counter.hi - counter.lo;
  return {Interval::point_raw(std::int64_t{counter.hi} << fixed::kFracBits),
          Interval::from_raw(0, width * (tau.hi() + 1))};
}

WatchSet::WatchSet(std::size_t n_neurons, std::size_t n_inputs, const ExploreConfig& config) : n_inputs_(n_inputs) {
  auto tau_for = [&](const WatchTarget& t) {
    if (config.tau_override) {
      if (auto custom = config.tau_override(t)) {
        return *custom;
      }
    }
    return config.tau;
  };
  hidden_.reserve(n_neurons * n_inputs);
  for (std::size_t i = 0; i < n_neurons; ++i) {
    for (std::size_t j = 0; j < n_inputs; ++j) {
      const WatchTarget t{FlowPoint::Term, i, j};
      hidden_.emplace_back(WatcherKind::Hidden, t, tau_for(t));
    }
    const WatchTarget d{FlowPoint::Decay, i, 0};
    decay_.emplace_back(WatcherKind::Hidden, d, tau_for(d));
    const WatchTarget h{FlowPoint::Inhibit, i, 0};
    inhibit_.emplace_back(WatcherKind::Hidden, h, tau_for(h));
    const WatchTarget o{FlowPoint::Output, i, 0};
    active_.emplace_back(WatcherKind::Active, o, tau_for(o));
  }
}

void WatchSet::reset() {
  for (auto* group : {&hidden_, &active_, &decay_, &inhibit_}) {
    for (auto& w : *group) {
      w.reset();
    }
  }
}

namespace {

void summarize(const CutMatrix& k, RoundRecord& record) {
  record.histogram.fill(0);
  for (auto depth : k.values()) {
    ++record.histogram[static_cast<std::size_t>(depth.bits())];
  }
  record.min_k = k.min_bits();
  record.max_k = k.max_bits();
}

}  // namespace

bool backward_analysis(const WatchSet& watchers, CutMatrix& k, RoundRecord& record) {
  const std::size_t n = watchers.n_neurons();
  const std::size_t h = watchers.n_inputs();
  bool any_active = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (watchers.decay_watcher(i).watch_fired()) {
      ++record.decay_fired;
    }
    if (watchers.inhibit_watcher(i).watch_fired()) {
      ++record.inhibit_fired;
    }
    for (std::size_t j = 0; j < h; ++j) {
      if (watchers.hidden(i, j).watch_fired()) {
        ++record.hidden_fired;
      }
    }
    if (!watchers.active(i).watch_fired()) {
      continue;
    }
    any_active = true;
    ++record.active_fired;

    std::size_t dec = 0;
    for (std::size_t j = h; j-- > 0;) {
      if (watchers.hidden(i, j).watch_fired() && k.at(i, j).bits() > 0) {
        k.at(i, j) = CutDepth{k.at(i, j).bits() - 1};
        ++dec;
      }
    }
    if (dec == 0) {
      // The output is uncertain although every term stayed inside tau: blame
      // the terms that carried any error at all.
      for (std::size_t j = h; j-- > 0;) {
        if (watchers.hidden(i, j).saw_error() && k.at(i, j).bits() > 0) {
          k.at(i, j) = CutDepth{k.at(i, j).bits() - 1};
          ++dec;
        }
      }
      if (dec > 0) {
        ++record.fallback_neurons;
      }
    }
    if (dec > 0) {
      ++record.neurons_involved;
      record.decrements += dec;
    }
  }
  record.fraction = n == 0 ? 0.0 : static_cast<double>(record.neurons_involved) / static_cast<double>(n);
  summarize(k, record);
  return any_active;
}

ExplorationReport explore(const snn::LayerParams& params, std::span<const snn::SpikeTrain> trains,
                          const ExploreConfig& config) {
  params.validate();
  if (trains.empty()) {
    throw ConfigError("exploration needs at least one spike train");
  }
  const std::size_t n = params.n_neurons;
  const std::size_t h = params.n_inputs;
  const std::size_t cap = config.max_rounds != 0 ? config.max_rounds : fixed::kMaxCut * n * h + 1;

  ExplorationReport report;
  CutMatrix k(n, h, CutDepth{fixed::kMaxCut});
  WatchSet watchers(n, h, config);

  while (true) {
    if (report.rounds.size() >= cap) {
      report.outcome = Outcome::RoundCap;
      break;
    }
    RoundRecord record;
    record.round = report.rounds.size() + 1;
    watchers.reset();
    try {
      const snn::IaSemantics sem(params, k, config.ia);
      for (const auto& train : trains) {
        snn::run(sem, train, watchers);
      }
    } catch (const std::exception& e) {
      throw Error("exploration round " + std::to_string(record.round) + ": " + e.what());
    }
    const bool any_active = backward_analysis(watchers, k, record);
    report.rounds.push_back(record);
    if (config.keep_history) {
      report.history.push_back(k);
    }
    if (!any_active) {
      report.outcome = Outcome::Converged;
      break;
    }
    if (k.all_zero()) {
      report.outcome = Outcome::Exhausted;
      break;
    }
    if (record.decrements == 0) {
      report.outcome = Outcome::Stalled;
      break;
    }
  }
  report.converged = report.outcome == Outcome::Converged;
  report.final_k = std::move(k);
  return report;
}

std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Converged:
      return "converged";
    case Outcome::Exhausted:
      return "exhausted";
    case Outcome::Stalled:
      return "stalled";
    case Outcome::RoundCap:
      return "round_cap";
  }
  return "unknown";
}

std::string report_csv(const ExplorationReport& report) {
  std::ostringstream out;
  out << "round,neurons_involved,fraction,active_fired,min_k,max_k\n";
  char frac[32];
  for (const auto& r : report.rounds) {
    std::snprintf(frac, sizeof frac, "%.6f", r.fraction);
    out << r.round << ',' << r.neurons_involved << ',' << frac << ',' << r.active_fired << ',' << r.min_k << ','
        << r.max_k << '\n';
  }
  return out.str();
}

std::string report_json(const ExplorationReport& report) {
  nlohmann::ordered_json doc;
  doc["converged"] = report.converged;
  doc["outcome"] = outcome_name(report.outcome);
  auto& rounds = doc["rounds"] = nlohmann::ordered_json::array();
  for (const auto& r : report.rounds) {
    rounds.push_back({{"round", r.round},
                      {"neurons_involved", r.neurons_involved},
                      {"fraction", r.fraction},
                      {"active_fired", r.active_fired},
                      {"hidden_fired", r.hidden_fired},
                      {"decay_fired", r.decay_fired},
                      {"inhibit_fired", r.inhibit_fired},
                      {"decrements", r.decrements},
                      {"fallback_neurons", r.fallback_neurons},
                      {"min_k", r.min_k},
                      {"max_k", r.max_k},
                      {"k_histogram", r.histogram}});
  }
  auto& fk = doc["final_k"] = nlohmann::ordered_json::object();
  fk["rows"] = report.final_k.rows();
  fk["cols"] = report.final_k.cols();
  std::vector<int> values;
  for (auto d : report.final_k.values()) {
    values.push_back(d.bits());
  }
  fk["values"] = values;
  return doc.dump(2) + "\n";
}

}  // namespace axplore::explore
