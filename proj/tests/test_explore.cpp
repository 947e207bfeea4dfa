#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "axplore/explore.hpp"
#include "support/fixtures.hpp"

using axplore::ConfigError;
using axplore::Interval;
using axplore::IaNum;
using axplore::TriBool;
namespace snn = axplore::snn;
namespace io = axplore::io;
using namespace axplore::explore;
using axplore::fixed::CutDepth;
namespace tt = axplore::testing;

namespace {

snn::LayerParams desk_model() { return io::load_model(tt::data_path("desk/model.json")); }
std::vector<snn::SpikeTrain> desk_trains() { return tt::load_fixture_trains(tt::data_path("desk/trains"), 6); }

long total_bits(const CutMatrix& k) {
  long s = 0;
  for (auto d : k.values()) s += d.bits();
  return s;
}

}  // namespace

TEST(AcceptableRange, Examples) {
  EXPECT_EQ(acceptable_range(CutDepth{0}), Interval::from_raw(0, 0));
  EXPECT_EQ(acceptable_range(CutDepth{1}), Interval::from_raw(0, 0));
  EXPECT_EQ(acceptable_range(CutDepth{2}), Interval::from_raw(0, 1));
  EXPECT_EQ(acceptable_range(CutDepth{15}), Interval::from_raw(0, 16383));
}

// Flooring the midpoint gives the same verdict as the exact half-unit bound
// for every error interval on the grid.
TEST(AcceptableRange, FlooredMidpointDecidesLikeExactOne) {
  for (int k = 0; k <= 15; ++k) {
    const auto r = acceptable_range(CutDepth{k});
    const double exact_hi = ((1 << k) - 1) / 2.0;
    for (std::int64_t lo = 0; lo <= 20; ++lo) {
      for (std::int64_t hi : {lo, lo + 1, std::int64_t{16382}, std::int64_t{16383}, std::int64_t{16384}}) {
        if (hi < lo) continue;
        const bool exact = static_cast<double>(hi) <= exact_hi;
        ASSERT_EQ(r.encloses(Interval::from_raw(lo, hi)), exact) << k << " " << lo << " " << hi;
      }
    }
  }
}

TEST(WatcherTest, CompareDataIsSticky) {
  Watcher w(WatcherKind::Hidden, {}, Interval::from_raw(0, 1));
  const auto val = Interval::point_raw(5 << 16);
  w.compare_data({val, Interval::from_raw(0, 1)});
  EXPECT_FALSE(w.watch_fired());
  EXPECT_TRUE(w.saw_error());
  w.compare_data({val, Interval::from_raw(0, 2)});
  EXPECT_TRUE(w.watch_fired());
  w.compare_data({val, Interval::from_raw(0, 0)});
  EXPECT_TRUE(w.watch_fired());
  w.reset();
  EXPECT_FALSE(w.watch_fired());
  EXPECT_FALSE(w.saw_error());
  w.compare_data({val, Interval::from_raw(0, 0)});
  EXPECT_FALSE(w.watch_fired());
  EXPECT_FALSE(w.saw_error());
}

TEST(CounterError, FiresOnlyForUncertainCounts) {
  const auto tau = Interval::from_raw(0, 100);
  EXPECT_TRUE(tau.encloses(counter_error({3, 3}, tau).eps));
  EXPECT_FALSE(tau.encloses(counter_error({3, 4}, tau).eps));
  EXPECT_FALSE(tau.encloses(counter_error({0, 9}, tau).eps));
}

TEST(Explore, QuietInputConvergesAtOnce) {
  std::mt19937_64 rng(1);
  const auto p = tt::random_network(rng);
  const std::vector<snn::SpikeTrain> trains{snn::SpikeTrain(10, p.n_inputs)};
  const auto r = explore(p, trains);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.outcome, Outcome::Converged);
  ASSERT_EQ(r.rounds.size(), 1u);
  EXPECT_EQ(r.final_k, CutMatrix(p.n_neurons, p.n_inputs, CutDepth{15}));
  EXPECT_EQ(r.rounds[0].fraction, 0.0);
}

TEST(Explore, SingleNeuronStopsAtKnownDepth) {
  for (int k_star = 1; k_star <= 15; ++k_star) {
    const auto f = tt::single_neuron_fixture(k_star);
    ExploreConfig c;
    c.tau = f.hidden_tau;
    const std::vector<snn::SpikeTrain> trains{f.train};
    const auto r = explore(f.params, trains, c);
    ASSERT_TRUE(r.converged) << k_star;
    EXPECT_EQ(r.final_k.at(0, 0).bits(), k_star);
    EXPECT_EQ(r.rounds.size(), static_cast<std::size_t>(16 - k_star));
  }
}

// With k* = 0 the descent reaches the all-zero matrix and stops there
// without a confirming round.
TEST(Explore, SingleNeuronExhausts) {
  const auto f = tt::single_neuron_fixture(0);
  ExploreConfig c;
  c.tau = f.hidden_tau;
  const std::vector<snn::SpikeTrain> trains{f.train};
  const auto r = explore(f.params, trains, c);
  EXPECT_EQ(r.outcome, Outcome::Exhausted);
  EXPECT_FALSE(r.converged);
  EXPECT_TRUE(r.final_k.all_zero());
  EXPECT_EQ(r.rounds.size(), 15u);
}

TEST(Explore, RejectsEmptyInput) {
  EXPECT_THROW(explore(desk_model(), std::vector<snn::SpikeTrain>{}), ConfigError);
}

TEST(Explore, DeskFixtureConverges) {
  const auto p = desk_model();
  const auto trains = desk_trains();
  ExploreConfig c;
  c.keep_history = true;
  const auto r = explore(p, trains, c);
  ASSERT_EQ(r.outcome, Outcome::Converged) << outcome_name(r.outcome);
  EXPECT_LT(r.final_k.max_bits(), 15);
  // No decision was uncertain in the final round, so every truncation agrees
  // with the exact network.
  for (const auto& t : trains) {
    const auto ia = snn::run_ia(p, r.final_k, t);
    const auto exact = snn::run_exact(p, t);
    for (std::size_t i = 0; i < exact.size(); ++i) {
      EXPECT_TRUE(ia[i].is_degenerate());
      EXPECT_EQ(ia[i].lo, exact[i]);
    }
  }
}

TEST(Explore, HistoryIsMonotoneAndConsistent) {
  const auto p = desk_model();
  const auto trains = desk_trains();
  ExploreConfig c;
  c.keep_history = true;
  const auto r = explore(p, trains, c);
  ASSERT_EQ(r.history.size(), r.rounds.size());
  CutMatrix prev(p.n_neurons, p.n_inputs, CutDepth{15});
  std::size_t decrements = 0;
  for (std::size_t n = 0; n < r.rounds.size(); ++n) {
    const auto& k = r.history[n];
    const auto& rec = r.rounds[n];
    std::size_t changed = 0;
    std::size_t rows_changed = 0;
    for (std::size_t i = 0; i < p.n_neurons; ++i) {
      bool row = false;
      for (std::size_t j = 0; j < p.n_inputs; ++j) {
        const int d = prev.at(i, j).bits() - k.at(i, j).bits();
        ASSERT_TRUE(d == 0 || d == 1);
        changed += static_cast<std::size_t>(d);
        row = row || d == 1;
      }
      rows_changed += row ? 1 : 0;
    }
    EXPECT_EQ(rec.round, n + 1);
    EXPECT_EQ(rec.decrements, changed);
    EXPECT_EQ(rec.neurons_involved, rows_changed);
    EXPECT_LE(rec.neurons_involved, rec.active_fired);
    EXPECT_DOUBLE_EQ(rec.fraction, static_cast<double>(rows_changed) / static_cast<double>(p.n_neurons));
    EXPECT_EQ(rec.min_k, k.min_bits());
    EXPECT_EQ(rec.max_k, k.max_bits());
    EXPECT_EQ(std::accumulate(rec.histogram.begin(), rec.histogram.end(), std::size_t{0}), k.values().size());
    decrements += changed;
    prev = k;
  }
  EXPECT_EQ(prev, r.final_k);
  EXPECT_EQ(static_cast<long>(decrements), 15L * static_cast<long>(p.n_neurons * p.n_inputs) - total_bits(r.final_k));
}

TEST(Explore, RoundCap) {
  const auto p = desk_model();
  const auto trains = desk_trains();
  ExploreConfig c;
  c.max_rounds = 2;
  const auto r = explore(p, trains, c);
  EXPECT_EQ(r.outcome, Outcome::RoundCap);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.rounds.size(), 2u);
}

TEST(Explore, Deterministic) {
  const auto p = desk_model();
  const auto trains = desk_trains();
  const auto a = explore(p, trains);
  const auto b = explore(p, trains);
  EXPECT_EQ(a.final_k, b.final_k);
  EXPECT_EQ(report_csv(a), report_csv(b));
  EXPECT_EQ(report_json(a), report_json(b));
}

TEST(WatchSetTest, TauOverride) {
  ExploreConfig c;
  c.tau = Interval::from_raw(0, 7);
  c.tau_override = [](const WatchTarget& t) -> std::optional<Interval> {
    if (t.point == FlowPoint::Term && t.neuron == 1 && t.input == 2) return Interval::from_raw(0, 99);
    return std::nullopt;
  };
  WatchSet w(2, 3, c);
  EXPECT_EQ(w.hidden(1, 2).acceptable(), Interval::from_raw(0, 99));
  EXPECT_EQ(w.hidden(1, 1).acceptable(), Interval::from_raw(0, 7));
  EXPECT_EQ(w.active(0).acceptable(), Interval::from_raw(0, 7));
}

TEST(BackwardAnalysis, DecrementsFiredTermsOfActiveNeurons) {
  ExploreConfig c;
  c.tau = Interval::from_raw(0, 0);
  WatchSet w(2, 3, c);
  const IaNum bad{Interval::point_raw(0), Interval::from_raw(0, 1)};
  w.after_term(0, 0, bad);
  w.after_term(0, 2, bad);
  w.after_term(1, 1, bad);
  w.after_fire(0, TriBool::Uncertain, snn::CountRange{0, 1});
  CutMatrix k(2, 3, CutDepth{15});
  RoundRecord rec;
  EXPECT_TRUE(backward_analysis(w, k, rec));
  EXPECT_EQ(k.at(0, 0).bits(), 14);
  EXPECT_EQ(k.at(0, 1).bits(), 15);
  EXPECT_EQ(k.at(0, 2).bits(), 14);
  EXPECT_EQ(k.at(1, 1).bits(), 15);
  EXPECT_EQ(rec.neurons_involved, 1u);
  EXPECT_EQ(rec.decrements, 2u);
  EXPECT_EQ(rec.hidden_fired, 3u);
  EXPECT_DOUBLE_EQ(rec.fraction, 0.5);
}

TEST(Report, CsvLayout) {
  const auto f = tt::single_neuron_fixture(13);
  ExploreConfig c;
  c.tau = f.hidden_tau;
  const std::vector<snn::SpikeTrain> trains{f.train};
  const auto csv = report_csv(explore(f.params, trains, c));
  EXPECT_EQ(csv,
            "round,neurons_involved,fraction,active_fired,min_k,max_k\n"
            "1,1,1.000000,1,14,14\n"
            "2,1,1.000000,1,13,13\n"
            "3,0,0.000000,0,13,13\n");
}
