#include "axplore/oracle.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace axplore::oracle {

namespace {

struct IaRuns {
  std::vector<std::vector<snn::CountRange>> counters;
};

IaRuns run_ia_all(const snn::LayerParams& params, const CutMatrix& k_best, std::span<const snn::SpikeTrain> trains,
                  const snn::IaOptions& ia) {
  IaRuns out;
  const snn::IaSemantics sem(params, k_best, ia);
  for (const auto& t : trains) {
    out.counters.push_back(snn::run(sem, t));
  }
  return out;
}

void check_one(const snn::LayerParams& params, const TruncationAssignment& a, std::span<const snn::SpikeTrain> trains,
               const IaRuns& ia, std::vector<Violation>& out) {
  const snn::LayerParams p = snn::truncated(params, a.weights, a.thresh, a.reset);
  std::uint64_t hash = 0;
  bool hashed = false;
  for (std::size_t t = 0; t < trains.size(); ++t) {
    const auto exact = snn::run_exact(p, trains[t]);
    for (std::size_t i = 0; i < exact.size(); ++i) {
      const auto& range = ia.counters[t][i];
      if (!range.contains(exact[i])) {
        if (!hashed) {
          hash = assignment_hash(a);
          hashed = true;
        }
        out.push_back({hash, t, i, exact[i], range.lo, range.hi});
      }
    }
  }
}

}  // namespace

std::uint64_t assignment_hash(const TruncationAssignment& a) {
  // FNV-1a over the depths in row-major order, then threshold and reset.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](int v) {
    h ^= static_cast<std::uint64_t>(v);
    h *= 0x100000001b3ULL;
  };
  for (auto k : a.weights.values()) {
    mix(k.bits());
  }
  mix(a.thresh.bits());
  mix(a.reset.bits());
  return h;
}

std::vector<std::uint32_t> run_truncated(const snn::LayerParams& params, const TruncationAssignment& assignment,
                                         const snn::SpikeTrain& train) {
  return snn::run_exact(snn::truncated(params, assignment.weights, assignment.thresh, assignment.reset), train);
}

std::vector<Violation> check_containment(const snn::LayerParams& params, const CutMatrix& k_best,
                                         std::span<const snn::SpikeTrain> trains, std::size_t samples,
                                         std::uint64_t seed, const snn::IaOptions& ia) {
  if (samples < 1) {
    throw ConfigError("containment check needs at least one sample");
  }
  const IaRuns ia_runs = run_ia_all(params, k_best, trains, ia);
  std::mt19937_64 rng(seed);
  auto draw = [&](CutDepth bound) {
    std::uniform_int_distribution<int> d(0, bound.bits());
    return CutDepth{d(rng)};
  };
  std::vector<Violation> out;
  TruncationAssignment a{CutMatrix(k_best.rows(), k_best.cols()), {}, {}};
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < k_best.rows(); ++i) {
      for (std::size_t j = 0; j < k_best.cols(); ++j) {
        a.weights.at(i, j) = draw(k_best.at(i, j));
      }
    }
    a.thresh = draw(ia.thresh_cut);
    a.reset = draw(ia.reset_cut);
    check_one(params, a, trains, ia_runs, out);
  }
  return out;
}

std::vector<Violation> check_containment_exhaustive(const snn::LayerParams& params, const CutMatrix& k_best,
                                                    std::span<const snn::SpikeTrain> trains,
                                                    const snn::IaOptions& ia, std::size_t limit) {
  // Odometer over every weight depth plus threshold and reset.
  std::vector<int> bounds;
  for (auto k : k_best.values()) {
    bounds.push_back(k.bits());
  }
  bounds.push_back(ia.thresh_cut.bits());
  bounds.push_back(ia.reset_cut.bits());
  double points = 1.0;
  for (int b : bounds) {
    points *= b + 1;
  }
  if (points > static_cast<double>(limit)) {
    throw ConfigError("assignment lattice too large for exhaustive check");
  }

  const IaRuns ia_runs = run_ia_all(params, k_best, trains, ia);
  std::vector<int> digits(bounds.size(), 0);
  std::vector<Violation> out;
  const std::size_t n_weights = k_best.values().size();
  while (true) {
    TruncationAssignment a{CutMatrix(k_best.rows(), k_best.cols()), CutDepth{digits[n_weights]},
                           CutDepth{digits[n_weights + 1]}};
    for (std::size_t w = 0; w < n_weights; ++w) {
      a.weights.at(w / k_best.cols(), w % k_best.cols()) = CutDepth{digits[w]};
    }
    check_one(params, a, trains, ia_runs, out);

    std::size_t pos = 0;
    while (pos < digits.size() && digits[pos] == bounds[pos]) {
      digits[pos++] = 0;
    }
    if (pos == digits.size()) {
      break;
    }
    ++digits[pos];
  }
  return out;
}

std::size_t argmax(std::span<const std::uint32_t> counters) {
  return static_cast<std::size_t>(std::max_element(counters.begin(), counters.end()) - counters.begin());
}

bool argmax_match(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  if (a.size() != b.size()) {
    throw ShapeError("argmax_match needs counter vectors of equal length");
  }
  if (a.empty()) {
    return true;
  }
  return argmax(a) == argmax(b);
}

BigInt combination_count(std::uint64_t n, std::uint64_t r) {
  if (r > n) {
    throw ConfigError("combination_count requires r <= n");
  }
  r = std::min(r, n - r);
  BigInt acc = 1;
  // acc * (n - r + i) is divisible by i after step i.
  for (std::uint64_t i = 1; i <= r; ++i) {
    acc *= n - r + i;
    acc /= i;
  }
  return acc;
}

BigInt assignment_space(std::uint64_t levels, std::uint64_t n) {
  return boost::multiprecision::pow(BigInt(levels), static_cast<unsigned>(n));
}

std::string scientific(const BigInt& x, int digits, bool round) {
  if (x == 0) {
    return "0";
  }
  const std::string s = x.str();
  const int exponent = static_cast<int>(s.size()) - 1;
  std::string lead = s.substr(0, std::min<std::size_t>(digits, s.size()));
  int exp = exponent;
  if (round && s.size() > static_cast<std::size_t>(digits) && s[digits] >= '5') {
    BigInt bumped(lead);
    bumped += 1;
    lead = bumped.str();
    if (static_cast<int>(lead.size()) > digits) {
      lead.pop_back();
      ++exp;
    }
  }
  while (static_cast<int>(lead.size()) < digits) {
    lead.push_back('0');
  }
  std::string out = lead.substr(0, 1);
  if (digits > 1) {
    out += "." + lead.substr(1);
  }
  return out + "e" + std::to_string(exp);
}

std::string violations_csv(std::span<const Violation> violations) {
  std::ostringstream out;
  out << "assignment_hash,train,neuron,exact,lo,hi\n";
  for (const auto& v : violations) {
    out << v.assignment_hash << ',' << v.train << ',' << v.neuron << ',' << v.exact << ',' << v.lo << ',' << v.hi
        << '\n';
  }
  return out.str();
}

}  // namespace axplore::oracle
