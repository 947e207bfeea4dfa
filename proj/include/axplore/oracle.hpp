#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "axplore/snn.hpp"

// Brute-force cross-checks of the interval model: concrete truncated runs,
// containment of their counters in the interval counters, argmax
// comparison, and search-space arithmetic.
namespace axplore::oracle {

using BigInt = boost::multiprecision::cpp_int;
using fixed::CutDepth;
using snn::CutMatrix;

// Concrete cut depths for every weight plus threshold and reset.
struct TruncationAssignment {
  CutMatrix weights;
  CutDepth thresh{};
  CutDepth reset{};
};

std::uint64_t assignment_hash(const TruncationAssignment& a);

// Truncates every parameter per the assignment, then runs the exact flow.
std::vector<std::uint32_t> run_truncated(const snn::LayerParams& params, const TruncationAssignment& assignment,
                                         const snn::SpikeTrain& train);

struct Violation {
  std::uint64_t assignment_hash = 0;
  std::size_t train = 0;
  std::size_t neuron = 0;
  std::uint32_t exact = 0;
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;
};

// Draws `samples` assignments with every depth <= its bound in k_best
// (threshold/reset bounded by ia.thresh_cut / ia.reset_cut) and reports
// every counter that falls outside the interval run's counter range.
std::vector<Violation> check_containment(const snn::LayerParams& params, const CutMatrix& k_best,
                                         std::span<const snn::SpikeTrain> trains, std::size_t samples,
                                         std::uint64_t seed, const snn::IaOptions& ia = {});

// Same check over every assignment of the lattice. Throws ConfigError when
// the lattice holds more than `limit` points.
std::vector<Violation> check_containment_exhaustive(const snn::LayerParams& params, const CutMatrix& k_best,
                                                    std::span<const snn::SpikeTrain> trains,
                                                    const snn::IaOptions& ia = {}, std::size_t limit = 1'000'000);

// Index of the largest counter, lowest index on ties.
std::size_t argmax(std::span<const std::uint32_t> counters);
// Throws ShapeError on length mismatch.
bool argmax_match(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);

// Exact n choose r. Throws ConfigError unless 0 <= r <= n.
BigInt combination_count(std::uint64_t n, std::uint64_t r);
// levels^n: the size of a per-value search space.
BigInt assignment_space(std::uint64_t levels, std::uint64_t n);
// Leading significant digits and decimal exponent, e.g. "4.18e74".
// Digits past the last are rounded half-up unless `round` is false.
std::string scientific(const BigInt& x, int digits = 3, bool round = true);

// assignment_hash,train,neuron,exact,lo,hi
std::string violations_csv(std::span<const Violation> violations);

}  // namespace axplore::oracle
