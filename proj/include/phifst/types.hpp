#ifndef PHIFST_TYPES_HPP
#define PHIFST_TYPES_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace phifst {

using StateId = std::int32_t;
using Symbol = std::int32_t;
using Word = std::vector<Symbol>;

constexpr StateId kNoState = -1;
// graph edge label for non-consuming (failure-derived) edges
constexpr Symbol kNoSymbol = -1;

// Output monoid elements. Weights multiply; words concatenate.
// Weight-only machines use plain double, pair machines use PairOutput.
struct PairOutput {
  Word word;
  double weight = 1.0;

  friend bool operator==(const PairOutput& a, const PairOutput& b) {
    return a.word == b.word && a.weight == b.weight;
  }
};

inline double times(double a, double b) { return a * b; }

inline PairOutput times(const PairOutput& a, const PairOutput& b) {
  PairOutput r;
  r.word.reserve(a.word.size() + b.word.size());
  r.word.insert(r.word.end(), a.word.begin(), a.word.end());
  r.word.insert(r.word.end(), b.word.begin(), b.word.end());
  r.weight = a.weight * b.weight;
  return r;
}

template <class M>
M one();

template <>
inline double one<double>() {
  return 1.0;
}

template <>
inline PairOutput one<PairOutput>() {
  return {};
}

inline double weight_of(double m) { return m; }
inline double weight_of(const PairOutput& m) { return m.weight; }

// Collecting semiring for weights: plus-times or max-times.
// Sum of the empty set is the additive neutral 0 in both.
enum class Semiring { kPlusTimes, kMaxTimes };

inline double semiring_plus(Semiring s, double a, double b) {
  return s == Semiring::kPlusTimes ? a + b : (a > b ? a : b);
}

inline double semiring_sum(Semiring s, std::span<const double> xs) {
  double acc = 0.0;
  for (double x : xs) acc = semiring_plus(s, acc, x);
  return acc;
}

}  // namespace phifst

#endif  // PHIFST_TYPES_HPP
