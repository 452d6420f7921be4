#ifndef PHIFST_CHECKS_HPP
#define PHIFST_CHECKS_HPP

#include <string>
#include <vector>

#include "phifst/transducer.hpp"
#include "phifst/types.hpp"

namespace phifst {

// Per-state residuals |e(q) + sum_a lambda(q,a) - 1|.
struct StochasticReport {
  bool pass = true;
  double tol = 0.0;
  std::vector<double> residuals;
};

StochasticReport check_stochastic(const Transducer<double>& t, double tol);

// Partial mass of O up to max_len. `complete` is true when no path of
// length max_len can still be extended, i.e. the partial mass is the total.
struct ProbabilisticReport {
  bool pass = true;
  double tol = 0.0;
  bool complete = false;
  double partial_sum = 0.0;
  std::vector<std::string> violations;
};

ProbabilisticReport check_probabilistic(const Transducer<double>& t,
                                        int max_len, double tol);

// Conditional masses grouped by output word. A group is conclusive when no
// open frontier path's accumulated output is a prefix of the group's word.
struct ConditionalGroup {
  Word output;
  double sum = 0.0;
  bool conclusive = false;
};

struct ConditionalReport {
  bool pass = true;
  double tol = 0.0;
  std::vector<ConditionalGroup> groups;
};

ConditionalReport check_conditional_probabilistic(
    const Transducer<PairOutput>& t, int max_len, double tol);

// Per-state semiring mass of O^q up to max_len compared to 1.
struct CanonicalReport {
  bool pass = true;
  double tol = 0.0;
  Semiring semiring = Semiring::kPlusTimes;
  std::vector<double> sums;
  std::vector<bool> complete;
};

CanonicalReport check_canonical(const Transducer<double>& t, Semiring s,
                                int max_len, double tol);

}  // namespace phifst

#endif  // PHIFST_CHECKS_HPP
