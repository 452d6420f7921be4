#include "phifst/checks.hpp"

#include <cmath>
#include <map>

namespace phifst {

StochasticReport check_stochastic(const Transducer<double>& t, double tol) {
  StochasticReport report;
  report.tol = tol;
  for (StateId q = 0; q < t.num_states(); ++q) {
    double mass = t.final_output[q] ? *t.final_output[q] : 0.0;
    for (const Arc<double>& arc : t.arcs[q]) mass += arc.out;
    double residual = std::abs(mass - 1.0);
    report.residuals.push_back(residual);
    if (residual > tol) report.pass = false;
  }
  return report;
}

ProbabilisticReport check_probabilistic(const Transducer<double>& t,
                                        int max_len, double tol) {
  ProbabilisticReport report;
  report.tol = tol;
  Enumeration<double> table = enumerate(t, max_len);
  report.complete = table.open.empty();
  for (const auto& [word, value] : table.entries) {
    report.partial_sum += value;
    if (value < 0.0 || value > 1.0 + tol) {
      report.pass = false;
      report.violations.push_back("value " + std::to_string(value) +
                                  " outside [0, 1]");
    }
  }
  if (report.complete) {
    if (std::abs(report.partial_sum - 1.0) > tol) report.pass = false;
  } else {
    if (report.partial_sum > 1.0 + tol) report.pass = false;
  }
  return report;
}

ConditionalReport check_conditional_probabilistic(
    const Transducer<PairOutput>& t, int max_len, double tol) {
  ConditionalReport report;
  report.tol = tol;
  Enumeration<PairOutput> table = enumerate(t, max_len);
  std::map<Word, double> sums;
  for (const auto& [input, out] : table.entries) sums[out.word] += out.weight;
  for (const auto& [beta, sum] : sums) {
    ConditionalGroup group;
    group.output = beta;
    group.sum = sum;
    group.conclusive = true;
    for (const auto& [input, acc] : table.open) {
      const Word& prefix = acc.word;
      if (prefix.size() <= beta.size() &&
          std::equal(prefix.begin(), prefix.end(), beta.begin())) {
        group.conclusive = false;
        break;
      }
    }
    if (group.conclusive && std::abs(sum - 1.0) > tol) report.pass = false;
    report.groups.push_back(std::move(group));
  }
  return report;
}

CanonicalReport check_canonical(const Transducer<double>& t, Semiring s,
                                int max_len, double tol) {
  CanonicalReport report;
  report.tol = tol;
  report.semiring = s;
  for (StateId q = 0; q < t.num_states(); ++q) {
    Enumeration<double> table = enumerate_from(t, q, max_len);
    double acc = 0.0;
    for (const auto& [word, value] : table.entries)
      acc = semiring_plus(s, acc, value);
    bool complete = table.open.empty();
    report.sums.push_back(acc);
    report.complete.push_back(complete);
    if (complete) {
      if (std::abs(acc - 1.0) > tol) report.pass = false;
    } else {
      if (acc > 1.0 + tol) report.pass = false;
    }
  }
  return report;
}

}  // namespace phifst
