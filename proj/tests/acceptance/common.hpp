#ifndef CTBN_TESTS_ACCEPTANCE_COMMON_HPP
#define CTBN_TESTS_ACCEPTANCE_COMMON_HPP

#include <chrono>
#include <sstream>
#include <string>
#include <vector>

namespace ctbn::acceptance {

struct CriterionResult {
  std::string id;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  bool full = false;  // full replicate counts instead of the smoke variant
  int threads = 0;
};

inline double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <typename... Args>
std::string cat(Args&&... args) {
  std::ostringstream out;
  out.precision(6);
  (out << ... << args);
  return out.str();
}

std::vector<CriterionResult> run_scoring_criteria(const Options& opt);
std::vector<CriterionResult> run_variational_criteria(const Options& opt);
std::vector<CriterionResult> run_learning_criteria(const Options& opt);
std::vector<CriterionResult> run_harness_criteria(const Options& opt);

}  // namespace ctbn::acceptance

#endif
