#ifndef UWLOC_EXPERIMENT_HPP
#define UWLOC_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "uwloc/config.hpp"

namespace uwloc {

// A named desk-scale experiment: which output to produce, the resolved
// configuration, and the sampling budget. Analytic columns depend only on
// the configuration; Monte Carlo columns also depend on seed and trials.
struct ExperimentSpec {
  std::string name;  // fig3 | fig4 | fig5 | fig6 | fig7 | fig8 | fig9
  Config cfg;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::string out_dir = "out";

  void validate() const;
};

// Runs the experiment, writes one CSV plus a manifest capturing the full
// resolved configuration and seed, and returns the paths written.
std::vector<std::string> run_experiment(const ExperimentSpec& spec);

}  // namespace uwloc

#endif
