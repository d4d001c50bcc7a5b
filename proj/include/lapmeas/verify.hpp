#pragma once

// Randomized property suites for the norm, subordination and total-variation
// inequalities, the spectral kernel and the measure builders. Each lemma runs
// a fixed number of seeded trials; a trial passes when its margin
// (allowed - observed, in the lemma's own units) is >= 0.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lapmeas/io.hpp"

namespace lapmeas {

struct VerifyOptions {
  std::string suite = "all";  // norms | subordination | bounds | spectral | approximant | all
  int trials = 1000;
  std::uint64_t seed = 42;
  std::size_t max_dim = 4;  // instances draw n from [1, max_dim]
  double min_gap = 0.0;     // > 0: spectra of random Hermitian inputs are gapped
};

struct LemmaResult {
  std::string suite;
  std::string name;
  int trials = 0;
  int failures = 0;
  double worst_margin = 0.0;
  std::optional<io::Json> failing_instance;  // first failing trial

  bool passed() const { return failures == 0; }
};

const std::vector<std::string>& suite_names();

// InputError on an unknown suite or non-positive trial count / dimension.
std::vector<LemmaResult> run_verify(const VerifyOptions& options);

}  // namespace lapmeas
