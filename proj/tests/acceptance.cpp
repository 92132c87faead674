// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <cstdio>
#include <vector>

#include "cantorcusp/verify.hpp"

int main() {
  using cantorcusp::verify::CheckResult;
  const double alpha = 0.7;
  const unsigned seed = cantorcusp::verify::kDefaultSeed;

  std::vector<CheckResult> results;
  results.push_back(cantorcusp::verify::check_geometry_exactness());
  results.push_back(cantorcusp::verify::check_reflection_involution(alpha, seed));
  results.push_back(cantorcusp::verify::check_differential_jacobian(alpha, seed));
  results.push_back(cantorcusp::verify::check_threshold_equivalence());
  results.push_back(cantorcusp::verify::check_singular_integrals(seed));
  results.push_back(cantorcusp::verify::check_sharp_pair_identities());
  results.push_back(cantorcusp::verify::check_witness_series());
  results.push_back(cantorcusp::verify::check_grid_extension());
  results.push_back(cantorcusp::verify::check_determinism(alpha, seed));

  bool all = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    std::printf("criterion %zu %-24s %s  (%s)\n", i + 1, results[i].name.c_str(),
                results[i].pass ? "PASS" : "FAIL", results[i].detail.c_str());
    all = all && results[i].pass;
  }
  return all ? 0 : 1;
}
