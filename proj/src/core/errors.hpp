#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace slicelab {

// Exhaustive mode asked for more work than the documented feasibility cap.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rejection sampler made 10^7 proposals without an acceptance.
struct StallError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// biased_rank_witness found no residue shift meeting the bound; carries the
// full per-j bias profile so the caller can report it.
struct NoWitnessError : std::runtime_error {
  std::vector<double> profile;
  NoWitnessError(const std::string& what, std::vector<double> profile_)
      : std::runtime_error(what), profile(std::move(profile_)) {}
};

}  // namespace slicelab
