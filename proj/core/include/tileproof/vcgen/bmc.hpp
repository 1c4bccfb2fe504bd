// Bounded model checking by loop unrolling, with concrete replay of models.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tileproof/exec/interp.hpp"
#include "tileproof/smt/model.hpp"
#include "tileproof/vcgen/vc.hpp"

namespace tileproof::vcgen {

struct BmcConfig {
  int unwind = 3;
  int64_t max_param = 16;
  int cells = 16;  // array cells requested through get-value
};

/// Input that makes the program end in a state violating its postcondition.
struct Counterexample {
  std::map<std::string, int64_t> scalars;  // params and initial scalar values
  std::map<std::string, std::vector<int64_t>> arrays;
  std::vector<std::pair<std::string, int64_t>> witness;  // failing index assignment
};

/// Sat means some run with every trip count <= unwind violates Post.
CheckTask encode_bmc(const Program& p, const BmcConfig& cfg = {});

/// Rebuilds the input from a model, runs it concretely and keeps it only
/// when Pre holds, the run completes and Post fails.
std::optional<Counterexample> replay(const Program& p, const smt::Model& m,
                                     const BmcConfig& cfg = {});

/// Same check on an explicit input.
std::optional<Counterexample> confirm(const Program& p, const exec::State& input);

/// First assignment of q's variables (lexicographic in the bounded window)
/// that makes q false in s.
std::optional<std::vector<std::pair<std::string, int64_t>>> find_violation(
    const Program& p, const QuantAssertion& q, const exec::State& s);

}  // namespace tileproof::vcgen
