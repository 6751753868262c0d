#ifndef TPA_ENSEMBLE_HPP
#define TPA_ENSEMBLE_HPP

#include <cstdint>
#include <vector>

#include "tpa/config.hpp"
#include "tpa/engine.hpp"

namespace tpa {

struct EnsembleMember {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;  // derive_seed(cfg.seed, index)
  TrajectoryRecord final_record;
};

// Runs `runs` independent copies of cfg, run i seeded with
// derive_seed(cfg.seed, i), on up to `jobs` worker threads (0 = hardware
// concurrency). Results are ordered by run index regardless of completion
// order, so the output does not depend on `jobs`.
std::vector<EnsembleMember> run_ensemble(const ModelConfig& cfg, const RuleTable& rule,
                                         std::uint64_t runs, unsigned jobs = 0);

}  // namespace tpa

#endif  // TPA_ENSEMBLE_HPP
