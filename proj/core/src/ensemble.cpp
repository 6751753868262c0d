#include "tpa/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "tpa/rng.hpp"

namespace tpa {

std::vector<EnsembleMember> run_ensemble(const ModelConfig& cfg, const RuleTable& rule,
                                         std::uint64_t runs, unsigned jobs) {
  if (runs == 0) throw std::invalid_argument("ensemble needs at least one run");
  validate_config(cfg);
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::uint64_t>(jobs, runs));

  std::vector<EnsembleMember> out(runs);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&] {
    for (std::uint64_t i = next++; i < runs; i = next++) {
      try {
        ModelConfig member = cfg;
        member.seed = derive_seed(cfg.seed, i);
        member.record_interval = std::max<std::uint64_t>(member.steps, 1);
        RunResult r = run_model(member, rule);
        out[i] = {i, member.seed, r.records.back()};
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  {
    std::vector<std::jthread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace tpa
