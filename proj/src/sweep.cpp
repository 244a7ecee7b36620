// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "chainflow/errors.hpp"
#include "chainflow/loop_order.hpp"
#include "chainflow/reuse.hpp"
#include "chainflow/traffic.hpp"
#include "chainflow/workloads.hpp"

namespace chainflow {

namespace {

struct Job {
  const DatasetShape* dataset;
  std::uint64_t N;
  std::size_t first_cell;
};

}  // namespace

std::vector<SweepCell> run_sweep(const SweepSpec& spec) {
  if (spec.policies.empty()) throw ValidationError("sweep needs at least one policy");
  std::vector<Job> jobs;
  std::vector<SweepCell> cells;
  const std::size_t per_job = spec.sram_mb.size() * spec.policies.size();
  for (const auto& name : spec.datasets) {
    const DatasetShape& d = find_dataset(name);
    std::vector<std::uint64_t> ns = spec.Ns;
    if (d.kind == WorkloadKind::gcn) ns = {d.features};
    for (auto N : ns) {
      if (N == 0) throw ValidationError("N must be positive");
      jobs.push_back({&d, N, cells.size()});
      for (double mb : spec.sram_mb) {
        for (Policy p : spec.policies) cells.push_back({d.name, N, mb, p, {}});
      }
    }
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs.size());
  auto worker = [&] {
    for (std::size_t j; (j = next.fetch_add(1)) < jobs.size();) {
      try {
        const Job& job = jobs[j];
        TensorDag dag = build_dataset_dag(*job.dataset, job.N, spec.iters);
        classify(dag);
        const LoopOrderAssignment a = assign_loop_orders(dag);
        apply_assignment(dag, a);
        for (std::size_t c = 0; c < per_job; ++c) {
          SweepCell& cell = cells[job.first_cell + c];
          MachineConfig cfg = spec.base;
          cfg.sram_bytes = static_cast<std::uint64_t>(std::llround(cell.sram_mb * kMiB));
          cell.report = simulate(dag, &a, cfg, cell.policy, spec.options);
        }
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(spec.jobs, static_cast<unsigned>(jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return cells;
}

std::string sweep_csv(const std::vector<SweepCell>& cells, std::uint64_t word_bytes) {
  std::ostringstream os;
  os << "dataset,N,sram_mb,policy,dram_mb,noc_kb,sram_peak_kb\n";
  char buf[256];
  for (const auto& c : cells) {
    const double dram_mb = static_cast<double>(c.report.dram_bytes) / kMiB;
    const double noc_kb =
        static_cast<double>(c.report.noc_intercluster_words * word_bytes) / 1024.0;
    const double peak_kb = static_cast<double>(c.report.sram_peak_words * word_bytes) / 1024.0;
    std::snprintf(buf, sizeof buf, "%s,%llu,%g,%s,%.6f,%.3f,%.3f\n", c.dataset.c_str(),
                  static_cast<unsigned long long>(c.N), c.sram_mb,
                  std::string(to_string(c.policy)).c_str(), dram_mb, noc_kb, peak_kb);
    os << buf;
  }
  return os.str();
}

std::vector<double> reduction_factors(const std::vector<SweepCell>& cells) {
  std::vector<double> out;
  for (const auto& a : cells) {
    if (a.policy != Policy::seq_flex) continue;
    for (const auto& b : cells) {
      if (b.policy == Policy::gogeta_map && b.dataset == a.dataset && b.N == a.N &&
          b.sram_mb == a.sram_mb) {
        out.push_back(static_cast<double>(a.report.dram_words()) /
                      static_cast<double>(b.report.dram_words()));
      }
    }
  }
  return out;
}

double geomean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += std::log(x);
  return std::exp(s / static_cast<double>(xs.size()));
}

}  // namespace chainflow
