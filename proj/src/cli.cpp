// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "chainflow/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "chainflow/dag.hpp"
#include "chainflow/dag_json.hpp"
#include "chainflow/errors.hpp"
#include "chainflow/intensity.hpp"
#include "chainflow/loop_order.hpp"
#include "chainflow/matrix_market.hpp"
#include "chainflow/reuse.hpp"
#include "chainflow/traffic.hpp"
#include "chainflow/workloads.hpp"

namespace chainflow {

namespace {

namespace fs = std::filesystem;

struct Source {
  std::string dag_file;
  std::string workload = "cg";
  std::string dataset = "aft02";
  std::string mtx;
  std::uint64_t M = 0;
  std::uint64_t nnz = 0;
  std::uint64_t N = 16;
  std::uint64_t O = 0;
  int iters = 1;
};

void add_source_options(CLI::App* app, Source& s, int default_iters) {
  s.iters = default_iters;
  app->add_option("--dag", s.dag_file, "DAG JSON file (overrides --workload)");
  app->add_option("--workload", s.workload, "cg or gcn")->check(CLI::IsMember({"cg", "gcn"}));
  app->add_option("--dataset", s.dataset, "catalog dataset name");
  app->add_option("--mtx", s.mtx, "Matrix Market file supplying M and nnz");
  app->add_option("--m", s.M, "explicit M (with --nnz)");
  app->add_option("--nnz", s.nnz, "explicit nnz (with --m)");
  app->add_option("--n", s.N, "right-hand sides / feature width")->check(CLI::PositiveNumber);
  app->add_option("--o", s.O, "GCN output width");
  app->add_option("--iters", s.iters, "unrolled CG iterations")->check(CLI::PositiveNumber);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

TensorDag load_source(const Source& s) {
  if (!s.dag_file.empty()) return parse_dag_json(slurp(s.dag_file));
  std::uint64_t M = s.M, nnz = s.nnz;
  if (!s.mtx.empty()) {
    const auto st = matrix_stats(coo_to_csr(read_matrix_market(s.mtx)));
    M = st.M;
    nnz = st.nnz;
  }
  if (s.workload == "gcn") {
    if (M != 0) return build_gcn_dag(M, nnz, s.N, s.O ? s.O : 1);
    const DatasetShape& d = find_dataset(s.dataset);
    if (d.kind != WorkloadKind::gcn) throw ValidationError(d.name + " is not a GCN dataset");
    return build_gcn_dag(d.M, d.nnz, d.features, s.O ? s.O : d.outputs);
  }
  if (M == 0) {
    const DatasetShape& d = find_dataset(s.dataset);
    if (d.kind != WorkloadKind::cg) throw ValidationError(d.name + " is not a CG dataset");
    M = d.M;
    nnz = d.nnz;
  }
  return build_cg_dag(M, s.N, nnz, s.iters);
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + path + "'");
  f << text;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (const auto& x : split_list(s)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(x, &used));
      if (used != x.size()) throw std::invalid_argument(x);
    } catch (const std::exception&) {
      throw ValidationError("'" + x + "' is not a non-negative integer");
    }
  }
  return out;
}

// ---- classify -------------------------------------------------------------

struct ClassifyArgs {
  Source src;
  std::string out, dot;
  bool table = false;
};

int cmd_classify(const ClassifyArgs& a, std::ostream& out, std::ostream& err) {
  TensorDag dag = load_source(a.src);
  classify(dag);
  emit(a.out, dag_to_json(dag, true).dump(2) + "\n", out);
  if (!a.dot.empty()) emit(a.dot, to_dot(dag), out);
  if (a.table) err << pattern_table(dag);
  for (const auto& d : dag.diagnostics) err << "note: " << d << "\n";
  return kExitOk;
}

// ---- order ----------------------------------------------------------------

struct OrderArgs {
  Source src;
  std::string out, epsilon;
};

int cmd_order(const OrderArgs& a, std::ostream& out) {
  TensorDag dag = load_source(a.src);
  if (!fully_classified(dag)) classify(dag);
  std::vector<std::size_t> eps;
  for (auto v : parse_u64_list(a.epsilon)) eps.push_back(static_cast<std::size_t>(v));
  const LoopOrderAssignment asg = assign_loop_orders(dag, eps);
  emit(a.out, assignment_to_json(asg).dump(2) + "\n", out);
  return kExitOk;
}

// ---- traffic --------------------------------------------------------------

struct TrafficArgs {
  std::string dag_file;
  std::string datasets = "aft02,ecology1,barth5,nasa4704";
  std::string ns = "1,8,16";
  std::string sram = "1,4,16";
  std::string policies = "seq_flex,seq_overflow,gogeta_df,gogeta_map,ideal";
  int iters = 10;
  std::string format = "csv";
  std::string out;
  unsigned jobs = 1;
  bool values_only = false;
  MachineConfig machine;
};

int cmd_traffic(const TrafficArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<double> srams;
  for (const auto& x : split_list(a.sram)) {
    try {
      srams.push_back(std::stod(x));
    } catch (const std::exception&) {
      throw ValidationError("bad --sram-mb value '" + x + "'");
    }
    if (!(srams.back() >= 0)) throw ValidationError("--sram-mb must be non-negative");
  }
  std::vector<Policy> policies;
  for (const auto& p : split_list(a.policies)) policies.push_back(parse_policy(p));
  if (policies.empty()) throw ValidationError("at least one policy is required");
  TrafficOptions opt;
  opt.values_only = a.values_only;

  std::vector<SweepCell> cells;
  if (!a.dag_file.empty()) {
    TensorDag dag = parse_dag_json(slurp(a.dag_file));
    if (!fully_classified(dag)) classify(dag);
    const LoopOrderAssignment asg = assign_loop_orders(dag);
    apply_assignment(dag, asg);
    for (double mb : srams) {
      for (Policy p : policies) {
        MachineConfig cfg = a.machine;
        cfg.sram_bytes = static_cast<std::uint64_t>(std::llround(mb * kMiB));
        cells.push_back({"custom", 0, mb, p, simulate(dag, &asg, cfg, p, opt)});
      }
    }
  } else {
    SweepSpec spec;
    spec.datasets = split_list(a.datasets);
    spec.Ns = parse_u64_list(a.ns);
    spec.sram_mb = srams;
    spec.policies = policies;
    spec.iters = a.iters;
    spec.base = a.machine;
    spec.options = opt;
    spec.jobs = a.jobs;
    cells = run_sweep(spec);
  }

  if (a.format == "json") {
    Json j = Json::array();
    for (const auto& c : cells) {
      Json x = report_to_json(c.report, a.machine.word_bytes);
      x["dataset"] = c.dataset;
      x["N"] = c.N;
      x["sram_mb"] = c.sram_mb;
      j.push_back(std::move(x));
    }
    emit(a.out, j.dump(2) + "\n", out);
  } else {
    emit(a.out, sweep_csv(cells, a.machine.word_bytes), out);
  }
  const auto red = reduction_factors(cells);
  if (!red.empty()) {
    const auto [lo, hi] = std::minmax_element(red.begin(), red.end());
    err << "geomean reduction (seq_flex / gogeta_map): " << geomean(red) << "x over "
        << red.size() << " cells, range " << *lo << "x - " << *hi << "x\n";
  }
  return kExitOk;
}

// ---- solve ----------------------------------------------------------------

struct SolveArgs {
  std::string mtx;
  std::string demo;
  std::size_t m = 64;
  std::uint64_t N = 1;
  double tol = 1e-20;
  int max_iters = 1000;
  double shift = -1;
  std::uint64_t seed = 1;
  std::string b_file, x0_file, out;
  bool no_x = false;
};

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  CsrMatrix A;
  DenseMatrix B;
  if (!a.mtx.empty()) {
    A = coo_to_csr(read_matrix_market(a.mtx));
  } else if (a.demo == "2x2") {
    A = coo_to_csr({2, 2, {{0, 0, 4}, {0, 1, 1}, {1, 0, 1}, {1, 1, 3}}});
    if (a.b_file.empty()) {
      B = DenseMatrix(2, 1);
      B(0, 0) = 1;
      B(1, 0) = 2;
    }
  } else if (a.demo == "identity") {
    CooMatrix c{a.m, a.m, {}};
    for (std::size_t i = 0; i < a.m; ++i) c.entries.push_back({i, i, 1.0});
    A = coo_to_csr(c);
  } else if (a.demo == "random") {
    A = random_spd(a.m, a.seed);
  } else {
    throw ValidationError("solve needs --mtx or --demo {2x2,identity,random}");
  }
  if (a.shift >= 0) A = symmetrize_shift(A, a.shift);
  if (A.rows != A.cols) throw ValidationError("solve needs a square matrix");
  if (!matrix_stats(A).symmetric) {
    throw NumericalError("A is not symmetric; block CG needs SPD input (see --symmetrize-shift)");
  }
  if (!a.b_file.empty()) B = load_dense(a.b_file);
  if (B.rows == 0) {
    B = DenseMatrix(A.rows, a.N);
    std::mt19937_64 rng(a.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& v : B.values) v = u(rng);
  }
  DenseMatrix X0 = a.x0_file.empty() ? DenseMatrix(B.rows, B.cols) : load_dense(a.x0_file);
  CgTrace tr = run_block_cg(A, B, X0, a.tol, a.max_iters);
  Json j = trace_to_json(tr);
  if (a.no_x) j.erase("X");
  emit(a.out, j.dump(2) + "\n", out);
  return kExitOk;
}

// ---- intensity ------------------------------------------------------------

struct IntensityArgs {
  std::string gemm, spmm, mode = "both", out;
  Source src;
  bool chain = false;
};

int cmd_intensity(const IntensityArgs& a, std::ostream& out) {
  std::vector<IntensityRow> rows;
  if (!a.gemm.empty()) {
    auto v = parse_u64_list(a.gemm);
    if (v.size() != 3) throw ValidationError("--gemm takes M,K,N");
    rows.push_back({"gemm", v[0], v[1], v[2], 0, "single", ai_gemm(v[0], v[1], v[2])});
  }
  if (!a.spmm.empty()) {
    auto v = parse_u64_list(a.spmm);
    if (v.size() != 4) throw ValidationError("--spmm takes M,K,N,nnz");
    rows.push_back({"spmm", v[0], v[1], v[2], v[3], "single", ai_spmm(v[0], v[1], v[2], v[3])});
  }
  if (a.chain || (rows.empty())) {
    const std::vector<ChainMode> modes =
        a.mode == "both" ? std::vector<ChainMode>{ChainMode::isolated, ChainMode::fused}
                         : std::vector<ChainMode>{parse_chain_mode(a.mode)};
    if (a.chain || !a.src.dag_file.empty()) {
      const TensorDag dag = load_source(a.src);
      const std::string name = a.src.dag_file.empty() ? a.src.workload : "custom";
      for (auto m : modes) rows.push_back({name, 0, 0, a.src.N, 0, std::string(to_string(m)), ai_chain(dag, m)});
    } else {
      // Default table: every CG dataset, SpMM alone and the full chain.
      for (const auto& d : dataset_catalog()) {
        if (d.kind != WorkloadKind::cg) continue;
        for (std::uint64_t N : {1, 8, 16, 32, 64}) {
          rows.push_back({d.name + ":spmm", d.M, d.M, N, d.nnz, "single", ai_spmm(d.M, d.M, N, d.nnz)});
          const TensorDag dag = build_cg_dag(d.M, N, d.nnz, a.src.iters);
          for (auto m : modes) {
            rows.push_back({d.name + ":cg", d.M, d.M, N, d.nnz, std::string(to_string(m)), ai_chain(dag, m)});
          }
        }
      }
    }
  }
  emit(a.out, intensity_csv(rows), out);
  return kExitOk;
}

// ---- ingest ---------------------------------------------------------------

struct IngestArgs {
  std::vector<std::string> paths;
  std::string out;
};

int cmd_ingest(const IngestArgs& a, std::ostream& out) {
  std::vector<std::string> files;
  for (const auto& p : a.paths) {
    if (fs::is_directory(p)) {
      std::vector<std::string> found;
      for (const auto& e : fs::recursive_directory_iterator(p)) {
        if (e.is_regular_file() && e.path().extension() == ".mtx") found.push_back(e.path().string());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  std::ostringstream os;
  os << "file,M,nnz,nz_av,symmetric\n";
  for (const auto& f : files) {
    const auto st = matrix_stats(coo_to_csr(read_matrix_market(f)));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", st.nz_av);
    os << f << ',' << st.M << ',' << st.nnz << ',' << buf << ',' << (st.symmetric ? "true" : "false")
       << '\n';
  }
  emit(a.out, os.str(), out);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"chainflow: inter-operation reuse analysis for Einsum chains"};
  app.require_subcommand(1);

  ClassifyArgs ca;
  auto* classify_cmd = app.add_subcommand("classify", "assign reuse patterns to every edge");
  add_source_options(classify_cmd, ca.src, 2);
  classify_cmd->add_option("--out", ca.out, "annotated DAG JSON (default stdout)");
  classify_cmd->add_option("--dot", ca.dot, "Graphviz output file");
  classify_cmd->add_flag("--table", ca.table, "print the edge table to stderr");

  OrderArgs oa;
  auto* order_cmd = app.add_subcommand("order", "assign loop orders");
  add_source_options(order_cmd, oa.src, 2);
  order_cmd->add_option("--out", oa.out, "assignment JSON (default stdout)");
  order_cmd->add_option("--epsilon", oa.epsilon, "comma-separated swizzle budgets, e.g. 0,1,2");

  TrafficArgs ta;
  auto* traffic_cmd = app.add_subcommand("traffic", "DRAM and NoC traffic sweep");
  traffic_cmd->add_option("--dag", ta.dag_file, "custom DAG JSON instead of catalog datasets");
  traffic_cmd->add_option("--dataset,--datasets", ta.datasets, "comma-separated catalog names");
  traffic_cmd->add_option("--n", ta.ns, "comma-separated RHS counts");
  traffic_cmd->add_option("--sram-mb", ta.sram, "comma-separated SRAM sizes in MiB");
  traffic_cmd->add_option("--policies", ta.policies, "comma-separated policies");
  traffic_cmd->add_option("--iters", ta.iters, "unrolled CG iterations")->check(CLI::PositiveNumber);
  traffic_cmd->add_option("--format", ta.format)->check(CLI::IsMember({"csv", "json"}));
  traffic_cmd->add_option("--out", ta.out, "report file (default stdout)");
  traffic_cmd->add_option("--jobs", ta.jobs, "worker threads")->check(CLI::PositiveNumber);
  traffic_cmd->add_flag("--values-only", ta.values_only, "count sparse values only, no indices");
  traffic_cmd->add_option("--clusters", ta.machine.clusters)->check(CLI::PositiveNumber);
  traffic_cmd->add_option("--pes", ta.machine.pes_per_cluster)->check(CLI::PositiveNumber);
  traffic_cmd->add_option("--rf-bytes", ta.machine.rf_bytes_per_pe);
  traffic_cmd->add_option("--word-bytes", ta.machine.word_bytes)->check(CLI::PositiveNumber);

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "run block CG");
  solve_cmd->add_option("--mtx", sa.mtx, "Matrix Market file");
  solve_cmd->add_option("--demo", sa.demo, "2x2, identity or random")
      ->check(CLI::IsMember({"2x2", "identity", "random"}));
  solve_cmd->add_option("--m", sa.m, "demo size")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--n", sa.N, "right-hand sides")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--tol", sa.tol, "threshold on diag(R^T R)");
  solve_cmd->add_option("--max-iters", sa.max_iters)->check(CLI::PositiveNumber);
  solve_cmd->add_option("--symmetrize-shift", sa.shift, "preprocess A <- (A+A^T)/2 + shift*I");
  solve_cmd->add_option("--seed", sa.seed, "seed for random demo matrix and B");
  solve_cmd->add_option("--b", sa.b_file, "dense B (.csv or binary)");
  solve_cmd->add_option("--x0", sa.x0_file, "dense X0 (.csv or binary)");
  solve_cmd->add_option("--out", sa.out, "trace JSON (default stdout)");
  solve_cmd->add_flag("--no-x", sa.no_x, "omit X from the trace");

  IntensityArgs ia;
  auto* intensity_cmd = app.add_subcommand("intensity", "best-case arithmetic intensity");
  add_source_options(intensity_cmd, ia.src, 1);
  intensity_cmd->add_option("--gemm", ia.gemm, "M,K,N");
  intensity_cmd->add_option("--spmm", ia.spmm, "M,K,N,nnz");
  intensity_cmd->add_flag("--chain", ia.chain, "chain intensity of the selected workload");
  intensity_cmd->add_option("--mode", ia.mode)->check(CLI::IsMember({"isolated", "fused", "both"}));
  intensity_cmd->add_option("--out", ia.out, "CSV file (default stdout)");

  IngestArgs ga;
  auto* ingest_cmd = app.add_subcommand("ingest", "Matrix Market statistics");
  ingest_cmd->add_option("paths", ga.paths, "files or directories")->required();
  ingest_cmd->add_option("--out", ga.out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (*classify_cmd) return cmd_classify(ca, out, err);
    if (*order_cmd) return cmd_order(oa, out);
    if (*traffic_cmd) return cmd_traffic(ta, out, err);
    if (*solve_cmd) return cmd_solve(sa, out);
    if (*intensity_cmd) return cmd_intensity(ia, out);
    if (*ingest_cmd) return cmd_ingest(ga, out);
  } catch (const NoAssignmentError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNoAssignment;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const MissingAnnotationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const UnclassifiedError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitValidation;
}

}  // namespace chainflow
