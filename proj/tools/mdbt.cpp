#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mdbt/errors.hpp"
#include "mdbt/experiment.hpp"
#include "mdbt/linalg.hpp"
#include "mdbt/oracle.hpp"
#include "mdbt/svg.hpp"
#include "mdbt/trace.hpp"

namespace {

constexpr int kExitBadInput = 2;

mdbt::linalg::DenseMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  std::vector<double> entries;
  double v = 0.0;
  while (in >> v) entries.push_back(v);
  std::size_t n = 0;
  while (n * n < entries.size()) ++n;
  if (n == 0 || n * n != entries.size())
    throw std::runtime_error("matrix file must hold n*n whitespace-separated numbers");
  mdbt::linalg::DenseMatrix m(n);
  m.a = std::move(entries);
  return m;
}

int cmd_run(const std::string& config_path) {
  mdbt::ExperimentConfig cfg;
  try {
    cfg = mdbt::load_config_file(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitBadInput;
  }
  try {
    const auto results = mdbt::run_experiment(cfg);
    for (const auto& r : results) {
      std::printf("%-20s %-18s f=%.12g  oracle_calls=%llu  -> %s\n",
                  r.method.c_str(), mdbt::status_name(r.status).c_str(), r.f_final,
                  static_cast<unsigned long long>(r.oracle_calls),
                  r.trace_path.c_str());
    }
  } catch (const mdbt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int cmd_oracle(const std::string& matrix_path, double tol) {
  try {
    const auto A = read_matrix_file(matrix_path);
    const auto report = mdbt::oracle::optimal_diag_precond(A, tol);
    std::printf("method   %s\n", report.method.c_str());
    std::printf("p_star  ");
    for (double p : report.p_star) std::printf(" %.10g", p);
    std::printf("\nkappa_star %.10g\n", report.kappa_star);
    std::printf("residual   %.3g\n", report.residual);
    std::printf("L          %.10g\n", mdbt::oracle::smoothness_L(A));
  } catch (const std::exception& e) {
    std::cerr << "oracle error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return 0;
}

int cmd_plot(const std::vector<std::string>& trace_paths, const std::string& out_path) {
  try {
    std::vector<mdbt::RunTrace> traces;
    std::vector<std::string> labels;
    for (const auto& p : trace_paths) {
      traces.push_back(mdbt::read_trace_file(p));
      const std::string* m = traces.back().find_meta("method");
      labels.push_back(m ? *m : std::filesystem::path(p).stem().string());
    }
    const std::string svg = mdbt::render_convergence_svg(traces, labels);
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << svg;
  } catch (const std::exception& e) {
    std::cerr << "plot error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return 0;
}

int cmd_ls_datasets(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    std::cerr << "not a directory: " << dir << "\n";
    return kExitBadInput;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::printf("%-28s %8s %8s %10s %s\n", "file", "rows", "cols", "nnz", "labels");
  for (const auto& f : files) {
    try {
      mdbt::Dataset ds;
      bool classification = true;
      try {
        ds = mdbt::parse_libsvm_file(f.string(), mdbt::Task::classification);
      } catch (const mdbt::ParseError&) {
        ds = mdbt::parse_libsvm_file(f.string(), mdbt::Task::regression);
        classification = false;
      }
      std::printf("%-28s %8zu %8zu %10zu %s\n", f.filename().string().c_str(),
                  ds.X.rows, ds.X.cols, ds.X.nnz(),
                  classification ? "binary" : "real");
    } catch (const std::exception& e) {
      std::printf("%-28s  (unreadable: %s)\n", f.filename().string().c_str(), e.what());
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"diagonal-preconditioner search benchmark harness"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "run an experiment config, one trace CSV per method");
  run_cmd->add_option("config", config_path, "experiment config file")->required();

  std::string matrix_path;
  double oracle_tol = 1e-6;
  auto* oracle_cmd =
      app.add_subcommand("oracle", "optimal diagonal preconditioner of a small symmetric matrix");
  oracle_cmd->add_option("matrix", matrix_path, "text file with n*n entries")->required();
  oracle_cmd->add_option("--tol", oracle_tol, "search tolerance");

  std::vector<std::string> trace_paths;
  std::string out_path;
  auto* plot_cmd = app.add_subcommand("plot", "render trace CSVs as an SVG convergence plot");
  plot_cmd->add_option("traces", trace_paths, "trace CSV files")->required();
  plot_cmd->add_option("--out", out_path, "output SVG path")->required();

  std::string data_dir = "datasets";
  auto* ls_cmd = app.add_subcommand("ls-datasets", "list parseable datasets in a directory");
  ls_cmd->add_option("dir", data_dir, "directory to scan");

  CLI11_PARSE(app, argc, argv);

  if (run_cmd->parsed()) return cmd_run(config_path);
  if (oracle_cmd->parsed()) return cmd_oracle(matrix_path, oracle_tol);
  if (plot_cmd->parsed()) return cmd_plot(trace_paths, out_path);
  if (ls_cmd->parsed()) return cmd_ls_datasets(data_dir);
  return 1;
}
