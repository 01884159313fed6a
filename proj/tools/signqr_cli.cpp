#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "signqr/experiment.hpp"
#include "signqr/householder.hpp"
#include "signqr/io.hpp"
#include "signqr/metrics.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_parse_error = 2;
constexpr int exit_dimension_error = 3;
constexpr int exit_output_error = 4;

struct QrOptions {
  std::string input;
  std::string policy = "stable";
  int precision = 64;
  bool print_q = false;
};

struct SweepOptions {
  long m = 3;
  long n = 2;
  int p_min = 1;
  int p_max = 16;
  std::uint64_t seed = 1;
  int precision = 64;
  std::string csv_path;
  std::string svg_path;
};

struct ProbeOptions {
  long trials = 100;
  long m = 3;
  long n = 2;
  std::uint64_t seed = 1;
  int precision = 64;
};

template <class F>
int with_precision(int precision, F&& f) {
  if (precision == 32) return f(float{});
  return f(double{});
}

int write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write \"" << path << "\"\n";
    return exit_output_error;
  }
  out << content;
  out.flush();
  if (!out) {
    std::cerr << "write failed for \"" << path << "\"\n";
    return exit_output_error;
  }
  return exit_ok;
}

template <class Scalar>
int run_qr(const QrOptions& opt) {
  signqr::Matrix<Scalar> a;
  try {
    a = signqr::read_matrix_file<Scalar>(opt.input);
  } catch (const signqr::MatrixParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return exit_parse_error;
  }
  const auto policy =
      opt.policy == "wrong" ? signqr::SignPolicy::wrong : signqr::SignPolicy::stable;
  try {
    const auto f = signqr::qr_factorize(a, policy);
    const auto q = signqr::form_q(f);
    const auto report = signqr::evaluate(a, q, f.r);
    std::cout << "policy = " << signqr::policy_name(policy) << "\n";
    std::cout << "R =\n" << signqr::format_matrix(f.r);
    if (opt.print_q) std::cout << "Q =\n" << signqr::format_matrix(q);
    std::cout << "backward_error_2norm = " << signqr::format_scalar(report.backward_error_2norm)
              << "\n";
    std::cout << "backward_error_frobenius = "
              << signqr::format_scalar(report.backward_error_frobenius) << "\n";
    std::cout << "orthogonality_loss = " << signqr::format_scalar(report.orthogonality_loss)
              << "\n";
    std::cout << "first_column_error = " << signqr::format_scalar(report.first_column_error)
              << "\n";
  } catch (const std::invalid_argument& e) {
    std::cerr << "dimension error: " << e.what() << "\n";
    return exit_dimension_error;
  }
  return exit_ok;
}

template <class Scalar>
int run_sweep(const SweepOptions& opt) {
  signqr::ExperimentConfig cfg;
  cfg.m = opt.m;
  cfg.n = opt.n;
  cfg.p_min = opt.p_min;
  cfg.p_max = opt.p_max;
  cfg.seed = opt.seed;
  cfg.precision = opt.precision == 32 ? signqr::Precision::binary32 : signqr::Precision::binary64;
  std::vector<signqr::SweepRecord<Scalar>> records;
  try {
    records = signqr::run_sweep<Scalar>(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "dimension error: " << e.what() << "\n";
    return exit_dimension_error;
  }
  const std::string csv = signqr::sweep_csv(records);
  if (opt.csv_path.empty()) {
    std::cout << csv;
  } else {
    if (const int rc = write_file(opt.csv_path, csv); rc != exit_ok) return rc;
  }
  if (!opt.svg_path.empty()) {
    if (const int rc = write_file(opt.svg_path, signqr::sweep_svg(records)); rc != exit_ok)
      return rc;
  }
  return exit_ok;
}

template <class Scalar>
int run_probe(const ProbeOptions& opt) {
  signqr::ExperimentConfig cfg;
  cfg.m = opt.m;
  cfg.n = opt.n;
  cfg.seed = opt.seed;
  cfg.precision = opt.precision == 32 ? signqr::Precision::binary32 : signqr::Precision::binary64;
  signqr::ProbeSummary<Scalar> summary;
  try {
    summary = signqr::probe_corpus<Scalar>(cfg, opt.trials);
  } catch (const std::invalid_argument& e) {
    std::cerr << "dimension error: " << e.what() << "\n";
    return exit_dimension_error;
  }
  const auto row = [](const char* key, const std::string& value) {
    std::cout << key << std::string(18 - std::string(key).size(), ' ') << "= " << value << "\n";
  };
  row("trials", std::to_string(summary.trials));
  row("max_err_stable", signqr::format_scalar(summary.max_err_stable));
  row("max_err_wrong", signqr::format_scalar(summary.max_err_wrong));
  row("err_wrong_q50", signqr::format_scalar(summary.err_wrong_q50));
  row("err_wrong_q90", signqr::format_scalar(summary.err_wrong_q90));
  row("err_wrong_q99", signqr::format_scalar(summary.err_wrong_q99));
  row("conjecture_margin", signqr::format_scalar(summary.conjecture_margin));
  // machine-readable line, same field order as above
  std::cout << summary.trials << ',' << signqr::format_scalar(summary.max_err_stable) << ','
            << signqr::format_scalar(summary.max_err_wrong) << ','
            << signqr::format_scalar(summary.err_wrong_q50) << ','
            << signqr::format_scalar(summary.err_wrong_q90) << ','
            << signqr::format_scalar(summary.err_wrong_q99) << ','
            << signqr::format_scalar(summary.conjecture_margin) << "\n";
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Householder QR with a selectable reflector sign, plus a sweep/probe harness"};
  app.require_subcommand(1);

  QrOptions qr_opt;
  auto* qr_cmd = app.add_subcommand("qr", "factor a matrix from a text file and report errors");
  qr_cmd->add_option("input", qr_opt.input, "matrix file: header \"m n\", then m rows of n values")
      ->required();
  qr_cmd->add_option("--policy", qr_opt.policy, "reflector sign policy")
      ->check(CLI::IsMember({"stable", "wrong"}))
      ->capture_default_str();
  qr_cmd->add_option("--precision", qr_opt.precision, "working precision in bits")
      ->check(CLI::IsMember({64, 32}))
      ->capture_default_str();
  qr_cmd->add_flag("--print-q", qr_opt.print_q, "also print the explicit Q factor");

  SweepOptions sweep_opt;
  auto* sweep_cmd =
      app.add_subcommand("sweep", "run the delta = 10^-p sweep and emit CSV (and optionally SVG)");
  sweep_cmd->add_option("--m", sweep_opt.m, "rows")->capture_default_str();
  sweep_cmd->add_option("--n", sweep_opt.n, "columns")->capture_default_str();
  sweep_cmd->add_option("--p-min", sweep_opt.p_min, "smallest exponent p")->capture_default_str();
  sweep_cmd->add_option("--p-max", sweep_opt.p_max, "largest exponent p")->capture_default_str();
  sweep_cmd->add_option("--seed", sweep_opt.seed, "random seed")->capture_default_str();
  sweep_cmd->add_option("--precision", sweep_opt.precision, "working precision in bits")
      ->check(CLI::IsMember({64, 32}))
      ->capture_default_str();
  sweep_cmd->add_option("--csv", sweep_opt.csv_path, "write CSV here instead of standard output");
  sweep_cmd->add_option("--svg", sweep_opt.svg_path, "write a log-log scatter plot here");

  ProbeOptions probe_opt;
  auto* probe_cmd =
      app.add_subcommand("probe", "factor a random corpus of norm-1 matrices under both policies");
  probe_cmd->add_option("--trials", probe_opt.trials, "number of matrices")->capture_default_str();
  probe_cmd->add_option("--m", probe_opt.m, "largest row count")->capture_default_str();
  probe_cmd->add_option("--n", probe_opt.n, "largest column count")->capture_default_str();
  probe_cmd->add_option("--seed", probe_opt.seed, "random seed")->capture_default_str();
  probe_cmd->add_option("--precision", probe_opt.precision, "working precision in bits")
      ->check(CLI::IsMember({64, 32}))
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (qr_cmd->parsed())
    return with_precision(qr_opt.precision, [&](auto tag) {
      return run_qr<decltype(tag)>(qr_opt);
    });
  if (sweep_cmd->parsed())
    return with_precision(sweep_opt.precision, [&](auto tag) {
      return run_sweep<decltype(tag)>(sweep_opt);
    });
  if (probe_cmd->parsed())
    return with_precision(probe_opt.precision, [&](auto tag) {
      return run_probe<decltype(tag)>(probe_opt);
    });
  return exit_ok;
}
