#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pacrb/config.hpp"
#include "pacrb/crb.hpp"
#include "pacrb/experiments.hpp"
#include "pacrb/placement.hpp"
#include "pacrb/rng.hpp"
#include "pacrb/validation.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTolerance = 1;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

/// 12 significant digits; divergent/infinite cells render as the literal
/// "inf".
std::string render(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

/// Single-writer atomic output: stage the whole payload, then temp + rename.
void write_atomic(const std::string& path, const std::string& payload) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::ios_base::failure("cannot open for write: " + tmp);
    out << payload;
    out.flush();
    if (!out) throw std::ios_base::failure("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw std::ios_base::failure("rename to " + path + " failed: " +
                                 ec.message());
  }
}

void apply_thread_override() {
#ifdef _OPENMP
  if (const char* env = std::getenv("PACRB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
}

int cmd_crb(const pacrb::RunConfig& cfg, pacrb::ExecutionPolicy policy) {
  const pacrb::TransmitterLayout tx = cfg.transmitter(policy);
  const pacrb::CrbReport report =
      pacrb::closed_form_crb(tx, cfg.receiver(), cfg.target(), cfg.budget());
  std::cout << "i = " << render(report.i) << "\n"
            << "s = " << render(report.s) << "\n"
            << "k = " << render(report.k) << "\n"
            << "schur_det = " << render(report.schur_det) << "\n"
            << "sqrt_crb_r_m = " << render(std::sqrt(report.crb_r)) << "\n"
            << "sqrt_crb_theta_deg = "
            << render(pacrb::rad_to_deg(std::sqrt(report.crb_theta))) << "\n"
            << "divergent = " << (report.divergent ? "true" : "false")
            << "\n";
  return kExitOk;
}

int cmd_sweep(const pacrb::RunConfig& cfg, pacrb::ExecutionPolicy policy,
              const std::string& output) {
  const pacrb::SweepResult result =
      pacrb::run_sweep(cfg.sweep_spec(), policy);

  std::ostringstream csv;
  csv << "label,N,sqrt_crb_r_m,sqrt_crb_theta_deg,divergent_fraction\n";
  for (const pacrb::SweepRow& row : result.rows) {
    csv << row.label << ',' << row.n << ',' << render(row.mean_sqrt_crb_r)
        << ',' << render(row.mean_sqrt_crb_theta_deg) << ','
        << render(row.divergent_fraction) << '\n';
  }
  write_atomic(output, csv.str());

  // Per-label plot data, one file per metric, rows ascending in N.
  const std::filesystem::path base = std::filesystem::path(output).parent_path();
  std::string current_label;
  std::ostringstream dat_r;
  std::ostringstream dat_theta;
  auto flush_label = [&]() {
    if (current_label.empty()) return;
    write_atomic((base / (current_label + "_r.dat")).string(), dat_r.str());
    write_atomic((base / (current_label + "_theta.dat")).string(),
                 dat_theta.str());
    dat_r.str("");
    dat_theta.str("");
  };
  for (const pacrb::SweepRow& row : result.rows) {
    if (row.label != current_label) {
      flush_label();
      current_label = row.label;
    }
    dat_r << row.n << ' ' << render(row.mean_sqrt_crb_r) << '\n';
    dat_theta << row.n << ' ' << render(row.mean_sqrt_crb_theta_deg) << '\n';
  }
  flush_label();
  std::cout << "wrote " << result.rows.size() << " rows to " << output
            << "\n";
  return kExitOk;
}

int cmd_optimize(const pacrb::RunConfig& cfg, pacrb::ExecutionPolicy policy,
                 const std::string& output) {
  const pacrb::PlacementProblem problem = cfg.placement_problem();
  if (!problem.feasible()) {
    std::cerr << "error: infeasible placement: " << problem.m_antennas
              << " elements at minimum spacing "
              << render(problem.min_spacing())
              << " m exceed the waveguide length "
              << render(problem.tx.waveguide_length) << " m\n";
    return kExitValidation;
  }
  const pacrb::PlacementResult result = pacrb::optimize_placement(
      problem, pacrb::derive_seed(cfg.seed, pacrb::fnv1a("config-transmitter"),
                                  0),
      policy);

  std::ostringstream out;
  for (double y : result.positions) out << render(y) << '\n';
  out << "# {\"objective\": \"" << cfg.placement_objective
      << "\", \"objective_value\": " << render(result.objective_value)
      << ", \"restarts\": " << result.restarts_used
      << ", \"iterations\": " << result.iterations
      << ", \"seed\": " << cfg.seed << "}\n";
  write_atomic(output, out.str());
  std::cout << "wrote " << result.positions.size() << " positions to "
            << output << " (objective " << render(result.objective_value)
            << ")\n";
  return kExitOk;
}

int cmd_validate(const pacrb::RunConfig& cfg, double fault_scale) {
  const pacrb::FdCheckResult fd =
      pacrb::fd_jacobian_check(cfg.fd_configs, cfg.seed, fault_scale);
  const pacrb::FimCheckResult fim =
      pacrb::fim_agreement_check(cfg.fim_configs, cfg.seed);
  std::cout << "fd_configs = " << fd.configs << "\n"
            << "fd_max_rel_error = " << render(fd.max_rel_error)
            << " (tolerance " << render(pacrb::kFdTolerance) << ")\n"
            << "fim_configs = " << fim.configs << "\n"
            << "fim_divergent_skipped = " << fim.divergent << "\n"
            << "fim_max_rel_error = " << render(fim.max_rel_error)
            << " (tolerance " << render(pacrb::kFimTolerance) << ")\n";
  const bool ok = fd.max_rel_error <= pacrb::kFdTolerance &&
                  fim.max_rel_error <= pacrb::kFimTolerance;
  std::cout << (ok ? "validation passed" : "validation FAILED") << "\n";
  return ok ? kExitOk : kExitTolerance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cramer-Rao bound calculator for bistatic pinching-antenna "
               "sensing arrays"};
  app.require_subcommand(1);
  app.fallthrough();  // global -c/--serial may follow the subcommand

  std::string config_path;
  bool serial = false;
  app.add_option("-c,--config", config_path,
                 "Configuration file (defaults apply when omitted)");
  app.add_flag("--serial", serial, "Disable the parallel execution path");

  auto* crb = app.add_subcommand("crb", "Closed-form CRB report for one target");
  double opt_r = 0.0, opt_theta = 0.0, opt_freq = 0.0;
  int opt_n = 0;
  std::string opt_rx_mode;
  crb->add_option("--target-r", opt_r, "Target range override (m)");
  crb->add_option("--target-theta-deg", opt_theta,
                  "Target direction override (deg)");
  crb->add_option("--rx-mode", opt_rx_mode,
                  "Receiver model override: exact | plane-wave");
  crb->add_option("--freq", opt_freq, "Carrier frequency override (GHz)");
  crb->add_option("--n", opt_n, "Receive element count override");

  auto* sweep = app.add_subcommand("sweep", "Monte Carlo CRB sweep over N");
  std::string sweep_out = "sweep.csv";
  sweep->add_option("-o,--output", sweep_out, "CSV output path");

  auto* optimize =
      app.add_subcommand("optimize", "Optimize transmit element placement");
  std::string opt_out = "placement.txt";
  optimize->add_option("-o,--output", opt_out, "Placement output path");

  auto* validate = app.add_subcommand(
      "validate", "Run the derivative and Fisher-information cross-checks");
  double fault_scale = 0.0;
  validate->add_option("--inject-fault", fault_scale,
                       "Perturb the analytic Jacobian (testing only)")
      ->group("");  // hidden

  // Shared numeric overrides (applied to whichever subcommand runs).
  std::uint64_t opt_seed = 0;
  int opt_samples = 0, opt_m = 0, opt_restarts = 0;
  int opt_fd = -1, opt_fim = -1;
  for (CLI::App* sub : {crb, sweep, optimize, validate}) {
    sub->add_option("--seed", opt_seed, "Experiment seed");
  }
  sweep->add_option("--samples", opt_samples, "Monte Carlo samples per cell");
  optimize->add_option("--m", opt_m, "Number of transmit elements");
  optimize->add_option("--restarts", opt_restarts, "Optimizer restarts");
  validate->add_option("--fd-configs", opt_fd,
                       "Finite-difference grid size");
  validate->add_option("--fim-configs", opt_fim,
                       "Fisher-information grid size");

  CLI11_PARSE(app, argc, argv);

  apply_thread_override();
  const pacrb::ExecutionPolicy policy = serial
                                            ? pacrb::ExecutionPolicy::Serial
                                            : pacrb::ExecutionPolicy::Parallel;
  try {
    pacrb::RunConfig cfg;
    if (!config_path.empty()) cfg = pacrb::load_config(config_path);

    for (CLI::App* sub : {crb, sweep, optimize, validate}) {
      if (sub->parsed() && sub->count("--seed")) cfg.seed = opt_seed;
    }
    if (crb->parsed()) {
      if (crb->count("--target-r")) cfg.target_range_m = opt_r;
      if (crb->count("--target-theta-deg")) cfg.target_direction_deg = opt_theta;
      if (crb->count("--rx-mode")) cfg.rx_mode = opt_rx_mode;
      if (crb->count("--freq")) cfg.frequency_ghz = opt_freq;
      if (crb->count("--n")) cfg.rx_n = opt_n;
      cfg.validate();
      return cmd_crb(cfg, policy);
    }
    if (sweep->parsed()) {
      if (sweep->count("--samples")) cfg.sweep_samples = opt_samples;
      cfg.validate();
      return cmd_sweep(cfg, policy, sweep_out);
    }
    if (optimize->parsed()) {
      if (optimize->count("--m")) cfg.tx_m = opt_m;
      if (optimize->count("--restarts")) cfg.placement_restarts = opt_restarts;
      cfg.validate();
      return cmd_optimize(cfg, policy, opt_out);
    }
    if (validate->parsed()) {
      if (opt_fd >= 0) cfg.fd_configs = opt_fd;
      if (opt_fim >= 0) cfg.fim_configs = opt_fim;
      cfg.validate();
      return cmd_validate(cfg, fault_scale);
    }
  } catch (const std::ios_base::failure& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
