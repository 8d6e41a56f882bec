// End-to-end tests for the command-line tool. Invoked with the binary path
// as argv[1]; exercises exit codes, file outputs, and determinism through
// the real process boundary.
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;
int g_checks = 0;

#define CHECK_MSG(cond, msg)                                              \
  do {                                                                    \
    ++g_checks;                                                           \
    if (!(cond)) {                                                        \
      ++g_failures;                                                       \
      std::cerr << __FILE__ << ":" << __LINE__ << ": FAILED: " << (msg)   \
                << "\n";                                                  \
    }                                                                     \
  } while (0)

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path g_tmp;
std::string g_binary;

RunResult run(const std::string& args) {
  const fs::path out = g_tmp / "stdout.txt";
  const fs::path err = g_tmp / "stderr.txt";
  const std::string cmd =
      g_binary + " " + args + " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

// Extracts "key = value" from the crb report.
std::string report_value(const std::string& out, const std::string& key) {
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + " = ", 0) == 0) return line.substr(key.size() + 3);
  }
  return "";
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

void test_crb_basic() {
  const RunResult r = run("crb");
  CHECK_MSG(r.exit_code == 0, "crb default exits 0 (got " +
                                  std::to_string(r.exit_code) + ")");
  CHECK_MSG(report_value(r.out, "divergent") == "false",
            "default crb is non-divergent");
  const double sr = std::atof(report_value(r.out, "sqrt_crb_r_m").c_str());
  const double st =
      std::atof(report_value(r.out, "sqrt_crb_theta_deg").c_str());
  CHECK_MSG(sr > 0.0 && std::isfinite(sr), "sqrt_crb_r_m finite positive");
  CHECK_MSG(st > 0.0 && std::isfinite(st),
            "sqrt_crb_theta_deg finite positive");
}

void test_crb_plane_wave_divergence() {
  const RunResult r = run("crb --rx-mode plane-wave");
  CHECK_MSG(r.exit_code == 0, "plane-wave crb exits 0");
  CHECK_MSG(report_value(r.out, "divergent") == "true",
            "plane-wave receiver diverges");
  CHECK_MSG(report_value(r.out, "sqrt_crb_r_m") == "inf",
            "divergent range bound renders as 'inf'");
  CHECK_MSG(report_value(r.out, "sqrt_crb_theta_deg") == "inf",
            "divergent angle bound renders as 'inf'");
}

void test_crb_validation_errors() {
  const RunResult bad_freq = run("crb --freq -5");
  CHECK_MSG(bad_freq.exit_code == 2, "negative frequency exits 2");
  CHECK_MSG(contains(bad_freq.err, "frequency_ghz"),
            "error names the frequency field");

  const fs::path cfg = g_tmp / "broken.cfg";
  write_file(cfg, "[system]\nfrequency_ghz 27\n");
  const RunResult bad_cfg = run("crb -c " + cfg.string());
  CHECK_MSG(bad_cfg.exit_code == 2, "malformed config exits 2");
  CHECK_MSG(contains(bad_cfg.err, "broken.cfg:2"),
            "parse error is anchored to source:line");

  const RunResult missing = run("crb -c " + (g_tmp / "missing.cfg").string());
  CHECK_MSG(missing.exit_code == 3, "missing config file exits 3");
}

const char* kSmallSweepCfg =
    "[sweep]\n"
    "n_values = 2, 4\n"
    "samples = 8\n"
    "[placement]\n"
    "restarts = 2\n"
    "grid_per_axis = 4\n";

void test_sweep_outputs() {
  const fs::path cfg = g_tmp / "sweep.cfg";
  write_file(cfg, kSmallSweepCfg);
  const fs::path csv = g_tmp / "sweep.csv";
  const RunResult r =
      run("sweep -c " + cfg.string() + " -o " + csv.string());
  CHECK_MSG(r.exit_code == 0, "sweep exits 0");

  const std::vector<std::string> rows = lines_of(slurp(csv));
  CHECK_MSG(!rows.empty() &&
                rows[0] ==
                    "label,N,sqrt_crb_r_m,sqrt_crb_theta_deg,divergent_fraction",
            "CSV header is the documented contract");
  // 4 default transmitters x 2 swept N values.
  CHECK_MSG(rows.size() == 1 + 4 * 2,
            "sweep CSV has one row per (transmitter, N) cell, got " +
                std::to_string(rows.size()));

  for (const std::string& label : {"PAS_4", "ULA_4", "PAS_8", "ULA_8"}) {
    for (const char* metric : {"_r.dat", "_theta.dat"}) {
      const fs::path dat = g_tmp / (label + std::string(metric));
      CHECK_MSG(fs::exists(dat), "plot data exists: " + dat.string());
      const std::vector<std::string> pts = lines_of(slurp(dat));
      CHECK_MSG(pts.size() == 2, "plot data has one point per N");
      int prev_n = 0;
      for (const std::string& pt : pts) {
        std::istringstream in(pt);
        int n = 0;
        double v = 0.0;
        in >> n >> v;
        CHECK_MSG(n > prev_n, "plot rows ascend in N");
        CHECK_MSG(v > 0.0, "plot values positive");
        prev_n = n;
      }
    }
  }

  // Re-running the identical sweep reproduces the CSV byte for byte.
  const fs::path csv2 = g_tmp / "sweep2.csv";
  const RunResult r2 =
      run("sweep -c " + cfg.string() + " -o " + csv2.string());
  CHECK_MSG(r2.exit_code == 0, "second sweep exits 0");
  CHECK_MSG(slurp(csv) == slurp(csv2), "sweep output is deterministic");

  // The serial path produces the same bytes as the parallel one.
  const fs::path csv3 = g_tmp / "sweep3.csv";
  const RunResult r3 =
      run("sweep -c " + cfg.string() + " --serial -o " + csv3.string());
  CHECK_MSG(r3.exit_code == 0, "serial sweep exits 0");
  CHECK_MSG(slurp(csv) == slurp(csv3), "serial/parallel sweep bytes agree");
}

void test_optimize_outputs() {
  const fs::path cfg = g_tmp / "opt.cfg";
  write_file(cfg, kSmallSweepCfg);
  const fs::path out = g_tmp / "placement.txt";
  const RunResult r = run("optimize -c " + cfg.string() + " --m 4 -o " +
                          out.string());
  CHECK_MSG(r.exit_code == 0, "optimize exits 0");

  const std::vector<std::string> rows = lines_of(slurp(out));
  CHECK_MSG(rows.size() == 5, "4 positions + 1 metadata line");
  std::vector<double> y;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i)
    y.push_back(std::atof(rows[i].c_str()));
  double sum = 0.0;
  bool sorted = true, spaced = true, bounded = true;
  const double lambda = 299792458.0 / 27e9;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sum += y[i];
    bounded = bounded && std::abs(y[i]) <= 5.0 + 1e-9;
    if (i > 0) {
      sorted = sorted && y[i] > y[i - 1];
      spaced = spaced && (y[i] - y[i - 1] >= lambda / 2.0 - 1e-9);
    }
  }
  CHECK_MSG(std::abs(sum) < 1e-8, "positions are zero-mean");
  CHECK_MSG(sorted && spaced && bounded,
            "positions sorted, spaced, and inside the waveguide");
  CHECK_MSG(!rows.empty() && rows.back().rfind("# {", 0) == 0,
            "metadata line is a JSON comment");
  CHECK_MSG(contains(rows.back(), "\"objective_value\""),
            "metadata records the objective value");

  const fs::path out2 = g_tmp / "placement2.txt";
  const RunResult r2 = run("optimize -c " + cfg.string() + " --m 4 -o " +
                           out2.string());
  CHECK_MSG(r2.exit_code == 0, "second optimize exits 0");
  CHECK_MSG(slurp(out) == slurp(out2), "optimize output is deterministic");

  const RunResult infeasible =
      run("optimize --m 2000 -o " + (g_tmp / "x.txt").string());
  CHECK_MSG(infeasible.exit_code == 2, "infeasible placement exits 2");
  CHECK_MSG(contains(infeasible.err, "infeasible"),
            "infeasible placement reported on stderr");
}

void test_validate() {
  const RunResult ok = run("validate --fd-configs 40 --fim-configs 20");
  CHECK_MSG(ok.exit_code == 0, "validate exits 0 (got " +
                                   std::to_string(ok.exit_code) + ")");
  CHECK_MSG(contains(ok.out, "validation passed"), "validate reports pass");

  const RunResult fault = run(
      "validate --fd-configs 40 --fim-configs 1 --inject-fault 1e-3");
  CHECK_MSG(fault.exit_code == 1, "injected Jacobian fault exits 1");
  CHECK_MSG(contains(fault.out, "validation FAILED"),
            "fault is reported as a tolerance failure");

  const RunResult zero = run("validate --fd-configs 0");
  CHECK_MSG(zero.exit_code == 2, "fd_configs = 0 exits 2");
}

void test_unwritable_output() {
  const RunResult r =
      run("optimize --m 2 --restarts 1 -o /nonexistent-dir/out.txt");
  CHECK_MSG(r.exit_code == 3, "unwritable output path exits 3 (got " +
                                  std::to_string(r.exit_code) + ")");
  CHECK_MSG(contains(r.err, "I/O error"), "I/O failure reported on stderr");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: test_cli <path-to-binary>\n";
    return 2;
  }
  g_binary = argv[1];
  g_tmp = fs::temp_directory_path() /
          ("pacrb_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(g_tmp);

  test_crb_basic();
  test_crb_plane_wave_divergence();
  test_crb_validation_errors();
  test_sweep_outputs();
  test_optimize_outputs();
  test_validate();
  test_unwritable_output();

  std::error_code ec;
  fs::remove_all(g_tmp, ec);
  std::cout << g_checks << " checks, " << g_failures << " failures\n";
  return g_failures == 0 ? 0 : 1;
}
