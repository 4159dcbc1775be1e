#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string cli_path() {
  const char* p = std::getenv("CHECKERBOARD_CLI");
  REQUIRE_MESSAGE(p != nullptr, "CHECKERBOARD_CLI must point at the command-line binary");
  return p;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

int temp_counter = 0;

std::string temp_path(const std::string& stem) {
  return "/tmp/checkerboard_cli_" + std::to_string(::getpid()) + "_" +
         std::to_string(temp_counter++) + "_" + stem;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  const std::string out_path = temp_path("out");
  const std::string err_path = temp_path("err");
  std::string cmd = env_prefix.empty() ? std::string() : env_prefix + " ";
  cmd += "\"" + cli_path() + "\" " + args + " > " + out_path + " 2> " + err_path;
  const int rc = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return result;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

// first field value after a fixed line prefix, parsed as a double
double field_after(const std::string& csv, const std::string& prefix) {
  const auto pos = csv.find(prefix);
  REQUIRE_MESSAGE(pos != std::string::npos, "missing line '" << prefix << "'");
  return std::strtod(csv.c_str() + pos + prefix.size(), nullptr);
}

}  // namespace

TEST_CASE("help and bad invocations use the documented exit codes") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(contains(run_cli("--help").out, "simulate"));
  CHECK(run_cli("simulate --help").exit_code == 0);

  CHECK(run_cli("").exit_code == 2);                       // missing subcommand
  CHECK(run_cli("simulate --bogus 1").exit_code == 2);     // unknown flag
  CHECK(run_cli("simulate --mode nonsense").exit_code == 2);
  CHECK(run_cli("verify --check no-such-check").exit_code == 2);
  CHECK(run_cli("verify --n 30").exit_code == 2);
  CHECK(run_cli("converge --study nope").exit_code == 2);
  CHECK(run_cli("converge --study exact --ladder 0.1,0.05").exit_code == 2);
  CHECK(run_cli("path-sum --n 30").exit_code == 2);
  CHECK(run_cli("chain --p 1,2").exit_code == 2);
  CHECK(run_cli("verify --check involutions --out /nonexistent-dir/report.json").exit_code ==
        2);

  const RunResult bad = run_cli("simulate --dt -1");
  CHECK(bad.exit_code == 2);
  CHECK(contains(bad.err, "error:"));
}

TEST_CASE("simulate echoes the initial state at zero steps") {
  const RunResult r = run_cli("simulate --steps 0 --sites 4");
  CHECK(r.exit_code == 0);
  CHECK(r.out ==
        "step,site,dir,re,im,sum_re,sum_im\n"
        "0,0,+,0,0,1,0\n"
        "0,0,-,0,0,1,0\n"
        "0,1,+,0,0,1,0\n"
        "0,1,-,0,0,1,0\n"
        "0,2,+,1,0,1,0\n"
        "0,2,-,0,0,1,0\n"
        "0,3,+,0,0,1,0\n"
        "0,3,-,0,0,1,0\n");
}

TEST_CASE("simulate splits a point source after one step") {
  const RunResult r = run_cli("simulate --steps 1 --sites 5 --source-site 2 --a 0.5 --dt 0.1");
  CHECK(r.exit_code == 0);
  // both the stay and flip parts move with the held direction, to site 3
  CHECK(field_after(r.out, "\n1,3,+,") == doctest::Approx(0.95).epsilon(1e-15));
  CHECK(field_after(r.out, "\n1,3,-,") == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(field_after(r.out, "\n1,1,-,") == 0.0);
}

TEST_CASE("causal simulate reports the constraint residual per step") {
  const RunResult r = run_cli("simulate --mode causal --steps 2 --sites 8 --dt 0.1");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "step,site,field,dir,re,im,constraint_residual\n"));
  CHECK(contains(r.out, "0,0,z,+,0,0,0\n"));
  CHECK(contains(r.out, ",zbar,"));
  // the per-site elimination reconstructs the constraint exactly
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    REQUIRE(line.rfind(",0") == line.size() - 2);
  }
}

TEST_CASE("config files and flags produce identical output") {
  const std::string config = temp_path("config.ini");
  spill(config, "a = 0.25\ndt = 0.05\nsteps = 7\nsites = 32\n");

  const RunResult from_config = run_cli("simulate --config " + config);
  const RunResult from_flags = run_cli("simulate --a 0.25 --dt 0.05 --steps 7 --sites 32");
  CHECK(from_config.exit_code == 0);
  CHECK(from_config.out == from_flags.out);

  // command-line flags override config values
  const RunResult overridden = run_cli("simulate --config " + config + " --steps 3");
  const RunResult direct = run_cli("simulate --a 0.25 --dt 0.05 --steps 3 --sites 32");
  CHECK(overridden.out == direct.out);
  CHECK(overridden.out != from_config.out);

  std::remove(config.c_str());
}

TEST_CASE("verification report is byte-stable") {
  const RunResult first = run_cli("verify");
  const RunResult second = run_cli("verify");
  CHECK(first.exit_code == 0);
  CHECK(second.exit_code == 0);
  CHECK(first.out == second.out);
  CHECK(contains(first.out, "\"all_pass\": true"));
  CHECK(contains(first.out, "\"seed\": 987654321"));

  const RunResult one_thread = run_cli("verify", "CHECKERBOARD_THREADS=1");
  const RunResult four_threads = run_cli("verify", "CHECKERBOARD_THREADS=4");
  CHECK(one_thread.out == first.out);
  CHECK(four_threads.out == first.out);
}

TEST_CASE("verify writes the report to a file and summarizes to stdout") {
  const std::string report = temp_path("report.json");
  const RunResult to_file = run_cli("verify --check involutions --out " + report);
  CHECK(to_file.exit_code == 0);
  CHECK(contains(to_file.out, "pass  involutions"));

  const RunResult to_stdout = run_cli("verify --check involutions");
  CHECK(slurp(report) == to_stdout.out);
  std::remove(report.c_str());
}

TEST_CASE("verify prints chain eigenvalues when a momentum is given") {
  const RunResult r = run_cli("verify --check involutions --p 3,0,4 --m 0");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "chain eigenvalues:"));
}

TEST_CASE("converge emits the ladder and the fitted order") {
  const RunResult exact = run_cli("converge --study exact --ladder 0.1,0.05,0.025");
  CHECK(exact.exit_code == 0);
  CHECK(contains(exact.out, "dt,residual,order\n"));
  CHECK(contains(exact.out, ",0,exact\n"));

  const std::string csv = temp_path("ladder.csv");
  const RunResult study = run_cli("converge --study transport-free --ladder 0.1,0.05,0.025 --out " + csv);
  CHECK(study.exit_code == 0);
  CHECK(contains(study.out, "study transport-free: fitted order = 1.9"));
  CHECK(contains(slurp(csv), "dt,residual,order\n"));
  std::remove(csv.c_str());
}

TEST_CASE("path-sum groups contributions by reversal count") {
  const RunResult r = run_cli("path-sum --n 3 --start plus --end minus --displacement 1");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "reversals,count,weight_re,weight_im\n"));
  CHECK(contains(r.out, "\n0,0,"));
  CHECK(contains(r.out, "\n1,1,"));
  CHECK(contains(r.out, "\n2,0,"));
  CHECK(contains(r.out, "\n3,1,"));
  CHECK(field_after(r.out, "# amplitude = ") == doctest::Approx(0.04525).epsilon(1e-12));

  const RunResult filtered =
      run_cli("path-sum --n 3 --start plus --end minus --displacement 1 --reversals 1");
  CHECK(field_after(filtered.out, "# amplitude = ") ==
        doctest::Approx(0.045125).epsilon(1e-12));

  const RunResult imaginary =
      run_cli("path-sum --n 1 --end minus --displacement 1 --weight imaginary --epsilon 0.05");
  const auto pos = imaginary.out.find("# amplitude = ");
  REQUIRE(pos != std::string::npos);
  double re = 1.0, im = 0.0;
  REQUIRE(std::sscanf(imaginary.out.c_str() + pos, "# amplitude = %lf %lf", &re, &im) == 2);
  CHECK(re == 0.0);
  CHECK(im == doctest::Approx(0.05).epsilon(1e-15));
}

TEST_CASE("chain prints the transformation stages") {
  const RunResult r = run_cli("chain --p 3,0,4 --m 0");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "momentum = (3, 0, 4), mass = 0"));
  CHECK(contains(r.out, "dispersion = 5, -5"));
  for (const char* label : {"aligned:", "in-plane:", "full:", "intermediate:", "regrouped:",
                            "dirac:", "eigenvalues:", "bilinearization residual = "}) {
    CHECK_MESSAGE(contains(r.out, label), "missing section '" << label << "'");
  }
}
