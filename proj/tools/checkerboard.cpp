// Command-line front end: simulations, verification suite, convergence
// studies, path enumeration, and the momentum-space matrix chain.
#include <CLI11.hpp>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "checkerboard/continuum.hpp"
#include "checkerboard/gauge.hpp"
#include "checkerboard/lattice.hpp"
#include "checkerboard/spectral.hpp"
#include "studies.hpp"
#include "verify.hpp"

namespace cb = checkerboard;

namespace {

std::string fmt(double v) { return cb::format_float(v); }

// "-" means stdout
struct Sink {
  std::ofstream file;
  std::ostream* out = &std::cout;

  explicit Sink(const std::string& path) {
    if (path != "-") {
      file.open(path);
      if (!file) throw std::invalid_argument("cannot open output file '" + path + "'");
      out = &file;
    }
  }
  std::ostream& stream() { return *out; }
};

cb::Direction parse_dir(const std::string& name) {
  if (name == "plus" || name == "+") return cb::Direction::plus;
  if (name == "minus" || name == "-") return cb::Direction::minus;
  throw std::invalid_argument("direction must be plus or minus");
}

std::string trim(std::string s) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && is_space(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

// Expand "--config FILE" into appended "--key=value" tokens. The file is flat
// "key = value" text; '#' starts a comment. Keys already given as flags are
// skipped, which is what makes flags override file values. Unknown keys fall
// through to the normal flag validation.
void expand_config_defaults(std::vector<std::string>& args) {
  std::string path;
  bool found = false;
  for (std::size_t i = 0; i < args.size() && !found; ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      found = true;
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      found = true;
    }
  }
  if (!found) return;

  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");

  std::vector<std::string> extra;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    const std::string key = eq == std::string::npos ? stripped : trim(stripped.substr(0, eq));
    if (key.empty() || eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  " is not 'key = value': " + stripped);
    const std::string value = trim(stripped.substr(eq + 1));
    const std::string flag = "--" + key;
    bool given = false;
    for (const std::string& arg : args) {
      if (arg == flag || arg.rfind(flag + "=", 0) == 0) {
        given = true;
        break;
      }
    }
    if (!given) extra.push_back(value.empty() ? flag : flag + "=" + value);
  }
  args.insert(args.end(), extra.begin(), extra.end());
}

Eigen::Vector3d parse_vec3(const std::string& text) {
  std::stringstream in(text);
  Eigen::Vector3d p;
  char sep1 = 0;
  char sep2 = 0;
  if (!(in >> p.x() >> sep1 >> p.y() >> sep2 >> p.z()) || sep1 != ',' || sep2 != ',')
    throw std::invalid_argument("momentum must be three comma-separated numbers");
  std::string rest;
  if (in >> rest) throw std::invalid_argument("momentum must be three comma-separated numbers");
  return p;
}

struct SimulateArgs {
  std::string mode = "simple";
  double a = 0.5;
  double zeta_plus = 0.3;
  double zeta_minus = 0.1;
  double dt = 0.1;
  int steps = 10;
  int sites = 64;
  std::string boundary = "periodic";
  std::string weight = "real";
  double epsilon = 0.05;
  bool unit_stay = false;
  int source_site = -1;  // -1 = center
  std::string source_dir = "plus";
  std::string out = "-";
};

int cmd_simulate(const SimulateArgs& args) {
  const cb::Boundary boundary = [&] {
    if (args.boundary == "periodic") return cb::Boundary::periodic;
    if (args.boundary == "absorbing") return cb::Boundary::absorbing;
    throw std::invalid_argument("boundary must be periodic or absorbing");
  }();
  const cb::LatticeSpec spec(args.dt, args.sites, boundary);
  if (args.steps < 0) throw std::invalid_argument("steps must be nonnegative");
  const int source = args.source_site < 0 ? args.sites / 2 : args.source_site;
  if (source >= args.sites) throw std::invalid_argument("source site outside the lattice");
  const cb::Direction source_dir = parse_dir(args.source_dir);
  Sink sink(args.out);

  if (args.mode == "simple") {
    const cb::StepWeight weight = [&] {
      if (args.weight == "real") return cb::StepWeight::real();
      if (args.weight == "imaginary") return cb::StepWeight::imaginary(args.epsilon, args.unit_stay);
      throw std::invalid_argument("weight must be real or imaginary");
    }();
    const cb::TransitionRates rates = cb::TransitionRates::symmetric(args.a);
    const cb::ScalarKind kind =
        weight.mode == cb::WeightMode::real ? cb::ScalarKind::real : cb::ScalarKind::cplx;
    auto field =
        cb::DirectedAmplitudeField::point_source(args.sites, source, source_dir, kind);
    sink.stream() << "step,site,dir,re,im,sum_re,sum_im\n";
    for (int step = 0; step <= args.steps; ++step) {
      if (step > 0) field = cb::step_simple(field, rates, spec, weight);
      const cb::Complex sum = field.sum();
      for (int site = 0; site < args.sites; ++site)
        for (cb::Direction d : {cb::Direction::plus, cb::Direction::minus}) {
          const cb::Complex v = field.at(site, d);
          sink.stream() << step << ',' << site << ','
                        << (d == cb::Direction::plus ? '+' : '-') << ',' << fmt(v.real())
                        << ',' << fmt(v.imag()) << ',' << fmt(sum.real()) << ','
                        << fmt(sum.imag()) << '\n';
        }
    }
    return 0;
  }
  if (args.mode != "causal") throw std::invalid_argument("mode must be simple or causal");

  const cb::TransitionRates rates(args.zeta_plus, args.zeta_minus);
  auto pair = cb::CausalFieldPair::zeros(spec, cb::ScalarKind::cplx);
  pair.z_field.at(source, source_dir) = 1.0;
  sink.stream() << "step,site,field,dir,re,im,constraint_residual\n";
  double residual = 0.0;
  for (int step = 0; step <= args.steps; ++step) {
    if (step > 0) {
      const auto next = cb::step_causal(pair, rates, spec);
      residual = cb::causality_residual(pair, next, spec);
      pair = next;
    }
    for (int site = 0; site < args.sites; ++site)
      for (cb::Direction d : {cb::Direction::plus, cb::Direction::minus}) {
        const cb::Complex z = pair.z_field.at(site, d);
        const cb::Complex zbar = pair.zbar_field.at(site, d);
        const char dir = d == cb::Direction::plus ? '+' : '-';
        sink.stream() << step << ',' << site << ",z," << dir << ',' << fmt(z.real()) << ','
                      << fmt(z.imag()) << ',' << fmt(residual) << '\n';
        sink.stream() << step << ',' << site << ",zbar," << dir << ',' << fmt(zbar.real())
                      << ',' << fmt(zbar.imag()) << ',' << fmt(residual) << '\n';
      }
  }
  return 0;
}

struct VerifyArgs {
  std::uint64_t seed = 987654321;
  std::string check;
  int path_n = 10;
  std::string p = "1,2,2";
  double m = 4.0;
  bool point_given = false;
  std::string out;
};

int cmd_verify(const VerifyArgs& args) {
  cb::VerifyOptions opts;
  opts.seed = args.seed;
  opts.only = args.check;
  opts.path_n = args.path_n;
  opts.chain_p = parse_vec3(args.p);
  opts.chain_m = args.m;
  const auto checks = cb::run_verify_suite(opts);
  if (args.point_given) {
    const Eigen::Vector4d eig = cb::eig4(cb::dirac_form(opts.chain_p, opts.chain_m));
    std::cout << "chain eigenvalues:";
    for (int i = 0; i < 4; ++i) std::cout << ' ' << fmt(eig[i]);
    std::cout << '\n';
  }
  const std::string report = cb::report_json(opts, checks);
  if (args.out.empty()) {
    std::cout << report;
  } else {
    Sink sink(args.out);
    sink.stream() << report;
    for (const auto& c : checks)
      std::cout << (c.pass ? "pass" : "FAIL") << "  " << c.name
                << "  residual=" << fmt(c.residual) << '\n';
  }
  return cb::all_pass(checks) ? 0 : 1;
}

struct ConvergeArgs {
  std::string study = "transport-lattice";
  std::vector<double> ladder;
  std::string out = "-";
};

int cmd_converge(const ConvergeArgs& args) {
  const cb::StudyKind kind = cb::parse_study(args.study);
  const cb::StudyResult result = cb::run_study(kind, args.ladder);
  const std::string order =
      result.fit.exact ? std::string("exact") : fmt(result.fit.order);
  Sink sink(args.out);
  sink.stream() << "dt,residual,order\n";
  for (const auto& entry : result.ladder)
    sink.stream() << fmt(entry.dt) << ',' << fmt(entry.residual) << ',' << order << '\n';
  if (args.out != "-")
    std::cout << "study " << args.study << ": fitted order = " << order << '\n';
  return 0;
}

struct PathArgs {
  int n = 8;
  std::string start = "plus";
  std::string end = "plus";
  int displacement = 0;
  int reversals = -1;  // -1 = no restriction
  double a = 0.5;
  double dt = 0.1;
  std::string weight = "real";
  double epsilon = 0.05;
  bool unit_stay = false;
  std::string out = "-";
};

int cmd_path_sum(const PathArgs& args) {
  const cb::StepWeight weight = [&] {
    if (args.weight == "real") return cb::StepWeight::real();
    if (args.weight == "imaginary") return cb::StepWeight::imaginary(args.epsilon, args.unit_stay);
    throw std::invalid_argument("weight must be real or imaginary");
  }();
  std::optional<int> restrict_r;
  if (args.reversals >= 0) restrict_r = args.reversals;
  const cb::PathQuery query(args.n, parse_dir(args.start), parse_dir(args.end),
                            args.displacement, restrict_r);
  const cb::LatticeSpec spec(args.dt, 2 * args.n + 3);
  const cb::TransitionRates rates = cb::TransitionRates::symmetric(args.a);
  const auto histogram = cb::path_reversal_histogram(query);
  const cb::WeightPair w = cb::resolve_weights(rates, spec, weight);
  const cb::Complex amplitude = cb::path_sum_amplitude(query, rates, spec, weight);

  Sink sink(args.out);
  sink.stream() << "reversals,count,weight_re,weight_im\n";
  for (std::size_t r = 0; r < histogram.size(); ++r) {
    const cb::Complex contribution =
        static_cast<double>(histogram[r]) *
        std::pow(w.stay, static_cast<int>(histogram.size() - 1 - r)) *
        std::pow(w.flip, static_cast<int>(r));
    sink.stream() << r << ',' << histogram[r] << ',' << fmt(contribution.real()) << ','
                  << fmt(contribution.imag()) << '\n';
  }
  sink.stream() << "# amplitude = " << fmt(amplitude.real()) << ' ' << fmt(amplitude.imag())
                << '\n';
  return 0;
}

struct ChainArgs {
  std::string p = "1,2,2";
  double m = 4.0;
};

void print_block(std::ostream& out, const std::string& label, const Eigen::MatrixXcd& m) {
  out << label << ":\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out << "  ";
      out << '(' << fmt(m(r, c).real()) << ',' << fmt(m(r, c).imag()) << ')';
    }
    out << '\n';
  }
}

int cmd_chain(const ChainArgs& args) {
  const Eigen::Vector3d p = parse_vec3(args.p);
  if (args.m < 0.0) throw std::invalid_argument("mass must be nonnegative");
  const cb::MomentumPoint pt = cb::MomentumPoint::on_shell(p, args.m);
  std::ostream& out = std::cout;
  out << "momentum = (" << fmt(p.x()) << ", " << fmt(p.y()) << ", " << fmt(p.z())
      << "), mass = " << fmt(args.m) << '\n';
  const auto [e_plus, e_minus] = cb::dispersion(p, args.m);
  out << "dispersion = " << fmt(e_plus) << ", " << fmt(e_minus) << '\n';
  const cb::MomentumRotationChain chain = cb::rotate_momentum_chain(p);
  print_block(out, "aligned", chain.aligned);
  print_block(out, "in-plane", chain.in_plane);
  print_block(out, "full", chain.full);
  print_block(out, "intermediate", cb::assemble_intermediate(pt));
  print_block(out, "regrouped", cb::sigma_conjugate(cb::assemble_intermediate(pt)));
  const cb::FourBlock dirac = cb::dirac_form(p, args.m);
  print_block(out, "dirac", dirac);
  const Eigen::Vector4d eig = cb::eig4(dirac);
  out << "eigenvalues:";
  for (int i = 0; i < 4; ++i) out << ' ' << fmt(eig[i]);
  out << '\n';
  out << "bilinearization residual = " << fmt(cb::bilinearization_residual(p)) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"light-cone lattice dynamics, continuum checks, and the momentum-space chain"};
  app.require_subcommand(1);

  // the file is expanded into flag tokens before the parse; the option only
  // has to exist so the token itself is accepted
  std::string config_path;

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "evolve a lattice and export CSV");
  simulate->add_option("--config", config_path, "key = value defaults; flags override");
  simulate->add_option("--mode", sim.mode, "simple | causal")->capture_default_str();
  simulate->add_option("--a", sim.a, "symmetric flip rate (simple mode)")->capture_default_str();
  simulate->add_option("--zeta-plus", sim.zeta_plus, "forward flip rate (causal mode)")
      ->capture_default_str();
  simulate->add_option("--zeta-minus", sim.zeta_minus, "backward flip rate (causal mode)")
      ->capture_default_str();
  simulate->add_option("--dt", sim.dt, "time step")->capture_default_str();
  simulate->add_option("--steps", sim.steps, "number of steps")->capture_default_str();
  simulate->add_option("--sites", sim.sites, "lattice sites")->capture_default_str();
  simulate->add_option("--boundary", sim.boundary, "periodic | absorbing")
      ->capture_default_str();
  simulate->add_option("--weight", sim.weight, "real | imaginary (simple mode)")
      ->capture_default_str();
  simulate->add_option("--epsilon", sim.epsilon, "imaginary-weight step")
      ->capture_default_str();
  simulate->add_flag("--unit-stay", sim.unit_stay, "replace the stay weight by exactly 1");
  simulate->add_option("--source-site", sim.source_site, "initial site (-1 = center)")
      ->capture_default_str();
  simulate->add_option("--source-dir", sim.source_dir, "plus | minus")->capture_default_str();
  simulate->add_option("--out", sim.out, "output file (- = stdout)")->capture_default_str();

  VerifyArgs ver;
  CLI::App* verify = app.add_subcommand("verify", "run the invariant suite, report JSON");
  verify->add_option("--config", config_path, "key = value defaults; flags override");
  verify->add_option("--seed", ver.seed, "generator seed")->capture_default_str();
  verify->add_option("--check", ver.check, "run only checks matching this prefix");
  verify->add_option("--n", ver.path_n, "path length for the enumeration oracle")
      ->capture_default_str();
  CLI::Option* opt_p =
      verify->add_option("--p", ver.p, "momentum x,y,z for the chain checks")
          ->capture_default_str();
  CLI::Option* opt_m =
      verify->add_option("--m", ver.m, "mass for the chain checks")->capture_default_str();
  verify->add_option("--out", ver.out, "write the JSON report here instead of stdout");

  ConvergeArgs con;
  CLI::App* converge = app.add_subcommand("converge", "run a step-size refinement study");
  converge->add_option("--config", config_path, "key = value defaults; flags override");
  converge->add_option("--study", con.study,
                       "transport-lattice | zzb-lattice | transport-free | zzb-free | exact")
      ->capture_default_str();
  converge->add_option("--ladder", con.ladder, "comma-separated step sizes (>= 3)")
      ->delimiter(',');
  converge->add_option("--out", con.out, "output file (- = stdout)")->capture_default_str();

  PathArgs path;
  CLI::App* path_sum = app.add_subcommand("path-sum", "enumerate paths by reversal count");
  path_sum->add_option("--config", config_path, "key = value defaults; flags override");
  path_sum->add_option("--n", path.n, "path length (<= 24)")->capture_default_str();
  path_sum->add_option("--start", path.start, "plus | minus")->capture_default_str();
  path_sum->add_option("--end", path.end, "plus | minus")->capture_default_str();
  path_sum->add_option("--displacement", path.displacement, "end displacement in cells")
      ->capture_default_str();
  path_sum->add_option("--reversals", path.reversals, "restrict to exactly R reversals")
      ->capture_default_str();
  path_sum->add_option("--a", path.a, "symmetric flip rate")->capture_default_str();
  path_sum->add_option("--dt", path.dt, "time step")->capture_default_str();
  path_sum->add_option("--weight", path.weight, "real | imaginary")->capture_default_str();
  path_sum->add_option("--epsilon", path.epsilon, "imaginary-weight step")
      ->capture_default_str();
  path_sum->add_flag("--unit-stay", path.unit_stay, "replace the stay weight by exactly 1");
  path_sum->add_option("--out", path.out, "output file (- = stdout)")->capture_default_str();

  ChainArgs chain;
  CLI::App* chain_cmd = app.add_subcommand("chain", "print the momentum-space matrix chain");
  chain_cmd->add_option("--config", config_path, "key = value defaults; flags override");
  chain_cmd->add_option("--p", chain.p, "momentum x,y,z")->capture_default_str();
  chain_cmd->add_option("--m", chain.m, "mass")->capture_default_str();

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    expand_config_defaults(args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  try {
    std::reverse(args.begin(), args.end());  // the vector overload wants reversed tokens
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit clean; bad flags are config errors
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim);
    if (verify->parsed()) {
      ver.point_given = opt_p->count() > 0 || opt_m->count() > 0;
      return cmd_verify(ver);
    }
    if (converge->parsed()) return cmd_converge(con);
    if (path_sum->parsed()) return cmd_path_sum(path);
    if (chain_cmd->parsed()) return cmd_chain(chain);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
