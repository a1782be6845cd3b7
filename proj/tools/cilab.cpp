#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cilab/campaign.hpp"
#include "cilab/config.hpp"
#include "cilab/error.hpp"
#include "cilab/families.hpp"
#include "cilab/flows.hpp"
#include "cilab/format.hpp"
#include "cilab/gas.hpp"
#include "cilab/io.hpp"
#include "cilab/kernel.hpp"
#include "cilab/parallel.hpp"
#include "cilab/report.hpp"
#include "cilab/scalar.hpp"
#include "cilab/sharpness.hpp"
#include "cilab/verify.hpp"

using namespace cilab;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;

struct Input {
  std::string bytes;
  std::string fingerprint;
};

Input load(const std::string& path) {
  Input in;
  in.bytes = read_file(path);
  in.fingerprint = "sha256:" + sha256_hex(in.bytes);
  return in;
}

std::string join_fingerprints(const std::vector<Input>& ins) {
  std::string s;
  for (const auto& in : ins) s += (s.empty() ? "" : "+") + in.fingerprint;
  return s;
}

// DBV1 holding either layout; scalar fields become f I_n.
TensorField tensor_input(const Input& in) {
  std::istringstream is(in.bytes);
  std::string line;
  {
    std::istringstream probe(in.bytes);
    while (std::getline(probe, line) && line.rfind("layout", 0) != 0) {
    }
  }
  TensorField f = line == "layout scalar" ? read_dbv1_scalar(is).times_identity() : read_dbv1_tensor(is);
  f.mark_psd();
  return f;
}

ScalarField scalar_input(const Input& in) {
  std::istringstream is(in.bytes);
  return read_dbv1_scalar(is);
}

FlowField flow_input(const Input& in) {
  std::istringstream is(in.bytes);
  return read_flw1(is);
}

std::vector<double> vec(const std::string& s) { return s.empty() ? std::vector<double>{} : parse_doubles(s, ','); }

// "h1;h2;..." with comma-separated components.
std::vector<std::vector<double>> vec_list(const std::string& s) {
  std::vector<std::vector<double>> out;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, ';')) {
    if (!part.empty()) out.push_back(vec(part));
  }
  return out;
}

std::string gen_fingerprint(const std::string& what, const std::vector<std::pair<std::string, std::string>>& kv) {
  std::string s = "gen:" + what;
  for (const auto& [k, v] : kv) s += ";" + k + "=" + v;
  return s;
}

struct Settings {
  std::string output = "-";
  bool deterministic = false;

  // positional inputs
  std::vector<std::string> files;
  std::string config_path;
  std::string family;
  std::string kind;

  // verify
  int samples = 256;
  std::uint64_t seed = 1;
  std::string xi, omega;
  double a = 1.0, b = 1.0;

  // mixed-det
  std::vector<int> dims{2, 3, 4, 5};

  // scalar
  bool time_form = false;
  std::string profile_const;

  // gas
  std::string shifts, eta, sigma_path;
  double tau = NAN;
  long t_index = -1;
  bool sup = false;
  int time_stride = 4, space_stride = 16;

  // flows
  std::vector<std::string> assignments;

  // sharpness
  int dim = 2;
  std::int64_t cells = 128;
  double half = 1.5;
  int budget = 60;
  std::string lower, upper, initial, trace_path;

  // make-field
  double radius = 0.5, width = 0.05, sigma = 0.4, q = 2.0;
  bool scalar_out = false;
  std::string center;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error(ErrorKind::Format, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

int emit(const Settings& s, std::vector<Report> rows, const std::string& fingerprint) {
  for (auto& r : rows) {
    if (r.fingerprint.empty()) r.fingerprint = fingerprint;
  }
  Output out(s.output);
  write_csv(out.stream(), rows);
  for (const auto& r : rows) {
    if (r.status.kind == Status::Kind::InadmissibleInput) return kExitInput;
  }
  return 0;
}

int cmd_verify(const Settings& s, const std::string& which) {
  std::vector<Input> ins;
  for (const auto& f : s.files) ins.push_back(load(f));
  const std::string fp = join_fingerprints(ins);
  if (which == "mulest") {
    std::vector<TensorField> fs;
    for (const auto& in : ins) fs.push_back(tensor_input(in));
    return emit(s, {verify_mulest(fs)}, fp);
  }
  if (ins.size() != 1) throw CLI::ValidationError("verify " + which, "expects exactly one field file");
  const TensorField a = tensor_input(ins[0]);
  if (which == "fund") return emit(s, {verify_fund(a)}, fp);
  if (which == "prod") return emit(s, {verify_prod(a)}, fp);
  if (which == "log-avg") return emit(s, {verify_log_avg(a, s.samples, s.seed)}, fp);
  std::vector<double> xi = vec(s.xi), omega = vec(s.omega);
  if (xi.empty()) xi.assign(static_cast<std::size_t>(a.grid().dim()), 0.0);
  if (omega.empty()) {
    omega.assign(static_cast<std::size_t>(a.grid().dim()), 0.0);
    omega[0] = 1.0;
  }
  return emit(s, {verify_schur(a, KernelSpec::schur(xi, omega, s.a, s.b))}, fp);
}

int cmd_mixed_det(const Settings& s) {
  std::vector<Report> rows;
  for (int n : s.dims) {
    auto part = mixed_det_check(n, s.samples, s.seed);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  std::string dims;
  for (int n : s.dims) dims += (dims.empty() ? "" : ",") + std::to_string(n);
  return emit(s, rows,
              gen_fingerprint("mixed-det", {{"n", dims}, {"samples", std::to_string(s.samples)},
                                            {"seed", std::to_string(s.seed)}}));
}

int cmd_scalar(const Settings& s, const std::string& which) {
  std::vector<Input> ins;
  for (const auto& f : s.files) ins.push_back(load(f));
  const std::string fp = join_fingerprints(ins);
  std::vector<ScalarField> fs;
  for (const auto& in : ins) fs.push_back(scalar_input(in));
  if (which == "gagliardo") {
    return emit(s, {s.time_form ? gagliardo_time(fs, vec(s.xi)) : gagliardo_classic(fs)}, fp);
  }
  if (fs.size() != 1) throw CLI::ValidationError("scalar " + which, "expects exactly one field file");
  if (which == "conv") return emit(s, {conv_ratio(fs[0])}, fp);
  const double g = s.profile_const.empty() ? 1.0 : parse_double(s.profile_const);
  return emit(s, {conv_kernel_bound(fs[0], SphereProfile::constant(fs[0].grid.dim(), g))}, fp);
}

int cmd_gas(const Settings& s, const std::string& which) {
  if (s.files.size() != 1) throw CLI::ValidationError("gas " + which, "expects exactly one flow file");
  const Input in = load(s.files[0]);
  const FlowField w = flow_input(in);
  const double tau = std::isnan(s.tau) ? 0.5 * (w.times.front() + w.times.back()) : s.tau;
  std::vector<double> eta = vec(s.eta);
  if (eta.empty()) eta.assign(static_cast<std::size_t>(w.d()), 0.0);
  if (which == "pgd") return emit(s, {functional_pgd(w)}, in.fingerprint);
  if (which == "estuu" || which == "h") {
    const auto rest = vec_list(s.shifts);
    if (rest.empty()) throw CLI::ValidationError("--shifts", "required: d shift vectors, e.g. 0.1,0;0,0.1");
    const ShiftSet set = ShiftSet::from(rest);
    if (which == "estuu") return emit(s, {functional_estuu(w, set)}, in.fingerprint);
    const std::size_t k = s.t_index < 0 ? 0 : static_cast<std::size_t>(s.t_index);
    const double h = functional_h(w, k, set);
    const FlowSummary sum = summary(w);
    Report r = Report::make("h", h, std::pow(sum.M, 1.0 / w.d()) * sum.E0);
    r.grid = w.grid.describe();
    r.add("t", w.times.at(k));
    return emit(s, {r}, in.fingerprint);
  }
  if (which == "direct") return emit(s, direct_bound(w, s.t_index, vec_list(s.shifts)), in.fingerprint);
  if (which == "schurp") {
    if (s.sup) return emit(s, {schurp_sup(w, s.time_stride, s.space_stride)}, in.fingerprint);
    return emit(s, {functional_schurp(w, tau, eta)}, in.fingerprint);
  }
  if (which == "schurp-nonhom") return emit(s, {functional_schurp_nonhom(w, tau, eta)}, in.fingerprint);
  if (s.sigma_path.empty()) throw CLI::ValidationError("--sigma", "required for gas defect");
  const Input sig = load(s.sigma_path);
  std::istringstream is(sig.bytes);
  DefectField sigma = read_dbv1_defect(is);
  for (auto& f : sigma.sigma) f.mark_psd();
  return emit(s, {functional_defect(w, sigma, tau, eta)}, in.fingerprint + "+" + sig.fingerprint);
}

int cmd_flows(const Settings& s, const std::string& which) {
  Config c = Config::load(s.config_path);
  for (const auto& a : s.assignments) c.set(a);
  const FlowField w = which == "dust" ? dust_from_config(c) : fv_solve(gas_initial(c), solver_options(c));
  if (s.output == "-") {
    write_flw1(std::cout, w);
  } else {
    save(s.output, w);
  }
  const FlowSummary sum = summary(w);
  std::cerr << "flow " << w.grid.describe() << " instants=" << w.times.size() << " M=" << format_double(sum.M)
            << " E0=" << format_double(sum.E0) << " mass_drift=" << format_double(sum.mass_drift) << '\n';
  return 0;
}

int cmd_sharpness(const Settings& s) {
  ProbeSetup p;
  p.family = parse_family(s.family);
  p.dim = s.dim;
  p.cells = s.cells;
  p.half_width = s.half;
  p.budget = s.budget;
  p.lower = vec(s.lower);
  p.upper = vec(s.upper);
  p.initial = vec(s.initial);
  const ProbeResult res = probe(p);
  if (!s.trace_path.empty()) {
    std::ofstream tr(s.trace_path, std::ios::binary);
    if (!tr) throw Error(ErrorKind::Format, "cannot write " + s.trace_path);
    write_trace_csv(tr, p.family, res.trace);
  }
  Report r;
  if (res.found) {
    for (const auto& row : res.trace) {
      if (!row.below_resolution && row.report.ratio == res.best_ratio) {
        r = row.report;
        break;
      }
    }
  } else {
    r = Report::make("fund", 0.0, 0.0);
    r.grid = p.grid().describe();
    r.downgrade(Status::below_resolution());
  }
  r.add("best_params", res.best_params);
  r.add("evaluations", static_cast<double>(res.trace.size()));
  return emit(s, {r},
              gen_fingerprint("sharpness", {{"family", s.family},
                                            {"dim", std::to_string(s.dim)},
                                            {"cells", std::to_string(s.cells)},
                                            {"half", format_double(s.half)},
                                            {"budget", std::to_string(s.budget)},
                                            {"lower", s.lower},
                                            {"upper", s.upper},
                                            {"initial", s.initial}}));
}

int cmd_merge(const Settings& s) {
  std::vector<std::string> contents;
  for (const auto& f : s.files) contents.push_back(read_file(f));
  Output out(s.output);
  out.stream() << merge_csv(contents);
  return 0;
}

int cmd_make_field(const Settings& s) {
  const Grid g = Grid::cube(s.dim, s.half, s.cells);
  const std::vector<double> c = vec(s.center);
  if (s.output == "-") throw CLI::ValidationError("-o", "make-field writes a binary file; give a path");
  if (s.kind == "extreme") {
    std::vector<double> xi = c.empty() ? std::vector<double>(static_cast<std::size_t>(s.dim), 0.0) : c;
    KernelSpec k = KernelSpec::inverse_r(xi);
    k.cutoff_radius = s.radius;
    save(s.output, extreme_tensor(g, k));
    return 0;
  }
  ScalarField f;
  if (s.kind == "ball") {
    f = smoothed_ball(g, s.radius, s.width, c);
  } else if (s.kind == "indicator") {
    f = ball_indicator(g, s.radius, c);
  } else {
    f = gaussian_profile(g, s.sigma, s.q, c);
  }
  if (s.scalar_out) {
    save(s.output, f);
  } else {
    save(s.output, f.times_identity());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cilab: numerical checks of compensated-integrability estimates"};
  app.fallthrough();
  app.require_subcommand(1);
  Settings s;
  std::function<int()> action;

  app.add_option("-o,--output", s.output, "CSV (or field/flow) output path, '-' for stdout");
  app.add_flag("--deterministic", s.deterministic, "fixed-order reductions for byte-identical output");

  auto* verify = app.add_subcommand("verify", "Div-BV tensor field estimates");
  verify->require_subcommand(1);
  for (const char* which : {"fund", "prod", "mulest", "schur", "log-avg"}) {
    auto* sub = verify->add_subcommand(which, std::string("verify ") + which);
    sub->add_option("fields", s.files, "DBV1 field file(s)")->required()->check(CLI::ExistingFile);
    if (std::string(which) == "log-avg") {
      sub->add_option("--samples", s.samples, "Monte-Carlo directions");
      sub->add_option("--seed", s.seed, "RNG seed");
    }
    if (std::string(which) == "schur") {
      sub->add_option("--xi", s.xi, "singular point, comma separated (default origin)");
      sub->add_option("--omega", s.omega, "anisotropy direction (default e_0)");
      sub->add_option("--a", s.a, "weight of the omega component");
      sub->add_option("--b", s.b, "weight of the orthogonal part");
    }
    sub->callback([&s, &action, which] { action = [&s, which] { return cmd_verify(s, which); }; });
  }

  auto* mixed = app.add_subcommand("mixed-det", "mixed determinant campaigns");
  mixed->require_subcommand(1);
  auto* check = mixed->add_subcommand("check", "randomized identity and inequality checks");
  check->add_option("--n", s.dims, "dimensions")->check(CLI::Range(2, 6));
  check->add_option("--samples", s.samples, "random tuples per dimension");
  check->add_option("--seed", s.seed, "RNG seed");
  check->callback([&] { action = [&s] { return cmd_mixed_det(s); }; });

  auto* scalar = app.add_subcommand("scalar", "BV scalar estimates");
  scalar->require_subcommand(1);
  for (const char* which : {"conv", "conv-kernel", "gagliardo"}) {
    auto* sub = scalar->add_subcommand(which, std::string("scalar ") + which);
    sub->add_option("fields", s.files, "DBV1 scalar file(s)")->required()->check(CLI::ExistingFile);
    if (std::string(which) == "gagliardo") {
      sub->add_flag("--time", s.time_form, "kernel-weighted form with a distinguished axis");
      sub->add_option("--xi", s.xi, "kernel anchor");
    }
    if (std::string(which) == "conv-kernel") sub->add_option("--g", s.profile_const, "constant sphere profile value");
    sub->callback([&s, &action, which] { action = [&s, which] { return cmd_scalar(s, which); }; });
  }

  auto* gas = app.add_subcommand("gas", "gas flow functionals");
  gas->require_subcommand(1);
  for (const char* which : {"pgd", "estuu", "schurp", "schurp-nonhom", "h", "direct", "defect"}) {
    auto* sub = gas->add_subcommand(which, std::string("gas ") + which);
    sub->add_option("flow", s.files, "FLW1 flow file")->required()->check(CLI::ExistingFile);
    sub->add_option("--shifts", s.shifts, "shift vectors h_1;h_2;... (comma separated components)");
    sub->add_option("--tau", s.tau, "kernel time anchor (default mid-range)");
    sub->add_option("--eta", s.eta, "kernel space anchor (default origin)");
    sub->add_option("--t-index", s.t_index, "instant index (direct: <0 takes the sup)");
    sub->add_option("--sigma", s.sigma_path, "DBV1 defect field with time axis")->check(CLI::ExistingFile);
    sub->add_flag("--sup", s.sup, "schurp: sup over midpoints and dual-lattice anchors");
    sub->add_option("--time-stride", s.time_stride, "schurp --sup time stride");
    sub->add_option("--space-stride", s.space_stride, "schurp --sup space stride");
    sub->callback([&s, &action, which] { action = [&s, which] { return cmd_gas(s, which); }; });
  }

  auto* flows = app.add_subcommand("flows", "generate FLW1 flows");
  flows->require_subcommand(1);
  for (const char* which : {"dust", "fv"}) {
    auto* sub = flows->add_subcommand(which, std::string("flows ") + which);
    sub->add_option("config", s.config_path, "key=value configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--set", s.assignments, "override key=value");
    sub->callback([&s, &action, which] { action = [&s, which] { return cmd_flows(s, which); }; });
  }

  auto* sharp = app.add_subcommand("sharpness", "sharp-constant search");
  sharp->require_subcommand(1);
  auto* pr = sharp->add_subcommand("probe", "Nelder-Mead over a field family");
  pr->add_option("family", s.family, "field family")
      ->required()
      ->check(CLI::IsMember({"radial_smoothed_indicator", "gaussian_profiles", "anisotropic_ellipsoids"}));
  pr->add_option("--dim", s.dim, "space dimension")->check(CLI::Range(2, 3));
  pr->add_option("--cells", s.cells, "cells per axis");
  pr->add_option("--half", s.half, "box half-width");
  pr->add_option("--budget", s.budget, "evaluation budget");
  pr->add_option("--lower", s.lower, "parameter lower bounds");
  pr->add_option("--upper", s.upper, "parameter upper bounds");
  pr->add_option("--initial", s.initial, "starting parameters");
  pr->add_option("--trace", s.trace_path, "write every evaluation as CSV");
  pr->callback([&] { action = [&s] { return cmd_sharpness(s); }; });

  auto* report = app.add_subcommand("report", "CSV utilities");
  report->require_subcommand(1);
  auto* merge = report->add_subcommand("merge", "concatenate report CSVs with one header");
  merge->add_option("csv", s.files, "CSV files")->required()->check(CLI::ExistingFile);
  merge->callback([&] { action = [&s] { return cmd_merge(s); }; });

  auto* make = app.add_subcommand("make-field", "write a generated DBV1 field");
  make->add_option("kind", s.kind, "ball | indicator | gaussian | extreme")
      ->required()
      ->check(CLI::IsMember({"ball", "indicator", "gaussian", "extreme"}));
  make->add_option("--dim", s.dim, "space dimension")->check(CLI::Range(2, 3));
  make->add_option("--cells", s.cells, "cells per axis");
  make->add_option("--half", s.half, "box half-width");
  make->add_option("--radius", s.radius, "ball radius, or cutoff radius for extreme");
  make->add_option("--width", s.width, "smoothing width");
  make->add_option("--sigma", s.sigma, "gaussian scale");
  make->add_option("--q", s.q, "gaussian exponent");
  make->add_option("--center", s.center, "centre, or singular point for extreme");
  make->add_flag("--scalar", s.scalar_out, "write the scalar field instead of f I_n");
  make->callback([&] { action = [&s] { return cmd_make_field(s); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  set_summation(s.deterministic ? Summation::Deterministic : Summation::Fast);
  try {
    return action();
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
}
