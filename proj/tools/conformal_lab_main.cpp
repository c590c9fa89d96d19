#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "conformal/io.hpp"

namespace {

using namespace conformal;

struct CommonOpts {
  std::string output;
  std::string format;  // "csv" or "json"; empty keeps the subcommand default
  std::size_t budget = kDefaultAtomBudget;
  int threads = 1;
  std::uint64_t seed = 0;
  bool deterministic = false;

  bool use_json(const std::string& fallback) const {
    return (format.empty() ? fallback : format) == "json";
  }
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_format = true) {
  cmd->add_option("--output", opts.output, "output file (default stdout)");
  if (with_format)
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--budget", opts.budget, "atom budget")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", opts.threads, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opts.seed, "random seed");
  cmd->add_flag("--deterministic", opts.deterministic, "suppress the timestamp header");
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[64];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void emit(const CommonOpts& opts, const std::string& content) {
  if (opts.output.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(opts.output, std::ios::binary);
  if (!out) fail(Err::Io, "cannot write " + opts.output);
  out << content;
}

// "# key=value" lines; resolved parameters, never the thread count, so runs
// with different --threads stay byte-identical.
std::string csv_header(const CommonOpts& opts,
                       const std::vector<std::pair<std::string, std::string>>& params) {
  std::ostringstream out;
  for (const auto& [k, v] : params) out << "# " << k << "=" << v << "\n";
  out << "# seed=" << opts.seed << "\n";
  out << "# budget=" << opts.budget << "\n";
  if (!opts.deterministic) out << "# generated_at=" << timestamp() << "\n";
  return out.str();
}

OrderedJson json_config(const CommonOpts& opts,
                        const std::vector<std::pair<std::string, std::string>>& params) {
  OrderedJson config = OrderedJson::object();
  for (const auto& [k, v] : params) config[k] = v;
  config["seed"] = opts.seed;
  config["budget"] = opts.budget;
  if (!opts.deterministic) config["generated_at"] = timestamp();
  return config;
}

OrderedJson interval_json(const IntervalBound& b) {
  return OrderedJson::array({b.lo, b.hi});
}

int run_validate(const std::string& ifs_path, const CommonOpts& opts) {
  const IFS ifs = load_ifs(ifs_path);
  OrderedJson j;
  j["config"] = json_config(opts, {{"subcommand", "validate"}, {"ifs", ifs_path}});
  j["valid"] = true;
  j["alphabet_size"] = ifs.alphabet_size;
  OrderedJson deriv = OrderedJson::array(), range = OrderedJson::array();
  for (int i = 0; i < ifs.alphabet_size; ++i) {
    deriv.push_back(interval_json(ifs.deriv_bounds[static_cast<std::size_t>(i)]));
    range.push_back(interval_json(ifs.range_bounds[static_cast<std::size_t>(i)]));
  }
  j["deriv_bounds"] = deriv;
  j["range_bounds"] = range;
  j["rho_min"] = ifs.rho_min;
  j["rho_max"] = ifs.rho_max;
  j["c_bound"] = ifs.c_bound;
  j["ssc"] = ifs.ssc;
  if (ifs.common_fixed_point) {
    j["warning"] = "DegenerateCommonFixedPoint";
    j["common_fixed_point"] = *ifs.common_fixed_point;
    std::cerr << "warning: maps share a fixed point near "
              << format_double(*ifs.common_fixed_point) << "\n";
  }
  emit(opts, j.dump(2) + "\n");
  return 0;
}

int run_dim(const std::string& ifs_path, int nmax, int resolution, int birkhoff_samples,
            int birkhoff_length, const CommonOpts& opts) {
  const IFS ifs = load_ifs(ifs_path);
  if (resolution <= 0) resolution = nmax;
  const std::vector<std::pair<std::string, std::string>> params{
      {"subcommand", "dim"},
      {"ifs", ifs_path},
      {"nmax", std::to_string(nmax)},
      {"resolution", std::to_string(resolution)},
      {"birkhoff_samples", std::to_string(birkhoff_samples)},
      {"birkhoff_length", std::to_string(birkhoff_length)}};
  const double entropy = shannon_entropy(ifs.probs);
  const double chi = lyapunov(ifs, resolution, opts.budget);
  const BirkhoffEstimate birkhoff =
      lyapunov_birkhoff(ifs, birkhoff_samples, birkhoff_length, opts.seed, opts.threads);
  const double rhs = theorem_rhs(ifs, resolution, opts.budget);
  const DimReport dim = entropy_dimension(ifs, nmax, opts.budget);
  const DimReport box = box_counting(ifs, nmax, opts.budget);
  if (opts.use_json("json")) {
    OrderedJson j;
    j["config"] = json_config(opts, params);
    j["shannon_entropy"] = entropy;
    j["lyapunov"] = chi;
    j["lyapunov_birkhoff"] = birkhoff.value;
    j["birkhoff_bias_bound"] = birkhoff.bias_bound;
    j["lyapunov_enclosure"] = interval_json(lyapunov_enclosure(ifs));
    j["theorem_rhs"] = rhs;
    j["entropy_dimension"] = to_json(dim);
    j["box_counting"] = to_json(box);
    emit(opts, j.dump(2) + "\n");
  } else {
    std::ostringstream out;
    out << csv_header(opts, params);
    out << "# shannon_entropy=" << format_double(entropy) << "\n";
    out << "# lyapunov=" << format_double(chi) << "\n";
    out << "# theorem_rhs=" << format_double(rhs) << "\n";
    out << "# dim_estimate=" << format_double(dim.estimate) << "\n";
    out << "# box_estimate=" << format_double(box.estimate) << "\n";
    out << "n,entropy_rate,box_rate\n";
    for (std::size_t i = 0; i < dim.levels.size(); ++i)
      out << dim.levels[i].first << "," << format_double(dim.levels[i].second) << ","
          << format_double(box.levels[i].second) << "\n";
    emit(opts, out.str());
  }
  return 0;
}

int run_entropy(const std::string& ifs_path, int nmax, const CommonOpts& opts) {
  const IFS ifs = load_ifs(ifs_path);
  const RealMeasure theta = discretize_self_conformal(ifs, nmax, opts.budget);
  const std::vector<std::pair<std::string, std::string>> params{
      {"subcommand", "entropy"},
      {"ifs", ifs_path},
      {"nmax", std::to_string(nmax)},
      {"atoms", std::to_string(theta.atoms.size())}};
  if (!opts.use_json("csv")) {
    std::ostringstream out;
    out << csv_header(opts, params);
    out << "n,entropy_bits,normalized\n";
    for (int n = 1; n <= nmax; ++n) {
      const double h = dyadic_entropy(theta, n);
      out << n << "," << format_double(h) << "," << format_double(h / n) << "\n";
    }
    emit(opts, out.str());
  } else {
    OrderedJson j;
    j["config"] = json_config(opts, params);
    OrderedJson levels = OrderedJson::array();
    for (int n = 1; n <= nmax; ++n) {
      const double h = dyadic_entropy(theta, n);
      levels.push_back({n, h, h / n});
    }
    j["levels"] = levels;
    emit(opts, j.dump(2) + "\n");
  }
  return 0;
}

int run_pressure(const std::string& ifs_path, double tmin, double tmax, int steps, int n,
                 const CommonOpts& opts) {
  const IFS ifs = load_ifs(ifs_path);
  if (n <= 0) n = default_pressure_level(ifs);
  const PressureCurve curve = pressure_curve(ifs, tmin, tmax, steps, n, opts.budget,
                                             opts.threads);
  const double s = similarity_dimension(ifs, 1e-6, n, opts.budget, opts.threads);
  const std::vector<std::pair<std::string, std::string>> params{
      {"subcommand", "pressure"},
      {"ifs", ifs_path},
      {"tmin", format_double(tmin)},
      {"tmax", format_double(tmax)},
      {"steps", std::to_string(steps)},
      {"n", std::to_string(n)}};
  if (!opts.use_json("csv")) {
    std::ostringstream out;
    out << csv_header(opts, params);
    out << "# similarity_dimension=" << format_double(s) << "\n";
    write_pressure_csv(out, curve);
    emit(opts, out.str());
  } else {
    OrderedJson j;
    j["config"] = json_config(opts, params);
    j["similarity_dimension"] = s;
    j["n_used"] = curve.n_used;
    OrderedJson rows = OrderedJson::array();
    for (std::size_t i = 0; i < curve.t_values.size(); ++i)
      rows.push_back({curve.t_values[i], curve.estimates[i].first,
                      curve.estimates[i].second});
    j["curve"] = rows;
    emit(opts, j.dump(2) + "\n");
  }
  return 0;
}

int run_separation(const std::string& ifs_path, int nmax, double tol,
                   const CommonOpts& opts) {
  const IFS ifs = load_ifs(ifs_path);
  const SeparationProfile profile =
      separation_profile(ifs, nmax, tol, opts.budget, opts.threads);
  bool overlap = false;
  for (const auto& row : profile.rows) overlap = overlap || row.exact_overlap;
  const std::vector<std::pair<std::string, std::string>> params{
      {"subcommand", "separation"},
      {"ifs", ifs_path},
      {"nmax", std::to_string(nmax)},
      {"tol", format_double(tol)}};
  if (!opts.use_json("csv")) {
    std::ostringstream out;
    out << csv_header(opts, params);
    write_separation_csv(out, profile, ifs.alphabet_size);
    emit(opts, out.str());
  } else {
    OrderedJson j;
    j["config"] = json_config(opts, params);
    OrderedJson rows = OrderedJson::array();
    for (const auto& row : profile.rows) {
      OrderedJson r;
      r["n"] = row.n;
      r["lo"] = row.distance.lo;
      r["hi"] = row.distance.hi;
      r["rate"] = row.rate;
      r["exact_overlap"] = row.exact_overlap;
      if (!row.exact_overlap) {
        r["witness_u1"] = to_string(row.u, ifs.alphabet_size);
        r["witness_u2"] = to_string(row.v, ifs.alphabet_size);
      }
      rows.push_back(r);
    }
    j["rows"] = rows;
    emit(opts, j.dump(2) + "\n");
  }
  if (overlap) std::cerr << "warning: exact overlap detected; profile truncated\n";
  return overlap ? 2 : 0;
}

int run_family_scan(const std::string& family_path, int grid, double tol, int depth,
                    const CommonOpts& opts) {
  const FamilySpec fam = load_family(family_path);
  const auto hits = common_fixed_point_scan(fam, grid, tol, depth);
  const double rho = family_contraction_bound(fam);
  const double truncation = 2.0 * std::pow(rho, depth);
  const std::vector<std::pair<std::string, std::string>> params{
      {"subcommand", "family-scan"},
      {"family", family_path},
      {"grid", std::to_string(grid)},
      {"tol", format_double(tol)},
      {"depth", std::to_string(depth)}};
  if (!opts.use_json("csv")) {
    std::ostringstream out;
    out << csv_header(opts, params);
    out << "# truncation_bound=" << format_double(truncation) << "\n";
    out << "t_zero_lo,t_zero_hi,pair\n";
    for (const auto& h : hits)
      out << format_double(h.bracket.lo) << "," << format_double(h.bracket.hi) << ","
          << h.letter_a << "-" << h.letter_b << "\n";
    emit(opts, out.str());
  } else {
    OrderedJson j;
    j["config"] = json_config(opts, params);
    j["truncation_bound"] = truncation;
    OrderedJson zeros = OrderedJson::array();
    for (const auto& h : hits) {
      OrderedJson z;
      z["t_zero_lo"] = h.bracket.lo;
      z["t_zero_hi"] = h.bracket.hi;
      z["pair"] = std::to_string(h.letter_a) + "-" + std::to_string(h.letter_b);
      zeros.push_back(z);
    }
    j["zeros"] = zeros;
    emit(opts, j.dump(2) + "\n");
  }
  return 0;
}

double param_or(const std::map<std::string, std::string>& params, const std::string& key,
                double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : std::stod(it->second);
}

std::string param_or(const std::map<std::string, std::string>& params,
                     const std::string& key, const std::string& fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

// "lattice:COUNT:STEP" -> uniform translates {X + j*STEP}, "dirac" -> {X};
// otherwise a path to a PolyMeasure JSON file.
PolyMeasure build_nu(const std::string& spec) {
  if (spec == "dirac") {
    PolyMeasure nu;
    nu.order = 1;
    nu.atoms.push_back({identity_polynomial(), 1.0});
    return nu;
  }
  if (spec.rfind("lattice:", 0) == 0) {
    const auto rest = spec.substr(8);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) fail(Err::Io, "lattice spec needs lattice:COUNT:STEP");
    const int count = std::stoi(rest.substr(0, colon));
    const double step = std::stod(rest.substr(colon + 1));
    if (count < 1) fail(Err::Io, "lattice count must be positive");
    PolyMeasure nu;
    nu.order = 1;
    for (int jj = 0; jj < count; ++jj)
      nu.atoms.push_back({Polynomial{{jj * step, 1.0}}, 1.0 / count});
    return nu;
  }
  return poly_measure_from_json(load_json(spec));
}

int run_experiment(const std::string& ifs_path, const std::string& name,
                   const std::vector<std::string>& kv_params, const CommonOpts& opts) {
  std::map<std::string, std::string> params;
  for (const auto& kv : kv_params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) fail(Err::Io, "--params entries must be key=value");
    params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  const IFS ifs = load_ifs(ifs_path);
  const AnalyticExpr psi = parse(param_or(params, "psi", std::string("x")));

  ExperimentReport report;
  if (name == "entropy-increase") {
    const int n = static_cast<int>(param_or(params, "n", 12));
    const PolyMeasure nu = build_nu(param_or(params, "nu", std::string("lattice:8:0.125")));
    report = entropy_increase_experiment(ifs, nu, psi, n, param_or(params, "eps", 0.01),
                                         param_or(params, "rho_min", 0.02), opts.budget);
  } else if (name == "uniform-entropy-dimension") {
    report = uniform_entropy_dimension_check(
        ifs, psi, static_cast<int>(param_or(params, "m", 6)),
        static_cast<int>(param_or(params, "n", 14)), param_or(params, "eps", 0.15),
        static_cast<int>(param_or(params, "samples", 2000)), opts.seed, opts.budget,
        opts.threads);
  } else if (name == "doubling") {
    report = doubling_check(ifs, psi, param_or(params, "delta", 1.0 / 27.0),
                            static_cast<int>(param_or(params, "samples", 5000)), opts.seed,
                            static_cast<int>(param_or(params, "resolution", 18)),
                            param_or(params, "max_ratio_bound", 1.0), opts.budget,
                            opts.threads);
  } else if (name == "linearization") {
    const double delta = param_or(params, "delta", std::exp2(-8));
    const double x = param_or(params, "x", 0.25);
    const int m = static_cast<int>(param_or(params, "m", 6));
    const int count = static_cast<int>(param_or(params, "cloud", 4));
    Polynomial p;
    {
      std::istringstream ss(param_or(params, "p", std::string("0,1")));
      std::string tok;
      while (std::getline(ss, tok, ',')) p.coeffs.push_back(std::stod(tok));
    }
    PolyMeasure nu;
    nu.order = p.degree();
    for (int jj = 0; jj < count; ++jj) {
      Polynomial q = p;
      q.coeffs[0] += delta * jj / count / 2.0;
      nu.atoms.push_back({std::move(q), 1.0 / count});
    }
    std::vector<RealMeasure::Atom> atoms;
    for (int jj = 0; jj < count; ++jj)
      atoms.push_back({x + delta * (jj - count / 2) / count / 2.0, 1.0 / count});
    report = linearization_check(nu, make_measure(std::move(atoms)), p, x, m, delta,
                                 opts.budget);
  } else if (name == "multiscale") {
    const int n = static_cast<int>(param_or(params, "n", 12));
    const int m = static_cast<int>(param_or(params, "m", 4));
    const PolyMeasure nu = build_nu(param_or(params, "nu", std::string("lattice:8:0.125")));
    const RealMeasure theta =
        pushforward(discretize_self_conformal(ifs, n, opts.budget), psi);
    report = multiscale_decomposition_check(nu, theta, n, m, opts.budget);
  } else if (name == "taylor-blocks") {
    report = taylor_block_experiment(ifs, static_cast<int>(param_or(params, "n", 6)),
                                     static_cast<int>(param_or(params, "nprime", 3)),
                                     static_cast<int>(param_or(params, "k", 3)),
                                     static_cast<int>(param_or(params, "grid", 1001)),
                                     opts.budget, opts.threads);
  } else {
    fail(Err::Io, "unknown experiment '" + name + "'");
  }
  report.seed = opts.seed;

  OrderedJson j;
  std::vector<std::pair<std::string, std::string>> config{{"subcommand", "experiment"},
                                                          {"ifs", ifs_path},
                                                          {"name", name}};
  j["config"] = json_config(opts, config);
  j["report"] = to_json(report);
  emit(opts, j.dump(2) + "\n");
  return report.violations.empty() ? 0 : 2;
}

int exit_code_for(Err code) {
  switch (code) {
    case Err::BudgetExceeded:
      return 3;
    case Err::Syntax:
    case Err::UnknownIdentifier:
    case Err::OutOfRange:
    case Err::Io:
      return 1;
    default:
      return 2;  // hypothesis violations
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for conformal iterated function systems on [0,1]"};
  app.require_subcommand(1);

  CommonOpts opts;
  if (const char* env = std::getenv("CONFORMAL_LAB_BUDGET")) {
    opts.budget = static_cast<std::size_t>(std::strtoull(env, nullptr, 10));
  }

  std::string ifs_path, family_path, experiment_name;
  int nmax = 16, resolution = 0, steps = 21, pressure_n = 0, grid = 257, depth = 64;
  int birkhoff_samples = 10000, birkhoff_length = 200;
  double tmin = 0.0, tmax = 2.0, tol = 1e-9;
  std::vector<std::string> kv_params;

  auto* validate = app.add_subcommand("validate", "validate an IFS description");
  validate->add_option("--ifs", ifs_path, "IFS JSON file")->required();
  add_common(validate, opts, false);

  auto* dim = app.add_subcommand("dim", "entropy dimension and the dimension formula");
  dim->add_option("--ifs", ifs_path)->required();
  dim->add_option("--nmax", nmax, "finest dyadic level");
  dim->add_option("--resolution", resolution, "discretization resolution (default nmax)");
  dim->add_option("--birkhoff-samples", birkhoff_samples);
  dim->add_option("--birkhoff-length", birkhoff_length);
  add_common(dim, opts);

  auto* entropy = app.add_subcommand("entropy", "dyadic entropy level table");
  entropy->add_option("--ifs", ifs_path)->required();
  entropy->add_option("--nmax", nmax);
  add_common(entropy, opts);

  auto* pressure = app.add_subcommand("pressure", "pressure curve and similarity dimension");
  pressure->add_option("--ifs", ifs_path)->required();
  pressure->add_option("--tmin", tmin);
  pressure->add_option("--tmax", tmax);
  pressure->add_option("--steps", steps);
  pressure->add_option("--n", pressure_n, "word length (default 4 affine, 10 otherwise)");
  add_common(pressure, opts);

  auto* separation = app.add_subcommand("separation", "minimum pairwise sup-norm distances");
  separation->add_option("--ifs", ifs_path)->required();
  separation->add_option("--nmax", nmax);
  separation->add_option("--tol", tol);
  add_common(separation, opts);

  auto* experiment = app.add_subcommand("experiment", "run a named experiment");
  experiment->add_option("--ifs", ifs_path)->required();
  experiment->add_option("--name", experiment_name, "experiment name")->required();
  experiment->add_option("--params", kv_params, "key=value experiment parameters");
  add_common(experiment, opts, false);

  auto* family_scan = app.add_subcommand("family-scan", "common fixed point parameter scan");
  family_scan->add_option("--family", family_path, "family JSON file")->required();
  family_scan->add_option("--grid", grid);
  family_scan->add_option("--tol", tol);
  family_scan->add_option("--depth", depth);
  add_common(family_scan, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return run_validate(ifs_path, opts);
    if (dim->parsed())
      return run_dim(ifs_path, nmax, resolution, birkhoff_samples, birkhoff_length, opts);
    if (entropy->parsed()) return run_entropy(ifs_path, nmax, opts);
    if (pressure->parsed())
      return run_pressure(ifs_path, tmin, tmax, steps, pressure_n, opts);
    if (separation->parsed()) return run_separation(ifs_path, nmax, tol, opts);
    if (experiment->parsed())
      return run_experiment(ifs_path, experiment_name, kv_params, opts);
    if (family_scan->parsed()) return run_family_scan(family_path, grid, tol, depth, opts);
  } catch (const conformal::LabError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
