#include "conformal/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace conformal {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Err::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

OrderedJson load_json(const std::string& path) {
  const std::string text = read_file(path);
  OrderedJson j = OrderedJson::parse(text, nullptr, false);
  if (j.is_discarded()) fail(Err::Io, "invalid JSON in " + path);
  return j;
}

IFS ifs_from_json(const OrderedJson& j) {
  if (!j.contains("maps") || !j["maps"].is_array() || j["maps"].empty())
    fail(Err::Io, "IFS JSON needs a nonempty \"maps\" array");
  std::vector<AnalyticExpr> maps;
  for (const auto& m : j["maps"]) maps.push_back(parse(m.get<std::string>()));
  std::vector<double> probs;
  if (j.contains("probs")) {
    for (const auto& p : j["probs"]) probs.push_back(p.get<double>());
  } else {
    probs.assign(maps.size(), 1.0 / static_cast<double>(maps.size()));
  }
  return validate_ifs(std::move(maps), std::move(probs));
}

IFS load_ifs(const std::string& path) { return ifs_from_json(load_json(path)); }

FamilySpec family_from_json(const OrderedJson& j) {
  if (!j.contains("maps") || !j["maps"].is_array() || j["maps"].empty())
    fail(Err::Io, "family JSON needs a nonempty \"maps\" array");
  std::vector<AnalyticExpr> maps;
  for (const auto& m : j["maps"]) maps.push_back(parse_xt(m.get<std::string>()));
  double t_lo = 0.0, t_hi = 1.0;
  if (j.contains("t_range")) {
    t_lo = j["t_range"][0].get<double>();
    t_hi = j["t_range"][1].get<double>();
  }
  std::vector<double> probs;
  if (j.contains("probs"))
    for (const auto& p : j["probs"]) probs.push_back(p.get<double>());
  return make_family(std::move(maps), t_lo, t_hi, std::move(probs));
}

FamilySpec load_family(const std::string& path) {
  return family_from_json(load_json(path));
}

OrderedJson to_json(const DimReport& report) {
  OrderedJson j;
  j["estimate"] = report.estimate;
  j["extrapolation_slope"] = report.extrapolation_slope;
  OrderedJson levels = OrderedJson::array();
  for (const auto& [n, value] : report.levels) levels.push_back({n, value});
  j["levels"] = levels;
  return j;
}

OrderedJson to_json(const ExperimentReport& report) {
  OrderedJson j;
  j["name"] = report.name;
  OrderedJson params = OrderedJson::object();
  for (const auto& [k, v] : report.parameters) params[k] = v;
  j["parameters"] = params;
  OrderedJson observed = OrderedJson::object();
  for (const auto& [k, v] : report.observed) observed[k] = v;
  j["observed"] = observed;
  j["violations"] = report.violations;
  j["pass"] = report.pass;
  j["seed"] = report.seed;
  return j;
}

OrderedJson to_json(const RealMeasure& m) {
  OrderedJson atoms = OrderedJson::array();
  for (const auto& a : m.atoms) atoms.push_back({a.position, a.weight});
  OrderedJson j;
  j["atoms"] = atoms;
  return j;
}

OrderedJson to_json(const PolyMeasure& nu) {
  OrderedJson j;
  j["order"] = nu.order;
  OrderedJson atoms = OrderedJson::array();
  for (const auto& a : nu.atoms) {
    OrderedJson atom;
    atom["coeffs"] = a.poly.coeffs;  // low degree first
    atom["weight"] = a.weight;
    atoms.push_back(atom);
  }
  j["atoms"] = atoms;
  return j;
}

RealMeasure measure_from_json(const OrderedJson& j) {
  std::vector<RealMeasure::Atom> atoms;
  for (const auto& a : j.at("atoms"))
    atoms.push_back({a[0].get<double>(), a[1].get<double>()});
  return make_measure(std::move(atoms));
}

PolyMeasure poly_measure_from_json(const OrderedJson& j) {
  PolyMeasure nu;
  nu.order = j.at("order").get<int>();
  for (const auto& a : j.at("atoms")) {
    Polynomial p;
    for (const auto& c : a.at("coeffs")) p.coeffs.push_back(c.get<double>());
    nu.atoms.push_back({std::move(p), a.at("weight").get<double>()});
  }
  return nu;
}

void write_measure_csv(std::ostream& out, const RealMeasure& m) {
  out << "position,weight\n";
  for (const auto& a : m.atoms)
    out << format_double(a.position) << "," << format_double(a.weight) << "\n";
}

RealMeasure read_measure_csv(std::istream& in) {
  std::string line;
  std::vector<RealMeasure::Atom> atoms;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) fail(Err::Io, "bad measure CSV line: " + line);
    atoms.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
  }
  return make_measure(std::move(atoms));
}

void write_pressure_csv(std::ostream& out, const PressureCurve& curve) {
  out << "t,lower,upper\n";
  for (std::size_t i = 0; i < curve.t_values.size(); ++i)
    out << format_double(curve.t_values[i]) << "," << format_double(curve.estimates[i].first)
        << "," << format_double(curve.estimates[i].second) << "\n";
}

void write_separation_csv(std::ostream& out, const SeparationProfile& profile,
                          int alphabet_size) {
  out << "n,lo,hi,rate,witness_u1,witness_u2\n";
  for (const auto& row : profile.rows) {
    out << row.n << "," << format_double(row.distance.lo) << ","
        << format_double(row.distance.hi) << "," << format_double(row.rate) << ",";
    if (row.exact_overlap)
      out << "exact_overlap,exact_overlap";
    else
      out << to_string(row.u, alphabet_size) << "," << to_string(row.v, alphabet_size);
    out << "\n";
  }
}

}  // namespace conformal
