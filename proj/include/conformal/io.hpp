#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "conformal/dimension.hpp"
#include "conformal/family.hpp"
#include "conformal/lab.hpp"
#include "conformal/measure.hpp"
#include "conformal/pressure.hpp"
#include "conformal/separation.hpp"

namespace conformal {

using OrderedJson = nlohmann::ordered_json;

// Shortest round-trip decimal form, stable across runs.
std::string format_double(double v);

// {"maps": ["x/3", "x/3 + 2/3"], "probs": [0.5, 0.5]}; probs default uniform.
IFS ifs_from_json(const OrderedJson& j);
IFS load_ifs(const std::string& path);

// {"maps": ["x/3", "x/3 + 2*t/3"], "t_range": [0, 1], "probs": optional}
FamilySpec family_from_json(const OrderedJson& j);
FamilySpec load_family(const std::string& path);

OrderedJson to_json(const DimReport& report);
OrderedJson to_json(const ExperimentReport& report);
OrderedJson to_json(const RealMeasure& m);
OrderedJson to_json(const PolyMeasure& nu);
RealMeasure measure_from_json(const OrderedJson& j);
PolyMeasure poly_measure_from_json(const OrderedJson& j);

void write_measure_csv(std::ostream& out, const RealMeasure& m);
RealMeasure read_measure_csv(std::istream& in);

void write_pressure_csv(std::ostream& out, const PressureCurve& curve);
void write_separation_csv(std::ostream& out, const SeparationProfile& profile,
                          int alphabet_size);

std::string read_file(const std::string& path);
OrderedJson load_json(const std::string& path);

}  // namespace conformal
