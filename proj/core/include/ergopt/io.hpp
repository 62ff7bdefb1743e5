#pragma once

// JSON function specs, CSV grids and report serialization.
//
// Spec grammar (one tagged object per node):
//   {"kind":"cos", "freq":k, "phase":p}            cos 2pi(kx + p), p in turns
//   {"kind":"pwpoly", "breaks":[...], "coeffs":[[...],...], "smoothness":m}
//   {"kind":"const", "value":c}
//   {"kind":"sum", "terms":[...]}
//   {"kind":"scale", "factor":a, "inner":{...}}
//   {"kind":"translate", "omega":w, "inner":{...}}
//   {"kind":"negate", "inner":{...}}
//   {"kind":"antisym", "half":{...}, "v":v}
//   {"kind":"extremal"}                             the -x^2 class-B extremal
// "phase" and "smoothness" are optional. Unknown fields are rejected.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ergopt/convexity.hpp"
#include "ergopt/criteria.hpp"
#include "ergopt/lax_oleinik.hpp"
#include "ergopt/sturmian.hpp"
#include "ergopt/torus_fn.hpp"

namespace ergopt {

using Json = nlohmann::json;

/// Throws SpecError naming the offending node, e.g. "$.inner.terms[1]".
FunctionSpec spec_from_json(const Json& j);
FunctionSpec parse_spec(const std::string& text);
FunctionSpec load_spec(const std::filesystem::path& path);
Json to_json(const FunctionSpec& f);

/// Header "x,value", rows i/N,value[i], 12 significant digits.
void write_csv(std::ostream& os, const GridFunction& g);
std::string format_csv(double v);

/// Two-space indent and a trailing newline; non-finite numbers become null.
std::string dump(const Json& j);

Json to_json(const BoundedValue& b);
Json to_json(const ConvexityReport& r);
Json to_json(const SubactionSolution& s);  ///< without the g values
Json to_json(const PeriodicOrbitTable& t);
Json to_json(const SturmianMeasure& mu);
Json to_json(const SturmianCertificate& c);  ///< without the R values
Json to_json(const BouschBound& b);
Json to_json(const CriterionReport& r);
Json to_json(const OneSidedDerivativeReport& r);
Json to_json(const ScanRow& row);

/// Columns omega,beta,rotation_p,rotation_q,certificate_pass,worst_margin
/// followed by diagnostics.
void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows);

}  // namespace ergopt
