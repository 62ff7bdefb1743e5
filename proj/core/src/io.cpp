#include "ergopt/io.hpp"

#include <fmt/format.h>

#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace ergopt {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void fail_at(const std::string& path, const std::string& what) {
  throw SpecError(path + ": " + what);
}

void only_fields(const Json& j, const std::string& path, std::set<std::string> allowed) {
  allowed.insert("kind");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) fail_at(path, "unknown field '" + key + "'");
}

const Json& field(const Json& j, const std::string& path, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) fail_at(path, std::string("missing field '") + name + "'");
  return *it;
}

double number(const Json& j, const std::string& path, const char* name) {
  const Json& v = field(j, path, name);
  if (!v.is_number()) fail_at(path + "." + name, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail_at(path + "." + name, "expected a finite number");
  return x;
}

std::vector<double> number_list(const Json& v, const std::string& path) {
  if (!v.is_array()) fail_at(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail_at(path + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

FunctionSpec parse_node(const Json& j, const std::string& path) {
  if (!j.is_object()) fail_at(path, "expected an object with a 'kind' field");
  const Json& kind_v = field(j, path, "kind");
  if (!kind_v.is_string()) fail_at(path + ".kind", "expected a string");
  const std::string kind = kind_v.get<std::string>();

  try {
    if (kind == "cos") {
      only_fields(j, path, {"freq", "phase"});
      const Json& fr = field(j, path, "freq");
      if (!fr.is_number_integer() || fr.get<long long>() < 1)
        fail_at(path + ".freq", "expected a positive integer");
      const double phase = j.contains("phase") ? number(j, path, "phase") : 0.0;
      return cosine(fr.get<int>(), phase);
    }
    if (kind == "pwpoly") {
      only_fields(j, path, {"breaks", "coeffs", "smoothness"});
      auto breaks = number_list(field(j, path, "breaks"), path + ".breaks");
      const Json& cs = field(j, path, "coeffs");
      if (!cs.is_array()) fail_at(path + ".coeffs", "expected an array of coefficient arrays");
      std::vector<std::vector<double>> coeffs;
      for (std::size_t i = 0; i < cs.size(); ++i)
        coeffs.push_back(number_list(cs[i], path + ".coeffs[" + std::to_string(i) + "]"));
      std::optional<int> declared;
      if (j.contains("smoothness")) {
        const Json& s = j["smoothness"];
        if (!s.is_number_integer()) fail_at(path + ".smoothness", "expected an integer");
        declared = s.get<int>();
      }
      return piecewise_poly(std::move(breaks), std::move(coeffs), declared);
    }
    if (kind == "const") {
      only_fields(j, path, {"value"});
      return constant(number(j, path, "value"));
    }
    if (kind == "sum") {
      only_fields(j, path, {"terms"});
      const Json& ts = field(j, path, "terms");
      if (!ts.is_array() || ts.empty()) fail_at(path + ".terms", "expected a non-empty array");
      std::vector<FunctionSpec> terms;
      for (std::size_t i = 0; i < ts.size(); ++i)
        terms.push_back(parse_node(ts[i], path + ".terms[" + std::to_string(i) + "]"));
      return sum(std::move(terms));
    }
    if (kind == "scale") {
      only_fields(j, path, {"factor", "inner"});
      return scale(number(j, path, "factor"), parse_node(field(j, path, "inner"), path + ".inner"));
    }
    if (kind == "translate") {
      only_fields(j, path, {"omega", "inner"});
      return translate(number(j, path, "omega"),
                       parse_node(field(j, path, "inner"), path + ".inner"));
    }
    if (kind == "negate") {
      only_fields(j, path, {"inner"});
      return negate(parse_node(field(j, path, "inner"), path + ".inner"));
    }
    if (kind == "antisym") {
      only_fields(j, path, {"half", "v"});
      return antisymmetric_extension(parse_node(field(j, path, "half"), path + ".half"),
                                     number(j, path, "v"));
    }
    if (kind == "extremal") {
      only_fields(j, path, {});
      return neg_square_extremal();
    }
  } catch (const SpecError& e) {
    // Errors from nested nodes already carry their path.
    const std::string msg = e.what();
    if (msg.rfind("$", 0) == 0) throw;
    fail_at(path, msg);
  } catch (const Json::exception& e) {
    fail_at(path, e.what());
  }
  fail_at(path + ".kind", "unknown kind '" + kind + "'");
}

Json margin_json(const Margin& m) {
  return {{"name", m.name},
          {"slack", m.slack},
          {"error_bound", m.error_bound},
          {"witness_x", m.witness_x},
          {"holds", m.slack > m.error_bound}};
}

}  // namespace

FunctionSpec spec_from_json(const Json& j) { return parse_node(j, "$"); }

FunctionSpec parse_spec(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SpecError(std::string("$: invalid JSON: ") + e.what());
  }
  return spec_from_json(j);
}

FunctionSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_spec(ss.str());
  } catch (const SpecError& e) {
    throw SpecError(path.string() + ": " + e.what());
  }
}

Json to_json(const FunctionSpec& f) {
  return std::visit(
      overloaded{
          [](const CosineNode& c) -> Json {
            return {{"kind", "cos"}, {"freq", c.frequency}, {"phase", c.phase}};
          },
          [](const PiecewisePolyNode& p) -> Json {
            return {{"kind", "pwpoly"}, {"breaks", p.breaks}, {"coeffs", p.coeffs}};
          },
          [](const SumNode& s) -> Json {
            Json terms = Json::array();
            for (const auto& t : s.terms) terms.push_back(to_json(t));
            return {{"kind", "sum"}, {"terms", terms}};
          },
          [](const ScaleNode& s) -> Json {
            return {{"kind", "scale"}, {"factor", s.factor}, {"inner", to_json(s.inner)}};
          },
          [](const TranslateNode& t) -> Json {
            return {{"kind", "translate"}, {"omega", t.omega}, {"inner", to_json(t.inner)}};
          },
          [](const NegateNode& n) -> Json { return {{"kind", "negate"}, {"inner", to_json(n.inner)}}; },
          [](const AntisymmetricExtensionNode& a) -> Json {
            return {{"kind", "antisym"}, {"half", to_json(a.half)}, {"v", a.v}};
          },
      },
      f.node().value);
}

// Negative zero prints as 0.
std::string format_csv(double v) { return fmt::format("{:.12g}", v == 0.0 ? 0.0 : v); }

void write_csv(std::ostream& os, const GridFunction& g) {
  os << "x,value\n";
  const auto n = static_cast<double>(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    os << format_csv(static_cast<double>(i) / n) << ',' << format_csv(g.values()[i]) << '\n';
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json to_json(const BoundedValue& b) {
  return {{"value", b.value}, {"error_bound", b.error_bound}, {"witness_x", b.witness_x}};
}

Json to_json(const ConvexityReport& r) {
  Json table = Json::array();
  for (const auto& e : r.delta_table)
    table.push_back({{"delta", e.delta},
                     {"xi_star", e.xi_star},
                     {"error_bound", e.error_bound},
                     {"witness_x", e.witness_x}});
  Json wit = Json::array();
  for (const auto& w : r.witnesses) wit.push_back({{"x", w.x}, {"delta", w.delta}, {"ratio", w.ratio}});
  return {{"eta", r.eta},
          {"infinite", r.infinite},
          {"method", to_string(r.method)},
          {"bound_direction", r.lower_bound ? "lower_bound" : "estimate"},
          {"error_bound", r.error_bound},
          {"grid_n", r.grid_n},
          {"min_delta_steps", r.min_delta_steps},
          {"delta_table", table},
          {"witnesses", wit}};
}

Json to_json(const SubactionSolution& s) {
  return {{"beta", s.beta},
          {"residual", s.residual},
          {"iterations", s.iterations},
          {"converged", s.converged},
          {"last_step", s.last_step},
          {"error_estimate", s.error_estimate},
          {"d", s.d},
          {"grid_n", s.g.size()},
          {"tol", s.tol},
          {"relaxation", s.relaxation}};
}

Json to_json(const PeriodicOrbitTable& t) {
  const auto& b = t.best_orbit();
  return {{"d", t.d},
          {"max_period", t.max_period},
          {"orbit_count", t.orbits.size()},
          {"best", {{"period", b.period},
                    {"numerator", b.numerator},
                    {"denominator", b.denominator},
                    {"points", b.points(t.d)},
                    {"average", b.average}}}};
}

Json to_json(const SturmianMeasure& mu) {
  return {{"p", mu.p},
          {"q", mu.q},
          {"word", mu.word},
          {"denominator", mu.denominator},
          {"numerators", mu.numerators},
          {"orbit", mu.orbit},
          {"semicircle", {mu.semicircle_start, mu.semicircle_start + 0.5}},
          {"span", mu.span},
          {"weight", mu.weight()}};
}

Json to_json(const SturmianCertificate& c) {
  Json arcs = Json::array();
  for (const auto& a : c.zero_set_arcs)
    arcs.push_back({{"start", a.start}, {"width", a.width}, {"zero", a.zero}});
  Json pair = nullptr;
  if (c.antipodal_pair) pair = {c.antipodal_pair->first, c.antipodal_pair->second};
  return {{"status", to_string(c.status)},
          {"pass", c.pass},
          {"zero_set_arcs", arcs},
          {"antipodal_pair", pair},
          {"positivity_arc", {{"start", c.positivity_arc.start}, {"width", c.positivity_arc.width}}},
          {"epsilon_R", c.epsilon_R},
          {"w_max", c.w_max},
          {"margin", c.margin},
          {"grid_n", c.R.size()},
          {"note", c.note}};
}

Json to_json(const BouschBound& b) {
  return {{"bound", b.bound},
          {"branch_sum", b.branch_sum},
          {"xi_star_g", b.xi_star_g},
          {"best_branch", b.best_branch}};
}

Json to_json(const CriterionReport& r) {
  Json margins = Json::array();
  for (const auto& m : r.margins) margins.push_back(margin_json(m));
  return {{"criterion", to_string(r.criterion)},
          {"status", to_string(r.status)},
          {"pass", r.pass},
          {"margins", margins},
          {"eta", r.eta},
          {"grid_n", r.grid_n},
          {"values", r.values},
          {"tolerances", r.tolerances},
          {"route", r.route},
          {"note", r.note}};
}

Json to_json(const OneSidedDerivativeReport& r) {
  Json jumps = Json::array();
  for (const auto& j : r.jumps)
    jumps.push_back({{"index", j.index},
                     {"x", j.x},
                     {"right", j.right},
                     {"left", j.left},
                     {"magnitude", j.magnitude}});
  return {{"jumps", jumps},
          {"jump_threshold", r.jump_threshold},
          {"most_negative_jump", r.most_negative_jump},
          {"total_variation", r.total_variation}};
}

Json to_json(const ScanRow& row) {
  return {{"omega", row.omega},
          {"beta", row.beta},
          {"residual", row.residual},
          {"iterations", row.iterations},
          {"converged", row.converged},
          {"rotation_p", row.rotation_p},
          {"rotation_q", row.rotation_q},
          {"sturmian_value", row.sturmian_value},
          {"certificate", to_string(row.certificate)},
          {"certificate_pass", row.certificate_pass()},
          {"worst_margin", row.worst_margin},
          {"epsilon_R", row.epsilon_R},
          {"w_max", row.w_max},
          {"note", row.note}};
}

void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
  os << "omega,beta,rotation_p,rotation_q,certificate_pass,worst_margin,"
        "certificate,sturmian_value,residual,iterations,converged\n";
  for (const auto& r : rows) {
    os << format_csv(r.omega) << ',' << format_csv(r.beta) << ',' << r.rotation_p << ','
       << r.rotation_q << ',' << (r.certificate_pass() ? "true" : "false") << ','
       << format_csv(r.worst_margin) << ',' << to_string(r.certificate) << ','
       << format_csv(r.sturmian_value) << ',' << format_csv(r.residual) << ',' << r.iterations
       << ',' << (r.converged ? "true" : "false") << '\n';
  }
}

}  // namespace ergopt
