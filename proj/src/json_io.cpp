#include "ri/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "ri/error.hpp"

namespace ri {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(path + "." + key, "missing field");
  return *it;
}

std::vector<double> number_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

int int_from_json(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<int>();
}

const char* kind_name(SpaceKind k) {
  switch (k) {
    case SpaceKind::LK: return "LK";
    case SpaceKind::LambdaOne: return "LambdaOne";
    case SpaceKind::LambdaOneCapLinf: return "LambdaOneCapLinf";
    case SpaceKind::ImplicitUm: return "ImplicitUm";
    case SpaceKind::NonExistent: return "NonExistent";
  }
  return "";
}

json optional_number(const std::optional<double>& x) {
  return x ? number_to_json(*x) : json(nullptr);
}

}  // namespace

json number_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string() && j.get<std::string>() == "inf") return kInf;
  throw ConfigError(path, "expected a number or \"inf\"");
}

LKSpace space_from_json(const json& j, const std::string& path) {
  LKSpace X;
  X.p = number_from_json(field(j, "p", path), path + ".p");
  X.q = number_from_json(field(j, "q", path), path + ".q");
  std::vector<LogFactor> factors;
  if (j.contains("b")) {
    const json& b = j["b"];
    if (!b.is_array()) throw ConfigError(path + ".b", "expected an array");
    for (std::size_t i = 0; i < b.size(); ++i) {
      const std::string fp = path + ".b[" + std::to_string(i) + "]";
      LogFactor f;
      f.level = int_from_json(field(b[i], "k", fp), fp + ".k");
      if (f.level != 1 && f.level != 2) throw ConfigError(fp + ".k", "log level must be 1 or 2");
      f.alpha0 = number_from_json(field(b[i], "a0", fp), fp + ".a0");
      f.alpha_inf = number_from_json(field(b[i], "aInf", fp), fp + ".aInf");
      if (!std::isfinite(f.alpha0) || !std::isfinite(f.alpha_inf)) {
        throw ConfigError(fp, "log exponents must be finite");
      }
      factors.push_back(f);
    }
  }
  X.b = SlowlyVarying(1.0, std::move(factors));
  if (j.contains("variant")) {
    const json& v = j["variant"];
    if (v == "star") {
      X.variant = Variant::Star;
    } else if (v == "doublestar") {
      X.variant = Variant::DoubleStar;
    } else {
      throw ConfigError(path + ".variant", "expected \"star\" or \"doublestar\"");
    }
  }
  const Admissibility a = is_admissible(X);
  if (!a.admissible) throw ConfigError(path, "space " + X.label() + " is not admissible (" + a.case_label + ")");
  return X;
}

json space_to_json(const LKSpace& X) {
  json b = json::array();
  for (const auto& f : X.b.factors()) b.push_back({{"k", f.level}, {"a0", f.alpha0}, {"aInf", f.alpha_inf}});
  return {{"p", number_to_json(X.p)},
          {"q", number_to_json(X.q)},
          {"b", b},
          {"variant", X.variant == Variant::Star ? "star" : "doublestar"},
          {"label", X.label()}};
}

MonomialCone cone_from_json(const json& j, const std::string& path) {
  const int n = int_from_json(field(j, "n", path), path + ".n");
  const int k = int_from_json(field(j, "k", path), path + ".k");
  std::vector<double> A = number_array(field(j, "A", path), path + ".A");
  try {
    return MonomialCone(n, k, std::move(A));
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
}

json cone_to_json(const MonomialCone& cone) {
  return {{"n", cone.n()}, {"k", cone.k()}, {"A", cone.A()}, {"alpha", cone.alpha()}, {"D", cone.D()}};
}

StepFunction step_from_json(const json& j, const std::string& path) {
  std::vector<double> b = number_array(field(j, "breakpoints", path), path + ".breakpoints");
  std::vector<double> v = number_array(field(j, "values", path), path + ".values");
  try {
    return StepFunction(std::move(b), std::move(v));
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
}

json step_to_json(const StepFunction& f) {
  return {{"breakpoints", std::vector<double>(f.breakpoints().begin(), f.breakpoints().end())},
          {"values", std::vector<double>(f.values().begin(), f.values().end())}};
}

GeometricGrid grid_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  GeometricGrid g;
  if (j.contains("t_min")) g.t_min = number_from_json(j["t_min"], path + ".t_min");
  if (j.contains("t_max")) g.t_max = number_from_json(j["t_max"], path + ".t_max");
  if (j.contains("cells_per_decade")) {
    g.cells_per_decade = int_from_json(j["cells_per_decade"], path + ".cells_per_decade");
  }
  try {
    g.validate();
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
  return g;
}

json grid_to_json(const GeometricGrid& g) {
  return {{"t_min", g.t_min}, {"t_max", g.t_max}, {"cells_per_decade", g.cells_per_decade}};
}

json description_to_json(const SpaceDescription& S) {
  json j = {{"kind", kind_name(S.kind)}, {"label", S.label()}};
  if (S.kind == SpaceKind::LK) {
    j["p"] = number_to_json(S.p);
    j["q"] = number_to_json(S.q);
    j["weight"] = S.weight.label();
    j["variant"] = S.variant == Variant::Star ? "star" : "doublestar";
  }
  if (S.implicit_of) j["implicit_of"] = space_to_json(*S.implicit_of);
  if (!S.reason.empty()) j["reason"] = S.reason;
  return j;
}

json report_to_json(const OptimalityReport& r) {
  return {{"input", r.input},
          {"condition", r.condition},
          {"verdict", r.verdict},
          {"output_space", description_to_json(r.output)},
          {"case", r.case_label},
          {"ratio_min", optional_number(r.ratio_min)},
          {"ratio_max", optional_number(r.ratio_max)},
          {"grid_refinement_drift", optional_number(r.grid_refinement_drift)},
          {"flags", r.flags}};
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string input_hash(const json& j) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
  return buf;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace ri
