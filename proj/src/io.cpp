#include "opuc/io.hpp"

#include "opuc/errors.hpp"
#include "opuc/markoff.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace opuc {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& field, const std::string& what) {
  throw SpecError(ErrorCode::spec_malformed, field, what);
}

[[noreturn]] void out_of_range(const std::string& field, const std::string& what) {
  throw SpecError(ErrorCode::spec_out_of_range, field, what);
}

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || item.key() == a;
    if (!known) malformed(path + "/" + item.key(), "unexpected field");
  }
}

double number(const json& obj, const std::string& path, const char* key, std::optional<double> fallback) {
  const std::string field = path + "/" + key;
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    malformed(field, "required number is missing");
  }
  const json& v = obj.at(key);
  if (!v.is_number()) malformed(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) out_of_range(field, "must be finite");
  return x;
}

GeneratorSpec parse_generator(const json& g, const std::string& path, bool density_only) {
  if (!g.is_object()) malformed(path, "expected an object");
  if (!g.contains("name") || !g.at("name").is_string()) malformed(path + "/name", "expected a generator name");
  const std::string name = g.at("name").get<std::string>();
  const auto parsed = generator_from_string(name);
  if (!parsed || (density_only && *parsed != GeneratorName::lebesgue && *parsed != GeneratorName::poisson)) {
    throw SpecError(ErrorCode::spec_unknown_generator, path + "/name",
                    "unknown generator '" + name + "'" + (density_only ? " for a weight function" : ""));
  }
  GeneratorSpec out;
  switch (*parsed) {
    case GeneratorName::lebesgue:
      only_keys(g, path, {"name"});
      out = GeneratorSpec::lebesgue();
      break;
    case GeneratorName::factorial:
      only_keys(g, path, {"name"});
      out = GeneratorSpec::factorial();
      break;
    case GeneratorName::constant: {
      only_keys(g, path, {"name", "a_re", "a_im"});
      const double re = number(g, path, "a_re", 0.0);
      const double im = number(g, path, "a_im", 0.0);
      if (!(std::hypot(re, im) < 1.0)) out_of_range(path + "/a_re", "|a| must be below 1");
      out = GeneratorSpec::constant(re, im);
      break;
    }
    case GeneratorName::poisson: {
      only_keys(g, path, {"name", "r"});
      const double r = number(g, path, "r", std::nullopt);
      if (!(std::abs(r) < 1.0)) out_of_range(path + "/r", "|r| must be below 1");
      out = GeneratorSpec::poisson(r);
      break;
    }
    case GeneratorName::zhedanov: {
      only_keys(g, path, {"name", "p", "theta0"});
      const double p = number(g, path, "p", std::nullopt);
      const double theta0 = number(g, path, "theta0", std::nullopt);
      if (!(p > 0.0 && p < 1.0)) out_of_range(path + "/p", "must lie in (0, 1)");
      out = GeneratorSpec::zhedanov(p, theta0);
      break;
    }
    case GeneratorName::ell2_szego: {
      only_keys(g, path, {"name", "c", "rho"});
      const double c = number(g, path, "c", std::nullopt);
      const double rho = number(g, path, "rho", std::nullopt);
      if (!(std::abs(c) < 1.0)) out_of_range(path + "/c", "|c| must be below 1");
      if (!(rho >= 0.0 && rho < 1.0)) out_of_range(path + "/rho", "must lie in [0, 1)");
      out = GeneratorSpec::ell2_szego(c, rho);
      break;
    }
    case GeneratorName::random_rotinv: {
      only_keys(g, path, {"name", "profile", "seed"});
      if (!g.contains("profile") || !g.at("profile").is_array()) malformed(path + "/profile", "expected an array");
      std::vector<double> profile;
      double total = 0.0;
      for (std::size_t i = 0; i < g.at("profile").size(); ++i) {
        const json& v = g.at("profile")[i];
        const std::string field = path + "/profile/" + std::to_string(i);
        if (!v.is_number()) malformed(field, "expected a number");
        const double x = v.get<double>();
        if (!(x >= 0.0) || !std::isfinite(x)) out_of_range(field, "must be nonnegative");
        profile.push_back(x);
        total += x;
      }
      if (!(total > 0.0)) out_of_range(path + "/profile", "profile has zero mass");
      std::uint64_t seed = 0;
      if (g.contains("seed")) {
        if (!g.at("seed").is_number_unsigned()) malformed(path + "/seed", "expected an unsigned integer");
        seed = g.at("seed").get<std::uint64_t>();
      }
      out = GeneratorSpec::random_rotinv(std::move(profile), seed);
      break;
    }
  }
  return out;
}

std::vector<Atom> parse_atoms(const json& doc) {
  if (!doc.contains("atoms") || !doc.at("atoms").is_array()) malformed("/atoms", "expected an array of [angle, weight]");
  const json& arr = doc.at("atoms");
  if (arr.empty()) out_of_range("/atoms", "at least one atom is required");
  std::vector<Atom> atoms;
  double total = 0.0;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string field = "/atoms/" + std::to_string(i);
    const json& a = arr[i];
    if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
      malformed(field, "expected [angle, weight]");
    }
    const double angle = a[0].get<double>();
    const double weight = a[1].get<double>();
    if (!std::isfinite(angle)) out_of_range(field + "/0", "angle must be finite");
    if (!(weight > 0.0) || !std::isfinite(weight)) out_of_range(field + "/1", "weight must be positive");
    atoms.push_back({angle, weight});
    total += weight;
  }
  if (std::abs(total - 1.0) > kAtomWeightTolerance) out_of_range("/atoms", "weights must sum to 1");
  return atoms;
}

std::vector<double> parse_samples(const json& doc) {
  if (doc.contains("samples")) {
    if (doc.contains("generator")) malformed("/generator", "give either samples or a generator, not both");
    if (doc.contains("grid")) malformed("/grid", "grid applies only with a generator");
    const json& arr = doc.at("samples");
    if (!arr.is_array() || arr.empty()) malformed("/samples", "expected a nonempty array");
    std::vector<double> samples;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string field = "/samples/" + std::to_string(i);
      if (!arr[i].is_number()) malformed(field, "expected a number");
      const double w = arr[i].get<double>();
      if (!(w >= 0.0) || !std::isfinite(w)) out_of_range(field, "density must be nonnegative");
      samples.push_back(w);
    }
    return samples;
  }
  if (!doc.contains("generator")) malformed("/samples", "weight_function needs samples or a generator");
  const GeneratorSpec g = parse_generator(doc.at("generator"), "/generator", true);
  std::size_t grid = kDefaultDensityGrid;
  if (doc.contains("grid")) {
    if (!doc.at("grid").is_number_unsigned() || doc.at("grid").get<std::uint64_t>() == 0) {
      malformed("/grid", "expected a positive integer");
    }
    grid = doc.at("grid").get<std::size_t>();
  }
  if (g.name == GeneratorName::poisson) return poisson_density_samples(g.r, grid);
  return std::vector<double>(grid, 1.0);
}

}  // namespace

MeasureSpec parse_measure_spec(const json& doc) {
  if (!doc.is_object()) malformed("", "document must be a JSON object");
  if (!doc.contains("kind") || !doc.at("kind").is_string()) malformed("/kind", "expected a string");
  std::string label;
  if (doc.contains("label")) {
    if (!doc.at("label").is_string()) malformed("/label", "expected a string");
    label = doc.at("label").get<std::string>();
  }
  const std::string kind = doc.at("kind").get<std::string>();
  MeasureSpec spec;
  if (kind == "alpha_defined") {
    only_keys(doc, "", {"kind", "label", "generator"});
    if (!doc.contains("generator")) malformed("/generator", "alpha_defined needs a generator");
    spec = MeasureSpec::from_generator(parse_generator(doc.at("generator"), "/generator", false), label);
  } else if (kind == "atomic") {
    only_keys(doc, "", {"kind", "label", "atoms"});
    spec = MeasureSpec::atomic(parse_atoms(doc), label);
  } else if (kind == "weight_function") {
    only_keys(doc, "", {"kind", "label", "samples", "generator", "grid"});
    spec = MeasureSpec::weight_function(parse_samples(doc), label);
  } else {
    malformed("/kind", "unknown kind '" + kind + "'");
  }
  try {
    validate(spec);
  } catch (const DomainError& e) {
    out_of_range("", e.what());
  }
  return spec;
}

MeasureSpec parse_measure_spec(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    malformed("", e.what());
  }
  return parse_measure_spec(doc);
}

MeasureSpec parse_measure_spec(const char* document) { return parse_measure_spec(std::string(document)); }

MeasureSpec load_measure_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) malformed("", "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_measure_spec(text.str());
}

json to_json(const GeneratorSpec& g) {
  json out{{"name", to_string(g.name)}};
  switch (g.name) {
    case GeneratorName::lebesgue:
    case GeneratorName::factorial:
      break;
    case GeneratorName::constant:
      out["a_re"] = g.a_re;
      out["a_im"] = g.a_im;
      break;
    case GeneratorName::poisson:
      out["r"] = g.r;
      break;
    case GeneratorName::zhedanov:
      out["p"] = g.p;
      out["theta0"] = g.theta0;
      break;
    case GeneratorName::ell2_szego:
      out["c"] = g.c;
      out["rho"] = g.rho;
      break;
    case GeneratorName::random_rotinv:
      out["profile"] = g.profile;
      out["seed"] = g.seed;
      break;
  }
  return out;
}

json to_json(const MeasureSpec& spec) {
  json out{{"kind", to_string(spec.kind)}};
  if (!spec.label.empty()) out["label"] = spec.label;
  switch (spec.kind) {
    case MeasureKind::alpha_defined:
      out["generator"] = to_json(*spec.generator);
      break;
    case MeasureKind::atomic: {
      json atoms = json::array();
      for (const auto& a : spec.atoms) atoms.push_back({a.angle, a.weight});
      out["atoms"] = atoms;
      break;
    }
    case MeasureKind::weight_function:
      out["samples"] = spec.samples;
      break;
  }
  return out;
}

json index_to_json(const Index& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max()) {
    return static_cast<std::int64_t>(x);
  }
  return format_index(x);
}

json to_json(const ExponentSet& set) {
  json intervals = json::array();
  for (const auto& iv : set.intervals()) intervals.push_back({index_to_json(iv.lo), index_to_json(iv.hi)});
  return {{"intervals", intervals}, {"provenance", set.provenance()}};
}

json complex_to_json(const Complex& z, int digits) {
  return json::array({format_real(z.re, digits), format_real(z.im, digits)});
}

}  // namespace opuc
