#include "orlicz_risk/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>

namespace orlicz_risk {

using nlohmann::json;

namespace {

std::string at(const std::string& path, const std::string& key) { return path + "." + key; }
std::string at(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const json& field(const json& obj, const std::string& path, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ScenarioError(at(path, key), "missing required field");
  }
  return *it;
}

void require_object(const json& v, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  if (!v.is_object()) {
    throw ScenarioError(path, "expected an object");
  }
  for (const auto& [key, _] : v.items()) {
    bool known = false;
    for (const char* a : allowed) {
      known = known || key == a;
    }
    if (!known) {
      throw ScenarioError(at(path, key), "unknown field");
    }
  }
}

const json& array_at(const json& v, const std::string& path, bool nonempty = true) {
  if (!v.is_array()) {
    throw ScenarioError(path, "expected an array");
  }
  if (nonempty && v.empty()) {
    throw ScenarioError(path, "must not be empty");
  }
  return v;
}

std::string string_at(const json& v, const std::string& path) {
  if (!v.is_string()) {
    throw ScenarioError(path, "expected a string");
  }
  std::string s = v.get<std::string>();
  if (s.empty()) {
    throw ScenarioError(path, "must not be empty");
  }
  return s;
}

double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) {
    throw ScenarioError(path, "expected a number");
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    throw ScenarioError(path, "must be finite");
  }
  return d;
}

std::vector<double> numbers_at(const json& v, const std::string& path) {
  array_at(v, path);
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(number_at(v[i], at(path, i)));
  }
  return out;
}

YoungSpec parse_young(const json& v, const std::string& path) {
  require_object(v, path, {"family", "params"});
  YoungSpec spec;
  spec.family = string_at(field(v, path, "family"), at(path, "family"));
  const std::string ppath = at(path, "params");
  const json params = v.contains("params") ? v.at("params") : json::object();
  if (spec.family == "power") {
    require_object(params, ppath, {"p"});
    spec.p = number_at(field(params, ppath, "p"), at(ppath, "p"));
    if (spec.p < 1.0) {
      throw ScenarioError(at(ppath, "p"), "power family needs p >= 1");
    }
  } else if (spec.family == "linf" || spec.family == "exp") {
    require_object(params, ppath, {});
  } else if (spec.family == "piecewise") {
    require_object(params, ppath, {"knots", "slopes", "cap"});
    spec.knots = params.contains("knots")
                     ? (params.at("knots").empty() ? std::vector<double>{}
                                                   : numbers_at(params.at("knots"),
                                                                at(ppath, "knots")))
                     : std::vector<double>{};
    spec.slopes = numbers_at(field(params, ppath, "slopes"), at(ppath, "slopes"));
    if (params.contains("cap")) {
      spec.cap = number_at(params.at("cap"), at(ppath, "cap"));
    }
    try {
      build_young(spec);
    } catch (const ParameterError& e) {
      throw ScenarioError(ppath, e.what());
    }
  } else {
    throw ScenarioError(at(path, "family"),
                        "unknown family '" + spec.family + "' (power, linf, exp, piecewise)");
  }
  return spec;
}

RiskSpec parse_risk(const json& v, const std::string& path) {
  require_object(v, path, {"measure", "params"});
  RiskSpec spec;
  spec.measure = string_at(field(v, path, "measure"), at(path, "measure"));
  const std::string ppath = at(path, "params");
  const json params = v.contains("params") ? v.at("params") : json::object();
  if (spec.measure == "entropic") {
    require_object(params, ppath, {"gamma"});
    spec.gamma = number_at(field(params, ppath, "gamma"), at(ppath, "gamma"));
    if (!(spec.gamma > 0.0)) {
      throw ScenarioError(at(ppath, "gamma"), "entropic risk needs gamma > 0");
    }
  } else if (spec.measure == "worst_case" || spec.measure == "linear") {
    require_object(params, ppath, {});
  } else {
    throw ScenarioError(at(path, "measure"), "unknown measure '" + spec.measure +
                                                 "' (entropic, worst_case, linear)");
  }
  return spec;
}

} // namespace

const SubAlgebra& Scenario::algebra(const std::string& name) const {
  for (const auto& a : algebras) {
    if (a.name == name) {
      return a.algebra;
    }
  }
  throw StructuralError("no algebra named '" + name + "'");
}

std::vector<std::string> Scenario::atom_labels(const SubAlgebra& F, std::size_t k) const {
  std::vector<std::string> out;
  for (std::size_t i : F.atom(k)) {
    out.push_back(labels.at(i));
  }
  return out;
}

Scenario parse_scenario(const json& doc) {
  const std::string root = "$";
  require_object(doc, root, {"outcomes", "algebras", "filtration", "positions", "young", "risk"});
  Scenario s;

  const std::string opath = at(root, "outcomes");
  const json& outcomes = array_at(field(doc, root, "outcomes"), opath);
  std::map<std::string, std::size_t> index;
  std::vector<double> probs;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const std::string p = at(opath, i);
    require_object(outcomes[i], p, {"label", "prob"});
    const std::string label = string_at(field(outcomes[i], p, "label"), at(p, "label"));
    const double prob = number_at(field(outcomes[i], p, "prob"), at(p, "prob"));
    if (!(prob > 0.0)) {
      throw ScenarioError(at(p, "prob"), "probabilities must be strictly positive");
    }
    if (!index.emplace(label, i).second) {
      throw ScenarioError(at(p, "label"), "duplicate outcome label '" + label + "'");
    }
    s.labels.push_back(label);
    probs.push_back(prob);
  }
  try {
    s.space = FiniteProbSpace::make(probs);
  } catch (const Error& e) {
    throw ScenarioError(opath, e.what());
  }
  const std::size_t n = probs.size();

  std::set<std::string> names;
  auto claim_name = [&](const std::string& name, const std::string& path) {
    if (!names.insert(name).second) {
      throw ScenarioError(path, "duplicate name '" + name + "'");
    }
  };

  const std::string apath = at(root, "algebras");
  const json& algebras = array_at(field(doc, root, "algebras"), apath);
  for (std::size_t a = 0; a < algebras.size(); ++a) {
    const std::string p = at(apath, a);
    require_object(algebras[a], p, {"name", "atoms"});
    const std::string name = string_at(field(algebras[a], p, "name"), at(p, "name"));
    claim_name(name, at(p, "name"));
    const std::string atoms_path = at(p, "atoms");
    const json& atoms = array_at(field(algebras[a], p, "atoms"), atoms_path);
    std::vector<std::vector<std::size_t>> parts;
    std::vector<bool> seen(n, false);
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      const std::string kp = at(atoms_path, k);
      const json& atom = array_at(atoms[k], kp);
      std::vector<std::size_t> part;
      for (std::size_t j = 0; j < atom.size(); ++j) {
        const std::string jp = at(kp, j);
        const std::string label = string_at(atom[j], jp);
        auto it = index.find(label);
        if (it == index.end()) {
          throw ScenarioError(jp, "unknown outcome label '" + label + "'");
        }
        if (seen[it->second]) {
          throw ScenarioError(jp, "outcome '" + label + "' appears in more than one atom");
        }
        seen[it->second] = true;
        part.push_back(it->second);
      }
      parts.push_back(std::move(part));
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!seen[i]) {
        throw ScenarioError(atoms_path, "outcome '" + s.labels[i] + "' is in no atom");
      }
    }
    s.algebras.push_back({name, SubAlgebra(n, std::move(parts))});
  }

  if (doc.contains("filtration")) {
    const std::string fpath = at(root, "filtration");
    const json& stages = array_at(doc.at("filtration"), fpath);
    std::vector<SubAlgebra> chain;
    for (std::size_t t = 0; t < stages.size(); ++t) {
      const std::string name = string_at(stages[t], at(fpath, t));
      bool found = false;
      for (const auto& a : s.algebras) {
        if (a.name == name) {
          chain.push_back(a.algebra);
          found = true;
        }
      }
      if (!found) {
        throw ScenarioError(at(fpath, t), "unknown algebra '" + name + "'");
      }
      s.filtration.push_back(name);
    }
    try {
      Filtration check(std::move(chain));
    } catch (const StructuralError& e) {
      throw ScenarioError(fpath, e.what());
    }
  }

  const std::string ppath = at(root, "positions");
  const json& positions = array_at(field(doc, root, "positions"), ppath);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const std::string p = at(ppath, i);
    require_object(positions[i], p, {"name", "values"});
    const std::string name = string_at(field(positions[i], p, "name"), at(p, "name"));
    claim_name(name, at(p, "name"));
    const std::string vpath = at(p, "values");
    const json& values = field(positions[i], p, "values");
    if (!values.is_object()) {
      throw ScenarioError(vpath, "expected an object mapping outcome labels to numbers");
    }
    std::vector<double> v(n);
    for (const auto& [label, val] : values.items()) {
      auto it = index.find(label);
      if (it == index.end()) {
        throw ScenarioError(at(vpath, label), "unknown outcome label");
      }
      v[it->second] = number_at(val, at(vpath, label));
    }
    if (values.size() != n) {
      for (std::size_t o = 0; o < n; ++o) {
        if (!values.contains(s.labels[o])) {
          throw ScenarioError(vpath, "missing value for outcome '" + s.labels[o] + "'");
        }
      }
    }
    s.positions.push_back({name, RandomVar(s.space, std::move(v))});
  }

  s.young = parse_young(field(doc, root, "young"), at(root, "young"));
  s.risk = parse_risk(field(doc, root, "risk"), at(root, "risk"));
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ScenarioError("$", "cannot open scenario file '" + path.string() + "'");
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError("$", std::string("malformed JSON: ") + e.what());
  }
  return parse_scenario(doc);
}

json to_json(const Scenario& s) {
  json doc = json::object();
  json outcomes = json::array();
  for (std::size_t i = 0; i < s.labels.size(); ++i) {
    outcomes.push_back({{"label", s.labels[i]}, {"prob", s.space->prob(i)}});
  }
  doc["outcomes"] = outcomes;
  json algebras = json::array();
  for (const auto& a : s.algebras) {
    json atoms = json::array();
    for (std::size_t k = 0; k < a.algebra.n_atoms(); ++k) {
      atoms.push_back(s.atom_labels(a.algebra, k));
    }
    algebras.push_back({{"name", a.name}, {"atoms", atoms}});
  }
  doc["algebras"] = algebras;
  if (!s.filtration.empty()) {
    doc["filtration"] = s.filtration;
  }
  json positions = json::array();
  for (const auto& p : s.positions) {
    json values = json::object();
    for (std::size_t i = 0; i < s.labels.size(); ++i) {
      values[s.labels[i]] = p.values[i];
    }
    positions.push_back({{"name", p.name}, {"values", values}});
  }
  doc["positions"] = positions;
  json young = {{"family", s.young.family}, {"params", json::object()}};
  if (s.young.family == "power") {
    young["params"]["p"] = s.young.p;
  } else if (s.young.family == "piecewise") {
    young["params"]["knots"] = s.young.knots;
    young["params"]["slopes"] = s.young.slopes;
    if (s.young.cap) {
      young["params"]["cap"] = *s.young.cap;
    }
  }
  doc["young"] = young;
  json risk = {{"measure", s.risk.measure}, {"params", json::object()}};
  if (s.risk.measure == "entropic") {
    risk["params"]["gamma"] = s.risk.gamma;
  }
  doc["risk"] = risk;
  return doc;
}

YoungFn build_young(const YoungSpec& spec) {
  if (spec.family == "power") {
    return make_power(spec.p);
  }
  if (spec.family == "linf") {
    return make_linf();
  }
  if (spec.family == "exp") {
    return make_exp();
  }
  if (spec.family == "piecewise") {
    return make_piecewise(spec.knots, spec.slopes, spec.cap);
  }
  throw ParameterError("unknown Young family '" + spec.family + "'");
}

CondRiskMeasure build_risk(const RiskSpec& spec) {
  if (spec.measure == "entropic") {
    return entropic(spec.gamma);
  }
  if (spec.measure == "worst_case") {
    return worst_case();
  }
  if (spec.measure == "linear") {
    return linear_risk();
  }
  throw ParameterError("unknown risk measure '" + spec.measure + "'");
}

std::optional<Filtration> build_filtration(const Scenario& s) {
  if (s.filtration.empty()) {
    return std::nullopt;
  }
  std::vector<SubAlgebra> chain;
  for (const auto& name : s.filtration) {
    chain.push_back(s.algebra(name));
  }
  return Filtration(std::move(chain));
}

bool equivalent(const Scenario& a, const Scenario& b) {
  if (a.labels != b.labels || !(*a.space == *b.space) || a.filtration != b.filtration ||
      a.algebras.size() != b.algebras.size() || a.positions.size() != b.positions.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.algebras.size(); ++i) {
    if (a.algebras[i].name != b.algebras[i].name ||
        !(a.algebras[i].algebra == b.algebras[i].algebra)) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.positions.size(); ++i) {
    if (a.positions[i].name != b.positions[i].name ||
        !(a.positions[i].values == b.positions[i].values)) {
      return false;
    }
  }
  const auto& ya = a.young;
  const auto& yb = b.young;
  return ya.family == yb.family && ya.p == yb.p && ya.knots == yb.knots &&
         ya.slopes == yb.slopes && ya.cap == yb.cap && a.risk.measure == b.risk.measure &&
         a.risk.gamma == b.risk.gamma;
}

} // namespace orlicz_risk
