#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "orlicz_risk/errors.hpp"
#include "orlicz_risk/prob_space.hpp"
#include "orlicz_risk/risk.hpp"
#include "orlicz_risk/young.hpp"

namespace orlicz_risk {

/// Parse or validation failure, tagged with the JSON path of the offending field.
class ScenarioError : public Error {
public:
  ScenarioError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

struct NamedAlgebra {
  std::string name;
  SubAlgebra algebra;
};

struct NamedPosition {
  std::string name;
  RandomVar values;
};

struct YoungSpec {
  std::string family;  // power | linf | exp | piecewise
  double p = 0.0;
  std::vector<double> knots;
  std::vector<double> slopes;
  std::optional<double> cap;
};

struct RiskSpec {
  std::string measure;  // entropic | worst_case | linear
  double gamma = 0.0;
};

struct Scenario {
  std::vector<std::string> labels;
  SpacePtr space;
  std::vector<NamedAlgebra> algebras;
  std::vector<std::string> filtration;  // algebra names, coarsest first; may be empty
  std::vector<NamedPosition> positions;
  YoungSpec young;
  RiskSpec risk;

  const SubAlgebra& algebra(const std::string& name) const;
  std::vector<std::string> atom_labels(const SubAlgebra& F, std::size_t k) const;
};

/// Validates and builds a scenario. Every error names the JSON path.
Scenario parse_scenario(const nlohmann::json& doc);

/// Reads and parses a scenario file.
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical JSON form; `parse_scenario(to_json(s))` reproduces `s`.
nlohmann::json to_json(const Scenario& s);

YoungFn build_young(const YoungSpec& spec);
CondRiskMeasure build_risk(const RiskSpec& spec);

/// Filtration named by the scenario, or nullopt when none is given.
std::optional<Filtration> build_filtration(const Scenario& s);

bool equivalent(const Scenario& a, const Scenario& b);

} // namespace orlicz_risk
