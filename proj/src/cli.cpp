#include "orlicz_risk/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "orlicz_risk/orlicz.hpp"
#include "orlicz_risk/risk.hpp"
#include "orlicz_risk/sampling.hpp"

namespace orlicz_risk::cli {

using ojson = nlohmann::ordered_json;

namespace {

constexpr double kHomogeneityTol = 1e-9;
constexpr std::size_t kAxiomTrials = 16;
constexpr std::size_t kPropertyTrials = 8;
constexpr std::size_t kScalarizationSamples = 3;

ojson num(double v) {
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  return round12(v);
}

std::string fmt(double v) {
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string join_labels(const std::vector<std::string>& labels) {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out += (i ? ";" : "") + labels[i];
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    out += (c == '"') ? "\"\"" : std::string(1, c);
  }
  return out + "\"";
}

double rel_scale(double a) { return std::max(1.0, std::abs(a)); }

struct Context {
  const Scenario& s;
  const RunOptions& opts;
  CommandResult& out;
  sampling::Rng rng;

  Context(const Scenario& sc, const RunOptions& o, CommandResult& r)
      : s(sc), opts(o), out(r), rng(o.seed) {}

  CheckResult& check(const std::string& name, double allowed) {
    for (auto& c : out.checks) {
      if (c.name == name) {
        return c;
      }
    }
    out.checks.push_back(CheckResult{.name = name, .allowed = allowed});
    return out.checks.back();
  }

  void row(const std::string& section, const std::string& position, const std::string& algebra,
           std::size_t atom, const SubAlgebra& F, const std::string& quantity, double value) {
    out.rows.push_back(CsvRow{section, position, algebra, atom,
                              join_labels(s.atom_labels(F, atom)), quantity, value});
  }

  ojson atom_header(const SubAlgebra& F, std::size_t k) const {
    ojson a = ojson::object();
    a["atom"] = k;
    a["labels"] = s.atom_labels(F, k);
    return a;
  }
};

std::string where(const std::string& position, const std::string& algebra, std::size_t k) {
  return position + " | " + algebra + " | atom " + std::to_string(k);
}

// ---------------------------------------------------------------- norms

struct NormPair {
  CondNorm lux;
  CondNorm ame;
};

NormPair both_norms(const RandomVar& x, const SubAlgebra& F, const YoungFn& phi, Parallelism m) {
  return {luxemburg_norm(x, F, phi, m), amemiya_norm(x, F, phi, m)};
}

void record_equivalence(Context& cx, const NormPair& n, const SubAlgebra& F,
                        const std::string& tag) {
  auto& eq = cx.check("norm_equivalence", cx.opts.tol_norm);
  const auto lux = per_atom_values(n.lux.per_atom, F);
  const auto ame = per_atom_values(n.ame.per_atom, F);
  for (std::size_t k = 0; k < F.n_atoms(); ++k) {
    const double s = rel_scale(lux[k]);
    const double dev = std::max(lux[k] - ame[k], ame[k] - 2.0 * lux[k]) / s;
    eq.record(dev, tag + " atom " + std::to_string(k));
  }
}

void norm_section(Context& cx, const YoungFn& phi) {
  ojson list = ojson::array();
  for (const auto& pos : cx.s.positions) {
    for (const auto& alg : cx.s.algebras) {
      const SubAlgebra& F = alg.algebra;
      const NormPair n = both_norms(pos.values, F, phi, cx.opts.mode);
      record_equivalence(cx, n, F, pos.name + " | " + alg.name);
      const auto lux = per_atom_values(n.lux.per_atom, F);
      const auto ame = per_atom_values(n.ame.per_atom, F);
      ojson atoms = ojson::array();
      for (std::size_t k = 0; k < F.n_atoms(); ++k) {
        ojson a = cx.atom_header(F, k);
        a["luxemburg"] = num(lux[k]);
        a["luxemburg_attained"] = static_cast<bool>(n.lux.attained[k]);
        a["amemiya"] = num(ame[k]);
        a["amemiya_attained"] = static_cast<bool>(n.ame.attained[k]);
        atoms.push_back(a);
        cx.row("norm", pos.name, alg.name, k, F, "luxemburg", lux[k]);
        cx.row("norm", pos.name, alg.name, k, F, "amemiya", ame[k]);
      }
      list.push_back(ojson{{"position", pos.name}, {"algebra", alg.name}, {"atoms", atoms}});
    }
  }
  cx.out.results["young"] = phi.label();
  cx.out.results["norms"] = list;
}

void norm_properties(Context& cx, const YoungFn& phi) {
  const auto validation = validate(phi);
  auto& young = cx.check("young_validation", 0.0);
  young.record(validation.ok ? 0.0 : 1.0, validation.failure);

  auto& homog = cx.check("norm_homogeneity", kHomogeneityTol);
  auto& tri = cx.check("norm_triangle", kHomogeneityTol);
  auto& lattice = cx.check("norm_lattice", kHomogeneityTol);
  auto& embed = cx.check("l1_embedding", cx.opts.tol_norm);
  auto& holder = cx.check("holder_bound", cx.opts.tol_norm);
  const auto& space = cx.s.space;
  const SubAlgebra trivial = SubAlgebra::trivial(space->size());
  for (const auto& pos : cx.s.positions) {
    const RandomVar& x = pos.values;
    const double whole = per_atom_values(amemiya_norm(x, trivial, phi).per_atom, trivial)[0];
    for (const auto& alg : cx.s.algebras) {
      const SubAlgebra& F = alg.algebra;
      const std::string tag = pos.name + " | " + alg.name;
      const NormPair base = both_norms(x, F, phi, cx.opts.mode);
      const auto lux = per_atom_values(base.lux.per_atom, F);
      const auto ame = per_atom_values(base.ame.per_atom, F);

      const double e = expectation(base.ame.per_atom);
      embed.record((e - whole) / rel_scale(whole), tag);

      for (std::size_t t = 0; t < kPropertyTrials; ++t) {
        const RandomVar lam = sampling::uniform_measurable(cx.rng, space, F, -3.0, 3.0);
        const RandomVar z = sampling::uniform_var(cx.rng, space, -2.0, 2.0);
        const RandomVar shrink = sampling::uniform_var(cx.rng, space, 0.0, 1.0);
        const NormPair scaled = both_norms(lam * x, F, phi, cx.opts.mode);
        const NormPair nz = both_norms(z, F, phi, cx.opts.mode);
        const NormPair sum = both_norms(x + z, F, phi, cx.opts.mode);
        const NormPair small = both_norms(shrink * x, F, phi, cx.opts.mode);
        const auto lamv = per_atom_values(lam, F);
        const auto sl = per_atom_values(scaled.lux.per_atom, F);
        const auto sa = per_atom_values(scaled.ame.per_atom, F);
        const auto zl = per_atom_values(nz.lux.per_atom, F);
        const auto za = per_atom_values(nz.ame.per_atom, F);
        const auto ul = per_atom_values(sum.lux.per_atom, F);
        const auto ua = per_atom_values(sum.ame.per_atom, F);
        const auto ml = per_atom_values(small.lux.per_atom, F);
        const auto ma = per_atom_values(small.ame.per_atom, F);
        const RandomVar y = sampling::uniform_var(cx.rng, space, -2.0, 2.0);
        const auto op = per_atom_values(pairing_operator_norm(y, F, phi, cx.opts.mode).per_atom, F);
        const auto pr = per_atom_values(pairing(x, y, F), F);
        for (std::size_t k = 0; k < F.n_atoms(); ++k) {
          const std::string w = tag + " atom " + std::to_string(k) + " trial " + std::to_string(t);
          const double al = std::abs(lamv[k]);
          homog.record(std::abs(sl[k] - al * lux[k]) / rel_scale(sl[k]), w + " luxemburg");
          homog.record(std::abs(sa[k] - al * ame[k]) / rel_scale(sa[k]), w + " amemiya");
          tri.record((ul[k] - lux[k] - zl[k]) / rel_scale(ul[k]), w + " luxemburg");
          tri.record((ua[k] - ame[k] - za[k]) / rel_scale(ua[k]), w + " amemiya");
          lattice.record((ml[k] - lux[k]) / rel_scale(lux[k]), w + " luxemburg");
          lattice.record((ma[k] - ame[k]) / rel_scale(ame[k]), w + " amemiya");
          const double bound = op[k] * lux[k];
          holder.record((std::abs(pr[k]) - bound) / rel_scale(bound), w);
        }
      }
    }
  }
}

// ----------------------------------------------------------------- risk

void risk_section(Context& cx, const CondRiskMeasure& rho) {
  ojson list = ojson::array();
  for (const auto& pos : cx.s.positions) {
    for (const auto& alg : cx.s.algebras) {
      const SubAlgebra& F = alg.algebra;
      const auto r = per_atom_values(rho.evaluate(pos.values, F), F);
      ojson atoms = ojson::array();
      for (std::size_t k = 0; k < F.n_atoms(); ++k) {
        ojson a = cx.atom_header(F, k);
        a["risk"] = num(r[k]);
        atoms.push_back(a);
        cx.row("risk", pos.name, alg.name, k, F, "risk", r[k]);
      }
      list.push_back(ojson{{"position", pos.name}, {"algebra", alg.name}, {"atoms", atoms}});
    }
  }
  cx.out.results["measure"] = rho.label();
  cx.out.results["risk"] = list;
}

void axiom_checks(Context& cx, const CondRiskMeasure& rho, const SubAlgebra& F,
                  const std::string& tag) {
  const AxiomReport ax =
      check_axioms(rho, cx.s.space, F, kAxiomTrials, cx.rng());
  for (const CheckResult* c : {&ax.monotonicity, &ax.cash_invariance, &ax.convexity,
                               &ax.measurability}) {
    auto& target = cx.check("risk_" + c->name, c->allowed);
    target.record(c->observed, tag + (c->detail.empty() ? "" : ": " + c->detail));
  }
}

void dual_section(Context& cx, const CondRiskMeasure& rho) {
  auto& gap_check = cx.check("dual_gap", cx.opts.tol_gap);
  auto& weak = cx.check("weak_duality", kInequalityTol);
  auto& cons = cx.check("dual_constraints", kConstraintTol);
  ojson list = ojson::array();
  for (const auto& pos : cx.s.positions) {
    for (const auto& alg : cx.s.algebras) {
      const SubAlgebra& F = alg.algebra;
      DualOptions dopts;
      dopts.mode = cx.opts.mode;
      const DualCertificate cert = robust_representation(rho, pos.values, F, dopts);
      const auto pen = per_atom_values(cert.penalty, F);
      const auto dual = per_atom_values(cert.dual_value, F);
      const auto risk = per_atom_values(cert.risk, F);
      const auto gap = per_atom_values(cert.gap, F);
      const auto mean = per_atom_values(cond_expectation(cert.y, F), F);
      ojson atoms = ojson::array();
      for (std::size_t k = 0; k < F.n_atoms(); ++k) {
        const std::string w = where(pos.name, alg.name, k);
        gap_check.record(gap[k], w);
        weak.record(-gap[k], w);
        double viol = std::abs(mean[k] + 1.0);
        ojson density = ojson::object();
        for (std::size_t i : F.atom(k)) {
          viol = std::max(viol, cert.y[i]);
          density[cx.s.labels[i]] = num(cert.y[i]);
          cx.row("dual", pos.name, alg.name, k, F, "y[" + cx.s.labels[i] + "]", cert.y[i]);
        }
        cons.record(viol, w);
        ojson a = cx.atom_header(F, k);
        a["risk"] = num(risk[k]);
        a["penalty"] = num(pen[k]);
        a["dual_value"] = num(dual[k]);
        a["gap"] = num(gap[k]);
        a["iterations"] = cert.reports[k].iterations;
        a["y"] = density;
        atoms.push_back(a);
        cx.row("dual", pos.name, alg.name, k, F, "risk", risk[k]);
        cx.row("dual", pos.name, alg.name, k, F, "penalty", pen[k]);
        cx.row("dual", pos.name, alg.name, k, F, "dual_value", dual[k]);
        cx.row("dual", pos.name, alg.name, k, F, "gap", gap[k]);
      }
      list.push_back(ojson{{"position", pos.name}, {"algebra", alg.name}, {"atoms", atoms}});
    }
  }
  cx.out.results["measure"] = rho.label();
  cx.out.results["certificates"] = list;
}

void risk_properties(Context& cx, const CondRiskMeasure& rho) {
  const auto& space = cx.s.space;
  CheckResult* gibbs =
      rho.tag() == RiskTag::entropic ? &cx.check("gibbs_density", kGapTol) : nullptr;
  auto& attain = cx.check("attainment", cx.opts.tol_gap);
  auto& locality = cx.check("locality", kIdentityTol);
  auto& extension = cx.check("extension", kIdentityTol);
  auto& scal = cx.check("scalarization", kGapTol);
  auto& bound = cx.check("penalty_bound", kInequalityTol);
  auto& leb_tail = cx.check("lebesgue_tail", 1e-6);
  auto& leb_rate = cx.check("lebesgue_rate", kIdentityTol);
  const SubAlgebra trivial = SubAlgebra::trivial(space->size());
  ojson notes = ojson::array();

  for (const auto& alg : cx.s.algebras) {
    const SubAlgebra& F = alg.algebra;
    axiom_checks(cx, rho, F, alg.name);

    const LocalMap f = [&](const RandomVar& x) { return rho.evaluate(x, F); };
    const CheckResult loc = locality_check(f, space, F, kPropertyTrials, cx.rng());
    locality.record(loc.observed, alg.name + (loc.detail.empty() ? "" : ": " + loc.detail));

    for (const SubAlgebra* P : {&F, &trivial}) {
      const CheckResult ext = extension_check(rho, space, F, *P, kPropertyTrials, cx.rng());
      extension.record(ext.observed, alg.name);
    }

    std::vector<RandomVar> ys;
    for (std::size_t i = 0; i < kScalarizationSamples; ++i) {
      ys.push_back(sampling::random_feasible_density(cx.rng, space, F));
    }
    const CheckResult sc = scalarization_check(rho, F, ys);
    scal.record(sc.observed, alg.name + (sc.detail.empty() ? "" : ": " + sc.detail));

    const LebesgueReport leb = lebesgue_check(rho, space, F, kPropertyTrials, cx.rng());
    leb_tail.record(leb.tail.observed, alg.name);
    leb_rate.record(leb.rate.observed, alg.name);

    for (const auto& pos : cx.s.positions) {
      const RandomVar& x = pos.values;
      DualOptions dopts;
      dopts.mode = cx.opts.mode;
      const AttainmentReport at = attainment_check(rho, x, F, dopts);
      attain.record(at.check.observed, pos.name + " | " + alg.name);
      if (notes.empty()) {
        notes.push_back(at.note);
      }

      if (gibbs) {
        // Gibbs density q = e^{-gamma x} / E[e^{-gamma x}|F], shifted per atom.
        const double gamma = cx.s.risk.gamma;
        const RandomVar lo = ess_inf_cond(x, F);
        std::vector<double> e(space->size());
        for (std::size_t i = 0; i < e.size(); ++i) {
          e[i] = std::exp(-gamma * (x[i] - lo[i]));
        }
        const RandomVar ev(space, e);
        const RandomVar mean = cond_expectation(ev, F);
        for (std::size_t i = 0; i < e.size(); ++i) {
          gibbs->record(std::abs(-at.certificate.y[i] - ev[i] / mean[i]),
                       pos.name + " | " + alg.name + " | " + cx.s.labels[i]);
        }
      }

      // Penalty bound at the dual optimum with beta = eps - rho(x), and at a
      // random feasible density with a random beta.
      const RandomVar r = rho.evaluate(x, F);
      const RandomVar beta_opt = RandomVar::constant(space, 1e-6) - r;
      const PenaltyBoundReport pb1 =
          penalty_bound_check(rho, x, at.certificate.y, beta_opt, F);
      bound.record(pb1.atoms_checked ? pb1.check.observed : 0.0,
                   pos.name + " | " + alg.name + " optimum");
      const RandomVar y = sampling::random_feasible_density(cx.rng, space, F);
      const RandomVar beta = sampling::uniform_measurable(cx.rng, space, F, 0.0, 5.0);
      const PenaltyBoundReport pb2 = penalty_bound_check(rho, x, y, beta, F);
      bound.record(pb2.atoms_checked ? pb2.check.observed : 0.0,
                   pos.name + " | " + alg.name + " random");
    }
  }
  cx.out.results["attainment_note"] = notes.empty() ? ojson("") : notes[0];
}

// -------------------------------------------------------------- dynamic

void dynamic_section(Context& cx, const CondRiskMeasure& rho) {
  const auto filtration = build_filtration(cx.s);
  if (!filtration) {
    throw ScenarioError("$.filtration", "the dynamic command needs a filtration");
  }
  std::vector<CondRiskMeasure> measures(filtration->size(), rho);
  const DynamicRiskMeasure D(*filtration, measures);
  auto& meas = cx.check("stage_measurability", 0.0);
  ojson list = ojson::array();
  for (const auto& pos : cx.s.positions) {
    const auto stages = dynamic_evaluate(D, pos.values);
    ojson st = ojson::array();
    for (std::size_t t = 0; t < stages.size(); ++t) {
      const SubAlgebra& F = (*filtration)[t];
      const std::string& name = cx.s.filtration[t];
      meas.record(is_measurable(stages[t], F) ? 0.0 : 1.0, pos.name + " | stage " + name);
      const auto v = per_atom_values(stages[t], F);
      ojson atoms = ojson::array();
      for (std::size_t k = 0; k < F.n_atoms(); ++k) {
        ojson a = cx.atom_header(F, k);
        a["risk"] = num(v[k]);
        atoms.push_back(a);
        cx.row("dynamic", pos.name, name, k, F, "risk", v[k]);
      }
      st.push_back(ojson{{"stage", t}, {"algebra", name}, {"atoms", atoms}});
    }
    // Scalarized last stage next to the first stage; no equality is asserted.
    const double first = expectation(stages.front());
    const double last_scalarized = expectation(stages.back());
    list.push_back(ojson{{"position", pos.name},
                         {"stages", st},
                         {"first_stage_mean", num(first)},
                         {"last_stage_mean", num(last_scalarized)}});
  }
  for (std::size_t t = 0; t < filtration->size(); ++t) {
    axiom_checks(cx, rho, (*filtration)[t], "stage " + cx.s.filtration[t]);
  }
  cx.out.results["measure"] = rho.label();
  cx.out.results["filtration"] = cx.s.filtration;
  cx.out.results["dynamic"] = list;
}

ojson check_json(const CheckResult& c) {
  ojson j = ojson::object();
  j["name"] = c.name;
  j["pass"] = c.pass;
  j["observed"] = num(c.observed);
  j["allowed"] = num(c.allowed);
  j["samples"] = c.samples;
  j["detail"] = c.detail;
  return j;
}

} // namespace

bool CommandResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

double round12(double v) {
  if (!std::isfinite(v)) {
    return v;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

CommandResult run_command(const std::string& command, const Scenario& scenario,
                          const RunOptions& opts) {
  CommandResult out;
  Context cx(scenario, opts, out);
  if (command == "norm") {
    norm_section(cx, build_young(scenario.young));
  } else if (command == "risk") {
    const CondRiskMeasure rho = build_risk(scenario.risk);
    risk_section(cx, rho);
    for (const auto& alg : scenario.algebras) {
      axiom_checks(cx, rho, alg.algebra, alg.name);
    }
  } else if (command == "dual") {
    dual_section(cx, build_risk(scenario.risk));
  } else if (command == "verify") {
    const YoungFn phi = build_young(scenario.young);
    const CondRiskMeasure rho = build_risk(scenario.risk);
    norm_section(cx, phi);
    norm_properties(cx, phi);
    risk_section(cx, rho);
    dual_section(cx, rho);
    risk_properties(cx, rho);
  } else if (command == "dynamic") {
    dynamic_section(cx, build_risk(scenario.risk));
  } else {
    throw StructuralError("unknown command '" + command + "'");
  }
  return out;
}

std::string render_report(const std::string& command, const std::string& scenario_name,
                          const Scenario& scenario, const RunOptions& opts,
                          const CommandResult& result) {
  ojson report = ojson::object();
  report["tool"] = "orlicz-risk";
  report["command"] = command;
  report["scenario"] = scenario_name;
  report["settings"] = ojson{{"tol_gap", opts.tol_gap},
                             {"tol_norm", opts.tol_norm},
                             {"seed", opts.seed},
                             {"atoms_parallel", opts.mode == Parallelism::per_atom}};
  report["inputs"] = ojson::parse(to_json(scenario).dump());
  report["results"] = result.results;
  ojson checks = ojson::array();
  for (const auto& c : result.checks) {
    checks.push_back(check_json(c));
  }
  report["checks"] = checks;
  report["status"] = result.pass() ? "pass" : "fail";
  return report.dump(2) + "\n";
}

std::string render_csv(const std::vector<CsvRow>& rows) {
  std::ostringstream os;
  os << "section,position,algebra,atom,labels,quantity,value\n";
  for (const auto& r : rows) {
    os << csv_field(r.section) << ',' << csv_field(r.position) << ',' << csv_field(r.algebra)
       << ',' << r.atom << ',' << csv_field(r.labels) << ',' << csv_field(r.quantity) << ','
       << fmt(r.value) << '\n';
  }
  return os.str();
}

namespace {

std::filesystem::path output_base(const std::filesystem::path& scenario,
                                  const std::filesystem::path& out_dir) {
  const auto dir = out_dir.empty() ? scenario.parent_path() : out_dir;
  return dir / scenario.stem();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write '" + path.string() + "'");
  }
  out << content;
}

} // namespace

std::filesystem::path report_path(const std::filesystem::path& scenario,
                                  const std::filesystem::path& out_dir) {
  auto p = output_base(scenario, out_dir);
  p += ".report.json";
  return p;
}

std::filesystem::path csv_path(const std::filesystem::path& scenario,
                               const std::filesystem::path& out_dir) {
  auto p = output_base(scenario, out_dir);
  p += ".atoms.csv";
  return p;
}

int run(int argc, char** argv) {
  CLI::App app{"Conditional Orlicz norms and convex risk measures on finite spaces",
               "orlicz-risk"};
  std::string command;
  std::string scenario_file;
  std::string parallel = "off";
  std::string out_dir;
  RunOptions opts;
  app.add_option("command", command, "norm | risk | dual | verify | dynamic")
      ->required()
      ->check(CLI::IsMember(commands()));
  app.add_option("scenario", scenario_file, "Scenario JSON file")->required();
  app.add_option("--tol-gap", opts.tol_gap, "Duality gap tolerance")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--tol-norm", opts.tol_norm, "Norm inequality tolerance")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", opts.seed, "Seed for randomized property sweeps")
      ->capture_default_str();
  app.add_option("--atoms-parallel", parallel, "Solve atoms on separate threads (on/off)")
      ->capture_default_str()
      ->check(CLI::IsMember({"on", "off"}));
  app.add_option("--out-dir", out_dir, "Directory for report files (default: scenario's)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }
  opts.mode = parallel == "on" ? Parallelism::per_atom : Parallelism::sequential;

  const std::filesystem::path path(scenario_file);
  Scenario scenario;
  try {
    scenario = load_scenario(path);
  } catch (const ScenarioError& e) {
    std::cerr << "orlicz-risk: invalid scenario " << path.string() << ": " << e.what() << "\n";
    return kInputError;
  }
  CommandResult result;
  try {
    result = run_command(command, scenario, opts);
  } catch (const ScenarioError& e) {
    std::cerr << "orlicz-risk: " << path.string() << ": " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "orlicz-risk: " << command << " failed: " << e.what() << "\n";
    return kRuntimeError;
  }
  try {
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
    }
    write_file(report_path(path, out_dir),
               render_report(command, path.filename().string(), scenario, opts, result));
    write_file(csv_path(path, out_dir), render_csv(result.rows));
  } catch (const std::exception& e) {
    std::cerr << "orlicz-risk: " << e.what() << "\n";
    return kRuntimeError;
  }
  int failed = 0;
  for (const auto& c : result.checks) {
    if (!c.pass) {
      ++failed;
      std::cerr << "FAIL " << c.name << ": observed " << fmt(c.observed) << " > allowed "
                << fmt(c.allowed) << " at " << c.detail << "\n";
    }
  }
  std::cout << command << " " << path.filename().string() << ": " << result.checks.size()
            << " checks, " << failed << " failed\n";
  return failed == 0 ? kOk : kCheckFailed;
}

} // namespace orlicz_risk::cli
