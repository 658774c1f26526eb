#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sobolev/bubble.hpp"
#include "sobolev/deficit.hpp"
#include "sobolev/errors.hpp"
#include "sobolev/experiments.hpp"
#include "sobolev/pointwise.hpp"
#include "sobolev/projection.hpp"
#include "sobolev/quadrature.hpp"
#include "sobolev/radial_calculus.hpp"

namespace sobolev::cli {

namespace {

using json = nlohmann::ordered_json;

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

// Finite reals as numbers, everything else as a string so the JSON stays valid.
json jreal(double v) { return std::isfinite(v) ? json(v) : json(real(v)); }

struct Options {
  double tol = 0.0;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string summary_path;

  int N = 3;
  double p = 2.0;
  std::optional<int> N_override;
  std::optional<double> p_override;
  std::optional<double> R_override;
  std::optional<double> c0;
  std::optional<double> C0;
  std::vector<std::string> inputs;

  std::string theorem;
  std::string family;
  std::vector<double> lambdas;
  std::vector<double> radii;
  double eps_min = 1e-3;
  double eps_max = 1e-1;
  std::size_t steps = 9;
  double t = 0.0;
  double deficit_threshold = 0.1;
  std::size_t samples = 1'000'000;
};

// CSV to --out when given (summary to out), otherwise CSV to out (summary to err).
class Sinks {
 public:
  Sinks(const Options& o, std::ostream& out, std::ostream& err) : summary_(&err), csv_(&out) {
    if (!o.out_path.empty()) {
      file_ = std::make_unique<std::ofstream>(o.out_path, std::ios::binary);
      if (!*file_) throw DomainError("cannot open '" + o.out_path + "' for writing");
      csv_ = file_.get();
      summary_ = &out;
    }
  }
  std::ostream& csv() { return *csv_; }
  std::ostream& summary() { return *summary_; }

 private:
  std::ostream* summary_;
  std::ostream* csv_;
  std::unique_ptr<std::ofstream> file_;
};

void write_json(const Options& o, const json& j) {
  if (o.summary_path.empty()) return;
  std::ofstream f(o.summary_path, std::ios::binary);
  if (!f) throw DomainError("cannot open '" + o.summary_path + "' for writing");
  f << j.dump(2) << '\n';
}

int cmd_constants(const Options& o, std::ostream& out, std::ostream& err) {
  const Params P = derive_params(o.N, o.p);
  const auto bc = bubble_constants(P);
  Sinks sinks(o, out, err);
  auto& csv = sinks.csv();
  json j;
  csv << "quantity,value\n";
  auto emit = [&](const std::string& k, double v) {
    csv << k << ',' << real(v) << '\n';
    j[k] = jreal(v);
  };
  emit("N", P.N);
  emit("p", P.p);
  emit("p_star", P.p_star);
  emit("p_bar", P.p_bar);
  emit("gamma", P.gamma);
  emit("zeta", P.zeta);
  emit("normalization", bc.normalization);
  emit("grad_norm", bc.grad_norm);
  emit("crit_norm", bc.crit_norm);
  emit("sharp_constant", bc.sharp_constant);
  emit("sharp_constant_from_power", bc.sharp_constant_from_power(P));
  emit("weak_norm", bc.weak_norm_finite ? bc.weak_norm : INFINITY);
  emit("sphere", bc.sphere);
  if (P.weak_norm_valid) {
    const auto k = proof_constants(P, o.c0.value_or(bc.grad_norm), o.C0.value_or(o.c0.value_or(bc.grad_norm)));
    emit("c0", k.c0);
    emit("C0", k.C0);
    emit("K", k.K);
    emit("rho", k.rho);
    emit("C_under", k.C_under);
    emit("B", k.B);
    emit("C_under_consistent", k.C_under_consistent);
    emit("B_consistent", k.B_consistent);
  } else {
    sinks.summary() << "proof constants skipped: p <= 2N/(N+1)\n";
  }
  write_json(o, j);
  return 0;
}

struct LoadedProfile {
  Params params;
  DomainBall dom;
  RadialProfile u;
};

LoadedProfile load(const Options& o) {
  if (o.inputs.size() != 1) throw DomainError("exactly one --in profile is required");
  const auto file = read_profile_csv(o.inputs.front());
  const Params P = derive_params(o.N_override.value_or(file.N), o.p_override.value_or(file.p));
  const double R = o.R_override.value_or(file.R);
  const auto dom = std::isfinite(R) ? DomainBall::ball(P.N, R) : DomainBall::whole_space(P.N);
  return {P, dom, file.profile()};
}

int cmd_norms(const Options& o, std::ostream& out, std::ostream& err) {
  const auto in = load(o);
  const auto rep = deficit_report(in.u, in.params, in.dom);
  Sinks sinks(o, out, err);
  auto& csv = sinks.csv();
  json j;
  csv << "quantity,value\n";
  auto emit = [&](const std::string& k, double v) {
    csv << k << ',' << real(v) << '\n';
    j[k] = jreal(v);
  };
  emit("N", in.params.N);
  emit("p", in.params.p);
  emit("R", in.dom.R);
  emit("grad_p", rep.grad_p);
  emit("crit", rep.crit);
  emit("weak", rep.weak);
  emit("deficit", rep.deficit);
  emit("deficit_clamped", rep.deficit_clamped ? 1.0 : 0.0);
  emit("remainder_thm11", rep.remainder_thm11);
  emit("remainder_thm13_cap", rep.remainder_thm13_cap);
  emit("distance", rep.distance);
  emit("projection_converged", rep.projection_converged ? 1.0 : 0.0);
  for (const auto& [name, v] : rep.ratios) emit("ratio_" + name, v);
  if (rep.deficit_clamped) sinks.summary() << "note: a roundoff-level negative deficit was clamped to 0\n";
  write_json(o, j);
  return 0;
}

int cmd_project(const Options& o, std::ostream& out, std::ostream& err) {
  const auto in = load(o);
  const auto proj = project(in.u, in.params);
  Sinks sinks(o, out, err);
  auto& csv = sinks.csv();
  csv << "quantity,value\n";
  csv << "c_opt," << real(proj.c_opt) << '\n';
  csv << "lambda_opt," << real(proj.lambda_opt) << '\n';
  csv << "distance," << real(proj.distance) << '\n';
  csv << "converged," << (proj.converged ? 1 : 0) << '\n';
  csv << "evaluations," << proj.evaluations << '\n';
  write_json(o, json{{"c_opt", jreal(proj.c_opt)},
                     {"lambda_opt", jreal(proj.lambda_opt)},
                     {"distance", jreal(proj.distance)},
                     {"converged", proj.converged},
                     {"evaluations", proj.evaluations}});
  return proj.converged ? 0 : 1;
}

int check_tail(const Options& o, const Params& P, Sinks& sinks) {
  auto& csv = sinks.csv();
  csv << "index,N,p,lambda,R,lambdaR,exact,bound,displayed,holds,displayed_below_exact\n";
  const std::vector<double> lambdas = o.lambdas.empty() ? std::vector<double>{1.0, 10.0, 100.0, 1000.0} : o.lambdas;
  const double R = o.radii.empty() ? 1.0 : o.radii.front();
  std::size_t violations = 0, first = 0, displayed_fails = 0;
  json rows = json::array();
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const auto t = tail_lower_bound_check(P, lambdas[i], R);
    const bool shown = t.displayed <= t.exact;
    if (!t.holds() && violations++ == 0) first = i;
    if (!shown) ++displayed_fails;
    csv << i << ',' << P.N << ',' << real(P.p) << ',' << real(lambdas[i]) << ',' << real(R) << ','
        << real(lambdas[i] * R) << ',' << real(t.exact) << ',' << real(t.bound) << ',' << real(t.displayed) << ','
        << (t.holds() ? 1 : 0) << ',' << (shown ? 1 : 0) << '\n';
  }
  const double factor = std::pow(P.N / (P.p - 1.0), 2.0);
  sinks.summary() << "tail29: " << lambdas.size() << " rows, " << violations << " violations\n"
                  << "tail29: displayed factor N/(p-1) is " << real(factor)
                  << " times the exact-integral factor (p-1)/N; displayed value exceeds the exact tail in "
                  << displayed_fails << " rows\n"
                  << "tail29: exponent mismatch " << real(tail_exponent_mismatch(P)) << '\n';
  write_json(o, json{{"theorem", "tail29"},
                     {"N", P.N},
                     {"p", P.p},
                     {"rows", lambdas.size()},
                     {"violations", violations},
                     {"displayed_over_exact_factor", factor},
                     {"displayed_exceeds_exact_rows", displayed_fails},
                     {"exponent_mismatch", tail_exponent_mismatch(P)}});
  if (violations > 0) {
    sinks.summary() << "violation: row " << first << '\n';
    return 1;
  }
  return 0;
}

int check_pointwise(const Options& o, const Params& P, Sinks& sinks) {
  struct Row {
    std::string check;
    double r;
    double kappa;
    double constant;
    SweepReport rep;
  };
  std::vector<Row> rows;
  EstimateOptions est;
  est.seed = o.seed;
  const double r = P.p;
  if (r >= 2.0) {
    rows.push_back({"upper_expansion", r, 0.0, 0.0, sweep_311(r, P.N, o.samples, o.seed)});
  } else {
    const double g = estimate_gamma_p(r, est).value;
    rows.push_back({"upper_expansion_gamma", r, 0.0, g, sweep_312(r, g, P.N, o.samples, o.seed)});
    rows.push_back({"quadratic_part", r, 0.0, 0.0, sweep_fz_quadratic_part(r, P.N, o.samples, o.seed)});
  }
  rows.push_back({"scalar_expansion", r, 0.0, 0.0, sweep_scalar_33(r, o.samples, o.seed)});
  for (double kappa : {0.1, 0.5, 0.9}) {
    const double c1 = estimate_C1(r, kappa, est).value;
    rows.push_back({"lower_expansion", r, kappa, c1, sweep_fz_lower(r, kappa, c1, P.N, o.samples, o.seed)});
  }
  auto& csv = sinks.csv();
  csv << "index,check,N,r,kappa,constant,samples,violations,worst_margin\n";
  std::size_t violations = 0, first = 0;
  json jrows = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    csv << i << ',' << row.check << ',' << P.N << ',' << real(row.r) << ',' << real(row.kappa) << ','
        << real(row.constant) << ',' << row.rep.samples << ',' << row.rep.violations << ','
        << real(row.rep.worst_margin) << '\n';
    if (row.rep.violations > 0 && violations++ == 0) first = i;
    jrows.push_back({{"check", row.check},
                     {"kappa", row.kappa},
                     {"constant", jreal(row.constant)},
                     {"violations", row.rep.violations},
                     {"worst_margin", jreal(row.rep.worst_margin)}});
  }
  sinks.summary() << "pointwise: " << rows.size() << " sweeps of " << o.samples << " samples, " << violations
                  << " with violations\n";
  write_json(o, json{{"theorem", "pointwise"}, {"N", P.N}, {"p", P.p}, {"seed", o.seed}, {"sweeps", jrows}});
  if (violations > 0) {
    sinks.summary() << "violation: row " << first << '\n';
    return 1;
  }
  return 0;
}

FamilySpec family_for(const Options& o, Theorem theorem, const Params& P) {
  FamilySpec spec;
  spec.params = P;
  spec.seed = o.seed;
  const bool perturbative = theorem == Theorem::Thm13 || theorem == Theorem::Fz19;
  spec.kind = o.family.empty() ? (perturbative ? FamilyKind::PerturbedBubble : FamilyKind::TruncatedBubble)
                               : parse_family_kind(o.family);
  switch (spec.kind) {
    case FamilyKind::TruncatedBubble:
    case FamilyKind::Plateau: {
      std::vector<double> lambdas = o.lambdas;
      if (lambdas.empty()) {
        lambdas = {2.0, 5.0, 10.0, 50.0};
        if (theorem == Theorem::Lemma21) lambdas.insert(lambdas.end(), {200.0, 1000.0});
      }
      const std::vector<double> radii = o.radii.empty() ? std::vector<double>{0.5, 1.0, 2.0, 4.0} : o.radii;
      for (double R : radii) {
        if (spec.kind == FamilyKind::Plateau) {
          for (double inner : {0.25, 0.5, 0.75}) spec.grid.push_back({1.0, R, 0.0, inner});
        } else {
          for (double l : lambdas) spec.grid.push_back({l, R, 0.0, 0.5});
        }
      }
      break;
    }
    case FamilyKind::PerturbedBubble:
      spec.grid = perturbation_grid(o.steps, o.eps_max, o.eps_min);
      break;
    case FamilyKind::CustomCsv:
      spec.files = o.inputs;
      break;
  }
  return spec;
}

int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
  const Params P = derive_params(o.N, o.p);
  if (o.theorem == "tail29") {
    Sinks sinks(o, out, err);
    return check_tail(o, P, sinks);
  }
  if (o.theorem == "pointwise") {
    Sinks sinks(o, out, err);
    return check_pointwise(o, P, sinks);
  }
  const Theorem theorem = parse_theorem(o.theorem);
  ScanOptions so;
  so.t = o.t;
  so.deficit_threshold = o.deficit_threshold;
  const auto summary = constant_scan(theorem, family_for(o, theorem, P), so);

  Sinks sinks(o, out, err);
  write_scan_csv(sinks.csv(), summary);
  auto& s = sinks.summary();
  s << to_string(theorem) << ": " << summary.admissible << " admissible of " << summary.rows.size() << " rows, "
    << (summary.lower_bound ? "min" : "max") << " ratio " << real(summary.extremum) << " at row "
    << summary.extremizer << '\n';
  if (theorem == Theorem::Thm11) {
    for (const auto& [R, v] : summary.extremum_by_R) s << "thm11: R=" << R << " min ratio " << real(v) << '\n';
    s << "thm11: relative spread across R " << real(summary.R_spread) << '\n';
  }
  for (const auto& r : summary.rows) {
    if (!r.admissible) s << "filtered row " << r.index << ": " << r.reason << '\n';
  }

  json j{{"theorem", to_string(theorem)},
         {"N", P.N},
         {"p", P.p},
         {"rows", summary.rows.size()},
         {"admissible", summary.admissible},
         {"extremum_kind", summary.lower_bound ? "min" : "max"},
         {"extremum", jreal(summary.extremum)},
         {"extremizer_row", summary.extremizer},
         {"violations", summary.violations}};
  const auto& ext = summary.rows[summary.extremizer].point;
  j["extremizer"] = {{"lambda", ext.lambda}, {"R", jreal(ext.R)}, {"eps", ext.eps}, {"inner", ext.inner}};
  if (theorem == Theorem::Thm11) {
    json by_r = json::array();
    for (const auto& [R, v] : summary.extremum_by_R) by_r.push_back({{"R", R}, {"min_ratio", v}});
    j["extremum_by_R"] = by_r;
    j["R_spread"] = summary.R_spread;
  }
  if (theorem == Theorem::Cor12) j["t"] = summary.t;
  if (theorem == Theorem::Lemma21) {
    j["c0"] = summary.c0;
    j["C0"] = summary.C0;
  }
  write_json(o, j);
  if (summary.violations > 0) {
    s << "violation: row " << summary.first_violation << '\n';
    return 1;
  }
  return 0;
}

int cmd_sharpness(const Options& o, std::ostream& out, std::ostream& err) {
  const Params P = derive_params(o.N, o.p);
  std::vector<double> eps;
  for (const auto& pt : perturbation_grid(o.steps, o.eps_max, o.eps_min)) eps.push_back(pt.eps);
  SharpnessOptions so;
  so.seed = o.seed;
  if (o.tol > 0.0) so.rel_tol = o.tol;
  const auto fit = sharpness_experiment(P, eps, so);
  Sinks sinks(o, out, err);
  auto& csv = sinks.csv();
  csv << "index,log_distance,log_deficit,deficit,cap\n";
  for (std::size_t i = 0; i < fit.points.size(); ++i) {
    csv << i << ',' << real(fit.points[i].first) << ',' << real(fit.points[i].second) << ',' << real(fit.deficits[i])
        << ',' << real(fit.caps[i]) << '\n';
  }
  const bool bracketed = fit.slope >= P.zeta - 0.1 && fit.slope <= P.gamma + 0.1;
  sinks.summary() << "sharpness: slope " << real(fit.slope) << " (bracket [" << P.zeta - 0.1 << ", "
                  << P.gamma + 0.1 << "]), residual " << real(fit.residual) << ", " << fit.points.size()
                  << " points, " << fit.excluded << " excluded, C'' estimate " << real(fit.cap_constant) << '\n';
  write_json(o, json{{"N", P.N},
                     {"p", P.p},
                     {"slope", fit.slope},
                     {"intercept", fit.intercept},
                     {"residual", fit.residual},
                     {"distance_min", fit.distance_min},
                     {"distance_max", fit.distance_max},
                     {"points", fit.points.size()},
                     {"excluded", fit.excluded},
                     {"cap_constant", fit.cap_constant},
                     {"bracketed", bracketed}});
  return bracketed ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Numerical checks of sharp Sobolev stability inequalities"};
  app.name("sobolev");
  app.set_config("--config", "", "TOML file mirroring the command line flags");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--tol", o.tol, "Relative quadrature tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "Seed for every random stream");
  app.add_option("--out", o.out_path, "Write the CSV here instead of standard output");
  app.add_option("--summary", o.summary_path, "Write a JSON summary here");

  auto add_np = [&](CLI::App* sub, bool required) {
    auto* n = sub->add_option("--N", o.N, "Dimension");
    auto* p = sub->add_option("--p", o.p, "Gradient exponent");
    if (required) {
      n->required();
      p->required();
    }
  };

  auto* constants = app.add_subcommand("constants", "Extremal norms and proof constants");
  add_np(constants, true);
  constants->add_option("--c0", o.c0, "Lower gradient bound of the family");
  constants->add_option("--C0", o.C0, "Upper gradient bound of the family");

  auto add_profile = [&](CLI::App* sub) {
    sub->add_option("--in", o.inputs, "Profile CSV")->required();
    sub->add_option("--N", o.N_override, "Override the file's dimension");
    sub->add_option("--p", o.p_override, "Override the file's exponent");
    sub->add_option("--R", o.R_override, "Override the file's ball radius");
  };
  auto* norms = app.add_subcommand("norms", "Norms, deficit and remainders of a profile");
  add_profile(norms);
  auto* proj = app.add_subcommand("project", "Distance to the extremal manifold");
  add_profile(proj);

  auto* check = app.add_subcommand("check", "Sweep a family against one statement");
  add_np(check, true);
  check->add_option("--theorem", o.theorem, "Statement to check")
      ->required()
      ->check(CLI::IsMember({"thm11", "cor12", "thm13", "fz19", "lemma21", "tail29", "pointwise"}));
  check->add_option("--family", o.family, "Family kind")
      ->check(CLI::IsMember({"truncated-bubble", "perturbed-bubble", "plateau", "custom-csv"}));
  check->add_option("--in", o.inputs, "Profile CSV files for custom-csv");
  check->add_option("--lambda", o.lambdas, "Dilations (comma separated)")->delimiter(',');
  check->add_option("--R", o.radii, "Ball radii (comma separated)")->delimiter(',');
  check->add_option("--eps-min", o.eps_min, "Smallest perturbation");
  check->add_option("--eps-max", o.eps_max, "Largest perturbation");
  check->add_option("--steps", o.steps, "Perturbation grid size");
  check->add_option("--t", o.t, "Lebesgue exponent for cor12 (default p_bar/2)");
  check->add_option("--deficit-threshold", o.deficit_threshold, "Small deficit threshold in units of S^p");
  check->add_option("--samples", o.samples, "Random samples per pointwise sweep");

  auto* sharp = app.add_subcommand("sharpness", "Log-log slope of deficit against distance");
  add_np(sharp, true);
  sharp->add_option("--eps-min", o.eps_min, "Smallest perturbation");
  sharp->add_option("--eps-max", o.eps_max, "Largest perturbation");
  sharp->add_option("--steps", o.steps, "Number of perturbation sizes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    std::optional<ScopedQuadrature> guard;
    if (o.tol > 0.0) {
      QuadratureOptions q = current_quadrature();
      q.rel_tol = o.tol;
      guard.emplace(q);
    }
    if (*constants) return cmd_constants(o, out, err);
    if (*norms) return cmd_norms(o, out, err);
    if (*proj) return cmd_project(o, out, err);
    if (*check) return cmd_check(o, out, err);
    if (*sharp) return cmd_sharpness(o, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace sobolev::cli
