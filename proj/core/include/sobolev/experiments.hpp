#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "sobolev/params.hpp"
#include "sobolev/radial_profile.hpp"

namespace sobolev {

enum class FamilyKind { TruncatedBubble, PerturbedBubble, Plateau, CustomCsv };

std::string to_string(FamilyKind kind);
/// "truncated-bubble", "perturbed-bubble", "plateau" or "custom-csv"; DomainError otherwise.
FamilyKind parse_family_kind(const std::string& name);

/// One member of a parameter grid. Fields a family kind does not use are ignored.
struct FamilyPoint {
  double lambda = 1.0;
  double R = std::numeric_limits<double>::infinity();
  double eps = 0.0;
  double inner = 0.5;  ///< plateau: flat part ends at inner * R
};

struct FamilySpec {
  FamilyKind kind = FamilyKind::TruncatedBubble;
  Params params;
  std::vector<FamilyPoint> grid;
  std::vector<std::string> files;  ///< custom-csv inputs
  std::uint64_t seed = 0;          ///< picks the perturbation seed bump when nonzero
};

struct FamilyMember {
  std::size_t index = 0;  ///< position in the grid (or file list)
  FamilyPoint point;
  RadialProfile u;
  DomainBall dom;
};

struct RejectedMember {
  std::size_t index = 0;
  FamilyPoint point;
  std::string reason;
};

struct Family {
  std::vector<FamilyMember> members;
  std::vector<RejectedMember> rejected;
};

/// truncated-bubble: (U_lambda - U_lambda(R))_+ scaled to unit p*-norm on B_R.
/// perturbed-bubble: U + eps w on the whole space, w the orthogonalized seed bump.
/// plateau: C^2 plateau on [0, inner R] stepping to 0 at R, unit p*-norm.
/// custom-csv: profiles read from files. Members that cannot be built are listed in
/// `rejected` with the reason.
Family generate_family(const FamilySpec& spec);

/// The orthogonal perturbation direction used by perturbed-bubble families and sharpness runs.
RadialProfile perturbation_direction(const Params& params, std::uint64_t seed = 0);

/// The acceptance grids: lambda in {2, 5, 10, 50} x R in {0.5, 1, 2, 4}.
std::vector<FamilyPoint> truncated_bubble_grid();
/// eps = 10^{-1 - 2k/(steps-1)}, k = 0..steps-1.
std::vector<FamilyPoint> perturbation_grid(std::size_t steps = 9, double eps_max = 1e-1, double eps_min = 1e-3);

struct SlopeFit {
  std::vector<std::pair<double, double>> points;  ///< (log distance, log deficit) used in the fit
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  ///< root-mean-square residual in log deficit
  double distance_min = 0.0;
  double distance_max = 0.0;
  std::size_t excluded = 0;  ///< non-converged, out of window, or trimmed
  double cap_constant = 0.0;  ///< max of deficit / (distance^zeta grad^{p-zeta}) over the fit points
  std::vector<double> deficits;
  std::vector<double> caps;
};

/// Least squares line through (x, y); ExperimentError with fewer than 2 points.
SlopeFit fit_line(const std::vector<std::pair<double, double>>& points);

struct SharpnessOptions {
  double rel_tol = 1e-12;      ///< quadrature tolerance for the run
  double window = 0.1;         ///< keep distance < window * ||grad U||_p
  double trim_residual = 0.02; ///< drop the smallest decade when the RMS residual exceeds this
  std::uint64_t seed = 0;
};

/// Log-log slope of the deficit of U + eps w against the manifold distance.
SlopeFit sharpness_experiment(const Params& params, const std::vector<double>& eps_grid,
                              const SharpnessOptions& options = {});

enum class Theorem { Thm11, Cor12, Thm13, Fz19, Lemma21 };

std::string to_string(Theorem theorem);
Theorem parse_theorem(const std::string& name);

struct ScanRow {
  std::size_t index = 0;
  FamilyPoint point;
  bool admissible = false;
  std::string reason;  ///< why the row is not admissible
  double grad_p = 0.0;
  double crit = 0.0;
  double weak = 0.0;
  double deficit = 0.0;
  double distance = 0.0;
  double remainder = 0.0;  ///< the theorem's right side without its constant (lemma: B |B_R|^e d)
  double ratio = 0.0;      ///< deficit / remainder (lemma: weak norm / remainder)
  bool holds = true;
};

struct ScanSummary {
  Theorem theorem = Theorem::Thm11;
  Params params;
  double t = 0.0;  ///< cor12 exponent
  std::vector<ScanRow> rows;
  std::vector<RejectedMember> rejected;
  std::size_t admissible = 0;
  bool lower_bound = true;  ///< extremum is a min (lower-bound statements) or a max
  double extremum = 0.0;
  std::size_t extremizer = 0;  ///< index into rows
  std::map<double, double> extremum_by_R;  ///< thm11 only
  double R_spread = 0.0;  ///< (max - min) / min of extremum_by_R
  double c0 = 0.0;        ///< lemma21 only
  double C0 = 0.0;
  std::size_t violations = 0;
  std::size_t first_violation = 0;
};

struct ScanOptions {
  double t = 0.0;                  ///< cor12 exponent; 0 picks p_bar / 2
  double deficit_threshold = 0.1;  ///< lemma21 small-deficit threshold in units of S^p
};

/// Sweeps a family for one statement. ExperimentError when no member is admissible.
ScanSummary constant_scan(Theorem theorem, const FamilySpec& spec, const ScanOptions& options = {});

/// One header line, then one row per family member in grid order, all reals as %.17e.
void write_scan_csv(std::ostream& out, const ScanSummary& summary);

}  // namespace sobolev
