#include "sobolev/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "sobolev/bubble.hpp"
#include "sobolev/deficit.hpp"
#include "sobolev/errors.hpp"
#include "sobolev/parallel.hpp"
#include "sobolev/projection.hpp"
#include "sobolev/quadrature.hpp"
#include "sobolev/radial_calculus.hpp"

namespace sobolev {

namespace {

RadialProfile unit_critical(const RadialProfile& u, const Params& params, const DomainBall& dom) {
  const double n = lq_norm(u, params.p_star, dom);
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("profile has no finite nonzero p*-norm");
  return u.scaled(1.0 / n);
}

std::string describe(const std::exception& e) {
  std::string s = e.what();
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::TruncatedBubble: return "truncated-bubble";
    case FamilyKind::PerturbedBubble: return "perturbed-bubble";
    case FamilyKind::Plateau: return "plateau";
    case FamilyKind::CustomCsv: return "custom-csv";
  }
  return "unknown";
}

FamilyKind parse_family_kind(const std::string& name) {
  for (auto k : {FamilyKind::TruncatedBubble, FamilyKind::PerturbedBubble, FamilyKind::Plateau,
                 FamilyKind::CustomCsv}) {
    if (to_string(k) == name) return k;
  }
  throw DomainError("unknown family kind '" + name + "'");
}

std::string to_string(Theorem theorem) {
  switch (theorem) {
    case Theorem::Thm11: return "thm11";
    case Theorem::Cor12: return "cor12";
    case Theorem::Thm13: return "thm13";
    case Theorem::Fz19: return "fz19";
    case Theorem::Lemma21: return "lemma21";
  }
  return "unknown";
}

Theorem parse_theorem(const std::string& name) {
  for (auto t : {Theorem::Thm11, Theorem::Cor12, Theorem::Thm13, Theorem::Fz19, Theorem::Lemma21}) {
    if (to_string(t) == name) return t;
  }
  throw DomainError("unknown theorem '" + name + "'");
}

RadialProfile perturbation_direction(const Params& params, std::uint64_t seed) {
  double a = 0.5;
  double b = 2.0;
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> start(0.2, 1.0);
    std::uniform_real_distribution<double> width(1.0, 2.0);
    a = start(rng);
    b = a + width(rng);
  }
  return make_orthogonal_perturbation(bump_profile(a, b), params, BubbleSpec{1.0, 1.0});
}

std::vector<FamilyPoint> truncated_bubble_grid() {
  std::vector<FamilyPoint> grid;
  for (double R : {0.5, 1.0, 2.0, 4.0}) {
    for (double lambda : {2.0, 5.0, 10.0, 50.0}) grid.push_back({lambda, R, 0.0, 0.5});
  }
  return grid;
}

std::vector<FamilyPoint> perturbation_grid(std::size_t steps, double eps_max, double eps_min) {
  if (steps < 2 || !(eps_min > 0.0) || !(eps_max > eps_min)) {
    throw DomainError("perturbation grid needs steps >= 2 and 0 < eps_min < eps_max");
  }
  std::vector<FamilyPoint> grid;
  const double lo = std::log10(eps_min);
  const double hi = std::log10(eps_max);
  for (std::size_t k = 0; k < steps; ++k) {
    FamilyPoint pt;
    pt.eps = std::pow(10.0, hi - (hi - lo) * static_cast<double>(k) / static_cast<double>(steps - 1));
    grid.push_back(pt);
  }
  return grid;
}

Family generate_family(const FamilySpec& spec) {
  const Params& P = spec.params;
  Family out;
  auto reject = [&](std::size_t i, const FamilyPoint& pt, std::string reason) {
    out.rejected.push_back({i, pt, std::move(reason)});
  };

  if (spec.kind == FamilyKind::CustomCsv) {
    if (spec.files.empty()) throw DomainError("custom-csv family needs at least one file");
    for (std::size_t i = 0; i < spec.files.size(); ++i) {
      FamilyPoint pt;
      try {
        const auto file = read_profile_csv(spec.files[i]);
        pt.R = file.R;
        if (file.N != P.N || file.p != P.p) {
          reject(i, pt, "file parameters do not match the requested N and p");
          continue;
        }
        const auto dom = std::isfinite(file.R) ? DomainBall::ball(P.N, file.R) : DomainBall::whole_space(P.N);
        out.members.push_back({i, pt, file.profile(), dom});
      } catch (const Error& e) {
        reject(i, pt, describe(e));
      }
    }
    return out;
  }

  if (spec.grid.empty()) throw DomainError("family grid is empty");
  std::optional<RadialProfile> w;
  std::string w_failure;
  if (spec.kind == FamilyKind::PerturbedBubble) {
    try {
      w = perturbation_direction(P, spec.seed);
    } catch (const Error& e) {
      w_failure = describe(e);
    }
  }

  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    const FamilyPoint& pt = spec.grid[i];
    try {
      switch (spec.kind) {
        case FamilyKind::TruncatedBubble: {
          if (!(pt.lambda > 0.0) || !(pt.R > 0.0) || !std::isfinite(pt.R)) {
            reject(i, pt, "truncated bubble needs lambda > 0 and a finite R > 0");
            break;
          }
          const auto dom = DomainBall::ball(P.N, pt.R);
          out.members.push_back({i, pt, unit_critical(truncated_bubble(P, pt.lambda, pt.R), P, dom), dom});
          break;
        }
        case FamilyKind::PerturbedBubble: {
          if (!w) {
            reject(i, pt, "perturbation direction unavailable: " + w_failure);
            break;
          }
          if (!(pt.eps >= 0.0)) {
            reject(i, pt, "perturbation size must be nonnegative");
            break;
          }
          const auto U = bubble_profile(P, BubbleSpec{1.0, 1.0});
          auto u = pt.eps == 0.0 ? U : combine(1.0, U, pt.eps, *w, ProfileKind::BubblePlusPerturbation);
          out.members.push_back({i, pt, u, DomainBall::whole_space(P.N)});
          break;
        }
        case FamilyKind::Plateau: {
          if (!(pt.R > 0.0) || !std::isfinite(pt.R) || !(pt.inner > 0.0 && pt.inner < 1.0)) {
            reject(i, pt, "plateau needs a finite R > 0 and 0 < inner < 1");
            break;
          }
          const auto dom = DomainBall::ball(P.N, pt.R);
          out.members.push_back({i, pt, unit_critical(plateau_profile(1.0, pt.inner * pt.R, pt.R), P, dom), dom});
          break;
        }
        case FamilyKind::CustomCsv:
          break;
      }
    } catch (const Error& e) {
      reject(i, pt, describe(e));
    }
  }
  return out;
}

SlopeFit fit_line(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw ExperimentError("a line fit needs at least 2 points");
  const double n = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : points) {
    sx += x;
    sy += y;
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (!(sxx > 0.0)) throw ExperimentError("a line fit needs distinct abscissae");
  SlopeFit fit;
  fit.points = points;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (const auto& [x, y] : points) {
    const double r = y - (fit.intercept + fit.slope * x);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

SlopeFit sharpness_experiment(const Params& params, const std::vector<double>& eps_grid,
                              const SharpnessOptions& options) {
  if (eps_grid.empty()) throw DomainError("sharpness needs a nonempty eps grid");
  const auto [lo, hi] = std::minmax_element(eps_grid.begin(), eps_grid.end());
  if (!(*lo > 0.0) || *hi > 0.1 * (1.0 + 1e-12) || *hi / *lo < 100.0 * (1.0 - 1e-12)) {
    throw DomainError("sharpness needs 0 < eps <= 1e-1 spanning at least two decades");
  }

  QuadratureOptions q = current_quadrature();
  q.rel_tol = options.rel_tol;
  ScopedQuadrature guard(q);

  const auto w = perturbation_direction(params, options.seed);
  const auto U = bubble_profile(params, BubbleSpec{1.0, 1.0});
  const auto whole = DomainBall::whole_space(params.N);
  const double grad_U = bubble_constants(params).grad_norm;

  struct Sample {
    bool ok = false;
    double distance = 0.0;
    double deficit = 0.0;
    double grad = 0.0;
  };
  std::vector<Sample> samples(eps_grid.size());
  parallel_for(eps_grid.size(), [&](std::size_t i) {
    const auto u = combine(1.0, U, eps_grid[i], w, ProfileKind::BubblePlusPerturbation);
    const auto proj = project(u, params);
    Sample s;
    s.ok = proj.converged;
    s.distance = proj.distance;
    s.grad = grad_lp_norm(u, params.p, whole);
    s.deficit = evaluate_deficit(u, params, whole).value;
    samples[i] = s;
  });

  std::vector<Sample> kept;
  std::size_t excluded = 0;
  for (const auto& s : samples) {
    if (s.ok && s.distance > 0.0 && s.deficit > 0.0 && s.distance < options.window * grad_U) {
      kept.push_back(s);
    } else {
      ++excluded;
    }
  }
  std::sort(kept.begin(), kept.end(), [](const Sample& a, const Sample& b) { return a.distance < b.distance; });

  auto fit_of = [](const std::vector<Sample>& v) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& s : v) pts.emplace_back(std::log(s.distance), std::log(s.deficit));
    return fit_line(pts);
  };
  if (kept.size() < 5) {
    throw ExperimentError("sharpness fit has " + std::to_string(kept.size()) + " usable points, needs 5");
  }
  SlopeFit fit = fit_of(kept);
  if (fit.residual > options.trim_residual) {
    const double cut = 10.0 * kept.front().distance;
    std::vector<Sample> trimmed;
    for (const auto& s : kept) {
      if (s.distance >= cut) trimmed.push_back(s);
    }
    if (trimmed.size() >= 5) {
      SlopeFit t = fit_of(trimmed);
      if (t.residual < fit.residual) {
        excluded += kept.size() - trimmed.size();
        kept = std::move(trimmed);
        fit = std::move(t);
      }
    }
  }
  fit.excluded = excluded;
  fit.distance_min = kept.front().distance;
  fit.distance_max = kept.back().distance;
  for (const auto& s : kept) {
    const double cap = thm13_upper_cap(s.distance, s.grad, params);
    fit.deficits.push_back(s.deficit);
    fit.caps.push_back(cap);
    fit.cap_constant = std::max(fit.cap_constant, s.deficit / cap);
  }
  return fit;
}

namespace {

struct Norms {
  double grad = 0.0;
  double crit = 0.0;
  DeficitValue deficit;
};

Norms norms_of(const FamilyMember& m, const Params& P) {
  Norms n;
  n.grad = grad_lp_norm(m.u, P.p, m.dom);
  n.crit = lq_norm(m.u, P.p_star, m.dom);
  n.deficit = evaluate_deficit(m.u, P, m.dom);
  return n;
}

}  // namespace

ScanSummary constant_scan(Theorem theorem, const FamilySpec& spec, const ScanOptions& options) {
  const Params& P = spec.params;
  const bool weak_form = theorem == Theorem::Thm11 || theorem == Theorem::Cor12 || theorem == Theorem::Lemma21;
  if (weak_form && !P.weak_norm_valid) {
    std::ostringstream msg;
    msg << to_string(theorem) << " requires p > 2N/(N+1) (N=" << P.N << ", p=" << P.p
        << ", 2N/(N+1)=" << 2.0 * P.N / (P.N + 1.0) << ")";
    throw HypothesisError(msg.str());
  }

  ScanSummary out;
  out.theorem = theorem;
  out.params = P;
  out.lower_bound = theorem == Theorem::Thm11 || theorem == Theorem::Cor12 || theorem == Theorem::Fz19;
  out.t = theorem == Theorem::Cor12 ? (options.t > 0.0 ? options.t : 0.5 * P.p_bar) : 0.0;
  if (theorem == Theorem::Cor12 && !(out.t < P.p_bar)) {
    throw DomainError("cor12 needs 0 < t < p_bar");
  }

  const Family family = generate_family(spec);
  out.rejected = family.rejected;
  const std::size_t total = family.members.size() + family.rejected.size();
  out.rows.resize(total);
  for (const auto& r : family.rejected) {
    out.rows[r.index].index = r.index;
    out.rows[r.index].point = r.point;
    out.rows[r.index].reason = r.reason;
  }
  const auto whole = DomainBall::whole_space(P.N);
  const double S = bubble_constants(P).sharp_constant;
  const double e = 1.0 / (P.p_star * (P.p - 1.0));

  std::vector<Norms> norms(family.members.size());
  parallel_for(family.members.size(), [&](std::size_t k) { norms[k] = norms_of(family.members[k], P); });

  ProofConstants consts;
  if (theorem == Theorem::Lemma21) {
    double c0 = INFINITY, C0 = 0.0;
    for (std::size_t k = 0; k < norms.size(); ++k) {
      if (std::abs(norms[k].crit - 1.0) <= 1e-6 &&
          norms[k].deficit.value < options.deficit_threshold * std::pow(S, P.p)) {
        c0 = std::min(c0, norms[k].grad);
        C0 = std::max(C0, norms[k].grad);
      }
    }
    if (C0 > 0.0) {
      consts = proof_constants(P, c0, C0);
      out.c0 = c0;
      out.C0 = C0;
    }
  }

  parallel_for(family.members.size(), [&](std::size_t k) {
    const FamilyMember& m = family.members[k];
    const Norms& n = norms[k];
    ScanRow row;
    row.index = m.index;
    row.point = m.point;
    row.grad_p = n.grad;
    row.crit = n.crit;
    row.deficit = n.deficit.value;
    const bool sobolev_ok = n.deficit.raw >= -1e-10 * std::pow(n.grad, P.p);
    try {
      switch (theorem) {
        case Theorem::Thm11:
        case Theorem::Cor12: {
          if (!m.dom.bounded()) throw HypothesisError("the remainder needs a domain of finite measure");
          row.weak = weak_norm(m.u, P.p_bar, m.dom).value;
          const double g = P.gamma;
          const double thm11 = std::pow(m.dom.measure, -g * e) * std::pow(row.weak, g) * std::pow(n.crit, P.p - g);
          if (theorem == Theorem::Thm11) {
            row.remainder = thm11;
            row.holds = sobolev_ok && row.deficit / thm11 > 0.0;
          } else {
            row.remainder = remainder_cor12(m.u, out.t, P, m.dom);
            const double k_ws = std::pow(weak_to_strong_constant(out.t, P.p_bar), g);
            row.holds = sobolev_ok && row.deficit / row.remainder > 0.0 &&
                        row.remainder <= k_ws * thm11 * (1.0 + 1e-8);
          }
          row.ratio = row.deficit / row.remainder;
          break;
        }
        case Theorem::Thm13:
        case Theorem::Fz19: {
          const auto proj = project(m.u, P);
          row.distance = proj.distance;
          if (!proj.converged) throw HypothesisError("projection did not converge");
          const double grad = grad_lp_norm(m.u, P.p, whole);
          if (proj.distance <= manifold_distance_tol * grad) {
            throw HypothesisError("manifold point: the ratio is undefined");
          }
          if (theorem == Theorem::Thm13) {
            row.remainder = thm13_upper_cap(proj.distance, grad, P);
            row.ratio = row.deficit / row.remainder;
            row.holds = sobolev_ok && std::isfinite(row.ratio);
          } else {
            row.remainder = std::pow(proj.distance, P.gamma) * std::pow(grad, P.p - P.gamma);
            row.ratio = row.deficit / row.remainder;
            row.holds = sobolev_ok && row.ratio > 0.0;
          }
          break;
        }
        case Theorem::Lemma21: {
          if (!(consts.B > 0.0)) throw HypothesisError("no family member meets the normalization and small deficit");
          LemmaCheckOptions lo;
          lo.deficit_threshold = options.deficit_threshold;
          const auto c = lemma21_check(m.u, P, m.dom, consts, lo);
          row.weak = c.lhs;
          row.distance = c.distance;
          row.remainder = c.rhs;
          row.ratio = c.lhs / c.rhs;
          row.holds = c.holds;
          break;
        }
      }
      row.admissible = true;
    } catch (const HypothesisError& err) {
      row.admissible = false;
      row.holds = true;
      row.reason = describe(err);
    }
    out.rows[m.index] = row;
  });

  bool first = true;
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    const ScanRow& row = out.rows[i];
    if (!row.admissible) continue;
    ++out.admissible;
    if (!row.holds) {
      if (out.violations == 0) out.first_violation = i;
      ++out.violations;
    }
    const bool better = out.lower_bound ? row.ratio < out.extremum : row.ratio > out.extremum;
    if (first || better) {
      out.extremum = row.ratio;
      out.extremizer = i;
      first = false;
    }
    if (theorem == Theorem::Thm11) {
      auto [it, inserted] = out.extremum_by_R.emplace(row.point.R, row.ratio);
      if (!inserted) it->second = std::min(it->second, row.ratio);
    }
  }
  if (out.admissible == 0) {
    throw ExperimentError(to_string(theorem) + ": zero admissible points in the family");
  }
  if (!out.extremum_by_R.empty()) {
    double lo = INFINITY, hi = 0.0;
    for (const auto& [R, v] : out.extremum_by_R) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    out.R_spread = (hi - lo) / lo;
  }
  return out;
}

void write_scan_csv(std::ostream& out, const ScanSummary& summary) {
  out << "theorem,index,N,p,lambda,R,eps,inner,admissible,grad_p,crit,weak,deficit,distance,remainder,ratio,"
         "holds,reason\n";
  char buf[64];
  auto real = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17e", v);
    return std::string(buf);
  };
  for (const auto& r : summary.rows) {
    out << to_string(summary.theorem) << ',' << r.index << ',' << summary.params.N << ',' << real(summary.params.p)
        << ',' << real(r.point.lambda) << ',' << real(r.point.R) << ',' << real(r.point.eps) << ','
        << real(r.point.inner) << ',' << (r.admissible ? 1 : 0) << ',' << real(r.grad_p) << ',' << real(r.crit)
        << ',' << real(r.weak) << ',' << real(r.deficit) << ',' << real(r.distance) << ',' << real(r.remainder)
        << ',' << real(r.ratio) << ',' << (r.holds ? 1 : 0) << ',' << r.reason << '\n';
  }
}

}  // namespace sobolev
