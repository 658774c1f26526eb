#pragma once

// Nonnegative smooth radial profiles on balls, shared by the reduction and weak-norm tests.

#include <string>
#include <vector>

#include "sobolev/params.hpp"
#include "sobolev/radial_profile.hpp"

namespace zoo {

struct Entry {
  std::string name;
  sobolev::Params params;
  sobolev::DomainBall dom;
  sobolev::RadialProfile u;
  bool monotone;
};

inline std::vector<Entry> twenty() {
  using namespace sobolev;
  std::vector<Entry> out;
  const Params p32 = derive_params(3, 2.0);
  const Params p42 = derive_params(4, 2.0);
  const Params p43 = derive_params(4, 3.0);
  const Params p325 = derive_params(3, 2.5);
  auto add = [&](std::string name, const Params& pr, double R, RadialProfile u, bool monotone) {
    out.push_back({std::move(name), pr, DomainBall::ball(pr.N, R), std::move(u), monotone});
  };
  for (double lambda : {1.0, 2.0, 5.0, 10.0, 50.0}) {
    add("truncated-3-2-l" + std::to_string(lambda), p32, 1.0, truncated_bubble(p32, lambda, 1.0), true);
  }
  add("truncated-4-3-l4", p43, 2.0, truncated_bubble(p43, 4.0, 2.0), true);
  add("truncated-4-2-l3", p42, 1.0, truncated_bubble(p42, 3.0, 1.0), true);
  add("plateau-3", p32, 1.0, plateau_profile(1.0, 0.3, 0.8), true);
  add("plateau-4", p42, 2.0, plateau_profile(2.5, 1.0, 2.0), true);
  add("plateau-3-2.5", p325, 1.5, plateau_profile(0.7, 0.2, 1.5), true);
  add("annulus-3", p32, 2.0, bump_profile(1.0, 2.0), false);
  add("annulus-3-thin", p32, 1.0, bump_profile(0.6, 0.9, 2.0), false);
  add("annulus-4", p42, 3.0, bump_profile(0.5, 3.0, 0.5), false);
  add("annulus-4-3", p43, 2.0, bump_profile(1.2, 1.8), false);
  add("bubble-plus-ring", p32, 2.0,
      combine(1.0, truncated_bubble(p32, 3.0, 2.0), 1.5, bump_profile(1.0, 1.8)), false);
  add("two-rings", p32, 3.0, combine(1.0, bump_profile(0.2, 1.0), 0.6, bump_profile(1.5, 3.0)), false);
  add("plateau-plus-ring", p42, 2.0,
      combine(1.0, plateau_profile(1.0, 0.2, 0.6), 2.0, bump_profile(1.0, 2.0)), false);
  add("ring-on-plateau", p32, 2.0,
      combine(0.5, plateau_profile(1.0, 1.0, 2.0), 1.0, bump_profile(0.5, 1.2)), false);
  add("steep-bubble-plus-ring", p325, 1.0,
      combine(1.0, truncated_bubble(p325, 20.0, 1.0), 0.3, bump_profile(0.4, 0.9)), false);
  add("scaled-annulus", p32, 0.5, bump_profile(0.1, 0.5, 7.0), false);
  return out;
}

}  // namespace zoo
