// Finite signed atomic measures and the solution family of the 1D
// counterexample: one signed Dirac mass per level-set preimage, plus the two
// boundary-correction trajectories.
#pragma once

#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ceq/pwl.hpp"
#include "ceq/rational.hpp"

namespace ceq {

struct Atom {
  Rational x;
  long long w;  // here always +-1; integer weights in general
  friend bool operator==(const Atom&, const Atom&) = default;
};

struct AtomicMeasure {
  std::vector<Atom> atoms;  // distinct locations, sorted by construction

  bool empty() const { return atoms.empty(); }

  AtomicMeasure& add(Rational x, long long w) {
    atoms.push_back(Atom{std::move(x), w});
    return *this;
  }
};

inline long long total_variation(const AtomicMeasure& m) {
  long long tv = 0;
  for (const auto& a : m.atoms) tv += a.w < 0 ? -a.w : a.w;
  return tv;
}

// Weak pairing <m, g> = sum w * g(x).  Exact when g returns Rational,
// floating otherwise.
template <class G>
auto pair(const AtomicMeasure& m, G&& g) {
  using R = std::invoke_result_t<G, const Rational&>;
  R acc{};
  for (const auto& a : m.atoms) acc += R(a.w) * g(a.x);
  return acc;
}

// mu~_t: one atom sign(f'(x)) delta_x per preimage x of the level t.
inline AtomicMeasure mu_tilde_at(const PwlFunction& f, const Rational& t) {
  AtomicMeasure m;
  for (const auto& p : preimages(f, t)) m.add(p.location, p.slope_sign);
  return m;
}

// mu_t: mu~_t corrected by the two constant trajectories so the defect at
// the graph endpoints cancels.
inline AtomicMeasure mu_full_at(const PwlFunction& f, const Rational& t) {
  if (t < 0 || t > 4) throw DomainViolation("mu_full_at: t outside [0, 4]");
  AtomicMeasure m = mu_tilde_at(f, t);
  if (t >= f(Rational(1))) m.add(Rational(1), +1);
  if (t >= f(Rational(0))) m.add(Rational(0), -1);
  return m;
}

// int_0^T |mu~_t|(R) dt, exactly: the total variation is constant between
// consecutive critical values, so the integral is a finite sum of
// width * TV(midpoint) terms.  Equals 1 for every stage function (the L^1
// mass identity; the slope route lives in area_formula_check).
inline Rational tv_time_integral(const PwlFunction& f) {
  std::vector<Rational> crit = f.values;
  std::sort(crit.begin(), crit.end());
  crit.erase(std::unique(crit.begin(), crit.end()), crit.end());
  Rational acc(0);
  for (std::size_t i = 0; i + 1 < crit.size(); ++i) {
    Rational mid = (crit[i] + crit[i + 1]) / 2;
    acc += (crit[i + 1] - crit[i]) * Rational(total_variation(mu_tilde_at(f, mid)));
  }
  return acc;
}

inline nlohmann::json measure_to_json(const AtomicMeasure& m) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& a : m.atoms) j.push_back({{"x", to_string(a.x)}, {"w", a.w}});
  return j;
}

inline AtomicMeasure measure_from_json(const nlohmann::json& j) {
  AtomicMeasure m;
  for (const auto& e : j) m.add(parse_rational(e.at("x").get<std::string>()), e.at("w").get<long long>());
  return m;
}

}  // namespace ceq
