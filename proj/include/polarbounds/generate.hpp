#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "polarbounds/bounds.hpp"
#include "polarbounds/rng.hpp"

namespace polarbounds {

struct InfeasibleSpec : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoWitnessKnown : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Z0Policy {
  enum class Kind { FIXED, ANNULUS };
  Kind kind = Kind::FIXED;
  cplx fixed{0.0, 0.0};
  double r_lo = 0.0;
  double r_hi = 0.0;
};

struct AlphaPolicy {
  enum class Kind { FIXED, UNIFORM };
  Kind kind = Kind::UNIFORM;
  double value = 0.0;
};

// Encodes the zero-location hypothesis of a bound as sampling annuli.
// Roots are drawn as (modulus, angle), so hypotheses hold by construction.
struct GeneratorSpec {
  BoundId bound_id = BoundId::B_1_1;
  int degree = 4;
  int special_multiplicity = 0;
  double k = 1.0;
  Z0Policy z0_policy;
  double root_mod_lo = 0.1;
  double root_mod_hi = 3.0;
  double polar_mod_lo = 1.0;
  double polar_mod_hi = 5.0;
  AlphaPolicy alpha_policy;
  std::uint64_t seed = 0;
};

// Safety gap at annulus boundaries (relative), so hypothesis checks are
// never numerically ambiguous.
inline constexpr double kRootGap = 1e-3;

// Hypothesis-respecting sampling policy for a bound. s is forced to 0 for
// bounds whose formula has no special zero.
inline GeneratorSpec default_spec(BoundId id, int n, int s, double k,
                                  std::uint64_t seed) {
  GeneratorSpec spec;
  spec.bound_id = id;
  spec.degree = n;
  spec.special_multiplicity = has_special_zero(id) ? s : 0;
  spec.k = k;
  spec.seed = seed;
  switch (id) {
    case BoundId::B_1_1:
    case BoundId::F_1_2:
    case BoundId::A_1_3:
    case BoundId::A_1_5_LOWER:
      spec.k = 1.0;
      spec.root_mod_lo = 0.1;
      spec.root_mod_hi = 3.0;
      break;
    case BoundId::EL_1_6:
    case BoundId::A_1_7:
    case BoundId::MIR_1_10:
      spec.k = 1.0;
      spec.root_mod_lo = 1.0 * (1.0 + kRootGap);
      spec.root_mod_hi = 3.0;
      break;
    case BoundId::HA_1_11:
      spec.root_mod_lo = k * (1.0 + kRootGap);
      spec.root_mod_hi = 3.0;
      break;
    case BoundId::APP_1_12:
      spec.root_mod_lo = 0.05;
      spec.root_mod_hi = k * (1.0 - kRootGap);
      break;
    case BoundId::MH_1_13:
      spec.root_mod_lo = std::max(0.02, 0.05 * k);
      spec.root_mod_hi = k * (1.0 - kRootGap);
      break;
    case BoundId::THM_A_1_8:
      spec.root_mod_lo = k * (1.0 + kRootGap);
      spec.root_mod_hi = 3.0 * k;
      spec.z0_policy = {Z0Policy::Kind::ANNULUS, {}, 0.0, 0.9};
      break;
    case BoundId::THM21_2_1:
    case BoundId::COR_2_3:
      spec.root_mod_lo = k * (1.0 + kRootGap);
      spec.root_mod_hi = 3.0;
      spec.z0_policy = {Z0Policy::Kind::ANNULUS, {}, 0.0, 0.9 * k};
      break;
    case BoundId::COR_2_2:
      spec.root_mod_lo = k * (1.0 + kRootGap);
      spec.root_mod_hi = 3.0;
      spec.z0_policy = {Z0Policy::Kind::FIXED, {0.0, 0.0}, 0.0, 0.0};
      break;
    case BoundId::THM22_2_4:
    case BoundId::LOWER_2_7:
      spec.root_mod_lo = std::max(0.02, 0.05 * k);
      spec.root_mod_hi = k * (1.0 - kRootGap);
      spec.z0_policy = {Z0Policy::Kind::ANNULUS, {}, 1.1, 3.0};
      break;
    case BoundId::THM23_2_8:
    case BoundId::LOWER_REMARK_2_3:
      spec.root_mod_lo = std::max(0.02, 0.05 * k);
      spec.root_mod_hi = k * (1.0 - kRootGap);
      spec.z0_policy = {Z0Policy::Kind::ANNULUS, {}, 1.1 * k, 3.0 * k};
      break;
  }
  if (auto reg = polar_regime(id)) {
    if (*reg == PolarParameter::Regime::OUTER) {
      spec.polar_mod_lo = 1.0;
      spec.polar_mod_hi = 5.0;
    } else {
      spec.polar_mod_lo = 0.0;
      spec.polar_mod_hi = 1.0;
    }
  }
  return spec;
}

// Deterministic for a fixed spec (including the seed); the draw order is
// part of the contract.
inline Instance generate(const GeneratorSpec& spec) {
  if (spec.degree < 1) throw InfeasibleSpec("degree must be >= 1");
  if (spec.special_multiplicity < 0 ||
      spec.special_multiplicity >= spec.degree) {
    throw InfeasibleSpec("need 0 <= s < n");
  }
  if (spec.root_mod_hi < spec.root_mod_lo) {
    throw InfeasibleSpec("empty root-modulus annulus");
  }
  SplitMix64 rng(spec.seed);
  Instance inst;
  inst.bound_id = spec.bound_id;
  inst.k = spec.k;
  inst.poly.special_multiplicity = spec.special_multiplicity;

  const int plain = spec.degree - spec.special_multiplicity;
  inst.poly.plain_roots.reserve(static_cast<std::size_t>(plain));
  for (int i = 0; i < plain; ++i) {
    const double mod = rng.uniform(spec.root_mod_lo, spec.root_mod_hi);
    inst.poly.plain_roots.push_back(mod * rng.unit_phase());
  }
  if (spec.special_multiplicity > 0) {
    if (spec.z0_policy.kind == Z0Policy::Kind::FIXED) {
      inst.poly.special_root = spec.z0_policy.fixed;
    } else {
      const double mod =
          rng.uniform(spec.z0_policy.r_lo, spec.z0_policy.r_hi);
      inst.poly.special_root = mod * rng.unit_phase();
    }
  }
  inst.poly.leading_scale = rng.uniform(0.5, 2.0) * rng.unit_phase();
  inst.alpha = spec.alpha_policy.kind == AlphaPolicy::Kind::FIXED
                   ? spec.alpha_policy.value
                   : rng.angle();
  if (auto reg = polar_regime(spec.bound_id)) {
    const double mod = rng.uniform(spec.polar_mod_lo, spec.polar_mod_hi);
    const cplx v = mod * rng.unit_phase();
    inst.polar = PolarParameter{v, *reg};
  }
  return inst;
}

// The paper's stated equality case for a bound, with the parameter regime
// that attains it (s = 0, k = 1; beta real for the outer bounds, gamma = 1
// for the inner ones).
inline Instance equality_witness(BoundId id, int n, double alpha) {
  if (n < 1) throw InfeasibleSpec("witness degree must be >= 1");
  Instance inst;
  inst.bound_id = id;
  inst.k = 1.0;

  auto nth_roots_of = [n](cplx c) {
    // roots of z^n + c = 0, i.e. z^n = -c
    std::vector<cplx> roots;
    roots.reserve(static_cast<std::size_t>(n));
    const double mod = std::pow(std::abs(c), 1.0 / n);
    const double base = std::arg(-c);
    for (int l = 0; l < n; ++l) {
      const double theta = (base + kTwoPi * l) / n;
      roots.push_back(mod * cplx{std::cos(theta), std::sin(theta)});
    }
    return roots;
  };

  switch (id) {
    case BoundId::B_1_1:
    case BoundId::F_1_2:
      // P = z^n: zeros at the origin.
      inst.poly.plain_roots.assign(static_cast<std::size_t>(n),
                                   cplx{0.0, 0.0});
      inst.alpha = 0.0;
      break;
    case BoundId::A_1_3:
    case BoundId::A_1_5_LOWER:
      inst.poly.plain_roots = nth_roots_of({1.0, 0.0});
      inst.alpha = 0.0;
      break;
    case BoundId::EL_1_6:
    case BoundId::A_1_7:
    case BoundId::COR_2_3:
      inst.poly.plain_roots =
          nth_roots_of(cplx{std::cos(alpha), std::sin(alpha)});
      inst.alpha = alpha;
      break;
    case BoundId::MIR_1_10:
    case BoundId::HA_1_11:
    case BoundId::THM21_2_1:
    case BoundId::COR_2_2:
      inst.poly.plain_roots =
          nth_roots_of(cplx{std::cos(alpha), std::sin(alpha)});
      inst.alpha = alpha;
      inst.polar = PolarParameter::outer({2.0, 0.0});
      break;
    case BoundId::APP_1_12:
    case BoundId::MH_1_13:
    case BoundId::THM22_2_4:
    case BoundId::THM23_2_8:
      inst.poly.plain_roots = nth_roots_of({1.0, 0.0});
      inst.alpha = 0.0;
      inst.polar = PolarParameter::inner({1.0, 0.0});
      break;
    case BoundId::LOWER_2_7:
    case BoundId::LOWER_REMARK_2_3:
      inst.poly.plain_roots = nth_roots_of({1.0, 0.0});
      inst.alpha = 0.0;
      break;
    case BoundId::THM_A_1_8:
      throw NoWitnessKnown("no stated equality case for THM_A_1_8");
  }
  return inst;
}

namespace detail {

inline cplx clamp_modulus(cplx v, double lo, double hi) {
  const double m = std::abs(v);
  if (m < lo) return m == 0.0 ? cplx{lo, 0.0} : v * (lo / m);
  if (m > hi) return v * (hi / m);
  return v;
}

}  // namespace detail

// One local move for the sharpness search: every root and free parameter
// gets a perturbation of magnitude <= step, then is projected back into
// the annulus the bound's default policy prescribes, so the output always
// satisfies the hypotheses. k and s are structural and stay fixed.
inline Instance perturb(const Instance& inst, double step,
                        std::uint64_t seed) {
  if (step < 0.0) throw InfeasibleSpec("step must be >= 0");
  const GeneratorSpec policy =
      default_spec(inst.bound_id, std::max(1, inst.poly.degree()),
                   inst.poly.special_multiplicity, inst.k, 0);
  SplitMix64 rng(seed);
  auto jitter = [&rng, step]() {
    const double mod = step * rng.uniform();
    return mod * rng.unit_phase();
  };

  Instance out = inst;
  for (cplx& r : out.poly.plain_roots) {
    r = detail::clamp_modulus(r + jitter(), policy.root_mod_lo,
                              policy.root_mod_hi);
  }
  if (out.poly.special_multiplicity > 0) {
    if (policy.z0_policy.kind == Z0Policy::Kind::FIXED) {
      out.poly.special_root = policy.z0_policy.fixed;
    } else {
      out.poly.special_root =
          detail::clamp_modulus(out.poly.special_root + jitter(),
                                policy.z0_policy.r_lo, policy.z0_policy.r_hi);
    }
  }
  out.poly.leading_scale =
      detail::clamp_modulus(out.poly.leading_scale + jitter(), 0.05, 20.0);
  out.alpha += step * rng.uniform(-1.0, 1.0);
  if (out.polar) {
    const cplx moved = out.polar->value + jitter();
    out.polar->value = detail::clamp_modulus(moved, policy.polar_mod_lo,
                                             policy.polar_mod_hi);
  }
  return out;
}

}  // namespace polarbounds
