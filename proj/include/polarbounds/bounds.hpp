#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "polarbounds/circle.hpp"
#include "polarbounds/poly.hpp"

namespace polarbounds {

// beta (OUTER, |b| >= 1) or gamma (INNER, |b| <= 1) of the polar derivative.
struct PolarParameter {
  enum class Regime { OUTER, INNER };

  cplx value{1.0, 0.0};
  Regime regime = Regime::OUTER;

  static PolarParameter outer(cplx v) {
    if (std::abs(v) < 1.0 - 1e-12) {
      throw std::invalid_argument("PolarParameter::outer requires |v| >= 1");
    }
    return {v, Regime::OUTER};
  }

  static PolarParameter inner(cplx v) {
    if (std::abs(v) > 1.0 + 1e-12) {
      throw std::invalid_argument("PolarParameter::inner requires |v| <= 1");
    }
    return {v, Regime::INNER};
  }

  double modulus() const { return std::abs(value); }
};

enum class BoundId : int {
  B_1_1,
  F_1_2,
  A_1_3,
  A_1_5_LOWER,
  EL_1_6,
  A_1_7,
  THM_A_1_8,
  MIR_1_10,
  HA_1_11,
  APP_1_12,
  MH_1_13,
  THM21_2_1,
  COR_2_2,
  COR_2_3,
  THM22_2_4,
  LOWER_2_7,
  THM23_2_8,
  LOWER_REMARK_2_3,
};

inline constexpr std::array<BoundId, 18> kAllBounds = {
    BoundId::B_1_1,      BoundId::F_1_2,     BoundId::A_1_3,
    BoundId::A_1_5_LOWER, BoundId::EL_1_6,   BoundId::A_1_7,
    BoundId::THM_A_1_8,  BoundId::MIR_1_10,  BoundId::HA_1_11,
    BoundId::APP_1_12,   BoundId::MH_1_13,   BoundId::THM21_2_1,
    BoundId::COR_2_2,    BoundId::COR_2_3,   BoundId::THM22_2_4,
    BoundId::LOWER_2_7,  BoundId::THM23_2_8, BoundId::LOWER_REMARK_2_3,
};

inline const char* to_string(BoundId id) {
  switch (id) {
    case BoundId::B_1_1: return "B_1_1";
    case BoundId::F_1_2: return "F_1_2";
    case BoundId::A_1_3: return "A_1_3";
    case BoundId::A_1_5_LOWER: return "A_1_5_LOWER";
    case BoundId::EL_1_6: return "EL_1_6";
    case BoundId::A_1_7: return "A_1_7";
    case BoundId::THM_A_1_8: return "THM_A_1_8";
    case BoundId::MIR_1_10: return "MIR_1_10";
    case BoundId::HA_1_11: return "HA_1_11";
    case BoundId::APP_1_12: return "APP_1_12";
    case BoundId::MH_1_13: return "MH_1_13";
    case BoundId::THM21_2_1: return "THM21_2_1";
    case BoundId::COR_2_2: return "COR_2_2";
    case BoundId::COR_2_3: return "COR_2_3";
    case BoundId::THM22_2_4: return "THM22_2_4";
    case BoundId::LOWER_2_7: return "LOWER_2_7";
    case BoundId::THM23_2_8: return "THM23_2_8";
    case BoundId::LOWER_REMARK_2_3: return "LOWER_REMARK_2_3";
  }
  return "?";
}

inline std::optional<BoundId> parse_bound_id(const std::string& s) {
  for (BoundId id : kAllBounds) {
    if (s == to_string(id)) return id;
  }
  return std::nullopt;
}

inline bool is_lower_bound(BoundId id) {
  return id == BoundId::A_1_5_LOWER || id == BoundId::LOWER_2_7 ||
         id == BoundId::LOWER_REMARK_2_3;
}

inline std::optional<PolarParameter::Regime> polar_regime(BoundId id) {
  switch (id) {
    case BoundId::MIR_1_10:
    case BoundId::HA_1_11:
    case BoundId::THM21_2_1:
    case BoundId::COR_2_2:
      return PolarParameter::Regime::OUTER;
    case BoundId::APP_1_12:
    case BoundId::MH_1_13:
    case BoundId::THM22_2_4:
    case BoundId::THM23_2_8:
      return PolarParameter::Regime::INNER;
    default:
      return std::nullopt;
  }
}

inline bool requires_polar(BoundId id) { return polar_regime(id).has_value(); }

// Does the bound's formula carry a special zero (z0, s)?
inline bool has_special_zero(BoundId id) {
  switch (id) {
    case BoundId::THM_A_1_8:
    case BoundId::THM21_2_1:
    case BoundId::COR_2_2:
    case BoundId::COR_2_3:
    case BoundId::THM22_2_4:
    case BoundId::LOWER_2_7:
    case BoundId::THM23_2_8:
    case BoundId::LOWER_REMARK_2_3:
      return true;
    default:
      return false;
  }
}

enum class Mode { POINTWISE, UNIFORM };
enum class Outcome { OK, VIOLATION, BRACE_NEGATIVE };

inline const char* to_string(Mode m) {
  return m == Mode::POINTWISE ? "POINTWISE" : "UNIFORM";
}

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::OK: return "OK";
    case Outcome::VIOLATION: return "VIOLATION";
    case Outcome::BRACE_NEGATIVE: return "BRACE_NEGATIVE";
  }
  return "?";
}

// A polynomial paired with everything a single inequality check needs.
struct Instance {
  FactoredPolynomial poly;
  double k = 1.0;
  double alpha = 0.0;
  std::optional<PolarParameter> polar;
  BoundId bound_id = BoundId::B_1_1;
};

struct HypothesisReport {
  struct Clause {
    std::string name;
    bool ok = true;
  };
  std::vector<Clause> clauses;

  bool ok() const {
    for (const Clause& c : clauses) {
      if (!c.ok) return false;
    }
    return true;
  }

  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const Clause& c : clauses) {
      if (!c.ok) out.push_back(c.name);
    }
    return out;
  }
};

struct HypothesisViolated : std::runtime_error {
  HypothesisReport report;
  explicit HypothesisViolated(HypothesisReport r)
      : std::runtime_error("hypothesis violated: " +
                           (r.failures().empty() ? std::string("?")
                                                 : r.failures().front())),
        report(std::move(r)) {}
};

namespace detail {

inline double min_plain_modulus(const FactoredPolynomial& f) {
  double m = 1e308;
  for (const cplx& r : f.plain_roots) m = std::min(m, std::abs(r));
  return f.plain_roots.empty() ? 1e308 : m;
}

inline double max_plain_modulus(const FactoredPolynomial& f) {
  double m = 0.0;
  for (const cplx& r : f.plain_roots) m = std::max(m, std::abs(r));
  return m;
}

// Smallest modulus over all zeros, the special one included.
inline double min_root_modulus(const FactoredPolynomial& f) {
  double m = min_plain_modulus(f);
  if (f.special_multiplicity > 0) m = std::min(m, std::abs(f.special_root));
  return m;
}

inline double max_root_modulus(const FactoredPolynomial& f) {
  double m = max_plain_modulus(f);
  if (f.special_multiplicity > 0) m = std::max(m, std::abs(f.special_root));
  return m;
}

}  // namespace detail

// Validates every hypothesis clause of inst.bound_id on the factored form.
// Reports, never throws. Boundary zeros (|root| = k exactly) are admitted
// with slack 1e-12; configurations where an RHS term diverges (|z0| -> k
// and friends) are rejected with a 1e-9 gap.
inline HypothesisReport check_hypothesis(const Instance& inst) {
  constexpr double kSlack = 1e-12;
  constexpr double kGap = 1e-9;
  const BoundId id = inst.bound_id;
  const FactoredPolynomial& f = inst.poly;
  const int n = f.degree();
  const int s = f.special_multiplicity;
  const double az0 = std::abs(f.special_root);
  const double k = inst.k;

  HypothesisReport rep;
  auto clause = [&rep](std::string name, bool ok) {
    rep.clauses.push_back({std::move(name), ok});
  };

  clause("degree >= 1", n >= 1);
  clause("s < n", s < n);
  clause("leading scale != 0", std::abs(f.leading_scale) > 0.0);
  clause("k > 0", k > 0.0);

  switch (id) {
    case BoundId::B_1_1:
    case BoundId::F_1_2:
    case BoundId::A_1_3:
    case BoundId::A_1_5_LOWER:
      break;
    case BoundId::EL_1_6:
    case BoundId::A_1_7:
      clause("no zeros in |z| < 1",
             detail::min_root_modulus(f) >= 1.0 - kSlack);
      break;
    case BoundId::MIR_1_10:
      clause("no zeros in |z| < 1",
             detail::min_root_modulus(f) >= 1.0 - kSlack);
      break;
    case BoundId::HA_1_11:
      clause("k <= 1", k <= 1.0 + kSlack);
      clause("no zeros in |z| < k",
             detail::min_root_modulus(f) >= k - kSlack);
      break;
    case BoundId::APP_1_12:
      clause("k >= 1", k >= 1.0 - kSlack);
      clause("no zeros in |z| > k",
             detail::max_root_modulus(f) <= k + kSlack);
      clause("c0 != 0", detail::min_root_modulus(f) >= kSlack);
      break;
    case BoundId::MH_1_13:
      clause("k <= 1", k <= 1.0 + kSlack);
      clause("no zeros in |z| > k",
             detail::max_root_modulus(f) <= k + kSlack);
      clause("c0 != 0", detail::min_root_modulus(f) >= kSlack);
      break;
    case BoundId::THM_A_1_8:
      clause("k >= 1", k >= 1.0 - kSlack);
      clause("no other zeros in |z| < k",
             detail::min_plain_modulus(f) >= k - kSlack);
      if (s > 0) clause("|z0| < 1", az0 <= 1.0 - kGap);
      break;
    case BoundId::THM21_2_1:
    case BoundId::COR_2_2:
    case BoundId::COR_2_3:
      clause("k <= 1", k <= 1.0 + kSlack);
      clause("no other zeros in |z| < k",
             detail::min_plain_modulus(f) >= k - kSlack);
      if (s > 0) clause("|z0| < k", az0 <= k - kGap);
      if (id == BoundId::COR_2_2 && s > 0) clause("z0 = 0", az0 <= kSlack);
      break;
    case BoundId::THM22_2_4:
    case BoundId::LOWER_2_7:
      clause("k <= 1", k <= 1.0 + kSlack);
      clause("no other zeros in |z| > k",
             detail::max_plain_modulus(f) <= k + kSlack);
      if (s > 0) clause("|z0| > 1", az0 >= 1.0 + kGap);
      clause("c0 != 0", f.plain_roots.empty()
                            ? true
                            : detail::min_plain_modulus(f) >= kSlack);
      break;
    case BoundId::THM23_2_8:
    case BoundId::LOWER_REMARK_2_3:
      clause("k >= 1", k >= 1.0 - kSlack);
      clause("no other zeros in |z| > k",
             detail::max_plain_modulus(f) <= k + kSlack);
      if (s > 0) clause("|z0| > k", az0 >= k + kGap);
      clause("c0 != 0", f.plain_roots.empty()
                            ? true
                            : detail::min_plain_modulus(f) >= kSlack);
      break;
  }

  if (auto reg = polar_regime(id)) {
    if (!inst.polar.has_value()) {
      clause("polar parameter present", false);
    } else {
      clause("polar regime matches bound", inst.polar->regime == *reg);
      const double m = inst.polar->modulus();
      if (*reg == PolarParameter::Regime::OUTER) {
        clause("|beta| >= 1", m >= 1.0 - kSlack);
      } else {
        clause("|gamma| <= 1", m <= 1.0 + kSlack);
      }
    }
  }
  return rep;
}

struct EvalOptions {
  int grid_size = 4096;
  double enclosure_tol = 1e-10;
  double tol_scale = 1e-8;  // margin tolerance = tol_scale * (1 + |rhs|)
};

// Outcome of checking one inequality on one instance. For upper bounds the
// margin is min over checked points of rhs - lhs; for lower bounds it is
// lhs_certified_lower - rhs. ratio is the worst lhs/rhs (rhs/lhs for lower
// bounds), i.e. 1 at equality.
struct BoundEvaluation {
  BoundId bound_id = BoundId::B_1_1;
  Mode mode = Mode::POINTWISE;
  bool lower_bound = false;
  double lhs_lo = 0.0;  // enclosure of the max over |z|=1 of the LHS
  double lhs_hi = 0.0;
  double rhs_min = 0.0;
  double margin = 0.0;
  double ratio = 0.0;
  double witness_angle = 0.0;
  double tol = 0.0;
  Outcome outcome = Outcome::OK;
  bool hypothesis_ok = true;
  std::vector<std::string> hypothesis_failures;
};

namespace detail {

// Everything the RHS formulas consume, computed once per instance.
struct EvalContext {
  DensePolynomial p;
  DensePolynomial dp;
  int n = 0;
  int s = 0;
  double k = 1.0;
  double az0 = 0.0;  // |z0| when s > 0, else 0
  double ma = 0.0;   // M_alpha
  double mapi = 0.0; // M_{alpha+pi}
  double m2sum = 0.0;
  CircleExtremum max1;  // max |P| on |z|=1
  double mx = 0.0;      // midpoint of max1, used inside RHS formulas
  double c0 = 0.0;      // |c_0| of the deflated factor H
  double cns = 0.0;     // |c_{n-s}| of H
  double abs_polar = 1.0;
  cplx polar_value{1.0, 0.0};
};

// use_special: whether the bound's formula distinguishes the (z0, s) zero.
// When it does not, the special root is an ordinary zero and the c_v are
// the coefficients of P itself.
inline EvalContext build_context(const Instance& inst, const EvalOptions& opt,
                                 bool use_special) {
  EvalContext ctx;
  ctx.p = expand(inst.poly);
  ctx.dp = derivative(ctx.p);
  ctx.n = ctx.p.degree();
  ctx.s = use_special ? inst.poly.special_multiplicity : 0;
  // Mir's inequality (1.10) is the k = 1 statement; the stored k plays no
  // role in its formula.
  ctx.k = inst.bound_id == BoundId::MIR_1_10 ? 1.0 : inst.k;
  ctx.az0 = ctx.s > 0 ? std::abs(inst.poly.special_root) : 0.0;
  ctx.ma = roots_of_unity_max(ctx.p, inst.alpha).value;
  ctx.mapi = roots_of_unity_max(ctx.p, inst.alpha + kPi).value;
  ctx.m2sum = ctx.ma * ctx.ma + ctx.mapi * ctx.mapi;
  ctx.max1 = circle_max_modulus(ctx.p, 1.0, opt.enclosure_tol);
  ctx.mx = ctx.max1.midpoint();
  const DensePolynomial h =
      ctx.s > 0 ? deflate(ctx.p, inst.poly.special_root, ctx.s) : ctx.p;
  ctx.c0 = std::abs(h.coefficient(0));
  ctx.cns = std::abs(h.coefficient(h.degree()));
  if (inst.polar) {
    ctx.abs_polar = inst.polar->modulus();
    ctx.polar_value = inst.polar->value;
  }
  return ctx;
}

// ---- RHS formulas ------------------------------------------------------
// Each returns the right-hand side at one circle point given P2 = |P(z)|^2
// and reports brace negativity through `brace_neg`. Bounds that are special
// cases of a theorem are routed through the same function so the reduction
// identities hold bit for bit, not just numerically.

// Theorem 2.1 family: THM21_2_1, COR_2_2 (z0 = 0), and HA_1_11 / MIR_1_10
// as the s = 0 specializations (k = 1 for MIR_1_10).
inline double rhs_thm21(const EvalContext& c, double P2, bool& brace_neg) {
  const double kns = std::pow(c.k, c.n - c.s);
  const double ratio = (c.c0 - kns * c.cns) / (c.c0 + kns * c.cns);
  const double sterm =
      c.s == 0 ? 0.0
               : 2.0 * c.s * (c.k + c.az0) /
                     (c.n * (c.k - c.az0)) * c.mx * c.mx;
  const double brace = c.m2sum + sterm -
                       2.0 * std::pow(c.k, 2 * c.n) / c.n * ratio * P2;
  if (brace < 0.0) {
    brace_neg = true;
    return c.n * c.mx;
  }
  return c.n * c.mx + c.n * (c.abs_polar - 1.0) /
                          (2.0 * std::pow(c.k, c.n)) * std::sqrt(brace);
}

// Corollary 2.3: the |beta| -> infinity limit of Theorem 2.1.
inline double rhs_cor23(const EvalContext& c, double P2, bool& brace_neg) {
  const double kns = std::pow(c.k, c.n - c.s);
  const double ratio = (c.c0 - kns * c.cns) / (c.c0 + kns * c.cns);
  const double sterm =
      c.s == 0 ? 0.0
               : 2.0 * c.s * (c.k + c.az0) /
                     (c.n * (c.k - c.az0)) * c.mx * c.mx;
  const double brace = c.m2sum + sterm -
                       2.0 * std::pow(c.k, 2 * c.n) / c.n * ratio * P2;
  if (brace < 0.0) {
    brace_neg = true;
    return 0.0;
  }
  return c.n / (2.0 * std::pow(c.k, c.n)) * std::sqrt(brace);
}

// Theorem 2.2 family brace: THM22_2_4, LOWER_2_7, and MH_1_13 (s = 0).
inline double brace_thm22(const EvalContext& c, double P2, bool& brace_neg) {
  const double kns = std::pow(c.k, c.n - c.s);
  const double ratio = (c.cns * kns - c.c0) / (c.cns * kns + c.c0);
  const double inner = (c.s == 0 ? 0.0 : c.s * c.az0 / (c.az0 - 1.0)) +
                       (c.n - c.s) * c.k / (c.k + 1.0) -
                       c.k / (c.k + 1.0) * ratio;
  const double brace =
      c.m2sum - 2.0 * (1.0 - 2.0 / c.n * inner) * P2;
  if (brace < 0.0) brace_neg = true;
  return brace;
}

inline double rhs_thm22(const EvalContext& c, double P2, bool& brace_neg) {
  const double brace = brace_thm22(c, P2, brace_neg);
  if (brace < 0.0) return c.n * c.abs_polar * c.mx;
  return c.n / 2.0 *
         (2.0 * c.abs_polar * c.mx +
          (1.0 - c.abs_polar) * std::sqrt(brace));
}

// Theorem 2.3 family brace: THM23_2_8, LOWER_REMARK_2_3, APP_1_12 (s = 0).
inline double brace_thm23(const EvalContext& c, double P2, bool& brace_neg) {
  const double kns = std::pow(c.k, c.n - c.s);
  const double ratio = (c.cns * kns - c.c0) / (c.cns * kns + c.c0);
  const double sterm =
      c.s == 0 ? 0.0
               : 2.0 * c.s * (c.az0 + c.k) /
                     (c.n * (c.az0 - c.k)) * c.mx * c.mx;
  const double brace = c.m2sum + sterm -
                       2.0 / (c.n * std::pow(c.k, 2 * c.n)) * ratio * P2;
  if (brace < 0.0) brace_neg = true;
  return brace;
}

inline double rhs_thm23(const EvalContext& c, double P2, bool& brace_neg) {
  const double brace = brace_thm23(c, P2, brace_neg);
  if (brace < 0.0) return c.n * c.abs_polar * c.mx;
  return c.n * c.abs_polar * c.mx +
         c.n * std::pow(c.k, c.n) * (1.0 - c.abs_polar) / 2.0 *
             std::sqrt(brace);
}

// Lemma 5 (Eq. 3.5); a_n is read as the leading coefficient of H.
inline double rhs_lemma5(const EvalContext& c, double P2, bool& brace_neg) {
  const double kns = std::pow(c.k, c.n - c.s);
  const double ratio = (c.c0 - c.cns * kns) / (c.c0 + c.cns * kns);
  const double inner = (c.s == 0 ? 0.0 : c.s / (1.0 - c.az0)) +
                       (c.n - c.s) / (1.0 + c.k) -
                       1.0 / (1.0 + c.k) * ratio;
  const double brace =
      c.m2sum - 2.0 * (1.0 - 2.0 / c.n * inner) * P2;
  if (brace < 0.0) {
    brace_neg = true;
    return c.n * c.mx;
  }
  return c.n / 2.0 *
         (2.0 * c.mx + (c.abs_polar - 1.0) * std::sqrt(brace));
}

// Theorem A (Eq. 1.8): uniform RHS, no |P(z)|^2 term.
inline double rhs_thmA(const EvalContext& c, double min_k) {
  const double a = std::pow(1.0 + c.az0, c.s + 1) * (c.n - c.s) /
                   ((1.0 + c.k) * (1.0 - c.az0));
  const double sterm = c.s == 0 ? 0.0 : c.s / (1.0 - c.az0);
  return (sterm + a / std::pow(1.0 - c.az0, c.s)) * c.mx -
         a / std::pow(c.k + c.az0, c.s) * min_k;
}

// Runs the pointwise kernel: LHS(theta) <= RHS(|P(e^{i theta})|^2) on a
// uniform grid. lhs_poly is D_b P or P' depending on the bound.
inline void eval_pointwise_upper(
    BoundEvaluation& ev, const EvalContext& ctx,
    const DensePolynomial& lhs_poly,
    const std::function<double(double, bool&)>& rhs, const EvalOptions& opt,
    Mode mode) {
  ev.mode = mode;
  const CircleExtremum lhs_max =
      circle_max_modulus(lhs_poly, 1.0, opt.enclosure_tol);
  ev.lhs_lo = lhs_max.lo;
  ev.lhs_hi = lhs_max.hi;

  bool brace_neg = false;
  if (mode == Mode::UNIFORM) {
    const double theta = lhs_max.witness_angle;
    const cplx z{std::cos(theta), std::sin(theta)};
    const double P2 = std::norm(evaluate(ctx.p, z));
    const double r = rhs(P2, brace_neg);
    ev.rhs_min = r;
    ev.margin = r - lhs_max.hi;
    ev.ratio = r > 0.0 ? lhs_max.hi / r : 1e308;
    ev.witness_angle = theta;
  } else {
    double min_margin = 1e308;
    double max_ratio = -1e308;
    double rhs_min = 1e308;
    double witness = 0.0;
    const int N = opt.grid_size;
    for (int j = 0; j < N; ++j) {
      const double theta = j * kTwoPi / N;
      const cplx z{std::cos(theta), std::sin(theta)};
      const double lhs_v = std::abs(evaluate(lhs_poly, z));
      const double P2 = std::norm(evaluate(ctx.p, z));
      bool neg_here = false;
      const double r = rhs(P2, neg_here);
      if (neg_here) {
        brace_neg = true;
        continue;
      }
      rhs_min = std::min(rhs_min, r);
      const double m = r - lhs_v;
      if (m < min_margin) {
        min_margin = m;
        witness = theta;
      }
      if (r > 0.0) max_ratio = std::max(max_ratio, lhs_v / r);
    }
    ev.rhs_min = rhs_min < 1e308 ? rhs_min : 0.0;
    ev.margin = min_margin < 1e308 ? min_margin : 0.0;
    ev.ratio = max_ratio > -1e308 ? max_ratio : 0.0;
    ev.witness_angle = witness;
  }
  ev.tol = opt.tol_scale * (1.0 + std::abs(ev.rhs_min));
  if (brace_neg) {
    ev.outcome = Outcome::BRACE_NEGATIVE;
  } else {
    ev.outcome = ev.margin < -ev.tol ? Outcome::VIOLATION : Outcome::OK;
  }
}

inline void eval_uniform_upper(BoundEvaluation& ev, const EvalContext& ctx,
                               double rhs, const EvalOptions& opt) {
  ev.mode = Mode::UNIFORM;
  const CircleExtremum lhs_max =
      circle_max_modulus(ctx.dp, 1.0, opt.enclosure_tol);
  ev.lhs_lo = lhs_max.lo;
  ev.lhs_hi = lhs_max.hi;
  ev.rhs_min = rhs;
  ev.margin = rhs - lhs_max.hi;
  ev.ratio = rhs > 0.0 ? lhs_max.hi / rhs : 1e308;
  ev.witness_angle = lhs_max.witness_angle;
  ev.tol = opt.tol_scale * (1.0 + std::abs(rhs));
  ev.outcome = ev.margin < -ev.tol ? Outcome::VIOLATION : Outcome::OK;
}

inline void eval_lower(BoundEvaluation& ev, const EvalContext& ctx,
                       double rhs, bool brace_neg, const EvalOptions& opt) {
  ev.mode = Mode::UNIFORM;
  ev.lower_bound = true;
  const CircleExtremum lhs_max =
      circle_max_modulus(ctx.dp, 1.0, opt.enclosure_tol);
  ev.lhs_lo = lhs_max.lo;
  ev.lhs_hi = lhs_max.hi;
  ev.rhs_min = rhs;
  ev.margin = lhs_max.lo - rhs;
  ev.ratio = lhs_max.lo > 0.0 ? rhs / lhs_max.lo : 0.0;
  ev.witness_angle = lhs_max.witness_angle;
  ev.tol = opt.tol_scale * (1.0 + std::abs(rhs));
  if (brace_neg) {
    ev.outcome = Outcome::BRACE_NEGATIVE;
  } else {
    ev.outcome = ev.margin < -ev.tol ? Outcome::VIOLATION : Outcome::OK;
  }
}

}  // namespace detail

// Evaluates inst.bound_id on inst. Throws HypothesisViolated when the
// hypothesis report fails; brace negativity is a structured outcome.
inline BoundEvaluation evaluate_bound(const Instance& inst,
                                      Mode mode = Mode::POINTWISE,
                                      const EvalOptions& opt = {}) {
  HypothesisReport rep = check_hypothesis(inst);
  if (!rep.ok()) throw HypothesisViolated(std::move(rep));

  detail::EvalContext ctx =
      detail::build_context(inst, opt, has_special_zero(inst.bound_id));
  BoundEvaluation ev;
  ev.bound_id = inst.bound_id;
  ev.hypothesis_ok = true;

  using detail::EvalContext;
  const auto with_ctx = [&ctx](double (*f)(const EvalContext&, double,
                                           bool&)) {
    return [f, &ctx](double P2, bool& neg) { return f(ctx, P2, neg); };
  };

  switch (inst.bound_id) {
    case BoundId::B_1_1:
      detail::eval_uniform_upper(ev, ctx, ctx.n * ctx.max1.lo, opt);
      break;
    case BoundId::F_1_2:
      detail::eval_uniform_upper(ev, ctx,
                                 ctx.n * frappier_points_max(ctx.p), opt);
      break;
    case BoundId::A_1_3:
      detail::eval_uniform_upper(ev, ctx, ctx.n / 2.0 * (ctx.ma + ctx.mapi),
                                 opt);
      break;
    case BoundId::A_1_5_LOWER: {
      const double m0 = roots_of_unity_max(ctx.p, 0.0).value;
      const double mpi = roots_of_unity_max(ctx.p, kPi).value;
      const double rhs = ctx.n / 2.0 * (2.0 * ctx.max1.lo - (m0 + mpi));
      detail::eval_lower(ev, ctx, rhs, false, opt);
      break;
    }
    case BoundId::EL_1_6:
      detail::eval_uniform_upper(ev, ctx, ctx.n / 2.0 * ctx.max1.lo, opt);
      break;
    case BoundId::A_1_7:
      detail::eval_uniform_upper(ev, ctx,
                                 ctx.n / 2.0 * std::sqrt(ctx.m2sum), opt);
      break;
    case BoundId::THM_A_1_8: {
      const CircleExtremum mn =
          circle_min_modulus(ctx.p, ctx.k, opt.enclosure_tol);
      detail::eval_uniform_upper(ev, ctx,
                                 detail::rhs_thmA(ctx, mn.midpoint()), opt);
      break;
    }
    case BoundId::MIR_1_10:
    case BoundId::HA_1_11:
    case BoundId::THM21_2_1:
    case BoundId::COR_2_2: {
      const DensePolynomial dbp = polar_derivative(ctx.p, ctx.polar_value);
      detail::eval_pointwise_upper(ev, ctx, dbp,
                                   with_ctx(&detail::rhs_thm21), opt, mode);
      break;
    }
    case BoundId::COR_2_3:
      detail::eval_pointwise_upper(ev, ctx, ctx.dp,
                                   with_ctx(&detail::rhs_cor23), opt, mode);
      break;
    case BoundId::MH_1_13:
    case BoundId::THM22_2_4: {
      const DensePolynomial dgp = polar_derivative(ctx.p, ctx.polar_value);
      detail::eval_pointwise_upper(ev, ctx, dgp,
                                   with_ctx(&detail::rhs_thm22), opt, mode);
      break;
    }
    case BoundId::APP_1_12:
    case BoundId::THM23_2_8: {
      const DensePolynomial dgp = polar_derivative(ctx.p, ctx.polar_value);
      detail::eval_pointwise_upper(ev, ctx, dgp,
                                   with_ctx(&detail::rhs_thm23), opt, mode);
      break;
    }
    case BoundId::LOWER_2_7: {
      // gamma = 0 remark of Theorem 2.2, |P(z)|^2 taken at the |P| maximizer.
      bool neg = false;
      const double brace = detail::brace_thm22(ctx, ctx.mx * ctx.mx, neg);
      const double rhs =
          neg ? 0.0
              : ctx.n / 2.0 * (2.0 * ctx.max1.lo - std::sqrt(brace));
      detail::eval_lower(ev, ctx, rhs, neg, opt);
      break;
    }
    case BoundId::LOWER_REMARK_2_3: {
      bool neg = false;
      const double brace = detail::brace_thm23(ctx, ctx.mx * ctx.mx, neg);
      const double rhs =
          neg ? 0.0
              : ctx.n / 2.0 *
                    (2.0 * ctx.max1.lo -
                     std::pow(ctx.k, ctx.n) * std::sqrt(brace));
      detail::eval_lower(ev, ctx, rhs, neg, opt);
      break;
    }
  }
  return ev;
}

// ---- Lemmas (3.1)-(3.5) as standalone property checks ------------------

enum class LemmaId { L1, L2, L3, L4, L5 };

inline const char* to_string(LemmaId id) {
  switch (id) {
    case LemmaId::L1: return "L1";
    case LemmaId::L2: return "L2";
    case LemmaId::L3: return "L3";
    case LemmaId::L4: return "L4";
    case LemmaId::L5: return "L5";
  }
  return "?";
}

struct LemmaEvaluation {
  LemmaId lemma_id = LemmaId::L1;
  double margin = 0.0;  // min over checked points of rhs - lhs
  double lhs_at_witness = 0.0;
  double rhs_at_witness = 0.0;
  double witness = 0.0;  // angle (L1/L2/L4/L5) or radius (L3)
  double tol = 0.0;
  Outcome outcome = Outcome::OK;
};

// Lemma-specific hypothesis clauses, reported through the same machinery.
inline HypothesisReport check_lemma_hypothesis(LemmaId id,
                                               const Instance& inst) {
  constexpr double kSlack = 1e-12;
  HypothesisReport rep;
  auto clause = [&rep](std::string name, bool ok) {
    rep.clauses.push_back({std::move(name), ok});
  };
  clause("degree >= 1", inst.poly.degree() >= 1);
  switch (id) {
    case LemmaId::L1:
    case LemmaId::L2:
    case LemmaId::L3:
      break;
    case LemmaId::L4:
      clause("k >= 1", inst.k >= 1.0 - kSlack);
      clause("no zeros in |z| < k",
             detail::min_root_modulus(inst.poly) >= inst.k - kSlack);
      break;
    case LemmaId::L5:
      clause("k >= 1", inst.k >= 1.0 - kSlack);
      clause("no other zeros in |z| < k",
             detail::min_plain_modulus(inst.poly) >= inst.k - kSlack);
      if (inst.poly.special_multiplicity > 0) {
        clause("|z0| < 1", std::abs(inst.poly.special_root) <= 1.0 - 1e-9);
      }
      clause("s < n",
             inst.poly.special_multiplicity < inst.poly.degree());
      clause("polar parameter present (|beta| >= 1)",
             inst.polar.has_value() &&
                 inst.polar->regime == PolarParameter::Regime::OUTER);
      break;
  }
  return rep;
}

inline LemmaEvaluation check_lemma(LemmaId id, const Instance& inst,
                                   const EvalOptions& opt = {}) {
  HypothesisReport rep = check_lemma_hypothesis(id, inst);
  if (!rep.ok()) throw HypothesisViolated(std::move(rep));

  LemmaEvaluation ev;
  ev.lemma_id = id;
  const DensePolynomial p = expand(inst.poly);
  const int n = p.degree();
  const DensePolynomial dp = derivative(p);

  auto grid_check = [&](const std::function<double(cplx)>& lhs, double rhs,
                        bool skip_small_p) {
    double min_margin = 1e308;
    for (int j = 0; j < opt.grid_size; ++j) {
      const double theta = j * kTwoPi / opt.grid_size;
      const cplx z{std::cos(theta), std::sin(theta)};
      if (skip_small_p && std::abs(evaluate(p, z)) < 1e-12) continue;
      const double l = lhs(z);
      const double m = rhs - l;
      if (m < min_margin) {
        min_margin = m;
        ev.witness = theta;
        ev.lhs_at_witness = l;
        ev.rhs_at_witness = rhs;
      }
    }
    ev.margin = min_margin;
    ev.tol = opt.tol_scale * (1.0 + std::abs(rhs));
  };

  switch (id) {
    case LemmaId::L1: {
      const DensePolynomial q = conjugate_reciprocal(p);
      const DensePolynomial dq = derivative(q);
      const double rhs =
          n * circle_max_modulus(p, 1.0, opt.enclosure_tol).hi;
      grid_check(
          [&](cplx z) {
            return std::abs(evaluate(dp, z)) + std::abs(evaluate(dq, z));
          },
          rhs, false);
      break;
    }
    case LemmaId::L2: {
      const DensePolynomial q = conjugate_reciprocal(p);
      const DensePolynomial dq = derivative(q);
      const double ma = roots_of_unity_max(p, inst.alpha).value;
      const double mapi = roots_of_unity_max(p, inst.alpha + kPi).value;
      const double rhs = n * n / 2.0 * (ma * ma + mapi * mapi);
      grid_check(
          [&](cplx z) {
            return std::norm(evaluate(dp, z)) + std::norm(evaluate(dq, z));
          },
          rhs, false);
      break;
    }
    case LemmaId::L3: {
      const CircleExtremum unit =
          circle_max_modulus(p, 1.0, opt.enclosure_tol);
      double min_margin = 1e308;
      for (const double r : {0.25, 0.5, 0.75, 1.0}) {
        const CircleExtremum at_r =
            circle_max_modulus(p, r, opt.enclosure_tol);
        const double rhs = std::pow(r, n) * unit.lo;
        const double m = at_r.hi - rhs;
        if (m < min_margin) {
          min_margin = m;
          ev.witness = r;
          ev.lhs_at_witness = at_r.hi;
          ev.rhs_at_witness = rhs;
        }
      }
      ev.margin = min_margin;
      ev.tol = opt.tol_scale * (1.0 + unit.hi);
      break;
    }
    case LemmaId::L4: {
      const double c0 = std::abs(p.coefficient(0));
      const double cn = std::abs(p.coefficient(n));
      const double kn = std::pow(inst.k, n);
      const double rhs = 1.0 / (1.0 + inst.k) *
                         (n - (c0 - kn * cn) / (c0 + kn * cn));
      grid_check(
          [&](cplx z) {
            return std::real(z * evaluate(dp, z) / evaluate(p, z));
          },
          rhs, true);
      break;
    }
    case LemmaId::L5: {
      detail::EvalContext ctx = detail::build_context(inst, opt, true);
      const DensePolynomial dbp = polar_derivative(p, inst.polar->value);
      double min_margin = 1e308;
      bool brace_neg = false;
      for (int j = 0; j < opt.grid_size; ++j) {
        const double theta = j * kTwoPi / opt.grid_size;
        const cplx z{std::cos(theta), std::sin(theta)};
        bool neg = false;
        const double rhs =
            detail::rhs_lemma5(ctx, std::norm(evaluate(p, z)), neg);
        if (neg) {
          brace_neg = true;
          continue;
        }
        const double l = std::abs(evaluate(dbp, z));
        const double m = rhs - l;
        if (m < min_margin) {
          min_margin = m;
          ev.witness = theta;
          ev.lhs_at_witness = l;
          ev.rhs_at_witness = rhs;
        }
      }
      ev.margin = min_margin < 1e308 ? min_margin : 0.0;
      ev.tol = opt.tol_scale * (1.0 + std::abs(ev.rhs_at_witness));
      if (brace_neg) {
        ev.outcome = Outcome::BRACE_NEGATIVE;
        return ev;
      }
      break;
    }
  }
  ev.outcome = ev.margin < -ev.tol ? Outcome::VIOLATION : Outcome::OK;
  return ev;
}

}  // namespace polarbounds
