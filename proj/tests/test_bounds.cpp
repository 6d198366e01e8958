#include <cmath>
#include <vector>

#include "catch_amalgamated.hpp"
#include "polarbounds/bounds.hpp"
#include "polarbounds/generate.hpp"

using namespace polarbounds;

namespace {

Instance monic_with_roots(BoundId id, std::vector<cplx> roots) {
  Instance inst;
  inst.bound_id = id;
  inst.poly.plain_roots = std::move(roots);
  return inst;
}

}  // namespace

TEST_CASE("bound id round trips and classification") {
  for (BoundId id : kAllBounds) {
    const auto back = parse_bound_id(to_string(id));
    REQUIRE(back.has_value());
    CHECK(*back == id);
  }
  CHECK_FALSE(parse_bound_id("NOPE").has_value());

  CHECK(is_lower_bound(BoundId::A_1_5_LOWER));
  CHECK(is_lower_bound(BoundId::LOWER_2_7));
  CHECK_FALSE(is_lower_bound(BoundId::THM21_2_1));
  CHECK(requires_polar(BoundId::THM22_2_4));
  CHECK_FALSE(requires_polar(BoundId::COR_2_3));
  CHECK(has_special_zero(BoundId::THM23_2_8));
  CHECK_FALSE(has_special_zero(BoundId::HA_1_11));
}

TEST_CASE("polar parameter regime validation") {
  CHECK_THROWS_AS(PolarParameter::outer({0.5, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(PolarParameter::inner({1.5, 0.0}), std::invalid_argument);
  CHECK_NOTHROW(PolarParameter::outer({1.0, 0.0}));
  CHECK_NOTHROW(PolarParameter::inner({0.0, 0.0}));
}

TEST_CASE("hypothesis checker accepts and rejects the right instances") {
  // zeros outside |z| < k, one special zero inside
  Instance good = monic_with_roots(
      BoundId::THM21_2_1, {cplx{0.9, 0.0}, cplx{0.0, 1.5}});
  good.k = 0.8;
  good.poly.special_root = cplx{0.3, 0.0};
  good.poly.special_multiplicity = 1;
  good.polar = PolarParameter::outer({2.0, 0.0});
  CHECK(check_hypothesis(good).ok());

  Instance bad = good;
  bad.poly.special_root = cplx{0.85, 0.0};  // |z0| > k
  const HypothesisReport rep = check_hypothesis(bad);
  CHECK_FALSE(rep.ok());
  REQUIRE_FALSE(rep.failures().empty());
  CHECK(rep.failures().front() == "|z0| < k");
  CHECK_THROWS_AS(evaluate_bound(bad), HypothesisViolated);

  Instance missing_polar = good;
  missing_polar.polar.reset();
  CHECK_FALSE(check_hypothesis(missing_polar).ok());

  // zeros inside |z| <= k, special zero outside the unit circle
  Instance inner = monic_with_roots(
      BoundId::THM22_2_4, {cplx{0.2, 0.1}, cplx{-0.4, 0.0}});
  inner.k = 0.7;
  inner.poly.special_root = cplx{1.4, 0.0};
  inner.poly.special_multiplicity = 1;
  inner.polar = PolarParameter::inner({0.5, 0.0});
  CHECK(check_hypothesis(inner).ok());

  inner.poly.special_root = cplx{0.99, 0.0};  // must lie outside |z| = 1
  CHECK_FALSE(check_hypothesis(inner).ok());

  // degree-0 input fails the basic clause
  Instance constant;
  constant.bound_id = BoundId::B_1_1;
  CHECK_FALSE(check_hypothesis(constant).ok());
}

TEST_CASE("classical bounds at their equality configurations") {
  // P = z^4: max |P'| = 4 = n max |P|
  Instance zn = monic_with_roots(BoundId::B_1_1,
                                 {cplx{}, cplx{}, cplx{}, cplx{}});
  BoundEvaluation ev = evaluate_bound(zn);
  CHECK(ev.outcome == Outcome::OK);
  CHECK(ev.ratio == Catch::Approx(1.0).margin(1e-6));
  CHECK(ev.lhs_hi == Catch::Approx(4.0).margin(1e-6));
  CHECK(ev.rhs_min == Catch::Approx(4.0).margin(1e-6));

  zn.bound_id = BoundId::F_1_2;
  ev = evaluate_bound(zn);
  CHECK(ev.outcome == Outcome::OK);
  CHECK(ev.ratio == Catch::Approx(1.0).margin(1e-6));

  // P = z^3 + 1 attains the sample-point average bound
  Instance znp1 = equality_witness(BoundId::A_1_3, 3, 0.0);
  ev = evaluate_bound(znp1);
  CHECK(ev.outcome == Outcome::OK);
  CHECK(ev.ratio == Catch::Approx(1.0).margin(1e-6));
  CHECK(ev.rhs_min == Catch::Approx(3.0).margin(1e-6));

  // and the matching lower bound: 3/2 (2*2 - (2 + 0)) = 3 = max |P'|
  znp1.bound_id = BoundId::A_1_5_LOWER;
  ev = evaluate_bound(znp1);
  CHECK(ev.lower_bound);
  CHECK(ev.outcome == Outcome::OK);
  CHECK(ev.margin == Catch::Approx(0.0).margin(1e-6));

  // self-reciprocal-free half bound at z^n + e^{i alpha}
  Instance rot = equality_witness(BoundId::EL_1_6, 5, 1.3);
  ev = evaluate_bound(rot);
  CHECK(ev.outcome == Outcome::OK);
  CHECK(ev.ratio == Catch::Approx(1.0).margin(1e-6));

  rot.bound_id = BoundId::A_1_7;
  ev = evaluate_bound(rot);
  CHECK(ev.outcome == Outcome::OK);
  CHECK(ev.ratio == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("multiplicity-weighted uniform bound on a hand example") {
  // P = z (z + 1), special zero at 0 with s = 1, k = 1:
  // max |P'| = |P'(1)| = 3; the formula gives
  // (s/(1-0) + 2 (n-s)/((1+1)(1-0))) max|P| - ... with min|P| on |z|=1 = 0
  // = (1 + 1) * 2 - 2/1 * 0 ... max|P| = 2, so RHS = 3? Evaluate exactly:
  Instance inst;
  inst.bound_id = BoundId::THM_A_1_8;
  inst.k = 1.0;
  inst.poly.special_root = cplx{0.0, 0.0};
  inst.poly.special_multiplicity = 1;
  inst.poly.plain_roots = {cplx{-1.0, 0.0}};
  const BoundEvaluation ev = evaluate_bound(inst);
  CHECK(ev.outcome == Outcome::OK);
  CHECK(ev.lhs_hi == Catch::Approx(3.0).margin(1e-6));
  CHECK(ev.rhs_min == Catch::Approx(3.0).margin(1e-6));
  CHECK(ev.ratio == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("s = 0 and z0 = 0 reductions are bitwise exact") {
  SplitMix64 rng(404);
  int done_thm21 = 0, done_thm22 = 0, done_thm23 = 0, done_cor22 = 0;
  for (int rep = 0; rep < 400 && (done_thm21 < 100 || done_thm22 < 100 ||
                                  done_thm23 < 100 || done_cor22 < 100);
       ++rep) {
    const int n = 2 + static_cast<int>(rng.next() % 7);
    const std::uint64_t seed = rng.next();

    if (done_thm21 < 100) {
      // s = 0 instance of the outer-parameter theorem vs its k <= 1 special
      // case with all zeros outside |z| = k
      const double k = rng.uniform(0.5, 1.0);
      Instance a = generate(default_spec(BoundId::THM21_2_1, n, 0, k, seed));
      Instance b = a;
      b.bound_id = BoundId::HA_1_11;
      const BoundEvaluation ea = evaluate_bound(a);
      const BoundEvaluation eb = evaluate_bound(b);
      CHECK(ea.rhs_min == eb.rhs_min);
      CHECK(ea.margin == eb.margin);
      CHECK(ea.lhs_hi == eb.lhs_hi);
      ++done_thm21;
    }
    if (done_cor22 < 100) {
      // z0 = 0 with s >= 1 equals the s = 0 statement with the same zeros
      // plus s zeros at the origin
      const double k = rng.uniform(0.5, 1.0);
      const int s =
          1 + static_cast<int>(rng.next() %
                               static_cast<unsigned>(std::min(2, n - 1)));
      GeneratorSpec spec =
          default_spec(BoundId::COR_2_2, n, s, k, seed);
      Instance a = generate(spec);
      Instance b = a;
      b.bound_id = BoundId::THM21_2_1;
      const BoundEvaluation ea = evaluate_bound(a);
      const BoundEvaluation eb = evaluate_bound(b);
      CHECK(ea.rhs_min == eb.rhs_min);
      CHECK(ea.margin == eb.margin);
      ++done_cor22;
    }
    if (done_thm22 < 100) {
      const double k = rng.uniform(0.5, 1.0);
      Instance a = generate(default_spec(BoundId::THM22_2_4, n, 0, k, seed));
      Instance b = a;
      b.bound_id = BoundId::MH_1_13;
      const BoundEvaluation ea = evaluate_bound(a);
      const BoundEvaluation eb = evaluate_bound(b);
      CHECK(ea.rhs_min == eb.rhs_min);
      CHECK(ea.margin == eb.margin);
      ++done_thm22;
    }
    if (done_thm23 < 100) {
      const double k = rng.uniform(1.0, 2.0);
      Instance a = generate(default_spec(BoundId::THM23_2_8, n, 0, k, seed));
      Instance b = a;
      b.bound_id = BoundId::APP_1_12;
      const BoundEvaluation ea = evaluate_bound(a);
      const BoundEvaluation eb = evaluate_bound(b);
      CHECK(ea.rhs_min == eb.rhs_min);
      CHECK(ea.margin == eb.margin);
      ++done_thm23;
    }
  }
  REQUIRE(done_thm21 >= 100);
  REQUIRE(done_cor22 >= 100);
  REQUIRE(done_thm22 >= 100);
  REQUIRE(done_thm23 >= 100);
}

TEST_CASE("large polar parameter recovers the derivative-only corollary") {
  SplitMix64 rng(777);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 2 + static_cast<int>(rng.next() % 6);
    const int s = static_cast<int>(rng.next() % std::min(3, n));
    const double k = rng.uniform(0.5, 1.0);
    Instance a =
        generate(default_spec(BoundId::THM21_2_1, n, s, k, rng.next()));
    const double big = 1e8;
    a.polar = PolarParameter::outer({big, 0.0});
    Instance b = a;
    b.bound_id = BoundId::COR_2_3;
    b.polar.reset();
    // RHS(beta)/|beta| -> n M + RHS_corollary as |beta| grows; compare the
    // sqrt-brace parts, which agree to O(1/|beta|)
    const BoundEvaluation ea = evaluate_bound(a);
    const BoundEvaluation eb = evaluate_bound(b);
    if (ea.outcome == Outcome::BRACE_NEGATIVE ||
        eb.outcome == Outcome::BRACE_NEGATIVE) {
      continue;
    }
    CHECK(ea.outcome == Outcome::OK);
    CHECK(eb.outcome == Outcome::OK);
    const double brace_part_a = (ea.rhs_min / big);
    CHECK(brace_part_a ==
          Catch::Approx(eb.rhs_min).margin(1e-6 * (1.0 + eb.rhs_min)));
  }
}

TEST_CASE("generated instances stay clear of violation across the catalog") {
  SplitMix64 rng(31337);
  for (BoundId id : {BoundId::HA_1_11, BoundId::THM23_2_8,
                     BoundId::LOWER_2_7, BoundId::THM_A_1_8}) {
    for (int rep = 0; rep < 25; ++rep) {
      const int n = 2 + static_cast<int>(rng.next() % 7);
      const int s =
          has_special_zero(id) ? static_cast<int>(rng.next() % std::min(3, n))
                               : 0;
      double k = 1.0;
      if (id == BoundId::HA_1_11 || id == BoundId::LOWER_2_7) {
        k = rng.uniform(0.5, 1.0);
      } else if (id == BoundId::THM23_2_8 || id == BoundId::THM_A_1_8) {
        k = rng.uniform(1.0, 2.0);
      }
      const Instance inst = generate(default_spec(id, n, s, k, rng.next()));
      const BoundEvaluation ev = evaluate_bound(inst);
      if (ev.outcome == Outcome::BRACE_NEGATIVE) continue;
      CHECK(ev.margin >= -ev.tol);
    }
  }
}

TEST_CASE("scaling and rotation covariance") {
  SplitMix64 rng(555);
  for (const cplx scale : {cplx{2.0, 0.0}, cplx{0.0, 10.0}}) {
    Instance a =
        generate(default_spec(BoundId::THM21_2_1, 5, 1, 0.8, rng.next()));
    Instance b = a;
    b.poly.leading_scale *= scale;
    const BoundEvaluation ea = evaluate_bound(a);
    const BoundEvaluation eb = evaluate_bound(b);
    const double m = std::abs(scale);
    CHECK(eb.lhs_hi == Catch::Approx(m * ea.lhs_hi).epsilon(1e-8));
    CHECK(eb.rhs_min == Catch::Approx(m * ea.rhs_min).epsilon(1e-7));
    CHECK(eb.ratio == Catch::Approx(ea.ratio).epsilon(1e-7));
  }

  // replacing P(z) by P(e^{i phi} z) shifts the sample-point parameter
  // by n phi and leaves the bound value unchanged
  Instance a = generate(default_spec(BoundId::A_1_3, 4, 0, 1.0, 99));
  const double phi = 0.6;
  Instance b = a;
  for (cplx& r : b.poly.plain_roots) r *= cplx{std::cos(-phi), std::sin(-phi)};
  b.alpha = a.alpha - 4 * phi;
  const BoundEvaluation ea = evaluate_bound(a);
  const BoundEvaluation eb = evaluate_bound(b);
  CHECK(eb.rhs_min == Catch::Approx(ea.rhs_min).epsilon(1e-8));
  CHECK(eb.lhs_hi == Catch::Approx(ea.lhs_hi).epsilon(1e-8));
}

TEST_CASE("lower and upper derivative bounds sandwich max of the derivative") {
  SplitMix64 rng(808);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 2 + static_cast<int>(rng.next() % 7);
    Instance lo = generate(default_spec(BoundId::A_1_5_LOWER, n, 0, 1.0,
                                        rng.next()));
    Instance hi = lo;
    hi.bound_id = BoundId::B_1_1;
    const BoundEvaluation el = evaluate_bound(lo);
    const BoundEvaluation eh = evaluate_bound(hi);
    CHECK(el.rhs_min <= el.lhs_hi + el.tol);
    CHECK(eh.rhs_min >= eh.lhs_lo - eh.tol);
    CHECK(el.rhs_min <= eh.rhs_min + 1e-9 * (1.0 + eh.rhs_min));
  }
}

TEST_CASE("uniform mode reports the substituted right-hand side") {
  Instance inst = equality_witness(BoundId::THM21_2_1, 4, 0.3);
  const BoundEvaluation pw = evaluate_bound(inst, Mode::POINTWISE);
  const BoundEvaluation un = evaluate_bound(inst, Mode::UNIFORM);
  CHECK(pw.mode == Mode::POINTWISE);
  CHECK(un.mode == Mode::UNIFORM);
  CHECK(un.outcome == Outcome::OK);
  // at the witness angle of the LHS maximum the two agree closely here
  CHECK(un.rhs_min == Catch::Approx(pw.rhs_min).epsilon(1e-3));
}

TEST_CASE("lemma hand case and equality configurations") {
  // P = z + 2, k = 2: Re(z P'/P) at z = 1 is 1/3, and the bound is
  // (1/(1+2)) (1 - (2 - 2)/(2 + 2)) = 1/3.
  Instance inst;
  inst.poly.plain_roots = {cplx{-2.0, 0.0}};
  inst.k = 2.0;
  const LemmaEvaluation l4 = check_lemma(LemmaId::L4, inst);
  CHECK(l4.outcome == Outcome::OK);
  CHECK(l4.rhs_at_witness == Catch::Approx(1.0 / 3.0).margin(1e-12));
  CHECK(l4.lhs_at_witness == Catch::Approx(1.0 / 3.0).margin(1e-12));
  CHECK(l4.margin == Catch::Approx(0.0).margin(1e-12));

  // P = z^n: the derivative-sum bound is met with equality everywhere
  Instance zn;
  zn.poly.plain_roots.assign(4, cplx{0.0, 0.0});
  const LemmaEvaluation l1 = check_lemma(LemmaId::L1, zn);
  CHECK(l1.outcome == Outcome::OK);
  CHECK(l1.margin == Catch::Approx(0.0).margin(1e-6));

  // P = z^n at r = 1/2: growth bound r^n max|P| is tight
  const LemmaEvaluation l3 = check_lemma(LemmaId::L3, zn);
  CHECK(l3.outcome == Outcome::OK);
  CHECK(l3.margin == Catch::Approx(0.0).margin(1e-6));
}

TEST_CASE("lemma checks hold on generated instances") {
  SplitMix64 rng(616);
  for (int rep = 0; rep < 60; ++rep) {
    const int n = 1 + static_cast<int>(rng.next() % 8);
    Instance any = generate(default_spec(BoundId::B_1_1, n, 0, 1.0,
                                         rng.next()));
    for (LemmaId id : {LemmaId::L1, LemmaId::L2, LemmaId::L3}) {
      const LemmaEvaluation ev = check_lemma(id, any);
      CHECK(ev.outcome == Outcome::OK);
    }

    const double k4 = rng.uniform(1.0, 2.0);
    Instance outside;
    outside.k = k4;
    for (int i = 0; i < n; ++i) {
      outside.poly.plain_roots.push_back(
          rng.uniform(k4 * 1.001, 3.0 * k4) * rng.unit_phase());
    }
    const LemmaEvaluation l4 = check_lemma(LemmaId::L4, outside);
    CHECK(l4.outcome == Outcome::OK);

    Instance l5inst = outside;
    if (n >= 2 && rep % 2 == 0) {
      l5inst.poly.plain_roots.pop_back();
      l5inst.poly.special_root = rng.uniform(0.0, 0.9) * rng.unit_phase();
      l5inst.poly.special_multiplicity = 1;
    }
    l5inst.polar =
        PolarParameter::outer(rng.uniform(1.0, 4.0) * rng.unit_phase());
    const LemmaEvaluation l5 = check_lemma(LemmaId::L5, l5inst);
    if (l5.outcome != Outcome::BRACE_NEGATIVE) {
      CHECK(l5.outcome == Outcome::OK);
    }
  }
}

TEST_CASE("lemma hypothesis validation") {
  Instance bad;
  bad.poly.plain_roots = {cplx{0.5, 0.0}};
  bad.k = 2.0;  // zero inside |z| < k
  CHECK_THROWS_AS(check_lemma(LemmaId::L4, bad), HypothesisViolated);

  Instance no_polar;
  no_polar.poly.plain_roots = {cplx{2.0, 0.0}};
  no_polar.k = 1.0;
  CHECK_THROWS_AS(check_lemma(LemmaId::L5, no_polar), HypothesisViolated);
}
