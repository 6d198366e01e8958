#include <cmath>
#include <vector>

#include "catch_amalgamated.hpp"
#include "polarbounds/circle.hpp"
#include "polarbounds/rng.hpp"

using namespace polarbounds;

namespace {

DensePolynomial monomial_plus(int n, cplx c) {
  std::vector<cplx> v(static_cast<std::size_t>(n) + 1, cplx{0.0, 0.0});
  v[0] = c;
  v.back() = cplx{1.0, 0.0};
  return DensePolynomial(std::move(v));
}

DensePolynomial random_poly(SplitMix64& rng, int degree) {
  std::vector<cplx> c(static_cast<std::size_t>(degree) + 1);
  for (cplx& x : c) {
    x = cplx{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
  }
  if (std::abs(c.back()) < 0.1) c.back() += cplx{1.0, 0.0};
  return DensePolynomial(std::move(c));
}

// Brute-force sampling oracle; dense enough for 1e-6 agreement checks.
double sampled_max(const DensePolynomial& p, double r, int samples) {
  double best = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double theta = j * kTwoPi / samples;
    const cplx z{r * std::cos(theta), r * std::sin(theta)};
    best = std::max(best, std::abs(evaluate(p, z)));
  }
  return best;
}

double sampled_min(const DensePolynomial& p, double r, int samples) {
  double best = 1e308;
  for (int j = 0; j < samples; ++j) {
    const double theta = j * kTwoPi / samples;
    const cplx z{r * std::cos(theta), r * std::sin(theta)};
    best = std::min(best, std::abs(evaluate(p, z)));
  }
  return best;
}

}  // namespace

TEST_CASE("roots-of-unity maximum on closed forms") {
  // P = z^n + 1: at alpha = 0 the sample points satisfy z^n = 1, so
  // |P| = 2 somewhere; at alpha = pi they satisfy z^n = -1, so |P| = 0.
  for (int n : {1, 2, 3, 6}) {
    DensePolynomial p = monomial_plus(n, cplx{1.0, 0.0});
    CHECK(roots_of_unity_max(p, 0.0).value == Catch::Approx(2.0).margin(1e-12));
    CHECK(roots_of_unity_max(p, kPi).value ==
          Catch::Approx(0.0).margin(1e-12));
  }

  // P = z^n + i a: |P|^2 = 1 + a^2 at the alpha = 0 points
  for (double a : {0.5, 2.0}) {
    DensePolynomial p = monomial_plus(4, cplx{0.0, a});
    CHECK(roots_of_unity_max(p, 0.0).value ==
          Catch::Approx(std::sqrt(1.0 + a * a)).margin(1e-12));
  }

  DensePolynomial constant(std::vector<cplx>{{3.0, 0.0}});
  CHECK_THROWS_AS(roots_of_unity_max(constant, 0.0), DegreeZero);
  CHECK_THROWS_AS(frappier_points_max(constant), DegreeZero);
}

TEST_CASE("two-n point maximum equals max of the two n-point maxima") {
  // P = z^2 + i: the 4 points +-1, +-i give |P| = sqrt(2); the true circle
  // maximum is 2 (at z^2 = i).
  DensePolynomial p = monomial_plus(2, cplx{0.0, 1.0});
  CHECK(frappier_points_max(p) == Catch::Approx(std::sqrt(2.0)).margin(1e-12));
  CHECK(circle_max_modulus(p, 1.0, 1e-10).hi == Catch::Approx(2.0));

  SplitMix64 rng(17);
  for (int rep = 0; rep < 100; ++rep) {
    DensePolynomial q = random_poly(rng, 1 + static_cast<int>(rng.next() % 8));
    const double m0 = roots_of_unity_max(q, 0.0).value;
    const double mpi = roots_of_unity_max(q, kPi).value;
    CHECK(frappier_points_max(q) ==
          Catch::Approx(std::max(m0, mpi)).margin(1e-12));
  }
}

TEST_CASE("certified circle maximum on closed forms") {
  // |z^n| = 1 on the unit circle
  for (int n : {1, 3, 7}) {
    DensePolynomial zn = monomial_plus(n, cplx{0.0, 0.0});
    const CircleExtremum e = circle_max_modulus(zn, 1.0, 1e-10);
    CHECK(e.lo == Catch::Approx(1.0).epsilon(1e-9));
    CHECK(e.hi == Catch::Approx(1.0).epsilon(1e-9));
    CHECK(e.tolerance_met);
  }

  // max |z^n + 1| = 2, attained where n theta = 0 mod 2 pi
  for (int n : {2, 5}) {
    DensePolynomial p = monomial_plus(n, cplx{1.0, 0.0});
    const CircleExtremum e = circle_max_modulus(p, 1.0, 1e-10);
    CHECK(e.hi == Catch::Approx(2.0).epsilon(1e-9));
    CHECK(e.hi - e.lo <= 1e-9 * e.hi);
    const double folded = std::fmod(n * e.witness_angle, kTwoPi);
    const double dist = std::min(folded, kTwoPi - folded);
    CHECK(dist < 1e-4);
  }

  // max over |z| = 1/2 of |z^2 + 1| = 5/4 at theta = 0
  DensePolynomial p2 = monomial_plus(2, cplx{1.0, 0.0});
  const CircleExtremum half = circle_max_modulus(p2, 0.5, 1e-10);
  CHECK(half.hi == Catch::Approx(1.25).epsilon(1e-9));
  const double fold2 = std::fmod(2.0 * half.witness_angle, kTwoPi);
  CHECK(std::min(fold2, kTwoPi - fold2) < 1e-4);

  // constant polynomial: trivial enclosure
  DensePolynomial c(std::vector<cplx>{{-3.0, 4.0}});
  const CircleExtremum ce = circle_max_modulus(c, 1.0, 1e-10);
  CHECK(ce.lo == 5.0);
  CHECK(ce.hi == 5.0);
}

TEST_CASE("certified circle minimum on closed forms") {
  // min |z^n| on |z| = r is r^n
  for (double r : {0.5, 2.0}) {
    DensePolynomial zn = monomial_plus(3, cplx{0.0, 0.0});
    const CircleExtremum e = circle_min_modulus(zn, r, 1e-10);
    CHECK(e.lo == Catch::Approx(std::pow(r, 3)).margin(1e-8));
  }

  // z^2 + 1 vanishes at +-i
  DensePolynomial p = monomial_plus(2, cplx{1.0, 0.0});
  const CircleExtremum e = circle_min_modulus(p, 1.0, 1e-10);
  CHECK(e.hi < 1e-4);
  const double fold = std::fmod(2.0 * e.witness_angle + kPi, kTwoPi);
  CHECK(std::min(fold, kTwoPi - fold) < 2e-2);

  // min |z + 2| on the unit circle is 1, at theta = pi
  DensePolynomial q({{2.0, 0.0}, {1.0, 0.0}});
  const CircleExtremum qe = circle_min_modulus(q, 1.0, 1e-10);
  CHECK(qe.hi == Catch::Approx(1.0).margin(1e-8));
  CHECK(qe.witness_angle == Catch::Approx(kPi).margin(1e-3));
}

TEST_CASE("enclosures contain the dense-sampling oracle") {
  SplitMix64 rng(2026);
  for (int rep = 0; rep < 200; ++rep) {
    DensePolynomial p = random_poly(rng, 1 + static_cast<int>(rng.next() % 10));
    const double r =
        (rep % 3 == 0) ? 0.3 : (rep % 3 == 1 ? 0.5 : 0.9);
    const CircleExtremum mx = circle_max_modulus(p, r, 1e-10);
    const CircleExtremum mn = circle_min_modulus(p, r, 1e-10);
    const int samples = 20000;
    const double smax = sampled_max(p, r, samples);
    const double smin = sampled_min(p, r, samples);
    // |P(r e^{i theta})| is Lipschitz in theta with constant r max |P'|,
    // so the sampled extrema are within lip * (half spacing) of the truth.
    const double lip = 1.1 * r * sampled_max(derivative(p), r, 4096);
    const double gap = lip * (kPi / samples);
    CHECK(mx.hi >= smax - 1e-12 * (1.0 + smax));
    CHECK(mx.lo <= smax + gap + 1e-12);
    CHECK(mn.lo <= smin + 1e-12 * (1.0 + smin));
    CHECK(mn.hi >= smin - gap - 1e-12);
    CHECK(mx.hi - mx.lo <= 1e-9 * mx.hi + 1e-15);
    // attained values land inside the enclosure
    const cplx zw{r * std::cos(mx.witness_angle),
                  r * std::sin(mx.witness_angle)};
    CHECK(std::abs(evaluate(p, zw)) >= mx.lo - 1e-9 * (1.0 + mx.lo));
  }
}

TEST_CASE("sample-point maxima never exceed the certified circle maximum") {
  SplitMix64 rng(5150);
  for (int rep = 0; rep < 100; ++rep) {
    DensePolynomial p = random_poly(rng, 1 + static_cast<int>(rng.next() % 9));
    const double alpha = rng.angle();
    const CircleExtremum mx = circle_max_modulus(p, 1.0, 1e-10);
    CHECK(roots_of_unity_max(p, alpha).value <= mx.hi * (1.0 + 1e-12));
    CHECK(frappier_points_max(p) <= mx.hi * (1.0 + 1e-12));
  }
}

TEST_CASE("circle extrema are rotation equivariant") {
  SplitMix64 rng(31);
  for (int rep = 0; rep < 40; ++rep) {
    DensePolynomial p = random_poly(rng, 2 + static_cast<int>(rng.next() % 7));
    const double phi = rng.angle();
    // P(e^{i phi} z) has the same circle extrema as P
    std::vector<cplx> rotated(p.coefficients());
    cplx w{1.0, 0.0};
    const cplx step{std::cos(phi), std::sin(phi)};
    for (cplx& c : rotated) {
      c *= w;
      w *= step;
    }
    DensePolynomial q(std::move(rotated));
    const CircleExtremum mp = circle_max_modulus(p, 1.0, 1e-10);
    const CircleExtremum mq = circle_max_modulus(q, 1.0, 1e-10);
    CHECK(mq.midpoint() ==
          Catch::Approx(mp.midpoint()).epsilon(1e-9));
    const CircleExtremum np = circle_min_modulus(p, 1.0, 1e-10);
    const CircleExtremum nq = circle_min_modulus(q, 1.0, 1e-10);
    CHECK(nq.midpoint() ==
          Catch::Approx(np.midpoint()).margin(1e-8).epsilon(1e-8));
  }
}
