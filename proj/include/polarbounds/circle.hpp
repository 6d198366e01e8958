#pragma once

#include <cmath>
#include <queue>
#include <vector>

#include "polarbounds/poly.hpp"

namespace polarbounds {

inline constexpr double kPi = 3.1415926535897932384626433832795;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class ExtremumKind { MAX, MIN };

// Certified enclosure [lo, hi] of an extremum of |P| on |z| = radius.
// For MAX, lo is attained at witness_angle; for MIN, hi is.
struct CircleExtremum {
  double lo = 0.0;
  double hi = 0.0;
  double witness_angle = 0.0;
  ExtremumKind kind = ExtremumKind::MAX;
  double radius = 1.0;
  bool tolerance_met = true;

  double midpoint() const { return 0.5 * (lo + hi); }
};

struct RootsOfUnityMax {
  double value = 0.0;
  int arg_index = 1;  // l in [1, n]
  double alpha = 0.0;
};

// M_alpha: exact maximum of |P| over the n points e^{i(alpha + 2 l pi)/n}.
inline RootsOfUnityMax roots_of_unity_max(const DensePolynomial& p,
                                          double alpha) {
  const int n = p.degree();
  if (n < 1) throw DegreeZero("roots_of_unity_max: constant polynomial");
  RootsOfUnityMax out;
  out.alpha = alpha;
  out.value = -1.0;
  for (int l = 1; l <= n; ++l) {
    const double theta = (alpha + kTwoPi * l) / n;
    const cplx z{std::cos(theta), std::sin(theta)};
    const double v = std::abs(evaluate(p, z));
    if (v > out.value) {
      out.value = v;
      out.arg_index = l;
    }
  }
  return out;
}

// Maximum of |P| over the 2n points e^{i l pi / n}; equals max(M_0, M_pi).
inline double frappier_points_max(const DensePolynomial& p) {
  const int n = p.degree();
  if (n < 1) throw DegreeZero("frappier_points_max: constant polynomial");
  double best = -1.0;
  for (int l = 1; l <= 2 * n; ++l) {
    const double theta = l * kPi / n;
    const cplx z{std::cos(theta), std::sin(theta)};
    best = std::max(best, std::abs(evaluate(p, z)));
  }
  return best;
}

namespace detail {

struct Segment {
  double bound;  // upper bound on sign*g over the segment
  double center;
  double half;
  bool operator<(const Segment& o) const {
    if (bound != o.bound) return bound < o.bound;
    return center > o.center;  // ties: smaller angle first
  }
};

// Branch-and-bound on g(theta) = |P(r e^{i theta})|^2, a real trigonometric
// polynomial of degree n, so |g'''| <= n^3 G with G = max g (Bernstein).
// Each segment of half-width h centered at m gets the Taylor bound
// g(m) + |g'(m)| h + |g''(m)| h^2 / 2 + n^3 G h^3 / 6, cubic in h, which
// keeps the segment count manageable even for constant-modulus inputs.
// sign = +1 for MAX, -1 for MIN.
inline CircleExtremum circle_extremum(const DensePolynomial& p, double r,
                                      double rel_tol, ExtremumKind kind) {
  CircleExtremum out;
  out.kind = kind;
  out.radius = r;
  const int n = p.degree();
  if (n == 0) {
    out.lo = out.hi = std::abs(p.coefficient(0));
    return out;
  }
  const double sign = (kind == ExtremumKind::MAX) ? 1.0 : -1.0;
  const DensePolynomial dp = derivative(p);
  const DensePolynomial ddp = derivative(dp);
  // F(theta) = P(r e^{i theta}); F' = i z P', F'' = -z P' - z^2 P''.
  auto g_eval = [&](double theta, double& gv, double& dgv, double& ddgv) {
    const cplx z{r * std::cos(theta), r * std::sin(theta)};
    const cplx v = evaluate(p, z);
    const cplx f1 = cplx{0.0, 1.0} * z * evaluate(dp, z);
    const cplx f2 = -z * evaluate(dp, z) - z * z * evaluate(ddp, z);
    gv = std::norm(v);
    dgv = 2.0 * std::real(std::conj(v) * f1);
    ddgv = 2.0 * (std::norm(f1) + std::real(std::conj(v) * f2));
  };
  auto segment_bound = [&](double gc, double dgc, double ddgc, double h) {
    return sign * gc + std::abs(dgc) * h + 0.5 * std::abs(ddgc) * h * h;
    // the cubic remainder term is added by the caller, which knows G
  };

  const int N = std::max(4096, 512 * n);
  const double h = kTwoPi / N;

  double best = -1e308;  // best sampled value of sign*g
  double best_theta = 0.0;
  double gmax = 0.0;
  std::vector<double> gv(static_cast<std::size_t>(N));
  std::vector<double> dgv(static_cast<std::size_t>(N));
  std::vector<double> ddgv(static_cast<std::size_t>(N));
  for (int j = 0; j < N; ++j) {
    const double theta = (j + 0.5) * h;
    g_eval(theta, gv[static_cast<std::size_t>(j)],
           dgv[static_cast<std::size_t>(j)],
           ddgv[static_cast<std::size_t>(j)]);
    gmax = std::max(gmax, gv[static_cast<std::size_t>(j)]);
    if (sign * gv[static_cast<std::size_t>(j)] > best) {
      best = sign * gv[static_cast<std::size_t>(j)];
      best_theta = theta;
    }
  }
  const double G = gmax / (1.0 - n * kPi / N);
  const double rem3 = static_cast<double>(n) * n * n * G / 6.0;

  std::priority_queue<Segment> queue;
  for (int j = 0; j < N; ++j) {
    const double theta = (j + 0.5) * h;
    const double q0 = h / 2.0;
    const double b = segment_bound(gv[static_cast<std::size_t>(j)],
                                   dgv[static_cast<std::size_t>(j)],
                                   ddgv[static_cast<std::size_t>(j)], q0) +
                     rem3 * q0 * q0 * q0;
    queue.push(Segment{b, theta, q0});
  }

  // Converts the sign*g enclosure [best, ub] into modulus units and tests
  // the stopping tolerance (absolute 1e-10 fallback for minima near zero).
  auto enclosure_ok = [&](double ub) {
    const double lo_g = (kind == ExtremumKind::MAX) ? best : -ub;
    const double hi_g = (kind == ExtremumKind::MAX) ? ub : -best;
    out.lo = std::sqrt(std::max(0.0, lo_g));
    out.hi = std::sqrt(std::max(0.0, hi_g));
    const double scale = (kind == ExtremumKind::MAX) ? out.lo : out.hi;
    const double tol = std::max(rel_tol * std::max(scale, 1e-300),
                                (kind == ExtremumKind::MIN) ? 1e-10 : 0.0);
    return out.hi - out.lo <= tol;
  };

  const long max_pops = 400000;
  long pops = 0;
  while (true) {
    const double ub =
        queue.empty() ? best : std::max(best, queue.top().bound);
    if (enclosure_ok(ub) || queue.empty()) break;
    if (++pops > max_pops) {
      out.tolerance_met = false;
      break;
    }
    const Segment top = queue.top();
    queue.pop();
    if (top.bound <= best) continue;  // cannot contain a better point
    const double q = top.half / 2.0;
    for (const double c : {top.center - q, top.center + q}) {
      double gc, dgc, ddgc;
      g_eval(c, gc, dgc, ddgc);
      if (sign * gc > best) {
        best = sign * gc;
        best_theta = c;
      }
      queue.push(
          Segment{segment_bound(gc, dgc, ddgc, q) + rem3 * q * q * q, c, q});
    }
  }
  out.witness_angle = std::fmod(best_theta, kTwoPi);
  if (out.witness_angle < 0.0) out.witness_angle += kTwoPi;
  return out;
}

}  // namespace detail

inline CircleExtremum circle_max_modulus(const DensePolynomial& p, double r,
                                         double rel_tol) {
  return detail::circle_extremum(p, r, rel_tol, ExtremumKind::MAX);
}

inline CircleExtremum circle_min_modulus(const DensePolynomial& p, double r,
                                         double rel_tol) {
  return detail::circle_extremum(p, r, rel_tol, ExtremumKind::MIN);
}

}  // namespace polarbounds
