#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace polarbounds {

using cplx = std::complex<double>;

struct DegreeOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotARoot : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegreeZero : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Expansion of factored polynomials is capped here; double-precision
// convolution stays comfortably accurate below this degree.
inline constexpr int kMaxExpandDegree = 64;

// P(z) = sum_v c_v z^v, stored in increasing powers with trailing
// near-zero coefficients trimmed so degree() is honest.
class DensePolynomial {
 public:
  DensePolynomial() : coeffs_{cplx{0.0, 0.0}} {}

  explicit DensePolynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(cplx{0.0, 0.0});
    trim();
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  bool is_zero() const {
    return coeffs_.size() == 1 && coeffs_[0] == cplx{0.0, 0.0};
  }

  const std::vector<cplx>& coefficients() const { return coeffs_; }

  cplx coefficient(int v) const {
    if (v < 0 || v > degree()) return {0.0, 0.0};
    return coeffs_[static_cast<std::size_t>(v)];
  }

  cplx leading() const { return coeffs_.back(); }

  friend bool operator==(const DensePolynomial& a, const DensePolynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }

 private:
  void trim() {
    double max_mag = 0.0;
    for (const cplx& c : coeffs_) max_mag = std::max(max_mag, std::abs(c));
    const double thresh = 1e-12 * max_mag;
    while (coeffs_.size() > 1 && std::abs(coeffs_.back()) <= thresh) {
      coeffs_.pop_back();
    }
    if (coeffs_.size() == 1 && std::abs(coeffs_[0]) <= thresh) {
      coeffs_[0] = {0.0, 0.0};
    }
  }

  std::vector<cplx> coeffs_;
};

// Roots-first representation: leading_scale * (z - z0)^s * prod (z - r_i).
// Zero-location hypotheses are checked on this form, exactly.
struct FactoredPolynomial {
  cplx leading_scale{1.0, 0.0};
  std::vector<cplx> plain_roots;
  cplx special_root{0.0, 0.0};
  int special_multiplicity = 0;

  int degree() const {
    return special_multiplicity + static_cast<int>(plain_roots.size());
  }
};

inline cplx evaluate(const DensePolynomial& p, cplx z) {
  const auto& c = p.coefficients();
  cplx acc = c.back();
  for (std::size_t i = c.size() - 1; i-- > 0;) acc = acc * z + c[i];
  return acc;
}

inline cplx evaluate(const FactoredPolynomial& f, cplx z) {
  cplx acc = f.leading_scale;
  for (int i = 0; i < f.special_multiplicity; ++i) acc *= z - f.special_root;
  for (const cplx& r : f.plain_roots) acc *= z - r;
  return acc;
}

inline DensePolynomial derivative(const DensePolynomial& p) {
  const auto& c = p.coefficients();
  if (c.size() == 1) return DensePolynomial{};
  std::vector<cplx> d(c.size() - 1);
  for (std::size_t v = 1; v < c.size(); ++v) {
    d[v - 1] = static_cast<double>(v) * c[v];
  }
  return DensePolynomial(std::move(d));
}

// Q(z) = z^n conj(P(1/conj(z))): coefficients conjugated and reversed.
// |Q| = |P| on the unit circle.
inline DensePolynomial conjugate_reciprocal(const DensePolynomial& p) {
  std::vector<cplx> q(p.coefficients().rbegin(), p.coefficients().rend());
  for (cplx& c : q) c = std::conj(c);
  return DensePolynomial(std::move(q));
}

// D_b P(z) = n P(z) + (b - z) P'(z). The z^n coefficient cancels
// identically; the residual is asserted tiny before trimming.
inline DensePolynomial polar_derivative(const DensePolynomial& p, cplx b) {
  const int n = p.degree();
  const auto& c = p.coefficients();
  std::vector<cplx> out(static_cast<std::size_t>(n) + 1, cplx{0.0, 0.0});
  for (int v = 0; v <= n; ++v) {
    // n*c_v + b*(v+1)*c_{v+1} - v*c_v
    out[static_cast<std::size_t>(v)] =
        static_cast<double>(n - v) * c[static_cast<std::size_t>(v)] +
        (v < n ? b * (static_cast<double>(v + 1) *
                      c[static_cast<std::size_t>(v + 1)])
               : cplx{0.0, 0.0});
  }
  double max_mag = 0.0;
  for (const cplx& x : out) max_mag = std::max(max_mag, std::abs(x));
  if (std::abs(out.back()) > 1e-12 * max_mag && n > 0) {
    throw std::logic_error("polar_derivative: leading term failed to cancel");
  }
  if (n > 0) out.pop_back();
  return DensePolynomial(std::move(out));
}

inline DensePolynomial expand(const FactoredPolynomial& f) {
  if (f.degree() > kMaxExpandDegree) {
    throw DegreeOverflow("expand: total degree " + std::to_string(f.degree()) +
                         " exceeds cap " + std::to_string(kMaxExpandDegree));
  }
  std::vector<cplx> acc{f.leading_scale};
  auto mul_monomial = [&acc](cplx root) {
    acc.push_back({0.0, 0.0});
    for (std::size_t i = acc.size() - 1; i-- > 0;) {
      acc[i + 1] += acc[i];
      acc[i] *= -root;
    }
  };
  for (int i = 0; i < f.special_multiplicity; ++i) mul_monomial(f.special_root);
  for (const cplx& r : f.plain_roots) mul_monomial(r);
  return DensePolynomial(std::move(acc));
}

// Synthetic division by (z - z0), applied s times; remainders must vanish.
// The remainder is P(z0) computed by Horner, so it is judged against the
// magnitude of that evaluation, sum |c_i| |z0|^i, not the raw coefficients.
inline DensePolynomial deflate(const DensePolynomial& p, cplx z0, int s) {
  std::vector<cplx> c = p.coefficients();
  for (int pass = 0; pass < s; ++pass) {
    if (c.size() < 2) throw NotARoot("deflate: degree too small");
    double eval_scale = 0.0;
    {
      const double m = std::abs(z0);
      double pw = 1.0;
      for (const cplx& x : c) {
        eval_scale = std::max(eval_scale, std::abs(x) * pw);
        pw *= m;
      }
    }
    std::vector<cplx> q(c.size() - 1);
    cplx carry = c.back();
    for (std::size_t i = c.size() - 1; i-- > 0;) {
      q[i] = carry;
      carry = c[i] + carry * z0;
    }
    if (std::abs(carry) > 1e-8 * eval_scale) {
      throw NotARoot("deflate: remainder " + std::to_string(std::abs(carry)) +
                     " at pass " + std::to_string(pass));
    }
    c = std::move(q);
  }
  return DensePolynomial(std::move(c));
}

}  // namespace polarbounds
