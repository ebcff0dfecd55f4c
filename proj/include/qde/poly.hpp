#pragma once
// Dense univariate polynomials with ascending coefficient storage, templated
// over the complex value type so the same code serves the long double
// geometry layer and the MPFR moment pipeline.

#include "qde/mpc.hpp"
#include "qde/scalars.hpp"

#include <cstddef>
#include <vector>

namespace qde {

template <class C>
struct scalar_of;

template <>
struct scalar_of<cplx> {
  using type = real;
};

template <>
struct scalar_of<mpn::Cplx> {
  using type = mpn::Real;
};

template <class C>
using scalar_of_t = typename scalar_of<C>::type;

template <class C>
class Poly {
 public:
  Poly() : c_(1, C(0)) {}
  explicit Poly(std::vector<C> ascending) : c_(std::move(ascending)) {
    if (c_.empty()) c_.push_back(C(0));
  }

  static Poly from_roots(const std::vector<C>& roots, const C& leading) {
    std::vector<C> c{leading};
    for (const C& r : roots) {
      c.push_back(C(0));
      for (std::size_t i = c.size() - 1; i > 0; --i) {
        c[i] = c[i - 1] - r * c[i];
      }
      c[0] = -r * c[0];
    }
    return Poly(std::move(c));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const C& operator[](std::size_t k) const { return c_[k]; }
  C& operator[](std::size_t k) { return c_[k]; }
  const std::vector<C>& coeffs() const { return c_; }

  C eval(const C& z) const {
    C acc = c_.back();
    for (std::size_t i = c_.size() - 1; i > 0; --i) {
      acc = acc * z + c_[i - 1];
    }
    return acc;
  }

  // Value and first derivative in one Horner pass.
  void eval2(const C& z, C& p, C& dp) const {
    p = c_.back();
    dp = C(0);
    for (std::size_t i = c_.size() - 1; i > 0; --i) {
      dp = dp * z + p;
      p = p * z + c_[i - 1];
    }
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<C> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) {
      d[k - 1] = scalar_of_t<C>(static_cast<int>(k)) * c_[k];
    }
    return Poly(std::move(d));
  }

  Poly multiply(const Poly& other) const {
    std::vector<C> p(c_.size() + other.c_.size() - 1, C(0));
    for (std::size_t i = 0; i < c_.size(); ++i) {
      for (std::size_t j = 0; j < other.c_.size(); ++j) {
        p[i + j] += c_[i] * other.c_[j];
      }
    }
    return Poly(std::move(p));
  }

  // Drops trailing near-zero leading coefficients relative to the largest one.
  Poly trimmed(const scalar_of_t<C>& rel_tol) const {
    using S = scalar_of_t<C>;
    S biggest(0);
    for (const C& v : c_) {
      S m = abs(v);
      if (m > biggest) biggest = m;
    }
    std::size_t n = c_.size();
    while (n > 1 && abs(c_[n - 1]) <= rel_tol * biggest) --n;
    return Poly(std::vector<C>(c_.begin(), c_.begin() + n));
  }

 private:
  std::vector<C> c_;
};

using PolyC = Poly<cplx>;

// p(slope * x + offset) as a polynomial in x, by Horner over coefficients.
template <class C>
Poly<C> compose_affine(const Poly<C>& p, const C& slope, const C& offset) {
  Poly<C> inner(std::vector<C>{offset, slope});
  Poly<C> out(std::vector<C>{p[static_cast<std::size_t>(p.degree())]});
  for (int k = p.degree() - 1; k >= 0; --k) {
    out = out.multiply(inner);
    out[0] += p[static_cast<std::size_t>(k)];
  }
  return out;
}

}  // namespace qde
