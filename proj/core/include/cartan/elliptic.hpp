// Complete elliptic integrals and Jacobi elliptic functions on the real line.
#pragma once

#include <array>
#include <cstddef>

namespace cartan {

// Elliptic modulus k in [0, 1].  Values outside the closed interval are
// rejected at construction; k = 1 selects the hyperbolic degeneration.
class Modulus {
 public:
  explicit Modulus(double k);
  double k() const noexcept { return k_; }
  double k2() const noexcept { return k_ * k_; }

 private:
  double k_;
};

// Values of the Jacobi functions at one argument.  eps is the incomplete
// second-kind integral E(p) = int_0^p dn^2(u) du, which grows linearly:
// E(p + 4K) = E(p) + 4E.
struct EllipticValues {
  double sn;
  double cn;
  double dn;
  double eps;
};

// Quarter period K(k).  +infinity at k = 1.
double complete_K(Modulus m);

// Complete second-kind integral E(k).  E(1) = 1.
double complete_E(Modulus m);

// Fixed-modulus evaluator.  Precomputes the arithmetic-geometric mean chain
// once so that repeated evaluations (root scans, flows) stay cheap.
class JacobiEngine {
 public:
  explicit JacobiEngine(Modulus m);

  EllipticValues at(double p) const;

  double k() const noexcept { return m_.k(); }
  double k2() const noexcept { return m_.k2(); }
  double K() const noexcept { return K_; }
  double E() const noexcept { return E_; }

 private:
  static constexpr std::size_t kMaxDepth = 32;

  Modulus m_;
  double K_;
  double E_;
  std::size_t depth_;
  std::array<double, kMaxDepth> agm_a_;
  std::array<double, kMaxDepth> agm_c_;
};

// One-shot evaluation; builds a JacobiEngine internally.
EllipticValues jacobi(double p, Modulus m);

}  // namespace cartan
