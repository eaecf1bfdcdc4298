#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "volterra/geometry.hpp"

namespace volterra {

/// Exponents (m_1, ..., m_n) of a monomial z^m.
struct MultiIndex {
  std::array<int, kMaxDimension> e{0, 0};
  int n = 1;

  MultiIndex() = default;
  explicit MultiIndex(int m1) : e{m1, 0}, n(1) {}
  MultiIndex(int m1, int m2) : e{m1, m2}, n(2) {}

  int order() const noexcept { return n == 1 ? e[0] : e[0] + e[1]; }
  auto operator<=>(const MultiIndex&) const = default;
};

/// A holomorphic function with closed-form value and radial derivative.
/// Internally a finite weighted sum of terms from four families.
class Symbol {
 public:
  struct PowerSeries {
    std::map<MultiIndex, cplx> coeffs;
  };
  /// (1 - <z, a>)^{-s}
  struct Kernel {
    CVec a;
    double s;
  };
  /// log 1/(1 - <z, a>), |a| <= 1
  struct LogKernel {
    CVec a;
  };
  /// sum_k c_k z_1^{base^k}, k = 0, 1, ...
  struct Lacunary {
    std::vector<double> coeffs;
    int base;
  };
  using Family = std::variant<PowerSeries, Kernel, LogKernel, Lacunary>;
  struct Term {
    cplx weight;
    Family family;
  };

  explicit Symbol(int n = 1);

  static Symbol constant(int n, cplx c);
  static Symbol monomial(const MultiIndex& m, cplx c = 1.0);
  /// n = 1 polynomial sum_k c_k z^k.
  static Symbol polynomial(const std::vector<cplx>& coeffs);
  static Symbol powerSeries(int n, const std::map<MultiIndex, cplx>& coeffs);
  /// Throws DomainError unless |a| < 1, ParameterError unless s > 0.
  static Symbol kernel(const BallPoint& a, double s);
  /// Throws DomainError unless 0 < |a| <= 1.
  static Symbol logKernel(const CVec& a);
  /// Throws ParameterError unless base >= 2 and the largest degree fits in 2^62.
  static Symbol lacunary(const std::vector<double>& coeffs, int base, int n = 1);

  int dim() const noexcept { return n_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }

  /// Exact value. Throws DomainError for |z| >= 1 and NonFiniteError when a
  /// kernel denominator |1 - <z, a>| falls below 1e-14.
  cplx operator()(const CVec& z) const;
  cplx evaluate(const BallPoint& z) const { return (*this)(z.coords()); }
  /// Rb(z) = sum_k z_k d b / d z_k in closed form.
  cplx radial(const CVec& z) const;

  Symbol operator+(const Symbol& o) const;
  Symbol operator*(cplx c) const;
  Symbol operator-(const Symbol& o) const { return *this + o * cplx(-1.0); }

  /// True when every term extends continuously to the closed ball together with
  /// its boundary values (finite sums, kernels with |a| < 1).
  bool boundaryRegular() const noexcept;
  /// Kernel or log point nearest to the sphere, if any term is peaked.
  std::optional<CVec> peak() const;
  bool isConstant() const noexcept;
  /// Taylor coefficients c_0..c_maxDegree (n = 1 only).
  std::vector<cplx> taylorCoefficients(int maxDegree) const;
  /// Exact for finite power series and lacunary sums (n = 1); nullopt otherwise.
  std::optional<std::vector<cplx>> exactCoefficients() const;
  std::string describe() const;

 private:
  int n_;
  std::vector<Term> terms_;
};

/// Pointwise-evaluable function with metadata used by the norm routines.
struct Evaluable {
  int dim = 1;
  std::function<cplx(const CVec&)> value;
  bool boundaryRegular = false;
  std::optional<CVec> peak;
  /// Optional exact Taylor coefficients (n = 1).
  std::optional<std::vector<cplx>> coefficients;
};

Evaluable asEvaluable(const Symbol& b);
/// Rb as an evaluable function.
Evaluable radialDerivative(const Symbol& b);

/// Independent radial derivative of any holomorphic g: d/d lambda g(lambda z) at
/// lambda = 1 by the Cauchy integral over a circle of radius rho around 1,
/// rho = min(0.5, (1 - |z|) / (2 |z|)), with `nodes` trapezoid points.
cplx contourRadialDerivative(const std::function<cplx(const CVec&)>& g, const CVec& z, int nodes = 64);

/// f_z(u) = (1 - |z|^2)^{s - (n+1+alpha)/p} (1 - <u, z>)^{-s}; requires s > (n+1+alpha)/p.
Symbol necessityTestFunction(const BallPoint& z, double s, double p, double alpha);

/// sum_k lambda_k (1 - |a_k|^2)^s (1 - <z, a_k>)^{-(s + (n+1+alpha)/p)}.
/// Requires s > n max(1, 1/p) - n/p and matching lengths.
Symbol atomSynthesis(const std::vector<BallPoint>& points, const std::vector<cplx>& lambda, double s, double p,
                     double alpha);

/// Parses `poly:c0,c1,...`, `kernel:a=<complex>,s=<real>`, `log:a=<complex>`,
/// `lacunary:base=<int>,c=<c0,c1,...>`. Complex literals are `re[+im i]`.
/// For n = 2 the point a is placed on the first coordinate axis and poly
/// coefficients refer to powers of z_1. Throws ParameterError on malformed input.
Symbol parseSymbol(const std::string& spec, int n = 1);
cplx parseComplex(const std::string& text);

}  // namespace volterra
