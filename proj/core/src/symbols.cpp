#include "volterra/symbols.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace volterra {

namespace {

constexpr double kKernelGuard = 1e-14;

cplx intPow(cplx z, int m) {
  cplx r = 1.0;
  cplx b = z;
  while (m > 0) {
    if (m & 1) r *= b;
    b *= b;
    m >>= 1;
  }
  return r;
}

cplx monomialValue(const MultiIndex& m, const CVec& z) {
  cplx v = intPow(z[0], m.e[0]);
  if (m.n == 2) v *= intPow(z[1], m.e[1]);
  return v;
}

cplx kernelDenominator(const CVec& z, const CVec& a) {
  const cplx d = 1.0 - inner(z, a);
  if (std::abs(d) < kKernelGuard) {
    std::ostringstream os;
    os << "kernel overflow: |1 - <z, a>| = " << std::abs(d) << " below " << kKernelGuard;
    throw NonFiniteError(os.str());
  }
  return d;
}

std::string formatComplex(cplx c) {
  std::ostringstream os;
  os.precision(10);
  os << c.real();
  if (c.imag() != 0.0) os << (c.imag() < 0 ? "" : "+") << c.imag() << "i";
  return os.str();
}

std::string formatVec(const CVec& a) {
  if (a.dim() == 1) return formatComplex(a[0]);
  return "(" + formatComplex(a[0]) + ";" + formatComplex(a[1]) + ")";
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Symbol::Symbol(int n) : n_(n) {
  if (n < 1 || n > kMaxDimension) throw DomainError("dimension must be 1 or 2");
}

Symbol Symbol::constant(int n, cplx c) {
  Symbol s(n);
  MultiIndex m = n == 1 ? MultiIndex(0) : MultiIndex(0, 0);
  s.terms_.push_back({1.0, PowerSeries{{{m, c}}}});
  return s;
}

Symbol Symbol::monomial(const MultiIndex& m, cplx c) {
  if (m.e[0] < 0 || m.e[1] < 0) throw ParameterError("multi-index exponents must be nonnegative");
  Symbol s(m.n);
  s.terms_.push_back({1.0, PowerSeries{{{m, c}}}});
  return s;
}

Symbol Symbol::polynomial(const std::vector<cplx>& coeffs) {
  Symbol s(1);
  PowerSeries ps;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] != 0.0) ps.coeffs[MultiIndex(static_cast<int>(k))] = coeffs[k];
  }
  s.terms_.push_back({1.0, ps});
  return s;
}

Symbol Symbol::powerSeries(int n, const std::map<MultiIndex, cplx>& coeffs) {
  Symbol s(n);
  for (const auto& [m, c] : coeffs) {
    if (m.n != n) throw DomainError("multi-index dimension mismatch");
    if (m.e[0] < 0 || m.e[1] < 0) throw ParameterError("multi-index exponents must be nonnegative");
    (void)c;
  }
  s.terms_.push_back({1.0, PowerSeries{coeffs}});
  return s;
}

Symbol Symbol::kernel(const BallPoint& a, double s) {
  if (!(s > 0.0)) throw ParameterError("kernel exponent s must be positive");
  Symbol out(a.dim());
  out.terms_.push_back({1.0, Kernel{a.coords(), s}});
  return out;
}

Symbol Symbol::logKernel(const CVec& a) {
  const double r = a.norm();
  if (!(r > 0.0) || r > 1.0 + 1e-12) throw DomainError("log kernel requires 0 < |a| <= 1");
  Symbol out(a.dim());
  out.terms_.push_back({1.0, LogKernel{r > 1.0 ? a * cplx(1.0 / r) : a}});
  return out;
}

Symbol Symbol::lacunary(const std::vector<double>& coeffs, int base, int n) {
  if (base < 2) throw ParameterError("lacunary base must be at least 2");
  const double maxDeg = std::pow(static_cast<double>(base), static_cast<double>(coeffs.size()) - 1.0);
  if (maxDeg > std::ldexp(1.0, 62)) throw ParameterError("lacunary degree exceeds 2^62");
  Symbol out(n);
  out.terms_.push_back({1.0, Lacunary{coeffs, base}});
  return out;
}

cplx Symbol::operator()(const CVec& z) const {
  if (z.dim() != n_) throw DomainError("symbol evaluated at a point of the wrong dimension");
  if (!(z.normSq() < 1.0)) throw DomainError("symbol evaluated outside the open ball");
  cplx total = 0.0;
  for (const auto& t : terms_) {
    const cplx v = std::visit(
        Overloaded{
            [&](const PowerSeries& ps) {
              cplx s = 0.0;
              for (const auto& [m, c] : ps.coeffs) s += c * monomialValue(m, z);
              return s;
            },
            [&](const Kernel& k) { return std::exp(-k.s * std::log(kernelDenominator(z, k.a))); },
            [&](const LogKernel& l) { return -std::log(kernelDenominator(z, l.a)); },
            [&](const Lacunary& l) {
              cplx s = 0.0;
              cplx w = z[0];
              for (std::size_t k = 0; k < l.coeffs.size(); ++k) {
                s += l.coeffs[k] * w;
                w = intPow(w, l.base);
              }
              return s;
            }},
        t.family);
    total += t.weight * v;
  }
  return total;
}

cplx Symbol::radial(const CVec& z) const {
  if (z.dim() != n_) throw DomainError("symbol evaluated at a point of the wrong dimension");
  if (!(z.normSq() < 1.0)) throw DomainError("symbol evaluated outside the open ball");
  cplx total = 0.0;
  for (const auto& t : terms_) {
    const cplx v = std::visit(
        Overloaded{
            [&](const PowerSeries& ps) {
              cplx s = 0.0;
              for (const auto& [m, c] : ps.coeffs) {
                if (m.order() != 0) s += static_cast<double>(m.order()) * c * monomialValue(m, z);
              }
              return s;
            },
            [&](const Kernel& k) {
              const cplx d = kernelDenominator(z, k.a);
              return k.s * inner(z, k.a) * std::exp(-(k.s + 1.0) * std::log(d));
            },
            [&](const LogKernel& l) { return inner(z, l.a) / kernelDenominator(z, l.a); },
            [&](const Lacunary& l) {
              cplx s = 0.0;
              cplx w = z[0];
              double deg = 1.0;
              for (std::size_t k = 0; k < l.coeffs.size(); ++k) {
                s += l.coeffs[k] * deg * w;
                w = intPow(w, l.base);
                deg *= l.base;
              }
              return s;
            }},
        t.family);
    total += t.weight * v;
  }
  return total;
}

Symbol Symbol::operator+(const Symbol& o) const {
  if (o.n_ != n_) throw DomainError("cannot add symbols of different dimension");
  Symbol s = *this;
  s.terms_.insert(s.terms_.end(), o.terms_.begin(), o.terms_.end());
  return s;
}

Symbol Symbol::operator*(cplx c) const {
  Symbol s = *this;
  for (auto& t : s.terms_) t.weight *= c;
  return s;
}

bool Symbol::boundaryRegular() const noexcept {
  for (const auto& t : terms_) {
    if (const auto* l = std::get_if<LogKernel>(&t.family); l && l->a.norm() >= 1.0 - 1e-15) return false;
  }
  return true;
}

std::optional<CVec> Symbol::peak() const {
  std::optional<CVec> best;
  double bestNorm = 0.5;
  for (const auto& t : terms_) {
    if (t.weight == 0.0) continue;
    const CVec* a = nullptr;
    if (const auto* k = std::get_if<Kernel>(&t.family)) a = &k->a;
    if (const auto* l = std::get_if<LogKernel>(&t.family)) a = &l->a;
    if (a && a->norm() >= bestNorm) {
      bestNorm = a->norm();
      best = *a;
    }
  }
  return best;
}

bool Symbol::isConstant() const noexcept {
  for (const auto& t : terms_) {
    if (t.weight == 0.0) continue;
    const bool constantTerm = std::visit(
        Overloaded{[](const PowerSeries& ps) {
                     for (const auto& [m, c] : ps.coeffs) {
                       if (m.order() != 0 && c != 0.0) return false;
                     }
                     return true;
                   },
                   [](const Kernel& k) { return k.a.normSq() == 0.0; },
                   [](const LogKernel&) { return false; },
                   [](const Lacunary& l) {
                     for (double c : l.coeffs) {
                       if (c != 0.0) return false;
                     }
                     return true;
                   }},
        t.family);
    if (!constantTerm) return false;
  }
  return true;
}

std::vector<cplx> Symbol::taylorCoefficients(int maxDegree) const {
  if (n_ != 1) throw DomainError("Taylor coefficients are provided for n = 1 only");
  if (maxDegree < 0) throw ParameterError("maxDegree must be nonnegative");
  std::vector<cplx> c(static_cast<std::size_t>(maxDegree) + 1, 0.0);
  for (const auto& t : terms_) {
    std::visit(Overloaded{[&](const PowerSeries& ps) {
                            for (const auto& [m, v] : ps.coeffs) {
                              if (m.e[0] <= maxDegree) c[static_cast<std::size_t>(m.e[0])] += t.weight * v;
                            }
                          },
                          [&](const Kernel& k) {
                            // (1 - z conj a)^{-s} = sum (s)_m / m! conj(a)^m z^m
                            cplx term = 1.0;
                            const cplx ab = std::conj(k.a[0]);
                            for (int m = 0; m <= maxDegree; ++m) {
                              c[static_cast<std::size_t>(m)] += t.weight * term;
                              term *= (k.s + m) / (m + 1.0) * ab;
                            }
                          },
                          [&](const LogKernel& l) {
                            const cplx ab = std::conj(l.a[0]);
                            cplx pw = ab;
                            for (int m = 1; m <= maxDegree; ++m) {
                              c[static_cast<std::size_t>(m)] += t.weight * pw / static_cast<double>(m);
                              pw *= ab;
                            }
                          },
                          [&](const Lacunary& l) {
                            long long deg = 1;
                            for (std::size_t k = 0; k < l.coeffs.size() && deg <= maxDegree; ++k) {
                              c[static_cast<std::size_t>(deg)] += t.weight * l.coeffs[k];
                              deg *= l.base;
                            }
                          }},
               t.family);
  }
  return c;
}

std::optional<std::vector<cplx>> Symbol::exactCoefficients() const {
  if (n_ != 1) return std::nullopt;
  int maxDeg = 0;
  for (const auto& t : terms_) {
    if (const auto* ps = std::get_if<PowerSeries>(&t.family)) {
      for (const auto& [m, c] : ps->coeffs) maxDeg = std::max(maxDeg, m.e[0]);
    } else if (const auto* l = std::get_if<Lacunary>(&t.family)) {
      double deg = std::pow(static_cast<double>(l->base), static_cast<double>(l->coeffs.size()) - 1.0);
      if (deg > 4096) return std::nullopt;
      maxDeg = std::max(maxDeg, static_cast<int>(deg));
    } else {
      return std::nullopt;
    }
  }
  return taylorCoefficients(maxDeg);
}

std::string Symbol::describe() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    if (t.weight != cplx(1.0)) os << "(" << formatComplex(t.weight) << ")*";
    std::visit(Overloaded{[&](const PowerSeries& ps) {
                            os << "poly[";
                            bool f = true;
                            for (const auto& [m, c] : ps.coeffs) {
                              if (!f) os << ",";
                              f = false;
                              os << formatComplex(c) << "z^" << m.e[0];
                              if (m.n == 2) os << "w^" << m.e[1];
                            }
                            os << "]";
                          },
                          [&](const Kernel& k) { os << "kernel(a=" << formatVec(k.a) << ",s=" << k.s << ")"; },
                          [&](const LogKernel& l) { os << "log(a=" << formatVec(l.a) << ")"; },
                          [&](const Lacunary& l) {
                            os << "lacunary(base=" << l.base << ",c=";
                            for (std::size_t k = 0; k < l.coeffs.size(); ++k) os << (k ? "," : "") << l.coeffs[k];
                            os << ")";
                          }},
               t.family);
  }
  if (first) os << "0";
  return os.str();
}

Evaluable asEvaluable(const Symbol& b) {
  Evaluable e;
  e.dim = b.dim();
  e.value = [b](const CVec& z) { return b(z); };
  e.boundaryRegular = b.boundaryRegular();
  e.peak = b.peak();
  e.coefficients = b.exactCoefficients();
  return e;
}

Evaluable radialDerivative(const Symbol& b) {
  Evaluable e;
  e.dim = b.dim();
  e.value = [b](const CVec& z) { return b.radial(z); };
  e.boundaryRegular = b.boundaryRegular();
  e.peak = b.peak();
  if (auto c = b.exactCoefficients()) {
    for (std::size_t m = 0; m < c->size(); ++m) (*c)[m] *= static_cast<double>(m);
    e.coefficients = c;
  }
  return e;
}

cplx contourRadialDerivative(const std::function<cplx(const CVec&)>& g, const CVec& z, int nodes) {
  const double r = z.norm();
  if (!(r < 1.0)) throw DomainError("point outside the open ball");
  if (r == 0.0) return 0.0;
  const double rho = std::min(0.5, 0.5 * (1.0 - r) / r);
  // g'(1) along lambda -> g(lambda z): (1/(N rho)) sum g((1 + rho e^{it}) z) e^{-it}.
  cplx sum = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const cplx e = std::polar(1.0, 2.0 * std::numbers::pi * k / nodes);
    sum += g(z * (1.0 + rho * e)) / e;
  }
  return sum / (static_cast<double>(nodes) * rho);
}

Symbol necessityTestFunction(const BallPoint& z, double s, double p, double alpha) {
  const int n = z.dim();
  const double threshold = (n + 1.0 + alpha) / p;
  if (!(s > threshold)) {
    std::ostringstream os;
    os << "test function requires s > (n+1+alpha)/p = " << threshold;
    throw ParameterError(os.str());
  }
  const double d = 1.0 - z.coords().normSq();
  return Symbol::kernel(z, s) * cplx(std::pow(d, s - threshold));
}

Symbol atomSynthesis(const std::vector<BallPoint>& points, const std::vector<cplx>& lambda, double s, double p,
                     double alpha) {
  if (points.size() != lambda.size()) throw ParameterError("lambda and lattice lengths differ");
  const int n = points.empty() ? 1 : points.front().dim();
  const double threshold = n * std::max(1.0, 1.0 / p) - n / p;
  if (!(s > threshold)) {
    std::ostringstream os;
    os << "atomic synthesis requires s > n max(1, 1/p) - n/p = " << threshold;
    throw ParameterError(os.str());
  }
  const double expo = s + (n + 1.0 + alpha) / p;
  Symbol f(n);
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (lambda[k] == 0.0) continue;
    const double d = 1.0 - points[k].coords().normSq();
    f = f + Symbol::kernel(points[k], expo) * (lambda[k] * std::pow(d, s));
  }
  return f;
}

cplx parseComplex(const std::string& raw) {
  std::string t;
  for (char ch : raw) {
    if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
  }
  if (t.empty()) throw ParameterError("empty complex literal");
  auto toDouble = [&](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ParameterError("malformed complex literal '" + raw + "'");
    }
    if (used != s.size()) throw ParameterError("malformed complex literal '" + raw + "'");
    return v;
  };
  if (t.back() != 'i') return {toDouble(t), 0.0};
  t.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = t.size(); k-- > 1;) {
    if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) return {0.0, toDouble(t)};
  const std::string re = t.substr(0, split);
  const std::string im = t.substr(split);
  if (re.empty()) throw ParameterError("malformed complex literal '" + raw + "'");
  return {toDouble(re), toDouble(im)};
}

namespace {

std::vector<std::string> splitCommas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

CVec embed(cplx a, int n) { return n == 1 ? CVec(a) : CVec(a, 0.0); }

double realOf(const std::string& text) {
  const cplx c = parseComplex(text);
  if (c.imag() != 0.0) throw ParameterError("expected a real number, got '" + text + "'");
  return c.real();
}

}  // namespace

Symbol parseSymbol(const std::string& spec, int n) {
  if (n < 1 || n > kMaxDimension) throw ParameterError("dimension must be 1 or 2");
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ParameterError("symbol spec needs a 'family:' prefix: " + spec);
  const std::string family = spec.substr(0, colon);
  const std::string body = spec.substr(colon + 1);
  const auto parts = splitCommas(body);
  if (family == "poly") {
    std::map<MultiIndex, cplx> coeffs;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      const cplx c = parseComplex(parts[k]);
      if (c == 0.0) continue;
      const int m = static_cast<int>(k);
      coeffs[n == 1 ? MultiIndex(m) : MultiIndex(m, 0)] = c;
    }
    return Symbol::powerSeries(n, coeffs);
  }
  std::map<std::string, std::string> kv;
  std::vector<double> lacCoeffs;
  bool inCoeffs = false;
  for (const auto& part : parts) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) {
      if (!inCoeffs) throw ParameterError("expected key=value in symbol spec: " + part);
      lacCoeffs.push_back(realOf(part));
      continue;
    }
    const std::string key = part.substr(0, eq);
    const std::string val = part.substr(eq + 1);
    inCoeffs = (family == "lacunary" && key == "c");
    if (inCoeffs) {
      lacCoeffs.push_back(realOf(val));
    } else {
      const bool known = (family == "kernel" && (key == "a" || key == "s")) || (family == "log" && key == "a") ||
                         (family == "lacunary" && key == "base");
      if (!known && (family == "kernel" || family == "log" || family == "lacunary")) {
        throw ParameterError("unknown key '" + key + "' in " + family + " spec");
      }
      if (!kv.emplace(key, val).second) throw ParameterError("duplicate key '" + key + "' in symbol spec");
    }
  }
  auto need = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParameterError("symbol spec '" + spec + "' is missing " + key + "=");
    return it->second;
  };
  try {
    if (family == "kernel") {
      const cplx a = parseComplex(need("a"));
      const double s = realOf(need("s"));
      return Symbol::kernel(BallPoint(embed(a, n)), s);
    }
    if (family == "log") {
      return Symbol::logKernel(embed(parseComplex(need("a")), n));
    }
    if (family == "lacunary") {
      const double base = realOf(need("base"));
      if (base != std::floor(base)) throw ParameterError("lacunary base must be an integer");
      if (lacCoeffs.empty()) throw ParameterError("lacunary spec needs c=<c0,c1,...>");
      return Symbol::lacunary(lacCoeffs, static_cast<int>(base), n);
    }
  } catch (const DomainError& e) {
    throw ParameterError(e.what());
  }
  throw ParameterError("unknown symbol family '" + family + "'");
}

}  // namespace volterra
