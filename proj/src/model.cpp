#include "obm/model.hpp"

#include <cmath>
#include <string>

#include "obm/error.hpp"

namespace obm {

void ModelParams::validate() const {
  for (double v : {sigma_plus, sigma_minus, b_plus, b_minus, xi0}) {
    if (!std::isfinite(v)) throw Error(Errc::InvalidParams, "all parameters must be finite");
  }
  if (!(sigma_plus > 0.0) || !(sigma_minus > 0.0)) {
    throw Error(Errc::InvalidParams, "sigma_plus and sigma_minus must be > 0");
  }
}

ModelParams ModelParams::mirrored() const noexcept {
  return {sigma_minus, sigma_plus, -b_minus, -b_plus, -xi0};
}

std::string_view regime_tag(Regime r) noexcept {
  switch (r) {
    case Regime::E: return "E";
    case Regime::N0: return "N0";
    case Regime::N1: return "N1";
    case Regime::N1_mirror: return "N1_mirror";
    case Regime::T0: return "T0";
    case Regime::T0_mirror: return "T0_mirror";
    case Regime::T1: return "T1";
  }
  return "?";
}

Regime parse_regime(std::string_view tag) {
  for (Regime r : {Regime::E, Regime::N0, Regime::N1, Regime::N1_mirror, Regime::T0,
                   Regime::T0_mirror, Regime::T1}) {
    if (regime_tag(r) == tag) return r;
  }
  throw Error(Errc::ParseError, "unknown regime tag '" + std::string(tag) + "'");
}

Regime classify_regime(const ModelParams& p) {
  const double bp = p.b_plus;
  const double bm = p.b_minus;
  if (bp > 0.0) return bm < 0.0 ? Regime::T1 : Regime::T0;
  if (bm < 0.0) return Regime::T0_mirror;  // b₊ ≤ 0
  // b₊ ≤ 0 and b₋ ≥ 0 from here on.
  if (bp == 0.0) return bm == 0.0 ? Regime::N0 : Regime::N1;
  return bm == 0.0 ? Regime::N1_mirror : Regime::E;
}

namespace {

// ∫₀ˣ exp(−2by/σ²) dy; the b == 0 test is exact on purpose, callers pass
// literal zeros for the driftless half-lines.
double half_line_scale(double b, double sigma, double x) {
  if (b == 0.0) return x;
  const double s2 = sigma * sigma;
  return -(s2 / (2.0 * b)) * std::expm1(-2.0 * b * x / s2);
}

double h_exponent(const ModelParams& p, double x) {
  const double s = p.sigma(x);
  return 2.0 * p.drift(x) * x / (s * s);
}

}  // namespace

double scale_function(const ModelParams& p, double x) {
  return x >= 0.0 ? half_line_scale(p.b_plus, p.sigma_plus, x)
                  : half_line_scale(p.b_minus, p.sigma_minus, x);
}

double speed_density(const ModelParams& p, double x) {
  const double s = p.sigma(x);
  return 2.0 / (s * s) * std::exp(h_exponent(p, x));
}

double invariant_density(const ModelParams& p, double x) {
  if (classify_regime(p) != Regime::E) {
    throw Error(Errc::NotErgodic, "invariant density requires b_plus < 0 < b_minus");
  }
  // M(ℝ₊) = 1/|b₊|, M(ℝ₋) = 1/b₋.
  const double ap = std::abs(p.b_plus);
  const double am = p.b_minus;
  const double total_mass = 1.0 / ap + 1.0 / am;
  return speed_density(p, x) / total_mass;
}

FundamentalPair::FundamentalPair(const ModelParams& p, double lambda) : p_(p), lambda_(lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(Errc::InvalidLambda, "lambda must be a finite positive number");
  }
  const double sp2 = p.sigma_plus * p.sigma_plus;
  const double sm2 = p.sigma_minus * p.sigma_minus;
  const double bp = p.b_plus;
  const double bm = p.b_minus;
  root_plus_ = std::sqrt(bp * bp + 2.0 * lambda * sp2);
  root_minus_ = std::sqrt(bm * bm + 2.0 * lambda * sm2);
  const double dp = 2.0 * sm2 * root_plus_;
  const double dm = 2.0 * sp2 * root_minus_;
  kappa_plus_ = (-bm * sp2 + bp * sm2 + sm2 * root_plus_ + sp2 * root_minus_) / dp;
  delta_plus_ = (bm * sp2 - bp * sm2 + sm2 * root_plus_ - sp2 * root_minus_) / dp;
  kappa_minus_ = (-bm * sp2 + bp * sm2 - sm2 * root_plus_ + sp2 * root_minus_) / dm;
  delta_minus_ = (bm * sp2 - bp * sm2 + sm2 * root_plus_ + sp2 * root_minus_) / dm;
}

// Exponential rates of the constant-coefficient solutions on each half-line.
namespace {
struct Rates {
  double up;    // (−b + √(b² + 2σ²λ)) / σ²  > 0
  double down;  // (−b − √(b² + 2σ²λ)) / σ²  < 0
};
Rates rates(double b, double sigma, double root) {
  const double s2 = sigma * sigma;
  return {(-b + root) / s2, (-b - root) / s2};
}
}  // namespace

double FundamentalPair::psi(double x) const noexcept {
  if (x < 0.0) return std::exp(x * rates(p_.b_minus, p_.sigma_minus, root_minus_).up);
  const Rates r = rates(p_.b_plus, p_.sigma_plus, root_plus_);
  return kappa_plus_ * std::exp(x * r.up) + delta_plus_ * std::exp(x * r.down);
}

double FundamentalPair::phi(double x) const noexcept {
  if (x >= 0.0) return std::exp(x * rates(p_.b_plus, p_.sigma_plus, root_plus_).down);
  const Rates r = rates(p_.b_minus, p_.sigma_minus, root_minus_);
  return kappa_minus_ * std::exp(x * r.down) + delta_minus_ * std::exp(x * r.up);
}

double FundamentalPair::psi_prime(double x) const noexcept {
  if (x < 0.0) {
    const double k = rates(p_.b_minus, p_.sigma_minus, root_minus_).up;
    return k * std::exp(x * k);
  }
  const Rates r = rates(p_.b_plus, p_.sigma_plus, root_plus_);
  return kappa_plus_ * r.up * std::exp(x * r.up) + delta_plus_ * r.down * std::exp(x * r.down);
}

double FundamentalPair::phi_prime(double x) const noexcept {
  if (x >= 0.0) {
    const double k = rates(p_.b_plus, p_.sigma_plus, root_plus_).down;
    return k * std::exp(x * k);
  }
  const Rates r = rates(p_.b_minus, p_.sigma_minus, root_minus_);
  return kappa_minus_ * r.down * std::exp(x * r.down) + delta_minus_ * r.up * std::exp(x * r.up);
}

double FundamentalPair::psi_hat() const noexcept {
  return (-p_.b_minus + root_minus_) / (2.0 * p_.sigma_minus * p_.sigma_minus);
}

double FundamentalPair::phi_hat() const noexcept {
  return (p_.b_plus + root_plus_) / (2.0 * p_.sigma_plus * p_.sigma_plus);
}

double FundamentalPair::wronskian() const noexcept {
  // S'(0) = 1 and ψ(0) = φ(0) = 1, so W = ψ'(0) − φ'(0) = 2(ψ̂ + φ̂).
  return 2.0 * (psi_hat() + phi_hat());
}

FundamentalPair fundamental_pair(const ModelParams& p, double lambda) {
  p.validate();
  return FundamentalPair(p, lambda);
}

}  // namespace obm
