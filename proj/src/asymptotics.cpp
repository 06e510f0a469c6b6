#include "obm/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "obm/error.hpp"
#include "obm/quadrature.hpp"
#include "obm/rng.hpp"
#include "tabulated_cdf.hpp"

namespace obm {

namespace {

constexpr double kPi = std::numbers::pi;

double std_normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }
double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

void require_ergodic(const ModelParams& p) {
  if (classify_regime(p) != Regime::E) {
    throw Error(Errc::NotErgodic, "requires b_plus < 0 < b_minus");
  }
}

}  // namespace

std::pair<double, double> ergodic_occupation_limit(const ModelParams& p) {
  require_ergodic(p);
  const double ap = std::abs(p.b_plus);
  const double am = std::abs(p.b_minus);
  return {am / (am + ap), ap / (am + ap)};
}

double ergodic_limit_sd(const ModelParams& p, Side side) {
  require_ergodic(p);
  const double ap = std::abs(p.b_plus);
  const double am = std::abs(p.b_minus);
  if (side == Side::Plus) return p.sigma_plus * std::sqrt((am + ap) / am);
  return p.sigma_minus * std::sqrt((am + ap) / ap);
}

double arcsine_density(double ratio, double u) {
  if (!(ratio > 0.0)) throw Error(Errc::DomainError, "ratio must be > 0");
  if (!(u > 0.0 && u < 1.0)) throw Error(Errc::DomainError, "u must be in (0, 1)");
  return ratio / (kPi * std::sqrt(u * (1.0 - u)) * (1.0 - (1.0 - ratio * ratio) * u));
}

double arcsine_cdf(double ratio, double u) {
  if (!(ratio > 0.0)) throw Error(Errc::DomainError, "ratio must be > 0");
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return 2.0 / kPi * std::atan(ratio * std::sqrt(u / (1.0 - u)));
}

// ---------------------------------------------------------------------------
// Driftless case.

double n0_joint_density(const ModelParams& p, double rho, double lam, double tau) {
  if (!(lam > 0.0)) throw Error(Errc::DomainError, "local time must be > 0");
  if (!(tau > 0.0 && tau < 1.0)) throw Error(Errc::DomainError, "tau must be in (0, 1)");
  const double sp = p.sigma_plus;
  const double sm = p.sigma_minus;
  const double half = 0.5 * lam;
  const double pow_t = std::pow((1.0 - tau) * tau, 1.5);
  if (rho >= 0.0) {
    const double m = half + rho;
    return m * half / (2.0 * kPi * sm * sp * sp * sp * pow_t) *
           std::exp(-half * half / (2.0 * sm * sm * (1.0 - tau)) - m * m / (2.0 * sp * sp * tau));
  }
  const double m = half - rho;
  return m * half / (2.0 * kPi * sp * sm * sm * sm * pow_t) *
         std::exp(-half * half / (2.0 * sp * sp * tau) - m * m / (2.0 * sm * sm * (1.0 - tau)));
}

double n0_beta_density(const ModelParams& p, double a, double b) {
  auto integrand = [&](double delta) {
    if (!(delta > 0.0 && delta < 1.0)) return 0.0;
    const double rho = a * delta + b * (1.0 - delta);
    const double lam = std::abs(rho) - a * delta + b * (1.0 - delta);
    if (!(lam > 0.0)) return 0.0;
    return 2.0 * delta * (1.0 - delta) * n0_joint_density(p, rho, lam, delta);
  };
  return quad::integrate_unit_arcsine(integrand, 1e-9);
}

namespace {

// Given Q₁⁺ = τ, the path ends positive with probability τ. On either branch
// (ℓ, m) = (L/2, L/2 + |ξ₁|) has density ∝ ℓ e^{−ℓ²/2s_ℓ} · m e^{−m²/2s_m} on
// m ≥ ℓ ≥ 0, so ℓ is Rayleigh with variance parameter v = s_ℓ s_m/(s_ℓ + s_m)
// and m | ℓ is Rayleigh(s_m) conditioned on m ≥ ℓ. On the positive branch
// s_ℓ = σ₋²(1−τ), s_m = σ₊²τ; on the negative branch the roles swap.
struct Branch {
  double v;
  double s_m;
};

struct Occupation {
  double tau;
  Branch pos;
  Branch neg;
};

Occupation occupation_at(const ModelParams& p, double tau) {
  const double a = p.sigma_plus * p.sigma_plus * tau;
  const double b = p.sigma_minus * p.sigma_minus * (1.0 - tau);
  const double v = a * b / (a + b);
  return {tau, {v, a}, {v, b}};
}

double rayleigh_pdf(double l, double v) { return l > 0.0 ? l / v * std::exp(-l * l / (2.0 * v)) : 0.0; }
double rayleigh_sf(double l, double v) { return l > 0.0 ? std::exp(-l * l / (2.0 * v)) : 1.0; }

// ∫_{lo}^{∞} f over a Rayleigh(v) weight, truncated where the weight is < e^{−70}.
double over_rayleigh(const std::function<double(double)>& f, double lo, double v) {
  lo = std::max(lo, 0.0);
  const double width = 12.0 * std::sqrt(v);
  if (lo >= width) return 0.0;
  const double hi = lo + width;
  return quad::integrate(f, lo, hi, 1e-10);
}

// Density at y of m − 2ℓ.
double excess_density(const Branch& br, double y) {
  auto f = [&](double l) {
    const double m = y + 2.0 * l;
    if (m < l) return 0.0;
    return rayleigh_pdf(l, br.v) * m / br.s_m * std::exp(-(m * m - l * l) / (2.0 * br.s_m));
  };
  return over_rayleigh(f, -y, br.v);
}

// Density at y of 2ℓ − m.
double deficit_density(const Branch& br, double y) {
  auto f = [&](double l) {
    const double m = 2.0 * l - y;
    if (m < l) return 0.0;
    return rayleigh_pdf(l, br.v) * m / br.s_m * std::exp(-(m * m - l * l) / (2.0 * br.s_m));
  };
  return over_rayleigh(f, y, br.v);
}

// P(m − 2ℓ ≤ y).
double excess_cdf(const Branch& br, double y) {
  auto f = [&](double l) {
    const double m = y + 2.0 * l;
    if (m < l) return 0.0;
    return rayleigh_pdf(l, br.v) * -std::expm1(-(m * m - l * l) / (2.0 * br.s_m));
  };
  return over_rayleigh(f, -y, br.v);
}

// P(2ℓ − m ≤ y) = P(ℓ ≤ y) + P(ℓ > y, m ≥ 2ℓ − y).
double deficit_cdf(const Branch& br, double y) {
  auto f = [&](double l) {
    const double m = 2.0 * l - y;
    return rayleigh_pdf(l, br.v) * std::exp(-(m * m - l * l) / (2.0 * br.s_m));
  };
  return (1.0 - rayleigh_sf(y, br.v)) + over_rayleigh(f, y, br.v);
}

// ∫₀¹ g(τ) p_Λ(τ) dτ with τ = sin²θ. For large |x| the mass of β at x sits
// at τ or 1 − τ of order (σ/x)², so the θ range is cut there.
double over_occupation(const ModelParams& p, std::initializer_list<double> xs,
                       const std::function<double(const Occupation&)>& g,
                       double tolerance = 1e-9) {
  const double r = p.sigma_plus / p.sigma_minus;
  auto h = [&](double theta) {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double tau = s * s;
    if (!(tau > 0.0 && tau < 1.0)) return 0.0;
    const double weight = 2.0 / kPi * r / (c * c + r * r * s * s);
    return weight * g(occupation_at(p, tau));
  };
  std::vector<double> cuts{0.0, kPi / 2.0};
  const double sigma = std::max(p.sigma_plus, p.sigma_minus);
  for (double x : xs) {
    if (x == 0.0) continue;
    const double edge = (sigma / x) * (sigma / x);
    for (double t : {edge, 100.0 * edge}) {
      if (t < 0.01) {
        const double theta = std::asin(std::sqrt(t));
        cuts.push_back(theta);
        cuts.push_back(kPi / 2.0 - theta);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  return quad::integrate_pieces(h, cuts, tolerance);
}

}  // namespace

double n0_beta_marginal_density(const ModelParams& p, Side side, double x) {
  if (side == Side::Plus) {
    return over_occupation(p, {x}, [&](const Occupation& o) {
      const double t = o.tau;
      double d = t * t * excess_density(o.pos, x * t);
      if (x < 0.0) d += (1.0 - t) * t * rayleigh_pdf(-x * t, o.neg.v);
      return d;
    });
  }
  return over_occupation(p, {x}, [&](const Occupation& o) {
    const double t = o.tau;
    const double u = 1.0 - t;
    double d = u * u * deficit_density(o.neg, x * u);
    if (x > 0.0) d += t * u * rayleigh_pdf(x * u, o.pos.v);
    return d;
  });
}

double n0_beta_marginal_cdf(const ModelParams& p, Side side, double x) {
  double v = 0.0;
  if (side == Side::Plus) {
    v = over_occupation(p, {x}, [&](const Occupation& o) {
      const double t = o.tau;
      return t * excess_cdf(o.pos, x * t) + (1.0 - t) * rayleigh_sf(-x * t, o.neg.v);
    });
  } else {
    v = over_occupation(p, {x}, [&](const Occupation& o) {
      const double t = o.tau;
      const double u = 1.0 - t;
      return t * (1.0 - rayleigh_sf(x * u, o.pos.v)) + u * deficit_cdf(o.neg, x * u);
    });
  }
  return std::clamp(v, 0.0, 1.0);
}

double n0_beta_joint_cdf(const ModelParams& p, double a, double b) {
  const double v = over_occupation(p, {a, b}, [&](const Occupation& o) {
    const double t = o.tau;
    const double u = 1.0 - t;
    // Positive branch: β₊ = (m − 2ℓ)/τ, β₋ = ℓ/(1−τ).
    double pos = 0.0;
    const double l_max = b * u;
    if (l_max > 0.0) {
      auto f = [&](double l) {
        const double m_max = a * t + 2.0 * l;
        if (m_max < l) return 0.0;
        return rayleigh_pdf(l, o.pos.v) * -std::expm1(-(m_max * m_max - l * l) / (2.0 * o.pos.s_m));
      };
      pos = quad::integrate(f, 0.0, std::min(l_max, 12.0 * std::sqrt(o.pos.v)), 1e-10);
    }
    // Negative branch: β₊ = −ℓ/τ, β₋ = (2ℓ − m)/(1−τ).
    auto g = [&](double l) {
      const double m_min = std::max(l, 2.0 * l - b * u);
      return rayleigh_pdf(l, o.neg.v) * std::exp(-(m_min * m_min - l * l) / (2.0 * o.neg.s_m));
    };
    const double neg = over_rayleigh(g, -a * t, o.neg.v);
    return t * pos + u * neg;
  });
  return std::clamp(v, 0.0, 1.0);
}

// ---------------------------------------------------------------------------

namespace {

// Integral over u = |𝒩'| in [0, 12], split where the conditional Gaussian
// with sd c/√u changes at x, near u = (c/x)².
double over_mixing_scale(const std::function<double(double)>& f, double c, double x) {
  const double knee = x == 0.0 ? 12.0 : std::min(12.0, (c / x) * (c / x));
  double total = 0.0;
  double lo = 0.0;
  for (double hi : {knee, 10.0 * knee, 100.0 * knee, 12.0}) {
    hi = std::min(hi, 12.0);
    if (hi > lo) total += quad::integrate(f, lo, hi, 1e-11);
    lo = hi;
  }
  return total;
}

}  // namespace

double n1_minus_density(double c, double x) {
  if (!(c > 0.0)) throw Error(Errc::DomainError, "scale must be > 0");
  // Given |𝒩'| = u the variable is centred Gaussian with sd c/√u.
  auto f = [&](double u) {
    const double su = std::sqrt(u);
    return su / c * std_normal_pdf(x * su / c) * 2.0 * std_normal_pdf(u);
  };
  return over_mixing_scale(f, c, x);
}

double n1_minus_cdf(double c, double x) {
  if (!(c > 0.0)) throw Error(Errc::DomainError, "scale must be > 0");
  auto f = [&](double u) { return std_normal_cdf(x * std::sqrt(u) / c) * 2.0 * std_normal_pdf(u); };
  return std::clamp(over_mixing_scale(f, c, x), 0.0, 1.0);
}

double transient_ratio_density(const ModelParams& p, double r) {
  if (!(p.b_plus > 0.0)) {
    throw Error(Errc::UnsupportedRegime, "ratio law needs b_plus > 0; mirror the parameters");
  }
  if (!(r > 0.0)) return 0.0;
  const double sp2 = p.sigma_plus * p.sigma_plus;
  const double sm2 = p.sigma_minus * p.sigma_minus;
  const double neg_bm = p.b_minus < 0.0 ? -p.b_minus : 0.0;
  const double q = 2.0 * r * p.b_plus / sp2 + (r - p.b_minus) * (r - p.b_minus) / (2.0 * sm2);
  return r / (p.sigma_minus * std::numbers::sqrt2) * (p.b_plus / sp2 + neg_bm / sm2) *
         std::pow(q, -1.5);
}

T0LastPassageLaws::T0LastPassageLaws(const ModelParams& p) : p_(p) {
  if (!(p.b_plus > 0.0) || !(p.b_minus >= 0.0)) {
    throw Error(Errc::UnsupportedRegime, "last-passage laws need b_plus > 0 and b_minus >= 0");
  }
}

double T0LastPassageLaws::local_time_density(double t) const {
  if (t < 0.0) return 0.0;
  const double rate = p_.b_plus / (p_.sigma_plus * p_.sigma_plus);
  return rate * std::exp(-rate * t);
}

double T0LastPassageLaws::occupation_given_local_time(double s, double t) const {
  if (!(s > 0.0) || !(t > 0.0)) return 0.0;
  const double sm = p_.sigma_minus;
  const double sm2 = sm * sm;
  const double bm = p_.b_minus;
  return t / (sm * 2.0 * std::sqrt(2.0 * kPi) * std::pow(s, 1.5)) *
         std::exp(t * bm / (2.0 * sm2) - bm * bm * s / (2.0 * sm2) - t * t / (8.0 * sm2 * s));
}

double T0LastPassageLaws::joint_density(double s, double t) const {
  if (!(s > 0.0) || !(t > 0.0)) return 0.0;
  const double sp2 = p_.sigma_plus * p_.sigma_plus;
  const double sm = p_.sigma_minus;
  const double sm2 = sm * sm;
  const double bp = p_.b_plus;
  const double bm = p_.b_minus;
  return t * bp / (sp2 * sm * 2.0 * std::sqrt(2.0 * kPi) * std::pow(s, 1.5)) *
         std::exp((bm / (2.0 * sm2) - bp / sp2) * t - bm * bm * s / (2.0 * sm2) -
                  t * t / (8.0 * sm2 * s));
}

double t1_divergence_probability(const ModelParams& p) {
  if (!(p.b_plus > 0.0 && p.b_minus < 0.0)) {
    throw Error(Errc::UnsupportedRegime, "divergence probability needs b_plus > 0 > b_minus");
  }
  const double up = p.sigma_minus * p.sigma_minus * p.b_plus;
  const double down = p.sigma_plus * p.sigma_plus * std::abs(p.b_minus);
  return up / (up + down);
}

// ---------------------------------------------------------------------------
// LimitLaw

namespace {

std::vector<double> log_nodes(double scale, double decades, std::size_t count) {
  std::vector<double> nodes(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double e = -decades + 2.0 * decades * static_cast<double>(k) / static_cast<double>(count - 1);
    nodes[k] = scale * std::pow(10.0, e);
  }
  return nodes;
}

double ratio_scale(const ModelParams& p) {
  const double s = 4.0 * p.b_plus * p.sigma_minus * p.sigma_minus / (p.sigma_plus * p.sigma_plus);
  return std::max(std::abs(p.b_minus), s);
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

LimitLaw::LimitLaw(LawKind kind) : kind_(std::move(kind)) {
  if (const auto* r = std::get_if<RatioLaw>(&kind_)) {
    const ModelParams p = r->params;
    p.validate();
    if (!(p.b_plus > 0.0)) {
      throw Error(Errc::UnsupportedRegime, "ratio law needs b_plus > 0; mirror the parameters");
    }
    table_ = std::make_shared<TabulatedCdf>(
        [p](double x) { return transient_ratio_density(p, x); }, 0.0,
        std::numeric_limits<double>::infinity(), log_nodes(ratio_scale(p), 8.0, 401));
  }
  if (const auto* n = std::get_if<NormalLaw>(&kind_); n && !(n->sd > 0.0)) {
    throw Error(Errc::DomainError, "normal law needs sd > 0");
  }
}

std::string LimitLaw::name() const {
  return std::visit(overloaded{
                        [](const NormalLaw&) { return std::string("normal"); },
                        [](const HalfNormalLaw&) { return std::string("half-normal"); },
                        [](const ArcsineLaw&) { return std::string("arcsine"); },
                        [](const RatioLaw&) { return std::string("ratio"); },
                        [](const N0BetaLaw& l) {
                          return std::string(l.side == Side::Plus ? "n0-beta-plus" : "n0-beta-minus");
                        },
                        [](const N1MinusLaw&) { return std::string("n1-minus"); },
                    },
                    kind_);
}

double LimitLaw::density(double x) const {
  return std::visit(
      overloaded{
          [&](const NormalLaw& l) { return std_normal_pdf((x - l.mean) / l.sd) / l.sd; },
          [&](const HalfNormalLaw& l) {
            return x < 0.0 ? 0.0 : 2.0 * std_normal_pdf(x / l.scale) / l.scale;
          },
          [&](const ArcsineLaw& l) {
            return (x > 0.0 && x < 1.0) ? arcsine_density(l.ratio, x) : 0.0;
          },
          [&](const RatioLaw& l) { return transient_ratio_density(l.params, x); },
          [&](const N0BetaLaw& l) {
            const double s = std::sqrt(l.time_scale);
            return s * n0_beta_marginal_density(l.params, l.side, x * s);
          },
          [&](const N1MinusLaw& l) { return n1_minus_density(l.c, x); },
      },
      kind_);
}

double LimitLaw::cdf(double x) const {
  return std::visit(
      overloaded{
          [&](const NormalLaw& l) { return std_normal_cdf((x - l.mean) / l.sd); },
          [&](const HalfNormalLaw& l) {
            return x <= 0.0 ? 0.0 : std::erf(x / (l.scale * std::numbers::sqrt2));
          },
          [&](const ArcsineLaw& l) { return arcsine_cdf(l.ratio, x); },
          [&](const RatioLaw&) { return table_->cdf(x); },
          [&](const N0BetaLaw& l) {
            return n0_beta_marginal_cdf(l.params, l.side, x * std::sqrt(l.time_scale));
          },
          [&](const N1MinusLaw& l) { return n1_minus_cdf(l.c, x); },
      },
      kind_);
}

std::pair<double, double> LimitLaw::support() const {
  static constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(overloaded{
                        [](const HalfNormalLaw&) { return std::pair{0.0, inf}; },
                        [](const ArcsineLaw&) { return std::pair{0.0, 1.0}; },
                        [](const RatioLaw&) { return std::pair{0.0, inf}; },
                        [](const auto&) { return std::pair{-inf, inf}; },
                    },
                    kind_);
}

LimitLaw ergodic_limit_law(const ModelParams& p, Side side) {
  return LimitLaw(NormalLaw{0.0, ergodic_limit_sd(p, side)});
}

LimitLaw n0_scaling_check_law(const ModelParams& p, double T, Side side) {
  p.validate();
  if (classify_regime(p) != Regime::N0 || p.xi0 != 0.0) {
    throw Error(Errc::NotN0, "scaling law needs b_plus = b_minus = 0 and xi0 = 0");
  }
  if (!(T > 0.0)) throw Error(Errc::DomainError, "T must be > 0");
  return LimitLaw(N0BetaLaw{p, side, T});
}

N1Laws n1_limit_laws(const ModelParams& p) {
  p.validate();
  if (classify_regime(p) != Regime::N1) throw Error(Errc::NotN1, "requires b_plus = 0 < b_minus");
  const double c = p.sigma_minus * std::sqrt(p.b_minus / p.sigma_plus);
  return N1Laws{LimitLaw(HalfNormalLaw{p.sigma_plus / p.b_minus}),
                LimitLaw(NormalLaw{0.0, p.sigma_plus}), LimitLaw(N1MinusLaw{c})};
}

LimitLaw transient_ratio_law(const ModelParams& p) { return LimitLaw(RatioLaw{p}); }

std::vector<double> sample_limit_law(const LimitLaw& law, std::size_t n, std::uint64_t seed) {
  std::vector<double> out(n);
  rng::NormalSource src(seed);
  std::visit(
      overloaded{
          [&](const NormalLaw& l) {
            for (auto& x : out) x = l.mean + l.sd * src();
          },
          [&](const HalfNormalLaw& l) {
            for (auto& x : out) x = l.scale * std::abs(src());
          },
          [&](const ArcsineLaw& l) {
            for (auto& x : out) {
              const double w = std::tan(0.5 * kPi * src.uniform()) / l.ratio;
              x = std::isfinite(w) ? w * w / (1.0 + w * w) : 1.0;
            }
          },
          [&](const RatioLaw&) {
            for (auto& x : out) {
              double u = src.uniform();
              if (u >= 1.0) u = std::nextafter(1.0, 0.0);
              x = law.table_->quantile(u);
            }
          },
          [&](const N0BetaLaw& l) {
            const ModelParams& p = l.params;
            const double r = p.sigma_plus / p.sigma_minus;
            const double inv_scale = 1.0 / std::sqrt(l.time_scale);
            for (auto& x : out) {
              double tau = 0.0;
              do {
                const double w = std::tan(0.5 * kPi * src.uniform()) / r;
                tau = w * w / (1.0 + w * w);
              } while (!(tau > 0.0 && tau < 1.0));
              const Occupation o = occupation_at(p, tau);
              const bool ends_positive = src.uniform() <= tau;
              const Branch& br = ends_positive ? o.pos : o.neg;
              const double ell = std::sqrt(-2.0 * br.v * std::log(src.uniform()));
              const double m = std::sqrt(ell * ell - 2.0 * br.s_m * std::log(src.uniform()));
              double beta = 0.0;
              if (l.side == Side::Plus) {
                beta = ends_positive ? (m - 2.0 * ell) / tau : -ell / tau;
              } else {
                beta = ends_positive ? ell / (1.0 - tau) : (2.0 * ell - m) / (1.0 - tau);
              }
              x = beta * inv_scale;
            }
          },
          [&](const N1MinusLaw& l) {
            for (auto& x : out) {
              const double z = src();
              const double zp = src();
              x = l.c * z / std::sqrt(std::abs(zp));
            }
          },
      },
      law.kind());
  return out;
}

// ---------------------------------------------------------------------------

double ks_distance(std::span<const double> sorted_sample,
                   const std::function<double(double)>& cdf) {
  if (sorted_sample.empty()) throw Error(Errc::EmptySample, "KS distance of an empty sample");
  const auto n = static_cast<double>(sorted_sample.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < sorted_sample.size()) {
    const double x = sorted_sample[i];
    std::size_t j = i;
    while (j + 1 < sorted_sample.size() && sorted_sample[j + 1] == x) ++j;
    const double below = static_cast<double>(i) / n;   // F_n(x⁻)
    const double upto = static_cast<double>(j + 1) / n;  // F_n(x)
    const double fx = cdf(x);
    const double fx_left = i == j ? fx : cdf(std::nextafter(x, -std::numeric_limits<double>::infinity()));
    d = std::max({d, std::abs(upto - fx), std::abs(fx_left - below)});
    i = j + 1;
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(Errc::EmptySample, "KS distance of an empty sample");
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

}  // namespace obm
