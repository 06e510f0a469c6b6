#include "obm/estimate.hpp"

#include <cmath>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "obm/error.hpp"

namespace obm {

namespace {
double pos(double x) { return x > 0.0 ? x : 0.0; }
double neg(double x) { return x < 0.0 ? -x : 0.0; }
}  // namespace

std::optional<double> beta_side(const PathStats& s, Side side) {
  if (side == Side::Plus) {
    if (!(s.Q_plus > 0.0)) return std::nullopt;
    return s.R_plus / s.Q_plus;
  }
  if (!(s.Q_minus > 0.0)) return std::nullopt;
  return s.R_minus / s.Q_minus;
}

DriftEstimate beta_discrete(const PathStats& s) {
  DriftEstimate est;
  const auto bp = beta_side(s, Side::Plus);
  if (!bp) throw Error(Errc::NoOccupationPlus, "Q_plus = 0, beta_plus undefined");
  const auto bm = beta_side(s, Side::Minus);
  if (!bm) throw Error(Errc::NoOccupationMinus, "Q_minus = 0, beta_minus undefined");
  est.beta_plus = *bp;
  est.beta_minus = *bm;
  return est;
}

DriftEstimate beta_continuous(double xi0, double xiT, double L, double Q_plus, double Q_minus) {
  if (!(Q_plus > 0.0)) throw Error(Errc::NoOccupationPlus, "Q_plus = 0, beta_plus undefined");
  if (!(Q_minus > 0.0)) throw Error(Errc::NoOccupationMinus, "Q_minus = 0, beta_minus undefined");
  DriftEstimate est;
  est.beta_plus = (pos(xiT) - pos(xi0) - 0.5 * L) / Q_plus;
  est.beta_minus = -(neg(xiT) - neg(xi0) - 0.5 * L) / Q_minus;
  return est;
}

bool has_gaussian_limit(Regime regime, Side side, double xiT) {
  const bool plus = side == Side::Plus;
  switch (regime) {
    case Regime::E: return true;
    case Regime::N0: return false;
    case Regime::N1: return plus;
    case Regime::N1_mirror: return !plus;
    case Regime::T0: return plus;
    case Regime::T0_mirror: return !plus;
    case Regime::T1: return plus ? xiT > 0.0 : xiT < 0.0;
  }
  return false;
}

namespace {
bool is_consistent(Regime regime, Side side, double xiT) {
  switch (regime) {
    case Regime::E:
    case Regime::N0:
    case Regime::N1:
    case Regime::N1_mirror: return true;
    default: return has_gaussian_limit(regime, side, xiT);
  }
}
}  // namespace

void apply_regime(DriftEstimate& est, const PathStats& s, const ModelParams& p, Regime regime) {
  est.regime_assumed = regime;
  est.consistent_plus = is_consistent(regime, Side::Plus, s.xiT);
  est.consistent_minus = is_consistent(regime, Side::Minus, s.xiT);
  est.se_plus.reset();
  est.se_minus.reset();
  if (has_gaussian_limit(regime, Side::Plus, s.xiT) && s.Q_plus > 0.0) {
    est.se_plus = p.sigma_plus / std::sqrt(s.Q_plus);
  }
  if (has_gaussian_limit(regime, Side::Minus, s.xiT) && s.Q_minus > 0.0) {
    est.se_minus = p.sigma_minus / std::sqrt(s.Q_minus);
  }
}

double log_likelihood(const PathStats& s, const ModelParams& p) {
  const double sp2 = p.sigma_plus * p.sigma_plus;
  const double sm2 = p.sigma_minus * p.sigma_minus;
  const double bp = p.b_plus;
  const double bm = p.b_minus;
  return bp / sp2 * s.R_plus + bm / sm2 * s.R_minus - bp * bp * s.Q_plus / (2.0 * sp2) -
         bm * bm * s.Q_minus / (2.0 * sm2);
}

double quasi_log_likelihood(const PathStats& s, double b_plus, double b_minus) {
  return b_plus * s.R_plus + b_minus * s.R_minus - 0.5 * b_plus * b_plus * s.Q_plus -
         0.5 * b_minus * b_minus * s.Q_minus;
}

double chi2_2dof_quantile(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(Errc::DomainError, "alpha must be in (0, 1)");
  return -2.0 * std::log1p(-alpha);
}

double normal_quantile(double probability) {
  if (!(probability > 0.0 && probability < 1.0)) {
    throw Error(Errc::DomainError, "probability must be in (0, 1)");
  }
  return boost::math::quantile(boost::math::normal_distribution<double>(), probability);
}

WilkResult wilk_test(const PathStats& s, const ModelParams& p, double b0_plus, double b0_minus,
                     double alpha) {
  p.validate();
  const DriftEstimate est = beta_discrete(s);
  const double dp = b0_plus - est.beta_plus;
  const double dm = b0_minus - est.beta_minus;
  WilkResult w;
  // −2 log(G(b⁰)/G(β̂)) is exactly quadratic because ∇ log G(β̂) = 0.
  w.statistic = s.Q_plus / (p.sigma_plus * p.sigma_plus) * dp * dp +
                s.Q_minus / (p.sigma_minus * p.sigma_minus) * dm * dm;
  w.alpha = alpha;
  w.quantile = chi2_2dof_quantile(alpha);
  w.reject = w.statistic > w.quantile;
  return w;
}

ConfidenceIntervals confidence_intervals(const DriftEstimate& est, const PathStats& s,
                                         const ModelParams& p, Regime regime, double level) {
  if (!(level > 0.0 && level < 1.0)) throw Error(Errc::DomainError, "level must be in (0, 1)");
  const double z = normal_quantile(0.5 + 0.5 * level);
  ConfidenceIntervals ci;
  if (has_gaussian_limit(regime, Side::Plus, s.xiT) && s.Q_plus > 0.0) {
    const double half = z * p.sigma_plus / std::sqrt(s.Q_plus);
    ci.plus = Interval{est.beta_plus - half, est.beta_plus + half};
  }
  if (has_gaussian_limit(regime, Side::Minus, s.xiT) && s.Q_minus > 0.0) {
    const double half = z * p.sigma_minus / std::sqrt(s.Q_minus);
    ci.minus = Interval{est.beta_minus - half, est.beta_minus + half};
  }
  return ci;
}

Matrix2 fisher_information(const ModelParams& p, Regime regime,
                           std::optional<double> q_minus_scaled) {
  const double sp2 = p.sigma_plus * p.sigma_plus;
  const double sm2 = p.sigma_minus * p.sigma_minus;
  if (regime == Regime::E) {
    const double ap = std::abs(p.b_plus);
    const double am = std::abs(p.b_minus);
    const double c = ap + am;
    return Matrix2{{{sp2 * am / c, 0.0}, {0.0, sm2 * ap / c}}};
  }
  if (regime == Regime::N1) {
    if (!q_minus_scaled || !(*q_minus_scaled >= 0.0)) {
      throw Error(Errc::DomainError, "N1 Fisher information needs q_minus_scaled >= 0");
    }
    return Matrix2{{{sp2, 0.0}, {0.0, sm2 * *q_minus_scaled}}};
  }
  throw Error(Errc::UnsupportedRegime,
              "Fisher information defined for E and N1, got " + std::string(regime_tag(regime)));
}

}  // namespace obm
