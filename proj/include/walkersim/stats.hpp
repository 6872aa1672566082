#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "walkersim/errors.hpp"

namespace walkersim {

inline double mean(const std::vector<double>& v) {
  if (v.empty()) throw SampleSizeError("mean of empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sample_variance(const std::vector<double>& v) {
  if (v.size() < 2) throw SampleSizeError("variance needs at least 2 values");
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

inline double sample_stddev(const std::vector<double>& v) {
  return std::sqrt(sample_variance(v));
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

namespace detail {

inline double horner(const double* c, int n, double x) {
  double r = c[n - 1];
  for (int i = n - 2; i >= 0; --i) r = r * x + c[i];
  return r;
}

}  // namespace detail

// Inverse standard normal CDF, rational minimax approximation accurate to
// full double precision over (0, 1).
inline double normal_quantile(double p) {
  static const double a[8] = {
      3.3871328727963666080e0,  1.3314166789178437745e2, 1.9715909503065514427e3,
      1.3731693765509461125e4,  4.5921953931549871457e4, 6.7265770927008700853e4,
      3.3430575583588128105e4,  2.5090809287301226727e3};
  static const double b[8] = {
      1.0,                      4.2313330701600911252e1, 6.8718700749205790830e2,
      5.3941960214247511077e3,  2.1213794301586595867e4, 3.9307895800092710610e4,
      2.8729085735721942674e4,  5.2264952788528545610e3};
  static const double c[8] = {
      1.42343711074968357734e0, 4.63033784615654529590e0,
      5.76949722146069140550e0, 3.64784832476320460504e0,
      1.27045825245236838258e0, 2.41780725177450611770e-1,
      2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static const double d[8] = {
      1.0,                      2.05319162663775882187e0,
      1.67638483018380384940e0, 6.89767334985100004550e-1,
      1.48103976427480074590e-1, 1.51986665636164571966e-2,
      5.47593808499534494600e-4, 1.05075007164441684324e-9};
  static const double e[8] = {
      6.65790464350110377720e0, 5.46378491116411436990e0,
      1.78482653991729133580e0, 2.96560571828504891230e-1,
      2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static const double f[8] = {
      1.0,                      5.99832206555887937690e-1,
      1.36929880922735805310e-1, 1.48753612908506148525e-2,
      7.86869131145613259100e-4, 1.84631831751005468180e-6,
      1.42151175831644588870e-7, 2.04426310338993978564e-15};
  if (!(p > 0.0) || !(p < 1.0))
    throw NumericError("normal quantile requires p in (0, 1)");
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    double num = a[7], den = b[7];
    for (int i = 6; i >= 0; --i) {
      num = num * r + a[i];
      den = den * r + b[i];
    }
    return q * num / den;
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    double num = c[7], den = d[7];
    for (int i = 6; i >= 0; --i) {
      num = num * r + c[i];
      den = den * r + d[i];
    }
    val = num / den;
  } else {
    r -= 5.0;
    double num = e[7], den = f[7];
    for (int i = 6; i >= 0; --i) {
      num = num * r + e[i];
      den = den * r + f[i];
    }
    val = num / den;
  }
  return q < 0.0 ? -val : val;
}

// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
inline double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw NumericError("incomplete beta needs a, b > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (x > (a + 1.0) / (a + b + 2.0)) return 1.0 - incomplete_beta(b, a, 1.0 - x);
  const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  const double front = std::exp(std::log(x) * a + std::log1p(-x) * b - lbeta) / a;
  constexpr double kTiny = 1e-300;
  constexpr double kStop = 1e-15;
  double fval = 1.0, cc = 1.0, dd = 0.0;
  for (int i = 0; i <= 500; ++i) {
    const int m = i / 2;
    double numerator;
    if (i == 0) {
      numerator = 1.0;
    } else if (i % 2 == 0) {
      numerator = m * (b - m) * x / ((a + 2.0 * m - 1.0) * (a + 2.0 * m));
    } else {
      numerator = -((a + m) * (a + b + m) * x) / ((a + 2.0 * m) * (a + 2.0 * m + 1.0));
    }
    dd = 1.0 + numerator * dd;
    if (std::fabs(dd) < kTiny) dd = kTiny;
    dd = 1.0 / dd;
    cc = 1.0 + numerator / cc;
    if (std::fabs(cc) < kTiny) cc = kTiny;
    const double cd = cc * dd;
    fval *= cd;
    if (std::fabs(1.0 - cd) < kStop) return std::clamp(front * (fval - 1.0), 0.0, 1.0);
  }
  throw NumericError("incomplete beta did not converge");
}

// Two-sided p-value of a t statistic with df degrees of freedom.
inline double t_two_tailed_p(double t, double df) {
  if (!(df > 0.0)) throw NumericError("t distribution needs df > 0");
  if (!std::isfinite(t)) throw NumericError("non-finite t statistic");
  return incomplete_beta(df / 2.0, 0.5, df / (t * t + df));
}

struct SwResult {
  double w = 0.0;
  double p = 0.0;
};

// Shapiro-Wilk normality test, 3 <= n <= 5000. Weights use the Blom-score
// construction with polynomial corrections for the two outer coefficients;
// p-values come from an exact arcsine law at n = 3 and from log-normal
// approximations of 1 - W above that.
inline SwResult shapiro_wilk(std::vector<double> x) {
  const std::size_t n = x.size();
  if (n < 3) throw SampleSizeError("shapiro-wilk needs at least 3 values");
  if (n > 5000) throw SampleSizeError("shapiro-wilk supports at most 5000 values");
  std::sort(x.begin(), x.end());
  if (!(x.back() > x.front()))
    throw DegenerateSampleError("shapiro-wilk on a constant sample");

  const double an = static_cast<double>(n);
  std::vector<double> mscore(n);
  double summ2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mscore[i] = normal_quantile((static_cast<double>(i) + 1.0 - 0.375) / (an + 0.25));
    summ2 += mscore[i] * mscore[i];
  }

  std::vector<double> w(n, 0.0);
  if (n == 3) {
    w[0] = -std::sqrt(0.5);
    w[2] = std::sqrt(0.5);
  } else {
    static const double c1[6] = {0.0, 0.221157, -0.147981, -2.071190, 4.434685,
                                 -2.706056};
    static const double c2[6] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633,
                                 -3.582633};
    const double rsn = 1.0 / std::sqrt(an);
    const double ssumm2 = std::sqrt(summ2);
    const double wn = mscore[n - 1] / ssumm2 + detail::horner(c1, 6, rsn);
    double phi;
    std::size_t middle_hi;
    if (n > 5) {
      const double wn1 = mscore[n - 2] / ssumm2 + detail::horner(c2, 6, rsn);
      phi = (summ2 - 2.0 * mscore[n - 1] * mscore[n - 1] -
             2.0 * mscore[n - 2] * mscore[n - 2]) /
            (1.0 - 2.0 * wn * wn - 2.0 * wn1 * wn1);
      w[n - 2] = wn1;
      w[1] = -wn1;
      middle_hi = n - 2;
    } else {
      phi = (summ2 - 2.0 * mscore[n - 1] * mscore[n - 1]) / (1.0 - 2.0 * wn * wn);
      middle_hi = n - 1;
    }
    w[n - 1] = wn;
    w[0] = -wn;
    const double sphi = std::sqrt(phi);
    for (std::size_t i = (n > 5 ? 2 : 1); i < middle_hi; ++i) w[i] = mscore[i] / sphi;
  }

  const double xbar = [&] {
    double s = 0.0;
    for (double v : x) s += v;
    return s / an;
  }();
  double num = 0.0, ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += w[i] * x[i];
    ss += (x[i] - xbar) * (x[i] - xbar);
  }
  SwResult r;
  r.w = std::clamp(num * num / ss, 0.0, 1.0);

  if (n == 3) {
    const double pi6 = 1.90985931710274;    // 6/pi
    const double stqr = 1.04719755119660;   // asin(sqrt(3/4))
    r.p = std::clamp(pi6 * (std::asin(std::sqrt(r.w)) - stqr), 0.0, 1.0);
    return r;
  }
  double y = std::log(1.0 - r.w);
  double mu, sigma;
  if (n <= 11) {
    const double gamma = -2.273 + 0.459 * an;
    if (y >= gamma) {
      r.p = 1e-99;
      return r;
    }
    y = -std::log(gamma - y);
    static const double c3[4] = {0.5440, -0.39978, 0.025054, -6.714e-4};
    static const double c4[4] = {1.3822, -0.77857, 0.062767, -0.0020322};
    mu = detail::horner(c3, 4, an);
    sigma = std::exp(detail::horner(c4, 4, an));
  } else {
    const double lx = std::log(an);
    static const double c5[4] = {-1.5861, -0.31082, -0.083751, 0.0038915};
    static const double c6[3] = {-0.4803, -0.082676, 0.0030302};
    mu = detail::horner(c5, 4, lx);
    sigma = std::exp(detail::horner(c6, 3, lx));
  }
  r.p = std::clamp(1.0 - normal_cdf((y - mu) / sigma), 0.0, 1.0);
  return r;
}

enum class TTestVariant { kStudent, kWelch };

inline const char* t_test_variant_name(TTestVariant v) {
  return v == TTestVariant::kStudent ? "student" : "welch";
}

inline TTestVariant t_test_variant_from_name(const std::string& s) {
  if (s == "student") return TTestVariant::kStudent;
  if (s == "welch") return TTestVariant::kWelch;
  throw ConfigError("variant", "must be student or welch, got '" + s + "'");
}

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
  TTestVariant variant = TTestVariant::kStudent;
};

// Unpaired two-sample t test. Student pools variances with n1 + n2 - 2
// degrees of freedom; Welch uses the Satterthwaite approximation. Two
// identical degenerate samples compare equal (t = 0, p = 1); degenerate
// samples with different means have no finite statistic and throw.
inline TTestResult t_test(const std::vector<double>& x1, const std::vector<double>& x2,
                          TTestVariant variant = TTestVariant::kStudent) {
  if (x1.size() < 2 || x2.size() < 2)
    throw SampleSizeError("t test needs at least 2 values per sample");
  const double n1 = static_cast<double>(x1.size());
  const double n2 = static_cast<double>(x2.size());
  const double m1 = mean(x1), m2 = mean(x2);
  const double v1 = sample_variance(x1), v2 = sample_variance(x2);
  TTestResult r;
  r.variant = variant;
  double se2;
  if (variant == TTestVariant::kStudent) {
    r.df = n1 + n2 - 2.0;
    const double sp2 = ((n1 - 1.0) * v1 + (n2 - 1.0) * v2) / r.df;
    se2 = sp2 * (1.0 / n1 + 1.0 / n2);
  } else {
    const double a = v1 / n1, b = v2 / n2;
    se2 = a + b;
    if (se2 > 0.0) {
      r.df = se2 * se2 / (a * a / (n1 - 1.0) + b * b / (n2 - 1.0));
    } else {
      r.df = n1 + n2 - 2.0;
    }
  }
  if (se2 <= 0.0) {
    if (m1 == m2) {
      r.t = 0.0;
      r.p = 1.0;
      if (variant == TTestVariant::kStudent) r.df = n1 + n2 - 2.0;
      return r;
    }
    throw DegenerateSampleError("zero variance in both samples with unequal means");
  }
  r.t = (m1 - m2) / std::sqrt(se2);
  r.p = t_two_tailed_p(r.t, r.df);
  return r;
}

struct ComparisonResult {
  int n_a = 0, n_b = 0;
  double mean_a = 0.0, mean_b = 0.0;
  double sd_a = 0.0, sd_b = 0.0;
  bool normality_checked = false;
  SwResult sw_a, sw_b;
  bool normal_a = false, normal_b = false;
  TTestResult test;
  double alpha = 0.05;
  bool significant = false;
};

// Full two-condition comparison: per-sample summaries, per-sample normality
// when it is defined (n >= 3, non-constant), then the requested t test.
inline ComparisonResult compare_conditions(const std::vector<double>& a,
                                           const std::vector<double>& b,
                                           double alpha = 0.05,
                                           TTestVariant variant = TTestVariant::kStudent) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw ConfigError("alpha", "must be in (0, 1)");
  ComparisonResult r;
  r.alpha = alpha;
  r.n_a = static_cast<int>(a.size());
  r.n_b = static_cast<int>(b.size());
  r.mean_a = mean(a);
  r.mean_b = mean(b);
  r.sd_a = sample_stddev(a);
  r.sd_b = sample_stddev(b);
  auto degenerate = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  if (a.size() >= 3 && b.size() >= 3 && !degenerate(a) && !degenerate(b)) {
    r.normality_checked = true;
    r.sw_a = shapiro_wilk(a);
    r.sw_b = shapiro_wilk(b);
    r.normal_a = r.sw_a.p > alpha;
    r.normal_b = r.sw_b.p > alpha;
  }
  r.test = t_test(a, b, variant);
  r.significant = r.test.p < alpha;
  return r;
}

}  // namespace walkersim
