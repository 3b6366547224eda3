#include "hgl/analyzer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <numeric>
#include <thread>

namespace hgl {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::vector<DirectionFrame> farey_directions(int max_den) {
  std::vector<std::pair<double, std::array<long long, 2>>> dirs;
  for (long long p = -max_den; p <= max_den; ++p)
    for (long long q = -max_den; q <= max_den; ++q) {
      if (p == 0 && q == 0) continue;
      if (std::gcd(std::abs(p), std::abs(q)) != 1) continue;
      double ang = std::atan2(static_cast<double>(q), static_cast<double>(p));
      if (ang < 0.0) ang += kTwoPi;
      dirs.push_back({ang, {p, q}});
    }
  std::sort(dirs.begin(), dirs.end());
  std::vector<DirectionFrame> out;
  for (auto& [ang, p] : dirs) out.push_back(direction_frame(p[0], p[1]));
  return out;
}

double DirectionSweep::max_error_budget() const {
  double m = 0.0;
  for (const auto& e : est) m = std::max(m, e.error_budget);
  return m;
}

DirectionSweep run_sweep(const CoefficientField& field,
                         const std::vector<DirectionFrame>& dirs, double delta,
                         double eps_tail, int workers) {
  DirectionSweep sweep;
  sweep.est.resize(dirs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      std::size_t k = next.fetch_add(1);
      if (k >= dirs.size()) return;
      sweep.est[k] = sigma_estimate(field, dirs[k], delta, eps_tail);
    }
  };
  workers = std::max(1, workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& d : dirs) {
    double ang = std::atan2(d.nu[1], d.nu[0]);
    if (ang < 0.0) ang += kTwoPi;
    sweep.angle.push_back(ang);
  }
  return sweep;
}

SigmaInterpolant::SigmaInterpolant(const DirectionSweep& sweep) {
  t_ = sweep.angle;
  for (const auto& e : sweep.est) y_.push_back(e.sigma_value);
  const int n = static_cast<int>(t_.size());
  if (n < 8) throw ValidationError("interpolant needs at least 8 directions");

  // Periodic cubic spline: cyclic tridiagonal system for the second
  // derivatives, solved by Thomas + Sherman-Morrison.
  std::vector<double> h(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double t1 = (i + 1 < n) ? t_[static_cast<std::size_t>(i + 1)]
                            : t_[0] + kTwoPi;
    h[static_cast<std::size_t>(i)] = t1 - t_[static_cast<std::size_t>(i)];
  }
  auto yv = [&](int i) { return y_[static_cast<std::size_t>((i % n + n) % n)]; };
  auto hv = [&](int i) { return h[static_cast<std::size_t>((i % n + n) % n)]; };

  std::vector<double> a(static_cast<std::size_t>(n)),
      b(static_cast<std::size_t>(n)), c(static_cast<std::size_t>(n)),
      d(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    a[static_cast<std::size_t>(i)] = hv(i - 1) / 6.0;
    b[static_cast<std::size_t>(i)] = (hv(i - 1) + hv(i)) / 3.0;
    c[static_cast<std::size_t>(i)] = hv(i) / 6.0;
    d[static_cast<std::size_t>(i)] =
        (yv(i + 1) - yv(i)) / hv(i) - (yv(i) - yv(i - 1)) / hv(i - 1);
  }

  // Cyclic couplings folded in by Sherman-Morrison: A = T + u v^T with
  // u = (gamma, 0,...,0, beta), v = (1, 0,...,0, alpha/gamma).
  double alpha = a[0];               // A(0, n-1)
  double beta = c[static_cast<std::size_t>(n - 1)];  // A(n-1, 0)
  double gamma = -b[0];
  std::vector<double> bb = b;
  bb[0] -= gamma;
  bb[static_cast<std::size_t>(n - 1)] -= alpha * beta / gamma;

  auto thomas = [&](std::vector<double> rhs) {
    std::vector<double> cp(static_cast<std::size_t>(n)),
        dp(static_cast<std::size_t>(n));
    cp[0] = c[0] / bb[0];
    dp[0] = rhs[0] / bb[0];
    for (int i = 1; i < n; ++i) {
      double mlt = bb[static_cast<std::size_t>(i)] -
                   a[static_cast<std::size_t>(i)] *
                       cp[static_cast<std::size_t>(i - 1)];
      cp[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)] / mlt;
      dp[static_cast<std::size_t>(i)] =
          (rhs[static_cast<std::size_t>(i)] -
           a[static_cast<std::size_t>(i)] * dp[static_cast<std::size_t>(i - 1)]) /
          mlt;
    }
    std::vector<double> x(static_cast<std::size_t>(n));
    x[static_cast<std::size_t>(n - 1)] = dp[static_cast<std::size_t>(n - 1)];
    for (int i = n - 2; i >= 0; --i)
      x[static_cast<std::size_t>(i)] =
          dp[static_cast<std::size_t>(i)] -
          cp[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i + 1)];
    return x;
  };

  std::vector<double> u(static_cast<std::size_t>(n), 0.0);
  u[0] = gamma;
  u[static_cast<std::size_t>(n - 1)] = beta;
  std::vector<double> x1 = thomas(d);
  std::vector<double> x2 = thomas(u);
  double vx1 = x1[0] + (alpha / gamma) * x1[static_cast<std::size_t>(n - 1)];
  double vx2 = x2[0] + (alpha / gamma) * x2[static_cast<std::size_t>(n - 1)];
  double factor = vx1 / (1.0 + vx2);
  m_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    m_[static_cast<std::size_t>(i)] = x1[static_cast<std::size_t>(i)] -
                                      factor * x2[static_cast<std::size_t>(i)];
}

double SigmaInterpolant::operator()(double theta) const {
  const int n = static_cast<int>(t_.size());
  double th = std::fmod(theta - t_[0], kTwoPi);
  if (th < 0.0) th += kTwoPi;
  th += t_[0];
  auto it = std::upper_bound(t_.begin(), t_.end(), th);
  int i = static_cast<int>(it - t_.begin()) - 1;
  if (i < 0) i = n - 1;
  double t0 = t_[static_cast<std::size_t>(i)];
  double t1 = (i + 1 < n) ? t_[static_cast<std::size_t>(i + 1)] : t_[0] + kTwoPi;
  int i1 = (i + 1) % n;
  double h = t1 - t0;
  double A = (t1 - th) / h, B = (th - t0) / h;
  double y0 = y_[static_cast<std::size_t>(i)], y1 = y_[static_cast<std::size_t>(i1)];
  double m0 = m_[static_cast<std::size_t>(i)], m1 = m_[static_cast<std::size_t>(i1)];
  return A * y0 + B * y1 +
         ((A * A * A - A) * m0 + (B * B * B - B) * m1) * h * h / 6.0;
}

double sigma_tilde(double w1, double w2, const SigmaInterpolant& interp) {
  double r = std::hypot(w1, w2);
  if (r == 0.0) return 0.0;
  return r * interp(std::atan2(w2, w1));
}

AngularDerivatives angular_derivatives(const DirectionSweep& sweep) {
  AngularDerivatives ad;
  SigmaInterpolant interp(sweep);

  double sigma_scale = 0.0;
  for (const auto& e : sweep.est) sigma_scale = std::max(sigma_scale, e.sigma_value);
  double eps_rel = sweep.max_error_budget() / sigma_scale;
  ad.conclusive = eps_rel <= 1e-2;

  double eta = std::max(2.0 * std::numbers::pi / 180.0, std::cbrt(eps_rel));
  int m = std::max(16, static_cast<int>(std::ceil(kTwoPi / eta)));
  ad.eta = kTwoPi / m;
  ad.theta.resize(static_cast<std::size_t>(m));
  ad.sigma.resize(static_cast<std::size_t>(m));
  ad.d1.resize(static_cast<std::size_t>(m));
  ad.d2.resize(static_cast<std::size_t>(m));
  std::vector<double> s(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    ad.theta[static_cast<std::size_t>(k)] = k * ad.eta;
    s[static_cast<std::size_t>(k)] = interp(k * ad.eta);
    ad.sigma[static_cast<std::size_t>(k)] = s[static_cast<std::size_t>(k)];
  }
  auto sv = [&](int k) { return s[static_cast<std::size_t>((k % m + m) % m)]; };
  const double e1 = ad.eta, e2 = e1 * e1;
  for (int k = 0; k < m; ++k) {
    ad.d1[static_cast<std::size_t>(k)] =
        (sv(k - 2) - 8.0 * sv(k - 1) + 8.0 * sv(k + 1) - sv(k + 2)) /
        (12.0 * e1);
    ad.d2[static_cast<std::size_t>(k)] =
        (-sv(k - 2) + 16.0 * sv(k - 1) - 30.0 * sv(k) + 16.0 * sv(k + 1) -
         sv(k + 2)) /
        (12.0 * e2);
  }
  return ad;
}

ConvexityReport convexity_report(const DirectionSweep& sweep, double theta_hat) {
  ConvexityReport rep;
  rep.deriv = angular_derivatives(sweep);
  rep.sigma0 = (4.0 / 3.0) * std::sqrt(2.0 * theta_hat);

  const double eps = sweep.max_error_budget();
  const double eta = rep.deriv.eta;
  rep.noise_floor = 3.0 * eps * (1.0 + 64.0 / (12.0 * eta * eta));
  rep.d1_noise_floor = 3.0 * eps * 18.0 / (12.0 * eta);

  rep.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < rep.deriv.theta.size(); ++k) {
    double gap = rep.deriv.sigma[k] + rep.deriv.d2[k] - rep.sigma0;
    rep.hessian_gap.push_back(gap);
    rep.min_gap = std::min(rep.min_gap, gap);
    rep.max_abs_d1 = std::max(rep.max_abs_d1, std::abs(rep.deriv.d1[k]));
  }
  rep.b_verdict = rep.max_abs_d1 <= rep.d1_noise_floor
                      ? "tangential slope not distinguishable from 0"
                      : "tangential slope exceeds the noise floor";
  return rep;
}

std::vector<std::array<double, 2>> wulff_shape_2d(const SigmaInterpolant& interp,
                                                  int n_halfplanes) {
  if (n_halfplanes < 8)
    throw ValidationError("wulff_shape_2d: need at least 8 directions");

  // Start from a generous bounding square, clip by each half-plane.
  double big = 0.0;
  for (int k = 0; k < n_halfplanes; ++k)
    big = std::max(big, interp(kTwoPi * k / n_halfplanes));
  big *= 4.0;
  std::vector<std::array<double, 2>> poly = {
      {-big, -big}, {big, -big}, {big, big}, {-big, big}};

  for (int k = 0; k < n_halfplanes; ++k) {
    double th = kTwoPi * k / n_halfplanes;
    double nx = std::cos(th), ny = std::sin(th);
    double off = interp(th);
    std::vector<std::array<double, 2>> out;
    const std::size_t np = poly.size();
    for (std::size_t i = 0; i < np; ++i) {
      auto p = poly[i];
      auto q = poly[(i + 1) % np];
      double dp = p[0] * nx + p[1] * ny - off;
      double dq = q[0] * nx + q[1] * ny - off;
      bool pin = dp <= 0.0, qin = dq <= 0.0;
      if (pin) out.push_back(p);
      if (pin != qin) {
        double t = dp / (dp - dq);
        out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
      }
    }
    poly = std::move(out);
    if (poly.empty()) break;
  }
  return poly;
}

}  // namespace hgl
