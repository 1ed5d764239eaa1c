#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ctbn::testing {

Mat Mat::identity(std::size_t n) {
  Mat m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::operator*(const Mat& other) const {
  Mat out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double v = (*this)(i, k);
      if (v == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += v * other(k, j);
    }
  }
  return out;
}

Mat Mat::operator+(const Mat& other) const {
  Mat out = *this;
  for (std::size_t i = 0; i < a.size(); ++i) out.a[i] += other.a[i];
  return out;
}

Mat Mat::scaled(double s) const {
  Mat out = *this;
  for (double& v : out.a) v *= s;
  return out;
}

Mat expm(const Mat& m) {
  // 1-norm
  double norm = 0.0;
  for (std::size_t j = 0; j < m.n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < m.n; ++i) col += std::abs(m(i, j));
    norm = std::max(norm, col);
  }
  int squarings = 0;
  double scale = 1.0;
  while (norm * scale > 0.5) {
    scale *= 0.5;
    ++squarings;
  }
  const Mat b = m.scaled(scale);
  Mat result = Mat::identity(m.n);
  Mat term = Mat::identity(m.n);
  for (int k = 1; k <= 40; ++k) {
    term = term * b;
    term = term.scaled(1.0 / k);
    result = result + term;
    double tnorm = 0.0;
    for (double v : term.a) tnorm = std::max(tnorm, std::abs(v));
    if (tnorm < 1e-19) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

std::vector<double> mat_vec(const Mat& m, std::span<const double> v) {
  std::vector<double> out(m.n, 0.0);
  for (std::size_t i = 0; i < m.n; ++i) {
    for (std::size_t j = 0; j < m.n; ++j) out[i] += m(i, j) * v[j];
  }
  return out;
}

std::vector<double> vec_mat(std::span<const double> v, const Mat& m) {
  std::vector<double> out(m.n, 0.0);
  for (std::size_t i = 0; i < m.n; ++i) {
    const double x = v[i];
    if (x == 0.0) continue;
    for (std::size_t j = 0; j < m.n; ++j) out[j] += x * m(i, j);
  }
  return out;
}

namespace {

void rescale(std::vector<double>& v) {
  double mx = 0.0;
  for (double x : v) mx = std::max(mx, std::abs(x));
  if (mx > 0.0) {
    for (double& x : v) x /= mx;
  }
}

}  // namespace

SmoothingOracle exact_smoothing(
    const Mat& generator, std::span<const double> p0,
    const std::vector<std::pair<double, std::vector<double>>>& evidence,
    double t_end, double dt) {
  const std::size_t n = generator.n;

  // Build the grid: breakpoints at evidence times, uniform substeps.
  std::vector<double> breaks{0.0};
  for (const auto& [t, lik] : evidence) {
    if (t < 0.0 || t > t_end) throw std::invalid_argument("evidence time");
    if (t > breaks.back()) breaks.push_back(t);
  }
  if (t_end > breaks.back()) breaks.push_back(t_end);

  std::vector<double> grid;
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double len = breaks[b + 1] - breaks[b];
    const auto steps = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(len / dt)));
    for (std::size_t k = 0; k < steps; ++k) {
      grid.push_back(breaks[b] + len * static_cast<double>(k) /
                                     static_cast<double>(steps));
    }
  }
  grid.push_back(t_end);
  const std::size_t g = grid.size();

  auto evidence_at = [&](double t) -> std::vector<double> {
    std::vector<double> lik(n, 1.0);
    for (const auto& [et, el] : evidence) {
      if (std::abs(et - t) < 1e-12) {
        for (std::size_t i = 0; i < n; ++i) lik[i] *= el[i];
      }
    }
    return lik;
  };

  // Forward pass with two-sided storage at evidence jumps: alpha_pre is
  // the filter before the likelihood at the grid time, alpha_post after.
  std::vector<std::vector<double>> alpha_pre(g), alpha_post(g);
  {
    std::vector<double> a(p0.begin(), p0.end());
    for (std::size_t k = 0; k < g; ++k) {
      if (k > 0) {
        const double step = grid[k] - grid[k - 1];
        const Mat p = expm(generator.scaled(step));
        a = vec_mat(a, p);
      }
      rescale(a);
      alpha_pre[k] = a;
      const auto lik = evidence_at(grid[k]);
      for (std::size_t i = 0; i < n; ++i) a[i] *= lik[i];
      rescale(a);
      alpha_post[k] = a;
    }
  }

  // Backward pass: beta_right excludes the likelihood at its own grid
  // time, beta_left includes it.
  std::vector<std::vector<double>> beta_right(g), beta_left(g);
  {
    std::vector<double> b(n, 1.0);
    for (std::size_t k = g; k-- > 0;) {
      if (k + 1 < g) {
        const double step = grid[k + 1] - grid[k];
        const Mat p = expm(generator.scaled(step));
        b = mat_vec(p, beta_left[k + 1]);
        rescale(b);
      }
      beta_right[k] = b;
      const auto lik = evidence_at(grid[k]);
      std::vector<double> bl = b;
      for (std::size_t i = 0; i < n; ++i) bl[i] *= lik[i];
      rescale(bl);
      beta_left[k] = bl;
    }
  }

  SmoothingOracle out;
  out.expected_dwell.assign(n, 0.0);
  out.expected_transitions = Mat(n);
  out.grid_times = grid;
  out.marginals.resize(g);

  auto smoothed = [&](std::size_t k) {
    std::vector<double> q(n);
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      q[i] = alpha_post[k][i] * beta_right[k][i];
      z += q[i];
    }
    for (double& x : q) x /= z;
    return q;
  };
  // Transition flux with matching one-sided messages: `right` selects the
  // segment starting at the grid point.
  auto flux = [&](std::size_t k, bool right, std::size_t i, std::size_t j) {
    const auto& a = right ? alpha_post[k] : alpha_pre[k];
    const auto& b = right ? beta_right[k] : beta_left[k];
    double z = 0.0;
    for (std::size_t s = 0; s < n; ++s) z += a[s] * b[s];
    return a[i] * generator(i, j) * b[j] / z;
  };

  for (std::size_t k = 0; k < g; ++k) out.marginals[k] = smoothed(k);

  for (std::size_t k = 0; k + 1 < g; ++k) {
    const double h = grid[k + 1] - grid[k];
    const auto ql = out.marginals[k];
    const auto qr = out.marginals[k + 1];
    for (std::size_t i = 0; i < n; ++i) {
      out.expected_dwell[i] += 0.5 * h * (ql[i] + qr[i]);
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        out.expected_transitions(i, j) +=
            0.5 * h * (flux(k, true, i, j) + flux(k + 1, false, i, j));
      }
    }
  }
  return out;
}

double path_log_density(const JointGenerator& gen, const Trajectory& traj) {
  std::vector<int> state = traj.initial;
  double ll = 0.0;
  double now = 0.0;
  for (const auto& e : traj.events) {
    const auto s = gen.state_index(state);
    ll += gen.rate(s, s) * (e.time - now);  // diagonal = -exit rate
    std::vector<int> next = state;
    next[e.node] = e.new_state;
    ll += std::log(gen.rate(s, gen.state_index(next)));
    state = next;
    now = e.time;
  }
  const auto s = gen.state_index(state);
  ll += gen.rate(s, s) * (traj.t_end - now);
  return ll;
}

namespace {

// Regularized incomplete gamma Q(a, x) by series / continued fraction.
double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q domain");
  if (x == 0.0) return 1.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    // P(a,x) series
    double sum = 1.0 / a;
    double term = sum;
    for (int k = 1; k < 500; ++k) {
      term *= x / (a + k);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    const double p = sum * std::exp(-x + a * std::log(x) - lg);
    return 1.0 - p;
  }
  // Q(a,x) continued fraction (Lentz)
  double b = x + 1.0 - a;
  double c = 1e300;
  double d = 1.0 / b;
  double h = d;
  for (int k = 1; k < 500; ++k) {
    const double an = -k * (k - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - lg) * h;
}

}  // namespace

double chi_square_pvalue(double stat, int dof) {
  return gamma_q(0.5 * dof, 0.5 * stat);
}

}  // namespace ctbn::testing
