#include "ctbn/variational.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ctbn/errors.hpp"
#include "ctbn/numerics.hpp"
#include "ctbn/scoring.hpp"

namespace ctbn {

namespace {

constexpr double kRhoFloorScale = 1e-250;

void normalize_by_max(std::vector<double>& v, std::size_t offset,
                      std::size_t count) {
  double mx = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    mx = std::max(mx, v[offset + i]);
  }
  if (mx <= 0.0) {
    throw ImpossibleEvidenceError("backward message collapsed to zero");
  }
  for (std::size_t i = 0; i < count; ++i) {
    double& x = v[offset + i];
    x /= mx;
    if (x < kRhoFloorScale) x = kRhoFloorScale;
  }
}

}  // namespace

MarginalStats MarginalStats::zeros(const StateSpace& space,
                                   const MixtureWeights& pi) {
  MarginalStats out;
  out.slices.resize(pi.num_nodes());
  for (int i = 0; i < pi.num_nodes(); ++i) {
    const auto& nm = pi.nodes[i];
    out.slices[i].reserve(nm.subsets.size());
    for (const auto& subset : nm.subsets) {
      std::vector<int> cards;
      cards.reserve(subset.size());
      for (int p : subset) cards.push_back(space.cardinality(p));
      out.slices[i].emplace_back(i, subset, std::move(cards),
                                 space.cardinality(i));
    }
  }
  return out;
}

MarginalStats MarginalStats::from_stats(const SufficientStats& stats,
                                        const MixtureWeights& pi) {
  MarginalStats out;
  out.slices.resize(pi.num_nodes());
  for (int i = 0; i < pi.num_nodes(); ++i) {
    for (const auto& subset : pi.nodes[i].subsets) {
      out.slices[i].push_back(marginalize_stats(stats.nodes[i], subset));
    }
  }
  return out;
}

MarginalStats& MarginalStats::operator+=(const MarginalStats& other) {
  if (other.slices.size() != slices.size()) {
    throw InvalidModelError("marginal stats shape mismatch");
  }
  for (std::size_t i = 0; i < slices.size(); ++i) {
    for (std::size_t m = 0; m < slices[i].size(); ++m) {
      slices[i][m] += other.slices[i][m];
    }
  }
  return *this;
}

double NodePosteriorRates::arithmetic(const std::vector<int>& overcomplete,
                                      const std::vector<int>& digits, int x,
                                      int y) const {
  double sum = 0.0;
  for (std::size_t m = 0; m < subsets.size(); ++m) {
    if (weights[m] == 0.0) continue;
    std::size_t u = 0;
    std::size_t stride = 1;
    for (std::size_t j = 0; j < subsets[m].size(); ++j) {
      const auto pos = static_cast<std::size_t>(
          std::find(overcomplete.begin(), overcomplete.end(),
                    subsets[m][j]) -
          overcomplete.begin());
      u += stride * static_cast<std::size_t>(digits[pos]);
      stride *= static_cast<std::size_t>(subset_cards[m][j]);
    }
    sum += weights[m] * rate(static_cast<int>(m), u, x, y);
  }
  return sum;
}

double NodePosteriorRates::geometric(const std::vector<int>& overcomplete,
                                     const std::vector<int>& digits, int x,
                                     int y) const {
  double lg = 0.0;
  for (std::size_t m = 0; m < subsets.size(); ++m) {
    if (weights[m] == 0.0) continue;
    std::size_t u = 0;
    std::size_t stride = 1;
    for (std::size_t j = 0; j < subsets[m].size(); ++j) {
      const auto pos = static_cast<std::size_t>(
          std::find(overcomplete.begin(), overcomplete.end(),
                    subsets[m][j]) -
          overcomplete.begin());
      u += stride * static_cast<std::size_t>(digits[pos]);
      stride *= static_cast<std::size_t>(subset_cards[m][j]);
    }
    lg += weights[m] *
          log_rhat[m][(u * card + x) * card + y];
  }
  return std::exp(lg);
}

PosteriorRates posterior_rates(const MarginalStats& estats,
                               const MixtureWeights& pi,
                               const GammaPrior& gprior, double active_floor) {
  gprior.validate();
  PosteriorRates out;
  out.nodes.resize(pi.num_nodes());
  for (int i = 0; i < pi.num_nodes(); ++i) {
    const auto& nm = pi.nodes[i];
    auto& npr = out.nodes[i];
    npr.node = i;
    npr.subsets = nm.subsets;
    npr.weights = nm.weights;
    const double alpha = gprior.alpha_for(i);
    const double beta = gprior.beta_for(i);
    npr.card = estats.slices[i].empty() ? 0 : estats.slices[i][0].card;
    npr.subset_cards.resize(nm.subsets.size());
    npr.rhat.resize(nm.subsets.size());
    npr.log_rhat.resize(nm.subsets.size());
    double max_exit = 0.0;
    for (std::size_t m = 0; m < nm.subsets.size(); ++m) {
      const auto& slice = estats.slices[i][m];
      npr.subset_cards[m] = slice.parent_cards;
      const int card = slice.card;
      auto& r = npr.rhat[m];
      auto& lr = npr.log_rhat[m];
      r.assign(slice.nconfigs * card * card, 0.0);
      lr.assign(slice.nconfigs * card * card, 0.0);
      const double w = nm.weights[m];
      if (w >= active_floor) npr.active.push_back(static_cast<int>(m));
      for (std::size_t u = 0; u < slice.nconfigs; ++u) {
        for (int x = 0; x < card; ++x) {
          const double bbar = w * slice.T(u, x) + beta;
          double exit = 0.0;
          for (int y = 0; y < card; ++y) {
            if (y == x) continue;
            const double abar = w * slice.M(u, x, y) + alpha;
            const double val = abar / bbar;
            r[(u * card + x) * card + y] = val;
            lr[(u * card + x) * card + y] = std::log(val);
            exit += val;
          }
          if (w >= active_floor) max_exit = std::max(max_exit, exit);
        }
      }
    }
    out.max_exit_bound = std::max(out.max_exit_bound, max_exit);
  }
  return out;
}

VariationalEngine::VariationalEngine(StateSpace space, MixtureWeights pi,
                                     GammaPrior gprior, DirichletPrior dprior,
                                     EngineConfig config)
    : space_(std::move(space)), pi_(std::move(pi)), gprior_(std::move(gprior)),
      dprior_(std::move(dprior)), config_(std::move(config)) {
  pi_.validate();
  gprior_.validate();
  const int n = pi_.num_nodes();
  if (n != space_.num_nodes()) {
    throw InvalidModelError("mixture and state space node counts differ");
  }
  contexts_.resize(n);
  for (int i = 0; i < n; ++i) {
    auto& ctx = contexts_[i];
    const auto& nm = pi_.nodes[i];
    for (std::size_t m = 0; m < nm.subsets.size(); ++m) {
      if (nm.weights[m] < config_.active_weight_floor) continue;
      for (int p : nm.subsets[m]) {
        if (!std::binary_search(ctx.overcomplete.begin(),
                                ctx.overcomplete.end(), p)) {
          ctx.overcomplete.insert(
              std::upper_bound(ctx.overcomplete.begin(),
                               ctx.overcomplete.end(), p),
              p);
        }
      }
    }
    ctx.oc_cards.reserve(ctx.overcomplete.size());
    ctx.oc_size = 1;
    for (int p : ctx.overcomplete) {
      ctx.oc_cards.push_back(space_.cardinality(p));
      ctx.oc_size *= static_cast<std::size_t>(space_.cardinality(p));
    }
    if (config_.mode == EngineConfig::Mode::ExactGeometric &&
        ctx.oc_size > config_.exact_context_cap) {
      throw InvalidModelError(
          "over-complete context too large for the exact geometric mode; "
          "use the greedy arithmetic mode");
    }
    ctx.subset_pos.resize(nm.subsets.size());
    ctx.targets.resize(nm.subsets.size());
    for (std::size_t m = 0; m < nm.subsets.size(); ++m) {
      auto& plan = ctx.targets[m];
      std::size_t stride = 1;
      for (int p : nm.subsets[m]) {
        const auto it = std::find(ctx.overcomplete.begin(),
                                  ctx.overcomplete.end(), p);
        if (it != ctx.overcomplete.end()) {
          plan.in_dyn_pos.push_back(
              static_cast<std::size_t>(it - ctx.overcomplete.begin()));
          plan.in_stride.push_back(stride);
          plan.in_cards.push_back(space_.cardinality(p));
          plan.in_size *= static_cast<std::size_t>(space_.cardinality(p));
        } else {
          plan.out_nodes.push_back(p);
          plan.out_stride.push_back(stride);
          plan.out_cards.push_back(space_.cardinality(p));
          plan.out_size *= static_cast<std::size_t>(space_.cardinality(p));
        }
        stride *= static_cast<std::size_t>(space_.cardinality(p));
      }
      if (nm.weights[m] >= config_.active_weight_floor) {
        // Active subsets live inside the dynamic context by construction.
        ctx.subset_pos[m] = plan.in_dyn_pos;
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      if (std::binary_search(contexts_[j].overcomplete.begin(),
                             contexts_[j].overcomplete.end(), i)) {
        contexts_[i].children.push_back(j);
      }
    }
  }
}

VariationalState VariationalEngine::make_state(
    const ObservationSet& obs, const PosteriorRates& rates) const {
  obs.validate();
  const int n = space_.num_nodes();
  VariationalState state;
  std::vector<double> breaks;
  breaks.reserve(obs.rows.size());
  for (const auto& row : obs.rows) breaks.push_back(row.time);
  const double dt =
      config_.dt_stability / std::max(rates.max_exit_bound, 1e-9);
  state.grid = TimeGrid::build(obs.t_end, breaks, dt);
  const std::size_t g = state.grid.size();
  state.num_nodes = n;
  state.cards = space_.cardinalities();
  state.q.resize(n);
  state.rho_left.resize(n);
  state.rho_right.resize(n);
  state.alpha_left.resize(n);
  state.alpha_right.resize(n);
  state.evidence.resize(n);
  for (int i = 0; i < n; ++i) {
    const int card = state.cards[i];
    state.q[i].assign(g * card, 1.0 / card);
    state.rho_left[i].assign(g * card, 1.0);
    state.rho_right[i].assign(g * card, 1.0);
    state.alpha_left[i].assign(g * card, 1.0 / card);
    state.alpha_right[i].assign(g * card, 1.0 / card);
  }
  // Attach per-node evidence, merging rows that share a grid point.
  for (const auto& row : obs.rows) {
    const std::size_t k = state.grid.index_of_breakpoint(row.time);
    for (int i = 0; i < n; ++i) {
      if (!row.values[i].has_value()) continue;
      auto lik = obs.noise.likelihood(space_, i, row.values[i]);
      double mx = 0.0;
      for (double v : lik) mx = std::max(mx, v);
      if (mx <= 0.0) {
        throw ImpossibleEvidenceError(
            "observation of node " + std::to_string(i) + " at t=" +
            std::to_string(row.time) + " has zero likelihood in every state");
      }
      auto& ev = state.evidence[i];
      auto it = std::find_if(ev.begin(), ev.end(),
                             [&](const auto& e) { return e.first == k; });
      if (it == ev.end()) {
        ev.emplace_back(k, std::move(lik));
        std::sort(ev.begin(), ev.end(),
                  [](const auto& a, const auto& b) {
                    return a.first < b.first;
                  });
      } else {
        for (std::size_t s = 0; s < it->second.size(); ++s) {
          it->second[s] *= lik[s];
        }
      }
    }
  }
  return state;
}

// Product table of other-node marginals over the configurations of
// `members` (mixed radix, first member least significant).
static void product_table(const VariationalState& state,
                          const std::vector<int>& members, std::size_t k,
                          std::vector<double>& out) {
  out.assign(1, 1.0);
  for (int l : members) {
    const int card = state.cards[l];
    const std::size_t base = out.size();
    out.resize(base * card);
    for (int d = card - 1; d >= 0; --d) {
      const double ql = std::max(state.q[l][k * card + d], 0.0);
      for (std::size_t b = 0; b < base; ++b) {
        out[d * base + b] = out[b] * ql;
      }
    }
  }
}

double VariationalEngine::transition_mean(int node,
                                          const VariationalState& state,
                                          const PosteriorRates& rates,
                                          std::size_t k, int x, int y,
                                          bool geometric) const {
  const auto& ctx = contexts_[node];
  const auto& npr = rates.nodes[node];
  const int card = npr.card;
  if (!geometric) {
    double sum = 0.0;
    std::vector<double> qm;
    for (int m : npr.active) {
      product_table(state, npr.subsets[m], k, qm);
      const auto& r = npr.rhat[m];
      double acc = 0.0;
      for (std::size_t u = 0; u < qm.size(); ++u) {
        acc += qm[u] * r[(u * card + x) * card + y];
      }
      sum += npr.weights[m] * acc;
    }
    return sum;
  }
  // Geometric mean needs the full over-complete configuration.
  std::vector<double> qfull;
  product_table(state, ctx.overcomplete, k, qfull);
  std::vector<int> digits(ctx.overcomplete.size());
  double sum = 0.0;
  for (std::size_t u = 0; u < qfull.size(); ++u) {
    if (qfull[u] == 0.0) continue;
    mixed_radix_decode(u, ctx.oc_cards, digits);
    double lg = 0.0;
    for (int m : npr.active) {
      std::size_t um = 0;
      std::size_t stride = 1;
      for (std::size_t j = 0; j < ctx.subset_pos[m].size(); ++j) {
        um += stride * static_cast<std::size_t>(digits[ctx.subset_pos[m][j]]);
        stride *= static_cast<std::size_t>(npr.subset_cards[m][j]);
      }
      lg += npr.weights[m] * npr.log_rhat[m][(um * card + x) * card + y];
    }
    sum += qfull[u] * std::exp(lg);
  }
  return sum;
}

namespace {

// Full-configuration rate tables of one node (exact mode).
struct FullTables {
  std::size_t size = 0;
  int card = 0;
  std::vector<double> geo;    // [u*card*card + x*card + y]
  std::vector<double> arith;
};

}  // namespace

// Builds per-config geometric/arithmetic mean tables over the over-complete
// context of `node`.
static FullTables build_full_tables(
    const std::vector<int>& oc_cards,
    const std::vector<std::vector<std::size_t>>& subset_pos,
    const NodePosteriorRates& npr) {
  FullTables ft;
  ft.card = npr.card;
  ft.size = 1;
  for (int c : oc_cards) ft.size *= static_cast<std::size_t>(c);
  ft.geo.assign(ft.size * ft.card * ft.card, 0.0);
  ft.arith.assign(ft.size * ft.card * ft.card, 0.0);
  std::vector<int> digits(oc_cards.size());
  for (std::size_t u = 0; u < ft.size; ++u) {
    mixed_radix_decode(u, oc_cards, digits);
    for (int x = 0; x < ft.card; ++x) {
      for (int y = 0; y < ft.card; ++y) {
        if (y == x) continue;
        double lg = 0.0;
        double ar = 0.0;
        for (int m : npr.active) {
          std::size_t um = 0;
          std::size_t stride = 1;
          for (std::size_t j = 0; j < subset_pos[m].size(); ++j) {
            um += stride * static_cast<std::size_t>(digits[subset_pos[m][j]]);
            stride *= static_cast<std::size_t>(npr.subset_cards[m][j]);
          }
          const std::size_t idx = (um * ft.card + x) * ft.card + y;
          lg += npr.weights[m] * npr.log_rhat[m][idx];
          ar += npr.weights[m] * npr.rhat[m][idx];
        }
        ft.geo[(u * ft.card + x) * ft.card + y] = std::exp(lg);
        ft.arith[(u * ft.card + x) * ft.card + y] = ar;
      }
    }
  }
  return ft;
}

std::vector<double> VariationalEngine::compute_psi(
    int node, const VariationalState& state, const PosteriorRates& rates,
    std::size_t k, bool left_side) const {
  const auto& ctx = contexts_[node];
  const int card = state.cards[node];
  std::vector<double> psi(card, 0.0);
  const bool exact = config_.mode == EngineConfig::Mode::ExactGeometric;

  for (int j : ctx.children) {
    const auto& jctx = contexts_[j];
    const auto& jnpr = rates.nodes[j];
    const int jcard = state.cards[j];
    const auto& rho = left_side ? state.rho_left[j] : state.rho_right[j];
    const auto& alpha =
        left_side ? state.alpha_left[j] : state.alpha_right[j];

    // Conditional mixture means given this node's state: c1 couples to the
    // child's backward messages, c2 is the arithmetic counterweight.
    std::vector<double> c1(card * jcard * jcard, 0.0);
    std::vector<double> c2(card * jcard * jcard, 0.0);
    const auto my_pos = static_cast<std::size_t>(
        std::find(jctx.overcomplete.begin(), jctx.overcomplete.end(), node) -
        jctx.overcomplete.begin());

    if (exact) {
      FullTables ft = build_full_tables(jctx.oc_cards, jctx.subset_pos, jnpr);
      std::vector<int> digits(jctx.oc_cards.size());
      for (std::size_t u = 0; u < ft.size; ++u) {
        mixed_radix_decode(u, jctx.oc_cards, digits);
        double w = 1.0;
        for (std::size_t l = 0; l < jctx.overcomplete.size(); ++l) {
          if (l == my_pos) continue;
          const int other = jctx.overcomplete[l];
          w *= std::max(
              state.q[other][k * state.cards[other] + digits[l]], 0.0);
        }
        if (w == 0.0) continue;
        const int d = digits[my_pos];
        for (int xj = 0; xj < jcard; ++xj) {
          for (int yj = 0; yj < jcard; ++yj) {
            if (yj == xj) continue;
            const std::size_t idx = (u * jcard + xj) * jcard + yj;
            c1[(d * jcard + xj) * jcard + yj] += w * ft.geo[idx];
            c2[(d * jcard + xj) * jcard + yj] += w * ft.arith[idx];
          }
        }
      }
    } else {
      std::vector<double> qm;
      std::vector<int> digits;
      for (int m : jnpr.active) {
        const auto& members = jnpr.subsets[m];
        const auto it = std::find(members.begin(), members.end(), node);
        const auto& r = jnpr.rhat[m];
        const double wpi = jnpr.weights[m];
        if (it == members.end()) {
          // Independent of this node's state: same for every d.
          product_table(state, members, k, qm);
          for (std::size_t u = 0; u < qm.size(); ++u) {
            if (qm[u] == 0.0) continue;
            for (int xj = 0; xj < jcard; ++xj) {
              for (int yj = 0; yj < jcard; ++yj) {
                if (yj == xj) continue;
                const double v = wpi * qm[u] * r[(u * jcard + xj) * jcard + yj];
                for (int d = 0; d < card; ++d) {
                  c1[(d * jcard + xj) * jcard + yj] += v;
                }
              }
            }
          }
        } else {
          // Pin this node's digit; weigh the remaining members by q.
          const auto pin = static_cast<std::size_t>(it - members.begin());
          digits.assign(members.size(), 0);
          const auto& cards = jnpr.subset_cards[m];
          std::size_t nconf = 1;
          for (int c : cards) nconf *= static_cast<std::size_t>(c);
          for (std::size_t u = 0; u < nconf; ++u) {
            mixed_radix_decode(u, cards, digits);
            double w = 1.0;
            for (std::size_t l = 0; l < members.size(); ++l) {
              if (l == pin) continue;
              const int other = members[l];
              w *= std::max(
                  state.q[other][k * state.cards[other] + digits[l]], 0.0);
            }
            if (w == 0.0) continue;
            const int d = digits[pin];
            for (int xj = 0; xj < jcard; ++xj) {
              for (int yj = 0; yj < jcard; ++yj) {
                if (yj == xj) continue;
                c1[(d * jcard + xj) * jcard + yj] +=
                    wpi * w * r[(u * jcard + xj) * jcard + yj];
              }
            }
          }
        }
      }
      c2 = c1;  // both means are arithmetic in greedy mode
    }

    // q_j(x) rho_j(y)/rho_j(x) is evaluated as alpha_j(x) rho_j(y) / Z_j,
    // which stays bounded under sharp evidence.
    double z = 0.0;
    for (int xj = 0; xj < jcard; ++xj) {
      z += alpha[k * jcard + xj] * rho[k * jcard + xj];
    }
    for (int d = 0; d < card; ++d) {
      double acc = 0.0;
      for (int xj = 0; xj < jcard; ++xj) {
        const double ax = alpha[k * jcard + xj];
        const double qj = ax * rho[k * jcard + xj] / z;
        for (int yj = 0; yj < jcard; ++yj) {
          if (yj == xj) continue;
          const double flux = ax * rho[k * jcard + yj] / z;
          acc += flux * c1[(d * jcard + xj) * jcard + yj] -
                 qj * c2[(d * jcard + xj) * jcard + yj];
        }
      }
      psi[d] += acc;
    }
  }
  return psi;
}

void VariationalEngine::node_coefficients(
    int node, const VariationalState& state, const PosteriorRates& rates,
    std::vector<Coefficients>& out) const {
  const auto& ctx = contexts_[node];
  const auto& npr = rates.nodes[node];
  const int card = state.cards[node];
  const std::size_t g = state.grid.size();
  const bool exact = config_.mode == EngineConfig::Mode::ExactGeometric;
  out.assign(g, Coefficients{});

  FullTables ft;
  if (exact) ft = build_full_tables(ctx.oc_cards, ctx.subset_pos, npr);

  std::vector<double> qtab;
  for (std::size_t k = 0; k < g; ++k) {
    auto& c = out[k];
    c.trans.assign(card * card, 0.0);
    c.exit_arith.assign(card, 0.0);
    if (exact) {
      product_table(state, ctx.overcomplete, k, qtab);
      for (std::size_t u = 0; u < qtab.size(); ++u) {
        const double w = qtab[u];
        if (w == 0.0) continue;
        for (int x = 0; x < card; ++x) {
          for (int y = 0; y < card; ++y) {
            if (y == x) continue;
            c.trans[x * card + y] += w * ft.geo[(u * card + x) * card + y];
            c.exit_arith[x] += w * ft.arith[(u * card + x) * card + y];
          }
        }
      }
    } else {
      for (int m : npr.active) {
        product_table(state, npr.subsets[m], k, qtab);
        const auto& r = npr.rhat[m];
        const double wpi = npr.weights[m];
        for (std::size_t u = 0; u < qtab.size(); ++u) {
          const double w = wpi * qtab[u];
          if (w == 0.0) continue;
          for (int x = 0; x < card; ++x) {
            for (int y = 0; y < card; ++y) {
              if (y == x) continue;
              c.trans[x * card + y] += w * r[(u * card + x) * card + y];
            }
          }
        }
      }
      for (int x = 0; x < card; ++x) {
        for (int y = 0; y < card; ++y) {
          if (y != x) c.exit_arith[x] += c.trans[x * card + y];
        }
      }
    }
    c.psi_left = compute_psi(node, state, rates, k, true);
    c.psi_right = compute_psi(node, state, rates, k, false);
  }
}

namespace {

// One RK4 step of y' = M(s) y with tabulated endpoint matrices; the
// midpoint matrix is the average.
void rk4_step(const std::vector<double>& m0, const std::vector<double>& m1,
              int card, double h, std::vector<double>& y) {
  const int n = card;
  std::vector<double> mm(n * n);
  for (int i = 0; i < n * n; ++i) mm[i] = 0.5 * (m0[i] + m1[i]);
  auto apply = [&](const std::vector<double>& m, const std::vector<double>& v,
                   std::vector<double>& dst) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += m[i * n + j] * v[j];
      dst[i] = acc;
    }
  };
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  apply(m0, y, k1);
  for (int i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  apply(mm, tmp, k2);
  for (int i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  apply(mm, tmp, k3);
  for (int i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
  apply(m1, tmp, k4);
  for (int i = 0; i < n; ++i) {
    y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
}

}  // namespace

void VariationalEngine::backward_sweep(int node, VariationalState& state,
                                       const PosteriorRates& rates) const {
  std::vector<Coefficients> coef;
  node_coefficients(node, state, rates, coef);
  backward_core(node, state, coef);
}

void VariationalEngine::forward_sweep(int node, VariationalState& state,
                                      const PosteriorRates& rates) const {
  std::vector<Coefficients> coef;
  node_coefficients(node, state, rates, coef);
  forward_core(node, state, coef);
}

void VariationalEngine::update_node(int node, VariationalState& state,
                                    const PosteriorRates& rates) const {
  std::vector<Coefficients> coef;
  node_coefficients(node, state, rates, coef);
  backward_core(node, state, coef);
  forward_core(node, state, coef);
}

void VariationalEngine::backward_core(
    int node, VariationalState& state,
    const std::vector<Coefficients>& coef) const {
  const int card = state.cards[node];
  const std::size_t g = state.grid.size();

  auto& rho_l = state.rho_left[node];
  auto& rho_r = state.rho_right[node];
  const auto& evidence = state.evidence[node];

  auto apply_evidence = [&](std::size_t k) {
    const auto it = std::find_if(
        evidence.begin(), evidence.end(),
        [&](const auto& e) { return e.first == k; });
    for (int x = 0; x < card; ++x) {
      rho_l[k * card + x] = rho_r[k * card + x];
    }
    if (it != evidence.end()) {
      for (int x = 0; x < card; ++x) rho_l[k * card + x] *= it->second[x];
    }
    normalize_by_max(rho_l, k * card, card);
  };

  // Terminal condition rho(T) = 1, then evidence at T if present.
  for (int x = 0; x < card; ++x) rho_r[(g - 1) * card + x] = 1.0;
  apply_evidence(g - 1);

  // The backward generator: off-diagonal transition means, diagonal
  // carrying the arithmetic exit rate and the child coupling.
  auto build_matrix = [&](std::size_t k, const std::vector<double>& psi,
                          std::vector<double>& m) {
    m.assign(card * card, 0.0);
    for (int x = 0; x < card; ++x) {
      for (int y = 0; y < card; ++y) {
        if (y != x) m[x * card + y] = coef[k].trans[x * card + y];
      }
      m[x * card + x] = -coef[k].exit_arith[x] + psi[x];
    }
  };

  std::vector<double> m_start(card * card), m_end(card * card), y(card);
  for (std::size_t k = g - 1; k-- > 0;) {
    const double h = state.grid.time(k + 1) - state.grid.time(k);
    // Integrate in s = t_{k+1} - t from the segment's right end to its left.
    build_matrix(k + 1, coef[k + 1].psi_left, m_start);
    build_matrix(k, coef[k].psi_right, m_end);
    for (int x = 0; x < card; ++x) y[x] = rho_l[(k + 1) * card + x];
    rk4_step(m_start, m_end, card, h, y);
    for (int x = 0; x < card; ++x) {
      rho_r[k * card + x] = std::max(y[x], 0.0);
    }
    normalize_by_max(rho_r, k * card, card);
    apply_evidence(k);
  }
}

void VariationalEngine::forward_core(
    int node, VariationalState& state,
    const std::vector<Coefficients>& coef) const {
  const int card = state.cards[node];
  const std::size_t g = state.grid.size();

  const auto& rho_l = state.rho_left[node];
  auto& a_l = state.alpha_left[node];
  auto& a_r = state.alpha_right[node];
  auto& q = state.q[node];
  const auto& evidence = state.evidence[node];

  // The marginal q solves dq/dt = q Omega with the rho-ratio generator of
  // the smoothed dynamics. It is integrated here in the product form
  // q = alpha rho / Z: alpha obeys the transposed backward flow
  // d alpha/dt = Omega~^T alpha, whose coefficients stay bounded no matter
  // how sharp the evidence is, and picks up the likelihood as a
  // multiplicative jump at observation times.
  auto apply_evidence = [&](std::size_t k) {
    const auto it = std::find_if(
        evidence.begin(), evidence.end(),
        [&](const auto& e) { return e.first == k; });
    for (int x = 0; x < card; ++x) a_r[k * card + x] = a_l[k * card + x];
    if (it != evidence.end()) {
      for (int x = 0; x < card; ++x) a_r[k * card + x] *= it->second[x];
    }
    normalize_by_max(a_r, k * card, card);
  };

  for (int x = 0; x < card; ++x) {
    a_l[x] = config_.initial_distribution.empty()
                 ? 1.0 / card
                 : config_.initial_distribution[node][x];
  }
  normalize_by_max(a_l, 0, card);
  apply_evidence(0);

  auto build_matrix = [&](std::size_t k, const std::vector<double>& psi,
                          std::vector<double>& m) {
    // Transpose of the backward generator.
    m.assign(card * card, 0.0);
    for (int x = 0; x < card; ++x) {
      for (int y = 0; y < card; ++y) {
        if (y != x) m[y * card + x] = coef[k].trans[x * card + y];
      }
      m[x * card + x] = -coef[k].exit_arith[x] + psi[x];
    }
  };

  std::vector<double> m_start(card * card), m_end(card * card), y(card);
  for (std::size_t k = 0; k + 1 < g; ++k) {
    const double h = state.grid.time(k + 1) - state.grid.time(k);
    build_matrix(k, coef[k].psi_right, m_start);
    build_matrix(k + 1, coef[k + 1].psi_left, m_end);
    for (int x = 0; x < card; ++x) y[x] = a_r[k * card + x];
    rk4_step(m_start, m_end, card, h, y);
    for (int x = 0; x < card; ++x) {
      if (y[x] < -1e-9) {
        throw StepSizeError(
            "negative forward message; reduce the time step (node " +
            std::to_string(node) + ", t=" +
            std::to_string(state.grid.time(k + 1)) + ")");
      }
      a_l[(k + 1) * card + x] = std::max(y[x], 0.0);
    }
    normalize_by_max(a_l, (k + 1) * card, card);
    apply_evidence(k + 1);
  }

  // Pointwise smoothed marginal (the one-sided products agree).
  for (std::size_t k = 0; k < g; ++k) {
    double z = 0.0;
    for (int x = 0; x < card; ++x) {
      q[k * card + x] = a_l[k * card + x] * rho_l[k * card + x];
      z += q[k * card + x];
    }
    for (int x = 0; x < card; ++x) q[k * card + x] /= z;
  }
}

double VariationalEngine::sweep(VariationalState& state,
                                const PosteriorRates& rates,
                                double eta) const {
  const int n = state.num_nodes;
  VariationalState snapshot;
  if (config_.schedule == EngineConfig::Schedule::Jacobi) {
    snapshot = state;
  }
  double max_change = 0.0;
  for (int i = 0; i < n; ++i) {
    std::vector<double> q_old = state.q[i];
    if (config_.schedule == EngineConfig::Schedule::Jacobi) {
      // Update against the snapshot: copy the snapshot's view of others.
      VariationalState work = snapshot;
      update_node(i, work, rates);
      state.rho_left[i] = work.rho_left[i];
      state.rho_right[i] = work.rho_right[i];
      state.q[i] = work.q[i];
    } else {
      update_node(i, state, rates);
    }
    if (eta < 1.0) {
      for (std::size_t s = 0; s < state.q[i].size(); ++s) {
        state.q[i][s] = eta * state.q[i][s] + (1.0 - eta) * q_old[s];
      }
    }
    for (std::size_t s = 0; s < state.q[i].size(); ++s) {
      max_change = std::max(max_change, std::abs(state.q[i][s] - q_old[s]));
    }
  }
  return max_change;
}

int VariationalEngine::run_smoothing(VariationalState& state,
                                     const PosteriorRates& rates,
                                     int max_sweeps) const {
  if (max_sweeps <= 0) max_sweeps = config_.max_sweeps;
  int used = 0;
  for (; used < max_sweeps; ++used) {
    const double change = sweep(state, rates, config_.damping);
    if (change < config_.sweep_tol) {
      ++used;
      break;
    }
  }
  return used;
}

MarginalStats VariationalEngine::expected_statistics(
    const VariationalState& state, const PosteriorRates& rates) const {
  MarginalStats out = MarginalStats::zeros(space_, pi_);
  double entropy_unused = 0.0;
  integrate_path(state, rates, out, entropy_unused);
  return out;
}

double VariationalEngine::entropy(const VariationalState& state,
                                  const PosteriorRates& rates) const {
  MarginalStats scratch = MarginalStats::zeros(space_, pi_);
  double h = 0.0;
  integrate_path(state, rates, scratch, h);
  return h;
}

double VariationalEngine::variational_objective(
    const MarginalStats& aggregated, double entropy_total) const {
  // Only the q-dependent parts are monitored: the Dirichlet term is
  // constant while the mixture weights are held fixed, and including it
  // would make the stopping rule depend on how the candidate family is
  // parameterized.
  double f = entropy_total;
  for (int i = 0; i < pi_.num_nodes(); ++i) {
    NodeMixtureScorer scorer(aggregated.slices[i], gprior_.alpha_for(i),
                             gprior_.beta_for(i), dprior_.c_for(i));
    f += scorer.score_stirling(pi_.nodes[i].weights).gamma_part;
  }
  return f;
}

void VariationalEngine::integrate_path(const VariationalState& state,
                                       const PosteriorRates& rates,
                                       MarginalStats& accum,
                                       double& entropy_accum) const {
  const std::size_t g = state.grid.size();

  for (int i = 0; i < state.num_nodes; ++i) {
    const auto& ctx = contexts_[i];
    const auto& npr = rates.nodes[i];
    const int card = state.cards[i];
    const auto& subsets = npr.subsets;
    const std::size_t n_subsets = subsets.size();
    const bool exact = config_.mode == EngineConfig::Mode::ExactGeometric;

    FullTables ft;
    if (exact) ft = build_full_tables(ctx.oc_cards, ctx.subset_pos, npr);

    // Greedy mode: per (target m, overlapping active source m') index
    // plan. Sources disjoint from the target factorize completely and are
    // folded into one shared table per grid point.
    struct PairPlan {
      int source = 0;
      std::vector<int> shared_pos_in_m;
      std::vector<std::size_t> shared_stride;
      std::vector<int> free_nodes;
      std::vector<std::size_t> free_stride;
      std::vector<int> free_cards;
      std::size_t free_size = 1;
    };
    std::vector<std::vector<PairPlan>> plans;
    if (!exact) {
      plans.resize(n_subsets);
      for (std::size_t m = 0; m < n_subsets; ++m) {
        for (int mp : npr.active) {
          const auto& src = subsets[mp];
          const bool overlaps = std::any_of(
              src.begin(), src.end(), [&](int p) {
                return std::find(subsets[m].begin(), subsets[m].end(), p) !=
                       subsets[m].end();
              });
          if (!overlaps) continue;
          PairPlan plan;
          plan.source = mp;
          std::size_t stride = 1;
          for (std::size_t j = 0; j < src.size(); ++j) {
            const auto it =
                std::find(subsets[m].begin(), subsets[m].end(), src[j]);
            if (it != subsets[m].end()) {
              plan.shared_pos_in_m.push_back(
                  static_cast<int>(it - subsets[m].begin()));
              plan.shared_stride.push_back(stride);
            } else {
              plan.free_nodes.push_back(src[j]);
              plan.free_stride.push_back(stride);
              plan.free_cards.push_back(npr.subset_cards[mp][j]);
              plan.free_size *= static_cast<std::size_t>(
                  npr.subset_cards[mp][j]);
            }
            stride *= static_cast<std::size_t>(npr.subset_cards[mp][j]);
          }
          plans[m].push_back(std::move(plan));
        }
      }
    }

    // Side-independent tables at one grid point.
    struct PointTables {
      std::vector<std::vector<double>> qm;  // [m][u_m]
      std::vector<std::vector<double>> big_g;  // [m][(u*card+x)*card+y]
      std::vector<double> a;                // [x*card+y]
      std::vector<double> w;                // [x*card+y]
    };

    auto compute_point = [&](std::size_t k, PointTables& pt) {
      pt.qm.assign(n_subsets, {});
      pt.big_g.assign(n_subsets, {});
      pt.a.assign(card * card, 0.0);
      pt.w.assign(card * card, 0.0);
      for (std::size_t m = 0; m < n_subsets; ++m) {
        product_table(state, subsets[m], k, pt.qm[m]);
        pt.big_g[m].assign(pt.qm[m].size() * card * card, 0.0);
      }
      if (exact) {
        std::vector<double> qfull;
        product_table(state, ctx.overcomplete, k, qfull);
        std::vector<int> digits(ctx.overcomplete.size());
        // Accumulate over the dynamic context into the in-context part of
        // each subset table; members outside the context factor out.
        std::vector<std::vector<double>> acc(n_subsets);
        for (std::size_t m = 0; m < n_subsets; ++m) {
          acc[m].assign(pt.big_g[m].size(), 0.0);
        }
        for (std::size_t u = 0; u < qfull.size(); ++u) {
          const double wq = qfull[u];
          if (wq == 0.0) continue;
          mixed_radix_decode(u, ctx.oc_cards, digits);
          for (int x = 0; x < card; ++x) {
            for (int y = 0; y < card; ++y) {
              if (y == x) continue;
              const double val =
                  wq * ft.geo[(u * card + x) * card + y];
              pt.a[x * card + y] += val;
              for (std::size_t m = 0; m < n_subsets; ++m) {
                const auto& plan = ctx.targets[m];
                std::size_t um = 0;
                for (std::size_t j = 0; j < plan.in_dyn_pos.size(); ++j) {
                  um += plan.in_stride[j] * static_cast<std::size_t>(
                                                digits[plan.in_dyn_pos[j]]);
                }
                acc[m][(um * card + x) * card + y] += val;
              }
            }
          }
        }
        for (std::size_t m = 0; m < n_subsets; ++m) {
          const auto& plan = ctx.targets[m];
          if (plan.out_nodes.empty()) {
            pt.big_g[m] = std::move(acc[m]);
            continue;
          }
          std::vector<int> din(plan.in_cards.size());
          std::vector<int> dout(plan.out_cards.size());
          for (std::size_t uo = 0; uo < plan.out_size; ++uo) {
            mixed_radix_decode(uo, plan.out_cards, dout);
            double factor = 1.0;
            std::size_t offset = 0;
            for (std::size_t j = 0; j < plan.out_nodes.size(); ++j) {
              const int l = plan.out_nodes[j];
              factor *= std::max(
                  state.q[l][k * state.cards[l] + dout[j]], 0.0);
              offset += plan.out_stride[j] * static_cast<std::size_t>(dout[j]);
            }
            for (std::size_t ui = 0; ui < plan.in_size; ++ui) {
              mixed_radix_decode(ui, plan.in_cards, din);
              std::size_t base = 0;
              for (std::size_t j = 0; j < plan.in_stride.size(); ++j) {
                base += plan.in_stride[j] * static_cast<std::size_t>(din[j]);
              }
              for (int x = 0; x < card; ++x) {
                for (int y = 0; y < card; ++y) {
                  if (y != x) {
                    pt.big_g[m][((base + offset) * card + x) * card + y] =
                        factor * acc[m][(base * card + x) * card + y];
                  }
                }
              }
            }
          }
        }
      } else {
        // Unconditional arithmetic means per active source, and their
        // weight-mixed total.
        std::vector<std::vector<double>> uncond(n_subsets);
        for (int mp : npr.active) {
          auto& un = uncond[mp];
          un.assign(card * card, 0.0);
          const auto& r = npr.rhat[mp];
          for (std::size_t u = 0; u < pt.qm[mp].size(); ++u) {
            const double wq = pt.qm[mp][u];
            if (wq == 0.0) continue;
            for (int x = 0; x < card; ++x) {
              for (int y = 0; y < card; ++y) {
                if (y != x) {
                  un[x * card + y] += wq * r[(u * card + x) * card + y];
                }
              }
            }
          }
          const double wpi = npr.weights[mp];
          for (int e = 0; e < card * card; ++e) {
            pt.a[e] += wpi * un[e];
          }
        }
        // Targets: the disjoint sources enter through the mixed total;
        // overlapping sources contribute conditional corrections.
        std::vector<int> dm;
        std::vector<int> df;
        std::vector<double> cond(card * card);
        for (std::size_t m = 0; m < n_subsets; ++m) {
          const auto& mcards = npr.subset_cards[m];
          const std::size_t nconf = pt.qm[m].size();
          dm.assign(mcards.size(), 0);
          for (std::size_t um = 0; um < nconf; ++um) {
            mixed_radix_decode(um, mcards, dm);
            const double qum = pt.qm[m][um];
            if (qum == 0.0) continue;
            auto* gm = &pt.big_g[m][um * card * card];
            for (int e = 0; e < card * card; ++e) gm[e] = qum * pt.a[e];
            for (const auto& plan : plans[m]) {
              const auto& r = npr.rhat[plan.source];
              const double wpi = npr.weights[plan.source];
              std::size_t base = 0;
              for (std::size_t j = 0; j < plan.shared_pos_in_m.size(); ++j) {
                base += plan.shared_stride[j] *
                        static_cast<std::size_t>(dm[plan.shared_pos_in_m[j]]);
              }
              std::fill(cond.begin(), cond.end(), 0.0);
              df.assign(plan.free_cards.size(), 0);
              for (std::size_t uf = 0; uf < plan.free_size; ++uf) {
                mixed_radix_decode(uf, plan.free_cards, df);
                double wfree = 1.0;
                for (std::size_t j = 0; j < plan.free_nodes.size(); ++j) {
                  const int l = plan.free_nodes[j];
                  wfree *= std::max(
                      state.q[l][k * state.cards[l] + df[j]], 0.0);
                }
                if (wfree == 0.0) continue;
                std::size_t idx = base;
                for (std::size_t j = 0; j < plan.free_stride.size(); ++j) {
                  idx += plan.free_stride[j] * static_cast<std::size_t>(df[j]);
                }
                const auto* rr = &r[idx * card * card];
                for (int e = 0; e < card * card; ++e) {
                  cond[e] += wfree * rr[e];
                }
              }
              const auto& un = uncond[plan.source];
              const double scale = wpi * qum;
              for (int x = 0; x < card; ++x) {
                for (int y = 0; y < card; ++y) {
                  if (y != x) {
                    const int e = x * card + y;
                    gm[e] += scale * (cond[e] - un[e]);
                  }
                }
              }
            }
          }
        }
      }
      // Entropy cross term: sum over active components of
      // pi_m * ln rhat_m * G_m.
      for (int mp : npr.active) {
        const auto& lr = npr.log_rhat[mp];
        const double wpi = npr.weights[mp];
        const auto& gm = pt.big_g[mp];
        const std::size_t nconf = pt.qm[mp].size();
        for (std::size_t u = 0; u < nconf; ++u) {
          for (int x = 0; x < card; ++x) {
            for (int y = 0; y < card; ++y) {
              if (y != x) {
                const std::size_t idx = (u * card + x) * card + y;
                pt.w[x * card + y] += wpi * lr[idx] * gm[idx];
              }
            }
          }
        }
      }
    };

    auto side_contribs = [&](std::size_t k, const PointTables& pt,
                             const std::vector<double>& rho,
                             const std::vector<double>& alpha, double& h_out,
                             std::vector<std::vector<double>>& m_out) {
      // Entropy integrand and per-subset M integrands at one side, in the
      // bounded product form q(x) rho(y)/rho(x) = alpha(x) rho(y) / Z.
      h_out = 0.0;
      m_out.assign(n_subsets, {});
      for (std::size_t m = 0; m < n_subsets; ++m) {
        m_out[m].assign(pt.big_g[m].size(), 0.0);
      }
      double z = 0.0;
      for (int x = 0; x < card; ++x) {
        z += alpha[k * card + x] * rho[k * card + x];
      }
      for (int x = 0; x < card; ++x) {
        const double ax = alpha[k * card + x];
        if (ax == 0.0) continue;
        const double rx = rho[k * card + x];
        for (int y = 0; y < card; ++y) {
          if (y == x) continue;
          const double flux = ax * rho[k * card + y] / z;
          if (flux == 0.0) continue;
          const double lratio =
              std::log(rho[k * card + y]) - std::log(rx);
          h_out += flux * (pt.a[x * card + y] * (1.0 - lratio) -
                           pt.w[x * card + y]);
          for (std::size_t m = 0; m < n_subsets; ++m) {
            const auto& gm = pt.big_g[m];
            auto& mm = m_out[m];
            const std::size_t nconf = pt.qm[m].size();
            for (std::size_t u = 0; u < nconf; ++u) {
              mm[(u * card + x) * card + y] =
                  flux * gm[(u * card + x) * card + y];
            }
          }
        }
      }
    };

    PointTables cur, nxt;
    compute_point(0, cur);
    double h_cur;
    std::vector<std::vector<double>> m_cur, m_nxt;
    side_contribs(0, cur, state.rho_right[i], state.alpha_right[i], h_cur,
                  m_cur);
    double h_nxt;

    for (std::size_t k = 0; k + 1 < g; ++k) {
      const double h = state.grid.time(k + 1) - state.grid.time(k);
      compute_point(k + 1, nxt);
      side_contribs(k + 1, nxt, state.rho_left[i], state.alpha_left[i],
                    h_nxt, m_nxt);

      // Dwell times: side-independent integrand q_i(x) q^{u_m}.
      for (std::size_t m = 0; m < n_subsets; ++m) {
        auto& slice = accum.slices[i][m];
        const std::size_t nconf = cur.qm[m].size();
        for (std::size_t u = 0; u < nconf; ++u) {
          for (int x = 0; x < card; ++x) {
            const double f0 =
                std::max(state.q[i][k * card + x], 0.0) * cur.qm[m][u];
            const double f1 =
                std::max(state.q[i][(k + 1) * card + x], 0.0) *
                nxt.qm[m][u];
            slice.T(u, x) += 0.5 * h * (f0 + f1);
            for (int y = 0; y < card; ++y) {
              if (y != x) {
                slice.M(u, x, y) +=
                    0.5 * h *
                    (m_cur[m][(u * card + x) * card + y] +
                     m_nxt[m][(u * card + x) * card + y]);
              }
            }
          }
        }
      }
      entropy_accum += 0.5 * h * (h_cur + h_nxt);

      // Roll to the next segment: its left endpoint uses the right-side
      // messages at k+1.
      cur = std::move(nxt);
      side_contribs(k + 1, cur, state.rho_right[i], state.alpha_right[i],
                    h_cur, m_cur);
    }
  }
}

EngineResult VariationalEngine::run(
    const std::vector<ObservationSet>& obs_sets) const {
  EngineResult result;
  result.estats = MarginalStats::zeros(space_, pi_);
  auto& diag = result.diagnostics;

  MarginalStats estats = MarginalStats::zeros(space_, pi_);
  std::vector<VariationalState> states;
  double f_prev = 0.0;
  bool have_prev = false;
  double eta = config_.damping;
  int osc_count = 0;
  double prev_delta = 0.0;

  for (int outer = 0; outer < config_.max_outer; ++outer) {
    const auto rates =
        posterior_rates(estats, pi_, gprior_, config_.active_weight_floor);

    // (Re)build states when the stability rule asks for a finer grid.
    const double dt_needed =
        config_.dt_stability / std::max(rates.max_exit_bound, 1e-9);
    if (states.empty()) {
      states.reserve(obs_sets.size());
      for (const auto& obs : obs_sets) states.push_back(make_state(obs, rates));
    } else {
      for (std::size_t t = 0; t < states.size(); ++t) {
        if (states[t].grid.max_step() > dt_needed * (1.0 + 1e-9)) {
          states[t] = make_state(obs_sets[t], rates);
        }
      }
    }

    // Inner fixed point of the coupled sweeps.
    for (int s = 0; s < config_.max_sweeps_per_stage; ++s) {
      if (diag.total_sweeps >= config_.max_sweeps) break;
      double change = 0.0;
      for (auto& st : states) {
        change = std::max(change, sweep(st, rates, eta));
      }
      ++diag.total_sweeps;
      if (change < config_.sweep_tol) break;
    }

    // Refresh expected statistics and the objective monitor.
    MarginalStats fresh = MarginalStats::zeros(space_, pi_);
    double h_total = 0.0;
    for (const auto& st : states) {
      double h = 0.0;
      integrate_path(st, rates, fresh, h);
      h_total += h;
    }
    estats = std::move(fresh);
    result.entropy = h_total;
    const double f = variational_objective(estats, h_total);
    diag.objective_trace.push_back(f);
    ++diag.outer_iterations;

    if (have_prev) {
      const double delta = f - f_prev;
      diag.final_delta_f = std::abs(delta) / std::max(1.0, std::abs(f_prev));
      if (prev_delta * delta < 0.0) {
        if (++osc_count >= 3 && eta > 0.5) {
          eta = 0.5;
          diag.damped = true;
        }
      }
      prev_delta = delta;
      if (diag.final_delta_f < config_.objective_tol) {
        diag.converged = true;
        f_prev = f;
        break;
      }
    }
    f_prev = f;
    have_prev = true;
    if (diag.total_sweeps >= config_.max_sweeps) break;
  }

  diag.final_objective = f_prev;
  result.estats = std::move(estats);
  return result;
}

}  // namespace ctbn
