#include "meanfield/solver.hpp"

#include "meanfield/bubble.hpp"
#include "meanfield/clamped.hpp"
#include "meanfield/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace meanfield {

namespace {

// f_i = rho e^{u_i}/Z on rows < n-1 (zero on the boundary row),
// c_j = w_j e^{u_j}/Z, so that d f_i / d u_j = f_i delta_ij - f_i c_j.
struct Density {
  std::vector<double> f;
  std::vector<double> c;
};

Density density(const RadialField& u, double rho) {
  const std::size_t n = u.size();
  const auto w = u.grid().weights();
  const double m = *std::max_element(u.values().begin(), u.values().end());
  Density d{std::vector<double>(n), std::vector<double>(n)};
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d.c[i] = w[i] * std::exp(u[i] - m);
    z += d.c[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    d.f[i] = i + 1 < n ? rho * std::exp(u[i] - m) / z : 0.0;
    d.c[i] /= z;
  }
  return d;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::vector<double> residual_values(const ClampedBilaplacian& op, const RadialField& u, double rho) {
  const auto d = density(u, rho);
  auto v = op.system().solve({}, d.f, 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = u[i] - v[i];
  return v;
}

void check_rho(double rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho))
    throw InvalidConfiguration("rho must be finite and >= 0, got " + std::to_string(rho));
}

// The discrete clamped space fixes u(1) = 0; u'(1) = 0 is built into the operator.
void check_init(const RadialField& init) {
  for (double v : init.values())
    if (!std::isfinite(v)) throw InvalidConfiguration("initial field has a non-finite value");
  const double edge = init[init.size() - 1];
  if (std::abs(edge) > 1e-10)
    throw InvalidConfiguration("initial field must vanish at r = 1, got u(1) = " + std::to_string(edge));
}

double energy_or_nan(const RadialField& u, double rho) {
  try {
    return j_energy(u, rho);
  } catch (const RangeError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

} // namespace

RadialField euler_lagrange_residual(const RadialField& u, double rho) {
  check_rho(rho);
  ClampedBilaplacian op(u.grid_ptr());
  return RadialField(u.grid_ptr(), residual_values(op, u, rho));
}

SolveReport evaluate_solution(const RadialField& u, double rho) {
  check_rho(rho);
  SolveReport rep{rho, u, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0, false, {}, {}};
  const std::size_t n = u.size();
  const auto w = u.grid().weights();
  rep.max_u = *std::max_element(u.values().begin(), u.values().end());
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) z += w[i] * std::exp(u[i] - rep.max_u);
  // log(int e^u / rho), computed with the max factored out
  rep.alpha = rho > 0.0 ? rep.max_u + std::log(z) - std::log(rho) : std::numeric_limits<double>::infinity();
  rep.mu = std::exp(-(rep.max_u - rep.alpha) / 4.0);
  rep.energy = energy_or_nan(u, rho);

  ClampedBilaplacian op(u.grid_ptr());
  rep.residual = max_abs(residual_values(op, u, rho));
  const auto applied = op.apply(u);
  const auto d = density(u, rho);
  for (std::size_t i = 0; i + 1 < n; ++i)
    rep.raw_residual = std::max(rep.raw_residual, std::abs(applied[i] - d.f[i]));
  return rep;
}

SolveReport solve_newton(double rho, const RadialField& init, const NewtonOptions& opt) {
  check_rho(rho);
  if (!(opt.tol > 0.0) || opt.max_iter < 1) throw InvalidConfiguration("newton needs tol > 0 and max_iter >= 1");
  check_init(init);
  const GridPtr grid = init.grid_ptr();
  const std::size_t n = grid->size();
  ClampedBilaplacian op(grid);

  RadialField u = init;
  auto G = residual_values(op, u, rho);
  double res = max_abs(G);
  std::vector<IterationLog> log{{0, res, energy_or_nan(u, rho), 0.0}};
  std::string message;
  int it = 0;
  while (res > opt.tol && it < opt.max_iter) {
    // (A - D) y = A G, written in mixed form with z = L(y - G):
    //   z - L y = -L G,   L z - f y + f (c.y) = 0,   y_{n-1} = G_{n-1}.
    const auto d = density(u, rho);
    MixedSystem sys(*grid, d.f);
    const auto lg = clamped_laplacian(RadialField(grid, G));
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = -lg[i];
    const auto y = sys.solve(s, {}, G[n - 1], d.f, d.c);

    bool accepted = false;
    double t = 1.0;
    for (int k = 0; k <= opt.max_halvings; ++k, t *= 0.5) {
      std::vector<double> trial(n);
      for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] - t * y[i];
      bool finite = true;
      for (double v : trial) finite = finite && std::isfinite(v);
      if (!finite) continue;
      RadialField cand(grid, std::move(trial));
      auto Gc = residual_values(op, cand, rho);
      const double rc = max_abs(Gc);
      if (rc < res) {
        u = std::move(cand);
        G = std::move(Gc);
        res = rc;
        accepted = true;
        break;
      }
    }
    ++it;
    if (!accepted) {
      message = "no damping factor down to 2^-" + std::to_string(opt.max_halvings) + " reduced the residual";
      break;
    }
    log.push_back({it, res, energy_or_nan(u, rho), t});
  }

  SolveReport rep = evaluate_solution(u, rho);
  rep.iterations = it;
  rep.converged = rep.residual <= opt.tol;
  if (!rep.converged && message.empty())
    message = "residual " + std::to_string(res) + " above tolerance after " + std::to_string(it) + " iterations";
  rep.message = rep.converged ? "converged" : message;
  rep.log = std::move(log);
  return rep;
}

SolveReport minimize(double rho, const RadialField& init, const MinimizeOptions& opt) {
  if (!(rho > 0.0 && rho < kCriticalMass))
    throw InvalidConfiguration("minimize needs 0 < rho < 64 pi^2, got " + std::to_string(rho));
  if (!(opt.tol > 0.0) || opt.max_iter < 1) throw InvalidConfiguration("minimize needs tol > 0 and max_iter >= 1");
  check_init(init);
  const GridPtr grid = init.grid_ptr();
  const std::size_t n = grid->size();
  const auto w = grid->weights();
  ClampedBilaplacian op(grid);

  RadialField u = init;
  auto G = residual_values(op, u, rho);
  double res = max_abs(G);
  double energy = j_energy(u, rho);
  std::vector<IterationLog> log{{0, res, energy, 0.0}};
  std::string message;
  double t = 1.0;
  int it = 0;
  while (res > opt.tol && it < opt.max_iter) {
    // G is the gradient of J for the inner product sum w (L a)(L b); the
    // energy change along -tG is evaluated without cancellation.
    const RadialField g(grid, G);
    const auto lu = clamped_laplacian(u);
    const auto lg = clamped_laplacian(g);
    const double m = *std::max_element(u.values().begin(), u.values().end());
    double cross = 0.0, gnorm2 = 0.0, z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cross += w[i] * lu[i] * lg[i];
      gnorm2 += w[i] * lg[i] * lg[i];
      z += w[i] * std::exp(u[i] - m);
    }
    auto delta = [&](double step) {
      double dz = 0.0;
      for (std::size_t i = 0; i < n; ++i) dz += w[i] * std::exp(u[i] - m) * std::expm1(-step * G[i]);
      return -step * cross + 0.5 * step * step * gnorm2 - rho * std::log1p(dz / z);
    };
    double dE = delta(t);
    while (!(dE <= -opt.armijo * t * gnorm2) && t > 1e-12) {
      t *= 0.5;
      dE = delta(t);
    }
    ++it;
    if (t <= 1e-12) {
      message = "line search failed";
      break;
    }
    std::vector<double> next(n);
    for (std::size_t i = 0; i < n; ++i) next[i] = u[i] - t * G[i];
    u = RadialField(grid, std::move(next));
    energy += dE;
    G = residual_values(op, u, rho);
    res = max_abs(G);
    log.push_back({it, res, energy, t});
    // t = 1 is the fixed-point step; longer steps leave the stiff modes undamped
    t = std::min(2.0 * t, 1.0);
  }

  SolveReport rep = evaluate_solution(u, rho);
  rep.iterations = it;
  rep.converged = rep.residual <= opt.tol;
  if (!rep.converged && message.empty())
    message = "residual " + std::to_string(res) + " above tolerance after " + std::to_string(it) + " iterations";
  rep.message = rep.converged ? "converged" : message;
  rep.log = std::move(log);
  return rep;
}

const char* to_string(ContinuationStatus s) {
  switch (s) {
  case ContinuationStatus::ReachedTarget: return "reached_target";
  case ContinuationStatus::BlowUp: return "blow_up";
  case ContinuationStatus::StepUnderflow: return "step_underflow";
  }
  return "unknown";
}

ContinuationReport continuation(GridPtr grid, double rho_start, double rho_end, int steps,
                                const ContinuationOptions& opt) {
  if (!(rho_start > 0.0) || !(rho_start < rho_end) || !(rho_end <= kCriticalMass))
    throw InvalidConfiguration("continuation needs 0 < rho_start < rho_end <= 64 pi^2");
  if (steps < 1) throw InvalidConfiguration("continuation needs steps >= 1");
  const NewtonOptions nopt{opt.tol, opt.max_iter};
  const double nominal = (rho_end - rho_start) / steps;
  const double min_step = std::ldexp(nominal, -opt.max_halvings);

  ContinuationReport out;
  auto record = [&](const SolveReport& r) {
    out.entries.push_back({r.rho, r.energy, r.max_u, r.mu, r.converged, r.iterations});
  };
  auto blown = [&](const SolveReport& r) { return r.max_u > opt.blowup_max_u || r.mu < opt.blowup_mu; };

  auto first = solve_newton(rho_start, RadialField::zeros(grid), nopt);
  ++out.solves;
  record(first);
  if (!first.converged) {
    out.status = ContinuationStatus::StepUnderflow;
    return out;
  }
  if (blown(first)) {
    out.status = ContinuationStatus::BlowUp;
    out.last_field = first.field;
    return out;
  }
  RadialField u = first.field;
  double rho = rho_start;
  double step = nominal;
  while (rho < rho_end) {
    double next = rho + step;
    if (next > rho_end || rho_end - next < 1e-12 * rho_end) next = rho_end;
    auto r = solve_newton(next, u, nopt);
    ++out.solves;
    if (r.converged) {
      record(r);
      u = r.field;
      rho = next;
      if (blown(r)) {
        out.status = ContinuationStatus::BlowUp;
        out.last_field = u;
        return out;
      }
      step = std::min(2.0 * step, nominal);
      continue;
    }
    step *= 0.5;
    if (step < min_step) {
      record(r);
      out.status = ContinuationStatus::StepUnderflow;
      out.last_field = u;
      return out;
    }
  }
  out.status = ContinuationStatus::ReachedTarget;
  out.last_field = u;
  return out;
}

} // namespace meanfield
