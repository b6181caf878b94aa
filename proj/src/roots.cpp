#include "odba/roots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <optional>
#include <random>
#include <thread>

namespace odba {

namespace {

double max_scaled(const ScaledResidual& sr) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < sr.value.size(); ++j) {
    worst = std::max(worst, std::abs(sr.value(j)) / sr.scale(j));
  }
  return worst;
}

bool finite(const Eigen::VectorXcd& v) { return v.allFinite(); }

int resolve_threads(int requested, int starts) {
  int t = requested;
  if (t <= 0) {
    if (const char* env = std::getenv("ODBA_THREADS")) {
      t = std::atoi(env);
    }
  }
  if (t <= 0) t = static_cast<int>(std::thread::hardware_concurrency());
  if (t <= 0) t = 1;
  return std::max(1, std::min(t, starts));
}

// reflection representative with a tolerance tie so nearly-imaginary roots
// canonicalize consistently across converged duplicates
Complex reflect_rep(Complex l, Complex shift) {
  const Complex w = 2.0 * l + shift;
  const double tie = 1e-9 * (1.0 + std::abs(w));
  if (w.real() > tie) return l;
  if (w.real() < -tie) return -l - shift;
  return w.imag() >= 0 ? l : -l - shift;
}

}  // namespace

BetheRoots canonicalize(const BetheRoots& r) {
  BetheRoots out = r;
  const Complex shift = r.mode == RootMode::kChain ? r.eta : Complex(0, 0);
  for (Complex& l : out.lambda) l = reflect_rep(l, shift);
  std::sort(out.lambda.begin(), out.lambda.end(),
            [](const Complex& a, const Complex& b) {
              if (a.real() != b.real()) return a.real() < b.real();
              return a.imag() < b.imag();
            });
  out.canonical = true;
  return out;
}

BaeProblem make_chain_problem(const TQContext& ctx, int num_roots) {
  if (num_roots < 0 || num_roots > ctx.spec.num_sites) {
    throw std::invalid_argument("make_chain_problem: bad root count");
  }
  BaeProblem p;
  p.num_roots = num_roots;
  p.mode = RootMode::kChain;
  p.eta = ctx.spec.eta;
  p.seed_anchors = ctx.spec.theta;
  const double kappa = std::abs(ctx.c());
  p.far_scale = kappa < 1e-12
                    ? 0.0
                    : std::sqrt(8.0 / std::max(kappa, 0.05)) *
                          std::max(1.0, ctx.spec.max_theta_mag());
  const ChainSpec spec = ctx.spec;
  p.residual = [ctx](const Eigen::VectorXcd& x) {
    return chain_bae_scaled(x, ctx);
  };
  p.colliding = [spec](const Eigen::VectorXcd& x) {
    std::vector<Complex> l(x.data(), x.data() + x.size());
    return chain_roots_collide(l, spec);
  };
  return p;
}

BaeProblem make_gaudin_problem(const GaudinBoundary& g,
                               const std::vector<Complex>& theta,
                               int num_roots) {
  if (num_roots < 0 || num_roots > static_cast<int>(theta.size())) {
    throw std::invalid_argument("make_gaudin_problem: bad root count");
  }
  BaeProblem p;
  p.num_roots = num_roots;
  p.mode = RootMode::kGaudin;
  p.eta = Complex(0, 0);
  p.seed_anchors = theta;
  double tmax = 0.0;
  for (const Complex& t : theta) tmax = std::max(tmax, std::abs(t));
  const double kappa = g.h21.squaredNorm();
  p.far_scale = kappa < 1e-12 ? 0.0
                              : std::sqrt(8.0 / std::max(kappa, 0.05)) *
                                    std::max(1.0, tmax);
  const Complex xi = g.xi;
  p.residual = [g, theta](const Eigen::VectorXcd& x) {
    return gaudin_bae_scaled(x, g, theta);
  };
  p.colliding = [theta, xi](const Eigen::VectorXcd& x) {
    std::vector<Complex> l(x.data(), x.data() + x.size());
    return gaudin_roots_collide(l, theta, xi);
  };
  return p;
}

BaeProblem make_plain_problem(
    int num_roots, std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)> f) {
  BaeProblem p;
  p.num_roots = num_roots;
  p.mode = RootMode::kGaudin;
  p.residual = [f = std::move(f)](const Eigen::VectorXcd& x) {
    ScaledResidual sr;
    sr.value = f(x);
    sr.scale = Eigen::VectorXd::Ones(sr.value.size());
    return sr;
  };
  return p;
}

NewtonResult newton(const BaeProblem& p, const Eigen::VectorXcd& x0,
                    const SolveOptions& opts) {
  NewtonResult res;
  if (x0.size() != p.num_roots) {
    throw std::invalid_argument("newton: seed size != num_roots");
  }
  if (p.colliding && p.colliding(x0)) {
    res.status = SolveStatus::kCollision;
    return res;
  }

  const int n = p.num_roots;
  Eigen::VectorXcd x = x0;
  ScaledResidual sr = p.residual(x);
  if (!finite(sr.value)) {
    res.status = SolveStatus::kCollision;
    return res;
  }

  auto finish = [&](SolveStatus st) {
    res.status = st;
    return res;
  };

  for (int it = 0; it < opts.max_iter; ++it) {
    res.iterations = it;
    const double rnorm = max_scaled(sr);
    if (rnorm <= opts.residual_tol) {
      if (p.colliding && p.colliding(x)) return finish(SolveStatus::kCollision);
      BetheRoots roots;
      roots.lambda.assign(x.data(), x.data() + n);
      roots.mode = p.mode;
      roots.eta = p.eta;
      roots.residual_norm = rnorm;
      res.roots = canonicalize(roots);
      return finish(SolveStatus::kConverged);
    }

    // central-difference Jacobian; the residual is holomorphic away from
    // poles so a real-direction step gives the complex derivative
    Eigen::MatrixXcd jac(n, n);
    for (int k = 0; k < n; ++k) {
      const double h = 1e-7 * std::max(1.0, std::abs(x(k)));
      Eigen::VectorXcd xp = x, xm = x;
      xp(k) += h;
      xm(k) -= h;
      jac.col(k) = (p.residual(xp).value - p.residual(xm).value) / (2.0 * h);
    }
    if (!jac.allFinite()) return finish(SolveStatus::kSingularJacobian);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(jac);
    if (qr.rank() < n) return finish(SolveStatus::kSingularJacobian);
    const Eigen::VectorXcd dx = qr.solve(-sr.value);
    if (!finite(dx)) return finish(SolveStatus::kSingularJacobian);

    double alpha = 1.0;
    bool accepted = false;
    const double base = sr.value.norm();
    for (int bt = 0; bt < opts.max_backtracks; ++bt) {
      const Eigen::VectorXcd xn = x + alpha * dx;
      const ScaledResidual srn = p.residual(xn);
      if (finite(srn.value) && srn.value.norm() < base) {
        x = xn;
        sr = srn;
        accepted = true;
        break;
      }
      alpha *= opts.damping;
    }
    if (!accepted) return finish(SolveStatus::kStalled);
    if ((alpha * dx).lpNorm<Eigen::Infinity>() <=
        opts.step_tol * (1.0 + x.lpNorm<Eigen::Infinity>())) {
      // stagnated; only the residual test below can still rescue it
      if (max_scaled(sr) > opts.residual_tol) {
        return finish(SolveStatus::kStalled);
      }
    }
  }
  // one last residual check at the final iterate
  if (max_scaled(sr) <= opts.residual_tol &&
      !(p.colliding && p.colliding(x))) {
    BetheRoots roots;
    roots.lambda.assign(x.data(), x.data() + n);
    roots.mode = p.mode;
    roots.eta = p.eta;
    roots.residual_norm = max_scaled(sr);
    res.roots = canonicalize(roots);
    return finish(SolveStatus::kConverged);
  }
  return finish(SolveStatus::kMaxIterations);
}

std::vector<BetheRoots> enumerate_roots(
    const BaeProblem& p, const SolveOptions& opts, int stop_when,
    const std::vector<Eigen::VectorXcd>& warm_starts) {
  const int m = p.num_roots;
  if (m == 0) {
    // the empty root set is the unique solution of the 0-dimensional system
    BetheRoots r;
    r.mode = p.mode;
    r.eta = p.eta;
    r.residual_norm = 0.0;
    r.canonical = true;
    return {r};
  }

  const int starts =
      opts.starts > 0 ? opts.starts : 64 * (1 << std::min(m, 16));
  double box = opts.box;
  if (box <= 0.0) {
    double tmax = 0.0;
    for (const Complex& a : p.seed_anchors) tmax = std::max(tmax, std::abs(a));
    box = tmax > 0.0 ? 2.0 * tmax : 2.0;
  }

  // all seeds drawn up front from one stream: reproducible and independent
  // of the worker layout
  std::vector<Eigen::VectorXcd> seeds;
  seeds.reserve(warm_starts.size() + static_cast<size_t>(starts));
  for (const auto& w : warm_starts) {
    if (w.size() == m) seeds.push_back(w);
  }
  {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n_anchor = static_cast<int>(p.seed_anchors.size());
    auto disk = [&](double radius) {
      const double r = radius * std::sqrt(unit(rng));
      const double phi = 2.0 * M_PI * unit(rng);
      return Complex(r * std::cos(phi), r * std::sin(phi));
    };
    auto anchored = [&]() {
      if (n_anchor == 0) return disk(box);
      const int pick = std::min(static_cast<int>(unit(rng) * n_anchor),
                                n_anchor - 1);
      const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
      const Complex base = sign * p.seed_anchors[pick];
      return base * (1.0 + 0.25 * Complex(gauss(rng), gauss(rng))) +
             0.05 * Complex(gauss(rng), gauss(rng));
    };
    for (int s = 0; s < starts; ++s) {
      Eigen::VectorXcd x(m);
      const int mode = s % 3;
      if (mode == 0 || (mode == 2 && p.far_scale <= 0.0)) {
        for (int k = 0; k < m; ++k) x(k) = disk(box);
      } else if (mode == 1) {
        for (int k = 0; k < m; ++k) x(k) = anchored();
      } else {
        for (int k = 0; k < m; ++k) x(k) = anchored();
        const int far = 1 + std::min(static_cast<int>(unit(rng) * m), m - 1);
        std::vector<int> idx(m);
        for (int k = 0; k < m; ++k) idx[k] = k;
        std::shuffle(idx.begin(), idx.end(), rng);
        for (int k = 0; k < far; ++k) {
          const double r = p.far_scale * std::exp(1.4 * (unit(rng) - 0.5));
          const double phi = 2.0 * M_PI * unit(rng);
          x(idx[k]) = Complex(r * std::cos(phi), r * std::sin(phi));
        }
      }
      seeds.push_back(std::move(x));
    }
  }

  const int total = static_cast<int>(seeds.size());
  const int threads = resolve_threads(opts.threads, total);

  std::vector<std::optional<BetheRoots>> outcomes(total);
  auto run_range = [&](int lo, int hi) {
    for (int s = lo; s < hi; ++s) {
      NewtonResult nr = newton(p, seeds[s], opts);
      if (nr.status == SolveStatus::kConverged) outcomes[s] = nr.roots;
    }
  };

  std::vector<BetheRoots> found;
  auto same = [&](const BetheRoots& a, const BetheRoots& b) {
    double scale = 1.0;
    for (const Complex& l : a.lambda) scale = std::max(scale, std::abs(l));
    for (size_t i = 0; i < a.lambda.size(); ++i) {
      if (std::abs(a.lambda[i] - b.lambda[i]) > opts.dedup_tol * scale) {
        return false;
      }
    }
    return true;
  };
  auto absorb = [&](int lo, int hi) {
    for (int s = lo; s < hi; ++s) {
      if (!outcomes[s]) continue;
      const BetheRoots& cand = *outcomes[s];
      bool dup = false;
      for (const BetheRoots& g : found) {
        if (same(cand, g)) {
          dup = true;
          break;
        }
      }
      if (!dup) {
        found.push_back(cand);
        if (stop_when > 0 && static_cast<int>(found.size()) >= stop_when) {
          return true;
        }
      }
    }
    return false;
  };

  // chunked processing keeps stop_when effective while workers stay busy
  const int chunk = std::max(threads, std::min(total, 8 * threads));
  for (int base = 0; base < total; base += chunk) {
    const int hi = std::min(total, base + chunk);
    if (threads == 1) {
      run_range(base, hi);
    } else {
      std::vector<std::future<void>> futs;
      const int per = (hi - base + threads - 1) / threads;
      for (int t = 0; t < threads; ++t) {
        const int lo = base + t * per;
        const int up = std::min(hi, lo + per);
        if (lo >= up) break;
        futs.push_back(std::async(std::launch::async, run_range, lo, up));
      }
      for (auto& f : futs) f.get();
    }
    if (absorb(base, hi)) break;
  }

  // merged set is ordered by canonical key, independent of discovery order
  std::sort(found.begin(), found.end(),
            [](const BetheRoots& a, const BetheRoots& b) {
              for (size_t i = 0; i < a.lambda.size(); ++i) {
                const Complex& x = a.lambda[i];
                const Complex& y = b.lambda[i];
                if (x.real() != y.real()) return x.real() < y.real();
                if (x.imag() != y.imag()) return x.imag() < y.imag();
              }
              return false;
            });
  return found;
}

}  // namespace odba
