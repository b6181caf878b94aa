#include "odba/tq_ansatz.hpp"

#include <cmath>

namespace odba {

namespace {
constexpr double kTiny = 1e-300;

double dist(Complex a, Complex b) { return std::abs(a - b); }
}  // namespace

// ----------------------------------- roots ----------------------------------

bool chain_roots_collide(const std::vector<Complex>& lambda,
                         const ChainSpec& spec, double tol) {
  const Complex eta = spec.eta;
  for (size_t i = 0; i < lambda.size(); ++i) {
    const Complex l = lambda[i];
    if (std::abs(l) < tol || dist(l, -eta) < tol || dist(l, -eta / 2.0) < tol) {
      return true;
    }
    for (const Complex& t : spec.theta) {
      if (dist(l, t) < tol || dist(l, -t) < tol || dist(l, t - eta) < tol ||
          dist(l, -t - eta) < tol) {
        return true;
      }
    }
    for (size_t k = i + 1; k < lambda.size(); ++k) {
      if (dist(l, lambda[k]) < tol || dist(l, -lambda[k] - eta) < tol) {
        return true;
      }
    }
  }
  return false;
}

bool gaudin_roots_collide(const std::vector<Complex>& lambda,
                          const std::vector<Complex>& theta, Complex xi,
                          double tol) {
  for (size_t i = 0; i < lambda.size(); ++i) {
    const Complex l = lambda[i];
    if (std::abs(l) < tol || dist(l, xi) < tol || dist(l, -xi) < tol) {
      return true;
    }
    for (const Complex& t : theta) {
      if (dist(l, t) < tol || dist(l, -t) < tol) return true;
    }
    for (size_t k = i + 1; k < lambda.size(); ++k) {
      if (dist(l, lambda[k]) < tol || dist(l, -lambda[k]) < tol) return true;
    }
  }
  return false;
}

// ------------------------------- T-Q machinery ------------------------------

TQContext::TQContext(ChainSpec spec_in, OpenBoundary boundary_in)
    : spec(std::move(spec_in)), boundary(std::move(boundary_in)) {
  if (std::abs(spec.eta) < 1e-12) {
    throw std::invalid_argument("TQContext: chain mode requires eta != 0");
  }
}

Complex TQContext::a_bar(Complex u) const {
  const Complex eta = spec.eta;
  Complex out = (2.0 * u + 2.0 * eta) / (2.0 * u + eta) * (u + boundary.xi) *
                (u + boundary.xibar);
  for (const Complex& t : spec.theta) {
    out *= (u + t + eta) * (u - t + eta);
  }
  return out;
}

Complex TQContext::d_bar(Complex u) const {
  const Complex eta = spec.eta;
  Complex out = 2.0 * u / (2.0 * u + eta) * (u - boundary.xi + eta) *
                (u + eta - boundary.xibar);
  for (const Complex& t : spec.theta) {
    out *= (u + t) * (u - t);
  }
  return out;
}

Complex TQContext::f_poly(Complex u) const {
  const Complex eta = spec.eta;
  Complex out(1, 0);
  for (const Complex& t : spec.theta) {
    out *= (u + t) * (u - t) * (u + t + eta) * (u - t + eta);
  }
  return out;
}

Complex TQContext::c() const {
  return 2.0 * (boundary.h1.dot(boundary.h2) - 1.0);
}

Complex q_eval(Complex u, const BetheRoots& r) {
  const Complex shift = r.mode == RootMode::kChain ? r.eta : Complex(0, 0);
  Complex out(1, 0);
  for (const Complex& l : r.lambda) {
    out *= (u - l) * (u + l + shift);
  }
  return out;
}

Complex lambda_eval(Complex u, const BetheRoots& r, const TQContext& ctx) {
  const Complex eta = ctx.spec.eta;
  const double guard = 1e-10 * (1.0 + std::abs(u));
  for (const Complex& l : r.lambda) {
    if (dist(u, l) < guard || dist(u, -l - eta) < guard) {
      throw CollisionError("lambda_eval: evaluation point hits a zero of Q");
    }
  }
  const Complex q = q_eval(u, r);
  return (ctx.a_bar(u) * q_eval(u - eta, r) +
          ctx.d_bar(u) * q_eval(u + eta, r) +
          ctx.c() * u * (u + eta) * ctx.f_poly(u)) /
         q;
}

// ------------------------------ Bethe equations ------------------------------

ScaledResidual chain_bae_scaled(const Eigen::VectorXcd& lambda,
                                const TQContext& ctx) {
  const Complex eta = ctx.spec.eta;
  const Complex c = ctx.c();
  BetheRoots tmp;
  tmp.mode = RootMode::kChain;
  tmp.eta = eta;
  tmp.lambda.assign(lambda.data(), lambda.data() + lambda.size());

  ScaledResidual out;
  out.value.resize(lambda.size());
  out.scale.resize(lambda.size());
  for (Eigen::Index j = 0; j < lambda.size(); ++j) {
    const Complex l = lambda(j);
    const Complex t1 = ctx.a_bar(l) * q_eval(l - eta, tmp);
    const Complex t2 = ctx.d_bar(l) * q_eval(l + eta, tmp);
    const Complex t3 = c * l * (l + eta) * ctx.f_poly(l);
    out.value(j) = t1 + t2 + t3;
    out.scale(j) =
        std::max({std::abs(t1), std::abs(t2), std::abs(t3), kTiny});
  }
  return out;
}

ScaledResidual gaudin_bae_scaled(const Eigen::VectorXcd& lambda,
                                 const GaudinBoundary& g,
                                 const std::vector<Complex>& theta) {
  const Complex xi = g.xi;
  const Complex one_m_xi1 = 1.0 - g.xi1;
  const double h21sq = g.h21.squaredNorm();
  const Eigen::Index m = lambda.size();

  ScaledResidual out;
  out.value.resize(m);
  out.scale.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const Complex l = lambda(j);
    Complex sum(0, 0);
    double scale = kTiny;
    auto add = [&](Complex term) {
      sum += term;
      scale = std::max(scale, std::abs(term));
    };
    add(one_m_xi1 / (l - xi));
    add(one_m_xi1 / (l + xi));
    for (const Complex& t : theta) {
      add(-1.0 / (l + t));
      add(-1.0 / (l - t));
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      if (i == j) continue;
      add(2.0 / (l - lambda(i)));
      add(2.0 / (l + lambda(i)));
    }
    Complex ratio(1, 0);
    for (const Complex& t : theta) ratio *= (l + t) * (l - t);
    for (Eigen::Index i = 0; i < m; ++i) {
      if (i != j) ratio /= (l - lambda(i)) * (l + lambda(i));
    }
    add(-h21sq * l / (2.0 * (l * l - xi * xi)) * ratio);
    out.value(j) = sum;
    out.scale(j) = scale;
  }
  return out;
}

std::vector<Complex> chain_bae_residual(const BetheRoots& r,
                                        const TQContext& ctx) {
  if (r.mode != RootMode::kChain) {
    throw std::invalid_argument("chain_bae_residual: roots not in chain mode");
  }
  if (chain_roots_collide(r.lambda, ctx.spec)) {
    throw CollisionError("chain_bae_residual: roots collide with poles");
  }
  Eigen::VectorXcd l(r.lambda.size());
  for (size_t i = 0; i < r.lambda.size(); ++i) l(i) = r.lambda[i];
  const ScaledResidual sr = chain_bae_scaled(l, ctx);
  std::vector<Complex> out(r.lambda.size());
  for (size_t j = 0; j < out.size(); ++j) {
    out[j] = sr.value(j) / sr.scale(j);
  }
  return out;
}

std::vector<Complex> gaudin_bae_residual(const BetheRoots& r,
                                         const GaudinBoundary& g,
                                         const std::vector<Complex>& theta) {
  if (r.mode != RootMode::kGaudin) {
    throw std::invalid_argument(
        "gaudin_bae_residual: roots not in gaudin mode");
  }
  if (gaudin_roots_collide(r.lambda, theta, g.xi)) {
    throw CollisionError("gaudin_bae_residual: roots collide with poles");
  }
  Eigen::VectorXcd l(r.lambda.size());
  for (size_t i = 0; i < r.lambda.size(); ++i) l(i) = r.lambda[i];
  const ScaledResidual sr = gaudin_bae_scaled(l, g, theta);
  std::vector<Complex> out(r.lambda.size());
  for (size_t j = 0; j < out.size(); ++j) {
    out[j] = sr.value(j) / sr.scale(j);
  }
  return out;
}

Complex gaudin_energy(int j, const BetheRoots& r, const GaudinBoundary& g,
                      const std::vector<Complex>& theta) {
  const int n = static_cast<int>(theta.size());
  if (j < 1 || j > n) {
    throw std::invalid_argument("gaudin_energy: site index out of range");
  }
  if (r.mode != RootMode::kGaudin) {
    throw std::invalid_argument("gaudin_energy: roots not in gaudin mode");
  }
  const Complex tj = theta[j - 1];
  if (dist(tj, g.xi) < kCollisionTol || dist(tj, -g.xi) < kCollisionTol) {
    throw CollisionError("gaudin_energy: theta_j at +-xi");
  }
  for (const Complex& l : r.lambda) {
    if (dist(tj, l) < kCollisionTol || dist(tj, -l) < kCollisionTol) {
      throw CollisionError("gaudin_energy: theta_j collides with a root");
    }
  }

  Complex pref = (tj * tj - g.xi * g.xi) * 2.0 * tj;
  for (int i = 1; i <= n; ++i) {
    if (i == j) continue;
    pref *= (tj + theta[i - 1]) * (tj - theta[i - 1]);
  }
  Complex sum = g.xi1 / (tj - g.xi) + 1.0 / tj;
  for (int i = 1; i <= n; ++i) {
    if (i == j) continue;
    sum += 1.0 / (tj + theta[i - 1]) + 1.0 / (tj - theta[i - 1]);
  }
  for (const Complex& l : r.lambda) {
    sum += -1.0 / (tj - l) - 1.0 / (tj + l);
  }
  return pref * sum;
}

// -------------------------- eigenvalue polynomials --------------------------

Complex functional_relation_rhs(int j, const ChainSpec& spec,
                                const OpenBoundary& b) {
  if (j < 1 || j > spec.num_sites) {
    throw std::invalid_argument(
        "functional_relation_rhs: site index out of range");
  }
  const Complex tj = spec.theta[j - 1];
  const Complex eta = spec.eta;
  Complex rhs = 4.0 * (tj + eta) * (tj - eta) * (tj * tj - b.xi * b.xi) *
                (tj * tj - b.xibar * b.xibar) /
                ((2.0 * tj - eta) * (2.0 * tj + eta));
  for (const Complex& t : spec.theta) {
    rhs *= (tj + t + eta) * (tj - t + eta) * (tj + t - eta) * (tj - t - eta);
  }
  return rhs;
}

LambdaRelationResiduals lambda_relations_residuals(const LambdaPoly& p,
                                                   const ChainSpec& spec,
                                                   const OpenBoundary& b) {
  const int expected = 2 * spec.num_sites + 2;
  if (p.poly.degree() != expected) {
    throw DegreeError("lambda_relations_residuals: polynomial degree != 2N+2",
                      static_cast<double>(p.poly.degree()));
  }
  const Complex eta = spec.eta;
  LambdaRelationResiduals out;

  for (int j = 1; j <= spec.num_sites; ++j) {
    const Complex tj = spec.theta[j - 1];
    const Complex lhs = p.poly.eval(tj) * p.poly.eval(tj - eta);
    const Complex rhs = functional_relation_rhs(j, spec, b);
    out.functional.push_back(std::abs(lhs - rhs) /
                             std::max(std::abs(rhs), kTiny));
  }

  // deterministic generic sample ring for the crossing check
  const double radius = 1.0 + spec.max_theta_mag() + std::abs(eta);
  double worst = 0.0;
  double scale = kTiny;
  for (int k = 0; k < 10; ++k) {
    const double phi = 2.0 * M_PI * (k + 0.37) / 10.0;
    const Complex u = radius * Complex(std::cos(phi), std::sin(phi));
    const Complex a = p.poly.eval(u);
    const Complex bb = p.poly.eval(-u - eta);
    worst = std::max(worst, std::abs(a - bb));
    scale = std::max(scale, std::abs(a));
  }
  out.crossing = worst / scale;

  Complex init = 2.0 * b.xi * b.xibar;
  for (const Complex& t : spec.theta) init *= (eta - t) * (eta + t);
  out.initial =
      std::abs(p.poly.eval(Complex(0, 0)) - init) / std::max(std::abs(init), kTiny);

  const Complex lead = p.poly.coeffs(expected);
  const Complex target = 2.0 * b.h1.dot(b.h2);
  out.asymptotic = std::abs(lead - target) / std::max(std::abs(target), kTiny);

  out.degree = p.poly.degenerate() ? 1.0 : 0.0;
  return out;
}

}  // namespace odba
