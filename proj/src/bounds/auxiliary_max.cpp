#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "marton/bounds.hpp"
#include "marton/parallel.hpp"
#include "marton/perturbation.hpp"
#include "marton/random.hpp"

namespace marton {

namespace {

// I(U;Y)+I(V;Z)-I(U;V)+lambda I(U;Y)+gamma I(V;Z) on t[(u*nv+v)*nx+x] and its
// gradient with respect to t, up to a constant per x.
class AuxiliaryProblem {
 public:
  AuxiliaryProblem(const BroadcastChannel& channel, std::size_t nu, std::size_t nv, double lambda,
                double gamma)
      : nu_(nu), nv_(nv), nx_(channel.nx()), ny_(channel.ny()), nz_(channel.nz()),
        qy_(channel.y_kernel()), qz_(channel.z_kernel()), lambda_(lambda), gamma_(gamma) {}

  double evaluate(const std::vector<double>& t, std::vector<double>* grad) const {
    std::vector<double> pu(nu_, 0.0), pv(nv_, 0.0), puv(nu_ * nv_, 0.0), py(ny_, 0.0),
        pz(nz_, 0.0), puy(nu_ * ny_, 0.0), pvz(nv_ * nz_, 0.0);
    for (std::size_t u = 0; u < nu_; ++u)
      for (std::size_t v = 0; v < nv_; ++v)
        for (std::size_t x = 0; x < nx_; ++x) {
          const double m = t[(u * nv_ + v) * nx_ + x];
          if (m == 0.0) continue;
          pu[u] += m;
          pv[v] += m;
          puv[u * nv_ + v] += m;
          for (std::size_t y = 0; y < ny_; ++y) {
            puy[u * ny_ + y] += m * qy_[x][y];
            py[y] += m * qy_[x][y];
          }
          for (std::size_t z = 0; z < nz_; ++z) {
            pvz[v * nz_ + z] += m * qz_[x][z];
            pz[z] += m * qz_[x][z];
          }
        }
    auto info = [](const std::vector<double>& pab, const std::vector<double>& pa,
                   const std::vector<double>& pb) {
      double s = 0.0;
      for (std::size_t a = 0; a < pa.size(); ++a)
        for (std::size_t b = 0; b < pb.size(); ++b) {
          const double p = pab[a * pb.size() + b];
          if (p > 0.0) s += p * std::log2(p / (pa[a] * pb[b]));
        }
      return s;
    };
    const double iuy = info(puy, pu, py), ivz = info(pvz, pv, pz), iuv = info(puv, pu, pv);
    if (grad) {
      grad->assign(t.size(), 0.0);
      auto lg = [](double v) { return std::log2(std::max(v, 1e-300)); };
      for (std::size_t u = 0; u < nu_; ++u)
        for (std::size_t v = 0; v < nv_; ++v)
          for (std::size_t x = 0; x < nx_; ++x) {
            double gy = 0.0, gz = 0.0;
            for (std::size_t y = 0; y < ny_; ++y)
              if (qy_[x][y] > 0.0)
                gy += qy_[x][y] * (pu[u] > 0.0 ? lg(puy[u * ny_ + y] / pu[u]) - lg(py[y])
                                               : lg(qy_[x][y]) - lg(py[y]));
            for (std::size_t z = 0; z < nz_; ++z)
              if (qz_[x][z] > 0.0)
                gz += qz_[x][z] * (pv[v] > 0.0 ? lg(pvz[v * nz_ + z] / pv[v]) - lg(pz[z])
                                               : lg(qz_[x][z]) - lg(pz[z]));
            const double guv = pu[u] > 0.0 && pv[v] > 0.0
                                   ? lg(puv[u * nv_ + v]) - lg(pu[u]) - lg(pv[v])
                                   : 0.0;
            (*grad)[(u * nv_ + v) * nx_ + x] = (1.0 + lambda_) * gy + (1.0 + gamma_) * gz - guv;
          }
    }
    return (1.0 + lambda_) * iuy + (1.0 + gamma_) * ivz - iuv;
  }

  std::size_t cells() const { return nu_ * nv_; }
  std::size_t nx() const { return nx_; }

 private:
  std::size_t nu_, nv_, nx_, ny_, nz_;
  Kernel qy_, qz_;
  double lambda_, gamma_;
};

struct AuxStart {
  std::vector<double> t;
  double value = -1e300;
  double residual = 0.0;
  bool converged = false;
};

// Largest per-x spread of the gradient over atoms carrying non-negligible mass.
double gradient_spread(const AuxiliaryProblem& prob, const std::vector<double>& t,
                       const std::vector<double>& px, const std::vector<double>& grad) {
  double worst = 0.0;
  for (std::size_t x = 0; x < prob.nx(); ++x) {
    if (!(px[x] > 0.0)) continue;
    double lo = 1e300, hi = -1e300;
    for (std::size_t c = 0; c < prob.cells(); ++c) {
      const std::size_t i = c * prob.nx() + x;
      if (t[i] <= 1e-9 * px[x]) continue;
      lo = std::min(lo, grad[i]);
      hi = std::max(hi, grad[i]);
    }
    if (hi >= lo) worst = std::max(worst, hi - lo);
  }
  return worst;
}

AuxStart mirror_ascent(const AuxiliaryProblem& prob, const std::vector<double>& px,
                       std::vector<double> t, const OptimizationConfig& config) {
  const std::size_t nx = prob.nx(), cells = prob.cells();
  std::vector<double> grad, g2;
  double f = prob.evaluate(t, &grad);
  double eta = 1.0;
  AuxStart out;
  for (std::size_t it = 0; it < config.max_iters; ++it) {
    bool moved = false;
    for (; eta > 1e-12; eta *= 0.5) {
      auto y = t;
      for (std::size_t x = 0; x < nx; ++x) {
        if (!(px[x] > 0.0)) continue;
        double gmax = -1e300;
        for (std::size_t c = 0; c < cells; ++c)
          if (y[c * nx + x] > 0.0) gmax = std::max(gmax, grad[c * nx + x]);
        double total = 0.0;
        for (std::size_t c = 0; c < cells; ++c) {
          double& v = y[c * nx + x];
          if (v > 0.0) v *= std::exp(eta * (grad[c * nx + x] - gmax));
          total += v;
        }
        for (std::size_t c = 0; c < cells; ++c) y[c * nx + x] *= px[x] / total;
      }
      const double f2 = prob.evaluate(y, &g2);
      if (f2 >= f) {
        moved = f2 > f;
        t = std::move(y);
        f = f2;
        grad.swap(g2);
        eta = std::min(eta * 2.0, 1e4);
        break;
      }
    }
    if (!moved || gradient_spread(prob, t, px, grad) <= config.tol * 1e-2) {
      out.converged = true;
      break;
    }
  }
  out.value = f;
  out.residual = gradient_spread(prob, t, px, grad);
  out.t = std::move(t);
  return out;
}

}  // namespace

OptimizationResult auxiliary_max(const BroadcastChannel& channel, const std::vector<double>& px,
                                 std::size_t nu, std::size_t nv, double lambda, double gamma,
                                 const OptimizationConfig& config) {
  config.validate();
  require_valid(channel);
  if (px.size() != channel.nx()) throw std::invalid_argument("p(x) has the wrong length");
  if (nu == 0 || nv == 0) throw std::invalid_argument("auxiliary alphabets must be nonempty");
  if (lambda < 0.0 || gamma < 0.0) throw std::invalid_argument("lambda and gamma must be >= 0");
  JointDistribution({{"X", channel.nx()}}, px);  // validates p(x)
  const auto start = std::chrono::steady_clock::now();
  const AuxiliaryProblem prob(channel, nu, nv, lambda, gamma);
  const std::size_t nx = channel.nx(), cells = nu * nv;

  std::vector<AuxStart> outcomes(config.starts);
  parallel_for(config.starts, [&](std::size_t k) {
    Rng rng(config.seed, k);
    std::vector<double> t(cells * nx);
    for (std::size_t x = 0; x < nx; ++x) {
      const auto cond = rng.dirichlet(cells);
      for (std::size_t c = 0; c < cells; ++c) t[c * nx + x] = px[x] * cond[c];
    }
    outcomes[k] = mirror_ascent(prob, px, std::move(t), config);
  });
  std::size_t best = 0, converged = 0;
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    converged += outcomes[k].converged;
    const auto& o = outcomes[k];
    const auto& b = outcomes[best];
    if (o.value > b.value || (o.value == b.value && o.t < b.t)) best = k;
  }
  const auto uvx = JointDistribution::from_weights({{"U", nu}, {"V", nv}, {"X", nx}},
                                                   outcomes[best].t);
  OptimizationResult result;
  result.witness = push_through_channel(uvx, channel);
  result.value = auxiliary_objective(*result.witness, lambda, gamma);
  result.diagnostics.starts_used = config.starts;
  result.diagnostics.starts_converged = converged;
  result.diagnostics.stationarity_residual = outcomes[best].residual;
  result.diagnostics.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace marton
