#include "mrjd/optim.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mrjd {

namespace {

double fd_scale(double x, double h) { return h * std::max(1.0, std::fabs(x)); }

// Forward/backward finite-difference column, staying inside the box.
std::vector<double> jac_column(
    const std::function<std::vector<double>(const std::vector<double>&)>& fn,
    std::vector<double> x, const std::vector<double>& f0, std::size_t i,
    const Box& box, double h) {
  double step = fd_scale(x[i], h);
  if (!box.hi.empty() && x[i] + step > box.hi[i]) step = -step;
  x[i] += step;
  std::vector<double> fi = fn(x);
  for (std::size_t k = 0; k < fi.size(); ++k) fi[k] = (fi[k] - f0[k]) / step;
  return fi;
}

double sq_norm(const std::vector<double>& v) {
  return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
}

}  // namespace

void Box::clamp(std::vector<double>& x) const {
  if (lo.empty()) return;
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = std::min(std::max(x[i], lo[i]), hi[i]);
}

LmResult levenberg_marquardt(
    const std::function<std::vector<double>(const std::vector<double>&)>& residuals,
    std::vector<double> x0, const Box& box, const LmOptions& opts) {
  const std::size_t d = x0.size();
  box.clamp(x0);

  LmResult out;
  out.x = x0;
  std::vector<double> f = residuals(out.x);
  const std::size_t m = f.size();
  out.objective = sq_norm(f);

  double lambda = 1e-3;
  for (out.iterations = 0; out.iterations < opts.max_iterations;
       ++out.iterations) {
    Eigen::MatrixXd J(m, d);
    for (std::size_t i = 0; i < d; ++i) {
      const std::vector<double> col =
          jac_column(residuals, out.x, f, i, box, opts.fd_step);
      for (std::size_t k = 0; k < m; ++k) J(k, i) = col[k];
    }
    Eigen::VectorXd fv = Eigen::Map<const Eigen::VectorXd>(f.data(), m);
    Eigen::VectorXd g = J.transpose() * fv;
    out.grad_norm = g.norm();
    if (out.grad_norm < opts.tol_grad) {
      out.converged = true;
      break;
    }

    const Eigen::MatrixXd JtJ = J.transpose() * J;
    bool stepped = false;
    for (int tries = 0; tries < 40; ++tries) {
      Eigen::MatrixXd A = JtJ;
      A.diagonal() += lambda * JtJ.diagonal().cwiseMax(1e-12);
      Eigen::VectorXd step = A.ldlt().solve(-g);
      std::vector<double> xt(d);
      for (std::size_t i = 0; i < d; ++i) xt[i] = out.x[i] + step(i);
      box.clamp(xt);
      double obj_t = std::numeric_limits<double>::infinity();
      std::vector<double> ft;
      try {
        ft = residuals(xt);
        obj_t = sq_norm(ft);
      } catch (const std::exception&) {
      }
      if (obj_t < out.objective) {
        double displacement = 0.0;
        for (std::size_t i = 0; i < d; ++i)
          displacement += (xt[i] - out.x[i]) * (xt[i] - out.x[i]);
        out.x = xt;
        f = std::move(ft);
        out.objective = obj_t;
        lambda = std::max(lambda * 0.3, 1e-12);
        stepped = true;
        if (std::sqrt(displacement) < opts.tol_step) out.converged = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!stepped) {
      // No descent direction within the damping budget: the iterate is a
      // local minimum at finite-difference resolution.
      out.converged = out.iterations > 0;
      break;
    }
    if (out.converged) break;  // step below tolerance
  }
  return out;
}

NmResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, const Box& box, const NmOptions& opts) {
  const std::size_t d = x0.size();
  box.clamp(x0);

  auto safe_f = [&](std::vector<double> x) {
    box.clamp(x);
    try {
      const double v = f(x);
      return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    } catch (const std::exception&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  std::vector<std::vector<double>> pts(d + 1, x0);
  std::vector<double> vals(d + 1);
  for (std::size_t i = 0; i < d; ++i) {
    double h = opts.initial_scale * std::max(std::fabs(x0[i]), 0.1);
    if (!box.hi.empty() && pts[i + 1][i] + h > box.hi[i]) h = -h;
    pts[i + 1][i] += h;
    box.clamp(pts[i + 1]);
  }
  for (std::size_t i = 0; i <= d; ++i) vals[i] = safe_f(pts[i]);

  NmResult out;
  for (out.iterations = 0; out.iterations < opts.max_iterations;
       ++out.iterations) {
    std::vector<std::size_t> order(d + 1);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order[0], worst = order[d], second = order[d - 1];

    double diam = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      diam = std::max(diam, std::fabs(pts[worst][i] - pts[best][i]) /
                                std::max(1.0, std::fabs(pts[best][i])));
    if (diam < opts.tol_simplex && std::isfinite(vals[worst])) {
      out.converged = true;
      break;
    }

    std::vector<double> centroid(d, 0.0);
    for (std::size_t k = 0; k <= d; ++k) {
      if (k == worst) continue;
      for (std::size_t i = 0; i < d; ++i) centroid[i] += pts[k][i] / double(d);
    }

    auto blend = [&](double c) {
      std::vector<double> x(d);
      for (std::size_t i = 0; i < d; ++i)
        x[i] = centroid[i] + c * (pts[worst][i] - centroid[i]);
      box.clamp(x);
      return x;
    };

    std::vector<double> xr = blend(-1.0);
    const double fr = safe_f(xr);
    if (fr < vals[best]) {
      std::vector<double> xe = blend(-2.0);
      const double fe = safe_f(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
    } else if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
    } else {
      const bool outside = fr < vals[worst];
      std::vector<double> xc = blend(outside ? -0.5 : 0.5);
      const double fc = safe_f(xc);
      if (fc < std::min(fr, vals[worst])) {
        pts[worst] = xc;
        vals[worst] = fc;
      } else {
        for (std::size_t k = 0; k <= d; ++k) {  // shrink toward best
          if (k == best) continue;
          for (std::size_t i = 0; i < d; ++i)
            pts[k][i] = pts[best][i] + 0.5 * (pts[k][i] - pts[best][i]);
          vals[k] = safe_f(pts[k]);
        }
      }
    }
  }

  const std::size_t best = std::size_t(
      std::min_element(vals.begin(), vals.end()) - vals.begin());
  out.x = pts[best];
  out.value = vals[best];
  return out;
}

NewtonResult newton_polish(
    const std::function<std::vector<double>(const std::vector<double>&)>& g,
    std::vector<double> x0, const Box& box, int max_iterations, double tol,
    double fd_step) {
  const std::size_t d = x0.size();
  box.clamp(x0);
  NewtonResult out;
  out.x = x0;
  std::vector<double> gv = g(out.x);
  out.residual_norm = std::sqrt(sq_norm(gv));

  for (out.iterations = 0; out.iterations < max_iterations; ++out.iterations) {
    if (out.residual_norm < tol) {
      out.converged = true;
      return out;
    }
    Eigen::MatrixXd J(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      const std::vector<double> col =
          jac_column(g, out.x, gv, i, box, fd_step);
      for (std::size_t k = 0; k < d; ++k) J(k, i) = col[k];
    }
    Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(gv.data(), d);
    Eigen::VectorXd step = J.fullPivLu().solve(rhs);

    // Damped update: halve until the residual norm does not increase.
    double scale = 1.0;
    bool accepted = false;
    for (int half = 0; half < 30; ++half) {
      std::vector<double> xt(d);
      for (std::size_t i = 0; i < d; ++i) xt[i] = out.x[i] + scale * step(i);
      box.clamp(xt);
      try {
        std::vector<double> gt = g(xt);
        const double nt = std::sqrt(sq_norm(gt));
        if (nt < out.residual_norm) {
          out.x = xt;
          gv = std::move(gt);
          out.residual_norm = nt;
          accepted = true;
          break;
        }
      } catch (const std::exception&) {
      }
      scale *= 0.5;
    }
    if (!accepted) break;
  }
  out.converged = out.residual_norm < tol;
  return out;
}

}  // namespace mrjd
