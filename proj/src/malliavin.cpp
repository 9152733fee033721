#include "rd/malliavin.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "rd/errors.hpp"

namespace rd {

namespace {

long t_steps(const ModelConfig& cfg, double t) {
  const long n = std::lround(t / cfg.dt);
  if (n < 1 || std::fabs(static_cast<double>(n) * cfg.dt - t) > 1e-9 * t)
    throw std::invalid_argument("t must be a positive multiple of dt");
  return n;
}

// Decorrelated seed streams for nested estimators.
uint64_t substream(uint64_t seed, uint64_t tag) {
  return seed ^ (0x9E3779B97F4A7C15ull * (tag + 1));
}

}  // namespace

GradientComparison bel_vs_fd(const ModelConfig& cfg, const SpectralVector& x,
                             const SpectralVector& h, double t, const CylinderFunction& phi,
                             long n_paths, double kappa) {
  cfg.validate();
  const long nsteps = t_steps(cfg, t);
  Integrator integ(cfg);
  const bool with_fd = kappa > 0.0;

  std::vector<double> bel_vals, fd_vals, diff_vals;
  bel_vals.reserve(n_paths);
  for (long i = 0; i < n_paths; ++i) {
    const int chain = cfg.chain_id + static_cast<int>(i);
    SpectralVector xc = x, eta = h;
    SpectralVector xp = x + kappa * h, xm = x - kappa * h;
    double bel = 0.0;
    for (long k = 0; k < nsteps; ++k) {
      const NoiseIncrement dW = integ.draw_noise(k, chain);
      bel = integ.accumulate_bel(eta, dW, bel);
      integ.step_tangent(xc, eta);
      integ.step_spde(xc, dW);
      if (with_fd) {
        integ.step_spde(xp, dW);
        integ.step_spde(xm, dW);
      }
    }
    if (!xc.finite()) throw BlowUpError("path blow-up in gradient estimator", nsteps, chain);
    const double bv = phi(xc) * bel / t;
    bel_vals.push_back(bv);
    if (with_fd) {
      const double fv = (phi(xp) - phi(xm)) / (2.0 * kappa);
      fd_vals.push_back(fv);
      diff_vals.push_back(bv - fv);
    }
  }
  GradientComparison out;
  out.bel = estimate_scalar_series(bel_vals);
  if (with_fd) {
    out.fd = estimate_scalar_series(fd_vals);
    out.diff = estimate_scalar_series(diff_vals);
  }
  return out;
}

FunctionalEstimate bel_gradient(const ModelConfig& cfg, const SpectralVector& x,
                                const SpectralVector& h, double t,
                                const CylinderFunction& phi, long n_paths) {
  return bel_vs_fd(cfg, x, h, t, phi, n_paths, 0.0).bel;
}

FunctionalEstimate crn_fd_gradient(const ModelConfig& cfg, const SpectralVector& x,
                                   const SpectralVector& h, double t,
                                   const CylinderFunction& phi, long n_paths, double kappa) {
  return bel_vs_fd(cfg, x, h, t, phi, n_paths, kappa).fd;
}

namespace {

// Ah + p_eps'(y) h as a spectral vector (grid product for the second term).
SpectralVector e7_direction(const ModelConfig& cfg, const SineTransform& tr,
                            const SpectralVector& y, const SpectralVector& h) {
  SpectralVector d(h.n_modes());
  for (std::size_t k = 0; k < h.n_modes(); ++k) d.c[k] = -eigenvalue(k + 1) * h.c[k];
  if (!cfg.drift.is_zero()) {
    std::vector<double> ygrid, hgrid;
    tr.to_physical(y, ygrid);
    tr.to_physical(h, hgrid);
    for (std::size_t j = 0; j < ygrid.size(); ++j)
      hgrid[j] *= cfg.drift.yosida_deriv(cfg.epsilon, ygrid[j]);
    SpectralVector prod;
    tr.to_spectral(hgrid, prod);
    d = d + prod;
  }
  return d;
}

}  // namespace

E7Report verify_identity_e7(const ModelConfig& cfg, const SpectralVector& x,
                            const CylinderFunction& phi, const SpectralVector& h, double t,
                            int s_nodes, long n_direct, long n_outer, long n_inner) {
  cfg.validate();
  const long nsteps = t_steps(cfg, t);
  if (s_nodes < 2 || nsteps % s_nodes != 0)
    throw std::invalid_argument("s_nodes must be >= 2 and divide t/dt");
  SineTransform tr(static_cast<std::size_t>(cfg.n_modes),
                   static_cast<std::size_t>(cfg.grid_M()));

  E7Report rep{};

  // P_t <D phi, h>
  {
    ModelConfig c = cfg;
    c.seed = substream(cfg.seed, 1);
    std::vector<double> vals;
    vals.reserve(n_direct);
    for (long i = 0; i < n_direct; ++i) {
      c.chain_id = static_cast<int>(i);
      const PathResult pr = simulate_path(c, x, t);
      vals.push_back(dot(phi.grad(pr.state.x), h));
    }
    const auto est = estimate_scalar_series(vals);
    rep.lhs = est.mean;
    rep.lhs_stderr = est.stderr_;
  }

  // <D P_t phi(x), h>
  {
    ModelConfig c = cfg;
    c.seed = substream(cfg.seed, 2);
    c.chain_id = 0;
    const auto est = bel_gradient(c, x, h, t, phi, n_direct);
    rep.grad_term = est.mean;
    rep.grad_stderr = est.stderr_;
  }

  // int_0^t P_{t-s}(<Ah + p_eps' h, D P_s phi>) ds, trapezoid on s_nodes+1 nodes
  {
    const double ds = t / static_cast<double>(s_nodes);
    double integral = 0.0, var = 0.0;
    for (int j = 0; j <= s_nodes; ++j) {
      const double s = ds * static_cast<double>(j);
      const double w = (j == 0 || j == s_nodes) ? 0.5 * ds : ds;
      ModelConfig outer_cfg = cfg;
      outer_cfg.seed = substream(cfg.seed, 100 + static_cast<uint64_t>(j));

      std::vector<double> vals;
      vals.reserve(n_outer);
      for (long o = 0; o < n_outer; ++o) {
        outer_cfg.chain_id = static_cast<int>(o);
        SpectralVector y = x;
        if (s < t) y = simulate_path(outer_cfg, x, t - s).state.x;
        const SpectralVector d = e7_direction(cfg, tr, y, h);
        if (j == 0) {
          vals.push_back(dot(phi.grad(y), d));  // D P_0 phi = D phi
        } else {
          ModelConfig inner_cfg = cfg;
          inner_cfg.seed = substream(cfg.seed, 1000 + static_cast<uint64_t>(j) * 100003 +
                                                    static_cast<uint64_t>(o));
          inner_cfg.chain_id = 0;
          vals.push_back(bel_gradient(inner_cfg, y, d, s, phi, n_inner).mean);
        }
      }
      const auto est = estimate_scalar_series(vals);
      integral += w * est.mean;
      var += w * w * est.stderr_ * est.stderr_;
    }
    rep.integral_term = integral;
    rep.integral_stderr = std::sqrt(var);
  }

  rep.residual = rep.lhs - rep.grad_term + rep.integral_term;
  rep.combined_stderr = std::sqrt(rep.lhs_stderr * rep.lhs_stderr +
                                  rep.grad_stderr * rep.grad_stderr +
                                  rep.integral_stderr * rep.integral_stderr);
  return rep;
}

LemmaRatios lemma_ratio_path(const ModelConfig& cfg, const SpectralVector& x0,
                             const SpectralVector& h, double T, int chain_id) {
  ModelConfig local = cfg;
  local.chain_id = chain_id;
  const double a = cfg.alpha();
  // Per-step quadrature weight for int |eta|_s^2 dt from the left endpoint:
  // each mode decays like e^{-alpha_h t} within a step, so integrate that
  // profile exactly instead of a rectangle. For stiff modes (alpha_h dt >> 1)
  // the rectangle rule over-counts the initial transient by alpha_h dt.
  const auto step_sq = [&](double s, const SpectralVector& v) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= v.n_modes(); ++k) {
      const double al = eigenvalue(k);
      acc += std::pow(al, s) * v[k - 1] * v[k - 1] * (1.0 - std::exp(-2.0 * al * cfg.dt)) /
             (2.0 * al);
    }
    return acc;
  };
  double int_1ma = step_sq(1.0 - a, h);
  double int_1mad = step_sq(1.0 - a - cfg.delta, h);
  double sup_ma = sobolev_norm(-a, h);
  SimulateOptions opts;
  opts.direction = h;
  opts.observer = [&](long, const PathState& st, double) {
    int_1ma += step_sq(1.0 - a, st.eta);
    int_1mad += step_sq(1.0 - a - cfg.delta, st.eta);
    sup_ma = std::max(sup_ma, sobolev_norm(-a, st.eta));
  };
  const PathResult res = simulate_path(local, x0, T, opts);
  const double hm = sobolev_norm(-a, h);
  LemmaRatios out;
  out.delta_T = res.diag.delta_T;
  out.lemma22 = int_1ma / (out.delta_T * hm * hm);
  out.lemma23 = sup_ma / (out.delta_T * hm);
  out.cor24 = int_1mad / (out.delta_T * hm * hm);
  return out;
}

LemmaRatioSummary lemma_ratio_sweep(const ModelConfig& cfg, const SpectralVector& x0,
                                    const std::vector<std::size_t>& h_modes, double T,
                                    int n_paths) {
  LemmaRatioSummary sum;
  for (std::size_t k : h_modes) {
    const SpectralVector ek = SpectralVector::basis(k, cfg.n_modes);
    for (int i = 0; i < n_paths; ++i) {
      const LemmaRatios r = lemma_ratio_path(cfg, x0, ek, T, cfg.chain_id + i);
      sum.sup22 = std::max(sum.sup22, r.lemma22);
      sum.sup23 = std::max(sum.sup23, r.lemma23);
      sum.sup24 = std::max(sum.sup24, r.cor24);
      ++sum.n_paths;
    }
  }
  return sum;
}

FunctionalEstimate ibp_lhs(const SampleEnsemble& ens, const CylinderFunction& phi,
                           const SpectralVector& h) {
  return estimate_functional(
      ens, [&](const SpectralVector& x) { return dot(phi.grad(x), h); });
}

CertificationTable certify_theorem2(const SampleEnsemble& ens,
                                    const std::vector<CylinderFunction>& phi_dict,
                                    const std::vector<std::size_t>& h_modes,
                                    double p_exponent) {
  if (phi_dict.empty() || h_modes.empty())
    throw ConfigError("certify_theorem2: empty dictionary or h range");
  const double beta = ens.meta.cfg.beta();
  CertificationTable table;
  table.p_exponent = p_exponent;

  for (const auto& phi : phi_dict) {
    const auto norm_est = estimate_functional(ens, [&](const SpectralVector& x) {
      return std::pow(std::fabs(phi(x)), p_exponent);
    });
    const double norm_phi = std::pow(norm_est.mean, 1.0 / p_exponent);

    for (std::size_t k : h_modes) {
      if (k < 1 || k > ens.n_modes())
        throw ConfigError("certify_theorem2: mode " + std::to_string(k) + " out of range");
      const SpectralVector ek = SpectralVector::basis(k, ens.n_modes());
      const auto lhs = ibp_lhs(ens, phi, ek);
      CertificationRow row;
      row.phi_id = phi.id();
      row.k = k;
      row.lhs = lhs.mean;
      row.lhs_stderr = lhs.stderr_;
      row.norm_phi_lp = norm_phi;
      row.norm_h_strong = std::pow(eigenvalue(k), beta);
      row.ratio = std::fabs(row.lhs) / (row.norm_phi_lp * row.norm_h_strong);
      if (row.ratio > table.sup_ratio) {
        table.sup_ratio = row.ratio;
        table.sup_phi_id = row.phi_id;
        table.sup_k = k;
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

std::vector<CylinderFunction> default_vz_dictionary(const SampleEnsemble& ens,
                                                    std::size_t max_mode) {
  std::vector<CylinderFunction> dict;
  for (std::size_t j = 1; j <= max_mode; ++j) {
    const auto var = estimate_functional(
        ens, [j](const SpectralVector& x) { return x.c[j - 1] * x.c[j - 1]; });
    const double scale = 1.0 / std::sqrt(std::max(var.mean, 1e-300));
    SpectralVector lam(ens.n_modes());
    lam.c[j - 1] = scale;
    dict.push_back(CylinderFunction::trig(lam, -0.5 * std::numbers::pi, "sin_m" + std::to_string(j)));
    dict.push_back(CylinderFunction::trig(lam, 0.0, "cos_m" + std::to_string(j)));
  }
  return dict;
}

VzEstimate estimate_vz(const SampleEnsemble& ens, const SpectralVector& z,
                       const std::vector<CylinderFunction>& dictionary,
                       double max_condition) {
  const std::size_t n_modes = ens.n_modes();
  const double beta = ens.meta.cfg.beta();

  // modes touched by z or the dictionary
  std::size_t max_mode = 0;
  for (std::size_t i = 0; i < z.n_modes(); ++i)
    if (z.c[i] != 0.0) max_mode = i + 1;
  for (const auto& psi : dictionary)
    if (psi.is_trig())
      for (std::size_t i = 0; i < psi.lambda().n_modes(); ++i)
        if (psi.lambda().c[i] != 0.0) max_mode = std::max(max_mode, i + 1);
  if (max_mode == 0) max_mode = 1;

  VzEstimate out;
  out.z = z;

  // expansion basis: linear coordinates then the dictionary
  std::vector<std::function<double(const SpectralVector&)>> basis;
  for (std::size_t j = 1; j <= max_mode; ++j) {
    basis.push_back([j](const SpectralVector& x) { return x.c[j - 1]; });
    out.basis_ids.push_back("x" + std::to_string(j));
  }
  for (const auto& psi : dictionary) {
    basis.push_back([psi](const SpectralVector& x) { return psi(x); });
    out.basis_ids.push_back(psi.id());
  }

  // test functions: dictionary plus linear coordinates
  struct Test {
    std::function<double(const SpectralVector&)> f;
    std::function<double(const SpectralVector&, std::size_t)> dcoef;  // d/dx_h
  };
  std::vector<Test> tests;
  for (const auto& psi : dictionary)
    tests.push_back({[psi](const SpectralVector& x) { return psi(x); },
                     [psi](const SpectralVector& x, std::size_t h) {
                       return psi.grad_coeff(x, h);
                     }});
  for (std::size_t j = 1; j <= max_mode; ++j)
    tests.push_back({[j](const SpectralVector& x) { return x.c[j - 1]; },
                     [j](const SpectralVector&, std::size_t h) {
                       return h == j ? 1.0 : 0.0;
                     }});

  const std::size_t K = tests.size(), J = basis.size();
  const std::size_t N = ens.size();
  if (N == 0) throw std::invalid_argument("estimate_vz: empty ensemble");

  const int n_blocks = 8;
  std::vector<Eigen::MatrixXd> Gb(n_blocks, Eigen::MatrixXd::Zero(K, J));
  std::vector<Eigen::VectorXd> rb(n_blocks, Eigen::VectorXd::Zero(K));
  std::vector<std::size_t> cnt(n_blocks, 0);

  std::vector<double> bx(J);
  for (std::size_t i = 0; i < N; ++i) {
    const SpectralVector& x = ens.samples[i];
    const int blk = static_cast<int>(i * n_blocks / N);
    ++cnt[blk];
    for (std::size_t j = 0; j < J; ++j) bx[j] = basis[j](x);
    for (std::size_t k = 0; k < K; ++k) {
      const double psik = tests[k].f(x);
      for (std::size_t j = 0; j < J; ++j) Gb[blk](k, j) += psik * bx[j];
      double r = 0.0;
      for (std::size_t h = 1; h <= n_modes; ++h) {
        if (z.c[h - 1] == 0.0) continue;
        r += std::pow(eigenvalue(h), -beta) * z.c[h - 1] * tests[k].dcoef(x, h);
      }
      rb[blk](k) += r;
    }
  }

  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(K, J);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(K);
  for (int b = 0; b < n_blocks; ++b) {
    G += Gb[b];
    rhs += rb[b];
  }
  G /= static_cast<double>(N);
  rhs /= static_cast<double>(N);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(G, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  out.condition_number = sv(0) / sv(sv.size() - 1);
  if (!(out.condition_number < max_condition))
    throw ConditioningError("estimate_vz: Gram matrix condition number " +
                                std::to_string(out.condition_number) + " exceeds limit",
                            out.condition_number);
  const Eigen::VectorXd c = svd.solve(rhs);
  out.residual = (G * c - rhs).norm();

  // block-resolve spread for coefficient error bars
  Eigen::MatrixXd cblk(J, n_blocks);
  for (int b = 0; b < n_blocks; ++b) {
    Eigen::MatrixXd Gn = Gb[b] / static_cast<double>(cnt[b]);
    Eigen::VectorXd rn = rb[b] / static_cast<double>(cnt[b]);
    cblk.col(b) = Gn.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rn);
  }
  out.coef.resize(J);
  out.coef_stderr.resize(J);
  for (std::size_t j = 0; j < J; ++j) {
    out.coef[j] = c(j);
    const double m = cblk.row(j).mean();
    double v = 0.0;
    for (int b = 0; b < n_blocks; ++b) v += (cblk(j, b) - m) * (cblk(j, b) - m);
    out.coef_stderr[j] = std::sqrt(v / (n_blocks - 1.0) / n_blocks);
  }

  auto coef = out.coef;
  out.eval = [basis, coef](const SpectralVector& x) {
    double v = 0.0;
    for (std::size_t j = 0; j < basis.size(); ++j) v += coef[j] * basis[j](x);
    return v;
  };
  const auto l2 =
      estimate_functional(ens, [&](const SpectralVector& x) {
        const double v = out.eval(x);
        return v * v;
      });
  out.l2_norm = std::sqrt(std::max(0.0, l2.mean));
  return out;
}

std::function<double(const SpectralVector&)> mstar_apply(
    const CylinderField& F, double beta,
    const std::map<std::size_t, std::function<double(const SpectralVector&)>>& v_estimates) {
  for (const auto& comp : F.components)
    if (!v_estimates.count(comp.mode_h))
      throw std::invalid_argument("mstar_apply: missing v_h for mode " +
                                  std::to_string(comp.mode_h));
  return [F, beta, v_estimates](const SpectralVector& x) {
    double acc = 0.0;
    for (const auto& comp : F.components) {
      const double ab = std::pow(eigenvalue(comp.mode_h), -beta);
      acc -= ab * comp.f.grad_coeff(x, comp.mode_h);
      acc += comp.f(x) * v_estimates.at(comp.mode_h)(x);
    }
    return acc;
  };
}

FunctionalEstimate adjoint_duality_residual(
    const SampleEnsemble& ens, const CylinderFunction& phi, const CylinderField& F,
    const std::function<double(const SpectralVector&)>& mstar_eval) {
  const double beta = ens.meta.cfg.beta();
  return estimate_functional(ens, [&](const SpectralVector& x) {
    double pair = 0.0;
    for (const auto& comp : F.components)
      pair += std::pow(eigenvalue(comp.mode_h), -beta) * phi.grad_coeff(x, comp.mode_h) *
              comp.f(x);
    return pair - phi(x) * mstar_eval(x);
  });
}

}  // namespace rd
