#pragma once

#include <map>
#include <string>
#include <vector>

#include "rd/cylinder.hpp"
#include "rd/dynamics.hpp"
#include "rd/ensemble.hpp"

namespace rd {

// Monte-Carlo estimate of <D P_t phi (x), h> via the stochastic-integral
// weight: mean of phi(X(t,x)) * W_bel / t over n_paths, path i using
// chain_id = cfg.chain_id + i so reruns are reproducible.
FunctionalEstimate bel_gradient(const ModelConfig& cfg, const SpectralVector& x,
                                const SpectralVector& h, double t,
                                const CylinderFunction& phi, long n_paths);

// Central finite difference (P_t phi(x + kappa h) - P_t phi(x - kappa h)) /
// (2 kappa) with common random numbers.
FunctionalEstimate crn_fd_gradient(const ModelConfig& cfg, const SpectralVector& x,
                                   const SpectralVector& h, double t,
                                   const CylinderFunction& phi, long n_paths,
                                   double kappa);

// Both estimators on shared per-path noise (one simulation pass).
struct GradientComparison {
  FunctionalEstimate bel;
  FunctionalEstimate fd;
  FunctionalEstimate diff;  // per-path bel value minus fd value
};
GradientComparison bel_vs_fd(const ModelConfig& cfg, const SpectralVector& x,
                             const SpectralVector& h, double t, const CylinderFunction& phi,
                             long n_paths, double kappa);

// Term-by-term Monte-Carlo evaluation of
//   P_t<Dphi,h> = <D P_t phi, h> - int_0^t P_{t-s}(<Ah + p_eps'(.) h, D P_s phi>) ds
// with trapezoid time quadrature on an s-grid of dt multiples.
struct E7Report {
  double lhs;            // P_t <D phi, h>
  double lhs_stderr;
  double grad_term;      // <D P_t phi, h>
  double grad_stderr;
  double integral_term;  // the s-integral
  double integral_stderr;
  double residual;       // lhs - grad_term + integral_term
  double combined_stderr;
};
E7Report verify_identity_e7(const ModelConfig& cfg, const SpectralVector& x,
                            const CylinderFunction& phi, const SpectralVector& h, double t,
                            int s_nodes = 5, long n_direct = 20000, long n_outer = 200,
                            long n_inner = 200);

// Pathwise lemma diagnostics for the tangent flow: normalized ratios that
// the duality lemmas bound by constants independent of h and the path.
struct LemmaRatios {
  double lemma22 = 0.0;  // int_0^T |eta|^2_{1-alpha} dt / (Delta_T |h|^2_{-alpha})
  double lemma23 = 0.0;  // sup_t |eta(t)|_{-alpha}   / (Delta_T |h|_{-alpha})
  double cor24 = 0.0;    // int_0^T |eta|^2_{1-alpha-delta} dt / (Delta_T |h|^2_{-alpha})
  double delta_T = 1.0;
};
LemmaRatios lemma_ratio_path(const ModelConfig& cfg, const SpectralVector& x0,
                             const SpectralVector& h, double T, int chain_id);

// Empirical sups of the three ratios over n_paths independent paths per
// direction h = e_k, k in h_modes.
struct LemmaRatioSummary {
  double sup22 = 0.0;
  double sup23 = 0.0;
  double sup24 = 0.0;
  long n_paths = 0;
};
LemmaRatioSummary lemma_ratio_sweep(const ModelConfig& cfg, const SpectralVector& x0,
                                    const std::vector<std::size_t>& h_modes, double T,
                                    int n_paths);

// int <D phi(x), h> nu(dx) by ensemble averaging.
FunctionalEstimate ibp_lhs(const SampleEnsemble& ens, const CylinderFunction& phi,
                           const SpectralVector& h);

// Theorem-t2 certification: ratio |ibp_lhs| / (||phi||_{L^p(nu)} |h|_{1+delta+gamma})
// over a dictionary of trig cylinder functions and h in {e_k}.
struct CertificationRow {
  std::string phi_id;
  std::size_t k;  // h = e_k
  double lhs;
  double lhs_stderr;
  double norm_phi_lp;
  double norm_h_strong;  // alpha_k^beta
  double ratio;
};
struct CertificationTable {
  std::vector<CertificationRow> rows;
  double sup_ratio = 0.0;
  std::string sup_phi_id;
  std::size_t sup_k = 0;
  double p_exponent = 2.0;
};
CertificationTable certify_theorem2(const SampleEnsemble& ens,
                                    const std::vector<CylinderFunction>& phi_dict,
                                    const std::vector<std::size_t>& h_modes,
                                    double p_exponent = 2.0);

// Least-squares estimate of the Fomin density v_z from the defining relation
//   int <(-A)^{-beta} D psi, z> dnu = int psi v_z dnu
// over a dictionary of test functions, with v_z expanded in the same
// dictionary plus linear coordinates.
struct VzEstimate {
  SpectralVector z;
  std::vector<std::string> basis_ids;
  std::vector<double> coef;
  std::vector<double> coef_stderr;
  double residual = 0.0;          // ||G c - rhs||
  double condition_number = 0.0;  // of the Gram matrix
  double l2_norm = 0.0;           // estimated ||v_z||_{L^2(nu)}
  std::function<double(const SpectralVector&)> eval;
};
VzEstimate estimate_vz(const SampleEnsemble& ens, const SpectralVector& z,
                       const std::vector<CylinderFunction>& dictionary,
                       double max_condition = 1e8);

// Default dictionary: sin/cos of low-mode linear functionals, scaled so the
// arguments are O(1) under the ensemble.
std::vector<CylinderFunction> default_vz_dictionary(const SampleEnsemble& ens,
                                                    std::size_t max_mode);

// M*(F) = -div[(-A)^{-beta} F] + sum_h f_h v_h for a finite cylinder field.
// v_h evaluators keyed by mode (1-based); missing modes are an error.
std::function<double(const SpectralVector&)> mstar_apply(
    const CylinderField& F, double beta,
    const std::map<std::size_t, std::function<double(const SpectralVector&)>>& v_estimates);

// Single-pass estimate of E[<(-A)^{-beta} D phi, F>] - E[phi M*(F)].
FunctionalEstimate adjoint_duality_residual(
    const SampleEnsemble& ens, const CylinderFunction& phi, const CylinderField& F,
    const std::function<double(const SpectralVector&)>& mstar_eval);

}  // namespace rd
