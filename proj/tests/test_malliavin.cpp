#include <doctest.h>

#include <cmath>

#include "rd/campaign.hpp"
#include "rd/malliavin.hpp"
#include "rd/oracles.hpp"

using namespace rd;
namespace orc = rd::oracles;

namespace {

ModelConfig gauss_config(int n_modes) {
  ModelConfig cfg;
  cfg.n_modes = n_modes;
  cfg.drift = OddPolynomial::zero();
  return cfg;
}

const SampleEnsemble& gauss_ensemble() {
  static const SampleEnsemble ens = sample_invariant(gauss_config(4), 4, 101000, 1000, 10);
  return ens;
}

}  // namespace

TEST_CASE("bel gradient of a linear functional is the OU decay") {
  const ModelConfig cfg = gauss_config(2);
  SpectralVector x(2);
  x.c = {0.3, -0.1};
  const auto phi = CylinderFunction::coordinate(1, 1, 2, "x1");
  const double t = 0.05;
  const FunctionalEstimate est =
      bel_gradient(cfg, x, SpectralVector::basis(1, 2), t, phi, 4000);
  const double exact = std::exp(-eigenvalue(1) * t);
  CHECK(std::fabs(est.mean - exact) <= 3.0 * est.stderr_);
  CHECK(est.stderr_ < 0.05);
}

TEST_CASE("bel and common-random-number finite differences agree pathwise") {
  ModelConfig cfg;
  cfg.n_modes = 4;  // cubic drift
  SpectralVector x(4);
  x.c = {0.2, -0.1, 0.05, 0.0};
  const auto phi = CylinderFunction::coordinate(1, 1, 4, "x1");
  const GradientComparison cmp =
      bel_vs_fd(cfg, x, SpectralVector::basis(1, 4), 0.05, phi, 4000, 1e-4);
  CHECK(std::fabs(cmp.diff.mean) <= 3.5 * cmp.diff.stderr_ + 1e-4);
  CHECK(std::fabs(cmp.bel.mean - cmp.fd.mean) / std::fabs(cmp.fd.mean) < 0.25);
}

TEST_CASE("identity e7 balances for the nonlinear two-mode model") {
  ModelConfig cfg;
  cfg.n_modes = 2;
  SpectralVector x(2);
  x.c = {0.25, -0.15};
  SpectralVector lam(2);
  lam.c = {4.0, 2.0};
  const auto phi = CylinderFunction::trig(lam, 0.3, "phi");
  const E7Report rep =
      verify_identity_e7(cfg, x, phi, SpectralVector::basis(1, 2), 0.05, 5, 4000, 120, 120);
  CHECK(std::fabs(rep.residual) <= 3.0 * rep.combined_stderr);
  CHECK(rep.combined_stderr < 1.0);
}

TEST_CASE("ibp lhs matches the gaussian oracle on a sampled ensemble") {
  const SampleEnsemble& ens = gauss_ensemble();
  SpectralVector lam(4);
  lam.c = {3.0, 0.0, 1.0, 0.0};
  const double theta = 0.5;
  const auto phi = CylinderFunction::trig(lam, theta, "phi");
  const FunctionalEstimate lhs = ibp_lhs(ens, phi, SpectralVector::basis(1, 4));
  const double exact = orc::gaussian_trig_ibp_lhs(lam, theta, 1, ens.meta.cfg.gamma);
  CHECK(std::fabs(lhs.mean - exact) <= 4.0 * lhs.stderr_);
}

TEST_CASE("certification table is finite with the sup at low k") {
  const SampleEnsemble& ens = gauss_ensemble();
  const auto dict = default_certify_dictionary(ens, 3);
  CHECK(dict.size() == 12);
  const CertificationTable table = certify_theorem2(ens, dict, {1, 2, 3, 4}, 2.0);
  CHECK(table.rows.size() == 12 * 4);
  CHECK(std::isfinite(table.sup_ratio));
  CHECK(table.sup_ratio > 0.0);
  CHECK(table.sup_k <= 2);
  for (const auto& row : table.rows) {
    CHECK(std::isfinite(row.ratio));
    CHECK(row.norm_h_strong ==
          doctest::Approx(std::pow(eigenvalue(row.k), ens.meta.cfg.beta())).epsilon(1e-12));
  }
}

TEST_CASE("estimate_vz recovers the exact gaussian density coefficient") {
  const SampleEnsemble& ens = gauss_ensemble();
  const ModelConfig& cfg = ens.meta.cfg;
  const SpectralVector z = SpectralVector::basis(1, 4);
  const auto dict = default_vz_dictionary(ens, 3);
  const VzEstimate est = estimate_vz(ens, z, dict);
  const double exact = orc::gaussian_vz_coeff(1, cfg.gamma, cfg.delta);

  // Coefficient of the linear x_1 basis element.
  double coef_x1 = 0.0;
  for (std::size_t i = 0; i < est.basis_ids.size(); ++i)
    if (est.basis_ids[i] == "x1") coef_x1 = est.coef[i];
  CHECK(coef_x1 == doctest::Approx(exact).epsilon(0.10));
  CHECK(est.condition_number < 1e8);

  // Linearity: v_{2z} = 2 v_z.
  const VzEstimate est2 = estimate_vz(ens, 2.0 * z, dict);
  double coef2_x1 = 0.0;
  for (std::size_t i = 0; i < est2.basis_ids.size(); ++i)
    if (est2.basis_ids[i] == "x1") coef2_x1 = est2.coef[i];
  CHECK(coef2_x1 == doctest::Approx(2.0 * coef_x1).epsilon(1e-6));
}

TEST_CASE("degenerate dictionary raises a conditioning error") {
  const SampleEnsemble& ens = gauss_ensemble();
  SpectralVector lam(4);
  lam.c = {1.0, 0.0, 0.0, 0.0};
  // Two identical test functions make the Gram matrix singular.
  std::vector<CylinderFunction> dict = {CylinderFunction::trig(lam, 0.1, "a"),
                                        CylinderFunction::trig(lam, 0.1, "b")};
  CHECK_THROWS_AS(estimate_vz(ens, SpectralVector::basis(1, 4), dict, 1e6),
                  ConditioningError);
}

TEST_CASE("adjoint duality holds with the exact gaussian densities") {
  const SampleEnsemble& ens = gauss_ensemble();
  const ModelConfig& cfg = ens.meta.cfg;
  SpectralVector lam(4);
  lam.c = {2.0, 1.0, 0.0, 0.0};
  const auto phi = CylinderFunction::trig(lam, 0.2, "phi");

  SpectralVector flam(4);
  flam.c = {0.0, 1.5, 0.0, 0.0};
  CylinderField F;
  F.components.push_back({1, CylinderFunction::trig(flam, 0.0, "f1")});

  std::map<std::size_t, std::function<double(const SpectralVector&)>> v;
  v[1] = [&cfg](const SpectralVector& x) {
    return orc::gaussian_vz(SpectralVector::basis(1, 4), x, cfg.gamma, cfg.delta);
  };
  const auto mstar = mstar_apply(F, cfg.beta(), v);
  const FunctionalEstimate res = adjoint_duality_residual(ens, phi, F, mstar);
  CHECK(std::fabs(res.mean) <= 3.5 * res.stderr_);
}

TEST_CASE("lemma ratios are finite, normalized and bounded") {
  ModelConfig cfg;
  cfg.n_modes = 8;
  SpectralVector x0(8);
  const LemmaRatios r = lemma_ratio_path(cfg, x0, SpectralVector::basis(1, 8), 0.05, 3);
  CHECK(r.delta_T >= 1.0);
  CHECK(r.lemma22 > 0.0);
  CHECK(r.lemma23 > 0.0);
  CHECK(r.cor24 > 0.0);
  const LemmaRatioSummary sum = lemma_ratio_sweep(cfg, x0, {1, 5}, 0.05, 5);
  CHECK(sum.n_paths == 10);
  CHECK(sum.sup22 >= r.lemma22 * 0.0);
  CHECK(std::isfinite(sum.sup22 + sum.sup23 + sum.sup24));
}
