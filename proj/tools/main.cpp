#include <complex>
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "bergman/doubling.hpp"
#include "bergman/errors.hpp"
#include "bergman/kernel.hpp"
#include "bergman/metric.hpp"
#include "bergman/profile.hpp"
#include "bergman/run.hpp"

namespace {

using bergman::RadialProfile;

struct ProfileFlags {
  std::string name = "expinv";
  double p = 1.0;
  int M = 1;
  double cutoff = 0.5;
  double kappa = 1.0;
};

void add_profile_flags(CLI::App* cmd, ProfileFlags& pf) {
  cmd->add_option("--profile", pf.name,
                  "expinv | doubleexp | monomial | quadratic-pure | quartic-pure");
  cmd->add_option("--p", pf.p, "exponent for expinv");
  cmd->add_option("--M", pf.M, "half-degree for monomial");
  cmd->add_option("--cutoff", pf.cutoff, "core cutoff x_c");
  cmd->add_option("--kappa", pf.kappa, "quadratic extension coefficient");
}

RadialProfile build_profile(const ProfileFlags& pf) {
  if (pf.name == "expinv")
    return RadialProfile::exp_inverse(pf.p, pf.cutoff, pf.kappa);
  if (pf.name == "doubleexp") return RadialProfile::double_exp(pf.cutoff, pf.kappa);
  if (pf.name == "monomial")
    return RadialProfile::monomial(pf.M, pf.cutoff, pf.kappa);
  if (pf.name == "quadratic-pure") return RadialProfile::monomial_pure(1);
  if (pf.name == "quartic-pure") return RadialProfile::monomial_pure(2);
  throw bergman::domain_error("unknown profile: " + pf.name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bergman-lab: model-domain kernel and metric growth laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::string sweep_name;
  auto* run_cmd = app.add_subcommand("run", "execute a full run configuration");
  run_cmd->add_option("config", config_path, "JSON run configuration")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "run a single named sweep");
  sweep_cmd->add_option("config", config_path, "JSON run configuration")->required();
  sweep_cmd->add_option("--name", sweep_name, "sweep name")->required();

  ProfileFlags vpf;
  auto* val_cmd = app.add_subcommand("profile-validate", "check profile hypotheses");
  add_profile_flags(val_cmd, vpf);

  ProfileFlags dpf;
  double dbl_R = 0.4, dbl_sigma_max = 1e6;
  auto* dbl_cmd = app.add_subcommand("doubling-find", "search for a doubling constant");
  add_profile_flags(dbl_cmd, dpf);
  dbl_cmd->add_option("--R", dbl_R, "doubling interval endpoint");
  dbl_cmd->add_option("--sigma-max", dbl_sigma_max, "ladder cap");

  ProfileFlags kpf;
  double k_zabs = 0.0, k_imw = 0.5;
  int k_max = 64;
  auto* ker_cmd = app.add_subcommand("kernel-eval", "diagonal kernel at one point");
  add_profile_flags(ker_cmd, kpf);
  ker_cmd->add_option("--z-abs", k_zabs, "|z|");
  ker_cmd->add_option("--im-w", k_imw, "Im w");
  ker_cmd->add_option("--k-max", k_max, "series truncation cap");

  ProfileFlags mpf;
  double m_zabs = 0.0, m_imw = 0.5;
  auto* met_cmd = app.add_subcommand("metric-eval", "metric form at one point");
  add_profile_flags(met_cmd, mpf);
  met_cmd->add_option("--z-abs", m_zabs, "|z|");
  met_cmd->add_option("--im-w", m_imw, "Im w");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const auto cfg = bergman::load_run_config(config_path);
      return bergman::run(cfg, std::cout);
    }
    if (*sweep_cmd) {
      const auto cfg = bergman::load_run_config(config_path);
      return bergman::run(cfg, std::cout, sweep_name);
    }
    if (*val_cmd) {
      const auto profile = build_profile(vpf);
      const auto rep = bergman::validate(profile);
      std::printf("profile: %s\n", profile.name().c_str());
      std::printf("  f(0) = 0:                 %s\n", rep.f0_zero ? "pass" : "FAIL");
      std::printf("  strictly increasing:      %s\n",
                  rep.strictly_increasing ? "pass" : "FAIL");
      std::printf("  subharmonic:              %s\n", rep.subharmonic ? "pass" : "FAIL");
      std::printf("  grows to infinity:        %s\n",
                  rep.grows_to_infinity ? "pass" : "FAIL");
      std::printf("  infinite-order vanishing: %s\n",
                  rep.infinite_order_vanishing ? "pass" : "FAIL");
      for (const auto& w : rep.witnesses)
        std::printf("  witness [%s] x = %.6g (%.6g)\n", w.check.c_str(), w.x, w.detail);
      return rep.all_pass() ? 0 : 2;
    }
    if (*dbl_cmd) {
      const auto profile = build_profile(dpf);
      auto view = bergman::make_lambda_view(profile);
      auto out = bergman::find_sigma(view, dbl_R, dbl_sigma_max);
      if (std::holds_alternative<bergman::DoublingCertificate>(out)) {
        const auto& cert = std::get<bergman::DoublingCertificate>(out);
        std::printf("%s\n", bergman::certificate_to_json(cert).c_str());
        return 0;
      }
      const auto& ev = std::get<bergman::NotDoublingEvidence>(out);
      std::printf("{\"found\":false,\"sigma_max\":%.17g,\"witnesses\":%zu}\n",
                  ev.sigma_max, ev.witnesses.size());
      return 2;
    }
    if (*ker_cmd) {
      const auto profile = build_profile(kpf);
      bergman::SlicingConfig cfg;
      cfg.k_max = k_max;
      auto kv = bergman::reference_kernel_diag(profile, k_zabs, k_imw, cfg);
      std::printf("{\"k\":%.17g,\"error\":%.3g,\"converged\":%s}\n", kv.value,
                  kv.error, kv.converged ? "true" : "false");
      return kv.converged ? 0 : 2;
    }
    if (*met_cmd) {
      const auto profile = build_profile(mpf);
      auto m = bergman::metric_reference(profile, m_zabs, m_imw);
      std::printf(
          "{\"g11\":%.17g,\"g22\":%.17g,\"g12_re\":%.17g,\"g12_im\":%.17g}\n",
          m.g11, m.g22, m.g12.real(), m.g12.imag());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
