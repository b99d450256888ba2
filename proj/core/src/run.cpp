#include "bergman/run.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "bergman/doubling.hpp"
#include "bergman/errors.hpp"
#include "bergman/report.hpp"
#include "bergman/verify.hpp"
#include "json.hpp"

namespace bergman {

namespace {

using njson = nlohmann::ordered_json;
namespace fs = std::filesystem;

template <typename T>
T field_or(const njson& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const std::exception& e) {
    throw domain_error(std::string("config field '") + key + "': " + e.what());
  }
}

ProfileSpecConfig parse_profile(const njson& j) {
  if (!j.contains("profile"))
    throw domain_error("config: missing 'profile' block");
  const auto& p = j.at("profile");
  ProfileSpecConfig out;
  if (!p.contains("family"))
    throw domain_error("config field 'profile.family': required");
  out.family = p.at("family").get<std::string>();
  out.p = field_or(p, "p", 1.0);
  out.M = field_or(p, "M", 1);
  out.cutoff = field_or(p, "cutoff", 0.5);
  out.kappa = field_or(p, "kappa", 1.0);
  out.pure = field_or(p, "pure", false);
  return out;
}

SweepConfig parse_sweep(const njson& j, size_t idx) {
  SweepConfig out;
  out.name = field_or(j, "name", std::string("sweep") + std::to_string(idx));
  if (!j.contains("kind"))
    throw domain_error("config sweep '" + out.name + "': missing 'kind'");
  out.kind = j.at("kind").get<std::string>();
  if (out.kind != "kernel_band" && out.kind != "sandwich" && out.kind != "metric_band")
    throw domain_error("config sweep '" + out.name + "': unknown kind " + out.kind);
  out.alpha = field_or(j, "alpha", 1.0);
  out.N = field_or(j, "N", 2);
  out.t_min = field_or(j, "t_min", 1e-6);
  out.t_max = field_or(j, "t_max", 1e-2);
  out.points = field_or(j, "points", 30);
  out.path = field_or(j, "path", std::string("origin"));
  out.theta = field_or(j, "theta", 0.5);
  out.band_limit = field_or(j, "band_limit", 1e3);
  out.slope_tol = field_or(j, "slope_tol", 0.1);
  out.k_max = field_or(j, "k_max", 64);
  if (j.contains("directions")) {
    for (const auto& d : j.at("directions")) {
      if (!d.is_array() || d.size() != 4)
        throw domain_error("config sweep '" + out.name +
                           "': directions entries are [re xi1, im xi1, re xi2, im xi2]");
      out.directions.push_back({d[0].get<double>(), d[1].get<double>(),
                                d[2].get<double>(), d[3].get<double>()});
    }
  }
  return out;
}

njson band_to_json(const BandReport& rep) {
  njson j;
  j["name"] = rep.name;
  j["kind"] = rep.kind;
  j["c_lo"] = rep.c_lo;
  j["c_hi"] = rep.c_hi;
  j["slope"] = rep.slope;
  j["band_ok"] = rep.band_ok;
  j["slope_ok"] = rep.slope_ok;
  j["rows_ok"] = rep.rows_ok;
  j["excluded"] = rep.excluded_count;
  j["r_alpha_N"] = rep.r_alpha_N;
  j["r0"] = rep.r0;
  j["pass"] = rep.pass();
  return j;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  njson j;
  try {
    j = njson::parse(json_text);
  } catch (const njson::parse_error& e) {
    throw domain_error(std::string("config parse error: ") + e.what());
  }
  RunConfig cfg;
  cfg.version = field_or(j, "version", 1);
  if (cfg.version != 1) throw domain_error("config: unsupported schema version");
  cfg.profile = parse_profile(j);
  cfg.validate = field_or(j, "validate", true);
  if (j.contains("doubling")) {
    cfg.doubling.enabled = true;
    cfg.doubling.R = field_or(j.at("doubling"), "R", 0.4);
    cfg.doubling.sigma_max = field_or(j.at("doubling"), "sigma_max", 1e6);
  }
  if (j.contains("sweeps")) {
    size_t idx = 0;
    for (const auto& s : j.at("sweeps")) cfg.sweeps.push_back(parse_sweep(s, idx++));
  }
  cfg.output_dir = field_or(j, "output_dir", std::string("out"));
  if (j.contains("formats")) {
    cfg.formats.clear();
    for (const auto& f : j.at("formats")) cfg.formats.push_back(f.get<std::string>());
  }
  if (j.contains("parallelism")) {
    const auto& p = j.at("parallelism");
    cfg.parallelism = p.is_string() ? 0 : p.get<int>();
  }
  cfg.seed = field_or(j, "seed", std::uint64_t{0});
  if (!cfg.validate && cfg.sweeps.empty())
    throw domain_error("config: at least one sweep or validation task required");
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw domain_error("config file not found: " + path);
  std::string text((std::istreambuf_iterator<char>(f)),
                   std::istreambuf_iterator<char>());
  return parse_run_config(text);
}

RadialProfile make_profile(const ProfileSpecConfig& spec) {
  if (spec.family == "exp_inverse")
    return RadialProfile::exp_inverse(spec.p, spec.cutoff, spec.kappa);
  if (spec.family == "double_exp")
    return RadialProfile::double_exp(spec.cutoff, spec.kappa);
  if (spec.family == "monomial")
    return spec.pure ? RadialProfile::monomial_pure(spec.M)
                     : RadialProfile::monomial(spec.M, spec.cutoff, spec.kappa);
  throw domain_error("config field 'profile.family': unknown family " + spec.family);
}

int run(const RunConfig& cfg, std::ostream& log, const std::string& only_sweep) {
  const int threads = [&] {
    if (const char* env = std::getenv("BERGMAN_LAB_THREADS")) {
      const int n = std::atoi(env);
      if (n > 0) return n;
    }
    return cfg.parallelism;
  }();

  fs::create_directories(cfg.output_dir);
  const bool want_csv =
      std::find(cfg.formats.begin(), cfg.formats.end(), "csv") != cfg.formats.end();
  const bool want_svg =
      std::find(cfg.formats.begin(), cfg.formats.end(), "svg") != cfg.formats.end();

  njson summary;
  summary["version"] = 1;
  summary["profile"] = {{"family", cfg.profile.family}, {"p", cfg.profile.p},
                        {"M", cfg.profile.M},           {"cutoff", cfg.profile.cutoff},
                        {"kappa", cfg.profile.kappa},   {"pure", cfg.profile.pure}};
  bool all_pass = true;

  const RadialProfile profile = make_profile(cfg.profile);

  if (cfg.validate) {
    const auto rep = validate(profile);
    njson v;
    v["f0_zero"] = rep.f0_zero;
    v["strictly_increasing"] = rep.strictly_increasing;
    v["subharmonic"] = rep.subharmonic;
    v["grows_to_infinity"] = rep.grows_to_infinity;
    v["infinite_order_vanishing"] = rep.infinite_order_vanishing;
    v["all_pass"] = rep.all_pass();
    if (!rep.witnesses.empty()) {
      njson w = njson::array();
      for (const auto& wit : rep.witnesses)
        w.push_back({{"check", wit.check}, {"x", wit.x}, {"detail", wit.detail}});
      v["witnesses"] = w;
    }
    summary["validation"] = v;
    all_pass = all_pass && rep.all_pass();
    log << "validation: " << (rep.all_pass() ? "pass" : "FAIL") << "\n";
  }

  DoublingCertificate cert;
  bool have_cert = false;
  if (cfg.doubling.enabled) {
    auto view = make_lambda_view(profile);
    auto out = find_sigma(view, cfg.doubling.R, cfg.doubling.sigma_max);
    njson d;
    if (std::holds_alternative<DoublingCertificate>(out)) {
      cert = std::get<DoublingCertificate>(out);
      have_cert = true;
      d["found"] = true;
      d["certificate"] = njson::parse(certificate_to_json(cert));
      log << "doubling: sigma = " << cert.sigma << "\n";
    } else {
      const auto& ev = std::get<NotDoublingEvidence>(out);
      d["found"] = false;
      d["sigma_max"] = ev.sigma_max;
      d["witness_count"] = ev.witnesses.size();
      if (!ev.witnesses.empty()) {
        const auto& w = ev.witnesses.back();
        d["last_witness"] = {
            {"sigma", w.sigma}, {"x", w.x}, {"lhs", w.lhs}, {"rhs", w.rhs}};
      }
      all_pass = false;
      log << "doubling: no certificate up to sigma_max\n";
    }
    summary["doubling"] = d;
  }

  summary["sweeps"] = njson::array();
  for (const auto& sc : cfg.sweeps) {
    if (!only_sweep.empty() && sc.name != only_sweep) continue;
    if (!have_cert) {
      njson sj;
      sj["name"] = sc.name;
      sj["kind"] = sc.kind;
      sj["pass"] = false;
      sj["skipped"] = "no doubling certificate";
      summary["sweeps"].push_back(sj);
      all_pass = false;
      log << "sweep " << sc.name << ": skipped (no doubling certificate)\n";
      continue;
    }
    SweepSpec spec;
    spec.profile = &profile;
    spec.cert = cert;
    spec.region = ApproachRegion{sc.alpha, sc.N};
    spec.t_min = sc.t_min;
    spec.t_max = sc.t_max;
    spec.points = sc.points;
    spec.path = sc.path == "edge" ? ZPath{ZPathKind::RegionEdge, sc.theta}
                                  : ZPath{ZPathKind::Origin, 0.0};
    spec.band_limit = sc.band_limit;
    spec.slope_tol = sc.slope_tol;
    spec.slicing.k_max = sc.k_max;
    spec.name = sc.name;

    std::vector<BandReport> reports;
    if (sc.kind == "kernel_band") {
      reports.push_back(sweep_kernel_band(spec, threads));
    } else if (sc.kind == "sandwich") {
      reports.push_back(sweep_sandwich(spec, threads));
    } else {
      std::vector<std::pair<std::complex<double>, std::complex<double>>> dirs;
      for (const auto& d : sc.directions)
        dirs.push_back({{d[0], d[1]}, {d[2], d[3]}});
      if (dirs.empty()) {
        dirs.push_back({{1.0, 0.0}, {0.0, 0.0}});
        dirs.push_back({{0.0, 0.0}, {1.0, 0.0}});
      }
      reports = sweep_metric_band(spec, dirs, threads);
    }

    for (const auto& rep : reports) {
      njson sj = band_to_json(rep);
      if (want_csv) {
        const std::string csv = cfg.output_dir + "/" + rep.name + ".csv";
        write_band_csv(csv, rep);
        sj["csv"] = rep.name + ".csv";
      }
      if (want_svg) {
        const std::string svg = cfg.output_dir + "/" + rep.name + ".svg";
        write_band_svg(svg, rep);
        sj["svg"] = rep.name + ".svg";
      }
      summary["sweeps"].push_back(sj);
      all_pass = all_pass && rep.pass();
      log << "sweep " << rep.name << ": " << (rep.pass() ? "pass" : "FAIL")
          << " (c_hi/c_lo = " << (rep.c_lo > 0 ? rep.c_hi / rep.c_lo : 0.0)
          << ", slope = " << rep.slope << ")\n";
    }
  }

  summary["overall_pass"] = all_pass;
  {
    std::ofstream f(cfg.output_dir + "/summary.json", std::ios::binary);
    if (!f) throw computation_error("cannot write summary.json");
    f << summary.dump(2) << "\n";
  }
  return all_pass ? 0 : 2;
}

}  // namespace bergman
