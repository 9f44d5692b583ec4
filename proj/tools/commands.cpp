// Copyright 2026 The cvqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "cvqkd/compensation.hpp"
#include "cvqkd/csv.hpp"
#include "cvqkd/errors.hpp"
#include "cvqkd/estimation.hpp"
#include "cvqkd/finite_size.hpp"
#include "cvqkd/frame_io.hpp"
#include "cvqkd/parallel.hpp"
#include "cvqkd/params_json.hpp"
#include "cvqkd/security.hpp"
#include "cvqkd/simulator.hpp"

namespace cvqkd::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kFiberDbPerKm = 0.2;

const std::map<std::string, std::set<std::string>>& section_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"keyrate", {"eta", "eps", "theta_deg", "phi_deg", "variants"}},
      {"tolerance", {"eta", "theta_deg", "phi_deg", "variants"}},
      {"finite",
       {"distances_km", "losses_db", "block_sizes", "z", "eps_smooth", "delta_split", "theta_deg",
        "phi_deg"}},
      {"simulate",
       {"m", "frames", "block_sizes", "z", "eps_smooth", "delta_split", "write_frames"}},
      {"estimate", {"frames", "known", "z"}},
      {"security", {"balance_bs"}},
  };
  return keys;
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

void validate_doc(const json& doc) {
  std::set<std::string> top = {"params", "seed", "out"};
  for (const auto& [k, v] : section_keys()) top.insert(k);
  check_keys(doc, top, "config");
  for (const auto& [k, allowed] : section_keys())
    if (doc.contains(k)) check_keys(doc.at(k), allowed, "'" + k + "'");
  if (doc.contains("params")) params_from_json(doc.at("params"));
  if (doc.contains("estimate") && doc.at("estimate").contains("known"))
    check_keys(doc.at("estimate").at("known"), {"alpha", "v_a", "eta_d"}, "'estimate.known'");
  if (doc.contains("seed") && !doc.at("seed").is_number_unsigned())
    throw ConfigError("'seed' must be an unsigned integer");
  if (doc.contains("out") && !doc.at("out").is_string())
    throw ConfigError("'out' must be a string");
}

const json& section(const RunConfig& cfg, const std::string& name) {
  static const json empty = json::object();
  return cfg.doc.contains(name) ? cfg.doc.at(name) : empty;
}

PhysicalParams base_params(const RunConfig& cfg) {
  PhysicalParams p;
  if (cfg.doc.contains("params")) p = params_from_json(cfg.doc.at("params"));
  return p;
}

SecurityOptions security_options(const RunConfig& cfg) {
  SecurityOptions o;
  const json& s = section(cfg, "security");
  if (s.contains("balance_bs")) {
    if (!s.at("balance_bs").is_boolean()) throw ConfigError("'balance_bs' must be a boolean");
    o.balance_bs = s.at("balance_bs").get<bool>();
  }
  return o;
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ConfigError(what + " must be a number");
  return j.get<double>();
}

// A grid is a number, a list of numbers, or {"from", "to", "n", "log"}.
std::vector<double> grid(const json& s, const std::string& key, double fallback) {
  if (!s.contains(key)) return {fallback};
  const json& j = s.at(key);
  if (j.is_number()) return {j.get<double>()};
  std::vector<double> out;
  if (j.is_array()) {
    for (const auto& v : j) out.push_back(number(v, "'" + key + "' entries"));
  } else if (j.is_object()) {
    check_keys(j, {"from", "to", "n", "log"}, "'" + key + "' grid");
    const double a = number(j.at("from"), "grid 'from'");
    const double b = number(j.at("to"), "grid 'to'");
    if (!j.at("n").is_number_unsigned()) throw ConfigError("grid 'n' must be a positive integer");
    const int n = j.at("n").get<int>();
    const bool lg = j.value("log", false);
    if (n < 1) throw ConfigError("grid 'n' must be >= 1");
    if (lg && !(a > 0 && b > 0)) throw ConfigError("log grid needs positive bounds");
    for (int i = 0; i < n; ++i) {
      const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
      out.push_back(lg ? a * std::pow(b / a, t) : a + (b - a) * t);
    }
  } else {
    throw ConfigError("'" + key + "' must be a number, a list or a grid object");
  }
  if (out.empty()) throw ConfigError("'" + key + "' is empty");
  return out;
}

std::vector<KeyRateVariant> variants(const json& s) {
  if (!s.contains("variants")) return KeyRateVariant::all();
  std::vector<KeyRateVariant> out;
  if (!s.at("variants").is_array()) throw ConfigError("'variants' must be a list");
  for (const auto& v : s.at("variants")) {
    if (!v.is_string()) throw ConfigError("'variants' entries must be strings");
    out.push_back(KeyRateVariant::parse(v.get<std::string>()));
  }
  return out;
}

FiniteSizeConfig finite_config(const json& s, const SecurityOptions& sec) {
  FiniteSizeConfig c;
  if (s.contains("z")) c.z = number(s.at("z"), "'z'");
  if (s.contains("eps_smooth")) c.eps_smooth = number(s.at("eps_smooth"), "'eps_smooth'");
  if (s.contains("delta_split")) c.delta_split = number(s.at("delta_split"), "'delta_split'");
  c.security = sec;
  c.validate();
  return c;
}

std::vector<double> block_sizes(const json& s) {
  if (!s.contains("block_sizes")) return {1e6, 1e7, 1e8};
  return grid(s, "block_sizes", 0);
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  return (fs::path(cfg.out_dir) / name).string();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path);
  return os;
}

std::string row(std::initializer_list<std::string> cells) {
  std::string s;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) s += ',';
    s += c;
    first = false;
  }
  s += '\n';
  return s;
}

std::string f(double v) { return fmt_double(v); }

CovMat4 pooled_covariance(const std::vector<QuadratureFrame>& frames, double& m_total) {
  Eigen::Matrix4d acc = Eigen::Matrix4d::Zero();
  double dof = 0;
  m_total = 0;
  for (const auto& fr : frames) {
    const double d = static_cast<double>(fr.m()) - 1;
    acc += d * empirical_covariance(fr).mat();
    dof += d;
    m_total += static_cast<double>(fr.m());
  }
  return CovMat4(Eigen::Matrix4d(acc / dof));
}

}  // namespace

RunConfig load_config(const RunOptions& opt) {
  RunConfig cfg;
  cfg.doc = json::object();
  if (!opt.config_path.empty()) {
    std::ifstream is(opt.config_path);
    if (!is) throw ConfigError("cannot open config " + opt.config_path);
    try {
      cfg.doc = json::parse(is);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
  }
  validate_doc(cfg.doc);
  if (cfg.doc.contains("seed")) cfg.seed = cfg.doc.at("seed").get<std::uint64_t>();
  if (cfg.doc.contains("out")) cfg.out_dir = cfg.doc.at("out").get<std::string>();
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.out_dir) cfg.out_dir = *opt.out_dir;
  return cfg;
}

std::vector<std::string> cmd_keyrate(const RunConfig& cfg) {
  const PhysicalParams base = base_params(cfg);
  const SecurityOptions sec = security_options(cfg);
  const json& s = section(cfg, "keyrate");
  const auto etas = grid(s, "eta", base.eta);
  const auto epss = grid(s, "eps", base.eps);
  const auto ths = grid(s, "theta_deg", base.theta / kDeg);
  const auto phs = grid(s, "phi_deg", base.phi / kDeg);
  const auto vars = variants(s);

  struct Point {
    KeyRateVariant v;
    PhysicalParams p;
    double th_deg, ph_deg;
    KeyRateReport r;
  };
  std::vector<Point> pts;
  for (const auto& v : vars)
    for (double th : ths)
      for (double ph : phs)
        for (double eta : etas)
          for (double eps : epss) {
            PhysicalParams p = base;
            p.eta = eta;
            p.eps = eps;
            p.theta = th * kDeg;
            p.phi = ph * kDeg;
            p.validate();
            pts.push_back({v, p, th, ph, {}});
          }
  parallel_for(pts.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) pts[i].r = asymptotic_key_rate(pts[i].p, pts[i].v, sec);
  });

  const std::string path = out_path(cfg, "keyrate.csv");
  auto os = open_out(path);
  write_csv_header(os, {"variant", "eta", "eps", "theta_deg", "phi_deg", "mi", "chi", "rate"});
  for (const auto& pt : pts)
    os << row({pt.v.name(), f(pt.p.eta), f(pt.p.eps), f(pt.th_deg), f(pt.ph_deg), f(pt.r.mi),
               f(pt.r.chi), f(pt.r.rate)});
  return {path};
}

std::vector<std::string> cmd_tolerance(const RunConfig& cfg) {
  const PhysicalParams base = base_params(cfg);
  const SecurityOptions sec = security_options(cfg);
  const json& s = section(cfg, "tolerance");
  const auto etas = grid(s, "eta", base.eta);
  const auto ths = grid(s, "theta_deg", base.theta / kDeg);
  const auto phs = grid(s, "phi_deg", base.phi / kDeg);
  const auto vars = variants(s);

  struct Point {
    KeyRateVariant v;
    PhysicalParams p;
    double th_deg, ph_deg, eps_max;
  };
  std::vector<Point> pts;
  for (const auto& v : vars)
    for (double th : ths)
      for (double ph : phs)
        for (double eta : etas) {
          PhysicalParams p = base;
          p.eta = eta;
          p.theta = th * kDeg;
          p.phi = ph * kDeg;
          p.validate();
          pts.push_back({v, p, th, ph, 0});
        }
  parallel_for(pts.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      pts[i].eps_max = max_tolerable_noise(pts[i].p, pts[i].v, sec);
  });

  const std::string path = out_path(cfg, "tolerance.csv");
  auto os = open_out(path);
  write_csv_header(os, {"variant", "theta_deg", "phi_deg", "eta", "eps_max"});
  for (const auto& pt : pts)
    os << row({pt.v.name(), f(pt.th_deg), f(pt.ph_deg), f(pt.p.eta), f(pt.eps_max)});
  return {path};
}

std::vector<std::string> cmd_finite(const RunConfig& cfg) {
  const PhysicalParams base = base_params(cfg);
  const json& s = section(cfg, "finite");
  const FiniteSizeConfig fc = finite_config(s, security_options(cfg));
  const auto sizes = block_sizes(s);

  std::vector<double> losses;
  if (s.contains("distances_km"))
    for (double d : grid(s, "distances_km", 0)) losses.push_back(d * kFiberDbPerKm);
  if (s.contains("losses_db"))
    for (double l : grid(s, "losses_db", 0)) losses.push_back(l);
  if (losses.empty()) losses.push_back(-10 * std::log10(base.eta));
  PhysicalParams shape = base;
  if (s.contains("theta_deg")) shape.theta = number(s.at("theta_deg"), "'theta_deg'") * kDeg;
  if (s.contains("phi_deg")) shape.phi = number(s.at("phi_deg"), "'phi_deg'") * kDeg;

  struct Point {
    double loss, n;
    PhysicalParams p;
    FractionResult kn;
    KeyRateReport kbig;
  };
  std::vector<Point> pts;
  for (double loss : losses)
    for (double n : sizes) {
      PhysicalParams p = shape;
      p.eta = std::pow(10.0, -loss / 10);
      p.validate();
      pts.push_back({loss, n, p, {}, {}});
    }
  parallel_for(pts.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      FiniteSizeConfig c = fc;
      c.n_total = pts[i].n;
      pts[i].kn = optimize_fraction(pts[i].p, c);
      pts[i].kbig = finite_key_rate_model(pts[i].p, c, FiniteScheme::KN);
    }
  });

  const std::string path = out_path(cfg, "finite.csv");
  auto os = open_out(path);
  write_csv_header(os, {"distance_km", "loss_db", "eta", "N", "scheme", "frac_key", "rate"});
  for (const auto& pt : pts) {
    const double km = pt.loss / kFiberDbPerKm;
    os << row({f(km), f(pt.loss), f(pt.p.eta), f(pt.n), "K_n", f(pt.kn.frac_key),
               f(pt.kn.report.rate)});
    os << row({f(km), f(pt.loss), f(pt.p.eta), f(pt.n), "K_N", f(1.0), f(pt.kbig.rate)});
  }
  return {path};
}

std::vector<std::string> cmd_simulate(const RunConfig& cfg) {
  const PhysicalParams truth = base_params(cfg);
  truth.validate();
  const json& s = section(cfg, "simulate");
  const FiniteSizeConfig fc = finite_config(s, security_options(cfg));
  SimConfig sc;
  sc.params = truth;
  sc.seed = cfg.seed;
  const double m = s.contains("m") ? number(s.at("m"), "'m'") : 1e6;
  const double nf = s.contains("frames") ? number(s.at("frames"), "'frames'") : 1;
  if (!(m >= 1000 && m <= 1e12) || !(nf >= 1 && nf <= 1e6))
    throw ConfigError("simulate needs 1000 <= m <= 1e12 and 1 <= frames <= 1e6");
  sc.m = static_cast<std::size_t>(m);
  sc.frames = static_cast<std::size_t>(nf);
  bool write_frames = false;
  if (s.contains("write_frames")) {
    if (!s.at("write_frames").is_boolean()) throw ConfigError("'write_frames' must be a boolean");
    write_frames = s.at("write_frames").get<bool>();
  }
  const auto sizes = block_sizes(s);

  std::vector<std::string> written;
  std::vector<QuadratureFrame> frames;
  for (std::size_t k = 0; k < sc.frames; ++k) {
    frames.push_back(generate_frame(sc, k));
    if (write_frames) {
      char name[32];
      std::snprintf(name, sizeof name, "frame_%03zu.csv", k);
      const std::string path = out_path(cfg, name);
      write_frame(path, frames.back());
      written.push_back(path);
      written.push_back(path + ".json");
    }
  }

  const KnownInputs known{truth.alpha, truth.v_a, truth.eta_d};
  double m_total = 0;
  const CovMat4 pooled = pooled_covariance(frames, m_total);
  const EstimationReport rep = estimate_all(pooled, m_total, known, fc.z);
  const PhysicalParams est = params_from_report(rep, known, truth.beta);

  // Asymptotic rates straight from the data: TT after Alice's transform
  // versus IT without it.
  const TransformSpec spec = alice_transform_angles(pooled);
  const ReceiverModel rx{rep.theta_hat, rep.phi_hat, rep.eta_bs_hat};
  const KeyRateReport tt = key_rate_from_gamma(pooled, rx, known.alpha, known.v_a, truth.beta,
                                               {MiMode::True, HolevoMode::True}, &spec);
  const KeyRateReport it = key_rate_from_gamma(pooled, rx, known.alpha, known.v_a, truth.beta,
                                               {MiMode::Ignorant, HolevoMode::True});

  const std::string rates_path = out_path(cfg, "simulate_rates.csv");
  {
    auto os = open_out(rates_path);
    write_csv_header(os, {"label", "N", "scheme", "frac_key", "mi", "chi", "rate"});
    os << row({"asymptotic_TT_transform", "inf", "asymptotic", f(1.0), f(tt.mi), f(tt.chi),
               f(tt.rate)});
    os << row({"asymptotic_IT", "inf", "asymptotic", f(1.0), f(it.mi), f(it.chi), f(it.rate)});
    for (double n : sizes) {
      FiniteSizeConfig c = fc;
      c.n_total = n;
      const FractionResult kn = optimize_fraction(est, c);
      const KeyRateReport kb = finite_key_rate_model(est, c, FiniteScheme::KN);
      os << row({"K_n_TT_transform", f(n), "K_n", f(kn.frac_key), f(kn.report.mi),
                 f(kn.report.chi), f(kn.report.rate)});
      os << row({"K_N_IT", f(n), "K_N", f(1.0), f(kb.mi), f(kb.chi), f(kb.rate)});
    }
  }
  written.push_back(rates_path);

  nlohmann::ordered_json j;
  j["truth"] = params_to_json(truth);
  j["seed"] = cfg.seed;
  j["m_per_frame"] = sc.m;
  j["frames"] = sc.frames;
  j["estimation"] = rep.to_json();
  j["transform"] = {{"theta_cap_deg", spec.theta_cap / kDeg}, {"phi_cap_deg", spec.phi_cap / kDeg}};
  const std::string jpath = out_path(cfg, "estimation.json");
  open_out(jpath) << j.dump(2) << '\n';
  const std::string tpath = out_path(cfg, "estimation.txt");
  open_out(tpath) << rep.to_text();
  written.push_back(jpath);
  written.push_back(tpath);
  return written;
}

std::vector<std::string> cmd_estimate(const RunConfig& cfg, const std::vector<std::string>& files) {
  const json& s = section(cfg, "estimate");
  std::vector<std::string> paths = files;
  if (paths.empty() && s.contains("frames")) {
    if (!s.at("frames").is_array()) throw ConfigError("'frames' must be a list of paths");
    for (const auto& v : s.at("frames")) {
      if (!v.is_string()) throw ConfigError("'frames' entries must be strings");
      paths.push_back(v.get<std::string>());
    }
  }
  if (paths.empty()) throw ConfigError("estimate needs at least one frame file");

  const PhysicalParams base = base_params(cfg);
  KnownInputs known{base.alpha, base.v_a, base.eta_d};
  if (s.contains("known")) {
    const json& k = s.at("known");
    if (k.contains("alpha")) known.alpha = number(k.at("alpha"), "'alpha'");
    if (k.contains("v_a")) known.v_a = number(k.at("v_a"), "'v_a'");
    if (k.contains("eta_d")) known.eta_d = number(k.at("eta_d"), "'eta_d'");
  }
  const double z = s.contains("z") ? number(s.at("z"), "'z'") : 6.5;

  std::vector<QuadratureFrame> frames;
  for (const auto& p : paths) frames.push_back(read_frame(p));
  std::vector<EstimationReport> reps;
  for (const auto& fr : frames) reps.push_back(estimate_all(fr, known, z));
  double m_total = 0;
  const CovMat4 pooled_g = pooled_covariance(frames, m_total);
  const EstimationReport pooled = estimate_all(pooled_g, m_total, known, z);

  const std::string path = out_path(cfg, "estimate.csv");
  {
    auto os = open_out(path);
    write_csv_header(os, {"frame", "m", "theta_deg", "phi_deg", "delta_deg", "crosscheck_deg",
                          "eta_bs", "alpha", "eta", "eps", "eps_crosscorr"});
    auto emit = [&](const std::string& name, const EstimationReport& r) {
      os << row({name, f(r.m), f(r.theta_hat / kDeg), f(r.phi_hat / kDeg), f(r.delta_hat / kDeg),
                 f(r.crosscheck_delta / kDeg), f(r.eta_bs_hat), f(r.alpha_hat), f(r.eta_hat),
                 f(r.eps_hat), f(r.eps_hat_crosscorr)});
    };
    for (std::size_t i = 0; i < reps.size(); ++i) emit(std::to_string(i), reps[i]);
    emit("pooled", pooled);
  }
  nlohmann::ordered_json j;
  j["pooled"] = pooled.to_json();
  j["frames"] = nlohmann::ordered_json::array();
  for (const auto& r : reps) j["frames"].push_back(r.to_json());
  const std::string jpath = out_path(cfg, "estimation.json");
  open_out(jpath) << j.dump(2) << '\n';
  const std::string tpath = out_path(cfg, "estimation.txt");
  open_out(tpath) << pooled.to_text();
  return {path, jpath, tpath};
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Imbalanced-heterodyne CV-QKD analysis toolkit"};
  RunOptions opt;
  std::uint64_t seed = 0;
  std::string out;
  app.add_option("--config", opt.config_path, "JSON config file");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (overrides config)");
  auto* out_opt = app.add_option("--out", out, "output directory (overrides config)");
  app.require_subcommand(1);
  app.add_subcommand("keyrate", "asymptotic key rates over a parameter grid");
  app.add_subcommand("tolerance", "maximal tolerable excess noise per variant");
  app.add_subcommand("finite", "finite-size rates versus distance");
  app.add_subcommand("simulate", "simulate, estimate, transform and rate");
  auto* est = app.add_subcommand("estimate", "estimate parameters from frame files");
  est->add_option("frames", opt.frame_files, "frame CSV files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (*seed_opt) opt.seed = seed;
  if (*out_opt) opt.out_dir = out;
  opt.command = app.get_subcommands().front()->get_name();

  try {
    const RunConfig cfg = load_config(opt);
    std::vector<std::string> files;
    if (opt.command == "keyrate") files = cmd_keyrate(cfg);
    else if (opt.command == "tolerance") files = cmd_tolerance(cfg);
    else if (opt.command == "finite") files = cmd_finite(cfg);
    else if (opt.command == "simulate") files = cmd_simulate(cfg);
    else files = cmd_estimate(cfg, opt.frame_files);
    for (const auto& p : files) std::cout << p << '\n';
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace cvqkd::cli
