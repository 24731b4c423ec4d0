// eawarp: align one pair of rating recordings, run the synthetic study, or
// sweep a directory layout of recordings. Exit codes: 0 success (including
// --help/--version), 2 usage or input errors, 3 mutually exclusive options.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eawarp/align.hpp"
#include "eawarp/io.hpp"
#include "eawarp/lmm.hpp"
#include "eawarp/numeric.hpp"
#include "eawarp/preprocess.hpp"
#include "eawarp/simulate.hpp"
#include "eawarp/version.hpp"
#include "eawarp/warping.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitError = 2;     // bad usage, unreadable or malformed input
constexpr int kExitConflict = 3;  // options that contradict each other

/// Value-dependent option conflicts that CLI11's excludes() cannot see.
struct ConflictError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Options shared by every command that aligns something.
struct SearchOptions {
  std::string method = "srvf";  // srvf | fixed-delay | identity
  double nu = 8.0;              // native time units
  bool unbounded = false;
  int window = 7;
  bool exhaustive = false;
};

void add_search_options(CLI::App& cmd, SearchOptions& s) {
  cmd.add_option("--method", s.method,
                 "Warping model: srvf, fixed-delay, or identity")
      ->check(CLI::IsMember({"srvf", "fixed-delay", "identity"}))
      ->capture_default_str();
  auto* nu = cmd.add_option("--nu", s.nu,
                            "Max |gamma(t) - t| in native time units")
                 ->check(CLI::PositiveNumber)
                 ->capture_default_str();
  auto* unb =
      cmd.add_flag("--unbounded", s.unbounded, "Search with no deviation bound");
  auto* win = cmd.add_option("--window", s.window,
                             "Max grid steps per search segment")
                  ->check(CLI::Range(1, 1000000))
                  ->capture_default_str();
  auto* exh = cmd.add_flag(
      "--exhaustive", s.exhaustive,
      "Consider every predecessor node (grids up to 61 points)");
  nu->excludes(unb);
  unb->excludes(nu);
  win->excludes(exh);
  exh->excludes(win);
}

eawarp::AlignmentMethod make_method(const SearchOptions& s, double span) {
  if (s.method == "identity") return eawarp::AlignmentMethod::identity();
  const auto bound = s.unbounded
                         ? eawarp::NormalizedBound::unbounded()
                         : eawarp::NormalizedBound::native(s.nu, span);
  if (s.method == "fixed-delay") {
    if (s.unbounded)
      throw ConflictError(
          "--unbounded cannot be combined with --method fixed-delay");
    return eawarp::AlignmentMethod::fixed_delay(bound);
  }
  const auto dp = s.exhaustive ? eawarp::DpMode::exhaustive_mode()
                               : eawarp::DpMode::windowed(s.window);
  return eawarp::AlignmentMethod::srvf(bound, dp);
}

std::string search_label(const eawarp::AlignmentMethod& m) {
  switch (m.kind) {
    case eawarp::AlignmentMethod::Kind::identity:
      return "none";
    case eawarp::AlignmentMethod::Kind::fixed_delay:
      return "delay-scan";
    case eawarp::AlignmentMethod::Kind::srvf:
      return m.dp.exhaustive ? "exhaustive"
                             : "window:" + std::to_string(m.dp.window);
  }
  return "unknown";
}

/// Presmoothing spec: none | spline | kernel:<bandwidth in native units>.
eawarp::SampledFunction apply_smoothing(const eawarp::SampledFunction& f,
                                        const std::string& spec) {
  if (spec == "none") return f;
  if (spec == "spline") return eawarp::spline_smooth_gcv(f);
  if (spec.rfind("kernel:", 0) == 0) {
    const std::string arg = spec.substr(7);
    double h = 0;
    std::size_t used = 0;
    try {
      h = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != arg.size() || !std::isfinite(h) || h <= 0)
      throw std::invalid_argument(
          "--smooth kernel bandwidth must be a positive number, got \"" + arg +
          "\"");
    return eawarp::kernel_smooth(f, h);
  }
  throw std::invalid_argument(
      "--smooth must be none, spline, or kernel:<bandwidth>, got \"" + spec +
      "\"");
}

eawarp::SampledFunction load_uniform(const std::string& path, int grid_points,
                                     const std::string& smooth) {
  return apply_smoothing(
      eawarp::to_uniform(eawarp::read_rating_csv(path), grid_points), smooth);
}

json meta_json(const std::string& kind) {
  json j;
  j["kind"] = kind;
  j["schema_version"] = 1;
  j["version"] = eawarp::kVersionString;
  j["conventions"] = json::array();
  for (const char* c : eawarp::kConventions) j["conventions"].push_back(c);
  return j;
}

json json_opt(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string csv_opt(const std::optional<double>& v) {
  return v ? eawarp::format_g17(*v) : std::string{};
}

void say_wrote(const std::string& path) { std::cout << "wrote " << path << '\n'; }

// ---------------------------------------------------------------- align ---

struct AlignCmd {
  std::string target, perceiver;
  int grid = 300;
  SearchOptions search;
  std::string smooth = "none";
  std::string out_dir = ".";
};

int run_align(const AlignCmd& o) {
  const auto x = load_uniform(o.target, o.grid, o.smooth);
  const auto y = load_uniform(o.perceiver, o.grid, o.smooth);
  if (!(x.grid() == y.grid()))
    throw std::runtime_error(
        "align: target and perceiver must cover the same time range (target "
        "[" +
        eawarp::format_g17(x.grid().t0()) + ", " +
        eawarp::format_g17(x.grid().t1()) + "], perceiver [" +
        eawarp::format_g17(y.grid().t0()) + ", " +
        eawarp::format_g17(y.grid().t1()) + "])");
  const auto method = make_method(o.search, x.grid().span());
  const auto r = eawarp::align(x, y, method);

  const std::string stem = fs::path(o.perceiver).stem().string();
  const fs::path out(o.out_dir);
  const std::string aligned_path = (out / ("aligned_" + stem + ".csv")).string();
  const std::string warping_path = (out / ("warping_" + stem + ".csv")).string();
  const std::string metrics_path = (out / "metrics.json").string();

  eawarp::write_file_atomic(aligned_path, eawarp::function_csv(r.aligned, "value"));
  eawarp::write_file_atomic(warping_path, eawarp::warping_csv(r.warping));

  json j = meta_json("alignment_report");
  j["inputs"] = {{"target", o.target},
                 {"perceiver", o.perceiver},
                 {"grid_points", o.grid},
                 {"smooth", o.smooth}};
  j["method"] = method.label();
  j["nu"] = method.bound.bounded() ? json(method.bound.nu_native()) : json(nullptr);
  j["search"] = search_label(method);
  j["cost"] = r.cost;
  j["sup_deviation"] = r.sup_deviation;
  j["phase_distance"] = r.phase_distance;
  j["correlation_before"] = json_opt(eawarp::pearson_raw(x.values(), y.values()));
  j["correlation_after"] =
      json_opt(eawarp::pearson_raw(x.values(), r.aligned.values()));
  j["outputs"] = {{"aligned", aligned_path}, {"warping", warping_path}};
  eawarp::write_file_atomic(metrics_path, j.dump(2) + "\n");

  say_wrote(aligned_path);
  say_wrote(warping_path);
  say_wrote(metrics_path);
  return 0;
}

// ------------------------------------------------------------- simulate ---

struct SimulateCmd {
  std::string config_path;
  int targets = 0, perceivers = 0, grid = 0;
  double domain_end = 0;
  double eta_fixed = 0, eta_shape = 0, eta_scale = 0;
  double nu = 0;
  int window = 0;
  bool exhaustive = false;
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string out_dir = ".";
};

void apply_config_file(const std::string& path, eawarp::SimConfig& cfg,
                       int& window, bool& exhaustive) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("config " + path + ": cannot open");
  json j;
  try {
    j = json::parse(in);
  } catch (const std::exception& e) {
    throw std::runtime_error("config " + path + ": " + e.what());
  }
  try {
    if (!j.is_object())
      throw std::runtime_error("top level must be a JSON object");
    static const std::set<std::string> known = {
        "targets", "perceivers", "grid_points", "domain_end", "eta",
        "nu",      "window",     "exhaustive",  "seed",       "jobs"};
    for (const auto& item : j.items())
      if (!known.count(item.key()))
        throw std::runtime_error("unknown key \"" + item.key() + "\"");
    if (j.contains("targets")) cfg.n_targets = j.at("targets").get<int>();
    if (j.contains("perceivers"))
      cfg.n_perceivers = j.at("perceivers").get<int>();
    if (j.contains("grid_points"))
      cfg.grid_points = j.at("grid_points").get<int>();
    if (j.contains("domain_end"))
      cfg.domain_end = j.at("domain_end").get<double>();
    if (j.contains("eta")) {
      const json& e = j.at("eta");
      if (!e.is_object()) throw std::runtime_error("\"eta\" must be an object");
      for (const auto& item : e.items())
        if (item.key() != "fixed" && item.key() != "shape" &&
            item.key() != "scale")
          throw std::runtime_error("unknown key \"eta." + item.key() + "\"");
      const bool has_fixed = e.contains("fixed");
      const bool has_gamma = e.contains("shape") || e.contains("scale");
      if (has_fixed && has_gamma)
        throw ConflictError("config " + path +
                            ": eta gives both fixed and shape/scale");
      if (has_fixed)
        cfg.eta = eawarp::EtaDistribution::fixed(e.at("fixed").get<double>());
      else
        cfg.eta = eawarp::EtaDistribution::gamma_dist(e.value("shape", 30.0),
                                                      e.value("scale", 1.0));
    }
    if (j.contains("nu")) cfg.nu_align = j.at("nu").get<double>();
    if (j.contains("window")) window = j.at("window").get<int>();
    if (j.contains("exhaustive")) exhaustive = j.at("exhaustive").get<bool>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<int>();
  } catch (const ConflictError&) {
    throw;
  } catch (const std::exception& e) {
    throw std::runtime_error("config " + path + ": " + e.what());
  }
}

eawarp::SimConfig resolve_sim_config(const CLI::App& cmd, const SimulateCmd& o) {
  eawarp::SimConfig cfg;  // library defaults
  int window = cfg.dp.window;
  bool exhaustive = cfg.dp.exhaustive;
  if (cmd.count("--config")) apply_config_file(o.config_path, cfg, window, exhaustive);
  if (cmd.count("--targets")) cfg.n_targets = o.targets;
  if (cmd.count("--perceivers")) cfg.n_perceivers = o.perceivers;
  if (cmd.count("--grid")) cfg.grid_points = o.grid;
  if (cmd.count("--domain-end")) cfg.domain_end = o.domain_end;
  if (cmd.count("--eta-fixed")) {
    cfg.eta = eawarp::EtaDistribution::fixed(o.eta_fixed);
  } else if (cmd.count("--eta-shape") || cmd.count("--eta-scale")) {
    const bool was_gamma = !cfg.eta.is_fixed;
    const double shape =
        cmd.count("--eta-shape") ? o.eta_shape : (was_gamma ? cfg.eta.shape : 30.0);
    const double scale =
        cmd.count("--eta-scale") ? o.eta_scale : (was_gamma ? cfg.eta.scale : 1.0);
    cfg.eta = eawarp::EtaDistribution::gamma_dist(shape, scale);
  }
  if (cmd.count("--nu")) cfg.nu_align = o.nu;
  if (cmd.count("--window")) {
    window = o.window;
    exhaustive = false;
  }
  if (cmd.count("--exhaustive")) exhaustive = true;
  if (cmd.count("--seed")) cfg.seed = o.seed;
  if (cmd.count("--jobs")) cfg.jobs = o.jobs;
  cfg.dp = exhaustive ? eawarp::DpMode::exhaustive_mode()
                      : eawarp::DpMode::windowed(window);
  return cfg;
}

int run_simulate(const CLI::App& cmd, const SimulateCmd& o) {
  const auto cfg = resolve_sim_config(cmd, o);
  cfg.validate();
  const auto report = eawarp::run_simulation(cfg);
  const fs::path out(o.out_dir);
  const std::string csv_path = (out / "report.csv").string();
  const std::string json_path = (out / "report.json").string();
  eawarp::write_file_atomic(csv_path, eawarp::report_csv(report));
  eawarp::write_file_atomic(json_path, eawarp::report_json(report));
  say_wrote(csv_path);
  say_wrote(json_path);
  std::cout << "cell " << report.cell << '\n';
  return 0;
}

// ------------------------------------------------------------- ea-study ---

struct StudyCmd {
  std::string layout;
  std::string mode = "corr";
  int grid = 300;
  SearchOptions search;
  std::string smooth = "none";
  double min_corr = 0.0;
  std::string out_dir = ".";
};

struct KeptPair {
  std::string perceiver, stimulus;
  double rho_raw = 0;
  std::optional<double> rho_aligned;
  double cost = 0, sup_deviation = 0, phase_distance = 0;
};

struct DroppedPair {
  std::string perceiver, stimulus;
  std::optional<double> correlation;
  std::string reason;
};

std::map<std::string, fs::path> list_csvs(const fs::path& dir) {
  std::map<std::string, fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".csv")
      out.emplace(e.path().stem().string(), e.path());
  return out;
}

int run_study(const StudyCmd& o) {
  if (o.search.method == "fixed-delay" && o.search.unbounded)
    throw ConflictError(
        "--unbounded cannot be combined with --method fixed-delay");

  const fs::path root(o.layout);
  const fs::path tdir = root / "targets";
  const fs::path pdir = root / "perceivers";
  if (!fs::is_directory(tdir))
    throw std::runtime_error("ea-study: missing directory " + tdir.string());
  if (!fs::is_directory(pdir))
    throw std::runtime_error("ea-study: missing directory " + pdir.string());
  const auto target_files = list_csvs(tdir);
  if (target_files.empty())
    throw std::runtime_error("ea-study: no target CSVs in " + tdir.string());
  std::map<std::string, fs::path> perceiver_dirs;
  for (const auto& e : fs::directory_iterator(pdir))
    if (e.is_directory())
      perceiver_dirs.emplace(e.path().filename().string(), e.path());
  if (perceiver_dirs.empty())
    throw std::runtime_error("ea-study: no perceiver directories in " +
                             pdir.string());

  std::map<std::string, eawarp::SampledFunction> targets;
  for (const auto& [stim, path] : target_files)
    targets.emplace(stim, load_uniform(path.string(), o.grid, o.smooth));

  std::vector<KeptPair> kept;
  std::vector<DroppedPair> dropped;
  std::map<std::string, eawarp::MixedModelData> lmm_data;
  std::map<std::string, std::vector<std::string>> lmm_stimuli;

  for (const auto& [pid, dir] : perceiver_dirs) {
    for (const auto& [stim, path] : list_csvs(dir)) {
      const auto t_it = targets.find(stim);
      if (t_it == targets.end()) {
        dropped.push_back({pid, stim, std::nullopt, "no_matching_target"});
        continue;
      }
      const auto y = load_uniform(path.string(), o.grid, o.smooth);
      const auto& x = t_it->second;
      if (!(x.grid() == y.grid())) {
        dropped.push_back({pid, stim, std::nullopt, "domain_mismatch"});
        continue;
      }
      const auto rho = eawarp::pearson_raw(x.values(), y.values());
      if (!rho) {
        dropped.push_back({pid, stim, std::nullopt, "undefined_correlation"});
        continue;
      }
      if (*rho < o.min_corr) {
        dropped.push_back({pid, stim, rho, "below_threshold"});
        continue;
      }
      try {
        const auto r = eawarp::align(x, y, make_method(o.search, x.grid().span()));
        kept.push_back({pid, stim, *rho,
                        eawarp::pearson_raw(x.values(), r.aligned.values()),
                        r.cost, r.sup_deviation, r.phase_distance});
        if (o.mode == "lmm") {
          auto& d = lmm_data[pid];
          d.x.push_back(x);
          d.y.push_back(r.aligned);
          d.warpings.push_back(r.warping);
          lmm_stimuli[pid].push_back(stim);
        }
      } catch (const ConflictError&) {
        throw;  // option conflicts are global, not a property of one pair
      } catch (const std::exception&) {
        dropped.push_back({pid, stim, rho, "alignment_failed"});
      }
    }
  }

  std::string corr_csv =
      "perceiver,stimulus,rho_raw,rho_aligned,cost,sup_deviation,phase_distance\n";
  for (const auto& k : kept)
    corr_csv += k.perceiver + "," + k.stimulus + "," +
                eawarp::format_g17(k.rho_raw) + "," + csv_opt(k.rho_aligned) +
                "," + eawarp::format_g17(k.cost) + "," +
                eawarp::format_g17(k.sup_deviation) + "," +
                eawarp::format_g17(k.phase_distance) + "\n";
  std::string drop_csv = "perceiver,stimulus,correlation,reason\n";
  for (const auto& d : dropped)
    drop_csv += d.perceiver + "," + d.stimulus + "," + csv_opt(d.correlation) +
                "," + d.reason + "\n";

  const fs::path out(o.out_dir);
  const std::string corr_path = (out / "correlations.csv").string();
  const std::string drop_path = (out / "dropped.csv").string();
  eawarp::write_file_atomic(corr_path, corr_csv);
  eawarp::write_file_atomic(drop_path, drop_csv);
  say_wrote(corr_path);
  say_wrote(drop_path);

  if (o.mode == "lmm") {
    json fits = json::array();
    json skipped = json::array();
    std::string summary_csv =
        "perceiver,n_stimuli,beta0,beta1,sigma2,sigma2_b0,sigma2_b1,"
        "reml_loglik,converged,evaluations,mean_phase,vertical\n";
    for (const auto& [pid, data] : lmm_data) {
      const auto& stims = lmm_stimuli.at(pid);
      if (data.x.size() < 2) {
        skipped.push_back({{"perceiver", pid},
                           {"n_stimuli", data.x.size()},
                           {"reason", "needs at least 2 usable stimuli"}});
        continue;
      }
      try {
        const auto fit = eawarp::fit_reml(data);
        const auto fm = eawarp::fit_metrics(data, fit);
        json f;
        f["perceiver"] = pid;
        f["n_stimuli"] = data.x.size();
        f["stimuli"] = stims;
        f["beta0"] = fit.beta0;
        f["beta1"] = fit.beta1;
        f["sigma2"] = fit.sigma2;
        f["sigma2_b0"] = fit.sigma2_b0;
        f["sigma2_b1"] = fit.sigma2_b1;
        f["at_lower_bound"] =
            json::array({fit.at_lower_bound[0], fit.at_lower_bound[1],
                         fit.at_lower_bound[2]});
        f["reml_loglik"] = fit.reml_loglik;
        f["converged"] = fit.converged;
        f["evaluations"] = fit.evaluations;
        f["mean_phase"] = fm.mean_phase;
        f["vertical"] = fm.vertical;
        json blups = json::array();
        for (std::size_t i = 0; i < fit.blups.size(); ++i)
          blups.push_back({{"stimulus", stims[i]},
                           {"b0", fit.blups[i][0]},
                           {"b1", fit.blups[i][1]}});
        f["blups"] = blups;
        fits.push_back(f);
        summary_csv += pid + "," + std::to_string(data.x.size()) + "," +
                       eawarp::format_g17(fit.beta0) + "," +
                       eawarp::format_g17(fit.beta1) + "," +
                       eawarp::format_g17(fit.sigma2) + "," +
                       eawarp::format_g17(fit.sigma2_b0) + "," +
                       eawarp::format_g17(fit.sigma2_b1) + "," +
                       eawarp::format_g17(fit.reml_loglik) + "," +
                       (fit.converged ? "1" : "0") + "," +
                       std::to_string(fit.evaluations) + "," +
                       eawarp::format_g17(fm.mean_phase) + "," +
                       eawarp::format_g17(fm.vertical) + "\n";
      } catch (const std::exception& e) {
        skipped.push_back({{"perceiver", pid},
                           {"n_stimuli", data.x.size()},
                           {"reason", e.what()}});
      }
    }
    json j = meta_json("ea_study_lmm");
    j["method"] = make_method(o.search, 1.0).label();
    j["nu"] = (o.search.unbounded || o.search.method == "identity")
                  ? json(nullptr)
                  : json(o.search.nu);
    j["grid_points"] = o.grid;
    j["min_identity_corr"] = o.min_corr;
    j["smooth"] = o.smooth;
    j["fits"] = fits;
    j["skipped"] = skipped;
    const std::string fits_path = (out / "lmm_fits.json").string();
    const std::string summary_path = (out / "lmm_summary.csv").string();
    eawarp::write_file_atomic(fits_path, j.dump(2) + "\n");
    eawarp::write_file_atomic(summary_path, summary_csv);
    say_wrote(fits_path);
    say_wrote(summary_path);
  }

  std::cout << "pairs kept " << kept.size() << ", dropped " << dropped.size()
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elastic alignment of time-sampled rating curves"};
  app.set_version_flag("--version", eawarp::kVersionString);
  app.require_subcommand(1);

  AlignCmd a;
  auto* align_cmd = app.add_subcommand(
      "align", "Align one perceiver recording to its target");
  align_cmd->add_option("target", a.target, "Target rating CSV (time,value)")
      ->required()
      ->check(CLI::ExistingFile);
  align_cmd
      ->add_option("perceiver", a.perceiver, "Perceiver rating CSV (time,value)")
      ->required()
      ->check(CLI::ExistingFile);
  align_cmd
      ->add_option("--grid", a.grid,
                   "Resample both inputs to this many equispaced points")
      ->check(CLI::Range(3, 1000000))
      ->capture_default_str();
  add_search_options(*align_cmd, a.search);
  align_cmd
      ->add_option("--smooth", a.smooth,
                   "Presmoothing: none, spline, or kernel:<bandwidth>")
      ->capture_default_str();
  align_cmd
      ->add_option("--out-dir", a.out_dir,
                   "Directory for the aligned/warping CSVs and metrics.json")
      ->capture_default_str();

  SimulateCmd s;
  auto* sim_cmd = app.add_subcommand(
      "simulate", "Run the synthetic rating study and write summary reports");
  sim_cmd
      ->add_option("--config", s.config_path,
                   "JSON file with the same settings; explicit flags override")
      ->check(CLI::ExistingFile);
  sim_cmd->add_option("--targets", s.targets, "Number of target trajectories")
      ->check(CLI::Range(1, 1000000));
  sim_cmd->add_option("--perceivers", s.perceivers, "Perceivers per target")
      ->check(CLI::Range(1, 1000000));
  sim_cmd->add_option("--grid", s.grid, "Grid points per trajectory")
      ->check(CLI::Range(3, 1000000));
  sim_cmd
      ->add_option("--domain-end", s.domain_end,
                   "Right end of the native time domain")
      ->check(CLI::PositiveNumber);
  auto* ef = sim_cmd
                 ->add_option("--eta-fixed", s.eta_fixed,
                              "Drift magnitude: one fixed value")
                 ->check(CLI::PositiveNumber);
  auto* es = sim_cmd
                 ->add_option("--eta-shape", s.eta_shape,
                              "Drift magnitude: gamma shape")
                 ->check(CLI::PositiveNumber);
  auto* ec = sim_cmd
                 ->add_option("--eta-scale", s.eta_scale,
                              "Drift magnitude: gamma scale")
                 ->check(CLI::PositiveNumber);
  ef->excludes(es);
  ef->excludes(ec);
  es->excludes(ef);
  ec->excludes(ef);
  sim_cmd
      ->add_option("--nu", s.nu,
                   "Deviation bound for the penalized arm (native units)")
      ->check(CLI::PositiveNumber);
  auto* sw = sim_cmd
                 ->add_option("--window", s.window,
                              "Max grid steps per search segment")
                 ->check(CLI::Range(1, 1000000));
  auto* sx = sim_cmd->add_flag(
      "--exhaustive", s.exhaustive,
      "Exhaustive predecessor search (grids up to 61 points)");
  sw->excludes(sx);
  sx->excludes(sw);
  sim_cmd->add_option("--seed", s.seed, "Root RNG seed");
  sim_cmd->add_option("--jobs", s.jobs, "Worker threads")
      ->check(CLI::Range(1, 4096));
  sim_cmd
      ->add_option("--out-dir", s.out_dir,
                   "Directory for report.csv and report.json")
      ->capture_default_str();

  StudyCmd t;
  auto* study_cmd = app.add_subcommand(
      "ea-study", "Sweep a targets/perceivers directory layout");
  study_cmd
      ->add_option("--layout", t.layout,
                   "Directory holding targets/*.csv and perceivers/<id>/*.csv")
      ->required()
      ->check(CLI::ExistingDirectory);
  study_cmd
      ->add_option("--mode", t.mode,
                   "corr: correlations only; lmm: also per-perceiver "
                   "mixed-model fits")
      ->check(CLI::IsMember({"corr", "lmm"}))
      ->capture_default_str();
  study_cmd
      ->add_option("--grid", t.grid,
                   "Resample every recording to this many points")
      ->check(CLI::Range(3, 1000000))
      ->capture_default_str();
  add_search_options(*study_cmd, t.search);
  study_cmd
      ->add_option("--smooth", t.smooth,
                   "Presmoothing: none, spline, or kernel:<bandwidth>")
      ->capture_default_str();
  study_cmd
      ->add_option("--min-identity-corr", t.min_corr,
                   "Drop pairs whose raw correlation is below this")
      ->check(CLI::Range(-1.0, 1.0))
      ->capture_default_str();
  study_cmd
      ->add_option("--out-dir", t.out_dir,
                   "Directory for correlations.csv, dropped.csv and lmm outputs")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help / --version print and report success
  } catch (const CLI::ExcludesError& e) {
    std::cerr << "eawarp: " << e.what() << '\n';
    return kExitConflict;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*align_cmd) return run_align(a);
    if (*sim_cmd) return run_simulate(*sim_cmd, s);
    return run_study(t);
  } catch (const ConflictError& e) {
    std::cerr << "eawarp: " << e.what() << '\n';
    return kExitConflict;
  } catch (const std::exception& e) {
    std::cerr << "eawarp: " << e.what() << '\n';
    return kExitError;
  }
}
