// mdimlab: covering numbers, growth rates, entropies, rate-distortion curves
// and local entropy estimates for finite shift systems, plus the experiment
// harness behind them. Subcommands are thin shims over harness configs.

#include <iostream>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mdimlab/harness.hpp"

namespace {

using mdimlab::json;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

json parse_system_spec(const std::string& spec) {
  auto parts = split(spec, ':');
  if (parts.empty()) throw mdimlab::config_error("empty system spec");
  const std::string& kind = parts[0];
  json j;
  if (kind == "rotation") {
    auto nums = split(parts.at(1), ',');
    j["type"] = "rotation";
    j["p"] = std::stoi(nums.at(0));
    j["q"] = std::stoi(nums.at(1));
  } else if (kind == "full_shift") {
    auto nums = split(parts.at(1), ',');
    j["type"] = "full_shift";
    j["m"] = std::stoi(nums.at(0));
    j["window"] = nums.size() > 1 ? std::stoi(nums[1]) : 1;
    j["horizon"] = nums.size() > 2 ? std::stoi(nums[2]) : 6;
  } else if (kind == "sft") {
    j["type"] = "sft";
    if (parts.at(1) == "golden") {
      j["name"] = "golden_mean";
    } else {
      throw mdimlab::config_error("inline sft specs support 'golden'; use --config for general adjacency");
    }
    if (parts.size() > 2) {
      auto nums = split(parts[2], ',');
      j["window"] = std::stoi(nums.at(0));
      j["horizon"] = nums.size() > 1 ? std::stoi(nums[1]) : 6;
    }
  } else if (kind == "full_shift_family" || kind == "rotation_family" ||
             kind == "interval_family") {
    j["type"] = kind;
  } else {
    throw mdimlab::config_error("unknown system spec: " + spec);
  }
  return j;
}

json parse_measure_spec(const std::string& spec) {
  auto parts = split(spec, ':');
  const std::string& kind = parts.at(0);
  json j;
  if (kind == "bernoulli") {
    j["kind"] = "bernoulli";
    std::vector<double> probs;
    for (auto& t : split(parts.at(1), ',')) probs.push_back(std::stod(t));
    j["probs"] = probs;
  } else if (kind == "uniform") {
    j["kind"] = "uniform";
  } else if (kind == "parry") {
    j["kind"] = "parry";
  } else if (kind == "point_mass") {
    j["kind"] = "point_mass";
    j["symbol"] = parts.size() > 1 ? std::stoi(parts[1]) : 0;
  } else if (kind == "markov") {
    j["kind"] = "markov";
    std::vector<std::vector<double>> rows;
    for (auto& row : split(parts.at(1), ';')) {
      std::vector<double> r;
      for (auto& t : split(row, ',')) r.push_back(std::stod(t));
      rows.push_back(r);
    }
    j["transition"] = rows;
  } else {
    throw mdimlab::config_error("unknown measure spec: " + spec);
  }
  return j;
}

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> out;
  for (auto& t : split(s, ',')) out.push_back(std::stod(t));
  return out;
}

struct CommonFlags {
  std::string system, config_path, out_dir, units = "nats";
  std::vector<std::string> measures;
  std::string eps_grid, m_grid, r_grid, d_grid, n_range;
  double eps = 0, p = 1.0;
  int n = 1, entropy_n_max = 0, centers = 0, grid_m = 0;
  uint64_t seed = 1234;
  bool compare_mrid = false, check_partition_bound = false;
  double delta = 0, mdim_est = 0;
  bool have_ball_bound = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--system", f.system,
                  "inline system spec, e.g. rotation:1,8 | full_shift:2,5,8 | sft:golden:1,6");
  cmd->add_option("--measure", f.measures,
                  "inline measure spec, e.g. bernoulli:0.5,0.5 | uniform | parry");
  cmd->add_option("--config", f.config_path, "JSON config file (overrides inline flags)");
  cmd->add_option("--out", f.out_dir, "artifact directory (summary.json, tables/, report.txt)");
  cmd->add_option("--units", f.units, "bits|nats for entropy and rate outputs");
  cmd->add_option("--seed", f.seed, "deterministic sampling seed");
}

json build_config(const std::string& experiment, const CommonFlags& f) {
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw mdimlab::config_error("cannot open config: " + f.config_path);
    json cfg = json::parse(in);
    if (!cfg.contains("experiment")) cfg["experiment"] = experiment;
    if (!f.out_dir.empty()) cfg["output_dir"] = f.out_dir;
    return cfg;
  }
  json cfg;
  cfg["experiment"] = experiment;
  if (!f.system.empty()) cfg["system"] = parse_system_spec(f.system);
  if (!f.measures.empty()) {
    cfg["measures"] = json::array();
    for (auto& m : f.measures) cfg["measures"].push_back(parse_measure_spec(m));
  }
  if (f.eps > 0) cfg["eps"] = f.eps;
  if (!f.eps_grid.empty()) cfg["eps_grid"] = parse_grid(f.eps_grid);
  if (!f.m_grid.empty()) {
    std::vector<int> ms;
    for (double v : parse_grid(f.m_grid)) ms.push_back(int(v));
    cfg["m_grid"] = ms;
  }
  if (!f.r_grid.empty()) cfg["r_grid"] = parse_grid(f.r_grid);
  if (!f.d_grid.empty()) cfg["d_grid"] = parse_grid(f.d_grid);
  if (!f.n_range.empty()) {
    auto parts = split(f.n_range, ':');
    cfg["n_range"] = std::vector<int>{std::stoi(parts.at(0)), std::stoi(parts.at(1))};
  }
  cfg["n"] = f.n;
  cfg["p"] = f.p;
  if (f.entropy_n_max > 0) cfg["entropy_n_max"] = f.entropy_n_max;
  if (f.centers > 0) cfg["centers"] = f.centers;
  if (f.grid_m > 0) cfg["grid_m"] = f.grid_m;
  if (f.compare_mrid) cfg["compare_mrid"] = true;
  if (f.check_partition_bound) cfg["check_partition_bound"] = true;
  if (f.have_ball_bound) cfg["ball_bound"] = {{"delta", f.delta}, {"mdim_est", f.mdim_est}};
  cfg["seeds"] = std::vector<uint64_t>{f.seed};
  cfg["units"] = f.units;
  if (!f.out_dir.empty()) cfg["output_dir"] = f.out_dir;
  return cfg;
}

int dispatch(const std::string& experiment, const CommonFlags& f) {
  std::string summary;
  int code;
  try {
    code = mdimlab::run_experiment(build_config(experiment, f), &summary);
  } catch (const mdimlab::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  if (code == 2 || code == 3)
    std::cerr << summary << "\n";
  else
    std::cout << summary;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mdimlab: scale-resolved complexity, entropy and rate-distortion "
               "measurements on finite shift systems"};
  app.require_subcommand(0, 1);

  struct Sub {
    CLI::App* cmd;
    CommonFlags flags;
    std::string name;
  };
  std::vector<Sub> subs;
  auto add = [&](const std::string& name, const std::string& desc) -> Sub& {
    subs.push_back({});
    Sub& s = subs.back();
    s.name = name;
    s.cmd = app.add_subcommand(name, desc);
    add_common(s.cmd, s.flags);
    return s;
  };

  {
    Sub& s = add("cover", "covering number #(X, rho, eps) of a system");
    s.cmd->add_option("--eps", s.flags.eps, "scale");
  }
  {
    Sub& s = add("growth", "log #(X, rho_n, eps) per n and growth-rate extrapolations");
    s.cmd->add_option("--eps", s.flags.eps, "scale");
    s.cmd->add_option("--n-range", s.flags.n_range, "lo:hi");
  }
  {
    Sub& s = add("mdim", "slope of S(eps) against log(1/eps) over a system family");
    s.cmd->add_option("--eps-grid", s.flags.eps_grid, "decreasing scales a,b,c");
    s.cmd->add_option("--n-range", s.flags.n_range, "lo:hi");
  }
  {
    Sub& s = add("entropy", "block entropies H_n and entropy-rate estimators");
    s.cmd->add_option("--entropy-n-max", s.flags.entropy_n_max, "largest block length");
    s.cmd->add_option("--grid-m", s.flags.grid_m, "use the 1/m grid partition");
  }
  {
    Sub& s = add("mrid", "diameter-constrained partition-entropy infimum per scale");
    s.cmd->add_option("--eps-grid", s.flags.eps_grid, "decreasing scales");
    s.cmd->add_option("--entropy-n-max", s.flags.entropy_n_max, "block length");
  }
  {
    Sub& s = add("idr", "h(P_m)/log m information-dimension-rate table");
    s.cmd->add_option("--m-grid", s.flags.m_grid, "grid resolutions m");
    s.cmd->add_option("--entropy-n-max", s.flags.entropy_n_max, "block length");
    s.cmd->add_flag("--compare-mrid", s.flags.compare_mrid,
                    "attach matched-scale partition-infimum comparison");
  }
  {
    Sub& s = add("rd-curve", "swept rate-distortion curve (beta, D, R)");
    s.cmd->add_option("--n", s.flags.n, "block length");
    s.cmd->add_option("--p", s.flags.p, "distortion exponent");
  }
  {
    Sub& s = add("rd-dim", "R(n,eps)/log(1/eps) rate-distortion dimension table");
    s.cmd->add_option("--eps-grid", s.flags.eps_grid, "decreasing scales");
    s.cmd->add_option("--n", s.flags.n, "block length");
    s.cmd->add_option("--p", s.flags.p, "distortion exponent");
  }
  {
    Sub& s = add("rd-checks", "inverse/decomposition/dominance curve checks");
    s.cmd->add_option("--n", s.flags.n, "block length");
    s.cmd->add_option("--p", s.flags.p, "distortion exponent");
    s.cmd->add_option("--r-grid", s.flags.r_grid, "rate grid");
    s.cmd->add_option("--d-grid", s.flags.d_grid, "distortion grid");
  }
  {
    Sub& s = add("brin-katok", "Bowen-ball decay -(1/n) log mu(B_n(x,eps))");
    s.cmd->add_option("--eps", s.flags.eps, "ball scale");
    s.cmd->add_option("--n-range", s.flags.n_range, "lo:hi");
    s.cmd->add_option("--centers", s.flags.centers, "sampled centers");
    s.cmd->add_flag("--check-partition-bound", s.flags.check_partition_bound,
                    "verify local entropy <= strict-diameter partition entropy");
    auto* d = s.cmd->add_option("--delta", s.flags.delta, "ball-bound exponent margin");
    auto* m = s.cmd->add_option("--mdim-est", s.flags.mdim_est, "dimension estimate");
    d->needs(m);
  }
  {
    Sub& s = add("vp-check", "scale-eps entropy vs covering-growth chain");
    s.cmd->add_option("--eps", s.flags.eps, "scale");
    s.cmd->add_option("--n-range", s.flags.n_range, "lo:hi");
    s.cmd->add_option("--entropy-n-max", s.flags.entropy_n_max, "block length");
  }
  {
    Sub& s = add("mbke", "sup-measure Bowen-ball local entropy over a family");
    s.cmd->add_option("--eps-grid", s.flags.eps_grid, "decreasing scales");
    s.cmd->add_option("--n-range", s.flags.n_range, "lo:hi");
    s.cmd->add_option("--centers", s.flags.centers, "sampled centers");
  }
  {
    Sub& s = add("tame", "eps^delta log #(X, rho, eps) decay table");
    s.cmd->add_option("--eps-grid", s.flags.eps_grid, "decreasing scales");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (auto& s : subs) {
    if (s.cmd->parsed()) {
      if (s.name == "brin-katok" && s.flags.delta > 0) s.flags.have_ball_bound = true;
      return dispatch(s.name, s.flags);
    }
  }
  std::cout << app.help() << "\n";
  return 0;
}
