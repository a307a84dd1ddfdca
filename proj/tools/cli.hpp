#pragma once

// boundchain command line: sample / coupletime / verify.
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 sampler
// failure (no constant block map within --max-levels, I/O).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "boundchain/boundchain.hpp"

namespace boundchain::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kUsage = 2, kRuntime = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string model;
  std::optional<std::string> graph_path;
  std::optional<std::size_t> n;
  std::optional<std::size_t> k;
  std::optional<double> lambda;
  std::optional<double> pswap;
  std::optional<double> temp;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> reps;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> t0;
  std::uint32_t max_levels = 40;
  std::optional<std::uint64_t> tcap;
  std::optional<std::string> out;
  double tv_tolerance = 0.02;
};

using AnyModel = std::variant<PermutationModel, HardcoreModel, ColoringModel, PottsModel, SinkFreeModel>;

/// Rejects flags that do not belong to the chosen model.
inline void validate(const RunConfig& c) {
  struct Flag {
    const char* name;
    bool given;
    std::vector<std::string> models;
  };
  const std::vector<Flag> flags{
      {"--graph", c.graph_path.has_value(), {"hardcore", "coloring", "potts", "sinkfree"}},
      {"--n", c.n.has_value(), {"perm"}},
      {"--k", c.k.has_value(), {"coloring", "potts"}},
      {"--lambda", c.lambda.has_value(), {"hardcore"}},
      {"--pswap", c.pswap.has_value(), {"hardcore"}},
      {"--temp", c.temp.has_value(), {"potts"}},
  };
  for (const auto& f : flags) {
    if (!f.given) continue;
    if (std::find(f.models.begin(), f.models.end(), c.model) == f.models.end())
      throw UsageError(std::string(f.name) + " does not apply to --model " + c.model);
  }
  auto require = [&](bool given, const char* name) {
    if (!given) throw UsageError("--model " + c.model + " requires " + name);
  };
  if (c.model == "perm") {
    require(c.n.has_value(), "--n");
  } else {
    require(c.graph_path.has_value(), "--graph");
    if (c.model == "hardcore") require(c.lambda.has_value(), "--lambda");
    if (c.model == "coloring" || c.model == "potts") require(c.k.has_value(), "--k");
    if (c.model == "potts") require(c.temp.has_value(), "--temp");
  }
  if (c.t0 && *c.t0 == 0) throw UsageError("--t0 must be at least 1");
  if (c.max_levels == 0) throw UsageError("--max-levels must be at least 1");
  if (c.samples && *c.samples == 0) throw UsageError("--samples must be at least 1");
  if (c.reps && *c.reps == 0) throw UsageError("--reps must be at least 1");
  if (c.tcap && *c.tcap == 0) throw UsageError("--tcap must be at least 1");
  if (c.command == "coupletime" && !c.out) throw UsageError("coupletime requires --out");
}

inline Graph read_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open graph file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return load_graph(text.str());
  } catch (const GraphError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

inline AnyModel build_model(const RunConfig& c, std::ostream& err) {
  try {
    if (c.model == "perm") return PermutationModel(*c.n);
    const Graph g = read_graph_file(*c.graph_path);
    if (c.model == "hardcore") return HardcoreModel(g, HardcoreParams{*c.lambda, c.pswap.value_or(0.25)});
    if (c.model == "coloring") {
      const ColoringParams p{*c.k};
      p.validate(g);
      if (p.may_be_non_ergodic(g))
        err << "warning: k < max degree + 2; the Gibbs chain may not connect all colorings\n";
      return ColoringModel(g, p);
    }
    if (c.model == "potts") return PottsModel(g, PottsParams{*c.k, *c.temp, -1});
    return SinkFreeModel(g);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

template <class M>
CftpOptions cftp_options(const RunConfig& c) {
  return CftpOptions{c.t0.value_or(0), c.max_levels};
}

/// One JSONL record per sample; sample i uses root seed base + i.
template <class M>
nlohmann::ordered_json sample_record(const M& model, const SampleResult<typename M::State>& r) {
  nlohmann::ordered_json line;
  line["model"] = model.name();
  line["params"] = model.params_json();
  line["state"] = model.state_json(r.state);
  line["levels_used"] = r.levels_used;
  line["total_steps"] = r.total_steps;
  line["seed"] = r.root_seed;
  return line;
}

class OutputSink {
 public:
  OutputSink(const std::optional<std::string>& path, std::ostream& fallback) {
    if (path) {
      file_ = std::make_unique<std::ofstream>(*path, std::ios::binary | std::ios::trunc);
      if (!*file_) throw std::runtime_error("cannot open output file " + *path);
    }
    stream_ = file_ ? file_.get() : &fallback;
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

inline int cmd_sample(const RunConfig& c, const AnyModel& any, std::ostream& out, std::ostream& err) {
  OutputSink sink(c.out, out);
  return std::visit(
      [&](const auto& model) {
        using M = std::decay_t<decltype(model)>;
        const std::size_t samples = c.samples.value_or(1);
        for (std::size_t i = 0; i < samples; ++i) {
          try {
            const auto r = cftp_sample(model, c.seed + i, cftp_options<M>(c));
            sink.stream() << sample_record(model, r).dump() << '\n';
            sink.stream().flush();
          } catch (const MaxLevelsExceeded& e) {
            err << "sample " << i << " (seed " << c.seed + i << "): " << e.what() << '\n';
            return static_cast<int>(kRuntime);
          }
        }
        return static_cast<int>(kOk);
      },
      any);
}

inline std::filesystem::path curve_path(const std::string& out) {
  const std::filesystem::path p(out);
  return p.parent_path() / (p.stem().string() + "_curve" + p.extension().string());
}

inline int cmd_coupletime(const RunConfig& c, const AnyModel& any, std::ostream& out) {
  return std::visit(
      [&](const auto& model) {
        const std::size_t reps = c.reps.value_or(100);
        const std::uint64_t t0 = c.t0.value_or(model.default_t0());
        const std::uint64_t tcap = c.tcap.value_or(100 * t0);
        std::ofstream csv(*c.out, std::ios::binary | std::ios::trunc);
        if (!csv) throw std::runtime_error("cannot open output file " + *c.out);
        csv << "rep,tau,restarts\n";
        std::vector<std::optional<std::uint64_t>> taus;
        std::uint64_t t_max = 0;
        bool capped = false;
        for (std::size_t r = 0; r < reps; ++r) {
          const auto res = forward_couple_time(model, c.seed + r, tcap);
          taus.push_back(res.tau);
          csv << r << ',' << (res.tau ? static_cast<long long>(*res.tau) : -1LL) << ',' << res.restarts << '\n';
          if (res.tau)
            t_max = std::max(t_max, *res.tau);
          else
            capped = true;
        }
        if (capped) t_max = tcap;
        const auto path = curve_path(*c.out);
        std::ofstream curve(path, std::ios::binary | std::ios::trunc);
        if (!curve) throw std::runtime_error("cannot open output file " + path.string());
        curve << "t,fraction_not_coalesced\n";
        for (const auto& [t, f] : curve_from_taus(taus, t_max)) curve << t << ',' << f << '\n';
        std::size_t done = 0;
        for (const auto& t : taus) done += t ? 1 : 0;
        out << "wrote " << *c.out << " and " << path.string() << " (" << done << "/" << reps
            << " runs coalesced within " << tcap << " steps)\n";
        return static_cast<int>(kOk);
      },
      any);
}

struct VerifyOutcome {
  GoodnessReport report;
  bool tv_ok = false;
  bool pass = false;
};

/// Draws `samples` canonical states from `sampler(seed)` and compares them with
/// `exact`. Pass requires TV ≤ tolerance and the chi-square test at 0.001.
inline VerifyOutcome verify_sampler(const std::function<std::string(std::uint64_t)>& sampler,
                                    const ExactDistribution& exact, std::size_t samples,
                                    std::uint64_t seed, double tolerance, std::ostream& out) {
  Counts counts;
  for (std::size_t i = 0; i < samples; ++i) ++counts[sampler(seed + i)];
  VerifyOutcome v;
  try {
    v.report = chi_square(counts, exact);
  } catch (const ImpossibleStateError& e) {
    out << "FAIL: " << e.what() << '\n';
    return v;
  }
  v.tv_ok = v.report.tv_distance <= tolerance;
  v.pass = v.tv_ok && v.report.pass;
  out << "states " << exact.size() << ", samples " << samples << '\n'
      << "tv_distance " << v.report.tv_distance << " (tolerance " << tolerance << ")\n"
      << "chi_square " << v.report.chi_square_statistic << " dof " << v.report.dof << " critical "
      << v.report.critical_value << " (significance 0.001)\n"
      << (v.pass ? "PASS" : "FAIL") << '\n';
  return v;
}

inline int cmd_verify(const RunConfig& c, const AnyModel& any, std::ostream& out, std::ostream& err) {
  return std::visit(
      [&](const auto& model) {
        using M = std::decay_t<decltype(model)>;
        const auto exact = exact_distribution(model);
        out << "model " << model.name() << " params " << model.params_json().dump() << '\n';
        try {
          const auto v = verify_sampler(
              [&](std::uint64_t seed) { return canonical(model, cftp_sample(model, seed, cftp_options<M>(c)).state); },
              exact, c.samples.value_or(20000), c.seed, c.tv_tolerance, out);
          return static_cast<int>(v.pass ? kOk : kVerifyFailed);
        } catch (const MaxLevelsExceeded& e) {
          err << e.what() << '\n';
          return static_cast<int>(kRuntime);
        }
      },
      any);
}

inline void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--model", c.model, "perm | hardcore | coloring | potts | sinkfree")
      ->required()
      ->check(CLI::IsMember({"perm", "hardcore", "coloring", "potts", "sinkfree"}));
  sub->add_option("--graph", c.graph_path, "edge-list graph file");
  sub->add_option("--n", c.n, "permutation size")->check(CLI::PositiveNumber);
  sub->add_option("--k", c.k, "number of colors");
  sub->add_option("--lambda", c.lambda, "hard-core fugacity");
  sub->add_option("--pswap", c.pswap, "hard-core swap probability (default 0.25)");
  sub->add_option("--temp", c.temp, "Potts temperature T");
  sub->add_option("--seed", c.seed, "base root seed (default 1)");
  sub->add_option("--t0", c.t0, "first CFTP block length (default per model)");
  sub->add_option("--max-levels", c.max_levels, "CFTP level limit (default 40)");
  sub->add_option("--out", c.out, "output file");
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Perfect sampling with bounding chains and coupling from the past"};
  app.require_subcommand(1);
  RunConfig config;
  auto* sample = app.add_subcommand("sample", "draw exact samples with CFTP (JSONL)");
  auto* coupletime = app.add_subcommand("coupletime", "forward coupling times and the TV-bound curve (CSV)");
  auto* verify = app.add_subcommand("verify", "compare CFTP output with the enumerated target");
  for (auto* sub : {sample, coupletime, verify}) add_common(sub, config);
  sample->add_option("--samples", config.samples, "number of samples (default 1)");
  verify->add_option("--samples", config.samples, "number of samples (default 20000)");
  verify->add_option("--tol", config.tv_tolerance, "TV tolerance (default 0.02)");
  coupletime->add_option("--reps", config.reps, "number of forward runs (default 100)");
  coupletime->add_option("--tcap", config.tcap, "step cap per run (default 100 * t0)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }
  config.command = sample->parsed() ? "sample" : coupletime->parsed() ? "coupletime" : "verify";

  try {
    validate(config);
    const AnyModel model = build_model(config, err);
    if (config.command == "sample") return cmd_sample(config, model, out, err);
    if (config.command == "coupletime") return cmd_coupletime(config, model, out);
    return cmd_verify(config, model, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const OracleError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
}

}  // namespace boundchain::cli
