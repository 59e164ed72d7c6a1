// disom: command-line front end over the C API in disom.h.
//
//   disom run         one EA run -> trace.csv, result.json
//   disom experiment  preset or custom batch -> median.csv, normalized.csv, config.json, summary.json
//   disom check       parameter assumptions -> report on stdout, check.json
//   disom dist        tail / sigma-ratio table -> stdout, dist.csv
//
// Exit status: 0 completed (censored runs and FAIL flags included), 2 usage
// error, 3 I/O error, 1 internal error. Outputs go to --out, else
// $DISOM_OUT_DIR, else the working directory.

#include <unistd.h>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "disom/disom.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitInternal = 1;
constexpr std::uint64_t kLongRunThreshold = 10'000'000;

struct Failure {
  int code;
  std::string message;
};

[[noreturn]] void usage_error(const std::string& msg) { throw Failure{kExitUsage, msg}; }
[[noreturn]] void io_error(const std::string& msg) { throw Failure{kExitIo, msg}; }

void check(disom_status s, const std::string& context) {
  if (s == DISOM_OK) return;
  const int code = s == DISOM_ERR_INTERNAL ? kExitInternal : kExitUsage;
  throw Failure{code, context + ": " + disom_last_error()};
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Dist = std::unique_ptr<disom_distribution, Deleter<disom_distribution, disom_distribution_free>>;
using Landscape = std::unique_ptr<disom_landscape, Deleter<disom_landscape, disom_landscape_free>>;
using Run = std::unique_ptr<disom_run, Deleter<disom_run, disom_run_free>>;
using Report = std::unique_ptr<disom_report, Deleter<disom_report, disom_report_free>>;
using Experiment = std::unique_ptr<disom_experiment, Deleter<disom_experiment, disom_experiment_free>>;
using Batch = std::unique_ptr<disom_batch, Deleter<disom_batch, disom_batch_free>>;

template <typename F>
std::string take_string(F&& call, const std::string& context) {
  char* raw = nullptr;
  check(call(&raw), context);
  std::string out(raw);
  disom_string_free(raw);
  return out;
}

Dist parse_dist(const std::string& spec) {
  disom_distribution* d = nullptr;
  check(disom_distribution_parse(spec.c_str(), &d), "--dist");
  return Dist(d);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

fs::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("DISOM_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return ".";
}

void write_atomic(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) io_error("cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) io_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.close();
    if (!out) {
      fs::remove(tmp, ec);
      io_error("write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    io_error("cannot move " + tmp.string() + " to " + path.string());
  }
}

json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::exception& e) {
    usage_error(path + ": " + e.what());
  }
  if (!j.is_object()) usage_error(path + ": expected a JSON object");
  return j;
}

// A saved output file holds its config under `key`; a bare config is accepted too.
json config_section(const json& j, const char* key) {
  if (j.contains(key) && j[key].is_object()) return j[key];
  return j;
}

template <typename T>
T json_get(const json& j, const char* key, const std::string& source) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    usage_error(source + ": field '" + key + "': " + e.what());
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& source) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) usage_error(source + ": unknown field '" + key + "'");
  }
}

// "n=4,k=2,l=2,t=0" -> key/value pairs.
std::vector<std::pair<std::string, std::uint32_t>> parse_kv(const std::string& text,
                                                            const std::string& flag) {
  std::vector<std::pair<std::string, std::uint32_t>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) usage_error(flag + ": expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(val, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != val.size() || val.empty() || val[0] == '-' || v > UINT32_MAX)
      usage_error(flag + ": '" + val + "' is not a non-negative integer");
    out.emplace_back(key, static_cast<std::uint32_t>(v));
  }
  return out;
}

// ---- run

struct RunParams {
  std::optional<std::string> algo;
  std::optional<std::uint64_t> n;
  std::optional<std::uint32_t> lambda;
  std::optional<double> p;
  std::optional<double> kstar;
  std::optional<std::string> dist;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> cutoff;
  std::optional<double> mutation_rate;
  bool dense_trace = false;
};

struct RunFlags {
  std::string algo, dist, config, out;
  std::uint64_t n = 0, seed = 0, cutoff = 0;
  std::uint32_t lambda = 0;
  double p = 0, kstar = 0, mutation_rate = 0;
  bool dense_trace = false;
  CLI::Option *o_algo, *o_n, *o_lambda, *o_p, *o_kstar, *o_dist, *o_seed, *o_cutoff, *o_rate;
};

void add_model_flags(CLI::App* cmd, RunFlags& f) {
  f.o_algo = cmd->add_option("--algo", f.algo, "plus or comma")->check(CLI::IsMember({"plus", "comma"}));
  f.o_n = cmd->add_option("--n", f.n, "problem size")->check(CLI::Range(std::uint64_t{1}, UINT64_MAX));
  f.o_lambda = cmd->add_option("--lambda", f.lambda, "offspring per generation");
  f.o_p = cmd->add_option("--p", f.p, "distortion probability");
  f.o_kstar = cmd->add_option("--kstar", f.kstar, "target slack: stop at total >= n - kstar");
  f.o_dist = cmd->add_option("--dist", f.dist, "distortion distribution, kind:key=value,...");
  f.o_seed = cmd->add_option("--seed", f.seed, "seed for landscape and EA");
  f.o_cutoff = cmd->add_option("--cutoff", f.cutoff, "generation cutoff");
}

RunParams run_params(const RunFlags& f) {
  RunParams r;
  if (!f.config.empty()) {
    const json c = config_section(read_json(f.config), "config");
    reject_unknown(c, {"algorithm", "n", "lambda", "p", "kstar", "distribution", "seed",
                       "cutoff_generations", "mutation_rate", "dense_trace"},
                   f.config);
    if (c.contains("algorithm")) r.algo = json_get<std::string>(c, "algorithm", f.config);
    if (c.contains("n")) r.n = json_get<std::uint64_t>(c, "n", f.config);
    if (c.contains("lambda")) r.lambda = json_get<std::uint32_t>(c, "lambda", f.config);
    if (c.contains("p")) r.p = json_get<double>(c, "p", f.config);
    if (c.contains("kstar")) r.kstar = json_get<double>(c, "kstar", f.config);
    if (c.contains("distribution")) r.dist = json_get<std::string>(c, "distribution", f.config);
    if (c.contains("seed")) r.seed = json_get<std::uint64_t>(c, "seed", f.config);
    if (c.contains("cutoff_generations")) r.cutoff = json_get<std::uint64_t>(c, "cutoff_generations", f.config);
    if (c.contains("mutation_rate") && !c["mutation_rate"].is_null())
      r.mutation_rate = json_get<double>(c, "mutation_rate", f.config);
    if (c.contains("dense_trace")) r.dense_trace = json_get<bool>(c, "dense_trace", f.config);
  }
  if (f.o_algo->count()) r.algo = f.algo;
  if (f.o_n->count()) r.n = f.n;
  if (f.o_lambda->count()) r.lambda = f.lambda;
  if (f.o_p->count()) r.p = f.p;
  if (f.o_kstar->count()) r.kstar = f.kstar;
  if (f.o_dist->count()) r.dist = f.dist;
  if (f.o_seed->count()) r.seed = f.seed;
  if (f.o_cutoff->count()) r.cutoff = f.cutoff;
  if (f.o_rate->count()) r.mutation_rate = f.mutation_rate;
  if (f.dense_trace) r.dense_trace = true;

  auto need = [](bool present, const char* flag) {
    if (!present) usage_error(std::string("missing ") + flag);
  };
  need(r.algo.has_value(), "--algo");
  need(r.n.has_value(), "--n");
  need(r.lambda.has_value(), "--lambda");
  need(r.p.has_value(), "--p");
  need(r.kstar.has_value(), "--kstar");
  need(r.dist.has_value(), "--dist");
  need(r.seed.has_value(), "--seed");
  need(r.cutoff.has_value(), "--cutoff");
  if (*r.algo != "plus" && *r.algo != "comma") usage_error("--algo must be plus or comma");
  return r;
}

json run_config_json(const RunParams& r) {
  return {{"algorithm", *r.algo},
          {"n", *r.n},
          {"lambda", *r.lambda},
          {"p", *r.p},
          {"kstar", *r.kstar},
          {"distribution", *r.dist},
          {"seed", *r.seed},
          {"cutoff_generations", *r.cutoff},
          {"mutation_rate", r.mutation_rate ? json(*r.mutation_rate) : json(nullptr)},
          {"dense_trace", r.dense_trace}};
}

int cmd_run(const RunFlags& f) {
  const RunParams r = run_params(f);
  const Dist dist = parse_dist(*r.dist);

  std::uint64_t landscape_seed = 0;
  std::uint64_t rng_seed = 0;
  disom_derive_run_seeds(*r.seed, 0, 0, &landscape_seed, &rng_seed);

  disom_landscape* lraw = nullptr;
  check(disom_landscape_create(*r.n, *r.p, dist.get(), landscape_seed, &lraw), "landscape");
  const Landscape landscape(lraw);

  disom_ea_config cfg;
  disom_ea_config_init(&cfg);
  cfg.variant = *r.algo == "plus" ? DISOM_PLUS : DISOM_COMMA;
  cfg.lambda = *r.lambda;
  cfg.n = *r.n;
  cfg.kstar = *r.kstar;
  cfg.mutation_rate = r.mutation_rate.value_or(0.0);
  cfg.cutoff_generations = *r.cutoff;
  cfg.rng_seed = rng_seed;
  cfg.dense_trace = r.dense_trace ? 1 : 0;

  disom_run* rraw = nullptr;
  check(disom_run_ea(landscape.get(), &cfg, &rraw), "run");
  const Run run(rraw);

  const std::string trace = take_string([&](char** o) { return disom_run_trace_csv(run.get(), o); }, "trace");
  const std::string result = take_string([&](char** o) { return disom_run_to_json(run.get(), o); }, "result");

  const fs::path dir = output_dir(f.out);
  write_atomic(dir / "trace.csv", trace);
  json doc{{"config", run_config_json(r)}, {"result", json::parse(result)}};
  write_atomic(dir / "result.json", doc.dump(2) + "\n");

  disom_run_summary s;
  check(disom_run_get_summary(run.get(), &s), "summary");
  std::cout << *r.algo << " n=" << *r.n << " lambda=" << *r.lambda << ": "
            << (s.success ? "reached target" : "censored at cutoff") << " after " << s.generations
            << " generations (" << s.evaluations << " evaluations), final om=" << s.final_fitness.om
            << " distortion=" << fmt(s.final_fitness.distortion)
            << " total=" << fmt(s.final_fitness.total) << "\n";
  return 0;
}

// ---- experiment

struct ExperimentFlags {
  std::string preset, config, out;
  std::uint64_t master_seed = 0, cutoff = 0;
  double scale = 1.0;
  std::uint32_t runs = 0;
  unsigned jobs = 0;
  bool full = false, keep_traces = false;
  CLI::Option *o_preset, *o_seed, *o_scale, *o_runs, *o_cutoff;
};

int cmd_experiment(const ExperimentFlags& f) {
  if (f.config.empty() && !f.o_preset->count()) usage_error("missing --preset (or --config)");
  if (!f.config.empty() && f.o_scale->count()) usage_error("--scale applies to presets, not to --config");

  disom_experiment* raw = nullptr;
  std::string preset_name = f.preset;
  if (!f.config.empty()) {
    json c = config_section(read_json(f.config), "config");
    if (f.o_preset->count()) {
      if (c.contains("preset") && c["preset"] != f.preset)
        usage_error("--preset " + f.preset + " conflicts with the preset in " + f.config);
      c["preset"] = f.preset;
    }
    preset_name = c.value("preset", std::string("custom"));
    check(disom_experiment_from_json(c.dump().c_str(), &raw), f.config);
  } else {
    check(disom_experiment_preset(f.preset.c_str(), f.scale, &raw), "--preset");
  }
  const Experiment exp(raw);

  if (f.o_seed->count()) check(disom_experiment_set_master_seed(exp.get(), f.master_seed), "--master-seed");
  if (f.o_runs->count()) check(disom_experiment_set_runs(exp.get(), f.runs), "--runs");
  if (f.o_cutoff->count()) check(disom_experiment_set_cutoff(exp.get(), f.cutoff), "--cutoff");
  const bool traces = f.keep_traces || preset_name == "fig1";
  if (traces) check(disom_experiment_set_keep_runs(exp.get(), 1), "keep runs");

  std::uint64_t cutoff = 0;
  check(disom_experiment_get_cutoff(exp.get(), &cutoff), "cutoff");
  if (preset_name == "fig1" && cutoff > kLongRunThreshold && !f.full) {
    usage_error("fig1 with a cutoff of " + std::to_string(cutoff) +
                " generations can take hours; pass --full to run it, or use --scale/--cutoff");
  }

  const unsigned jobs = f.jobs > 0 ? f.jobs : std::max(1U, std::thread::hardware_concurrency());
  disom_batch* braw = nullptr;
  check(disom_experiment_run(exp.get(), jobs, &braw), "experiment");
  const Batch batch(braw);

  auto get = [&](auto fn, const char* what) {
    return take_string([&](char** o) { return fn(batch.get(), o); }, what);
  };
  const fs::path dir = output_dir(f.out);
  const std::size_t cells = disom_batch_cell_count(batch.get());
  bool any_truncated = false;
  std::vector<disom_cell_stats> stats(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    check(disom_batch_get_cell(batch.get(), i, &stats[i]), "cell");
    any_truncated = any_truncated || stats[i].has_cutoff_d;
  }

  write_atomic(dir / "median.csv", get(disom_batch_median_csv, "median.csv"));
  if (any_truncated) write_atomic(dir / "normalized.csv", get(disom_batch_normalized_csv, "normalized.csv"));
  write_atomic(dir / "config.json",
               take_string([&](char** o) { return disom_experiment_to_json(exp.get(), o); }, "config"));
  write_atomic(dir / "summary.json", get(disom_batch_summary_json, "summary.json"));

  for (std::size_t i = 0; i < cells; ++i) {
    const auto& s = stats[i];
    const char* algo = s.variant == DISOM_PLUS ? "plus" : "comma";
    if (traces && s.runs > 0) {
      const std::string name = cells <= 2 ? std::string("trace_") + algo + ".csv"
                                          : "trace_c" + std::to_string(i) + "_" + algo + ".csv";
      char* t = nullptr;
      if (disom_batch_trace_csv(batch.get(), i, 0, &t) == DISOM_OK) {
        write_atomic(dir / name, t);
        disom_string_free(t);
      }
    }
    std::cout << "cell " << i << " " << algo << " n=" << s.n << " lambda=" << s.lambda
              << " p=" << fmt(s.p) << " kstar=" << fmt(s.kstar);
    if (s.has_cutoff_d) std::cout << " cutoff_d=" << fmt(s.cutoff_d);
    std::cout << ": runs=" << s.runs << " success=" << s.success << " censored=" << s.censored
              << " median=" << fmt(s.median_generations) << " mean=" << fmt(s.mean_generations)
              << (s.mean_is_lower_bound ? " (lower bound)" : "");
    if (s.has_normalized) std::cout << " normalized=" << fmt(s.normalized);
    if (s.failed > 0) std::cout << " failed=" << s.failed;
    std::cout << "\n";
  }
  return 0;
}

// ---- check

struct CheckFlags {
  RunFlags model;
  double epsilon = 0.05, d_min = 0, d_max = 20, step = 1, sigma_bound = 0;
  std::string gain, layer;
  CLI::Option *o_eps, *o_dmin, *o_dmax, *o_step, *o_sigma;
};

void print_gain(const std::string& spec) {
  std::uint32_t v[4] = {0, 0, 0, 0};
  bool seen[4] = {false, false, false, false};
  for (const auto& [key, value] : parse_kv(spec, "--gain")) {
    int slot = key == "n" ? 0 : key == "k" ? 1 : (key == "l" || key == "ell") ? 2 : key == "t" ? 3 : -1;
    if (slot < 0) usage_error("--gain: unknown key '" + key + "' (expected n, k, l, t)");
    v[slot] = value;
    seen[slot] = true;
  }
  for (int i = 0; i < 4; ++i) {
    if (!seen[i]) usage_error("--gain needs n, k, l and t");
  }
  double prob = 0;
  check(disom_fitness_gain_prob(v[0], v[1], v[2], v[3], &prob), "--gain");
  std::cout << "fitness_gain_prob n=" << v[0] << " k=" << v[1] << " l=" << v[2] << " t=" << v[3]
            << ": " << fmt(prob) << "\n";
}

void print_layer(const std::string& spec) {
  std::optional<std::uint32_t> n, ell;
  for (const auto& [key, value] : parse_kv(spec, "--layer")) {
    if (key == "n") n = value;
    else if (key == "l" || key == "ell") ell = value;
    else usage_error("--layer: unknown key '" + key + "' (expected n, l)");
  }
  if (!n || !ell) usage_error("--layer needs n and l");
  const std::string size =
      take_string([&](char** o) { return disom_hamming_layer_size(*n, *ell, o); }, "--layer");
  std::cout << "hamming_layer_size n=" << *n << " l=" << *ell << ": " << size << "\n";
}

int cmd_check(const CheckFlags& f) {
  const RunFlags& m = f.model;
  const bool oracle_only = (!f.gain.empty() || !f.layer.empty()) && m.config.empty() && !m.o_n->count();
  if (!f.gain.empty()) print_gain(f.gain);
  if (!f.layer.empty()) print_layer(f.layer);
  if (oracle_only) return 0;

  disom_assumption_query q;
  disom_assumption_query_init(&q);
  q.epsilon = f.epsilon;
  q.d_min = f.d_min;
  q.d_max = f.d_max;
  q.d_step = f.step;
  q.sigma_bound = f.sigma_bound;
  std::optional<std::string> dist;
  bool has_n = false, has_lambda = false, has_p = false, has_kstar = false;

  if (!m.config.empty()) {
    const json c = config_section(read_json(m.config), "query");
    reject_unknown(c, {"n", "kstar", "lambda", "p", "epsilon", "d_min", "d_max", "d_step",
                       "sigma_bound", "distribution"},
                   m.config);
    auto num = [&](const char* key, double& slot, bool* seen = nullptr) {
      if (!c.contains(key)) return;
      if (c[key].is_null()) return;
      slot = json_get<double>(c, key, m.config);
      if (seen) *seen = true;
    };
    num("n", q.n, &has_n);
    num("kstar", q.kstar, &has_kstar);
    num("lambda", q.lambda, &has_lambda);
    num("p", q.p, &has_p);
    num("epsilon", q.epsilon);
    num("d_min", q.d_min);
    num("d_max", q.d_max);
    num("d_step", q.d_step);
    num("sigma_bound", q.sigma_bound);
    if (c.contains("distribution")) dist = json_get<std::string>(c, "distribution", m.config);
  }
  if (m.o_n->count()) q.n = static_cast<double>(m.n), has_n = true;
  if (m.o_lambda->count()) q.lambda = m.lambda, has_lambda = true;
  if (m.o_p->count()) q.p = m.p, has_p = true;
  if (m.o_kstar->count()) q.kstar = m.kstar, has_kstar = true;
  if (m.o_dist->count()) dist = m.dist;
  if (f.o_eps->count()) q.epsilon = f.epsilon;
  if (f.o_dmin->count()) q.d_min = f.d_min;
  if (f.o_dmax->count()) q.d_max = f.d_max;
  if (f.o_step->count()) q.d_step = f.step;
  if (f.o_sigma->count()) q.sigma_bound = f.sigma_bound;

  if (!has_n) usage_error("missing --n");
  if (!has_lambda) usage_error("missing --lambda");
  if (!has_p) usage_error("missing --p");
  if (!has_kstar) usage_error("missing --kstar");
  if (!dist) usage_error("missing --dist");

  const Dist d = parse_dist(*dist);
  disom_report* raw = nullptr;
  check(disom_check_assumptions(&q, d.get(), &raw), "check");
  const Report report(raw);

  std::cout << take_string([&](char** o) { return disom_report_to_text(report.get(), o); }, "report");
  write_atomic(output_dir(m.out) / "check.json",
               take_string([&](char** o) { return disom_report_to_json(report.get(), o); }, "report"));
  return 0;
}

// ---- dist

struct DistFlags {
  std::string dist, out;
  double d_min = 0, d_max = 10, step = 1;
};

int cmd_dist(const DistFlags& f) {
  const Dist d = parse_dist(f.dist);
  const std::string csv = take_string(
      [&](char** o) { return disom_distribution_table_csv(d.get(), f.d_min, f.d_max, f.step, o); },
      "dist");
  std::cout << csv;
  write_atomic(output_dir(f.out) / "dist.csv", csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distorted OneMax benchmark: (1+lambda) and (1,lambda) EA on frozen noisy OneMax"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(disom_version()));
  app.footer(
      "Distribution specs: kind:key=value(,key=value)*\n"
      "  exp:rate=R  gauss:scale=S  pareto:x0=X,tau=T  uniform:a=A,b=B  truncexp:rate=R,cutoff=C\n"
      "Output directory: --out, else $DISOM_OUT_DIR, else the working directory.");

  RunFlags run;
  auto* run_cmd = app.add_subcommand("run", "single EA run; writes trace.csv and result.json");
  add_model_flags(run_cmd, run);
  run.o_rate = run_cmd->add_option("--mutation-rate", run.mutation_rate, "bit flip probability (default 1/n)");
  run_cmd->add_flag("--dense-trace", run.dense_trace, "record every generation");
  run_cmd->add_option("--config", run.config, "result.json or run config to start from");
  run_cmd->add_option("--out", run.out, "output directory");

  ExperimentFlags exp;
  auto* exp_cmd = app.add_subcommand("experiment", "batch of runs; writes median.csv, normalized.csv, summary.json");
  exp.o_preset = exp_cmd->add_option("--preset", exp.preset, "fig1, fig2, fig3 or custom")
                     ->check(CLI::IsMember({"fig1", "fig2", "fig3", "custom"}));
  exp.o_seed = exp_cmd->add_option("--master-seed", exp.master_seed, "master seed");
  exp.o_scale = exp_cmd->add_option("--scale", exp.scale, "scale cutoffs and n ranges (1 = full size)");
  exp.o_runs = exp_cmd->add_option("--runs", exp.runs, "runs per cell")->check(CLI::PositiveNumber);
  exp.o_cutoff = exp_cmd->add_option("--cutoff", exp.cutoff, "generation cutoff override");
  exp_cmd->add_option("--jobs", exp.jobs, "worker threads (default: all cores)");
  exp_cmd->add_option("--config", exp.config, "experiment config JSON (config.json or summary.json)");
  exp_cmd->add_flag("--full", exp.full, "allow fig1 at its full 1e9 generation cutoff");
  exp_cmd->add_flag("--keep-traces", exp.keep_traces, "write the trace of run 0 of every cell");
  exp_cmd->add_option("--out", exp.out, "output directory");

  CheckFlags chk;
  auto* chk_cmd = app.add_subcommand("check", "report parameter assumptions; writes check.json");
  add_model_flags(chk_cmd, chk.model);
  chk.model.o_rate = nullptr;
  chk.o_eps = chk_cmd->add_option("--epsilon", chk.epsilon, "slack in [0, 1)");
  chk.o_dmin = chk_cmd->add_option("--d-min", chk.d_min, "sigma scan start");
  chk.o_dmax = chk_cmd->add_option("--d-max", chk.d_max, "sigma scan end");
  chk.o_step = chk_cmd->add_option("--step", chk.step, "sigma scan step");
  chk.o_sigma = chk_cmd->add_option("--sigma-bound", chk.sigma_bound, "report d_hat against this sigma");
  chk_cmd->add_option("--gain", chk.gain, "exact gain probability, n=N,k=K,l=L,t=T");
  chk_cmd->add_option("--layer", chk.layer, "Hamming layer size, n=N,l=L");
  chk_cmd->add_option("--config", chk.model.config, "check.json or query to start from");
  chk_cmd->add_option("--out", chk.model.out, "output directory");

  DistFlags dst;
  auto* dist_cmd = app.add_subcommand("dist", "tail and sigma-ratio table; writes dist.csv");
  dist_cmd->add_option("--dist", dst.dist, "distribution spec")->required();
  dist_cmd->add_option("--d-min", dst.d_min, "first d");
  dist_cmd->add_option("--d-max", dst.d_max, "last d");
  dist_cmd->add_option("--step", dst.step, "d increment");
  dist_cmd->add_option("--out", dst.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run);
    if (exp_cmd->parsed()) return cmd_experiment(exp);
    if (chk_cmd->parsed()) return cmd_check(chk);
    return cmd_dist(dst);
  } catch (const Failure& f) {
    std::cerr << "disom: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "disom: " << e.what() << "\n";
    return kExitInternal;
  }
}
