#include "disom/disom.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include <json.hpp>

#include "disom/assumptions.hpp"
#include "disom/distributions.hpp"
#include "disom/ea.hpp"
#include "disom/errors.hpp"
#include "disom/experiments.hpp"
#include "disom/format.hpp"
#include "disom/landscape.hpp"
#include "disom/oracle.hpp"

struct disom_distribution {
  disom::DistortionSpec spec;
};

struct disom_landscape {
  disom::FrozenLandscape landscape;
};

struct disom_run {
  disom::EAConfig config;
  std::uint64_t landscape_seed;
  double p;
  disom::DistortionSpec dist;
  disom::RunResult result;
};

struct disom_report {
  disom::AssumptionQuery query;
  disom::DistortionSpec dist;
  disom::AssumptionReport report;
};

struct disom_experiment {
  disom::ExperimentConfig config;
};

struct disom_batch {
  disom::BatchResult batch;
};

namespace {

using nlohmann::json;

thread_local std::string last_error;

class InvalidArgument : public disom::Error {
 public:
  using disom::Error::Error;
};

template <typename T>
void require_arg(const T* ptr, const char* name) {
  if (ptr == nullptr) throw InvalidArgument(std::string(name) + " must not be NULL");
}

template <typename F>
disom_status guarded(F&& body) noexcept {
  auto fail = [](disom_status s, const char* what) {
    try {
      last_error = what;
    } catch (...) {
    }
    return s;
  };
  try {
    body();
    return DISOM_OK;
  } catch (const InvalidArgument& e) {
    return fail(DISOM_ERR_INVALID_ARGUMENT, e.what());
  } catch (const disom::SupportExhausted& e) {
    return fail(DISOM_ERR_SUPPORT_EXHAUSTED, e.what());
  } catch (const disom::ParameterError& e) {
    return fail(DISOM_ERR_PARAMETER, e.what());
  } catch (const disom::DomainError& e) {
    return fail(DISOM_ERR_DOMAIN, e.what());
  } catch (const disom::DimensionError& e) {
    return fail(DISOM_ERR_DIMENSION, e.what());
  } catch (const disom::ParseError& e) {
    return fail(DISOM_ERR_PARSE, e.what());
  } catch (const disom::ResourceError& e) {
    return fail(DISOM_ERR_RESOURCE, e.what());
  } catch (const disom::UsageError& e) {
    return fail(DISOM_ERR_USAGE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(DISOM_ERR_RESOURCE, "out of memory");
  } catch (const std::exception& e) {
    return fail(DISOM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(DISOM_ERR_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** out, const std::string& s) {
  require_arg(out, "out");
  *out = copy_string(s);
}

disom::SearchPoint point_from_bytes(const std::uint8_t* bits, std::size_t n) {
  if (n > 0) require_arg(bits, "bits");
  disom::SearchPoint x(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (bits[i] > 1) throw InvalidArgument("bits must hold only 0 or 1 values");
    if (bits[i] == 1) x.set(i, true);
  }
  return x;
}

disom_fitness to_c(const disom::FitnessValue& f) {
  return {static_cast<std::uint64_t>(f.om), f.distorted ? 1 : 0, f.distortion, f.total};
}

disom::Variant to_variant(disom_variant v) {
  switch (v) {
    case DISOM_PLUS: return disom::Variant::Plus;
    case DISOM_COMMA: return disom::Variant::Comma;
  }
  throw InvalidArgument("unknown variant");
}

disom::EAConfig to_config(const disom_ea_config& c) {
  disom::EAConfig cfg;
  cfg.variant = to_variant(c.variant);
  cfg.lambda = c.lambda;
  cfg.n = static_cast<std::size_t>(c.n);
  cfg.kstar = c.kstar;
  if (c.mutation_rate > 0.0) cfg.mutation_rate = c.mutation_rate;
  cfg.cutoff_generations = c.cutoff_generations;
  cfg.rng_seed = c.rng_seed;
  cfg.dense_trace = c.dense_trace != 0;
  return cfg;
}

json fitness_json(const disom::FitnessValue& f) {
  return {{"om", f.om}, {"distorted", f.distorted}, {"distortion", f.distortion}, {"total", f.total}};
}

}  // namespace

extern "C" {

const char* disom_version(void) { return "1.0.0"; }

uint32_t disom_prf_version(void) { return disom::kPrfVersion; }

const char* disom_last_error(void) { return last_error.c_str(); }

const char* disom_status_name(disom_status status) {
  switch (status) {
    case DISOM_OK: return "ok";
    case DISOM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case DISOM_ERR_PARAMETER: return "parameter error";
    case DISOM_ERR_DOMAIN: return "domain error";
    case DISOM_ERR_DIMENSION: return "dimension error";
    case DISOM_ERR_PARSE: return "parse error";
    case DISOM_ERR_SUPPORT_EXHAUSTED: return "support exhausted";
    case DISOM_ERR_RESOURCE: return "resource error";
    case DISOM_ERR_USAGE: return "usage error";
    case DISOM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void disom_string_free(char* s) { std::free(s); }

// ---- distributions

disom_status disom_distribution_parse(const char* spec, disom_distribution** out) {
  return guarded([&] {
    require_arg(spec, "spec");
    require_arg(out, "out");
    *out = new disom_distribution{disom::DistortionSpec::parse(spec)};
  });
}

void disom_distribution_free(disom_distribution* dist) { delete dist; }

disom_status disom_distribution_to_string(const disom_distribution* dist, char** out) {
  return guarded([&] {
    require_arg(dist, "dist");
    emit(out, dist->spec.to_string());
  });
}

disom_status disom_distribution_tail(const disom_distribution* dist, double d, double* out) {
  return guarded([&] {
    require_arg(dist, "dist");
    require_arg(out, "out");
    *out = disom::tail(dist->spec, d);
  });
}

disom_status disom_distribution_sample(const disom_distribution* dist, double u, double* out) {
  return guarded([&] {
    require_arg(dist, "dist");
    require_arg(out, "out");
    *out = disom::sample(dist->spec, u);
  });
}

disom_status disom_distribution_sigma_ratio(const disom_distribution* dist, double d, double* out) {
  return guarded([&] {
    require_arg(dist, "dist");
    require_arg(out, "out");
    *out = disom::sigma_ratio(dist->spec, d);
  });
}

disom_status disom_distribution_table_csv(const disom_distribution* dist, double d_min,
                                          double d_max, double step, char** out) {
  return guarded([&] {
    require_arg(dist, "dist");
    if (!(step > 0.0)) throw disom::DomainError("step must be positive");
    if (!(d_max >= d_min)) throw disom::DomainError("need d_min <= d_max");
    std::ostringstream csv;
    csv << "d,tail,sigma_ratio\n";
    const double slack = 1e-9 * step;
    for (std::size_t k = 0;; ++k) {
      const double d = d_min + static_cast<double>(k) * step;
      if (d > d_max + slack) break;
      csv << disom::format_real(d) << ',' << disom::format_real(disom::tail(dist->spec, d)) << ',';
      try {
        csv << disom::format_real(disom::sigma_ratio(dist->spec, d));
      } catch (const disom::SupportExhausted&) {
        csv << "violation";
      }
      csv << '\n';
    }
    emit(out, csv.str());
  });
}

// ---- landscape

disom_status disom_landscape_create(uint64_t n, double p, const disom_distribution* dist,
                                    uint64_t seed, disom_landscape** out) {
  return guarded([&] {
    require_arg(dist, "dist");
    require_arg(out, "out");
    *out = new disom_landscape{disom::FrozenLandscape(static_cast<std::size_t>(n), p, dist->spec, seed)};
  });
}

void disom_landscape_free(disom_landscape* landscape) { delete landscape; }

disom_status disom_landscape_evaluate(const disom_landscape* landscape, const uint8_t* bits,
                                      size_t n, disom_fitness* out) {
  return guarded([&] {
    require_arg(landscape, "landscape");
    require_arg(out, "out");
    *out = to_c(landscape->landscape.evaluate(point_from_bytes(bits, n)));
  });
}

// ---- evolutionary algorithms

void disom_ea_config_init(disom_ea_config* config) {
  if (config == nullptr) return;
  *config = disom_ea_config{DISOM_COMMA, 1, 1, 0.0, 0.0, 1'000'000, 0, 0};
}

void disom_derive_run_seeds(uint64_t master_seed, uint64_t cell, uint64_t run,
                            uint64_t* landscape_seed, uint64_t* rng_seed) {
  const auto seeds = disom::run_seeds(master_seed, cell, run);
  if (landscape_seed) *landscape_seed = seeds.landscape;
  if (rng_seed) *rng_seed = seeds.rng;
}

disom_status disom_run_ea(const disom_landscape* landscape, const disom_ea_config* config,
                          disom_run** out) {
  return guarded([&] {
    require_arg(landscape, "landscape");
    require_arg(config, "config");
    require_arg(out, "out");
    const auto& l = landscape->landscape;
    disom::EAConfig cfg = to_config(*config);
    auto result = disom::run(l, cfg);
    *out = new disom_run{cfg, l.seed(), l.p(), l.distribution(), std::move(result)};
  });
}

void disom_run_free(disom_run* run) { delete run; }

disom_status disom_run_get_summary(const disom_run* run, disom_run_summary* out) {
  return guarded([&] {
    require_arg(run, "run");
    require_arg(out, "out");
    const auto& r = run->result;
    *out = disom_run_summary{r.success ? 1 : 0, r.om_target_reached ? 1 : 0, r.generations,
                             r.evaluations, to_c(r.final), static_cast<uint64_t>(r.max_flips),
                             r.trace.size()};
  });
}

disom_status disom_run_get_trace_event(const disom_run* run, size_t index, disom_trace_event* out) {
  return guarded([&] {
    require_arg(run, "run");
    require_arg(out, "out");
    if (index >= run->result.trace.size()) throw InvalidArgument("trace index out of range");
    const auto& e = run->result.trace[index];
    *out = disom_trace_event{e.generation, static_cast<uint64_t>(e.om), e.distortion, e.total,
                             e.accepted ? 1 : 0};
  });
}

disom_status disom_run_trace_csv(const disom_run* run, char** out) {
  return guarded([&] {
    require_arg(run, "run");
    emit(out, disom::trace_csv(run->result, run->config.lambda));
  });
}

disom_status disom_run_to_json(const disom_run* run, char** out) {
  return guarded([&] {
    require_arg(run, "run");
    const auto& r = run->result;
    const auto& c = run->config;
    json j{{"success", r.success},
           {"om_target_reached", r.om_target_reached},
           {"generations", r.generations},
           {"evaluations", r.evaluations},
           {"max_flips", r.max_flips},
           {"trace_events", r.trace.size()},
           {"final", fitness_json(r.final)},
           {"final_point", r.final_point.to_string()},
           {"target", c.target()},
           {"algorithm", std::string(disom::variant_name(c.variant))},
           {"n", c.n},
           {"lambda", c.lambda},
           {"kstar", c.kstar},
           {"mutation_rate", c.rate()},
           {"cutoff_generations", c.cutoff_generations},
           {"rng_seed", c.rng_seed},
           {"landscape_seed", run->landscape_seed},
           {"p", run->p},
           {"distribution", run->dist.to_string()},
           {"prf_version", disom::kPrfVersion}};
    emit(out, j.dump(2) + "\n");
  });
}

// ---- oracles

disom_status disom_fitness_gain_prob(uint32_t n, uint32_t k, uint32_t ell, uint32_t t, double* out) {
  return guarded([&] {
    require_arg(out, "out");
    *out = disom::oracle::fitness_gain_prob({n, k, ell, t});
  });
}

disom_status disom_hamming_layer_size(uint32_t n, uint32_t ell, char** out) {
  return guarded([&] { emit(out, disom::oracle::hamming_layer_size(n, ell).str()); });
}

disom_status disom_layer_census(const disom_landscape* landscape, const uint8_t* bits, size_t n,
                                uint32_t ell, uint64_t* distorted, uint64_t* total) {
  return guarded([&] {
    require_arg(landscape, "landscape");
    const auto census =
        disom::oracle::brute_force_layer_census(landscape->landscape, point_from_bytes(bits, n), ell);
    if (distorted) *distorted = census.distorted;
    if (total) *total = census.total.convert_to<uint64_t>();
  });
}

// ---- assumptions

void disom_assumption_query_init(disom_assumption_query* query) {
  if (query == nullptr) return;
  const disom::AssumptionQuery d;
  *query = disom_assumption_query{d.n,     d.kstar, d.lambda, d.p,  d.epsilon,
                                  d.d_min, d.d_max, d.d_step, 0.0};
}

disom_status disom_check_assumptions(const disom_assumption_query* query,
                                     const disom_distribution* dist, disom_report** out) {
  return guarded([&] {
    require_arg(query, "query");
    require_arg(dist, "dist");
    require_arg(out, "out");
    disom::AssumptionQuery q;
    q.n = query->n;
    q.kstar = query->kstar;
    q.lambda = query->lambda;
    q.p = query->p;
    q.epsilon = query->epsilon;
    q.d_min = query->d_min;
    q.d_max = query->d_max;
    q.d_step = query->d_step;
    if (query->sigma_bound > 0.0) q.sigma_bound = query->sigma_bound;
    auto report = disom::check_assumptions(q, dist->spec);
    *out = new disom_report{q, dist->spec, std::move(report)};
  });
}

void disom_report_free(disom_report* report) { delete report; }

disom_status disom_report_get_values(const disom_report* report, disom_report_values* out) {
  return guarded([&] {
    require_arg(report, "report");
    require_arg(out, "out");
    const auto& r = report->report;
    *out = disom_report_values{r.eta,
                               r.q,
                               r.epsilon,
                               r.lambda_lower,
                               r.lambda_upper,
                               r.sigma_estimate,
                               r.d_hat ? 1 : 0,
                               r.d_hat.value_or(0.0),
                               r.all_pass() ? 1 : 0,
                               r.flags.size()};
  });
}

disom_status disom_report_get_flag(const disom_report* report, size_t index, disom_flag* out) {
  return guarded([&] {
    require_arg(report, "report");
    require_arg(out, "out");
    if (index >= report->report.flags.size()) throw InvalidArgument("flag index out of range");
    const auto& f = report->report.flags[index];
    *out = disom_flag{f.name.c_str(), f.pass ? 1 : 0, f.advisory ? 1 : 0, f.reason.c_str()};
  });
}

disom_status disom_report_to_text(const disom_report* report, char** out) {
  return guarded([&] {
    require_arg(report, "report");
    emit(out, disom::to_text(report->report));
  });
}

disom_status disom_report_to_json(const disom_report* report, char** out) {
  return guarded([&] {
    require_arg(report, "report");
    const auto& r = report->report;
    const auto& q = report->query;
    json flags = json::array();
    for (const auto& f : r.flags) {
      flags.push_back({{"name", f.name}, {"pass", f.pass}, {"advisory", f.advisory}, {"reason", f.reason}});
    }
    auto real = [](double v) { return std::isfinite(v) ? json(v) : json(disom::format_real(v)); };
    json j{{"query",
            {{"n", q.n},
             {"kstar", q.kstar},
             {"lambda", q.lambda},
             {"p", q.p},
             {"epsilon", q.epsilon},
             {"d_min", q.d_min},
             {"d_max", q.d_max},
             {"d_step", q.d_step},
             {"sigma_bound", q.sigma_bound ? json(*q.sigma_bound) : json(nullptr)},
             {"distribution", report->dist.to_string()}}},
           {"eta", r.eta},
           {"q", r.q},
           {"epsilon", r.epsilon},
           {"lambda_lower", real(r.lambda_lower)},
           {"lambda_upper", real(r.lambda_upper)},
           {"sigma_estimate", real(r.sigma_estimate)},
           {"d_hat", r.d_hat ? json(*r.d_hat) : json(nullptr)},
           {"sigma_violation_at", r.sigma_violation_at ? json(*r.sigma_violation_at) : json(nullptr)},
           {"all_pass", r.all_pass()},
           {"flags", flags}};
    emit(out, j.dump(2) + "\n");
  });
}

// ---- experiments

disom_status disom_experiment_preset(const char* name, double scale, disom_experiment** out) {
  return guarded([&] {
    require_arg(name, "name");
    require_arg(out, "out");
    *out = new disom_experiment{disom::preset(disom::parse_preset(name), scale)};
  });
}

disom_status disom_experiment_from_json(const char* text, disom_experiment** out) {
  return guarded([&] {
    require_arg(text, "json");
    require_arg(out, "out");
    *out = new disom_experiment{disom::experiment_from_json(text)};
  });
}

void disom_experiment_free(disom_experiment* experiment) { delete experiment; }

disom_status disom_experiment_to_json(const disom_experiment* experiment, char** out) {
  return guarded([&] {
    require_arg(experiment, "experiment");
    emit(out, disom::to_json(experiment->config));
  });
}

disom_status disom_experiment_set_runs(disom_experiment* experiment, uint32_t runs) {
  return guarded([&] {
    require_arg(experiment, "experiment");
    if (runs < 1) throw disom::ParameterError("runs must be >= 1");
    experiment->config.runs = runs;
  });
}

disom_status disom_experiment_set_master_seed(disom_experiment* experiment, uint64_t seed) {
  return guarded([&] {
    require_arg(experiment, "experiment");
    experiment->config.master_seed = seed;
  });
}

disom_status disom_experiment_set_cutoff(disom_experiment* experiment, uint64_t cutoff) {
  return guarded([&] {
    require_arg(experiment, "experiment");
    experiment->config.cutoff_generations = cutoff;
  });
}

disom_status disom_experiment_get_cutoff(const disom_experiment* experiment, uint64_t* cutoff) {
  return guarded([&] {
    require_arg(experiment, "experiment");
    require_arg(cutoff, "cutoff_generations");
    *cutoff = experiment->config.cutoff_generations;
  });
}

disom_status disom_experiment_set_keep_runs(disom_experiment* experiment, int keep) {
  return guarded([&] {
    require_arg(experiment, "experiment");
    experiment->config.keep_runs = keep != 0;
  });
}

disom_status disom_experiment_run(const disom_experiment* experiment, uint32_t jobs,
                                  disom_batch** out) {
  return guarded([&] {
    require_arg(experiment, "experiment");
    require_arg(out, "out");
    *out = new disom_batch{disom::run_batch(experiment->config, jobs)};
  });
}

void disom_batch_free(disom_batch* batch) { delete batch; }

size_t disom_batch_cell_count(const disom_batch* batch) {
  return batch == nullptr ? 0 : batch->batch.cells.size();
}

disom_status disom_batch_get_cell(const disom_batch* batch, size_t index, disom_cell_stats* out) {
  return guarded([&] {
    require_arg(batch, "batch");
    require_arg(out, "out");
    if (index >= batch->batch.cells.size()) throw InvalidArgument("cell index out of range");
    const auto& s = batch->batch.cells[index];
    *out = disom_cell_stats{s.cell.variant == disom::Variant::Plus ? DISOM_PLUS : DISOM_COMMA,
                            static_cast<uint64_t>(s.cell.n),
                            s.cell.lambda,
                            s.cell.p,
                            s.cell.kstar,
                            s.cell.cutoff_d ? 1 : 0,
                            s.cell.cutoff_d.value_or(0.0),
                            s.runs,
                            s.failed,
                            s.success,
                            s.censored,
                            s.median_generations,
                            s.mean_generations,
                            s.mean_is_lower_bound ? 1 : 0,
                            s.normalized ? 1 : 0,
                            s.normalized.value_or(0.0)};
  });
}

disom_status disom_batch_median_csv(const disom_batch* batch, char** out) {
  return guarded([&] {
    require_arg(batch, "batch");
    emit(out, batch->batch.median_csv());
  });
}

disom_status disom_batch_normalized_csv(const disom_batch* batch, char** out) {
  return guarded([&] {
    require_arg(batch, "batch");
    emit(out, batch->batch.normalized_csv());
  });
}

disom_status disom_batch_summary_json(const disom_batch* batch, char** out) {
  return guarded([&] {
    require_arg(batch, "batch");
    emit(out, disom::summary_json(batch->batch));
  });
}

disom_status disom_batch_trace_csv(const disom_batch* batch, size_t cell, size_t run, char** out) {
  return guarded([&] {
    require_arg(batch, "batch");
    const auto& cells = batch->batch.cells;
    if (cell >= cells.size()) throw InvalidArgument("cell index out of range");
    if (run >= cells[cell].records.size()) throw InvalidArgument("run index out of range");
    const auto& rec = cells[cell].records[run];
    if (!rec.detail) {
      throw disom::UsageError(rec.completed ? "batch was run without keep_runs"
                                            : "run failed: " + rec.error);
    }
    emit(out, disom::trace_csv(*rec.detail, cells[cell].cell.lambda));
  });
}

disom_status disom_normalize_runtime(double generations, double p, const disom_distribution* dist,
                                     double cutoff_d, double* out) {
  return guarded([&] {
    require_arg(dist, "dist");
    require_arg(out, "out");
    *out = disom::normalize_runtime(generations, p, dist->spec, cutoff_d);
  });
}

}  // extern "C"
