// JSON form of ExperimentConfig and of batch summaries.

#include <set>
#include <string>

#include <json.hpp>

#include "disom/errors.hpp"
#include "disom/experiments.hpp"

namespace disom {

namespace {

using nlohmann::json;

const std::set<std::string>& known_fields() {
  static const std::set<std::string> fields{
      "preset",     "algorithms",  "distributions",  "n",         "lambda",
      "p",          "kstar",       "mutation_rate",  "cutoff_generations",
      "runs",       "master_seed", "n_values",       "derive_from_n",
      "p_cutoffs",  "keep_runs"};
  return fields;
}

template <typename T>
T field(const json& j, const char* name) {
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("experiment config field '") + name + "': " + e.what());
  }
}

json fitness_json(const FitnessValue& f) {
  return {{"om", f.om}, {"distorted", f.distorted}, {"distortion", f.distortion}, {"total", f.total}};
}

}  // namespace

std::string to_json(const ExperimentConfig& c) {
  json j;
  j["preset"] = std::string(preset_name(c.preset));
  j["algorithms"] = json::array();
  for (auto v : c.algorithms) j["algorithms"].push_back(std::string(variant_name(v)));
  j["distributions"] = json::array();
  for (const auto& d : c.distributions) j["distributions"].push_back(d.to_string());
  j["n"] = c.n;
  j["lambda"] = c.lambda;
  j["p"] = c.p;
  j["kstar"] = c.kstar;
  j["mutation_rate"] = c.mutation_rate ? json(*c.mutation_rate) : json(nullptr);
  j["cutoff_generations"] = c.cutoff_generations;
  j["runs"] = c.runs;
  j["master_seed"] = c.master_seed;
  j["n_values"] = c.n_values;
  j["derive_from_n"] = c.derive_from_n;
  j["p_cutoffs"] = json::array();
  for (const auto& pc : c.p_cutoffs) j["p_cutoffs"].push_back({{"p", pc.p}, {"cutoff_d", pc.cutoff_d}});
  j["keep_runs"] = c.keep_runs;
  return j.dump(2) + "\n";
}

ExperimentConfig experiment_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("experiment config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("experiment config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known_fields().contains(key)) throw ParseError("unknown experiment config field '" + key + "'");
  }

  const Preset which = j.contains("preset") ? parse_preset(field<std::string>(j, "preset"))
                                            : Preset::Custom;
  ExperimentConfig c = which == Preset::Custom ? ExperimentConfig{} : preset(which);
  c.preset = which;

  if (j.contains("algorithms")) {
    c.algorithms.clear();
    for (const auto& name : field<std::vector<std::string>>(j, "algorithms")) {
      c.algorithms.push_back(parse_variant(name));
    }
  }
  if (j.contains("distributions")) {
    c.distributions.clear();
    for (const auto& spec : field<std::vector<std::string>>(j, "distributions")) {
      c.distributions.push_back(DistortionSpec::parse(spec));
    }
  }
  if (j.contains("n")) c.n = field<std::size_t>(j, "n");
  if (j.contains("lambda")) c.lambda = field<unsigned>(j, "lambda");
  if (j.contains("p")) c.p = field<double>(j, "p");
  if (j.contains("kstar")) c.kstar = field<double>(j, "kstar");
  if (j.contains("mutation_rate")) {
    if (j["mutation_rate"].is_null()) c.mutation_rate.reset();
    else c.mutation_rate = field<double>(j, "mutation_rate");
  }
  if (j.contains("cutoff_generations")) c.cutoff_generations = field<std::uint64_t>(j, "cutoff_generations");
  if (j.contains("runs")) c.runs = field<unsigned>(j, "runs");
  if (j.contains("master_seed")) c.master_seed = field<std::uint64_t>(j, "master_seed");
  if (j.contains("n_values")) c.n_values = field<std::vector<std::size_t>>(j, "n_values");
  if (j.contains("derive_from_n")) c.derive_from_n = field<bool>(j, "derive_from_n");
  if (j.contains("p_cutoffs")) {
    c.p_cutoffs.clear();
    for (const auto& pc : j.at("p_cutoffs")) {
      c.p_cutoffs.push_back({field<double>(pc, "p"), field<double>(pc, "cutoff_d")});
    }
  }
  if (j.contains("keep_runs")) c.keep_runs = field<bool>(j, "keep_runs");
  c.validate();
  return c;
}

std::string summary_json(const BatchResult& batch) {
  json cells = json::array();
  for (const auto& s : batch.cells) {
    json cell{{"index", s.cell.index},
              {"algorithm", std::string(variant_name(s.cell.variant))},
              {"n", s.cell.n},
              {"lambda", s.cell.lambda},
              {"p", s.cell.p},
              {"kstar", s.cell.kstar},
              {"distribution", s.cell.dist.to_string()},
              {"cutoff_generations", s.cell.cutoff_generations},
              {"runs", s.runs},
              {"failed", s.failed},
              {"success", s.success},
              {"censored", s.censored},
              {"median_generations", s.median_generations},
              {"mean_generations", s.mean_generations},
              {"mean_is_lower_bound", s.mean_is_lower_bound}};
    if (s.cell.cutoff_d) cell["cutoff_d"] = *s.cell.cutoff_d;
    if (s.normalized) cell["normalized"] = *s.normalized;
    json runs = json::array();
    for (const auto& r : s.records) {
      json run{{"landscape_seed", r.seeds.landscape}, {"rng_seed", r.seeds.rng},
               {"completed", r.completed}};
      if (r.completed) {
        run["success"] = r.success;
        run["om_target_reached"] = r.om_target_reached;
        run["generations"] = r.generations;
        run["evaluations"] = r.evaluations;
        run["final"] = fitness_json(r.final);
      } else {
        run["error"] = r.error;
      }
      runs.push_back(std::move(run));
    }
    cell["records"] = std::move(runs);
    cells.push_back(std::move(cell));
  }
  json j{{"config", json::parse(to_json(batch.config))}, {"cells", std::move(cells)}};
  return j.dump(2) + "\n";
}

}  // namespace disom
