// agestack: curate / simulate / harvest / stack / evaluate / report.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "agestack/core/digest.hpp"
#include "agestack/core/manifest.hpp"
#include "agestack/error.hpp"
#include "agestack/estimators/harvest.hpp"
#include "agestack/estimators/remote.hpp"
#include "agestack/estimators/replay.hpp"
#include "agestack/estimators/simulator.hpp"
#include "agestack/learners/model.hpp"
#include "agestack/report/evaluation.hpp"
#include "agestack/report/figures.hpp"
#include "agestack/report/run_config.hpp"
#include "agestack/stacking/stacking.hpp"

#ifndef AGESTACK_DEFAULT_PROFILES
#define AGESTACK_DEFAULT_PROFILES "data/profiles.ini"
#endif

namespace {

namespace fs = std::filesystem;
using namespace agestack;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitRemote = 3;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string token;
  for (const char c : text) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!token.empty()) out.push_back(std::move(token));
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  if (!token.empty()) out.push_back(std::move(token));
  return out;
}

// Options not given on the command line fall back to [<section>] and then
// [global] of the config file.
class Settings {
 public:
  void bind_config(const report::ConfigFile* config) { config_ = config; }

  template <typename T>
  void apply(CLI::Option* opt, const std::string& section, const std::string& key, T& target) {
    if (opt->count() > 0 || !config_) return;
    auto value = config_->get(section, key);
    if (!value) value = config_->get("global", key);
    if (!value) return;
    if constexpr (std::is_same_v<T, std::vector<std::string>>) {
      target = split_list(*value);
    } else if constexpr (std::is_same_v<T, bool>) {
      target = (*value == "true" || *value == "1" || *value == "yes");
    } else {
      std::istringstream in(*value);
      T parsed{};
      if (!(in >> parsed)) {
        throw UsageError("config value " + section + "." + key + " = '" + *value +
                         "' has the wrong type");
      }
      if constexpr (std::is_same_v<T, std::string>) {
        target = *value;
      } else {
        target = parsed;
      }
    }
  }

 private:
  const report::ConfigFile* config_ = nullptr;
};

struct Global {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out = "out";
  CLI::Option* seed_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  report::ConfigFile config;
  Settings settings;
};

core::Manifest load_manifest(const std::string& path) {
  if (path.empty()) throw UsageError("--manifest is required");
  return core::read_manifest(fs::path(path));
}

std::vector<core::Prediction> load_predictions(const std::vector<std::string>& paths) {
  if (paths.empty()) throw UsageError("at least one --predictions file is required");
  std::vector<core::Prediction> all;
  for (const auto& p : paths) {
    auto rows = core::read_predictions(fs::path(p));
    all.insert(all.end(), std::make_move_iterator(rows.begin()),
               std::make_move_iterator(rows.end()));
  }
  core::sort_predictions(all);
  return all;
}

std::vector<std::string> distinct_estimators(const std::vector<core::Prediction>& predictions) {
  std::vector<std::string> ids;
  for (const auto& p : predictions) ids.push_back(p.estimator_id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::string file_sha256(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream bytes;
  bytes << in.rdbuf();
  return core::sha256_hex(bytes.str());
}

nlohmann::json file_sha256(const std::vector<std::string>& paths) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : paths) out.push_back(file_sha256(p));
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out << text;
}

// ---------------------------------------------------------------------------

struct CurateArgs {
  std::string candidates;
  std::size_t synthetic_per_age = 0;
  std::size_t quota = 492;
  int age_min = 0;
  int age_max = 25;
};

int run_curate(Global& g, CurateArgs& a, CLI::App& cmd) {
  auto& s = g.settings;
  s.apply(cmd.get_option("--candidates"), "curate", "candidates", a.candidates);
  s.apply(cmd.get_option("--synthetic-per-age"), "curate", "synthetic_per_age", a.synthetic_per_age);
  s.apply(cmd.get_option("--quota"), "curate", "quota", a.quota);
  s.apply(cmd.get_option("--age-min"), "curate", "age_min", a.age_min);
  s.apply(cmd.get_option("--age-max"), "curate", "age_max", a.age_max);

  std::vector<core::SubjectRecord> pool;
  if (!a.candidates.empty()) {
    const auto m = core::read_manifest(fs::path(a.candidates));
    pool = m.records();
  } else if (a.synthetic_per_age > 0) {
    pool = core::synthetic_candidates(a.synthetic_per_age, core::AgeYears(a.age_min),
                                      core::AgeYears(a.age_max));
  } else {
    throw UsageError("curate needs --candidates or --synthetic-per-age");
  }

  report::RunConfig rc{"curate", g.seed,
                       {{"candidates_sha256", a.candidates.empty() ? "" : file_sha256(a.candidates)},
                        {"synthetic_per_age", a.synthetic_per_age},
                        {"quota", a.quota},
                        {"age_min", a.age_min},
                        {"age_max", a.age_max}},
                       {{"candidates", a.candidates}}};
  const auto manifest = core::curate_balanced(pool, a.quota, core::AgeYears(a.age_min),
                                              core::AgeYears(a.age_max), g.seed);
  const fs::path out = g.out;
  core::write_manifest(manifest, out / "manifest.csv", rc.provenance());
  rc.write(out / "run_config_curate.json");
  std::cout << "wrote " << (out / "manifest.csv").string() << " (" << manifest.size()
            << " subjects)\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string manifest;
  std::string profiles = AGESTACK_DEFAULT_PROFILES;
  std::vector<std::string> estimators;
};

int run_simulate(Global& g, SimulateArgs& a, CLI::App& cmd) {
  auto& s = g.settings;
  s.apply(cmd.get_option("--manifest"), "simulate", "manifest", a.manifest);
  s.apply(cmd.get_option("--profiles"), "simulate", "profiles", a.profiles);
  s.apply(cmd.get_option("--estimators"), "simulate", "estimators", a.estimators);

  const auto manifest = load_manifest(a.manifest);
  const auto profiles = estimators::read_profiles(fs::path(a.profiles));
  if (a.estimators.empty()) {
    for (const auto& p : profiles) a.estimators.push_back(p.estimator_id);
  }
  report::RunConfig rc{"simulate", g.seed,
                       {{"manifest_sha256", file_sha256(a.manifest)},
                        {"profiles_sha256", file_sha256(a.profiles)},
                        {"estimators", a.estimators}},
                       {{"manifest", a.manifest}, {"profiles", a.profiles}}};
  std::vector<core::Prediction> all;
  for (const auto& id : a.estimators) {
    auto rows = estimators::simulate(estimators::find_profile(profiles, id), manifest, g.seed);
    all.insert(all.end(), rows.begin(), rows.end());
  }
  core::sort_predictions(all);
  const fs::path out = g.out;
  core::write_predictions(all, out / "predictions_simulated.csv", rc.provenance());
  rc.write(out / "run_config_simulate.json");
  std::cout << "wrote " << (out / "predictions_simulated.csv").string() << " (" << all.size()
            << " rows)\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct HarvestArgs {
  std::string manifest;
  std::string image_root = ".";
  std::vector<std::string> replay;   // path:estimator_id
  std::vector<std::string> clients;  // config sections [harvest.<id>]
  std::size_t concurrency = 4;
  long max_failures = -1;
};

estimators::ClientConfig client_from_config(const report::ConfigFile& cfg, const std::string& id) {
  const std::string section = "harvest." + id;
  const auto need = [&](const char* key) {
    const auto v = cfg.get(section, key);
    if (!v) throw UsageError("config section [" + section + "] lacks '" + key + "'");
    return *v;
  };
  estimators::ClientConfig c;
  c.estimator_id = id;
  c.provider = estimators::parse_provider(need("provider"));
  c.endpoint = need("endpoint");
  if (auto v = cfg.get(section, "region")) c.region = *v;
  if (auto v = cfg.get(section, "access_key_env")) c.access_key_env = *v;
  if (auto v = cfg.get(section, "secret_key_env")) c.secret_key_env = *v;
  if (auto v = cfg.get(section, "session_token_env")) c.session_token_env = *v;
  if (auto v = cfg.get(section, "api_key_env")) c.api_key_env = *v;
  if (auto v = cfg.get(section, "timeout_ms")) c.timeout = std::chrono::milliseconds(std::stol(*v));
  if (auto v = cfg.get(section, "max_retries")) c.max_retries = std::stoi(*v);
  if (auto v = cfg.get(section, "backoff_ms")) c.backoff_base = std::chrono::milliseconds(std::stol(*v));
  if (auto v = cfg.get(section, "live")) c.live = (*v == "true" || *v == "1");
  return c;
}

int run_harvest(Global& g, HarvestArgs& a, CLI::App& cmd) {
  auto& s = g.settings;
  s.apply(cmd.get_option("--manifest"), "harvest", "manifest", a.manifest);
  s.apply(cmd.get_option("--image-root"), "harvest", "image_root", a.image_root);
  s.apply(cmd.get_option("--replay"), "harvest", "replay", a.replay);
  s.apply(cmd.get_option("--client"), "harvest", "clients", a.clients);
  s.apply(cmd.get_option("--concurrency"), "harvest", "concurrency", a.concurrency);
  s.apply(cmd.get_option("--max-failures"), "harvest", "max_failures", a.max_failures);

  const auto manifest = load_manifest(a.manifest);
  std::vector<std::shared_ptr<estimators::EstimatorAdapter>> adapters;
  nlohmann::json sources = nlohmann::json::array();
  std::vector<std::string> replay_paths;
  for (const auto& spec : a.replay) {
    const auto colon = spec.rfind(':');
    if (colon == std::string::npos) throw UsageError("--replay expects <csv>:<estimator_id>");
    const std::string path = spec.substr(0, colon);
    const std::string id = spec.substr(colon + 1);
    adapters.push_back(std::make_shared<estimators::ReplayAdapter>(
        estimators::ReplayAdapter::from_csv(path, id)));
    sources.push_back({{"replay_sha256", file_sha256(path)}, {"estimator_id", id}});
    replay_paths.push_back(path);
  }
  for (const auto& id : a.clients) {
    auto c = client_from_config(g.config, id);
    sources.push_back({{"client", id},
                       {"provider", estimators::to_string(c.provider)},
                       {"endpoint", c.endpoint}});
    adapters.push_back(std::make_shared<estimators::RemoteAdapter>(c, a.image_root));
  }
  if (adapters.empty()) throw UsageError("harvest needs --replay or --client sources");

  report::RunConfig rc{"harvest", g.seed,
                       {{"manifest_sha256", file_sha256(a.manifest)},
                        {"sources", sources},
                        {"concurrency", a.concurrency},
                        {"max_failures", a.max_failures}},
                       {{"manifest", a.manifest},
                        {"image_root", a.image_root},
                        {"replay", replay_paths}}};
  const auto result = estimators::harvest(manifest, adapters, a.concurrency);
  const fs::path out = g.out;
  const auto sidecar =
      estimators::write_harvest(result, out / "predictions_harvested.csv", rc.provenance());
  rc.write(out / "run_config_harvest.json");
  std::cout << "wrote " << (out / "predictions_harvested.csv").string() << " ("
            << result.predictions.size() << " rows, " << result.failures.size()
            << " failures in " << sidecar.string() << ")\n";
  if (a.max_failures >= 0 && result.failures.size() > static_cast<std::size_t>(a.max_failures)) {
    std::cerr << "error: " << result.failures.size() << " failures exceed the budget of "
              << a.max_failures << '\n';
    return kExitRemote;
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct StackArgs {
  std::string manifest;
  std::vector<std::string> predictions;
  std::vector<std::string> estimators;
  std::vector<std::string> learners{"gbr", "bagging", "logistic"};
  std::size_t k = 10;
  std::size_t gbr_stages = 100;
  double gbr_learning_rate = 0.1;
  std::size_t gbr_max_depth = 3;
  std::size_t bagging_members = 10;
  long bagging_max_depth = -1;
  std::size_t logistic_epochs = 300;
  double logistic_step = 0.5;
  double logistic_l2 = 1.0;
  std::size_t tree_max_depth = 3;
  bool serial = false;
  bool save_models = true;
};

learners::LearnerSpec make_spec(const std::string& name, const StackArgs& a, std::uint64_t seed) {
  if (name == "gbr") {
    return learners::GbrParams{a.gbr_stages, a.gbr_learning_rate, a.gbr_max_depth, 2};
  }
  if (name == "bagging") {
    learners::BaggingParams p;
    p.n_members = a.bagging_members;
    if (a.bagging_max_depth >= 0) p.max_depth = static_cast<std::size_t>(a.bagging_max_depth);
    p.seed = seed;
    return p;
  }
  if (name == "logistic") {
    learners::LogisticParams p;
    p.epochs = a.logistic_epochs;
    p.step = a.logistic_step;
    p.l2_lambda = a.logistic_l2;
    return p;
  }
  if (name == "tree") return learners::TreeParams{a.tree_max_depth, 2};
  if (name == "mean") return learners::MeanParams{};
  throw UsageError("unknown learner '" + name + "'");
}

int run_stack(Global& g, StackArgs& a, CLI::App& cmd) {
  auto& s = g.settings;
  s.apply(cmd.get_option("--manifest"), "stack", "manifest", a.manifest);
  s.apply(cmd.get_option("--predictions"), "stack", "predictions", a.predictions);
  s.apply(cmd.get_option("--estimators"), "stack", "estimators", a.estimators);
  s.apply(cmd.get_option("--learner"), "stack", "learners", a.learners);
  s.apply(cmd.get_option("--k"), "stack", "k", a.k);
  s.apply(cmd.get_option("--gbr-stages"), "stack", "gbr_stages", a.gbr_stages);
  s.apply(cmd.get_option("--gbr-learning-rate"), "stack", "gbr_learning_rate", a.gbr_learning_rate);
  s.apply(cmd.get_option("--gbr-max-depth"), "stack", "gbr_max_depth", a.gbr_max_depth);
  s.apply(cmd.get_option("--bagging-members"), "stack", "bagging_members", a.bagging_members);
  s.apply(cmd.get_option("--bagging-max-depth"), "stack", "bagging_max_depth", a.bagging_max_depth);
  s.apply(cmd.get_option("--logistic-epochs"), "stack", "logistic_epochs", a.logistic_epochs);
  s.apply(cmd.get_option("--logistic-step"), "stack", "logistic_step", a.logistic_step);
  s.apply(cmd.get_option("--logistic-l2"), "stack", "logistic_l2", a.logistic_l2);
  s.apply(cmd.get_option("--tree-max-depth"), "stack", "tree_max_depth", a.tree_max_depth);
  s.apply(cmd.get_option("--serial"), "stack", "serial", a.serial);

  const auto manifest = load_manifest(a.manifest);
  const auto predictions = load_predictions(a.predictions);
  if (a.estimators.empty()) throw UsageError("--estimators (column order) is required");

  nlohmann::json specs = nlohmann::json::array();
  std::vector<learners::LearnerSpec> learner_specs;
  for (const auto& name : a.learners) {
    learner_specs.push_back(make_spec(name, a, g.seed));
    specs.push_back(learners::spec_to_json(learner_specs.back()));
  }
  report::RunConfig rc{"stack", g.seed,
                       {{"manifest_sha256", file_sha256(a.manifest)},
                        {"predictions_sha256", file_sha256(a.predictions)},
                        {"estimator_order", a.estimators},
                        {"k", a.k},
                        {"learners", specs}},
                       {{"manifest", a.manifest}, {"predictions", a.predictions}}};

  const auto exec = a.serial ? Execution::Serial : Execution::Parallel;
  const auto matrix = stacking::assemble(manifest, predictions, a.estimators);
  const auto plan = stacking::plan_folds(matrix.subject_ids, a.k, g.seed);
  const fs::path out = g.out;
  for (std::size_t i = 0; i < learner_specs.size(); ++i) {
    const auto& spec = learner_specs[i];
    const auto oof = stacking::stack_oof(matrix, plan, spec, exec);
    const auto id = stacking::stack_estimator_id(spec, g.seed);
    const auto rows = stacking::to_predictions(oof, id);
    const auto path = out / ("oof_" + a.learners[i] + ".csv");
    core::write_predictions(rows, path, rc.provenance());
    std::cout << "wrote " << path.string() << " (" << id << ")\n";
    if (a.save_models) {
      const auto model = learners::fit(spec, matrix.features, matrix.targets, exec);
      auto doc = learners::to_json(model);
      doc["estimator_order"] = a.estimators;
      doc["config_sha256"] = rc.digest();
      write_text(out / ("model_" + a.learners[i] + ".json"), doc.dump() + "\n");
    }
  }
  rc.write(out / "run_config_stack.json");
  return 0;
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
  std::string manifest;
  std::vector<std::string> predictions;
  std::vector<std::string> estimators;
};

int run_evaluate(Global& g, EvaluateArgs& a, CLI::App& cmd, const std::string& section) {
  auto& s = g.settings;
  s.apply(cmd.get_option("--manifest"), section, "manifest", a.manifest);
  s.apply(cmd.get_option("--predictions"), section, "predictions", a.predictions);
  s.apply(cmd.get_option("--estimators"), section, "estimators", a.estimators);

  const auto manifest = load_manifest(a.manifest);
  const auto predictions = load_predictions(a.predictions);
  auto ids = a.estimators.empty() ? distinct_estimators(predictions) : a.estimators;

  report::RunConfig rc{section, g.seed,
                       {{"manifest_sha256", file_sha256(a.manifest)},
                        {"predictions_sha256", file_sha256(a.predictions)},
                        {"estimators", ids}},
                       {{"manifest", a.manifest}, {"predictions", a.predictions}}};
  const fs::path out = g.out;
  std::filesystem::create_directories(out);

  if (section == "evaluate") {
    const auto rows = report::evaluate(manifest, predictions, ids);
    std::ofstream csv(out / "metrics.csv", std::ios::binary);
    report::write_metrics_csv(rows, csv, rc.provenance());
    std::ostringstream text;
    text << "# " << rc.provenance() << "\n\n"
         << report::mae_table(rows, "Mean absolute error, ranked") << '\n'
         << report::band_table(rows, "Accuracy per age band ('*' marks the best per row)") << '\n'
         << report::mae_per_age_table(manifest, predictions, ids, "MAE per age");
    write_text(out / "tables.txt", text.str());
    std::cout << report::mae_table(rows, "Mean absolute error, ranked") << '\n'
              << report::band_table(rows, "Accuracy per age band ('*' marks the best per row)");
  } else {
    const auto files = report::write_figures(manifest, predictions, ids, out, rc.provenance());
    for (const auto& f : files) std::cout << "wrote " << f.csv.string() << ", " << f.svg.string() << '\n';
  }
  rc.write(out / ("run_config_" + section + ".json"));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stacked-ensemble facial age estimation benchmark"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--config", g.config_path, "INI config with [global] and per-command sections");
  g.seed_opt = app.add_option("--seed", g.seed, "Seed for curation, simulation, folds, bagging");
  g.out_opt = app.add_option("--out", g.out, "Output directory");

  CurateArgs curate;
  auto* c = app.add_subcommand("curate", "Build a balanced manifest");
  c->add_option("--candidates", curate.candidates, "Candidate pool (manifest CSV)");
  c->add_option("--synthetic-per-age", curate.synthetic_per_age, "Generate a synthetic pool");
  c->add_option("--quota", curate.quota, "Subjects per age");
  c->add_option("--age-min", curate.age_min);
  c->add_option("--age-max", curate.age_max);

  SimulateArgs simulate;
  auto* sim = app.add_subcommand("simulate", "Simulated base estimators from bias profiles");
  sim->add_option("--manifest", simulate.manifest);
  sim->add_option("--profiles", simulate.profiles, "Bias profile INI");
  sim->add_option("--estimators", simulate.estimators, "Profiles to run (default: all)");

  HarvestArgs harvest;
  auto* h = app.add_subcommand("harvest", "Collect predictions from replay files or remote APIs");
  h->add_option("--manifest", harvest.manifest);
  h->add_option("--image-root", harvest.image_root);
  h->add_option("--replay", harvest.replay, "<predictions.csv>:<estimator_id>");
  h->add_option("--client", harvest.clients, "Remote client, configured in [harvest.<id>]");
  h->add_option("--concurrency", harvest.concurrency);
  h->add_option("--max-failures", harvest.max_failures, "Exit 3 when failures exceed this");

  StackArgs stack;
  auto* st = app.add_subcommand("stack", "Out-of-fold stacking of base estimators");
  st->add_option("--manifest", stack.manifest);
  st->add_option("--predictions", stack.predictions);
  st->add_option("--estimators", stack.estimators, "Feature column order");
  st->add_option("--learner", stack.learners, "gbr, bagging, logistic, tree, mean");
  st->add_option("--k", stack.k, "Number of folds");
  st->add_option("--gbr-stages", stack.gbr_stages);
  st->add_option("--gbr-learning-rate", stack.gbr_learning_rate);
  st->add_option("--gbr-max-depth", stack.gbr_max_depth);
  st->add_option("--bagging-members", stack.bagging_members);
  st->add_option("--bagging-max-depth", stack.bagging_max_depth, "-1 for unlimited");
  st->add_option("--logistic-epochs", stack.logistic_epochs);
  st->add_option("--logistic-step", stack.logistic_step);
  st->add_option("--logistic-l2", stack.logistic_l2);
  st->add_option("--tree-max-depth", stack.tree_max_depth);
  st->add_flag("--serial", stack.serial, "Use the serial reference kernels");

  EvaluateArgs evaluate;
  auto* ev = app.add_subcommand("evaluate", "MAE and band-accuracy tables");
  ev->add_option("--manifest", evaluate.manifest);
  ev->add_option("--predictions", evaluate.predictions);
  ev->add_option("--estimators", evaluate.estimators);

  EvaluateArgs rep;
  auto* r = app.add_subcommand("report", "Figure data (CSV) and charts (SVG)");
  r->add_option("--manifest", rep.manifest);
  r->add_option("--predictions", rep.predictions);
  r->add_option("--estimators", rep.estimators);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (!g.config_path.empty()) {
      g.config = report::ConfigFile::load(g.config_path);
      g.settings.bind_config(&g.config);
    }
    g.settings.apply(g.seed_opt, "global", "seed", g.seed);
    g.settings.apply(g.out_opt, "global", "out", g.out);

    if (c->parsed()) return run_curate(g, curate, *c);
    if (sim->parsed()) return run_simulate(g, simulate, *sim);
    if (h->parsed()) return run_harvest(g, harvest, *h);
    if (st->parsed()) return run_stack(g, stack, *st);
    if (ev->parsed()) return run_evaluate(g, evaluate, *ev, "evaluate");
    if (r->parsed()) return run_evaluate(g, rep, *r, "report");
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.category()) {
      case ErrorCategory::Usage: return kExitUsage;
      case ErrorCategory::Data: return kExitData;
      case ErrorCategory::Remote: return kExitRemote;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
