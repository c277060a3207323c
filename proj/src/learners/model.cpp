#include "agestack/learners/model.hpp"

#include <numeric>

#include "agestack/error.hpp"

namespace agestack::learners {

using nlohmann::json;

std::vector<double> ConstantModel::predict(const FeatureMatrix& x) const {
  if (x.cols() != n_features_) throw DimensionMismatch("constant model feature count mismatch");
  return std::vector<double>(x.rows(), value_);
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

json tree_node_json(const RegressionTree& tree, std::size_t idx) {
  const auto& node = tree.nodes()[idx];
  json j = {{"n_samples", node.n_samples}, {"value", node.value}};
  if (!node.is_leaf()) {
    j["feature"] = node.feature;
    j["threshold"] = node.threshold;
    j["left"] = tree_node_json(tree, static_cast<std::size_t>(node.left));
    j["right"] = tree_node_json(tree, static_cast<std::size_t>(node.right));
  }
  return j;
}

json tree_json(const RegressionTree& tree) {
  return {{"n_features", tree.n_features()}, {"root", tree_node_json(tree, 0)}};
}

// Rebuilds the flat layout in the same pre-order the builder uses.
std::int32_t read_node(const json& j, std::vector<TreeNode>& nodes) {
  const auto id = static_cast<std::int32_t>(nodes.size());
  nodes.emplace_back();
  TreeNode node;
  node.n_samples = j.at("n_samples").get<std::size_t>();
  node.value = j.at("value").get<double>();
  if (j.contains("feature")) {
    node.feature = j.at("feature").get<int>();
    node.threshold = j.at("threshold").get<double>();
    node.left = read_node(j.at("left"), nodes);
    node.right = read_node(j.at("right"), nodes);
  }
  nodes[static_cast<std::size_t>(id)] = node;
  return id;
}

RegressionTree tree_from_json(const json& j) {
  std::vector<TreeNode> nodes;
  read_node(j.at("root"), nodes);
  return RegressionTree(std::move(nodes), j.at("n_features").get<std::size_t>());
}

json depth_json(const std::optional<std::size_t>& d) { return d ? json(*d) : json(nullptr); }

}  // namespace

std::string learner_name(const LearnerSpec& spec) {
  return std::visit(overloaded{[](const TreeParams&) { return std::string("tree"); },
                               [](const GbrParams&) { return std::string("gbr"); },
                               [](const BaggingParams&) { return std::string("bagging"); },
                               [](const LogisticParams&) { return std::string("logistic"); },
                               [](const MeanParams&) { return std::string("mean"); }},
                    spec);
}

Model fit(const LearnerSpec& spec, const FeatureMatrix& x, std::span<const double> y,
          Execution exec) {
  return std::visit(
      overloaded{
          [&](const TreeParams& p) -> Model { return fit_tree(x, y, p, exec); },
          [&](const GbrParams& p) -> Model { return fit_gbr(x, y, p, exec); },
          [&](const BaggingParams& p) -> Model { return fit_bagging(x, y, p, exec); },
          [&](const LogisticParams& p) -> Model { return fit_logistic(x, y, p); },
          [&](const MeanParams&) -> Model {
            check_targets(x, y);
            return ConstantModel(
                std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size()),
                x.cols());
          }},
      spec);
}

std::vector<double> predict(const Model& model, const FeatureMatrix& x, Execution exec) {
  return std::visit(overloaded{[&](const RegressionTree& m) { return m.predict(x, exec); },
                               [&](const GradientBoostingModel& m) { return m.predict(x, exec); },
                               [&](const BaggingModel& m) { return m.predict(x, exec); },
                               [&](const LogisticModel& m) { return m.predict(x); },
                               [&](const ConstantModel& m) { return m.predict(x); }},
                    model);
}

json to_json(const Model& model) {
  json doc = {{"format", "agestack-model"}, {"version", kModelFormatVersion}};
  std::visit(overloaded{[&](const RegressionTree& m) {
                          doc["kind"] = "tree";
                          doc["tree"] = tree_json(m);
                        },
                        [&](const GradientBoostingModel& m) {
                          doc["kind"] = "gbr";
                          doc["init_value"] = m.init_value();
                          doc["learning_rate"] = m.learning_rate();
                          doc["max_depth"] = m.max_depth();
                          doc["n_features"] = m.n_features();
                          json stages = json::array();
                          for (const auto& s : m.stages()) stages.push_back(tree_json(s));
                          doc["stages"] = std::move(stages);
                        },
                        [&](const BaggingModel& m) {
                          doc["kind"] = "bagging";
                          doc["seed"] = m.seed();
                          doc["n_features"] = m.n_features();
                          json members = json::array();
                          for (const auto& t : m.members()) members.push_back(tree_json(t));
                          doc["members"] = std::move(members);
                        },
                        [&](const LogisticModel& m) {
                          doc["kind"] = "logistic";
                          doc["classes"] = m.classes();
                          doc["weights"] = m.weights();
                          doc["biases"] = m.biases();
                          doc["feature_mean"] = m.standardizer().mean;
                          doc["feature_scale"] = m.standardizer().scale;
                          doc["l2_lambda"] = m.l2_lambda();
                        },
                        [&](const ConstantModel& m) {
                          doc["kind"] = "mean";
                          doc["value"] = m.value();
                          doc["n_features"] = m.n_features();
                        }},
             model);
  return doc;
}

Model model_from_json(const json& doc) {
  try {
    if (doc.at("format") != "agestack-model") throw DataError("not an agestack model document");
    if (doc.at("version").get<int>() != kModelFormatVersion) {
      throw DataError("unsupported model format version");
    }
    const auto kind = doc.at("kind").get<std::string>();
    if (kind == "tree") return tree_from_json(doc.at("tree"));
    if (kind == "gbr") {
      std::vector<RegressionTree> stages;
      for (const auto& s : doc.at("stages")) stages.push_back(tree_from_json(s));
      return GradientBoostingModel(doc.at("init_value").get<double>(),
                                   doc.at("learning_rate").get<double>(),
                                   doc.at("max_depth").get<std::size_t>(), std::move(stages),
                                   doc.at("n_features").get<std::size_t>());
    }
    if (kind == "bagging") {
      std::vector<RegressionTree> members;
      for (const auto& t : doc.at("members")) members.push_back(tree_from_json(t));
      return BaggingModel(std::move(members), doc.at("seed").get<std::uint64_t>(),
                          doc.at("n_features").get<std::size_t>());
    }
    if (kind == "logistic") {
      Standardizer s{doc.at("feature_mean").get<std::vector<double>>(),
                     doc.at("feature_scale").get<std::vector<double>>()};
      return LogisticModel(doc.at("classes").get<std::vector<int>>(),
                           doc.at("weights").get<std::vector<double>>(),
                           doc.at("biases").get<std::vector<double>>(), std::move(s),
                           doc.at("l2_lambda").get<double>());
    }
    if (kind == "mean") {
      return ConstantModel(doc.at("value").get<double>(), doc.at("n_features").get<std::size_t>());
    }
    throw DataError("unknown model kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model document: ") + e.what());
  }
}

json spec_to_json(const LearnerSpec& spec) {
  return std::visit(
      overloaded{[](const TreeParams& p) -> json {
                   return {{"learner", "tree"},
                           {"max_depth", depth_json(p.max_depth)},
                           {"min_samples_split", p.min_samples_split}};
                 },
                 [](const GbrParams& p) -> json {
                   return {{"learner", "gbr"},
                           {"n_stages", p.n_stages},
                           {"learning_rate", p.learning_rate},
                           {"max_depth", p.max_depth},
                           {"min_samples_split", p.min_samples_split}};
                 },
                 [](const BaggingParams& p) -> json {
                   return {{"learner", "bagging"},
                           {"n_members", p.n_members},
                           {"max_depth", depth_json(p.max_depth)},
                           {"min_samples_split", p.min_samples_split},
                           {"seed", p.seed}};
                 },
                 [](const LogisticParams& p) -> json {
                   return {{"learner", "logistic"},
                           {"epochs", p.epochs},
                           {"step", p.step},
                           {"l2_lambda", p.l2_lambda},
                           {"classes", p.classes}};
                 },
                 [](const MeanParams&) -> json { return {{"learner", "mean"}}; }},
      spec);
}

}  // namespace agestack::learners
