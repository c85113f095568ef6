#include "xaitu/predictor.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "xaitu/errors.hpp"
#include "xaitu/rng.hpp"

namespace xaitu {

using nlohmann::json;

namespace {

double apply_activation(Activation a, double x) {
  switch (a) {
    case Activation::relu:
      return x > 0.0 ? x : 0.0;
    case Activation::tanh:
      return std::tanh(x);
    case Activation::identity:
      return x;
  }
  return x;
}

int validated_linear_arity(const LinearSpec& s) {
  if (s.coefficients.empty())
    throw ArityError("linear model needs at least one coefficient");
  return static_cast<int>(s.coefficients.size());
}

int validated_mlp_arity(const MlpSpec& s) {
  if (s.layers.empty()) throw ArityError("mlp needs at least one layer");
  int dim = s.input_dim;
  if (dim <= 0) throw ArityError("mlp input dimension must be positive");
  for (std::size_t k = 0; k < s.layers.size(); ++k) {
    const MlpLayer& l = s.layers[k];
    if (l.in != dim)
      throw ArityError("mlp layer " + std::to_string(k) + " expects input " +
                       std::to_string(l.in) + " but gets " + std::to_string(dim));
    if (l.out <= 0 || l.weights.size() != static_cast<std::size_t>(l.in) *
                                              static_cast<std::size_t>(l.out) ||
        l.bias.size() != static_cast<std::size_t>(l.out))
      throw ArityError("mlp layer " + std::to_string(k) +
                       " has inconsistent weight/bias shapes");
    dim = l.out;
  }
  if (dim != 1) throw ArityError("mlp final output dimension must be 1");
  return s.input_dim;
}

void validate_tree(const std::vector<TreeNode>& tree, int arity,
                   std::size_t tree_idx) {
  if (tree.empty())
    throw SchemaError("tree " + std::to_string(tree_idx) + " is empty");
  for (const TreeNode& node : tree) {
    if (node.leaf()) continue;
    if (node.feature >= arity)
      throw ArityError("tree " + std::to_string(tree_idx) +
                       " splits on feature " + std::to_string(node.feature) +
                       " but arity is " + std::to_string(arity));
    if (node.left < 0 || node.right < 0 ||
        node.left >= static_cast<int>(tree.size()) ||
        node.right >= static_cast<int>(tree.size()))
      throw SchemaError("tree " + std::to_string(tree_idx) +
                        " has a dangling child index");
  }
}

double eval_tree(const std::vector<TreeNode>& tree,
                 std::span<const double> row) {
  int idx = 0;
  // trees are acyclic by construction (children always appended after their
  // parent at load), so the walk terminates
  while (!tree[static_cast<std::size_t>(idx)].leaf()) {
    const TreeNode& node = tree[static_cast<std::size_t>(idx)];
    idx = row[static_cast<std::size_t>(node.feature)] < node.threshold
              ? node.left
              : node.right;
  }
  return tree[static_cast<std::size_t>(idx)].value;
}

}  // namespace

Predictor::Predictor(LinearSpec spec)
    : spec_(std::move(spec)), arity_(validated_linear_arity(std::get<LinearSpec>(spec_))) {}

Predictor::Predictor(MlpSpec spec)
    : spec_(std::move(spec)), arity_(validated_mlp_arity(std::get<MlpSpec>(spec_))) {}

Predictor::Predictor(TreeEnsembleSpec spec) : spec_(std::move(spec)) {
  const auto& s = std::get<TreeEnsembleSpec>(spec_);
  int max_feature = -1;
  for (const auto& tree : s.trees)
    for (const auto& node : tree)
      if (!node.leaf() && node.feature > max_feature) max_feature = node.feature;
  arity_ = s.arity > 0 ? s.arity : max_feature + 1;
  if (arity_ <= 0)
    throw ArityError("tree ensemble must reference at least one feature");
  if (max_feature >= arity_)
    throw ArityError("tree ensemble references feature " +
                     std::to_string(max_feature) + " beyond declared arity " +
                     std::to_string(arity_));
  for (std::size_t k = 0; k < s.trees.size(); ++k)
    validate_tree(s.trees[k], arity_, k);
}

Predictor::Predictor(BuiltinSpec spec) : spec_(std::move(spec)) {
  const auto& s = std::get<BuiltinSpec>(spec_);
  if (s.arity <= 0 || !s.fn) throw ArityError("builtin predictor is incomplete");
  arity_ = s.arity;
}

Predictor Predictor::constant(double value, int arity) {
  return Predictor(BuiltinSpec{
      "constant", arity, [value](std::span<const double>) { return value; }});
}

PredictorKind Predictor::kind() const {
  switch (spec_.index()) {
    case 0:
      return PredictorKind::linear;
    case 1:
      return PredictorKind::mlp;
    case 2:
      return PredictorKind::tree_ensemble;
    default:
      return PredictorKind::builtin;
  }
}

double Predictor::operator()(std::span<const double> row) const {
  if (static_cast<int>(row.size()) != arity_)
    throw ArityError("predictor expects " + std::to_string(arity_) +
                     " features, got " + std::to_string(row.size()));
  double y = 0.0;
  if (const auto* lin = std::get_if<LinearSpec>(&spec_)) {
    y = lin->intercept;
    for (std::size_t j = 0; j < lin->coefficients.size(); ++j)
      y += lin->coefficients[j] * row[j];
  } else if (const auto* mlp = std::get_if<MlpSpec>(&spec_)) {
    std::vector<double> cur(row.begin(), row.end());
    std::vector<double> nxt;
    for (const MlpLayer& layer : mlp->layers) {
      nxt.assign(static_cast<std::size_t>(layer.out), 0.0);
      for (int o = 0; o < layer.out; ++o) {
        double acc = layer.bias[static_cast<std::size_t>(o)];
        const double* w =
            layer.weights.data() +
            static_cast<std::size_t>(o) * static_cast<std::size_t>(layer.in);
        for (int i = 0; i < layer.in; ++i)
          acc += w[i] * cur[static_cast<std::size_t>(i)];
        nxt[static_cast<std::size_t>(o)] = apply_activation(layer.activation, acc);
      }
      cur.swap(nxt);
    }
    y = cur[0];
  } else if (const auto* ens = std::get_if<TreeEnsembleSpec>(&spec_)) {
    y = ens->base_score;
    for (const auto& tree : ens->trees) y += eval_tree(tree, row);
  } else {
    y = std::get<BuiltinSpec>(spec_).fn(row);
  }
  if (!std::isfinite(y)) throw NonFiniteError("predictor produced non-finite value");
  return y;
}

// ---------------------------------------------------------------------------
// JSON model files

namespace {

Activation activation_from_string(const std::string& s, const std::string& path) {
  if (s == "relu") return Activation::relu;
  if (s == "tanh") return Activation::tanh;
  if (s == "identity") return Activation::identity;
  throw SchemaError("unknown activation '" + s + "' at " + path);
}

std::string activation_to_string(Activation a) {
  switch (a) {
    case Activation::relu:
      return "relu";
    case Activation::tanh:
      return "tanh";
    default:
      return "identity";
  }
}

const json& require(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw SchemaError("missing key '" + std::string(key) + "' at " + path);
  return *it;
}

double require_real(const json& obj, const char* key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_number())
    throw SchemaError("expected number at " + path + "/" + key);
  return v.get<double>();
}

int require_int(const json& obj, const char* key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_number_integer())
    throw SchemaError("expected integer at " + path + "/" + key);
  return v.get<int>();
}

std::vector<double> require_real_vector(const json& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError("expected array at " + path);
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number())
      throw SchemaError("expected number at " + path + "/" + std::to_string(i));
    out.push_back(v[i].get<double>());
  }
  return out;
}

// Recursive {feature,threshold,left,right}/{value} objects flattened so that
// children always follow their parent (guarantees acyclicity).
int flatten_tree(const json& node, std::vector<TreeNode>& out,
                 const std::string& path) {
  if (!node.is_object()) throw SchemaError("expected object at " + path);
  const int my_index = static_cast<int>(out.size());
  out.emplace_back();
  if (node.contains("value")) {
    if (!node["value"].is_number())
      throw SchemaError("expected number at " + path + "/value");
    out[static_cast<std::size_t>(my_index)].value = node["value"].get<double>();
    return my_index;
  }
  TreeNode n;
  n.feature = require_int(node, "feature", path);
  if (n.feature < 0) throw SchemaError("negative feature index at " + path);
  n.threshold = require_real(node, "threshold", path);
  out[static_cast<std::size_t>(my_index)] = n;
  const int left = flatten_tree(require(node, "left", path), out, path + "/left");
  const int right =
      flatten_tree(require(node, "right", path), out, path + "/right");
  out[static_cast<std::size_t>(my_index)].left = left;
  out[static_cast<std::size_t>(my_index)].right = right;
  return my_index;
}

json tree_to_json(const std::vector<TreeNode>& tree, int idx) {
  const TreeNode& n = tree[static_cast<std::size_t>(idx)];
  if (n.leaf()) return json{{"value", n.value}};
  return json{{"feature", n.feature},
              {"threshold", n.threshold},
              {"left", tree_to_json(tree, n.left)},
              {"right", tree_to_json(tree, n.right)}};
}

Predictor predictor_from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("model file root must be an object");
  const std::string kind = require(doc, "kind", "$").get<std::string>();
  const int n = require_int(doc, "n", "$");
  if (n <= 0) throw SchemaError("declared n must be positive at $/n");

  if (kind == "linear") {
    LinearSpec spec;
    spec.intercept = require_real(doc, "intercept", "$");
    spec.coefficients =
        require_real_vector(require(doc, "coefficients", "$"), "$/coefficients");
    if (static_cast<int>(spec.coefficients.size()) != n)
      throw ArityError("linear model declares n=" + std::to_string(n) +
                       " but has " + std::to_string(spec.coefficients.size()) +
                       " coefficients");
    return Predictor(std::move(spec));
  }
  if (kind == "mlp") {
    MlpSpec spec;
    spec.input_dim = n;
    const json& layers = require(doc, "layers", "$");
    if (!layers.is_array() || layers.empty())
      throw SchemaError("expected non-empty array at $/layers");
    for (std::size_t k = 0; k < layers.size(); ++k) {
      const std::string path = "$/layers/" + std::to_string(k);
      const json& jl = layers[k];
      if (!jl.is_object()) throw SchemaError("expected object at " + path);
      MlpLayer layer;
      const json& w = require(jl, "weights", path);
      if (!w.is_array() || w.empty())
        throw SchemaError("expected non-empty 2d array at " + path + "/weights");
      layer.out = static_cast<int>(w.size());
      for (std::size_t r = 0; r < w.size(); ++r) {
        auto rowvec = require_real_vector(w[r], path + "/weights/" + std::to_string(r));
        if (r == 0) layer.in = static_cast<int>(rowvec.size());
        if (static_cast<int>(rowvec.size()) != layer.in)
          throw SchemaError("ragged weight matrix at " + path + "/weights");
        layer.weights.insert(layer.weights.end(), rowvec.begin(), rowvec.end());
      }
      layer.bias = require_real_vector(require(jl, "bias", path), path + "/bias");
      layer.activation = activation_from_string(
          require(jl, "activation", path).get<std::string>(), path + "/activation");
      spec.layers.push_back(std::move(layer));
    }
    return Predictor(std::move(spec));  // dimension chaining checked there
  }
  if (kind == "tree_ensemble") {
    TreeEnsembleSpec spec;
    spec.arity = n;
    spec.base_score =
        doc.contains("base_score") ? require_real(doc, "base_score", "$") : 0.0;
    const json& trees = require(doc, "trees", "$");
    if (!trees.is_array() || trees.empty())
      throw SchemaError("expected non-empty array at $/trees");
    for (std::size_t k = 0; k < trees.size(); ++k) {
      std::vector<TreeNode> flat;
      flatten_tree(trees[k], flat, "$/trees/" + std::to_string(k));
      spec.trees.push_back(std::move(flat));
    }
    return Predictor(std::move(spec));
  }
  throw SchemaError("unknown model kind '" + kind + "' at $/kind");
}

}  // namespace

Predictor parse_predictor(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("model file is not valid JSON: ") + e.what());
  }
  return predictor_from_json(doc);
}

Predictor load_predictor(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open model file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_predictor(ss.str());
}

std::string predictor_to_json(const Predictor& p) {
  json doc;
  doc["n"] = p.arity();
  if (const auto* lin = p.as_linear()) {
    doc["kind"] = "linear";
    doc["intercept"] = lin->intercept;
    doc["coefficients"] = lin->coefficients;
  } else if (const auto* mlp = p.as_mlp()) {
    doc["kind"] = "mlp";
    json layers = json::array();
    for (const MlpLayer& l : mlp->layers) {
      json w = json::array();
      for (int o = 0; o < l.out; ++o) {
        json row = json::array();
        for (int i = 0; i < l.in; ++i)
          row.push_back(l.weights[static_cast<std::size_t>(o) *
                                      static_cast<std::size_t>(l.in) +
                                  static_cast<std::size_t>(i)]);
        w.push_back(std::move(row));
      }
      layers.push_back(json{{"weights", std::move(w)},
                            {"bias", l.bias},
                            {"activation", activation_to_string(l.activation)}});
    }
    doc["layers"] = std::move(layers);
  } else if (const auto* ens = p.as_tree_ensemble()) {
    doc["kind"] = "tree_ensemble";
    doc["base_score"] = ens->base_score;
    json trees = json::array();
    for (const auto& tree : ens->trees) trees.push_back(tree_to_json(tree, 0));
    doc["trees"] = std::move(trees);
  } else {
    throw Error("builtin predictors cannot be serialized");
  }
  return doc.dump(2);
}

void save_predictor(const Predictor& p, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write model file: " + path.string());
  out << predictor_to_json(p) << "\n";
}

// ---------------------------------------------------------------------------
// Seeded fixtures

namespace fixtures {

Predictor random_linear(int n, std::uint64_t seed) {
  Rng rng(seed);
  LinearSpec spec;
  spec.intercept = rng.uniform(-1.0, 1.0);
  spec.coefficients.resize(static_cast<std::size_t>(n));
  for (double& b : spec.coefficients) b = rng.uniform(-2.0, 2.0);
  return Predictor(std::move(spec));
}

Predictor random_mlp(int n, std::uint64_t seed, std::vector<int> hidden) {
  Rng rng(seed);
  MlpSpec spec;
  spec.input_dim = n;
  int in = n;
  hidden.push_back(1);
  for (std::size_t k = 0; k < hidden.size(); ++k) {
    MlpLayer layer;
    layer.in = in;
    layer.out = hidden[k];
    const double scale = 1.0 / std::sqrt(static_cast<double>(in));
    layer.weights.resize(static_cast<std::size_t>(in) *
                         static_cast<std::size_t>(layer.out));
    for (double& w : layer.weights) w = scale * rng.normal();
    layer.bias.resize(static_cast<std::size_t>(layer.out));
    for (double& b : layer.bias) b = 0.1 * rng.normal();
    const bool last = (k + 1 == hidden.size());
    layer.activation = last ? Activation::identity
                            : (k % 2 == 0 ? Activation::tanh : Activation::relu);
    spec.layers.push_back(std::move(layer));
    in = hidden[k];
  }
  return Predictor(std::move(spec));
}

namespace {

// Balanced random tree over standardized-data thresholds.
int grow_tree(std::vector<TreeNode>& out, Rng& rng, int n, int depth) {
  const int idx = static_cast<int>(out.size());
  out.emplace_back();
  if (depth == 0) {
    out[static_cast<std::size_t>(idx)].value = rng.uniform(-0.5, 0.5);
    return idx;
  }
  TreeNode node;
  node.feature = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  node.threshold = rng.uniform(-1.2, 1.2);
  out[static_cast<std::size_t>(idx)] = node;
  const int left = grow_tree(out, rng, n, depth - 1);
  const int right = grow_tree(out, rng, n, depth - 1);
  out[static_cast<std::size_t>(idx)].left = left;
  out[static_cast<std::size_t>(idx)].right = right;
  return idx;
}

}  // namespace

Predictor random_tree_ensemble(int n, std::uint64_t seed, int num_trees,
                               int depth) {
  Rng rng(seed);
  TreeEnsembleSpec spec;
  spec.arity = n;
  spec.base_score = rng.uniform(-0.5, 0.5);
  spec.trees.reserve(static_cast<std::size_t>(num_trees));
  for (int k = 0; k < num_trees; ++k) {
    std::vector<TreeNode> tree;
    grow_tree(tree, rng, n, depth);
    spec.trees.push_back(std::move(tree));
  }
  return Predictor(std::move(spec));
}

}  // namespace fixtures

}  // namespace xaitu
