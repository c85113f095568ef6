#ifndef XAITU_PREDICTOR_HPP
#define XAITU_PREDICTOR_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace xaitu {

enum class PredictorKind { linear, mlp, tree_ensemble, builtin };

enum class Activation { relu, tanh, identity };

/// f(x) = intercept + beta . x
struct LinearSpec {
  double intercept = 0.0;
  std::vector<double> coefficients;
};

/// One dense layer: y = act(W x + b), W stored row-major (out x in).
struct MlpLayer {
  int in = 0;
  int out = 0;
  std::vector<double> weights;
  std::vector<double> bias;
  Activation activation = Activation::identity;
};

/// Feedforward net; consecutive layer dimensions chain, final output dim 1.
struct MlpSpec {
  int input_dim = 0;
  std::vector<MlpLayer> layers;
};

/// Flattened binary tree node. Internal nodes route x[feature] < threshold
/// to left, otherwise right; leaves carry the response value.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
  bool leaf() const { return feature < 0; }
};

/// Additive ensemble: output = base_score + sum of per-tree leaf values.
/// arity 0 means "infer from the largest referenced feature".
struct TreeEnsembleSpec {
  double base_score = 0.0;
  int arity = 0;
  std::vector<std::vector<TreeNode>> trees;
};

/// In-code predictor for tests; never serialized.
struct BuiltinSpec {
  std::string name;
  int arity = 0;
  std::function<double(std::span<const double>)> fn;
};

/// A deterministic map from a feature row to a real prediction. Immutable
/// after construction; safe for unrestricted concurrent reads.
class Predictor {
 public:
  explicit Predictor(LinearSpec spec);
  explicit Predictor(MlpSpec spec);
  explicit Predictor(TreeEnsembleSpec spec);
  explicit Predictor(BuiltinSpec spec);

  static Predictor constant(double value, int arity);

  PredictorKind kind() const;
  int arity() const { return arity_; }

  /// Throws ArityError on length mismatch and NonFiniteError if the
  /// underlying model produces NaN/inf.
  double operator()(std::span<const double> row) const;

  const LinearSpec* as_linear() const { return std::get_if<LinearSpec>(&spec_); }
  const MlpSpec* as_mlp() const { return std::get_if<MlpSpec>(&spec_); }
  const TreeEnsembleSpec* as_tree_ensemble() const {
    return std::get_if<TreeEnsembleSpec>(&spec_);
  }

 private:
  std::variant<LinearSpec, MlpSpec, TreeEnsembleSpec, BuiltinSpec> spec_;
  int arity_ = 0;
};

/// Loads a model file (JSON, kinds linear / mlp / tree_ensemble). Schema
/// violations raise SchemaError with the offending JSON path; inconsistent
/// dimensions raise ArityError.
Predictor load_predictor(const std::filesystem::path& path);
Predictor parse_predictor(const std::string& json_text);

/// Writes a loadable model file. Reals round-trip bit-exactly.
void save_predictor(const Predictor& p, const std::filesystem::path& path);
std::string predictor_to_json(const Predictor& p);

namespace fixtures {

/// Seeded random models used by the experiment harness and tests.
/// Inference-only; produced in lieu of trained models.
Predictor random_linear(int n, std::uint64_t seed);
Predictor random_mlp(int n, std::uint64_t seed,
                     std::vector<int> hidden = {32, 16});
Predictor random_tree_ensemble(int n, std::uint64_t seed, int num_trees = 50,
                               int depth = 4);

}  // namespace fixtures

}  // namespace xaitu

#endif
