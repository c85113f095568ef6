#ifndef XAITU_GAME_HPP
#define XAITU_GAME_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "xaitu/coalition.hpp"
#include "xaitu/dataset.hpp"
#include "xaitu/predictor.hpp"

namespace xaitu {

/// Memoizing characteristic-function oracle v : 2^N -> R.
///
/// Evaluations are pure given the game, so results are deterministic and a
/// repeated query never increases the eval counter. Distinct coalitions may
/// safely be evaluated concurrently by a caller computing values externally
/// and seeding them; this implementation itself is single-threaded.
class Game {
 public:
  virtual ~Game() = default;

  virtual int num_players() const = 0;

  /// v(S). Memoized; counts one eval per distinct coalition.
  double value(const Coalition& s);
  /// Bitmask fast path for enumeration-heavy algorithms (n <= 64).
  double value(std::uint64_t mask);

  /// Distinct coalition evaluations since the last reset.
  std::uint64_t eval_count() const { return evals_; }
  /// Underlying predictor invocations (0 for snapshot-backed games).
  std::uint64_t model_call_count() const { return model_calls_; }
  void reset_counters();

  /// Disabling the cache recomputes every query (bookkeeping still tracks
  /// distinct coalitions, so counters are unaffected).
  void set_caching(bool enabled) { caching_ = enabled; }
  bool caching() const { return caching_; }

  /// Inserts a known value as if it had been evaluated before any counting
  /// started (used to share the tau-independent v(empty) across games).
  void seed_value(const Coalition& s, double v);

 protected:
  /// The actual characteristic function; must be pure.
  virtual double compute(const Coalition& s) = 0;

  std::uint64_t model_calls_ = 0;

 private:
  double lookup(const Coalition& s, std::uint64_t mask, bool has_mask);

  std::unordered_map<std::uint64_t, double> mask_cache_;
  std::map<Coalition, double> big_cache_;
  std::uint64_t evals_ = 0;
  bool caching_ = true;
};

/// Row-index subset used as the empirical background distribution.
/// k-subsample without replacement, seeded; row order preserved.
std::vector<int> sample_background(int t, int k, std::uint64_t seed);

/// Interventional XAI-TU game for one observation tau:
///   v(S) = mean over background rows tau' of f(x_tau on S, x_tau' elsewhere),
/// with v(N) evaluated as f(x_tau) directly (no averaging).
///
/// Holds references to the dataset and predictor; both must outlive the game.
class XaiGame : public Game {
 public:
  struct Options {
    std::vector<int> background;  // empty => all rows (target included)
    std::optional<double> shared_empty_value;
  };

  XaiGame(const Dataset& ds, const Predictor& f, int target_row,
          Options opts = {});

  int num_players() const override { return ds_.n(); }
  int target_row() const { return target_row_; }
  const std::vector<int>& background() const { return background_; }

  /// v(empty) is tau-independent; expose it so callers can seed sibling games.
  double empty_value();

 protected:
  double compute(const Coalition& s) override;

 private:
  const Dataset& ds_;
  const Predictor& f_;
  int target_row_;
  std::vector<int> background_;
  std::vector<double> buffer_;
};

/// Test/bench oracle defined by an arbitrary pure function of the coalition.
class FunctionGame : public Game {
 public:
  FunctionGame(int n, std::function<double(const Coalition&)> fn)
      : n_(n), fn_(std::move(fn)) {}
  int num_players() const override { return n_; }

 protected:
  double compute(const Coalition& s) override { return fn_(s); }

 private:
  int n_;
  std::function<double(const Coalition&)> fn_;
};

}  // namespace xaitu

#endif
