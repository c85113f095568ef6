#include "xaitu/game.hpp"

#include <algorithm>
#include <numeric>

#include "xaitu/errors.hpp"
#include "xaitu/rng.hpp"

namespace xaitu {

double Game::value(const Coalition& s) {
  if (!s.members().empty() && s.members().back() >= num_players())
    throw Error("coalition member out of range for this game");
  const bool has_mask = num_players() <= 64;
  return lookup(s, has_mask ? s.mask() : 0, has_mask);
}

double Game::value(std::uint64_t mask) {
  if (num_players() > 64) throw Error("mask queries require n <= 64");
  if (num_players() < 64 && (mask >> num_players()) != 0)
    throw Error("coalition member out of range for this game");
  auto it = mask_cache_.find(mask);
  if (it != mask_cache_.end() && caching_) return it->second;
  const bool fresh = (it == mask_cache_.end());
  const double v = compute(Coalition::from_mask(mask));
  if (fresh) {
    ++evals_;
    mask_cache_.emplace(mask, v);
  }
  return v;
}

double Game::lookup(const Coalition& s, std::uint64_t mask, bool has_mask) {
  if (has_mask) return value(mask);
  auto it = big_cache_.find(s);
  if (it != big_cache_.end() && caching_) return it->second;
  const bool fresh = (it == big_cache_.end());
  const double v = compute(s);
  if (fresh) {
    ++evals_;
    big_cache_.emplace(s, v);
  }
  return v;
}

void Game::reset_counters() {
  evals_ = 0;
  model_calls_ = 0;
}

void Game::seed_value(const Coalition& s, double v) {
  if (num_players() <= 64)
    mask_cache_.emplace(s.mask(), v);
  else
    big_cache_.emplace(s, v);
}

std::vector<int> sample_background(int t, int k, std::uint64_t seed) {
  if (k <= 0 || k > t) throw DataError("background sample size must be in 1..t");
  std::vector<int> idx(static_cast<std::size_t>(t));
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  // Fisher-Yates prefix, then restore row order
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(t - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

XaiGame::XaiGame(const Dataset& ds, const Predictor& f, int target_row,
                 Options opts)
    : ds_(ds), f_(f), target_row_(target_row), background_(std::move(opts.background)) {
  ds_.validate();
  if (f_.arity() != ds_.n())
    throw ArityError("predictor arity " + std::to_string(f_.arity()) +
                     " does not match dataset feature count " +
                     std::to_string(ds_.n()));
  if (target_row_ < 0 || target_row_ >= ds_.t())
    throw DataError("target row index out of range");
  if (background_.empty()) {
    background_.resize(static_cast<std::size_t>(ds_.t()));
    std::iota(background_.begin(), background_.end(), 0);
  } else {
    for (int r : background_)
      if (r < 0 || r >= ds_.t()) throw DataError("background row index out of range");
  }
  buffer_.resize(static_cast<std::size_t>(ds_.n()));
  if (opts.shared_empty_value) seed_value(Coalition::empty(), *opts.shared_empty_value);
}

double XaiGame::empty_value() { return value(Coalition::empty()); }

double XaiGame::compute(const Coalition& s) {
  const int n = ds_.n();
  const auto& target = ds_.rows[static_cast<std::size_t>(target_row_)];
  if (s.size() == n) {
    // v(N) is the prediction on the target row itself, never an average
    ++model_calls_;
    return f_(target);
  }
  double acc = 0.0;
  const bool small_side = s.size() * 2 <= n;
  for (int row_idx : background_) {
    const auto& bg = ds_.rows[static_cast<std::size_t>(row_idx)];
    if (small_side) {
      std::copy(bg.begin(), bg.end(), buffer_.begin());
      for (int j : s.members())
        buffer_[static_cast<std::size_t>(j)] = target[static_cast<std::size_t>(j)];
    } else {
      std::copy(target.begin(), target.end(), buffer_.begin());
      auto it = s.members().begin();
      for (int j = 0; j < n; ++j) {
        if (it != s.members().end() && *it == j) {
          ++it;
          continue;
        }
        buffer_[static_cast<std::size_t>(j)] = bg[static_cast<std::size_t>(j)];
      }
    }
    try {
      acc += f_(buffer_);
    } catch (const Error& e) {
      throw NonFiniteError(std::string(e.what()) + " (background row " +
                           std::to_string(row_idx + 1) + ")");
    }
    ++model_calls_;
  }
  return acc / static_cast<double>(background_.size());
}

}  // namespace xaitu
