#ifndef XAITU_SNAPSHOT_HPP
#define XAITU_SNAPSHOT_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "xaitu/coalition.hpp"
#include "xaitu/game.hpp"

namespace xaitu {

/// Which coalitions a snapshot stores: the whole power set, or only the
/// sizes {0, 1, n-1, n} that polynomial-cost rules touch.
enum class SnapshotFamily { full, edges };

/// An explicit characteristic function over a declared coalition family.
/// Lets rules and checks run on hand-written games without a predictor;
/// queries outside the declared family are an error, which is how the
/// reduced coalition footprint of polynomial rules is enforced in tests.
struct GameSnapshot {
  int n = 0;
  SnapshotFamily family = SnapshotFamily::full;
  /// family == full: value of coalition with bitmask m at full_values[m].
  std::vector<double> full_values;
  /// family == edges: the four stored slices.
  double empty_value = 0.0;
  double grand_value = 0.0;
  std::vector<double> singleton_values;  // v({j})
  std::vector<double> drop_one_values;   // v(N \ {j})
  std::string provenance;

  /// Throws FamilyError for coalitions outside the declared family.
  double value(const Coalition& s) const;
  bool covers(const Coalition& s) const;
  void validate() const;

  static GameSnapshot full_game(int n, std::vector<double> values_by_mask,
                                std::string provenance = "");
};

/// JSON wire format:
///   {"n": int, "family": "full"|"edges",
///    "values": {"<comma-separated sorted 1-based indices or \"\">": real}}
/// The value map must cover exactly the declared family. Reals are written
/// with enough digits to round-trip bit-exactly.
GameSnapshot load_snapshot(const std::filesystem::path& path);
GameSnapshot parse_snapshot(const std::string& json_text);
void save_snapshot(const GameSnapshot& snap, const std::filesystem::path& path);
std::string snapshot_to_json(const GameSnapshot& snap);

/// Memoizing oracle over a snapshot (game_from_snapshot).
class SnapshotGame : public Game {
 public:
  explicit SnapshotGame(GameSnapshot snap);
  int num_players() const override { return snap_.n; }
  const GameSnapshot& snapshot() const { return snap_; }

 protected:
  double compute(const Coalition& s) override { return snap_.value(s); }

 private:
  GameSnapshot snap_;
};

}  // namespace xaitu

#endif
