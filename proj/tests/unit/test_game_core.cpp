#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "xaitu/errors.hpp"
#include "xaitu/game.hpp"
#include "xaitu/predictor.hpp"
#include "xaitu/snapshot.hpp"

using namespace xaitu;
using test::close;

namespace {

Dataset two_row_dataset() {
  Dataset ds;
  ds.columns = {"a", "b"};
  ds.rows = {{1.0, 2.0}, {3.0, 4.0}};
  return ds;
}

Predictor sum_predictor(int n) {
  LinearSpec spec;
  spec.intercept = 0.0;
  spec.coefficients.assign(static_cast<std::size_t>(n), 1.0);
  return Predictor(std::move(spec));
}

}  // namespace

TEST_CASE("interventional expectations on the two-row example") {
  const Dataset ds = two_row_dataset();
  const Predictor f = sum_predictor(2);
  XaiGame game(ds, f, 0, {});
  CHECK(game.value(Coalition::empty()) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(game.value(Coalition{0}) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(game.value(Coalition{0, 1}) == 3.0);
}

TEST_CASE("constant predictor gives a constant game") {
  const Dataset ds = two_row_dataset();
  const Predictor f = Predictor::constant(7.25, 2);
  XaiGame game(ds, f, 1, {});
  for (std::uint64_t mask = 0; mask < 4; ++mask)
    CHECK(game.value(mask) == 7.25);
}

TEST_CASE("grand coalition is the raw target prediction, any background") {
  Dataset ds = two_row_dataset();
  ds.rows.push_back({-100.0, 50.0});
  const Predictor f = sum_predictor(2);
  XaiGame all_rows(ds, f, 0, {});
  XaiGame one_row(ds, f, 0, {{2}, std::nullopt});
  CHECK(all_rows.value(Coalition::full(2)) == 3.0);
  CHECK(one_row.value(Coalition::full(2)) == 3.0);
  // v(empty) is the background mean
  CHECK(one_row.value(Coalition::empty()) == f(ds.rows[2]));
}

TEST_CASE("background reduced to the target row collapses the whole game") {
  Dataset ds = two_row_dataset();
  ds.rows.push_back({5.0, -1.0});
  const Predictor f = fixtures::random_mlp(2, 55);
  XaiGame game(ds, f, 2, {{2}, std::nullopt});  // background = {target}
  const double prediction = f(ds.rows[2]);
  for (std::uint64_t mask = 0; mask < 4; ++mask)
    CHECK(game.value(mask) == prediction);
}

TEST_CASE("eval counter counts distinct coalitions only") {
  const int n = 8;
  Dataset ds;
  for (int j = 0; j < n; ++j) ds.columns.push_back("c" + std::to_string(j));
  ds.rows = {std::vector<double>(n, 1.0), std::vector<double>(n, 2.0)};
  const Predictor f = sum_predictor(n);
  XaiGame game(ds, f, 0, {});
  game.value(Coalition::empty());
  for (int j = 0; j < n; ++j) game.value(Coalition::single(j));
  game.value(Coalition::full(n));
  CHECK(game.eval_count() == 10);  // n + 2
  game.value(Coalition::full(n));
  CHECK(game.eval_count() == 10);  // cache hit
  // model calls: background-size per fresh coalition, except v(N) which is
  // a single direct prediction
  CHECK(game.model_call_count() == 9 * 2 + 1);
  game.reset_counters();
  CHECK(game.eval_count() == 0);
  CHECK(game.model_call_count() == 0);
}

TEST_CASE("full enumeration of a 3-feature game touches 8 coalitions") {
  Dataset ds;
  ds.columns = {"a", "b", "c"};
  ds.rows = {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}, {0, 1, 0}};
  const Predictor f = sum_predictor(3);
  XaiGame game(ds, f, 3, {});
  for (std::uint64_t mask = 0; mask < 8; ++mask) game.value(mask);
  CHECK(game.eval_count() == 8);
}

TEST_CASE("memoization transparency: cached and uncached values agree bitwise") {
  const Dataset ds = two_row_dataset();
  const Predictor f = fixtures::random_mlp(2, 99);
  XaiGame cached(ds, f, 0, {});
  XaiGame uncached(ds, f, 0, {});
  uncached.set_caching(false);
  for (std::uint64_t mask = 0; mask < 4; ++mask) {
    const double a = cached.value(mask);
    const double b = uncached.value(mask);
    const double b2 = uncached.value(mask);  // recomputed, must be identical
    CHECK(a == b);
    CHECK(b == b2);
  }
  CHECK(cached.eval_count() == uncached.eval_count());
}

TEST_CASE("linear predictor closed form matches enumeration") {
  Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(5));
    const int t = 2 + static_cast<int>(rng.below(6));
    Dataset ds;
    for (int j = 0; j < n; ++j) ds.columns.push_back("x" + std::to_string(j));
    for (int r = 0; r < t; ++r) {
      std::vector<double> row(static_cast<std::size_t>(n));
      for (double& x : row) x = rng.uniform(-3.0, 3.0);
      ds.rows.push_back(std::move(row));
    }
    LinearSpec spec;
    spec.intercept = rng.uniform(-1.0, 1.0);
    for (int j = 0; j < n; ++j) spec.coefficients.push_back(rng.uniform(-2.0, 2.0));
    const Predictor f{LinearSpec(spec)};
    XaiGame game(ds, f, 0, {});
    const auto mu = column_means(ds);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      double expected = spec.intercept;
      for (int j = 0; j < n; ++j)
        expected += spec.coefficients[static_cast<std::size_t>(j)] *
                    ((mask >> j) & 1 ? ds.rows[0][static_cast<std::size_t>(j)]
                                     : mu[static_cast<std::size_t>(j)]);
      CHECK(close(game.value(mask), expected, 1e-12, 1e-12));
    }
  }
}

TEST_CASE("the empty-coalition value can be seeded across observations") {
  const Dataset ds = two_row_dataset();
  const Predictor f = sum_predictor(2);
  XaiGame first(ds, f, 0, {});
  const double base = first.empty_value();
  XaiGame::Options opts;
  opts.shared_empty_value = base;
  XaiGame second(ds, f, 1, opts);
  CHECK(second.value(Coalition::empty()) == base);
  CHECK(second.eval_count() == 0);  // seeded, not recomputed
}

TEST_CASE("predictor failures carry the offending background row") {
  Dataset ds = two_row_dataset();
  ds.rows.push_back({1e308, 1e308});
  const Predictor f = sum_predictor(2);  // overflows to inf on row 3
  XaiGame game(ds, f, 0, {});
  try {
    game.value(Coalition::empty());  // row 3 overflows to infinity
    FAIL("expected NonFiniteError");
  } catch (const NonFiniteError& e) {
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }
}

TEST_CASE("background sampling is a deterministic sorted subset") {
  const auto a = sample_background(100, 10, 7);
  const auto b = sample_background(100, 10, 7);
  CHECK(a == b);
  CHECK(a.size() == 10);
  CHECK(std::is_sorted(a.begin(), a.end()));
  CHECK_THROWS_AS(sample_background(5, 6, 1), DataError);
}

// --- snapshots --------------------------------------------------------------

TEST_CASE("snapshot lookups hit the stored map") {
  SnapshotGame game(test::order_reversal_game());
  CHECK(game.value(Coalition{1}) == 2.0);
  CHECK(game.value(Coalition::empty()) == 0.0);
  CHECK(game.model_call_count() == 0);
}

TEST_CASE("edges snapshots reject interior queries") {
  GameSnapshot snap;
  snap.n = 5;
  snap.family = SnapshotFamily::edges;
  snap.empty_value = 0.0;
  snap.grand_value = 10.0;
  snap.singleton_values = {1, 2, 3, 4, 5};
  snap.drop_one_values = {9, 8, 7, 6, 5};
  snap.validate();
  SnapshotGame game(snap);
  CHECK(game.value(Coalition{2}) == 3.0);
  CHECK(game.value(Coalition{0, 1, 2, 3}) == 5.0);  // drops player 5
  CHECK_THROWS_AS(game.value(Coalition{0, 1}), FamilyError);
}

TEST_CASE("degenerate snapshots are rejected at load") {
  CHECK_THROWS_AS(parse_snapshot(R"({"n":0,"family":"full","values":{}})"),
                  SchemaError);
  CHECK_THROWS_AS(parse_snapshot(R"({"n":2,"family":"full","values":{"":1}})"),
                  SchemaError);  // incomplete family
  CHECK_THROWS_AS(
      parse_snapshot(R"({"n":2,"family":"full","values":{"":0,"1":1,"2":2,"2,1":3}})"),
      SchemaError);  // unsorted key
}

TEST_CASE("snapshots round-trip bit-exactly through JSON") {
  const auto snap = test::random_game(5, 31337);
  const auto again = parse_snapshot(snapshot_to_json(snap));
  REQUIRE(again.full_values.size() == snap.full_values.size());
  for (std::size_t i = 0; i < snap.full_values.size(); ++i)
    CHECK(again.full_values[i] == snap.full_values[i]);

  // and through a file
  const auto path = std::filesystem::temp_directory_path() / "xaitu_snap_rt.json";
  save_snapshot(snap, path);
  const auto loaded = load_snapshot(path);
  for (std::size_t i = 0; i < snap.full_values.size(); ++i)
    CHECK(loaded.full_values[i] == snap.full_values[i]);
  std::filesystem::remove(path);
}

TEST_CASE("csv ingestion rejects holes and ragged rows") {
  namespace fs = std::filesystem;
  const auto path = fs::temp_directory_path() / "xaitu_bad.csv";
  {
    std::ofstream f(path);
    f << "a,b\n1.0,2.0\n3.0,\n";
  }
  CHECK_THROWS_AS(load_csv(path), SchemaError);
  {
    std::ofstream f(path);
    f << "a,b\n1.0\n";
  }
  CHECK_THROWS_AS(load_csv(path), SchemaError);
  {
    std::ofstream f(path);
    f << "a,a\n1.0,2.0\n";
  }
  CHECK_THROWS_AS(load_csv(path), DataError);  // duplicate names
  {
    std::ofstream f(path);
    f << "a,b\n1.5,-2e3\n\n0.25,1e-3\n";
  }
  const Dataset ds = load_csv(path);
  CHECK(ds.t() == 2);
  CHECK(ds.rows[0][1] == -2000.0);
  fs::remove(path);
}
