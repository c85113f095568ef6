#include "xaitu/snapshot.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "xaitu/errors.hpp"

namespace xaitu {

using nlohmann::json;

namespace {

constexpr int kMaxFullSnapshotPlayers = 25;

std::string coalition_key(const Coalition& s) {
  std::string key;
  for (std::size_t i = 0; i < s.members().size(); ++i) {
    if (i) key += ',';
    key += std::to_string(s.members()[i] + 1);  // keys are 1-based
  }
  return key;
}

Coalition coalition_from_key(const std::string& key, int n) {
  if (key.empty()) return Coalition::empty();
  std::vector<int> members;
  std::size_t pos = 0;
  int prev = 0;
  while (pos <= key.size()) {
    std::size_t comma = key.find(',', pos);
    if (comma == std::string::npos) comma = key.size();
    const std::string tok = key.substr(pos, comma - pos);
    if (tok.empty()) throw SchemaError("empty index in coalition key '" + key + "'");
    int idx = 0;
    try {
      idx = std::stoi(tok);
    } catch (...) {
      throw SchemaError("bad index '" + tok + "' in coalition key '" + key + "'");
    }
    if (idx < 1 || idx > n)
      throw SchemaError("index " + tok + " out of 1.." + std::to_string(n) +
                        " in coalition key '" + key + "'");
    if (idx <= prev)
      throw SchemaError("coalition key '" + key +
                        "' must list strictly increasing indices");
    prev = idx;
    members.push_back(idx - 1);
    pos = comma + 1;
    if (comma == key.size()) break;
  }
  return Coalition::of(std::move(members));
}

}  // namespace

bool GameSnapshot::covers(const Coalition& s) const {
  if (!s.members().empty() && s.members().back() >= n) return false;
  if (family == SnapshotFamily::full) return true;
  const int size = s.size();
  return size == 0 || size == 1 || size == n - 1 || size == n;
}

double GameSnapshot::value(const Coalition& s) const {
  if (!covers(s)) throw FamilyError("coalition outside declared family");
  if (family == SnapshotFamily::full)
    return full_values[static_cast<std::size_t>(s.mask())];
  const int size = s.size();
  if (size == 0) return empty_value;
  if (size == n) return grand_value;
  if (size == 1) return singleton_values[static_cast<std::size_t>(s.members()[0])];
  // size == n-1: identify the dropped player
  int dropped = 0;
  const auto& m = s.members();
  for (int j = 0; j < n; ++j) {
    if (static_cast<std::size_t>(j) >= m.size() || m[static_cast<std::size_t>(j)] != j) {
      dropped = j;
      break;
    }
  }
  return drop_one_values[static_cast<std::size_t>(dropped)];
}

void GameSnapshot::validate() const {
  if (n < 1) throw SchemaError("snapshot needs n >= 1");
  if (family == SnapshotFamily::full) {
    if (n > kMaxFullSnapshotPlayers)
      throw GuardError("full snapshots are limited to n <= " +
                       std::to_string(kMaxFullSnapshotPlayers));
    if (full_values.size() != (std::size_t{1} << n))
      throw SchemaError("full snapshot must store exactly 2^n values");
    for (double v : full_values)
      if (!std::isfinite(v)) throw SchemaError("snapshot contains non-finite value");
  } else {
    if (singleton_values.size() != static_cast<std::size_t>(n) ||
        drop_one_values.size() != static_cast<std::size_t>(n))
      throw SchemaError("edges snapshot must store n singleton and n drop-one values");
    if (n >= 3) return;  // overlap consistency only matters for tiny n
    for (int j = 0; j < n; ++j) {
      // for n <= 2 the size classes overlap; stored slices must agree
      const double single = singleton_values[static_cast<std::size_t>(j)];
      if (n == 1 && single != grand_value)
        throw SchemaError("n=1 snapshot: v({1}) must equal v(N)");
      if (n == 2) {
        const double drop = drop_one_values[static_cast<std::size_t>(1 - j)];
        if (single != drop)
          throw SchemaError("n=2 snapshot: singleton and drop-one slices disagree");
      }
    }
  }
}

GameSnapshot GameSnapshot::full_game(int n, std::vector<double> values_by_mask,
                                     std::string provenance) {
  GameSnapshot snap;
  snap.n = n;
  snap.family = SnapshotFamily::full;
  snap.full_values = std::move(values_by_mask);
  snap.provenance = std::move(provenance);
  snap.validate();
  return snap;
}

std::string snapshot_to_json(const GameSnapshot& snap) {
  snap.validate();
  json values = json::object();
  if (snap.family == SnapshotFamily::full) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << snap.n); ++mask)
      values[coalition_key(Coalition::from_mask(mask))] =
          snap.full_values[static_cast<std::size_t>(mask)];
  } else {
    const Coalition grand = Coalition::full(snap.n);
    values[""] = snap.empty_value;
    values[coalition_key(grand)] = snap.grand_value;
    for (int j = 0; j < snap.n; ++j) {
      values[coalition_key(Coalition::single(j))] =
          snap.singleton_values[static_cast<std::size_t>(j)];
      values[coalition_key(grand.minus(j))] =
          snap.drop_one_values[static_cast<std::size_t>(j)];
    }
  }
  json doc{{"n", snap.n},
           {"family", snap.family == SnapshotFamily::full ? "full" : "edges"},
           {"values", std::move(values)}};
  if (!snap.provenance.empty()) doc["provenance"] = snap.provenance;
  return doc.dump(2);
}

GameSnapshot parse_snapshot(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("snapshot is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("snapshot root must be an object");
  if (!doc.contains("n") || !doc["n"].is_number_integer())
    throw SchemaError("missing integer at $/n");
  GameSnapshot snap;
  snap.n = doc["n"].get<int>();
  if (snap.n < 1) throw SchemaError("snapshot needs n >= 1");
  const std::string family =
      doc.contains("family") ? doc["family"].get<std::string>() : "full";
  if (family == "full")
    snap.family = SnapshotFamily::full;
  else if (family == "edges")
    snap.family = SnapshotFamily::edges;
  else
    throw SchemaError("unknown family '" + family + "' at $/family");
  if (doc.contains("provenance")) snap.provenance = doc["provenance"].get<std::string>();
  if (!doc.contains("values") || !doc["values"].is_object())
    throw SchemaError("missing object at $/values");

  const json& values = doc["values"];
  std::size_t expected = 0;
  if (snap.family == SnapshotFamily::full) {
    if (snap.n > kMaxFullSnapshotPlayers)
      throw GuardError("full snapshots are limited to n <= " +
                       std::to_string(kMaxFullSnapshotPlayers));
    expected = std::size_t{1} << snap.n;
    snap.full_values.assign(expected, 0.0);
    std::vector<bool> seen(expected, false);
    for (auto it = values.begin(); it != values.end(); ++it) {
      const Coalition s = coalition_from_key(it.key(), snap.n);
      if (!it.value().is_number())
        throw SchemaError("expected number at $/values/'" + it.key() + "'");
      const std::uint64_t mask = s.mask();
      if (seen[static_cast<std::size_t>(mask)])
        throw SchemaError("duplicate coalition key '" + it.key() + "'");
      seen[static_cast<std::size_t>(mask)] = true;
      snap.full_values[static_cast<std::size_t>(mask)] = it.value().get<double>();
    }
    if (values.size() != expected)
      throw SchemaError("full snapshot for n=" + std::to_string(snap.n) +
                        " must declare exactly 2^n coalitions, found " +
                        std::to_string(values.size()));
  } else {
    snap.singleton_values.assign(static_cast<std::size_t>(snap.n), 0.0);
    snap.drop_one_values.assign(static_cast<std::size_t>(snap.n), 0.0);
    std::size_t matched = 0;
    bool saw_empty = false, saw_grand = false;
    std::vector<bool> saw_single(static_cast<std::size_t>(snap.n), false);
    std::vector<bool> saw_drop(static_cast<std::size_t>(snap.n), false);
    for (auto it = values.begin(); it != values.end(); ++it) {
      const Coalition s = coalition_from_key(it.key(), snap.n);
      if (!it.value().is_number())
        throw SchemaError("expected number at $/values/'" + it.key() + "'");
      const double v = it.value().get<double>();
      const int size = s.size();
      bool used = false;
      if (size == 0) {
        snap.empty_value = v;
        saw_empty = true;
        used = true;
      }
      if (size == snap.n) {
        snap.grand_value = v;
        saw_grand = true;
        used = true;
      }
      if (size == 1) {
        snap.singleton_values[static_cast<std::size_t>(s.members()[0])] = v;
        saw_single[static_cast<std::size_t>(s.members()[0])] = true;
        used = true;
      }
      if (size == snap.n - 1) {
        for (int j = 0; j < snap.n; ++j)
          if (!s.contains(j)) {
            snap.drop_one_values[static_cast<std::size_t>(j)] = v;
            saw_drop[static_cast<std::size_t>(j)] = true;
          }
        used = true;
      }
      if (!used)
        throw SchemaError("coalition '" + it.key() +
                          "' lies outside the declared edges family");
      ++matched;
    }
    if (!saw_empty || !saw_grand)
      throw SchemaError("edges snapshot must declare the empty and grand coalitions");
    for (int j = 0; j < snap.n; ++j) {
      if (!saw_single[static_cast<std::size_t>(j)])
        throw SchemaError("edges snapshot is missing singleton {" +
                          std::to_string(j + 1) + "}");
      if (!saw_drop[static_cast<std::size_t>(j)])
        throw SchemaError("edges snapshot is missing the coalition dropping " +
                          std::to_string(j + 1));
    }
    (void)matched;
  }
  snap.validate();
  return snap;
}

GameSnapshot load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open snapshot file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_snapshot(ss.str());
}

void save_snapshot(const GameSnapshot& snap, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write snapshot file: " + path.string());
  out << snapshot_to_json(snap) << "\n";
}

SnapshotGame::SnapshotGame(GameSnapshot snap) : snap_(std::move(snap)) {
  snap_.validate();
}

}  // namespace xaitu
