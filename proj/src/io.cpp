#include "hvlab/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace hvlab::io {

namespace {

[[noreturn]] void fail(const std::string& message) { throw Error(ErrorCode::ParseError, message); }

const Json& member(const Json& obj, const char* key) {
  if (!obj.is_object()) fail(std::string("expected an object holding '") + key + "'");
  auto it = obj.find(key);
  if (it == obj.end()) fail(std::string("missing field '") + key + "'");
  return *it;
}

std::string string_of(const Json& j, const char* what) {
  if (!j.is_string()) fail(std::string(what) + " must be a string");
  return j.get<std::string>();
}

Scalar scalar_of(const Json& j, const char* what) {
  return parse_scalar(string_of(j, what));
}

LabelSet labels_of(const Json& doc, const char* key) {
  const Json& arr = member(doc, key);
  if (!arr.is_array() || arr.empty()) fail(std::string("'") + key + "' must be a non-empty array of strings");
  std::vector<std::string> labels;
  for (const auto& item : arr) {
    std::string label = string_of(item, key);
    if (label.find('|') != std::string::npos) fail("label '" + label + "' contains '|'");
    labels.push_back(std::move(label));
  }
  try {
    return LabelSet(std::move(labels));
  } catch (const Error& e) {
    fail(e.what());
  }
}

Spaces spaces_of(const Json& doc) {
  return Spaces{labels_of(doc, "settings_a"), labels_of(doc, "settings_b"),
                labels_of(doc, "outcomes_x"), labels_of(doc, "outcomes_y")};
}

Json spaces_to_json(const Spaces& s) {
  Json doc = Json::object();
  doc["settings_a"] = s.settings_a.labels();
  doc["settings_b"] = s.settings_b.labels();
  doc["outcomes_x"] = s.outcomes_x.labels();
  doc["outcomes_y"] = s.outcomes_y.labels();
  return doc;
}

std::string pair_key(const Spaces& s, std::size_t a, std::size_t b) {
  return s.settings_a[a] + "|" + s.settings_b[b];
}

// Reads a "p"/"c"-style map into a table of the Behavior layout.
ScalarMatrix table_of(const Json& map, const Spaces& s, const char* what) {
  if (!map.is_object()) fail(std::string("'") + what + "' must be an object keyed by \"a|b\"");
  ScalarMatrix table(static_cast<Eigen::Index>(s.setting_pairs()),
                     static_cast<Eigen::Index>(s.outcome_pairs()));
  std::set<std::string> expected;
  const std::size_t nx = s.outcomes_x.size(), ny = s.outcomes_y.size();
  for (std::size_t a = 0; a < s.settings_a.size(); ++a) {
    for (std::size_t b = 0; b < s.settings_b.size(); ++b) {
      const std::string key = pair_key(s, a, b);
      expected.insert(key);
      auto it = map.find(key);
      if (it == map.end()) fail(std::string("'") + what + "' lacks setting pair '" + key + "'");
      const Json& rows = *it;
      if (!rows.is_array() || rows.size() != nx) {
        fail("'" + key + "' must hold " + std::to_string(nx) + " rows");
      }
      for (std::size_t x = 0; x < nx; ++x) {
        const Json& row = rows[x];
        if (!row.is_array() || row.size() != ny) {
          fail("'" + key + "' rows must hold " + std::to_string(ny) + " entries");
        }
        for (std::size_t y = 0; y < ny; ++y) {
          table(static_cast<Eigen::Index>(a * s.settings_b.size() + b),
                static_cast<Eigen::Index>(x * ny + y)) = scalar_of(row[y], what);
        }
      }
    }
  }
  for (const auto& [key, _] : map.items()) {
    if (!expected.count(key)) fail(std::string("'") + what + "' has unknown setting pair '" + key + "'");
  }
  return table;
}

Json table_to_json(const ScalarMatrix& table, const Spaces& s) {
  Json map = Json::object();
  const std::size_t nx = s.outcomes_x.size(), ny = s.outcomes_y.size();
  for (std::size_t a = 0; a < s.settings_a.size(); ++a) {
    for (std::size_t b = 0; b < s.settings_b.size(); ++b) {
      Json rows = Json::array();
      for (std::size_t x = 0; x < nx; ++x) {
        Json row = Json::array();
        for (std::size_t y = 0; y < ny; ++y) {
          row.push_back(format_scalar(table(static_cast<Eigen::Index>(a * s.settings_b.size() + b),
                                            static_cast<Eigen::Index>(x * ny + y))));
        }
        rows.push_back(std::move(row));
      }
      map[pair_key(s, a, b)] = std::move(rows);
    }
  }
  return map;
}

}  // namespace

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str());
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot write '" + path.string() + "'");
  out << dump(doc);
}

namespace {

bool flat_array(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j) {
    if (e.is_structured()) return false;
  }
  return true;
}

// Like dump(2), but arrays of primitives (table rows, label lists) stay on one line.
void write_pretty(std::ostream& os, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  if (flat_array(j)) {
    os << '[';
    bool first = true;
    for (const auto& e : j) {
      if (!first) os << ", ";
      first = false;
      os << e.dump();
    }
    os << ']';
  } else if (j.is_array()) {
    os << "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      os << pad;
      write_pretty(os, j[i], indent + 2);
      os << (i + 1 < j.size() ? ",\n" : "\n");
    }
    os << close << ']';
  } else if (j.is_object() && !j.empty()) {
    os << "{\n";
    std::size_t i = 0;
    for (const auto& [key, value] : j.items()) {
      os << pad << Json(key).dump() << ": ";
      write_pretty(os, value, indent + 2);
      os << (++i < j.size() ? ",\n" : "\n");
    }
    os << close << '}';
  } else {
    os << j.dump();
  }
}

}  // namespace

std::string dump(const Json& doc) {
  std::ostringstream os;
  write_pretty(os, doc, 0);
  os << '\n';
  return os.str();
}

FileKind detect_kind(const Json& doc) {
  if (!doc.is_object()) fail("document must be a JSON object");
  const bool p = doc.contains("p");
  const bool pairs = doc.contains("pairs");
  const bool c = doc.contains("c");
  if (p + pairs + c != 1) fail("document must contain exactly one of 'p', 'pairs', 'c'");
  if (p) return FileKind::box;
  if (pairs) return FileKind::model;
  return FileKind::expression;
}

Behavior box_from_json(const Json& doc) {
  Spaces s = spaces_of(doc);
  ScalarMatrix table = table_of(member(doc, "p"), s, "p");
  return Behavior(std::move(s), std::move(table));
}

Json box_to_json(const Behavior& behavior) {
  Json doc = spaces_to_json(behavior.spaces());
  doc["p"] = table_to_json(behavior.table(), behavior.spaces());
  return doc;
}

ModelDocument model_from_json(const Json& doc) {
  const Spaces s = spaces_of(doc);
  const Json& pairs = member(doc, "pairs");
  if (!pairs.is_array() || pairs.empty()) fail("'pairs' must be a non-empty array");

  bool extended = false;
  for (const auto& p : pairs) {
    if (p.is_object() && p.contains("w_extension")) extended = true;
  }

  HiddenVariableModel plain;
  ExtendedModel ext;
  for (const auto& p : pairs) {
    HiddenPair pair{string_of(member(p, "u"), "u"), string_of(member(p, "v"), "v")};
    const Scalar weight = scalar_of(member(p, "weight"), "weight");
    const bool has_p = p.contains("p");
    const bool has_w = p.contains("w_extension");
    if (has_p == has_w) fail("pair " + pair.label() + " needs exactly one of 'p' and 'w_extension'");

    if (!extended) {
      plain.pairs.push_back(pair);
      plain.weights.push_back(weight);
      plain.kernels.emplace_back(s, table_of(p["p"], s, "p"));
      continue;
    }

    NonlocalExtension e;
    if (has_p) {
      e.w_values = LabelSet{"0"};
      e.w_weights = {Scalar(1)};
      e.kernels.emplace_back(s, table_of(p["p"], s, "p"));
    } else {
      const Json& ws = p["w_extension"];
      if (!ws.is_array() || ws.empty()) fail("'w_extension' must be a non-empty array");
      std::vector<std::string> labels;
      for (const auto& w : ws) {
        labels.push_back(string_of(member(w, "w"), "w"));
        e.w_weights.push_back(scalar_of(member(w, "weight"), "weight"));
        e.kernels.emplace_back(s, table_of(member(w, "p"), s, "p"));
      }
      try {
        e.w_values = LabelSet(std::move(labels));
      } catch (const Error& err) {
        fail(err.what());
      }
    }
    ext.pairs.push_back(pair);
    ext.weights.push_back(weight);
    ext.extensions.push_back(std::move(e));
  }
  if (extended) return ext;
  return plain;
}

Json model_to_json(const HiddenVariableModel& model) {
  if (model.kernels.empty()) fail("model has no kernels");
  Json doc = spaces_to_json(model.spaces());
  Json pairs = Json::array();
  for (std::size_t i = 0; i < model.size(); ++i) {
    Json p = Json::object();
    p["u"] = model.pairs[i].u;
    p["v"] = model.pairs[i].v;
    p["weight"] = format_scalar(model.weights[i]);
    p["p"] = table_to_json(model.kernels[i].table(), model.kernels[i].spaces());
    pairs.push_back(std::move(p));
  }
  doc["pairs"] = std::move(pairs);
  return doc;
}

Json model_to_json(const ExtendedModel& model) {
  if (model.extensions.empty() || model.extensions.front().kernels.empty()) fail("model has no kernels");
  const Spaces& s = model.extensions.front().kernels.front().spaces();
  Json doc = spaces_to_json(s);
  Json pairs = Json::array();
  for (std::size_t i = 0; i < model.pairs.size(); ++i) {
    Json p = Json::object();
    p["u"] = model.pairs[i].u;
    p["v"] = model.pairs[i].v;
    p["weight"] = format_scalar(model.weights[i]);
    Json ws = Json::array();
    const auto& e = model.extensions[i];
    for (std::size_t w = 0; w < e.kernels.size(); ++w) {
      Json entry = Json::object();
      entry["w"] = e.w_values[w];
      entry["weight"] = format_scalar(e.w_weights[w]);
      entry["p"] = table_to_json(e.kernels[w].table(), s);
      ws.push_back(std::move(entry));
    }
    p["w_extension"] = std::move(ws);
    pairs.push_back(std::move(p));
  }
  doc["pairs"] = std::move(pairs);
  return doc;
}

BellExpression expression_from_json(const Json& doc) {
  Spaces s = spaces_of(doc);
  ScalarMatrix c = table_of(member(doc, "c"), s, "c");
  return BellExpression{std::move(s), std::move(c)};
}

Json expression_to_json(const BellExpression& expression) {
  Json doc = spaces_to_json(expression.spaces);
  doc["c"] = table_to_json(expression.coefficients, expression.spaces);
  return doc;
}

}  // namespace hvlab::io
