#include "ehtcp/instance_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ehtcp {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

int require_int(const json& j, const std::string& field, int min_value) {
  if (!j.contains(field) || !j[field].is_number_integer())
    fail(field, "missing or not an integer");
  const int v = j[field].get<int>();
  if (v < min_value)
    fail(field, "must be >= " + std::to_string(min_value));
  return v;
}

Vec parse_vec(const json& j, const std::string& where, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    fail(where, "expected an array of " + std::to_string(n) + " numbers");
  Vec v(n);
  for (int i = 0; i < n; ++i) {
    if (!j[i].is_number()) fail(where, "component " + std::to_string(i + 1) +
                                           " is not a number");
    v[i] = j[i].get<double>();
  }
  return v;
}

Tensor parse_tensor(const json& j, const std::string& where, int m, int n) {
  if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array())
    fail(where, "expected an object with an \"entries\" array");
  std::vector<TensorEntry> entries;
  int pos = 0;
  for (const auto& item : j["entries"]) {
    const std::string at = where + ".entries[" + std::to_string(pos++) + "]";
    if (!item.is_array() || item.size() != 2 || !item[0].is_array() ||
        !item[1].is_number())
      fail(at, "expected [[i1,...,im], value]");
    if (static_cast<int>(item[0].size()) != m)
      fail(at, "index tuple must have exactly m = " + std::to_string(m) +
                   " components");
    TensorEntry e;
    e.index.reserve(m);
    for (const auto& c : item[0]) {
      if (!c.is_number_integer()) fail(at, "index components must be integers");
      const int idx = c.get<int>();
      if (idx < 1 || idx > n)
        fail(at, "index component " + std::to_string(idx) +
                     " out of range [1, " + std::to_string(n) + "]");
      e.index.push_back(idx - 1);
    }
    e.value = item[1].get<double>();
    entries.push_back(std::move(e));
  }
  try {
    return Tensor(m, n, std::move(entries));
  } catch (const std::invalid_argument& err) {
    fail(where, err.what());
  }
}

}  // namespace

EhtcpInstance parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ParseError(std::string("invalid JSON: ") + err.what());
  }
  if (!j.is_object()) fail("instance", "top level must be an object");

  const int m = require_int(j, "m", 2);
  const int n = require_int(j, "n", 1);
  const int k = require_int(j, "k", 1);

  if (!j.contains("tensors") || !j["tensors"].is_array())
    fail("tensors", "missing or not an array");
  if (static_cast<int>(j["tensors"].size()) != k + 1)
    fail("tensors", "need exactly k+1 = " + std::to_string(k + 1) +
                        " tensors");
  std::vector<Tensor> tensors;
  for (int t = 0; t < k + 1; ++t)
    tensors.push_back(parse_tensor(j["tensors"][t],
                                   "tensors[" + std::to_string(t) + "]", m, n));

  std::vector<Vec> d;
  if (j.contains("d")) {
    if (!j["d"].is_array()) fail("d", "must be an array of vectors");
    for (int i = 0; i < static_cast<int>(j["d"].size()); ++i)
      d.push_back(parse_vec(j["d"][i], "d[" + std::to_string(i) + "]", n));
  }
  if (static_cast<int>(d.size()) != k - 1)
    fail("d", "need exactly k-1 = " + std::to_string(k - 1) + " vectors");
  for (std::size_t i = 0; i < d.size(); ++i)
    for (int c = 0; c < n; ++c)
      if (!(d[i][c] > 0.0))
        fail("d[" + std::to_string(i) + "]",
             "component " + std::to_string(c + 1) + " must be > 0");

  Vec q = Vec::Zero(n);
  if (j.contains("q")) q = parse_vec(j["q"], "q", n);

  std::string label;
  if (j.contains("label")) {
    if (!j["label"].is_string()) fail("label", "must be a string");
    label = j["label"].get<std::string>();
  }

  try {
    return EhtcpInstance(TensorTuple(std::move(tensors)), std::move(d),
                         std::move(q), std::move(label));
  } catch (const std::invalid_argument& err) {
    throw ParseError(std::string("instance: ") + err.what());
  }
}

std::string serialize_instance(const EhtcpInstance& inst) {
  json j;
  j["m"] = inst.order();
  j["n"] = inst.dim();
  j["k"] = inst.k();
  j["tensors"] = json::array();
  for (const auto& t : inst.tuple().tensors()) {
    json entries = json::array();
    for (const auto& e : t.entries()) {
      json idx = json::array();
      for (int c : e.index) idx.push_back(c + 1);
      entries.push_back(json::array({idx, e.value}));
    }
    j["tensors"].push_back(json{{"entries", entries}});
  }
  j["d"] = json::array();
  for (const auto& dj : inst.d()) {
    json v = json::array();
    for (Eigen::Index i = 0; i < dj.size(); ++i) v.push_back(dj[i]);
    j["d"].push_back(v);
  }
  json qv = json::array();
  for (Eigen::Index i = 0; i < inst.q().size(); ++i) qv.push_back(inst.q()[i]);
  j["q"] = qv;
  if (!inst.label().empty()) j["label"] = inst.label();
  return j.dump(2);
}

EhtcpInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

void save_instance(const EhtcpInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file: " + path);
  out << serialize_instance(inst) << "\n";
}

}  // namespace ehtcp
