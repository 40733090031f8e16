#include "seqsl/model.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "seqsl/errors.hpp"

namespace seqsl {

using nlohmann::json;

Value eval_ind_term(const Model& m, const IndTerm& t) {
  if (!t.is_var()) return t.value();
  auto it = m.stack.find(t.name);
  if (it == m.stack.end()) throw UnboundVariable(t.name);
  return it->second;
}

Word eval_seq_term(const Model& m, const SeqTerm& t) {
  Word out;
  for (const auto& l : t.leaves()) {
    if (!l.is_var) {
      out.push_back(eval_ind_term(m, l.ind));
      continue;
    }
    auto it = m.seq.find(l.name);
    if (it == m.seq.end()) throw UnboundVariable("@" + l.name);
    out.insert(out.end(), it->second.begin(), it->second.end());
  }
  return out;
}

namespace {

Value value_of(const json& j, const std::string& where) {
  if (j.is_number_unsigned()) {
    auto n = j.get<std::uint64_t>();
    if (n >= Value::kMaxNat) throw ModelError(where + ": natural out of range");
    return Value::nat(n);
  }
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "nil") return Value::nil();
    if (s == "#") return Value::hash();
  }
  throw ModelError(where + ": expected a natural, \"nil\" or \"#\"");
}

Word word_of(const json& j, const std::string& where) {
  if (!j.is_array()) throw ModelError(where + ": expected an array");
  Word w;
  for (const auto& e : j) w.push_back(value_of(e, where));
  return w;
}

json value_json(Value v) {
  if (v.is_nat()) return v.nat_value();
  return v.str();
}

json word_json(const Word& w) {
  json a = json::array();
  for (Value v : w) a.push_back(value_json(v));
  return a;
}

const json& section(const json& doc, const char* key) {
  static const json empty = json::object();
  auto it = doc.find(key);
  if (it == doc.end()) return empty;
  if (!it->is_object()) throw ModelError(std::string("\"") + key + "\" must be an object");
  return *it;
}

}  // namespace

Model parse_model(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("malformed model: ") + e.what());
  }
  if (!doc.is_object()) throw ModelError("model must be a JSON object");
  for (const auto& [k, v] : doc.items())
    if (k != "stack" && k != "seq" && k != "heap") throw ModelError("unknown model key \"" + k + "\"");
  Model m;
  for (const auto& [k, v] : section(doc, "stack").items()) m.stack[k] = value_of(v, "stack." + k);
  for (const auto& [k, v] : section(doc, "seq").items()) {
    if (k.size() < 2 || k[0] != '@') throw ModelError("sequence variable \"" + k + "\" must start with '@'");
    m.seq[k.substr(1)] = word_of(v, "seq." + k);
  }
  for (const auto& [k, v] : section(doc, "heap").items()) {
    Value loc = Value::nat(0);
    try {
      loc = parse_value(k);
    } catch (const std::invalid_argument&) {
      throw ModelError("heap key \"" + k + "\" is not a location");
    }
    if (!loc.is_nat()) throw ModelError("heap key \"" + k + "\" is an atom, not a location");
    if (loc.nat_value() == 0) throw ModelError("heap keys start at 1");
    m.heap[loc.nat_value()] = word_of(v, "heap." + k);
  }
  return m;
}

std::string print_model(const Model& m, int indent) {
  json doc = {{"stack", json::object()}, {"seq", json::object()}, {"heap", json::object()}};
  for (const auto& [k, v] : m.stack) doc["stack"][k] = value_json(v);
  for (const auto& [k, v] : m.seq) doc["seq"]["@" + k] = word_json(v);
  for (const auto& [k, v] : m.heap) doc["heap"][std::to_string(k)] = word_json(v);
  return doc.dump(indent);
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

void save_model(const Model& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ModelError("cannot write " + path);
  out << print_model(m, 2) << "\n";
}

SymbolicHeap to_symbolic(const GroundHeap& h) {
  SymbolicHeap out;
  for (const auto& [k, w] : h) out.emplace(k, SeqTerm::of_word(w));
  return out;
}

}  // namespace seqsl
