#include "gsheaf/document.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace gsheaf {

namespace {

const Json& require(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw Error(where + ": missing key '" + key + "'");
  return j.at(key);
}

std::string str(const Json& j, const std::string& where) {
  if (!j.is_string()) throw Error(where + ": expected a string");
  return j.get<std::string>();
}

std::vector<std::string> names_of(const Json& j, const std::string& where) {
  if (!j.is_array()) throw Error(where + ": expected an array of names");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(str(e, where));
  std::set<std::string> seen(out.begin(), out.end());
  if (seen.size() != out.size()) throw Error(where + ": duplicate name");
  return out;
}

int lookup(const std::vector<std::string>& names, const std::string& name, const std::string& where) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<int>(i);
  }
  throw Error(where + ": unknown name '" + name + "'");
}

Signature read_signature(const Json& j) {
  Signature sig;
  auto symbols = [&](const char* key, auto add) {
    if (!j.contains(key)) return;
    for (const auto& s : j.at(key)) {
      const std::string where = std::string("signature.") + key;
      add(str(require(s, "name", where), where), require(s, "arity", where).template get<int>());
    }
  };
  symbols("functions", [&](std::string n, int a) { sig.add_function(std::move(n), a); });
  symbols("relations", [&](std::string n, int a) { sig.add_relation(std::move(n), a); });
  if (j.contains("constants")) {
    for (const auto& c : j.at("constants")) sig.add_constant(str(c, "signature.constants"));
  }
  return sig;
}

FiniteGroup read_group(const Json& j) {
  const auto elements = names_of(require(j, "elements", "group"), "group.elements");
  if (elements.empty()) throw Error("group: no elements");
  const int identity = lookup(elements, str(require(j, "identity", "group"), "group.identity"), "group.identity");
  const Json& product = require(j, "product", "group");
  const int n = static_cast<int>(elements.size());
  std::vector<int> table(n * n);
  for (int a = 0; a < n; ++a) {
    const Json& row = require(product, elements[a].c_str(), "group.product");
    for (int b = 0; b < n; ++b) {
      const std::string where = "group.product." + elements[a];
      table[a * n + b] = lookup(elements, str(require(row, elements[b].c_str(), where), where), where);
    }
  }
  return FiniteGroup(elements, identity, std::move(table));
}

FiniteSpace read_space(const Json& j, bool complete) {
  const auto points = names_of(require(j, "points", "space"), "space.points");
  const Json& opens = require(j, "opens", "space");
  if (!opens.is_object()) throw Error("space.opens: expected an object of named opens");
  std::vector<PointSet> family;
  std::map<PointSet, std::string> names;
  for (const auto& [name, members] : opens.items()) {
    PointSet u = 0;
    for (const auto& m : members) u |= 1u << lookup(points, str(m, "space.opens." + name), "space.opens." + name);
    if (names.count(u)) throw Error("space.opens: '" + name + "' repeats the open '" + names[u] + "'");
    names[u] = name;
    family.push_back(u);
  }
  if (complete) family = FiniteSpace::completed(points, family).opens();
  return FiniteSpace(points, family, names);
}

GStructure read_structure(const Json& j, const std::string& where, std::shared_ptr<const Signature> sig,
                          std::shared_ptr<const FiniteGroup> group, InvarianceMode mode) {
  const auto universe = names_of(require(j, "universe", where), where + ".universe");
  if (universe.empty()) throw Error(where + ": empty universe");
  for (const auto& e : universe) {
    if (e.find(',') != std::string::npos) throw Error(where + ": element names may not contain ','");
  }
  const int n = static_cast<int>(universe.size());
  GStructure m = GStructure::blank(sig, group, n, mode);
  m.names = universe;
  const Json& action = require(j, "action", where);
  for (int g = 0; g < group->order(); ++g) {
    const std::string w = where + ".action." + group->name(g);
    if (!action.contains(group->name(g))) throw Error(w + ": action table is not total");
    const Json& row = action.at(group->name(g));
    for (int x = 0; x < n; ++x) {
      if (!row.contains(universe[x])) throw Error(w + ": action table is not total (no image of '" + universe[x] + "')");
      m.action[g * n + x] = lookup(universe, str(row.at(universe[x]), w), w);
    }
  }
  for (std::size_t fi = 0; fi < sig->functions().size(); ++fi) {
    const auto& f = sig->functions()[fi];
    const std::string w = where + ".functions." + f.name;
    const Json& table = require(require(j, "functions", where), f.name.c_str(), where + ".functions");
    std::vector<int> xs(f.arity);
    for (std::size_t code = 0; code < m.functions[fi].size(); ++code) {
      decode_tuple(code, n, xs);
      std::string key;
      for (int i = 0; i < f.arity; ++i) key += (i ? "," : "") + universe[xs[i]];
      if (!table.contains(key)) throw Error(w + ": function table is not total (no value at '" + key + "')");
      m.functions[fi][code] = lookup(universe, str(table.at(key), w), w);
    }
  }
  for (std::size_t ri = 0; ri < sig->relations().size(); ++ri) {
    const auto& r = sig->relations()[ri];
    const std::string w = where + ".relations." + r.name;
    if (!j.contains("relations") || !j.at("relations").contains(r.name)) continue;
    for (const auto& tuple : j.at("relations").at(r.name)) {
      if (!tuple.is_array() || static_cast<int>(tuple.size()) != r.arity) throw Error(w + ": tuple of the wrong arity");
      std::vector<int> xs;
      for (const auto& e : tuple) xs.push_back(lookup(universe, str(e, w), w));
      m.set_relation(static_cast<int>(ri), xs, true);
    }
  }
  for (std::size_t c = 0; c < sig->constants().size(); ++c) {
    const std::string& name = sig->constants()[c];
    const Json& value = require(require(j, "constants", where), name.c_str(), where + ".constants");
    m.constants[c] = lookup(universe, str(value, where + ".constants"), where + ".constants." + name);
  }
  return m;
}

}  // namespace

Document parse_document(const std::string& text, const LoadOptions& opts) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    int line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("malformed JSON", line, column);
  }
  try {
    if (!j.is_object()) throw Error("document must be a JSON object");
    if (require(j, "format", "document") != 1) throw Error("unsupported document format (expected 1)");
    auto sig = std::make_shared<const Signature>(read_signature(require(j, "signature", "document")));
    auto group = std::make_shared<const FiniteGroup>(read_group(require(j, "group", "document")));
    const CheckReport gr = validate_group(*group);
    if (opts.validate && !gr.ok()) throw ValidationError(gr);
    const FiniteSpace space = read_space(require(j, "space", "document"), opts.complete_topology);
    const CheckReport sr = validate_space(space);
    if (!sr.ok()) throw ValidationError(sr);

    InvarianceMode mode = InvarianceMode::Componentwise;
    Document doc;
    if (j.contains("options")) {
      const Json& o = j.at("options");
      if (o.contains("invariance_mode")) mode = parse_invariance_mode(str(o.at("invariance_mode"), "options"));
      if (o.contains("semantics")) doc.semantics = parse_semantics_mode(str(o.at("semantics"), "options"));
    }
    const Json& structures = require(j, "structures", "document");
    std::map<PointSet, GStructure> objects;
    for (PointSet u : space.nonempty_opens()) {
      const std::string name = space.open_name(u);
      if (!structures.contains(name)) throw Error("structures: no structure for open '" + name + "'");
      objects.emplace(u, read_structure(structures.at(name), "structures." + name, sig, group, mode));
    }
    std::map<std::pair<PointSet, PointSet>, std::vector<int>> edges;
    for (const auto& r : require(j, "restrictions", "document")) {
      const PointSet from = space.open_by_name(str(require(r, "from", "restrictions"), "restrictions.from"));
      const PointSet to = space.open_by_name(str(require(r, "to", "restrictions"), "restrictions.to"));
      const std::string w = "restrictions." + space.open_name(from) + "->" + space.open_name(to);
      if (!objects.count(from) || !objects.count(to)) throw Error(w + ": restriction touches the empty open");
      const GStructure& a = objects.at(from);
      const GStructure& b = objects.at(to);
      const Json& map = require(r, "map", w);
      std::vector<int> rho(a.size());
      for (int x = 0; x < a.size(); ++x) {
        if (!map.contains(a.names[x])) throw Error(w + ": map is not total (no image of '" + a.names[x] + "')");
        rho[x] = lookup(b.names, str(map.at(a.names[x]), w), w);
      }
      if (!edges.emplace(std::make_pair(from, to), std::move(rho)).second) throw Error(w + ": duplicate restriction");
    }
    doc.presheaf = GPresheaf(space, std::move(objects), std::move(edges));
    if (opts.validate) {
      CheckReport report = validate_presheaf(doc.presheaf);
      if (!report.ok()) throw ValidationError(std::move(report));
    }
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("document has an unexpected shape: ") + e.what());
  }
}

Document load_document(const std::string& path, const LoadOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str(), opts);
}

Json document_to_json(const GPresheaf& p, SemanticsMode semantics) {
  const Signature& sig = p.signature();
  const FiniteGroup& G = p.group();
  const FiniteSpace& space = p.space();
  Json j;
  j["format"] = 1;
  Json s;
  s["functions"] = Json::array();
  for (const auto& f : sig.functions()) s["functions"].push_back({{"name", f.name}, {"arity", f.arity}});
  s["relations"] = Json::array();
  for (const auto& r : sig.relations()) s["relations"].push_back({{"name", r.name}, {"arity", r.arity}});
  s["constants"] = sig.constants();
  j["signature"] = std::move(s);
  Json g;
  g["elements"] = G.names();
  g["identity"] = G.name(G.identity());
  Json product = Json::object();
  for (int a = 0; a < G.order(); ++a) {
    Json row = Json::object();
    for (int b = 0; b < G.order(); ++b) row[G.name(b)] = G.name(G.mul(a, b));
    product[G.name(a)] = std::move(row);
  }
  g["product"] = std::move(product);
  j["group"] = std::move(g);
  Json sp;
  sp["points"] = space.points();
  Json opens = Json::object();
  for (PointSet u : space.opens()) {
    Json members = Json::array();
    for (int x = 0; x < space.num_points(); ++x) {
      if (u >> x & 1u) members.push_back(space.point_name(x));
    }
    opens[space.open_name(u)] = std::move(members);
  }
  sp["opens"] = std::move(opens);
  j["space"] = std::move(sp);
  Json structures = Json::object();
  for (PointSet u : p.opens()) structures[space.open_name(u)] = structure_to_json(p.at(u));
  j["structures"] = std::move(structures);
  Json restrictions = Json::array();
  for (const auto& [key, rho] : p.edges()) {
    const GStructure& a = p.at(key.first);
    const GStructure& b = p.at(key.second);
    Json map = Json::object();
    for (int x = 0; x < a.size(); ++x) map[a.names[x]] = b.names[rho[x]];
    restrictions.push_back({{"from", space.open_name(key.first)}, {"to", space.open_name(key.second)}, {"map", map}});
  }
  j["restrictions"] = std::move(restrictions);
  j["options"] = {{"invariance_mode", to_string(p.mode())}, {"semantics", to_string(semantics)}};
  return j;
}

std::string dump_document(const GPresheaf& p, SemanticsMode semantics) {
  return document_to_json(p, semantics).dump(2) + "\n";
}

void save_document(const std::string& path, const GPresheaf& p, SemanticsMode semantics) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << dump_document(p, semantics);
}

std::vector<int> parse_tuple(const GStructure& m, const std::string& text) {
  std::vector<int> out;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw Error("empty element name in '" + text + "'");
    out.push_back(m.index_of(item.substr(b, e - b + 1)));
  }
  return out;
}

}  // namespace gsheaf
