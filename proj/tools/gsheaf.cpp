// Command-line front end. Exit codes: 0 true or clean, 1 false or
// violations, 2 usage or input errors.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gsheaf/document.hpp"
#include "gsheaf/search.hpp"

using namespace gsheaf;

namespace {

struct Global {
  bool json = false;
  bool complete_topology = false;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, sep);)
    if (!item.empty()) out.push_back(item);
  return out;
}

Document load(const Global& g, const std::string& path) {
  LoadOptions o;
  o.complete_topology = g.complete_topology;
  return load_document(path, o);
}

int emit(const Global& g, const Json& j, const std::string& text, bool good) {
  if (g.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
  }
  return good ? 0 : 1;
}

int emit_report(const Global& g, const CheckReport& r) { return emit(g, r.to_json(), r.to_text(), r.ok()); }

FormulaBound bound_of(int depth, int free_vars, int term_depth) { return {depth, free_vars, term_depth}; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite equivariant sheaf semantics: forcing, generic filters and generic models"};
  app.require_subcommand(1);
  Global g;
  app.add_flag("--json", g.json, "machine-readable output");
  app.add_flag("--complete-topology", g.complete_topology, "close the open family under union and intersection");

  std::string file, formula, open, point, domain, section, assign, mode = "local", theorem = "all", filter_text;
  std::string targets_text, witness_path;
  int depth = 2, free_vars = 1, term_depth = 1;
  bool godel = false, fast = false, by_clauses = false, maximal = false;

  auto* validate = app.add_subcommand("validate", "validate a document");
  validate->add_option("file", file)->required();

  auto* satisfy = app.add_subcommand("satisfy", "classical satisfaction in M_U");
  satisfy->add_option("file", file)->required();
  satisfy->add_option("--open", open)->required();
  satisfy->add_option("--formula", formula)->required();
  satisfy->add_option("--assign", assign, "v0=a,v1=b,...");

  auto* force = app.add_subcommand("force", "forcing at a point or on an open");
  force->add_option("file", file)->required();
  auto* at_point = force->add_option("--point", point);
  auto* on_open = force->add_option("--open", open);
  at_point->excludes(on_open);
  force->add_option("--formula", formula)->required();
  force->add_option("--section", section, "element names in M_U, comma separated");
  force->add_option("--domain", domain, "open the section lives on (default: the whole space, or --open)");
  force->add_option("--mode", mode)->check(CLI::IsMember({"local", "literal"}));
  force->add_flag("--godel", godel, "force the Godel translation");
  force->add_flag("--fast-path", fast)->group("");
  force->add_flag("--by-clauses", by_clauses)->group("");

  auto* stalk_cmd = app.add_subcommand("stalk", "stalk at a point");
  stalk_cmd->add_option("file", file)->required();
  stalk_cmd->add_option("--point", point)->required();

  auto* filters = app.add_subcommand("filters", "filters of the space");
  filters->add_option("file", file)->required();
  filters->add_flag("--maximal", maximal);

  auto* generic = app.add_subcommand("generic", "genericity and generic model of a filter");
  generic->add_option("file", file)->required();
  generic->add_option("--filter", filter_text, "U1,U2,...")->required();
  generic->add_option("--depth", depth);
  generic->add_option("--free-vars", free_vars);
  generic->add_option("--mode", mode)->check(CLI::IsMember({"local", "literal"}));

  auto* check = app.add_subcommand("check", "lemma and theorem checkers");
  check->add_option("file", file)->required();
  check->add_option("--theorem", theorem, "all or a lemma id");
  check->add_option("--depth", depth);
  check->add_option("--free-vars", free_vars);
  check->add_option("--term-depth", term_depth);
  check->add_option("--formula", formula);
  check->add_option("--open", open);
  check->add_option("--point", point);
  check->add_option("--mode", mode)->check(CLI::IsMember({"local", "literal"}));

  SearchOptions so;
  bool no_exhaustive = false;
  auto* fuzz = app.add_subcommand("fuzz", "random and exhaustive counterexample search");
  fuzz->add_option("--seed", so.seed);
  fuzz->add_option("--budget", so.budget);
  fuzz->add_option("--targets", targets_text, "comma separated lemma ids (default: all)");
  fuzz->add_option("--depth", depth);
  fuzz->add_option("--free-vars", free_vars);
  fuzz->add_option("--mode", mode)->check(CLI::IsMember({"local", "literal"}));
  fuzz->add_option("--threads", so.threads);
  fuzz->add_option("--max-points", so.limits.max_points);
  fuzz->add_option("--max-opens", so.limits.max_opens);
  fuzz->add_option("--max-universe", so.limits.max_universe);
  fuzz->add_option("--max-group-order", so.limits.max_group_order);
  fuzz->add_flag("--force-sheaf", so.limits.force_sheaf);
  fuzz->add_flag("--no-exhaustive", no_exhaustive);

  std::uint64_t gen_seed = 1;
  GeneratorLimits gen_limits;
  auto* generate = app.add_subcommand("generate", "print a random document");
  generate->add_option("--seed", gen_seed);
  generate->add_option("--max-points", gen_limits.max_points);
  generate->add_option("--max-opens", gen_limits.max_opens);
  generate->add_option("--max-universe", gen_limits.max_universe);
  generate->add_option("--max-group-order", gen_limits.max_group_order);
  generate->add_flag("--force-sheaf", gen_limits.force_sheaf);

  auto* replay = app.add_subcommand("replay", "rerun the query of a witness");
  replay->add_option("witness", witness_path, "JSON file holding one violation or finding witness")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*validate) {
      LoadOptions o;
      o.complete_topology = g.complete_topology;
      o.validate = false;
      const Document d = load_document(file, o);
      CheckReport r = validate_presheaf(d.presheaf);
      if (r.ok()) {
        r.bounds["sheaf"] = is_sheaf(d.presheaf).ok();
        r.bounds["exact"] = is_exact(d.presheaf).ok();
      }
      emit_report(g, r);
      return r.ok() ? 0 : 2;
    }

    if (*generate) {
      std::cout << dump_document(generate_random_presheaf(gen_seed, gen_limits));
      return 0;
    }

    if (*replay) {
      std::ifstream in(witness_path);
      if (!in) throw Error("cannot open " + witness_path);
      Json w = Json::parse(in);
      if (w.contains("witness")) w = w["witness"];
      const bool ok = replays(w);
      Json j = {{"replays", ok}, {"report", replay_query(w).to_json()}};
      return emit(g, j, ok ? "replays\n" : "does not replay\n", ok);
    }

    if (*fuzz) {
      so.targets = split(targets_text, ',');
      so.lemma.bound = bound_of(depth, free_vars, term_depth);
      so.lemma.mode = parse_semantics_mode(mode);
      so.exhaustive = !no_exhaustive;
      return emit_report(g, counterexample_search(so));
    }

    const Document d = load(g, file);
    const GPresheaf& p = d.presheaf;
    const FiniteSpace& s = p.space();

    if (*satisfy) {
      const PointSet u = s.open_by_name(open);
      const GStructure& m = p.at(u);
      const Formula phi = parse_formula(formula, p.signature());
      Assignment a(std::max(1, phi.variable_span()), -1);
      for (const auto& item : split(assign, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || item[0] != 'v') throw Error("bad assignment '" + item + "'");
        const int v = std::stoi(item.substr(1, eq - 1));
        if (v >= static_cast<int>(a.size())) a.resize(v + 1, -1);
        a[v] = m.index_of(item.substr(eq + 1));
      }
      for (int v : free_variables(phi))
        if (a.at(v) < 0) throw Error("variable v" + std::to_string(v) + " is unassigned");
      const bool ok = satisfies(m, phi, a);
      Json j = {{"open", s.open_name(u)}, {"formula", to_string(phi, p.signature())}, {"verdict", ok}};
      return emit(g, j, ok ? "true\n" : "false\n", ok);
    }

    if (*force) {
      if (point.empty() == open.empty()) throw Error("give exactly one of --point and --open");
      Formula phi = parse_formula(formula, p.signature());
      if (godel) phi = godel_translate(phi);
      PointSet dom = s.whole();
      if (!open.empty()) dom = s.open_by_name(open);
      if (!domain.empty()) dom = s.open_by_name(domain);
      Section sec{dom, section.empty() ? std::vector<int>{} : parse_tuple(p.at(dom), section)};
      ForcingOptions fo;
      fo.mode = parse_semantics_mode(mode);
      fo.fast_path = fast;
      fo.positive_by_clauses = by_clauses;
      const ForcingVerdict v = point.empty() ? forces_on(p, s.open_by_name(open), phi, sec, fo)
                                             : forces_at(p, s.point_index(point), phi, sec, fo);
      return emit(g, v.to_json(p), v.verdict ? "true\n" : "false\n", v.verdict);
    }

    if (*stalk_cmd) {
      const int x = s.point_index(point);
      const Stalk st = stalk(p, x);
      Json germs = Json::object();
      std::ostringstream text;
      text << "stalk at " << point << ": " << st.colimit.structure.size() << " germs\n";
      for (PointSet u : st.opens) {
        Json row = Json::object();
        const GStructure& m = p.at(u);
        for (int e = 0; e < m.size(); ++e) {
          const std::string name = st.colimit.structure.names[st.germ(u, e).id];
          row[m.names[e]] = name;
          text << "  " << s.open_name(u) << ": " << m.names[e] << " -> " << name << "\n";
        }
        germs[s.open_name(u)] = row;
      }
      Json j = {{"point", point}, {"structure", structure_to_json(st.colimit.structure)}, {"germs", germs}};
      return emit(g, j, text.str(), true);
    }

    if (*filters) {
      const auto fs = maximal ? maximal_filters(s) : enumerate_filters(s, false);
      Json arr = Json::array();
      std::ostringstream text;
      for (const auto& f : fs) {
        Json members = Json::array();
        for (PointSet u : f.members) members.push_back(s.open_name(u));
        text << members.dump() << "\n";
        arr.push_back(members);
      }
      return emit(g, {{"filters", arr}}, text.str(), true);
    }

    if (*generic) {
      Filter f;
      for (const auto& name : split(filter_text, ',')) f.members.push_back(s.open_by_name(name));
      std::sort(f.members.begin(), f.members.end(), [&](PointSet a, PointSet b) {
        return p.open_id(a) < p.open_id(b);
      });
      ForcingOptions fo;
      fo.mode = parse_semantics_mode(mode);
      const auto gr = is_generic_filter(p, f, bound_of(depth, free_vars, term_depth), fo, true);
      const GenericModel gm = generic_model(p, f);
      Json j = gr.report.to_json();
      j["generic"] = gr.generic();
      j["model"] = structure_to_json(gm.structure());
      std::string text = gr.report.to_text() + "generic model: " + structure_to_json(gm.structure()).dump() + "\n";
      return emit(g, j, text, gr.generic());
    }

    if (*check) {
      LemmaOptions o;
      o.bound = bound_of(depth, free_vars, term_depth);
      o.mode = parse_semantics_mode(mode);
      if (!formula.empty()) o.formula = to_string(parse_formula(formula, p.signature()), p.signature());
      if (!open.empty()) o.open = s.open_by_name(open);
      if (!point.empty()) o.point = s.point_index(point);
      std::vector<std::string> ids;
      if (theorem == "all") {
        for (const auto& l : lemma_catalog()) ids.push_back(l.id);
      } else {
        if (!is_lemma(theorem)) throw Error("unknown theorem '" + theorem + "'");
        ids.push_back(theorem);
      }
      bool ok = true;
      Json arr = Json::array();
      std::string text;
      for (const auto& id : ids) {
        CheckReport r = check_lemma(id, p, o);
        for (auto* list : {&r.violations, &r.findings})
          for (auto& v : *list) v.witness["document"] = document_to_json(p, d.semantics);
        ok = ok && r.ok();
        arr.push_back(r.to_json());
        text += r.to_text();
      }
      return emit(g, ids.size() == 1 ? arr[0] : Json{{"verdict", ok}, {"reports", arr}}, text, ok);
    }
  } catch (const ValidationError& e) {
    if (g.json) {
      std::cout << e.report().to_json().dump(2) << "\n";
    } else {
      std::cerr << e.what() << "\n";
    }
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
