// Command line front end: canonical forms, equivalence, one-sidedness,
// relation export, truncated universal group computation, delta1 checking
// and trace evaluation over a configurable fundamental group.
//
// Exit codes: 0 command completed (verdicts live in the payload),
//             2 input or configuration error, 3 resource limit.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cesym/invariants.hpp"
#include "json.hpp"

using namespace cesym;
using nlohmann::json;

namespace {

struct JobConfig {
  std::string group_text;
  int ball = -1;
  std::int64_t coeff = 0;
  std::string kinds = "EHTQ";
  int radius = 2;
  std::string format = "text";
  std::size_t max_universe = 200000;
  std::size_t max_relations = 1000000;

  GroupPtr group;
  std::vector<SymbolKind> symbol_kinds;
  UniverseLimits limits;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void finish_config(JobConfig& cfg) {
  std::string text = cfg.group_text;
  if (text.empty()) throw ParseError("--group is required");
  if (text.find('{') == std::string::npos) text = slurp(text);
  cfg.group = make_group(parse_group_spec(text));
  for (char c : cfg.kinds) {
    switch (c) {
      case 'E': cfg.symbol_kinds.push_back(SymbolKind::E); break;
      case 'H': cfg.symbol_kinds.push_back(SymbolKind::H); break;
      case 'T': cfg.symbol_kinds.push_back(SymbolKind::T); break;
      case 'Q': cfg.symbol_kinds.push_back(SymbolKind::Q); break;
      default: throw ParseError("--kinds must name symbol kinds from EHTQ");
    }
  }
  if (cfg.format != "text" && cfg.format != "doc")
    throw ParseError("--format must be text or doc");
  if (cfg.max_universe == 0 || cfg.max_relations == 0)
    throw ParseError("resource limits must be positive");
  cfg.limits.max_universe = cfg.max_universe;
  cfg.limits.max_relations = cfg.max_relations;
}

void add_common(CLI::App* cmd, JobConfig& cfg) {
  cmd->add_option("--group", cfg.group_text, "group spec: inline JSON or a file path");
  cmd->add_option("--ball", cfg.ball, "group ball radius; -1 = whole finite group");
  cmd->add_option("--coeff", cfg.coeff, "degree coefficient bound");
  cmd->add_option("--kinds", cfg.kinds, "symbol kinds, a subset of EHTQ");
  cmd->add_option("--radius", cfg.radius, "fp witness search radius");
  cmd->add_option("--format", cfg.format, "output format: text | doc");
  cmd->add_option("--max-universe", cfg.max_universe, "largest allowed universe");
  cmd->add_option("--max-relations", cfg.max_relations, "largest allowed relation count");
}

json int_json(const Int& v) {
  static const Int lo = -((Int(1) << 53)), hi = (Int(1) << 53);
  if (v > lo && v < hi) return v.convert_to<std::int64_t>();
  return v.str();
}

Int int_from_json(const json& j) {
  if (j.is_string()) return Int(j.get<std::string>());
  return Int(j.get<std::int64_t>());
}

json elem_json(const AbElem& e) {
  json t = json::array(), f = json::array();
  for (const Int& v : e.torsion) t.push_back(int_json(v));
  for (const Int& v : e.free) f.push_back(int_json(v));
  return {{"torsion", t}, {"free", f}};
}

AbElem elem_from_json(const json& j) {
  AbElem e;
  for (const auto& v : j.at("torsion")) e.torsion.push_back(int_from_json(v));
  for (const auto& v : j.at("free")) e.free.push_back(int_from_json(v));
  return e;
}

json witness_json(const Transform& w, const Group& ctx) {
  json eps = json::array(), rights = json::array(), tp = json::array();
  for (const auto& p : w.entry_perms) eps.push_back(p);
  for (const auto& k : w.rights) rights.push_back(ctx.format(k));
  for (auto i : w.tuple_perm) tp.push_back(i);
  return {{"left", ctx.format(w.left)},
          {"rights", rights},
          {"tuple_perm", tp},
          {"entry_perms", eps}};
}

std::string witness_text(const Transform& w, const Group& ctx) {
  std::ostringstream os;
  os << "h=" << ctx.format(w.left);
  for (std::size_t j = 0; j < w.rights.size(); ++j) {
    os << " k" << j << "=" << ctx.format(w.rights[j]) << " perm" << j << "=(";
    for (std::size_t m = 0; m < w.entry_perms[j].size(); ++m) {
      if (m) os << ' ';
      os << w.entry_perms[j][m];
    }
    os << ')';
  }
  if (w.tuple_perm.size() > 1) {
    os << " tuple=(";
    for (std::size_t m = 0; m < w.tuple_perm.size(); ++m) {
      if (m) os << ' ';
      os << w.tuple_perm[m];
    }
    os << ')';
  }
  return os.str();
}

SymbolTuple parse_symbol_or_tuple(const Group& ctx, const std::string& text) {
  std::string_view t = text;
  std::size_t i = 0;
  while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) ++i;
  if (i < t.size() && t[i] == '[') return parse_tuple(ctx, text);
  return {parse_symbol(ctx, text)};
}

// ---------------------------------------------------------------------------

int cmd_canon(JobConfig& cfg, const std::string& input) {
  SymbolTuple t = parse_symbol_or_tuple(*cfg.group, input);
  bool was_tuple = input.find('[') != std::string::npos;
  CanonicalForm c = canonicalize(t, cfg.radius);
  std::string text = was_tuple ? format_tuple(c.tuple) : format_symbol(c.tuple[0]);
  const char* status = c.status == CanonicalForm::Status::Exact ? "exact" : "heuristic";
  if (cfg.format == "doc") {
    std::cout << json{{"canonical", text}, {"status", status}}.dump(2) << "\n";
  } else {
    std::cout << text << "\n" << "status: " << status << "\n";
  }
  return 0;
}

int cmd_equiv(JobConfig& cfg, const std::string& lhs, const std::string& rhs) {
  SymbolTuple a = parse_symbol_or_tuple(*cfg.group, lhs);
  SymbolTuple b = parse_symbol_or_tuple(*cfg.group, rhs);
  EquivResult r = equivalent(a, b, cfg.radius);
  if (cfg.format == "doc") {
    json out{{"verdict", to_string(r.value)}};
    if (r.witness) out["witness"] = witness_json(*r.witness, *cfg.group);
    if (r.separating_quotient >= 0)
      out["separating_quotient"] = r.separating_quotient;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << to_string(r.value) << "\n";
    if (r.witness) std::cout << "witness: " << witness_text(*r.witness, *cfg.group) << "\n";
    if (r.separating_quotient >= 0)
      std::cout << "separating quotient: " << r.separating_quotient << "\n";
  }
  return 0;
}

int cmd_one_sided(JobConfig& cfg, const std::string& input) {
  Symbol s = parse_symbol(*cfg.group, input);
  EquivResult r = is_one_sided(s, cfg.radius);
  if (cfg.format == "doc") {
    json out{{"verdict", to_string(r.value)}};
    if (r.witness) out["witness"] = witness_json(*r.witness, *cfg.group);
    if (r.separating_quotient >= 0)
      out["separating_quotient"] = r.separating_quotient;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << to_string(r.value) << "\n";
    if (r.witness) std::cout << "witness: " << witness_text(*r.witness, *cfg.group) << "\n";
    if (r.separating_quotient >= 0)
      std::cout << "separating quotient: " << r.separating_quotient << "\n";
  }
  return 0;
}

json relation_json(const UniverseRelation& r) {
  json terms = json::array();
  for (const auto& [idx, c] : r.terms) terms.push_back({idx, int_json(c)});
  return {{"kind", kind_name(r.kind)}, {"provenance", r.provenance}, {"terms", terms}};
}

int cmd_relations(JobConfig& cfg) {
  Universe u = build_universe(cfg.group, cfg.ball, cfg.coeff, cfg.symbol_kinds,
                              cfg.radius, cfg.limits);
  auto rels = generate_relations(u, all_relation_kinds(), cfg.limits);
  IntMat m = relation_matrix(u.size(), rels);
  if (cfg.format == "doc") {
    json universe = json::array(), relations = json::array(), entries = json::array();
    for (const auto& s : u.reps) universe.push_back(format_symbol(s));
    for (const auto& r : rels) relations.push_back(relation_json(r));
    for (const auto& [r, c, v] : m.entries) entries.push_back({r, c, int_json(v)});
    std::cout << json{{"universe", universe},
                      {"relations", relations},
                      {"matrix", {{"rows", m.rows}, {"cols", m.cols}, {"entries", entries}}}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "# universe " << u.size() << "\n";
    for (std::size_t i = 0; i < u.size(); ++i)
      std::cout << i << " " << format_symbol(u.reps[i]) << "\n";
    std::cout << "# relations " << rels.size() << "\n";
    for (const auto& r : rels) {
      std::cout << kind_name(r.kind) << " |";
      for (const auto& [idx, c] : r.terms) std::cout << " " << c << "*" << idx;
      std::cout << "\n";
    }
    std::cout << "# matrix\n" << m.format();
  }
  return 0;
}

int cmd_universal(JobConfig& cfg) {
  Truncation t = compute_universal_truncation(
      build_universe(cfg.group, cfg.ball, cfg.coeff, cfg.symbol_kinds, cfg.radius,
                     cfg.limits),
      cfg.limits);
  if (cfg.format == "doc") {
    json universe = json::array(), gu = json::array(), torsion = json::array();
    for (const auto& s : t.universe.reps) universe.push_back(format_symbol(s));
    for (const auto& v : t.gU.values) gu.push_back(elem_json(v));
    for (const Int& d : t.group.torsion) torsion.push_back(int_json(d));
    std::cout << json{{"window",
                       {{"ball", cfg.ball},
                        {"coeff", cfg.coeff},
                        {"kinds", cfg.kinds},
                        {"radius", cfg.radius}}},
                      {"status", t.universe.exact ? "exact" : "heuristic"},
                      {"universe", universe},
                      {"free_rank", t.group.free_rank},
                      {"torsion", torsion},
                      {"gu", gu},
                      {"relation_count", t.relations.size()}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "window: ball=" << cfg.ball << " coeff=" << cfg.coeff
              << " kinds=" << cfg.kinds << "\n";
    std::cout << "status: " << (t.universe.exact ? "exact" : "heuristic") << "\n";
    std::cout << "universe size: " << t.universe.size() << "\n";
    std::cout << "relations: " << t.relations.size() << "\n";
    std::cout << "free rank: " << t.group.free_rank << "\n";
    std::cout << "torsion: [";
    for (std::size_t i = 0; i < t.group.torsion.size(); ++i) {
      if (i) std::cout << ", ";
      std::cout << t.group.torsion[i];
    }
    std::cout << "]\n";
    std::cout << "gU:\n";
    for (std::size_t i = 0; i < t.universe.size(); ++i)
      std::cout << "  " << i << " " << format_symbol(t.universe.reps[i]) << " -> "
                << t.group.format(t.gU.values[i]) << "\n";
  }
  return 0;
}

Assignment load_assignment(const std::string& path, const Universe& u) {
  json j = json::parse(slurp(path));
  Assignment a;
  a.target.free_rank = j.at("target").at("free_rank").get<std::size_t>();
  for (const auto& d : j.at("target").at("torsion"))
    a.target.torsion.push_back(int_from_json(d));
  for (std::size_t i = 0; i + 1 < a.target.torsion.size(); ++i)
    if (a.target.torsion[i + 1] % a.target.torsion[i] != 0)
      throw SpecError("target torsion must form a divisibility chain");
  for (const auto& v : j.at("values")) a.values.push_back(elem_from_json(v));
  if (a.values.size() != u.size())
    throw SpecError("assignment has " + std::to_string(a.values.size()) +
                    " values for a universe of size " + std::to_string(u.size()));
  for (auto& v : a.values) v = a.target.reduce(std::move(v));
  return a;
}

int cmd_delta1(JobConfig& cfg, const std::string& assignment_path) {
  Universe u = build_universe(cfg.group, cfg.ball, cfg.coeff, cfg.symbol_kinds,
                              cfg.radius, cfg.limits);
  Assignment a = load_assignment(assignment_path, u);
  auto rels = generate_relations(u, all_relation_kinds(), cfg.limits);
  Delta1Report report = check_delta1(a, u, &rels, cfg.limits);
  if (cfg.format == "doc") {
    json violations = json::array();
    for (const auto& v : report.violations) {
      json item = relation_json(v.relation);
      item["residue"] = elem_json(v.residue);
      violations.push_back(item);
    }
    std::cout << json{{"verdict", report.pass ? "pass" : "fail"},
                      {"relation_count", rels.size()},
                      {"violations", violations}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << (report.pass ? "pass" : "fail") << "\n";
    std::cout << "relations checked: " << rels.size() << "\n";
    for (const auto& v : report.violations)
      std::cout << "violated: " << v.relation.provenance
                << " residue=" << a.target.format(v.residue) << "\n";
  }
  return 0;
}

int cmd_trace(JobConfig& cfg, const std::string& trace_path,
              const std::string& assignment_path) {
  Universe u = build_universe(cfg.group, cfg.ball, cfg.coeff, cfg.symbol_kinds,
                              cfg.radius, cfg.limits);
  Assignment a;
  if (assignment_path.empty()) {
    Truncation t = compute_universal_truncation(u, cfg.limits);
    a = t.gU;
    u = std::move(t.universe);
  } else {
    a = load_assignment(assignment_path, u);
  }
  json j = json::parse(slurp(trace_path));
  EventTrace trace;
  for (const auto& ev : j.at("events"))
    trace.events.push_back(
        {ev.at("dir").get<int>(), parse_symbol(*cfg.group, ev.at("symbol").get<std::string>())});
  AbElem value = evaluate_trace(trace, a, u);
  if (cfg.format == "doc") {
    std::cout << json{{"value", elem_json(value)},
                      {"zero", a.target.is_zero(value)},
                      {"formatted", a.target.format(value)}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << a.target.format(value) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CE symbol calculus over a fundamental group"};
  app.require_subcommand(1);

  JobConfig cfg;
  std::string input, rhs, assignment_path, trace_path;

  CLI::App* canon = app.add_subcommand("canon", "canonical form of a symbol or tuple");
  add_common(canon, cfg);
  canon->add_option("symbol", input, "symbol or tuple text")->required();

  CLI::App* equiv = app.add_subcommand("equiv", "equivalence of two symbols or tuples");
  add_common(equiv, cfg);
  equiv->add_option("lhs", input, "first symbol or tuple")->required();
  equiv->add_option("rhs", rhs, "second symbol or tuple")->required();

  CLI::App* one_sided = app.add_subcommand("one-sided", "one-sidedness of an H or Q symbol");
  add_common(one_sided, cfg);
  one_sided->add_option("symbol", input, "symbol text")->required();

  CLI::App* relations = app.add_subcommand("relations", "relation export over a universe");
  add_common(relations, cfg);

  CLI::App* universal = app.add_subcommand("universal", "truncated universal group report");
  add_common(universal, cfg);

  CLI::App* delta1 = app.add_subcommand("delta1", "check an assignment against the relations");
  add_common(delta1, cfg);
  delta1->add_option("--assignment", assignment_path, "assignment document path")->required();

  CLI::App* trace = app.add_subcommand("trace", "evaluate an event trace");
  add_common(trace, cfg);
  trace->add_option("--trace", trace_path, "trace document path")->required();
  trace->add_option("--assignment", assignment_path,
                    "assignment document path (default: the universal assignment)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    finish_config(cfg);
    if (canon->parsed()) return cmd_canon(cfg, input);
    if (equiv->parsed()) return cmd_equiv(cfg, input, rhs);
    if (one_sided->parsed()) return cmd_one_sided(cfg, input);
    if (relations->parsed()) return cmd_relations(cfg);
    if (universal->parsed()) return cmd_universal(cfg);
    if (delta1->parsed()) return cmd_delta1(cfg, assignment_path);
    if (trace->parsed()) return cmd_trace(cfg, trace_path, assignment_path);
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 3;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
