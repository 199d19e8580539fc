#include "ztower/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "ztower/errors.hpp"
#include "ztower/growth.hpp"
#include "ztower/iwasawa.hpp"
#include "ztower/jacobian.hpp"
#include "ztower/planar.hpp"
#include "ztower/spec_io.hpp"

#ifndef ZTOWER_CORPUS_DIR
#define ZTOWER_CORPUS_DIR "corpus"
#endif

namespace ztower {

using nlohmann::json;

namespace {

json poly_json(const IwasawaPoly& f) {
  json terms = json::array();
  for (const auto& [e, c] : f.grlex_terms()) terms.push_back({{"exponents", e}, {"coefficient", c.get_str()}});
  return {{"terms", terms}, {"text", f.to_string()}};
}

json char_json(const CharElement& c) {
  return {{"poly", poly_json(c.poly)},
          {"mu", c.mu},
          {"lambda", c.lambda},
          {"clearing", c.clearing},
          {"warnings", c.warnings}};
}

json group_json(const AbelianGroup& g) {
  json factors = json::array();
  for (const auto& f : g.invariant_factors) factors.push_back(f.get_str());
  return {{"invariant_factors", factors}, {"free_rank", g.free_rank}, {"order", g.torsion_order().get_str()},
          {"text", g.to_string()}};
}

std::string style_name(EmbeddingStyle s) { return s == EmbeddingStyle::bundle ? "bundle" : "pinch"; }

EmbeddingStyle parse_style(const std::string& s) {
  if (s == "bundle") return EmbeddingStyle::bundle;
  if (s == "pinch") return EmbeddingStyle::pinch;
  throw SpecError("style", "expected bundle or pinch");
}

// Outer face hint, or the first face through the voltage edge.
std::size_t outer_face_of(const SpecFile& sf) {
  if (sf.outer_face) return *sf.outer_face;
  const Embedding emb = sf.embedding();
  const Faces faces = trace_faces(emb);
  const auto e0 = voltage_edge(sf.spec);
  if (!e0) return 0;
  return std::min(faces.face_of_dart[*e0], faces.face_of_dart[*e0 + 1]);
}

json report_json(const DualTowerReport& r) {
  json levels = json::array();
  for (const auto& l : r.levels)
    levels.push_back({{"n", l.n},
                      {"dual_vertices", l.dual_vertices},
                      {"dual_edges", l.dual_edges},
                      {"branched_cover", l.cover},
                      {"galois", l.galois},
                      {"ramified_primal", l.ramified_primal},
                      {"ramified_dual", l.ramified_dual},
                      {"sheets", l.sheets}});
  json j = {{"pass", r.pass}, {"levels", levels}};
  if (!r.pass) {
    j["failed_level"] = r.failed_level;
    j["failed_check"] = std::string(1, r.failed_check);
    j["witness"] = r.witness;
  }
  return j;
}

void flatten_into(const json& j, const std::string& prefix, std::ostringstream& os) {
  if (j.is_object()) {
    if (j.empty()) os << prefix << ": {}\n";
    for (const auto& [k, v] : j.items()) flatten_into(v, prefix.empty() ? k : prefix + "." + k, os);
  } else if (j.is_array()) {
    const bool scalars = std::all_of(j.begin(), j.end(), [](const json& x) { return x.is_primitive(); });
    if (scalars) {
      os << prefix << ": ";
      for (std::size_t i = 0; i < j.size(); ++i) os << (i ? " " : "") << (j[i].is_string() ? j[i].get<std::string>() : j[i].dump());
      os << "\n";
    } else {
      for (std::size_t i = 0; i < j.size(); ++i) flatten_into(j[i], prefix + "[" + std::to_string(i) + "]", os);
    }
  } else {
    os << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

struct Options {
  std::string spec_path;
  int n = 0;
  int max_n = 3;
  std::string slack = "auto";
  std::string format = "json";
  std::string style = "bundle";
  std::string corpus = ZTOWER_CORPUS_DIR;
};

void emit(const json& j, const Options& o, std::ostream& out) {
  if (o.format == "text")
    out << flatten_text(j);
  else
    out << canonical_dump(j);
}

int cmd_layer(const Options& o, std::ostream& out) {
  const SpecFile sf = load_spec(o.spec_path);
  const LayerGraph layer = build_layer(sf.spec, o.n);
  if (!is_connected(layer.graph)) throw DisconnectedError(o.n, "layer " + std::to_string(o.n) + " is disconnected");
  json j = {{"n", o.n},
            {"vertices", layer.graph.vertex_count()},
            {"edges", layer.graph.edge_count()},
            {"sheets", layer.sheets},
            {"labels", layer.graph.vertex_names()},
            {"edge_list", graph_to_json(layer.graph)}};
  emit(j, o, out);
  return exit_code::ok;
}

int cmd_kappa(const Options& o, std::ostream& out) {
  const SpecFile sf = load_spec(o.spec_path);
  const LayerGraph layer = build_layer(sf.spec, o.n);
  if (!is_connected(layer.graph)) throw DisconnectedError(o.n, "layer " + std::to_string(o.n) + " is disconnected");
  const BigInt k = kappa(layer.graph);
  emit({{"n", o.n}, {"kappa", k.get_str()}, {"ord_p", ord_p(k, sf.spec.group.p)}}, o, out);
  return exit_code::ok;
}

int cmd_jacobian(const Options& o, std::ostream& out) {
  const SpecFile sf = load_spec(o.spec_path);
  const LayerGraph layer = build_layer(sf.spec, o.n);
  if (!is_connected(layer.graph)) throw DisconnectedError(o.n, "layer " + std::to_string(o.n) + " is disconnected");
  emit({{"n", o.n}, {"jacobian", group_json(jacobian_invariants(layer.graph))}}, o, out);
  return exit_code::ok;
}

int cmd_char(const Options& o, std::ostream& out) {
  const SpecFile sf = load_spec(o.spec_path);
  const CharElement pic = char_element(sf.spec);
  json j = char_json(pic);
  try {
    j["jacobian"] = char_json(char_of_jacobian(pic, sf.spec.group.d, sf.spec.group.p));
  } catch (const std::domain_error& e) {
    j["jacobian"] = nullptr;
    j["warnings"].push_back(e.what());
  }
  emit(j, o, out);
  return exit_code::ok;
}

int cmd_invariants(const Options& o, std::ostream& out) {
  const SpecFile sf = load_spec(o.spec_path);
  const CharElement pic = char_element(sf.spec);
  json ramified = json::array();
  for (VertexId v = 0; v < sf.spec.base.vertex_count(); ++v)
    if (sf.spec.ramified(v)) ramified.push_back(sf.spec.base.vertex_name(v));
  json j = {{"p", sf.spec.group.p},
            {"d", sf.spec.group.d},
            {"ramified", ramified},
            {"stabilization_level", stabilization_level(sf.spec)},
            {"pic", {{"mu", pic.mu}, {"lambda", pic.lambda}}}};
  if (sf.spec.group.d == 1 && pic.poly.constant_term() != 0) {
    j["jac"] = nullptr;
  } else {
    const CharElement jac = char_of_jacobian(pic, sf.spec.group.d, sf.spec.group.p);
    j["jac"] = {{"mu", jac.mu}, {"lambda", jac.lambda}};
  }
  emit(j, o, out);
  return exit_code::ok;
}

int cmd_growth(const Options& o, std::ostream& out, std::ostream& err) {
  const SpecFile sf = load_spec(o.spec_path);
  std::optional<BigInt> slack;
  if (o.slack != "auto") {
    try {
      slack = BigInt(o.slack);
    } catch (const std::invalid_argument&) {
      throw SpecError("--slack", "expected auto or a nonnegative integer");
    }
    if (*slack < 0) throw SpecError("--slack", "expected auto or a nonnegative integer");
  }
  if (sf.spec.group.d == 1 && o.max_n < 3) throw SpecError("--max-n", "d = 1 needs --max-n of at least 3");
  const Consistency c = consistency(sf.spec, o.max_n, slack);
  std::ostringstream csv;
  csv << "n,vertices,edges,kappa_ord,residual\n";
  for (std::size_t n = 0; n < c.series.values.size(); ++n)
    csv << n << "," << c.series.vertices[n] << "," << c.series.edges[n] << "," << c.series.values[n] << ","
        << c.check->residuals[n].get_str() << "\n";
  out << csv.str();
  json verdict = {{"consistent", c.consistent},
                  {"mu", c.char_jac.mu},
                  {"lambda", c.char_jac.lambda},
                  {"message", c.message},
                  {"slack", c.check->slack.get_str()},
                  {"warnings", c.series.warnings}};
  for (const auto& w : c.char_pic.warnings) verdict["warnings"].push_back(w);
  if (c.fit)
    verdict["fit"] = {{"mu", c.fit->mu}, {"lambda", c.fit->lambda}, {"nu", c.fit->nu}, {"n0", c.fit->n0}};
  else
    verdict["fit"] = nullptr;
  emit(verdict, o, out);
  if (c.consistent) return exit_code::ok;
  if (sf.spec.group.d >= 2 && !slack) {
    err << "warning: residuals exceed the automatic slack " << c.check->slack.get_str() << "\n";
    return exit_code::ok;
  }
  err << "inconsistent: " << c.message << "\n";
  return exit_code::inconsistent;
}

int cmd_dual(const Options& o, std::ostream& out, std::ostream& err) {
  const SpecFile sf = load_spec(o.spec_path);
  if (!sf.has_embedding()) throw SpecError("embedding", "the dual command needs an embedding");
  const EmbeddingStyle style = parse_style(o.style);
  const Embedding base = sf.embedding();
  const std::size_t outer = outer_face_of(sf);
  DualTowerReport report;
  json j = {{"n", o.n}, {"outer_face", outer}};
  try {
    report = dual_tower_check(sf.spec, base, outer, o.n, style);
    const DerivedEmbedding de = derived_embedding(sf.spec, base, outer, o.n, style);
    const DualResult d = dual(de.embedding);
    j["style_used"] = style_name(de.style_used);
    j["dual"] = {{"vertices", d.embedding.graph.vertex_names()}, {"edges", graph_to_json(d.embedding.graph)}};
  } catch (const NonPlanarError& e) {
    j["report"] = {{"pass", false}, {"witness", e.what()}};
    emit(j, o, out);
    err << "dual failure: " << e.what() << "\n";
    return exit_code::dual_failure;
  } catch (const std::invalid_argument& e) {
    throw SpecError("embedding", e.what());
  }
  j["report"] = report_json(report);
  emit(j, o, out);
  if (!report.pass) {
    err << "dual failure at n = " << report.failed_level << " (" << report.failed_check << "): " << report.witness << "\n";
    return exit_code::dual_failure;
  }
  return exit_code::ok;
}

int cmd_verify(const Options& o, std::ostream& out) {
  namespace fs = std::filesystem;
  if (o.corpus.empty() || !fs::is_directory(o.corpus)) throw SpecError("--corpus", "not a directory: " + o.corpus);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(o.corpus))
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  if (files.empty()) throw SpecError("--corpus", "no fixtures in " + o.corpus);
  std::sort(files.begin(), files.end());
  json results = json::array();
  bool all = true;
  for (const auto& path : files) {
    ExampleResult r;
    try {
      std::ifstream in(path);
      r = verify_example(json::parse(in));
    } catch (const std::exception& e) {
      r.name = path.filename().string();
      r.pass = false;
      r.checks = json::array({{{"check", "load"}, {"expected", "fixture"}, {"actual", e.what()}, {"pass", false}}});
    }
    all = all && r.pass;
    results.push_back({{"name", r.name}, {"file", path.filename().string()}, {"pass", r.pass}, {"checks", r.checks}});
  }
  emit({{"pass", all}, {"examples", results}}, o, out);
  return all ? exit_code::ok : exit_code::failure;
}

}  // namespace

std::string flatten_text(const json& j) {
  std::ostringstream os;
  flatten_into(j, "", os);
  return os.str();
}

namespace {

json check(const std::string& name, const json& expected, const json& actual) {
  return {{"check", name}, {"expected", expected}, {"actual", actual}, {"pass", expected == actual}};
}

}  // namespace

ExampleResult verify_example(const json& fixture) {
  ExampleResult r;
  r.name = fixture.value("name", std::string("unnamed"));
  r.checks = json::array();
  const json& expect = fixture.at("expect");
  const SpecFile sf = parse_spec(fixture.at("spec"));
  const TowerSpec& spec = sf.spec;
  const std::uint64_t p = spec.group.p;
  auto guarded = [&](const std::string& name, const json& expected, const std::function<json()>& actual) {
    try {
      r.checks.push_back(check(name, expected, actual()));
    } catch (const std::exception& e) {
      r.checks.push_back({{"check", name}, {"expected", expected}, {"actual", std::string("error: ") + e.what()}, {"pass", false}});
    }
  };

  if (expect.contains("layers"))
    for (const auto& l : expect.at("layers")) {
      const int n = l.at("n").get<int>();
      json expected = l;
      guarded("layer n=" + std::to_string(n), expected, [&] {
        const LayerGraph layer = build_layer(spec, n);
        json a = {{"n", n}, {"vertices", layer.graph.vertex_count()}, {"edges", layer.graph.edge_count()}};
        if (l.contains("connected")) a["connected"] = is_connected(layer.graph);
        if (l.contains("kappa")) a["kappa"] = kappa(layer.graph).get_str();
        return a;
      });
    }
  for (const std::string key : {"char_pic", "char_jac"}) {
    if (!expect.contains(key)) continue;
    const std::string want = expect.at(key).get<std::string>();
    guarded(key + " up to unit", want, [&]() -> json {
      CharElement c = char_element(spec);
      if (key == "char_jac") c = char_of_jacobian(c, spec.group.d, p);
      const IwasawaPoly target = IwasawaPoly::parse(want, spec.group.d);
      return chars_equal_up_to_unit(c.poly, target, p) ? json(want) : json(c.poly.to_string());
    });
  }
  if (expect.contains("series")) {
    const json want = expect.at("series");
    guarded("ord_p kappa series", want, [&] { return json(ord_series(spec, static_cast<int>(want.size()) - 1).values); });
  }
  if (expect.contains("growth")) {
    const json& g = expect.at("growth");
    const json want = {{"consistent", g.at("consistent")}};
    guarded("growth consistency", want, [&] {
      return json{{"consistent", consistency(spec, g.at("max_n").get<int>()).consistent}};
    });
  }
  if (expect.contains("planar_max_n")) {
    const int n_max = expect.at("planar_max_n").get<int>();
    guarded("chi = 2 up to n=" + std::to_string(n_max), json(true), [&] {
      for (int n = 0; n <= n_max; ++n)
        if (euler_characteristic(derived_embedding(spec, sf.embedding(), outer_face_of(sf), n).embedding) != 2) return json(false);
      return json(true);
    });
  }
  if (expect.contains("dual")) {
    const json& d = expect.at("dual");
    json want = d;
    want.erase("n_max");
    want.erase("style");
    guarded("dual tower", want, [&] {
      const EmbeddingStyle style = parse_style(d.value("style", std::string("bundle")));
      const DualTowerReport rep = dual_tower_check(spec, sf.embedding(), outer_face_of(sf), d.at("n_max").get<int>(), style);
      json a = {{"pass", rep.pass}};
      if (want.contains("failed_level")) a["failed_level"] = rep.failed_level;
      if (want.contains("failed_check")) a["failed_check"] = rep.failed_check ? std::string(1, rep.failed_check) : "";
      if (want.contains("ramified_dual")) {
        std::size_t m = 0;
        for (const auto& l : rep.levels) m = std::max(m, l.ramified_dual);
        a["ramified_dual"] = m;
      }
      return a;
    });
  }
  if (expect.contains("jac_duality_max_n")) {
    const int n_max = expect.at("jac_duality_max_n").get<int>();
    guarded("Jac(X_n) = Jac(dual) up to n=" + std::to_string(n_max), json(true), [&] {
      for (int n = 0; n <= n_max; ++n)
        if (!jac_duality_check(derived_embedding(spec, sf.embedding(), outer_face_of(sf), n).embedding).pass) return json(false);
      return json(true);
    });
  }
  r.pass = std::all_of(r.checks.begin(), r.checks.end(), [](const json& c) { return c.at("pass").get<bool>(); });
  return r;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite layers of Z_p^d towers of graphs"};
  app.require_subcommand(1);
  Options o;
  auto spec_command = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("spec", o.spec_path, "tower spec JSON file")->required();
    sub->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    return sub;
  };
  CLI::App* layer = spec_command("layer", "vertex and edge summary of X_n");
  CLI::App* kap = spec_command("kappa", "spanning-tree count of X_n");
  CLI::App* jac = spec_command("jacobian", "invariant factors of Jac(X_n)");
  CLI::App* chr = spec_command("char", "characteristic element det(D - B)");
  CLI::App* inv = spec_command("invariants", "mu and lambda of Pic and Jac");
  CLI::App* gro = spec_command("growth", "ord_p(kappa(X_n)) table and consistency verdict");
  CLI::App* dua = spec_command("dual", "dual of X_n and the dual tower report");
  for (CLI::App* sub : {layer, kap, jac, dua}) sub->add_option("--n", o.n, "layer index")->check(CLI::NonNegativeNumber);
  gro->add_option("--max-n", o.max_n, "last layer")->check(CLI::NonNegativeNumber);
  gro->add_option("--slack", o.slack, "auto or an integer C");
  dua->add_option("--style", o.style, "bundle or pinch")->check(CLI::IsMember({"bundle", "pinch"}));
  CLI::App* ver = app.add_subcommand("verify", "check every corpus fixture");
  ver->add_option("--corpus", o.corpus, "fixture directory");
  ver->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::parse;
  }

  try {
    if (*layer) return cmd_layer(o, out);
    if (*kap) return cmd_kappa(o, out);
    if (*jac) return cmd_jacobian(o, out);
    if (*chr) return cmd_char(o, out);
    if (*inv) return cmd_invariants(o, out);
    if (*gro) return cmd_growth(o, out, err);
    if (*dua) return cmd_dual(o, out, err);
    if (*ver) return cmd_verify(o, out);
  } catch (const SpecError& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_code::parse;
  } catch (const DisconnectedError& e) {
    err << "disconnected: " << e.what() << "\n";
    return exit_code::disconnected;
  } catch (const NonTorsionError& e) {
    err << "non-torsion: " << e.what() << "\n";
    return exit_code::non_torsion;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::failure;
  }
  return exit_code::failure;
}

}  // namespace ztower
