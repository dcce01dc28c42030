// gkzcc: exact characteristic-cycle toolkit for GKZ hypergeometric sheaves.
//
// Subcommands: analyze | resolve | conormal | umbrella | cc | examples.
// Exit codes: 0 success, 1 golden mismatch, 2 malformed input,
// 3 precondition violation, 4 method inapplicable.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "gkzcc/cycle.hpp"
#include "gkzcc/json_io.hpp"

namespace fs = std::filesystem;
using namespace gkzcc;

namespace {

struct JobConfig {
  std::optional<IntMatrix> matrix;
  bool hatted = false;
  std::optional<Int> prime;
  std::optional<CharacterVector> character;
  std::optional<MultiplicityTable> multiplicities;
  std::optional<GenerableSet> fan;
  std::string output = "-";
  std::string format = "json";
};

Json parse_json_arg(const std::string& arg) {
  std::string text = arg;
  if (!arg.empty() && arg.front() == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw ParseError("cannot open file: " + arg.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

struct RawArgs {
  std::string matrix, character_exps, mult, fan, config;
  std::int64_t prime = 0;
  std::int64_t char_order = 0;
  bool hatted = false;
  std::string out = "-", format;
};

void add_common(CLI::App* cmd, RawArgs& raw) {
  cmd->add_option("--matrix", raw.matrix,
                  "matrix as a JSON array of rows, or @file");
  cmd->add_flag("--hatted", raw.hatted, "input matrix already carries the hat row");
  cmd->add_option("--prime", raw.prime, "prime p for the special fiber");
  cmd->add_option("--char-order", raw.char_order, "character order q-1");
  cmd->add_option("--char", raw.character_exps,
                  "character exponents, comma separated");
  cmd->add_option("--mult", raw.mult, "multiplicity table JSON, or @file");
  cmd->add_option("--fan", raw.fan, "starting fan JSON, or @file");
  cmd->add_option("--config", raw.config, "JSON config file; flags override");
  cmd->add_option("--out", raw.out, "output path, - for stdout");
  cmd->add_option("--format", raw.format, "json or text");
}

JobConfig build_config(const RawArgs& raw) {
  JobConfig cfg;
  if (!raw.config.empty()) {
    Json j = parse_json_arg("@" + raw.config);
    if (j.contains("matrix")) cfg.matrix = matrix_from_json(j["matrix"]);
    if (j.contains("hatted")) cfg.hatted = j["hatted"].get<bool>();
    if (j.contains("prime")) cfg.prime = int_from_json(j["prime"]);
    if (j.contains("character")) cfg.character = character_from_json(j["character"]);
    if (j.contains("multiplicities"))
      cfg.multiplicities = multiplicity_table_from_json(j["multiplicities"]);
    if (j.contains("fan")) cfg.fan = fan_from_json(j["fan"]);
    if (j.contains("output")) cfg.output = j["output"].get<std::string>();
    if (j.contains("format")) cfg.format = j["format"].get<std::string>();
  }
  if (!raw.matrix.empty()) cfg.matrix = matrix_from_json(parse_json_arg(raw.matrix));
  if (raw.hatted) cfg.hatted = true;
  if (raw.prime != 0) cfg.prime = Int(raw.prime);
  if (!raw.character_exps.empty() && raw.char_order == 0)
    throw ParseError("--char needs --char-order");
  if (raw.char_order != 0) {
    std::vector<Int> exps;
    std::stringstream ss(raw.character_exps);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) exps.emplace_back(tok);
    if (exps.empty()) throw ParseError("--char-order given without --char exponents");
    cfg.character = CharacterVector(Int(raw.char_order), std::move(exps));
  }
  if (!raw.mult.empty())
    cfg.multiplicities = multiplicity_table_from_json(parse_json_arg(raw.mult));
  if (!raw.fan.empty()) cfg.fan = fan_from_json(parse_json_arg(raw.fan));
  if (raw.out != "-") cfg.output = raw.out;
  if (!raw.format.empty()) cfg.format = raw.format;
  if (cfg.format != "json" && cfg.format != "text")
    throw ParseError("format must be json or text");
  return cfg;
}

IntMatrix require_matrix(const JobConfig& cfg) {
  if (!cfg.matrix) throw ParseError("a matrix is required (--matrix or config)");
  return *cfg.matrix;
}

// The unhatted matrix B, whatever the input convention was.
IntMatrix as_unhatted(const JobConfig& cfg) {
  IntMatrix m = require_matrix(cfg);
  return cfg.hatted ? unhat(m) : m;
}

IntMatrix as_hatted(const JobConfig& cfg) {
  IntMatrix m = require_matrix(cfg);
  return cfg.hatted ? m : hat(m);
}

void emit(const JobConfig& cfg, const Json& doc, const std::string& text) {
  const std::string payload = cfg.format == "json" ? doc.dump(2) + "\n" : text;
  if (cfg.output == "-") {
    std::cout << payload;
  } else {
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) throw ParseError("cannot open output file: " + cfg.output);
    out << payload;
  }
}

Json nondegeneracy_json(const IntMatrix& a, const Int& p) {
  Json j;
  auto audit = is_p_nondegenerate(a, p);
  j["prime"] = int_to_json(p);
  j["value"] = audit.value;
  Json failing = Json::array();
  for (const auto& t : audit.failing) failing.push_back(theta_to_json(t));
  j["failing"] = std::move(failing);
  Json excess = Json::array();
  for (const auto& t : audit.failing) {
    auto rep = dim_report(a, t, 0, p);
    Json e;
    e["theta"] = theta_to_json(t);
    e["dim"] = int_to_json(*rep.dim_exact);
    e["n"] = a.cols();
    excess.push_back(std::move(e));
  }
  j["dimension_excess"] = std::move(excess);
  return j;
}

int cmd_analyze(const JobConfig& cfg) {
  IntMatrix a = as_hatted(cfg);
  Json doc;
  doc["matrix"] = matrix_to_json(require_matrix(cfg));
  doc["hat"] = matrix_to_json(a);
  doc["rank"] = rank_rational(a);
  doc["sub_non_confluent"] = rank_rational(a) == a.rows();
  auto nc = is_non_confluent(a);
  Json ncj;
  ncj["value"] = nc.value;
  if (nc.witness) ncj["witness"] = matrix_to_json(*nc.witness);
  doc["non_confluent"] = std::move(ncj);
  std::string text = "non-confluent: " + std::string(nc.value ? "yes" : "no") + "\n";
  if (cfg.prime) {
    doc["p_nondegeneracy"] = nondegeneracy_json(a, *cfg.prime);
    text += "p-nondegenerate (p=" + cfg.prime->str() + "): " +
            std::string(doc["p_nondegeneracy"]["value"].get<bool>() ? "yes" : "no") +
            "\n";
    if (!doc["p_nondegeneracy"]["value"].get<bool>() && a.rows() == a.cols()) {
      auto [reduced, tr] = square_reduce(a, *cfg.prime);
      doc["square_reduction"] = transcript_to_json(tr);
      text += "square reduction: " + std::to_string(tr.steps.size()) + " step(s)\n";
      (void)reduced;
    }
  }
  emit(cfg, doc, text);
  return 0;
}

int cmd_resolve(const JobConfig& cfg) {
  IntMatrix b = as_unhatted(cfg);
  GenerableSet start = cfg.fan ? *cfg.fan : default_complete_fan(b.rows());
  auto res = resolve(b, start);
  Json doc;
  doc["matrix"] = matrix_to_json(b);
  doc["fan"] = fan_to_json(res.fan);
  Json trace = Json::array();
  for (const auto& rec : res.records) trace.push_back(blowup_record_to_json(rec));
  doc["trace"] = std::move(trace);
  doc["steps"] = resolve_log_to_json(res.log);
  std::string text = "blow-ups: " + std::to_string(res.records.size()) +
                     ", final cones: " + std::to_string(res.fan.cones().size()) + "\n";
  emit(cfg, doc, text);
  return 0;
}

struct ConormalArgs {
  std::string theta;
  int chart = 0;
  bool infinity = false;
};

int cmd_conormal(const JobConfig& cfg, const ConormalArgs& args) {
  IntMatrix a = as_hatted(cfg);
  std::vector<int> members;
  std::stringstream ss(args.theta);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) members.push_back(std::stoi(tok));
  ThetaSubset theta(members);
  if (args.infinity && args.chart == 0)
    throw PreconditionError("the infinity family needs a chart k >= 1");
  Json doc;
  doc["hat"] = matrix_to_json(a);
  doc["theta"] = theta_to_json(theta);
  doc["chart"] = args.chart;
  Json gens;
  gens["xi"] = generator_set_to_json(xi_generators(a, theta, args.chart, false));
  gens["l"] = generator_set_to_json(l_generators(a, theta, args.chart));
  gens["box"] = generator_set_to_json(box_generators(a, theta, args.chart));
  if (args.chart >= 1)
    gens["xi_inf"] =
        generator_set_to_json(xi_generators(a, theta, args.chart, true));
  doc["generators"] = std::move(gens);
  std::string text;
  if (!theta.empty()) {
    auto rep = dim_report(a, theta, args.chart,
                          cfg.prime ? std::optional<Int>(*cfg.prime) : std::nullopt);
    doc["dim"] = dim_report_to_json(rep);
    text += "dim = " + rep.dim_exact->str() + "\n";
  }
  for (const auto& fam : {"xi", "l", "box"})
    for (const auto& g : doc["generators"][fam]["generators"])
      text += std::string(fam) + ": " + g.get<std::string>() + "\n";
  emit(cfg, doc, text);
  return 0;
}

int cmd_umbrella(const JobConfig& cfg) {
  IntMatrix a = as_hatted(cfg);
  auto theta_sets = umbrella(a);
  Json doc;
  doc["hat"] = matrix_to_json(a);
  Json sets = Json::array();
  std::string text;
  for (const auto& t : theta_sets) {
    sets.push_back(theta_to_json(t));
    text += t.str() + "\n";
  }
  doc["umbrella"] = std::move(sets);
  emit(cfg, doc, text);
  return 0;
}

Json cc_result_json(const CcResult& res) {
  Json doc;
  doc["cycle"] = cycle_to_json(res.cycle);
  Json rep;
  Json audit;
  audit["value"] = res.report.initial_audit.value;
  Json failing = Json::array();
  for (const auto& t : res.report.initial_audit.failing)
    failing.push_back(theta_to_json(t));
  audit["failing"] = std::move(failing);
  rep["initial_nondegeneracy"] = std::move(audit);
  if (res.report.square_reduction)
    rep["square_reduction"] = transcript_to_json(*res.report.square_reduction);
  rep["divided_rows"] = res.report.divided_rows;
  rep["final_matrix"] = matrix_to_json(res.report.final_b);
  if (res.report.final_chi)
    rep["final_character"] = character_to_json(*res.report.final_chi);
  Json umb = Json::array();
  for (const auto& t : res.report.umbrella_set) umb.push_back(theta_to_json(t));
  rep["umbrella"] = std::move(umb);
  Json audit2 = Json::array();
  for (const auto& [t, dim] : res.report.dim_audit) {
    Json e;
    e["theta"] = theta_to_json(t);
    e["dim"] = int_to_json(dim);
    audit2.push_back(std::move(e));
  }
  rep["dim_audit"] = std::move(audit2);
  rep["dim_audit_ok"] = res.report.dim_audit_ok;
  rep["notes"] = res.report.notes;
  doc["report"] = std::move(rep);
  return doc;
}

int cmd_cc(const JobConfig& cfg) {
  IntMatrix b = as_unhatted(cfg);
  if (!cfg.prime) throw ParseError("cc requires --prime");
  if (!cfg.character) throw ParseError("cc requires a character");
  CcResult res = cc_gkz(b, *cfg.prime, *cfg.character, cfg.multiplicities);
  Json doc = cc_result_json(res);
  std::string text = "components: " + std::to_string(res.cycle.components.size()) +
                     ", sign (-1)^" + res.cycle.sign_exponent.str() + "\n";
  for (const auto& c : res.cycle.components)
    text += "  " + cycle_kind_name(c.kind) +
            (c.theta ? " " + c.theta->str() : std::string()) + "  x " +
            c.mult_str() + "\n";
  emit(cfg, doc, text);
  return 0;
}

// Deterministic end-to-end documents for the three worked examples.
Json example_doc(int which) {
  Json doc;
  if (which == 1) {
    IntMatrix b{{0, 0, 1}};
    doc["name"] = "example-1";
    doc["matrix"] = matrix_to_json(b);
    const IntMatrix a = hat(b);
    doc["analyze"] = nondegeneracy_json(a, 7);
    Json umb = Json::array();
    for (const auto& t : umbrella(a)) umb.push_back(theta_to_json(t));
    doc["umbrella"] = std::move(umb);
    doc["cc"] = cc_result_json(cc_gkz(b, 7, CharacterVector(6, {1, 1})));
    auto route = cc_via_resolution(b);
    doc["resolution_blowups"] = route.resolution.records.size();
    Json labels = Json::array();
    for (const auto& l : route.labels) labels.push_back(support_label_to_json(l));
    doc["support"] = std::move(labels);
    doc["support_cycle"] = cycle_to_json(route.cycle);
  } else if (which == 2) {
    IntMatrix b{{0, 5, 10}};
    doc["name"] = "example-2";
    doc["matrix"] = matrix_to_json(b);
    doc["analyze"] = nondegeneracy_json(hat(b), 5);
    doc["cc"] = cc_result_json(cc_gkz(b, 5, CharacterVector(4, {1, 1})));
    // the reduced matrix's conormal tables over the full column set
    IntMatrix reduced{{0, 1, 2}};
    const IntMatrix a = hat(reduced);
    ThetaSubset full = ThetaSubset::full(3);
    Json tables;
    for (int k = 0; k <= 3; ++k) {
      Json entry;
      entry["xi"] = generator_set_to_json(xi_generators(a, full, k, false));
      entry["l"] = generator_set_to_json(l_generators(a, full, k));
      entry["box"] = generator_set_to_json(box_generators(a, full, k));
      if (k >= 1)
        entry["xi_inf"] = generator_set_to_json(xi_generators(a, full, k, true));
      tables["chart_" + std::to_string(k)] = std::move(entry);
    }
    doc["conormal_tables"] = std::move(tables);
    doc["dim_failing"] =
        dim_report_to_json(dim_report(hat(b), ThetaSubset({1, 2}), 0, Int(5)));
  } else {
    IntMatrix b{{0, 1, 5}};
    doc["name"] = "example-3";
    doc["matrix"] = matrix_to_json(b);
    doc["analyze"] = nondegeneracy_json(hat(b), 5);
    try {
      cc_gkz(b, 5, CharacterVector(4, {1, 1}));
      doc["cc_error"] = "unexpected success";
    } catch (const NondegeneracyFailure& e) {
      Json err;
      err["message"] = e.what();
      Json failing = Json::array();
      for (const auto& t : e.failing) failing.push_back(theta_to_json(t));
      err["failing"] = std::move(failing);
      Json excess = Json::array();
      for (const auto& [t, dim] : e.dim_excess) {
        Json x;
        x["theta"] = theta_to_json(t);
        x["dim"] = int_to_json(dim);
        x["n"] = int_to_json(e.ambient_n);
        excess.push_back(std::move(x));
      }
      err["dimension_excess"] = std::move(excess);
      doc["cc_error"] = std::move(err);
    }
  }
  return doc;
}

void print_diff(const std::string& expected, const std::string& actual) {
  std::stringstream se(expected), sa(actual);
  std::string le, la;
  int line = 0;
  while (true) {
    const bool he = static_cast<bool>(std::getline(se, le));
    const bool ha = static_cast<bool>(std::getline(sa, la));
    ++line;
    if (!he && !ha) break;
    if (he != ha || le != la) {
      std::cerr << "@@ line " << line << "\n";
      if (he) std::cerr << "- " << le << "\n";
      if (ha) std::cerr << "+ " << la << "\n";
    }
  }
}

int cmd_examples(const std::string& dir, bool write) {
  if (!fs::is_directory(dir)) {
    if (!write) {
      std::cerr << "golden directory not found: " << dir << "\n";
      return 2;
    }
    fs::create_directories(dir);
  }
  int rc = 0;
  for (int which = 1; which <= 3; ++which) {
    const std::string path = dir + "/example_" + std::to_string(which) + ".json";
    const std::string actual = example_doc(which).dump(2) + "\n";
    if (write) {
      std::ofstream out(path, std::ios::binary);
      out << actual;
      continue;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      std::cerr << "missing golden file: " << path << "\n";
      return 2;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    if (ss.str() != actual) {
      std::cerr << "golden mismatch: " << path << "\n";
      print_diff(ss.str(), actual);
      rc = 1;
    } else {
      std::cout << path << ": ok\n";
    }
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact characteristic cycles of GKZ hypergeometric sheaves"};
  app.require_subcommand(1);

  RawArgs raw;
  ConormalArgs cargs;
  std::string golden_dir = "golden";
  bool golden_write = false;

  auto* analyze = app.add_subcommand("analyze", "non-confluence and p-nondegeneracy");
  add_common(analyze, raw);
  auto* resolve_cmd = app.add_subcommand("resolve", "resolve the fan for the matrix");
  add_common(resolve_cmd, raw);
  auto* conormal_cmd =
      app.add_subcommand("conormal", "generator families and dimensions");
  add_common(conormal_cmd, raw);
  conormal_cmd->add_option("--theta", cargs.theta, "column subset, comma separated");
  conormal_cmd->add_option("--chart", cargs.chart, "chart index k in 0..n");
  conormal_cmd->add_flag("--infinity", cargs.infinity, "include the infinity family");
  auto* umbrella_cmd = app.add_subcommand("umbrella", "the A-umbrella index set");
  add_common(umbrella_cmd, raw);
  auto* cc_cmd = app.add_subcommand("cc", "characteristic cycle assembly");
  add_common(cc_cmd, raw);
  auto* examples_cmd =
      app.add_subcommand("examples", "regenerate and diff the worked examples");
  examples_cmd->add_option("--dir", golden_dir, "golden file directory");
  examples_cmd->add_flag("--write", golden_write, "rewrite the golden files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(examples_cmd)) return cmd_examples(golden_dir, golden_write);
    JobConfig cfg = build_config(raw);
    if (app.got_subcommand(analyze)) return cmd_analyze(cfg);
    if (app.got_subcommand(resolve_cmd)) return cmd_resolve(cfg);
    if (app.got_subcommand(conormal_cmd)) return cmd_conormal(cfg, cargs);
    if (app.got_subcommand(umbrella_cmd)) return cmd_umbrella(cfg);
    if (app.got_subcommand(cc_cmd)) return cmd_cc(cfg);
  } catch (const NondegeneracyFailure& e) {
    std::cerr << "method inapplicable: " << e.what() << "\n";
    return 4;
  } catch (const TrivialCharacterError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return 3;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
