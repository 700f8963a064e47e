// codeg: codegree sets, character table oracle, verification and recheck.
//
// exit codes: 0 ok/closed, 1 open cases or mismatch, 2 usage or data error,
// 3 oracle failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "codeg/catalog.hpp"
#include "codeg/codegree.hpp"
#include "codeg/dixon.hpp"
#include "codeg/proof.hpp"
#include "codeg/recheck.hpp"

using namespace codeg;

namespace {

enum Exit { kOk = 0, kOpen = 1, kUsage = 2, kOracle = 3 };

struct Common {
  std::optional<std::string> data;
  unsigned jobs = std::max(1U, std::thread::hardware_concurrency());
  std::uint64_t seed = 1;
  std::string format = "text";
};

void print_set(const CodegreeSet& s) {
  for (const auto& x : s.descending()) std::cout << x.dotted() << "\t" << x.decimal() << "\n";
}

CodegreeSet oracle_cod(const PermGroup& g, std::uint64_t seed) {
  DixonOptions o;
  o.seed = seed;
  CharTable t = dixon_table(g, o);
  auto rep = verify_table(t);
  if (!rep.pass) fail(ErrorKind::OracleFailure, g.name + ": table check failed: " + rep.failure);
  return cod_from_table(t);
}

int cmd_cod(const Common& c, const std::vector<std::string>& sel, const std::string& variant) {
  if (sel.empty()) fail(ErrorKind::Usage, "cod needs a selector");
  Catalog cat = load_catalog(resolve_data_dir(c.data));
  const std::string& name = sel[0];
  Bindings params;
  for (std::size_t i = 1; i < sel.size(); ++i) {
    auto eq = sel[i].find('=');
    if (eq == std::string::npos) fail(ErrorKind::Usage, "expected name=value, got '" + sel[i] + "'");
    params[sel[i].substr(0, eq)] = parse_i64(sel[i].substr(eq + 1));
  }
  if (cat.has_family(name)) {
    const GroupFamily& f = cat.family(name);
    std::string v = variant;
    if (v.empty() && !f.cod_sets.empty()) v = f.cod_sets.count("validated") ? "validated" : f.cod_sets.begin()->first;
    FamilyEvaluation ev = eval_family(f, params, v);
    std::vector<FactoredInt> xs;
    for (const auto& x : ev.values) xs.push_back(x.cod);
    if (f.cod_sets.empty()) {
      std::cerr << "note: " << f.name << " lists witness codegrees only\n";
      xs.push_back(FactoredInt{});
    }
    print_set(make_cod_set(std::move(xs), "formula"));
    return kOk;
  }
  if (!params.empty()) fail(ErrorKind::Usage, name + " is not a family; parameters not accepted");
  if (cat.has_record(name)) {
    print_set(cod_from_record(cat.record(name)));
    return kOk;
  }
  if (cat.has_group(name)) {
    print_set(oracle_cod(cat.group(name), c.seed));
    return kOk;
  }
  fail(ErrorKind::Usage, "unknown selector '" + name + "'");
}

Json table_json(const CharTable& t) {
  Json o;
  o["group"] = t.label;
  o["order"] = t.order.decimal();
  o["prime"] = t.prime;
  Json cls = Json::array();
  for (std::size_t k = 0; k < t.classes.count(); ++k)
    cls.push_back({{"size", t.classes.sizes[k]}, {"element_order", t.classes.orders[k]}});
  o["classes"] = std::move(cls);
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json vals = Json::array();
    for (const auto& v : r.values) vals.push_back({{"e", v.e}, {"multiplicities", v.m}});
    rows.push_back({{"degree", r.degree}, {"kernel_classes", r.kernel_classes}, {"values", std::move(vals)}});
  }
  o["rows"] = std::move(rows);
  o["cod"] = jsonio::fi_list(cod_from_table(t).descending());
  return o;
}

int cmd_oracle(const Common& c, const std::string& name, bool diff) {
  Catalog cat = load_catalog(resolve_data_dir(c.data));
  if (!cat.has_group(name)) fail(ErrorKind::Usage, "no generator file for '" + name + "'");
  DixonOptions o;
  o.seed = c.seed;
  CharTable t = dixon_table(cat.group(name), o);
  auto rep = verify_table(t);
  if (!rep.pass) fail(ErrorKind::OracleFailure, name + ": table check failed: " + rep.failure);
  CodegreeSet cod = cod_from_table(t);
  if (c.format == "json") {
    std::cout << table_json(t).dump(1) << "\n";
  } else {
    std::cout << "group " << name << "  |G| = " << t.order.dotted() << " = " << t.order.decimal() << "\n";
    std::cout << "classes " << t.classes.count() << "  prime " << t.prime << "\n";
    std::cout << "degrees";
    for (auto d : t.degrees()) std::cout << " " << d;
    std::cout << "\ncod\n";
    print_set(cod);
  }
  if (!diff) return kOk;
  if (!cat.has_record(name)) fail(ErrorKind::Data, "no record to compare for '" + name + "'");
  const DegreeData& d = cat.record(name);
  CodegreeSet rc = cod_from_record(d);
  bool same = rc == cod && t.degrees() == d.degrees;
  std::cerr << (same ? "match" : "MISMATCH") << ": oracle " << cod.size() << " codegrees, record " << rc.size() << "\n";
  return same ? kOk : kOpen;
}

int cmd_verify(const Common& c, const std::string& target, const std::string& out) {
  std::vector<std::string> targets;
  if (target == "both") targets = {"U3_3", "U4_2"};
  else if (target == "U3_3" || target == "U4_2") targets = {target};
  else fail(ErrorKind::Usage, "target must be both, U3_3 or U4_2");
  Catalog cat = load_catalog(resolve_data_dir(c.data));
  VerifyOptions vo;
  vo.targets = targets;
  vo.jobs = c.jobs;
  vo.dixon.seed = c.seed;
  ProofReport rep = verify_all(cat, vo);
  std::string text = rep.json.dump(1) + "\n";
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) fail(ErrorKind::Usage, "cannot write " + out);
    f << text;
  }
  std::size_t n = rep.json["cases"].size();
  std::cerr << "cases " << n << ", open " << rep.open_cases.size() << ", verdict " << (rep.closed ? "closed" : "open") << "\n";
  for (const auto& id : rep.open_cases) {
    for (const auto& cj : rep.json["cases"])
      if (cj["id"] == id) std::cerr << "  open " << id << ": " << cj.value("open_reason", "") << "\n";
  }
  if (rep.oracle_failure) {
    std::cerr << "oracle failure; retry with a different --seed\n";
    return kOracle;
  }
  return rep.closed ? kOk : kOpen;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Usage, "cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, path + ": " + e.what());
  }
}

int cmd_recheck(const std::string& path) {
  Json j = read_json(path);
  RecheckResult r;
  try {
    r = recheck_report(j);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("certificate: ") + e.what());
  }
  std::cout << "cases " << r.cases << ", grid points " << r.points << ", certificates " << r.certificates << "\n";
  for (const auto& p : r.problems) std::cout << "inconsistent: " << p << "\n";
  std::cout << (r.consistent ? "consistent" : "INCONSISTENT") << ", " << (r.closed ? "closed" : "open") << "\n";
  return r.consistent && r.closed ? kOk : kOpen;
}

int cmd_report(const Common& c, const std::string& path) {
  Json j = read_json(path);
  if (c.format == "json") {
    Json s;
    s["verdict"] = j.value("verdict", "");
    s["open_cases"] = j.value("open_cases", Json::array());
    Json cases = Json::array();
    for (const auto& cj : j.at("cases")) cases.push_back({{"id", cj.at("id")}, {"verdict", cj.at("verdict")}});
    s["cases"] = std::move(cases);
    std::cout << s.dump(1) << "\n";
  } else {
    for (const auto& cj : j.at("cases")) {
      std::cout << cj.at("id").get<std::string>() << "\t" << cj.at("method").get<std::string>() << "\t"
                << cj.at("verdict").get<std::string>();
      if (cj.contains("grid")) std::cout << "\tgrid " << cj["grid"].size();
      if (cj.contains("witness") && cj["witness"].is_string()) std::cout << "\twitness " << cj["witness"].get<std::string>();
      if (cj.contains("open_reason")) std::cout << "\t" << cj["open_reason"].get<std::string>();
      std::cout << "\n";
    }
    std::cout << "notes:\n";
    for (const auto& n : j.at("open_notes")) std::cout << "  " << n.at("id").get<std::string>() << ": " << n.at("note").get<std::string>() << "\n";
    std::cout << "verdict " << j.value("verdict", "?") << "\n";
  }
  return j.value("verdict", "") == "closed" ? kOk : kOpen;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"codegree sets: computation, oracle, verification"};
  app.require_subcommand(1);
  Common c;
  app.add_option("--data", c.data, "data directory (default: $CODEG_DATA, then ./data)");
  app.add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", c.seed, "oracle random seed");
  app.add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "json"}));

  auto* cod = app.add_subcommand("cod", "print cod of a record, family at parameters, or generator group");
  std::vector<std::string> selector;
  std::string variant;
  cod->add_option("selector", selector, "NAME [param=value ...]")->required();
  cod->add_option("--variant", variant, "family codegree-list variant");

  auto* oracle = app.add_subcommand("oracle", "character table oracle on a generator group");
  std::string group;
  bool diff = false;
  oracle->add_option("group", group)->required();
  oracle->add_flag("--diff", diff, "compare with the record");

  auto* verify = app.add_subcommand("verify", "close every case and write the report");
  std::string target = "both", out;
  verify->add_option("--target", target)->check(CLI::IsMember({"both", "U3_3", "U4_2"}));
  verify->add_option("-o,--output", out, "report path (default stdout)");

  auto* recheck = app.add_subcommand("recheck", "recheck a report offline");
  std::string cert;
  recheck->add_option("report", cert)->required();

  auto* report = app.add_subcommand("report", "summarize a report");
  std::string rpath;
  report->add_option("report", rpath)->required();

  // options are accepted before or after the subcommand
  for (auto* sub : {cod, oracle, verify, recheck, report}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  try {
    if (*cod) return cmd_cod(c, selector, variant);
    if (*oracle) return cmd_oracle(c, group, diff);
    if (*verify) return cmd_verify(c, target, out);
    if (*recheck) return cmd_recheck(cert);
    if (*report) return cmd_report(c, rpath);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    if (e.kind() == ErrorKind::OracleFailure) {
      std::cerr << "retry with a different --seed\n";
      return kOracle;
    }
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
