// Acceptance run: one PASS/FAIL line per criterion.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "CLI11.hpp"
#include "codeg/catalog.hpp"
#include "codeg/codegree.hpp"
#include "codeg/dixon.hpp"
#include "codeg/partitions.hpp"
#include "codeg/proof.hpp"
#include "codeg/recheck.hpp"

#ifndef CODEG_CLI_PATH
#define CODEG_CLI_PATH "codeg"
#endif

using namespace codeg;
using Clock = std::chrono::steady_clock;

namespace {

struct Line {
  std::string id;
  bool pass = true;
  std::vector<std::string> notes;
  void need(bool c, const std::string& what) {
    if (!c) {
      pass = false;
      notes.push_back(what);
    }
  }
  void info(const std::string& s) { notes.push_back(s); }
};

std::set<FactoredInt> dotted_set(const std::vector<std::string>& xs) {
  std::set<FactoredInt> s;
  for (const auto& x : xs) s.insert(parse_factored(x));
  return s;
}

const std::vector<std::string> kU33 = {"1", "2^4.3^2.7", "2^5.3^3", "2^4.3^3", "2^5.3^2", "2^5.7", "2^3.3^3", "3^3.7"};
const std::vector<std::string> kU42 = {"1",         "2^6.3^4", "2^5.3^3.5", "2^5.3^4", "2^6.3^3", "2^4.3^4", "2^3.3^3.5",
                                       "2^5.3^3",   "2^3.3^4", "2^6.3^2",   "2^4.3^3", "3^4.5",   "2^6.5"};

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& cmd) {
  RunResult r;
  FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::set<FactoredInt> cli_cod(const std::string& cli, const std::string& data, const std::string& sel) {
  auto r = run("'" + cli + "' --data '" + data + "' cod " + sel);
  std::set<FactoredInt> s;
  std::istringstream in(r.out);
  std::string dotted, dec;
  while (in >> dotted >> dec) s.insert(factorize_u128(parse_u128(dec)));
  return s;
}

const Json* find_case(const Json& rep, const std::string& id) {
  for (const auto& c : rep["cases"])
    if (c["id"] == id) return &c;
  return nullptr;
}

std::vector<Bindings> grid_of(const Json& c) {
  std::vector<Bindings> g;
  for (const auto& p : c["grid"]) g.push_back(jsonio::read_bindings(p));
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::optional<std::string> data;
  std::string cli = CODEG_CLI_PATH;
  app.add_option("--data", data);
  app.add_option("--cli", cli);
  CLI11_PARSE(app, argc, argv);
  const std::string dir = resolve_data_dir(data);
  std::vector<Line> lines;
  auto guard = [&](const std::string& id, const std::function<void(Line&)>& fn) {
    Line l{id};
    try {
      fn(l);
    } catch (const std::exception& e) {
      l.need(false, std::string("exception: ") + e.what());
    }
    lines.push_back(std::move(l));
  };

  Catalog cat;
  try {
    cat = load_catalog(dir);
  } catch (const std::exception& e) {
    std::cout << "FAIL catalog: " << e.what() << "\n";
    return 1;
  }

  guard("AC1", [&](Line& l) {
    auto want3 = dotted_set(kU33), want4 = dotted_set(kU42);
    l.need(want3.size() == 8 && want4.size() == 13, "golden lists malformed");
    auto t0 = Clock::now();
    CharTable t3 = dixon_table(cat.group("U3_3"));
    CharTable t4 = dixon_table(cat.group("U4_2"));
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    l.need(cod_from_table(t3).elements == want3, "oracle cod(U3_3) differs");
    l.need(cod_simple(cat.record("U3_3")).elements == want3, "record cod(U3_3) differs");
    l.need(cli_cod(cli, dir, "U3_3") == want3, "CLI cod(U3_3) differs");
    l.need(cod_from_table(t4).elements == want4, "oracle cod(U4_2) differs");
    l.need(cod_simple(cat.record("U4_2")).elements == want4, "record cod(U4_2) differs");
    l.need(cli_cod(cli, dir, "U4_2") == want4, "CLI cod(U4_2) differs");
    l.need(secs < 60, "oracle time " + std::to_string(secs) + " s");
    std::ostringstream s;
    s.precision(2);
    s << std::fixed << "oracle U3_3+U4_2 " << secs << " s";
    l.info(s.str());
  });

  guard("AC2", [&](Line& l) {
    for (const auto& g : k3_groups()) {
      auto r = oracle_equivalence(cat, g, {});
      l.need(r.ok, g + " oracle/data mismatch");
    }
    l.info("8 groups");
  });

  ProofReport rep;
  bool have_report = false;
  auto t_verify = Clock::now();
  try {
    VerifyOptions vo;
    vo.jobs = std::max(1U, std::thread::hardware_concurrency());
    rep = verify_all(cat, vo);
    have_report = true;
  } catch (const std::exception& e) {
    std::cerr << "verify_all: " << e.what() << "\n";
  }
  double verify_secs = std::chrono::duration<double>(Clock::now() - t_verify).count();

  guard("AC3", [&](Line& l) {
    l.need(have_report, "no report");
    const Json& j = rep.json;
    for (const auto& c : j["cases"])
      if (c["id"].get<std::string>().starts_with("U33.")) l.need(c["verdict"] == "closed", c["id"].get<std::string>() + " open");
    std::vector<Bindings> want;
    for (int q : {4, 8, 16, 32, 64}) want.push_back({{"q", q}});
    for (const char* v : {"U33.case1.validated", "U33.case1.as-printed"}) {
      const Json* c = find_case(j, v);
      l.need(c && grid_of(*c) == want, std::string(v) + " grid differs");
    }
    auto wit = [&](const char* id, const char* w) {
      const Json* c = find_case(j, id);
      l.need(c && c->value("witness", "") == w, std::string(id) + " witness is not " + w);
    };
    wit("U33.case3.L3_4", "320");
    wit("U33.case4.M11", "495");
    wit("U33.case4.J1", "3135");
  });

  guard("AC4", [&](Line& l) {
    auto cert = shape_distinctness_certificate("validated", 14);
    l.need(cert.pairs.size() == 78, "pair count " + std::to_string(cert.pairs.size()));
    for (const auto& p : cert.pairs) l.need(recheck_certificate(p.cert), "pair certificate fails recheck");
    l.need(!hook_disagreement("validated", 14, 60), "formula/hook disagreement");
    auto f = small_shape_formulas("validated");
    auto it = std::find_if(f.begin(), f.end(), [](const auto& x) { return x.shape == "(n-5,3,2)"; });
    l.need(it != f.end() && it->value(14) == 5733, "(n-5,3,2) at 14 is not 5733");
  });

  guard("AC5", [&](Line& l) {
    l.need(have_report, "no report");
    const Json& j = rep.json;
    for (const auto& c : j["cases"])
      if (c["id"].get<std::string>().starts_with("U42.")) l.need(c["verdict"] == "closed", c["id"].get<std::string>() + " open");
    const Json* sz = find_case(j, "U42.suzuki");
    l.need(sz && grid_of(*sz) == std::vector<Bindings>{{{"q2", 8}}}, "Suzuki grid differs");
    const Json* bc = find_case(j, "U42.BC");
    l.need(bc != nullptr, "no BC case");
    if (!bc) return;
    std::vector<Bindings> steinberg;
    for (const auto& b : grid_of(*bc))
      if (b.at("n") >= 3) steinberg.push_back(b);
    l.need(steinberg == std::vector<Bindings>{{{"n", 3}, {"q", 2}}}, "Steinberg grid differs");
    bool w2835 = false, m1080 = false;
    for (const auto& p : (*bc)["points"]) {
      auto b = jsonio::read_bindings(p["params"]);
      if (b == Bindings{{"n", 3}, {"q", 2}}) w2835 = p["outcome"] == "witness" && p["witness"] == "2835";
      if (b == Bindings{{"n", 2}, {"q", 3}}) {
        m1080 = p["outcome"] == "match";
        bool has = false;
        for (const auto& v : p["values_in_target"]) has = has || v["value"] == "1080";
        m1080 = m1080 && has;
      }
    }
    l.need(w2835, "BC (3,2) witness is not 2835");
    l.need(m1080, "BC (2,3) is not the match point with 1080");
  });

  guard("AC6", [&](Line& l) {
    FactoredInt gl52 = gl_order(5, 2);
    l.need(gl52.value() == 9999360, "|GL(5,2)| != 9999360");
    l.need(gl52.value() % 6048 == 2016, "9999360 mod 6048 != 2016");
    l.need(gl52.value() % 25920 != 0, "25920 divides |GL(5,2)|");
    for (const char* r : {"GL6_2", "GL4_3"}) {
      const DegreeData& d = cat.record(r);
      u128 s = 0;
      for (auto x : d.degrees) s += static_cast<u128>(x) * x;
      l.need(!d.partial && s == d.order.value128(), std::string(r) + " sum of squares fails");
    }
    l.need(have_report, "no report");
    const Json* aut = find_case(rep.json, "ext.U4_2.aut-checks");
    l.need(aut && (*aut)["verdict"] == "closed", "aut-checks open");
    if (aut)
      for (const auto& g : (*aut)["cd_noncontainment"]) l.need(g["witness_degree"].is_number(), "no witness degree");
    const Json* cen = find_case(rep.json, "ext.U4_2.central");
    l.need(cen && (*cen)["verdict"] == "closed" && !(*cen)["outside_target"].empty(), "2.U4(2) check open");
    for (const auto& c : rep.json["cases"])
      if (c["id"].get<std::string>().starts_with("ext.")) l.need(c["verdict"] == "closed", c["id"].get<std::string>() + " open");
  });

  guard("AC7", [&](Line& l) {
    for (const char* g : {"S3", "S4", "A4", "D8", "Q8", "SL2_3", "C6"}) {
      auto r = codegree_inclusion_suite(cat.group(g));
      l.need(r.pass, std::string(g) + ": " + r.failure);
    }
    std::size_t simple = 0;
    for (const auto& [n, d] : cat.records) {
      if (!d.simple || d.partial) continue;
      ++simple;
      auto cod = cod_simple(d);
      l.need(cod.size() == d.cd().size(), n + ": |cod| != |cd|");
      for (auto x : d.degrees)
        l.need(fi_mul(fi_div_exact(d.order, factorize(static_cast<std::int64_t>(x))), factorize(static_cast<std::int64_t>(x))) ==
                   d.order,
               n + ": cod*deg != |G|");
    }
    for (const auto& g : k3_groups()) {
      auto cod = cod_simple(cat.record(g));
      u128 m = cod.max().value128();
      l.need(m * m >= cat.record(g).order.value128(), g + ": max cod < sqrt|G|");
    }
    l.info(std::to_string(simple) + " simple records");
  });

  guard("AC8", [&](Line& l) {
    namespace fs = std::filesystem;
    fs::path tmp = fs::temp_directory_path() / ("codeg_acceptance_" + std::to_string(::getpid()) + ".json");
    auto t0 = Clock::now();
    auto v = run("'" + cli + "' --data '" + dir + "' verify --target both -o '" + tmp.string() + "'");
    auto r = run("'" + cli + "' recheck '" + tmp.string() + "'");
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    fs::remove(tmp);
    l.need(v.code == 0, "verify exit " + std::to_string(v.code));
    l.need(r.code == 0, "recheck exit " + std::to_string(r.code));
    l.need(secs < 300, "end-to-end took " + std::to_string(secs) + " s");
    std::ostringstream s;
    s.precision(2);
    s << std::fixed << "verify+recheck " << secs << " s, in-process verify " << verify_secs << " s";
    l.info(s.str());
  });

  bool all = true;
  for (const auto& l : lines) {
    all = all && l.pass;
    std::cout << (l.pass ? "PASS " : "FAIL ") << l.id;
    for (const auto& n : l.notes) std::cout << " | " << n;
    std::cout << "\n";
  }
  return all ? 0 : 1;
}
