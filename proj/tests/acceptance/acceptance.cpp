// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "dlkb/io.hpp"
#include "dlkb/rdfxml.hpp"
#include "dlkb/reasoner.hpp"
#include "dlkb/service.hpp"
#include "dlkb/store.hpp"
#include "dlkb/text_format.hpp"
#include "generators.hpp"
#include "httplib.h"
#include "json.hpp"
#include "oracle.hpp"

using namespace dlkb;
using nlohmann::json;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Failed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failed(what);
}

std::string source(const char* rel) { return (fs::path(DLKB_SOURCE_DIR) / rel).string(); }
KnowledgeBase traffic() { return parse_text(read_file(source("data/traffic.kb"))); }
Concept atom(const std::string& n) { return Concept::atomic(n); }

std::string join(const std::set<std::string>& s) {
  std::string out = "{";
  for (const auto& n : s) out += (out.size() > 1 ? ", " : "") + n;
  return out + "}";
}

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct TempDir {
  fs::path path = fs::temp_directory_path() / ("dlkb_acceptance_" + std::to_string(::getpid()));
  TempDir() { fs::create_directories(path); }
  ~TempDir() { fs::remove_all(path); }
};

Concept danger_query(const std::string& individual) {
  return Concept::conjunction(
      {atom("TrafficDanger"),
       Concept::exists({"hasCondition", false},
                       Concept::exists({"hasLocation", false}, Concept::one_of({individual})))});
}

// ---- criteria ---------------------------------------------------------------

std::string classification() {
  const auto t0 = Clock::now();
  Reasoner r(traffic());
  const Taxonomy& t = r.classify();
  const double ms = ms_since(t0);
  const auto subs = t.direct_subclasses("LowFrictionDanger");
  expect(subs == std::set<std::string>{"WetSurfaceDanger", "FreezingSurfaceDanger", "MeltingAsphaltDanger"},
         "LowFrictionDanger direct subclasses " + join(subs));
  expect(t.is_subclass("LowFrictionDanger", "WeatherDanger"), "LowFrictionDanger not under WeatherDanger");
  expect(ms < 1000, "took " + std::to_string(ms) + " ms");
  std::ostringstream s;
  s << "LowFrictionDanger > " << join(subs) << ", under WeatherDanger, " << static_cast<int>(ms) << " ms";
  return s.str();
}

std::string stare_miasto() {
  const auto t0 = Clock::now();
  Service service(traffic(), source("data/sample_store.json"));
  HttpRequest req{"GET", "/api/dangers", {{"scope", "district"}, {"name", "StareMiasto"}}, "", ""};
  const HttpReply reply = service.handle(req);
  const double ms = ms_since(t0);
  expect(reply.status == 200, "status " + std::to_string(reply.status) + ": " + reply.body);
  std::set<std::string> got;
  for (const auto& d : json::parse(reply.body)) got.insert(d["class_name"].get<std::string>());
  expect(got == std::set<std::string>{"TrafficCongestionDanger"}, "dangers " + join(got));
  expect(ms < 1000, "took " + std::to_string(ms) + " ms");
  return "district StareMiasto -> " + join(got) + ", " + std::to_string(static_cast<int>(ms)) + " ms";
}

std::string closure_pair() {
  KnowledgeBase kb = traffic();
  const RoleExpr precip{"hasPrecipitationCondition", false};
  const Concept only =
      Concept::forall(precip, Concept::disjunction({atom("FoggyCondition"), atom("RainyCondition"),
                                                    atom("SnowyCondition")}));
  const bool before = subsumes(only, atom("PoorVisibilityDanger"), kb);
  kb.add(build_closure_axiom("PoorVisibilityDanger", precip, kb));
  const bool after = subsumes(only, atom("PoorVisibilityDanger"), kb);
  std::string pair = std::string("(") + (before ? "true" : "false") + ", " + (after ? "true" : "false") + ")";
  expect(!before && after, "pair " + pair);
  return "PoorVisibilityDanger universal subsumption " + pair;
}

std::string goodcpu() {
  const Realization real = realize(parse_text(read_file(source("data/goodcpu.kb"))));
  const auto it = real.find("Itanium");
  expect(it != real.end(), "Itanium missing");
  expect(it->second == std::set<std::string>{"GoodCPU"}, "Itanium -> " + join(it->second));
  return "Itanium -> " + join(it->second);
}

std::string inverse_role() {
  const KnowledgeBase kb = synchronize(traffic(), load_store(source("data/sample_store.json")));
  bool asserted = false;
  for (const auto& a : kb.abox()) {
    if (const auto* ra = std::get_if<RoleAssertion>(&a)) {
      asserted |= ra->role.name == "hasLocation" && ra->subject == "c30-147" && ra->object == "ArmiiKrajowej";
    }
  }
  expect(asserted, "hasLocation(c30-147, ArmiiKrajowej) not asserted");
  const auto found = instances_of(Concept::exists({"isLocationOf", false}, Concept::one_of({"c30-147"})), kb);
  expect(found.contains("ArmiiKrajowej"), "instances " + join(found));
  return "instances of isLocationOf some {c30-147}: " + join(found);
}

std::string oracle_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937 rng(20240607);
  const testing::AlcShape shape;  // depth 4, atoms A B C, roles r s
  const int n = 2000;
  int disagreements = 0, satisfiable = 0;
  std::string first;
  for (int i = 0; i < n; ++i) {
    const Concept c = testing::random_alc(rng, shape);
    const bool expected = testing::oracle_satisfiable(c);
    satisfiable += expected;
    if (is_satisfiable(c, KnowledgeBase{}) != expected) {
      if (!disagreements++) first = to_text(c);
    }
  }
  const double s = ms_since(t0) / 1000;
  expect(disagreements == 0, std::to_string(disagreements) + " disagreements, first: " + first);
  expect(s < 60, "took " + std::to_string(s) + " s");
  std::ostringstream out;
  out << n << " concepts, " << satisfiable << " satisfiable, 0 disagreements, " << std::fixed
      << std::setprecision(2) << s << " s";
  return out.str();
}

std::string equivalence_law() {
  std::mt19937 rng(1303);
  testing::AlcShape shape;
  shape.max_depth = 3;
  Reasoner r{KnowledgeBase{}};
  const RoleExpr role{"r", false};
  int held = 0;
  for (int i = 0; i < 100; ++i) {
    const Concept c = testing::random_alc(rng, shape), d = testing::random_alc(rng, shape);
    const Concept lhs = Concept::conjunction({Concept::forall(role, c), Concept::forall(role, d)});
    const Concept rhs = Concept::forall(role, Concept::conjunction({c, d}));
    held += r.subsumes(lhs, rhs) && r.subsumes(rhs, lhs);
  }
  expect(held == 100, std::to_string(held) + "/100");
  return "100/100 mutual subsumptions";
}

template <class T>
std::size_t count_of(const KnowledgeBase& kb) {
  std::size_t n = 0;
  for (const auto& ax : kb.tbox()) n += std::holds_alternative<T>(ax);
  return n;
}

void round_trips(const KnowledgeBase& kb, const std::string& name) {
  const std::string text = serialize_text(kb);
  expect(serialize_text(parse_text(text)) == text, name + ": text serialization is not a fixpoint");
  const KnowledgeBase back = import_rdfxml(export_rdfxml(kb));
  expect(logically_identical(kb, back), name + ": RDF/XML round trip changed the KB");
  expect(export_rdfxml(back) == export_rdfxml(kb), name + ": RDF/XML export is not a fixpoint");
}

std::string round_trip() {
  round_trips(traffic(), "traffic.kb");

  const KnowledgeBase ex = import_rdfxml(read_file(source("data/snippets/poor_visibility_existentials.xml")));
  expect(ex.tbox().size() == 3 && count_of<SubClassOf>(ex) == 3, "existential snippet axiom count");
  round_trips(ex, "existential snippet");

  const KnowledgeBase cl = import_rdfxml(read_file(source("data/snippets/poor_visibility_closure.xml")));
  expect(cl.tbox().size() == 1 && count_of<SubClassOf>(cl) == 1, "closure snippet axiom count");
  const auto& sub = std::get<SubClassOf>(cl.tbox()[0]);
  expect(sub.super.is(ConceptKind::ForAll) && sub.super.child().is(ConceptKind::Or),
         "closure snippet is not a universal over a union");
  round_trips(cl, "closure snippet");

  const KnowledgeBase cpu = import_rdfxml(read_file(source("data/snippets/goodcpu.xml")));
  expect(cpu.tbox().size() == 1 && count_of<EquivalentClasses>(cpu) == 1, "GoodCPU snippet axiom count");
  round_trips(cpu, "GoodCPU snippet");
  return "bundled ontology fixpoint; snippets: 3 SubClassOf, 1 ForAll over Or, 1 EquivalentClasses";
}

// HTTP service over a private copy of the sample store.
struct Running {
  TempDir dir;
  std::unique_ptr<Service> service;
  std::unique_ptr<HttpServer> http;
  std::thread thread;
  int port = -1;

  Running() {
    fs::copy_file(source("data/sample_store.json"), dir.path / "store.json");
    service = std::make_unique<Service>(traffic(), dir.path / "store.json");
    http = std::make_unique<HttpServer>(*service);
    port = http->bind("127.0.0.1", 0);
    expect(port > 0, "cannot bind");
    thread = std::thread([this] { http->listen(); });
    while (!http->running()) std::this_thread::yield();
  }
  ~Running() {
    http->stop();
    thread.join();
  }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port);
    c.set_read_timeout(60);
    return c;
  }
  httplib::Result post(const std::string& path, const json& body, const std::string& token = {}) const {
    httplib::Headers h;
    if (!token.empty()) h.emplace("Authorization", "Bearer " + token);
    return client().Post(path, h, body.dump(), "application/json");
  }
  std::set<std::string> dangers(const std::string& scope, const std::string& name) const {
    auto r = client().Get("/api/dangers?scope=" + scope + "&name=" + name);
    expect(r && r->status == 200, "dangers request failed for " + name);
    std::set<std::string> out;
    for (const auto& d : json::parse(r->body)) out.insert(d["class_name"].get<std::string>());
    return out;
  }
};

bool includes(const std::set<std::string>& big, const std::set<std::string>& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::string service_contract() {
  Running svc;
  const Store s = svc.service->store();

  // rollup on every chain of the sample store
  int chains = 0;
  for (const auto& sp : s.street_2_postal_code) {
    const auto pd = svc.dangers("postal_code", s.postal_code(sp.postal_code_id)->value);
    const auto sd = svc.dangers("street", s.street(sp.street_id)->name);
    expect(includes(sd, pd), "rollup postal code -> street");
    for (const auto& sdist : s.street_2_district) {
      if (sdist.street_id != sp.street_id) continue;
      const auto dd = svc.dangers("district", s.district(sdist.district_id)->name);
      expect(includes(dd, sd), "rollup street -> district");
      ++chains;
    }
  }

  auto unauth = svc.post("/api/conditions", {{"postal_code", "30-020"}, {"condition_names", json::array()}});
  expect(unauth && unauth->status == 401, "update without token was not rejected with 401");

  auto login = svc.post("/api/login", {{"username", "sa"}, {"password", "traffic"}});
  expect(login && login->status == 200, "login failed");
  const std::string token = json::parse(login->body)["token"];
  const json on = {{"postal_code", "30-020"}, {"condition_names", {"HighCongestionCondition"}}};
  const json off = {{"postal_code", "30-020"}, {"condition_names", json::array()}};

  std::mutex m;
  std::map<std::uint64_t, bool> state{{svc.service->snapshot()->generation, true}};
  std::vector<std::pair<std::uint64_t, bool>> seen;
  std::atomic<bool> done{false};
  std::thread reader([&] {
    auto c = svc.client();
    while (!done) {
      auto r = c.Get("/api/dangers?scope=district&name=StareMiasto");
      if (!r || r->status != 200) continue;
      std::lock_guard lock(m);
      seen.emplace_back(std::stoull(r->get_header_value("X-Kb-Generation")),
                        r->body.find("TrafficCongestionDanger") != std::string::npos);
    }
  });
  int ok_iterations = 0;
  for (int i = 0; i < 100; ++i) {
    const bool assigned = i % 2 == 1;
    auto u = svc.post("/api/conditions", assigned ? on : off, token);
    auto r = svc.post("/api/sync", json::object());
    if (!u || u->status != 200 || !r || r->status != 200) continue;
    std::lock_guard lock(m);
    state[json::parse(r->body)["generation"].get<std::uint64_t>()] = assigned;
    ++ok_iterations;
  }
  done = true;
  reader.join();
  int mixed = 0;
  for (const auto& [gen, has] : seen) {
    if (!state.contains(gen) || state.at(gen) != has) ++mixed;
  }
  expect(ok_iterations == 100, std::to_string(ok_iterations) + "/100 sync iterations succeeded");
  expect(mixed == 0, std::to_string(mixed) + " of " + std::to_string(seen.size()) + " reads mixed generations");
  return std::to_string(chains) + " rollup chains monotone; 401 without token; atomicity 100/100 (" +
         std::to_string(seen.size()) + " concurrent reads)";
}

std::string credentials() {
  const Store s = load_store(source("data/sample_store.json"));
  // digest computed with Python's hashlib when the store was written
  expect(s.access.size() == 1 && s.access[0].password_digest == "c8ab51895da8a2a3ea04f31bd7e317af88596327",
         "shipped digest changed");
  expect(sha1_hex("abc") == "a9993e364706816aba3e25717850c26c9cd0d89d", "SHA-1 test vector");
  expect(verify_credentials(s, "sa", "traffic"), "sa/traffic rejected");
  expect(!verify_credentials(s, "sa", "Traffic"), "wrong password accepted");
  return "verify_credentials(sa, traffic) = true";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<std::string()>>> criteria = {
      {"bundled-ontology classification", classification},
      {"StareMiasto end to end", stare_miasto},
      {"open world and closure", closure_pair},
      {"GoodCPU realization", goodcpu},
      {"inverse role inference", inverse_role},
      {"oracle equivalence", oracle_equivalence},
      {"forall over conjunction", equivalence_law},
      {"round trips", round_trip},
      {"service contract", service_contract},
      {"credentials", credentials},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string verdict, detail;
    try {
      detail = criteria[i].second();
      verdict = "PASS";
    } catch (const std::exception& e) {
      detail = e.what();
      verdict = "FAIL";
      ++failed;
    }
    std::cout << verdict << "  " << (i + 1) << ". " << criteria[i].first << ": " << detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
