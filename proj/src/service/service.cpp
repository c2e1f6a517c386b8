#include "dlkb/service.hpp"

#include <openssl/rand.h>

#include <algorithm>
#include <charconv>

#include "dlkb/io.hpp"
#include "dlkb/text_format.hpp"
#include "httplib.h"
#include "json.hpp"

namespace dlkb {

using nlohmann::json;

// ---- config ------------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

int parse_int(const std::string& s, int line, const char* key) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || v < 0) {
    throw ConfigError("line " + std::to_string(line) + ": " + key + " must be a non-negative integer");
  }
  return v;
}

}  // namespace

ServiceConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  ServiceConfig c;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "ontology_uri") {
      c.ontology_uri = value;
    } else if (key == "store_path") {
      c.store_path = value;
    } else if (key == "listen_address") {
      const auto colon = value.rfind(':');
      if (colon == std::string::npos) {
        throw ConfigError("line " + std::to_string(line_no) + ": listen_address must be host:port");
      }
      c.host = value.substr(0, colon);
      c.port = parse_int(value.substr(colon + 1), line_no, "port");
      if (c.port > 65535) throw ConfigError("line " + std::to_string(line_no) + ": port out of range");
    } else if (key == "session_ttl") {
      c.session_ttl = std::chrono::seconds(parse_int(value, line_no, "session_ttl"));
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  if (c.ontology_uri.empty()) throw ConfigError("ontology_uri is not set");
  if (c.store_path.empty()) throw ConfigError("store_path is not set");
  if (!base_dir.empty()) {
    if (c.store_path.is_relative()) c.store_path = base_dir / c.store_path;
    const bool remote = c.ontology_uri.find("://") != std::string::npos && !c.ontology_uri.starts_with("file://");
    std::string path = c.ontology_uri;
    if (path.starts_with("file://")) path = path.substr(7);
    if (!remote && std::filesystem::path(path).is_relative()) c.ontology_uri = (base_dir / path).string();
  }
  return c;
}

ServiceConfig load_config(const std::filesystem::path& path) {
  try {
    return parse_config(read_file(path), path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

// ---- cache and sessions ---------------------------------------------------------

std::shared_ptr<const Snapshot> KbCache::current() const {
  std::lock_guard lock(mutex_);
  return current_;
}

std::uint64_t KbCache::generation() const {
  std::lock_guard lock(mutex_);
  return generation_;
}

std::shared_ptr<const Snapshot> KbCache::publish(std::shared_ptr<const Reasoner> reasoner) {
  auto snap = std::make_shared<Snapshot>();
  snap->reasoner = std::move(reasoner);
  snap->text = serialize_text(snap->kb());
  std::lock_guard lock(mutex_);
  snap->generation = ++generation_;
  current_ = snap;
  return snap;
}

Sessions::Sessions(std::chrono::seconds ttl, Clock clock) : ttl_(ttl), clock_(std::move(clock)) {}

std::string Sessions::issue(const std::string& username) {
  static const char* hex = "0123456789abcdef";
  std::lock_guard lock(mutex_);
  for (;;) {
    unsigned char bytes[16];
    if (RAND_bytes(bytes, sizeof bytes) != 1) throw Error("random source unavailable");
    std::string token;
    for (unsigned char b : bytes) {
      token += hex[b >> 4];
      token += hex[b & 15];
    }
    if (sessions_.emplace(token, Entry{username, clock_() + ttl_}).second) return token;
  }
}

std::optional<std::string> Sessions::validate(const std::string& token) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(token);
  if (it == sessions_.end()) return std::nullopt;
  if (clock_() >= it->second.expiry) {
    sessions_.erase(it);
    return std::nullopt;
  }
  return it->second.username;
}

void Sessions::revoke(const std::string& token) {
  std::lock_guard lock(mutex_);
  sessions_.erase(token);
}

// ---- service ------------------------------------------------------------------

namespace {

HttpReply reply_json(int status, const json& body) {
  HttpReply r;
  r.status = status;
  r.body = body.dump();
  return r;
}

HttpReply error(int status, const std::string& message) { return reply_json(status, {{"error", message}}); }

std::string param(const HttpRequest& req, const char* name, const std::string& fallback = {}) {
  auto it = req.params.find(name);
  return it == req.params.end() ? fallback : it->second;
}

bool valid_lang(const std::string& lang) { return lang == "en" || lang == "pl"; }

Concept danger_query(const std::string& individual) {
  return Concept::conjunction(
      {Concept::atomic("TrafficDanger"),
       Concept::exists({"hasCondition", false},
                       Concept::exists({"hasLocation", false}, Concept::one_of({individual})))});
}

}  // namespace

Service::Service(KnowledgeBase core, std::filesystem::path store_path, std::chrono::seconds session_ttl,
                 ReasonerOptions options)
    : core_(std::move(core)),
      core_text_(serialize_text(core_)),
      store_path_(std::move(store_path)),
      options_(options),
      sessions_(session_ttl) {}

std::unique_ptr<Service> Service::from_config(const ServiceConfig& config) {
  KnowledgeBase core = load_ontology(config.ontology_uri);
  // fail at boot rather than on the first request
  load_store(config.store_path);
  return std::make_unique<Service>(std::move(core), config.store_path, config.session_ttl);
}

Store Service::store() const { return load_store(store_path_); }

std::shared_ptr<const Snapshot> Service::synchronize_now() {
  std::lock_guard lock(write_mutex_);
  auto reasoner = std::make_shared<const Reasoner>(synchronize(core_, store()), options_);
  if (!reasoner->is_consistent()) {
    throw InconsistentKb();
  }
  reasoner->classify();
  return cache_.publish(std::move(reasoner));
}

std::shared_ptr<const Snapshot> Service::snapshot() {
  if (auto snap = cache_.current()) return snap;
  std::unique_lock lock(write_mutex_, std::defer_lock);
  // another request may have finished the first sync while we waited
  lock.lock();
  if (auto snap = cache_.current()) return snap;
  lock.unlock();
  return synchronize_now();
}

HttpReply Service::handle(const HttpRequest& req) {
  try {
    const std::string& p = req.path;
    const bool get = req.method == "GET";
    const bool post = req.method == "POST";
    if (p == "/api/locations" && get) return locations();
    if (p == "/api/dangers" && get) return dangers(req);
    if (p == "/api/questions" && get) return questions(req);
    if (p == "/api/ontology" && get) return ontology(req);
    if (p == "/api/status" && get) return status();
    if (p == "/api/conditions" && get) return conditions();
    if (p == "/api/conditions" && post) return update_conditions(req);
    if (p == "/api/sync" && post) return sync();
    if (p == "/api/login" && post) return login(req);
    for (const char* known : {"/api/locations", "/api/dangers", "/api/questions", "/api/ontology",
                              "/api/status", "/api/conditions", "/api/sync", "/api/login"}) {
      if (p == known) return error(405, "method not allowed");
    }
    return error(404, "no such endpoint");
  } catch (const Error& e) {
    return error(500, e.what());
  }
}

HttpReply Service::locations() {
  const Store s = store();
  json out = {{"districts", json::array()}, {"streets", json::array()}, {"postal_codes", json::array()}};
  for (const auto& d : s.districts) out["districts"].push_back({{"id", d.id}, {"name", d.name}});
  for (const auto& st : s.streets) out["streets"].push_back({{"id", st.id}, {"name", st.name}});
  for (const auto& p : s.postal_codes) out["postal_codes"].push_back({{"id", p.id}, {"value", p.value}});
  json s2d = json::array(), s2p = json::array();
  for (const auto& r : s.street_2_district) s2d.push_back({{"street_id", r.street_id}, {"district_id", r.district_id}});
  for (const auto& r : s.street_2_postal_code) {
    s2p.push_back({{"street_id", r.street_id}, {"postal_code_id", r.postal_code_id}});
  }
  out["mappings"] = {{"street_2_district", s2d}, {"street_2_postal_code", s2p}};
  return reply_json(200, out);
}

HttpReply Service::dangers(const HttpRequest& req) {
  const std::string scope = param(req, "scope");
  const std::string name = param(req, "name");
  const std::string lang = param(req, "lang", "en");
  if (scope != "postal_code" && scope != "street" && scope != "district") {
    return error(400, "scope must be postal_code, street or district");
  }
  if (!valid_lang(lang)) return error(400, "lang must be en or pl");
  if (name.empty()) return error(400, "name is required");

  const Store s = store();
  std::string individual;
  if (scope == "postal_code") {
    if (s.postal_code_by_value(name)) individual = postal_code_individual(name);
  } else if (scope == "street") {
    for (const auto& st : s.streets) {
      if (st.name == name) individual = st.name;
    }
  } else {
    for (const auto& d : s.districts) {
      if (d.name == name) individual = d.name;
    }
  }
  if (individual.empty()) return error(404, "unknown " + scope + " '" + name + "'");

  const auto snap = snapshot();
  json out = json::array();
  // locations added after the last sync are not in the snapshot yet
  if (snap->kb().individual_names().contains(individual)) {
    const QueryAnswer a = snap->reasoner->dl_query(danger_query(individual));
    std::set<std::string> names = a.all_subclasses;
    names.insert(a.equivalents.begin(), a.equivalents.end());
    for (const auto& n : names) out.push_back({{"class_name", n}, {"label", snap->kb().label(n, lang)}});
  }
  HttpReply r = reply_json(200, out);
  r.generation = snap->generation;
  return r;
}

HttpReply Service::questions(const HttpRequest& req) {
  const std::string lang = param(req, "lang", "en");
  if (!valid_lang(lang)) return error(400, "lang must be en or pl");
  const auto snap = snapshot();
  const Taxonomy& t = snap->taxonomy();
  json out = json::array();
  for (const auto& cls : core_.concept_names()) {
    if (!is_defined_class(cls, core_)) continue;
    std::set<std::string> answers;
    if (auto node = t.node_of(cls); node && *node != Taxonomy::kBottom) {
      for (std::size_t d : t.descendants(*node)) {
        if (d == Taxonomy::kBottom) continue;
        answers.insert(t.nodes()[d].names.begin(), t.nodes()[d].names.end());
      }
    }
    json labels = json::object();
    labels[cls] = snap->kb().label(cls, lang);
    for (const auto& a : answers) labels[a] = snap->kb().label(a, lang);
    out.push_back({{"question_class", cls}, {"answers", answers}, {"labels", labels}});
  }
  HttpReply r = reply_json(200, out);
  r.generation = snap->generation;
  return r;
}

HttpReply Service::ontology(const HttpRequest& req) {
  const std::string variant = param(req, "variant", "core");
  HttpReply r;
  r.content_type = "text/plain; charset=utf-8";
  if (variant == "core") {
    r.body = core_text_;
  } else if (variant == "synchronized") {
    const auto snap = cache_.current();
    if (!snap) return error(409, "no synchronized ontology yet; POST /api/sync first");
    r.body = snap->text;
    r.generation = snap->generation;
  } else {
    return error(400, "variant must be core or synchronized");
  }
  return r;
}

HttpReply Service::sync() {
  try {
    const auto snap = synchronize_now();
    HttpReply r = reply_json(200, {{"generation", snap->generation}});
    r.generation = snap->generation;
    return r;
  } catch (const Error& e) {
    return error(500, std::string("synchronization failed: ") + e.what());
  }
}

HttpReply Service::status() {
  const auto snap = cache_.current();
  return reply_json(200, {{"generation", snap ? snap->generation : 0}, {"synchronized", snap != nullptr}});
}

HttpReply Service::login(const HttpRequest& req) {
  const json body = json::parse(req.body, nullptr, false);
  if (!body.is_object() || !body.contains("username") || !body["username"].is_string() ||
      !body.contains("password") || !body["password"].is_string()) {
    return error(400, "expected {\"username\": ..., \"password\": ...}");
  }
  const std::string user = body["username"];
  if (!verify_credentials(store(), user, body["password"].get<std::string>())) {
    return error(401, "invalid username or password");
  }
  return reply_json(200, {{"token", sessions_.issue(user)}, {"username", user}});
}

HttpReply Service::conditions() {
  const Store s = store();
  json conds = json::array();
  for (const auto& c : s.traffic_conditions) {
    conds.push_back({{"id", c.id},
                     {"parent_id", c.parent_id ? json(*c.parent_id) : json(nullptr)},
                     {"name", c.name},
                     {"description", c.description}});
  }
  std::map<std::string, std::set<std::string>> by_code;
  for (const auto& p : s.postal_codes) by_code[p.value];
  for (const auto& a : s.traffic_condition_2_postal_code) {
    by_code[s.postal_code(a.postal_code_id)->value].insert(s.condition(a.traffic_condition_id)->name);
  }
  return reply_json(200, {{"conditions", conds}, {"assignments", by_code}});
}

HttpReply Service::update_conditions(const HttpRequest& req) {
  const std::string prefix = "Bearer ";
  if (!req.authorization.starts_with(prefix) || !sessions_.validate(req.authorization.substr(prefix.size()))) {
    return error(401, "a valid session token is required");
  }
  const json body = json::parse(req.body, nullptr, false);
  if (!body.is_object() || !body.contains("postal_code") || !body["postal_code"].is_string() ||
      !body.contains("condition_names") || !body["condition_names"].is_array()) {
    return error(400, "expected {\"postal_code\": ..., \"condition_names\": [...]}");
  }
  std::lock_guard lock(write_mutex_);
  const Store s = store();
  const std::string value = body["postal_code"];
  const PostalCode* code = s.postal_code_by_value(value);
  if (!code) return error(404, "unknown postal code '" + value + "'");
  std::set<int> ids;
  std::set<std::string> names;
  for (const auto& n : body["condition_names"]) {
    if (!n.is_string()) return error(400, "condition_names must be strings");
    const TrafficCondition* c = s.condition_by_name(n.get<std::string>());
    if (!c) return error(400, "unknown traffic condition '" + n.get<std::string>() + "'");
    ids.insert(c->id);
    names.insert(c->name);
  }
  save_store(update_assignments(s, code->id, ids), store_path_);
  return reply_json(200, {{"postal_code", value}, {"condition_names", names}});
}

// ---- HTTP front end -----------------------------------------------------------

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;

  explicit Impl(Service& s) : service(s) {
    auto handler = [this](const httplib::Request& in, httplib::Response& out) {
      HttpRequest req;
      req.method = in.method;
      req.path = in.path;
      for (const auto& [k, v] : in.params) req.params.emplace(k, v);
      req.authorization = in.get_header_value("Authorization");
      req.body = in.body;
      const HttpReply r = service.handle(req);
      out.status = r.status;
      if (r.generation) out.set_header("X-Kb-Generation", std::to_string(r.generation));
      out.set_header("Access-Control-Allow-Origin", "*");
      out.set_content(r.body, r.content_type);
    };
    server.Get(".*", handler);
    server.Post(".*", handler);
    server.Options(".*", [](const httplib::Request&, httplib::Response& out) {
      out.status = 204;
      out.set_header("Access-Control-Allow-Origin", "*");
      out.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      out.set_header("Access-Control-Allow-Headers", "Authorization, Content-Type");
    });
    server.set_exception_handler([](const httplib::Request&, httplib::Response& out, std::exception_ptr ep) {
      std::string what = "internal error";
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        what = e.what();
      } catch (...) {
      }
      out.status = 500;
      out.set_content(json{{"error", what}}.dump(), "application/json");
    });
  }
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {}
HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }
void HttpServer::stop() { impl_->server.stop(); }
bool HttpServer::running() const { return impl_->server.is_running(); }

}  // namespace dlkb
