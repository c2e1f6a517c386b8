#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "dlkb/knowledge_base.hpp"
#include "dlkb/reasoner.hpp"
#include "dlkb/store.hpp"

namespace dlkb {

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Flat key=value file; '#' starts a comment line.
struct ServiceConfig {
  std::string ontology_uri;
  std::filesystem::path store_path;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::chrono::seconds session_ttl{1800};
};

// Relative store paths and ontology file paths resolve against base_dir.
ServiceConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ServiceConfig load_config(const std::filesystem::path& path);

// A synchronized, classified knowledge base. Never modified once published.
struct Snapshot {
  std::uint64_t generation = 0;
  std::shared_ptr<const Reasoner> reasoner;
  std::string text;  // native serialization of the synchronized KB

  const KnowledgeBase& kb() const { return reasoner->kb(); }
  const Taxonomy& taxonomy() const { return reasoner->classify(); }
};

class KbCache {
 public:
  std::shared_ptr<const Snapshot> current() const;
  std::uint64_t generation() const;
  // Wraps a consistent, classified reasoner as the next generation.
  std::shared_ptr<const Snapshot> publish(std::shared_ptr<const Reasoner> reasoner);

 private:
  mutable std::mutex mutex_;
  std::shared_ptr<const Snapshot> current_;
  std::uint64_t generation_ = 0;
};

class Sessions {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;
  explicit Sessions(std::chrono::seconds ttl, Clock clock = std::chrono::steady_clock::now);

  // 128 random bits, hex encoded.
  std::string issue(const std::string& username);
  // Username for a live token; expired tokens are dropped.
  std::optional<std::string> validate(const std::string& token);
  void revoke(const std::string& token);

 private:
  struct Entry {
    std::string username;
    std::chrono::steady_clock::time_point expiry;
  };
  std::chrono::seconds ttl_;
  Clock clock_;
  std::mutex mutex_;
  std::map<std::string, Entry> sessions_;
};

struct HttpRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> params;
  std::string authorization;  // raw Authorization header
  std::string body;
};

struct HttpReply {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::uint64_t generation = 0;  // snapshot a read was answered from, 0 if none
};

class Service {
 public:
  // The store file is the database: reads load it, writes replace it.
  Service(KnowledgeBase core, std::filesystem::path store_path,
          std::chrono::seconds session_ttl = std::chrono::seconds(1800),
          ReasonerOptions options = {});
  static std::unique_ptr<Service> from_config(const ServiceConfig& config);

  HttpReply handle(const HttpRequest& request);

  // Synchronize, check consistency, classify, publish. Throws on failure and
  // leaves the cache untouched.
  std::shared_ptr<const Snapshot> synchronize_now();
  // The current snapshot, synchronizing first if there is none yet.
  std::shared_ptr<const Snapshot> snapshot();

  const KnowledgeBase& core() const { return core_; }
  const KbCache& cache() const { return cache_; }
  Sessions& sessions() { return sessions_; }
  Store store() const;

 private:
  HttpReply locations();
  HttpReply dangers(const HttpRequest& request);
  HttpReply questions(const HttpRequest& request);
  HttpReply ontology(const HttpRequest& request);
  HttpReply sync();
  HttpReply login(const HttpRequest& request);
  HttpReply conditions();
  HttpReply update_conditions(const HttpRequest& request);
  HttpReply status();

  KnowledgeBase core_;
  std::string core_text_;
  std::filesystem::path store_path_;
  ReasonerOptions options_;
  KbCache cache_;
  Sessions sessions_;
  std::mutex write_mutex_;  // serializes synchronization and store updates
};

// Blocking HTTP/1.1 front end for a Service.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  // Port 0 picks a free port. Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  void listen();  // returns after stop()
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace dlkb
