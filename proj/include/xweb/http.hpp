#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xweb/bench.hpp"

namespace xweb {

/// Generic REST backend. Paths are templates: {name} expands to the document
/// name, {id} to the query id.
struct HttpDriverConfig {
  std::string id = "http";
  std::string base_url;  // http://host:port[/prefix]
  std::string load_method = "PUT";
  std::string load_path = "/documents/{name}";
  std::string query_method = "POST";
  std::string query_path = "/queries/{id}";
  std::string reset_method;  // empty: reset() is a no-op
  std::string reset_path;
  std::string auth_header;  // "Name: value"
  bool comparable = true;   // responses are <result> documents
  std::chrono::milliseconds connect_timeout{5000};
};

/// `key = value` lines; '#' starts a comment. Throws ParameterError.
HttpDriverConfig parse_http_config(std::string_view text);
HttpDriverConfig load_http_config(const std::filesystem::path& file);

class HttpDriver : public Driver {
 public:
  explicit HttpDriver(HttpDriverConfig config);
  ~HttpDriver() override;

  std::string id() const override { return config_.id; }
  bool returns_comparable_rows() const override { return config_.comparable; }
  void reset() override;
  void load_document(const std::string& name, std::string_view bytes) override;
  QueryResponse execute_query(const QuerySpec& q, const std::string& text, const Deadline& deadline) override;

 private:
  struct Impl;
  HttpDriverConfig config_;
  std::unique_ptr<Impl> impl_;
};

/// Test double for HttpDriver, listening on 127.0.0.1 with the default paths.
/// Uploaded documents feed an embedded ReferenceDriver that answers queries
/// unless a canned response is configured.
struct MockOptions {
  std::chrono::milliseconds latency{0};      // added to every query
  std::map<std::string, std::string> canned;  // query id -> response body
  std::optional<std::string> corrupt_query;   // add one cent to its first aggregate
  bool opaque = false;                        // answer with a non-result payload
  std::string required_auth;                  // "Name: value"; empty accepts anything
};

class MockBackend {
 public:
  explicit MockBackend(MockOptions options = {});
  ~MockBackend();
  MockBackend(const MockBackend&) = delete;
  MockBackend& operator=(const MockBackend&) = delete;

  /// Binds an ephemeral port and serves on a background thread.
  void start();
  void stop();

  int port() const;
  std::string base_url() const;
  std::vector<std::string> uploaded() const;
  std::size_t queries_served() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace xweb
