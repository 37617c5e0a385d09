#include "xweb/http.hpp"

#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "httplib.h"

namespace xweb {

// ---- configuration ------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return std::string(s);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ParameterError(key + ": expected true or false, got '" + v + "'");
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

void check_method(const std::string& key, const std::string& m) {
  if (m != "GET" && m != "PUT" && m != "POST" && m != "DELETE")
    throw ParameterError(key + ": unsupported method '" + m + "'");
}

std::string expand(std::string path, std::string_view var, std::string_view value) {
  for (auto pos = path.find(var); pos != std::string::npos; pos = path.find(var, pos + value.size()))
    path.replace(pos, var.size(), value);
  return path;
}

}  // namespace

HttpDriverConfig parse_http_config(std::string_view text) {
  HttpDriverConfig c;
  std::istringstream in{std::string(text)};
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParameterError("driver config line " + std::to_string(n) + ": expected key = value");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key == "id")
      c.id = value;
    else if (key == "base_url")
      c.base_url = value;
    else if (key == "load_method")
      c.load_method = upper(value);
    else if (key == "load_path")
      c.load_path = value;
    else if (key == "query_method")
      c.query_method = upper(value);
    else if (key == "query_path")
      c.query_path = value;
    else if (key == "reset_method")
      c.reset_method = upper(value);
    else if (key == "reset_path")
      c.reset_path = value;
    else if (key == "auth_header")
      c.auth_header = value;
    else if (key == "comparable")
      c.comparable = parse_bool(key, value);
    else if (key == "connect_timeout_ms")
      c.connect_timeout = std::chrono::milliseconds(std::stoll(value));
    else
      throw ParameterError("driver config line " + std::to_string(n) + ": unknown key '" + key + "'");
  }
  if (c.base_url.rfind("http://", 0) != 0) throw ParameterError("driver config: base_url must start with http://");
  check_method("load_method", c.load_method);
  check_method("query_method", c.query_method);
  if (!c.reset_method.empty()) check_method("reset_method", c.reset_method);
  if (!c.auth_header.empty() && c.auth_header.find(':') == std::string::npos)
    throw ParameterError("driver config: auth_header must look like 'Name: value'");
  return c;
}

HttpDriverConfig load_http_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParameterError("cannot read driver config " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_http_config(ss.str());
}

// ---- driver -----------------------------------------------------------------------

struct HttpDriver::Impl {
  std::unique_ptr<httplib::Client> client;
  std::string prefix;
  httplib::Headers headers;
};

HttpDriver::HttpDriver(HttpDriverConfig config) : config_(std::move(config)), impl_(std::make_unique<Impl>()) {
  const auto slash = config_.base_url.find('/', 7);
  const std::string host = config_.base_url.substr(0, slash);
  if (slash != std::string::npos) impl_->prefix = config_.base_url.substr(slash);
  while (!impl_->prefix.empty() && impl_->prefix.back() == '/') impl_->prefix.pop_back();
  impl_->client = std::make_unique<httplib::Client>(host);
  impl_->client->set_keep_alive(true);
  const auto ct = config_.connect_timeout;
  impl_->client->set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(ct).count(),
                                        (ct.count() % 1000) * 1000);
  if (!config_.auth_header.empty()) {
    const auto colon = config_.auth_header.find(':');
    impl_->headers.emplace(trim(config_.auth_header.substr(0, colon)), trim(config_.auth_header.substr(colon + 1)));
  }
}

HttpDriver::~HttpDriver() = default;

namespace {

httplib::Result send(httplib::Client& c, const std::string& method, const std::string& path,
                     const httplib::Headers& headers, std::string_view body, const char* content_type) {
  if (method == "GET") return c.Get(path, headers);
  if (method == "DELETE") return c.Delete(path, headers);
  if (method == "PUT") return c.Put(path, headers, body.data(), body.size(), content_type);
  return c.Post(path, headers, body.data(), body.size(), content_type);
}

void check_status(const httplib::Result& r, const std::string& what) {
  if (r->status < 200 || r->status >= 300) {
    std::string body = r->body.substr(0, 200);
    throw DriverError(what + ": HTTP " + std::to_string(r->status) + (body.empty() ? "" : " " + body));
  }
}

}  // namespace

void HttpDriver::reset() {
  if (config_.reset_method.empty()) return;
  auto r = send(*impl_->client, config_.reset_method, impl_->prefix + config_.reset_path, impl_->headers, "",
                "text/plain");
  if (!r) throw DriverError("reset: " + httplib::to_string(r.error()));
  check_status(r, "reset");
}

void HttpDriver::load_document(const std::string& name, std::string_view bytes) {
  impl_->client->set_read_timeout(300, 0);
  impl_->client->set_write_timeout(300, 0);
  const std::string path = impl_->prefix + expand(config_.load_path, "{name}", httplib::detail::encode_url(name));
  auto r = send(*impl_->client, config_.load_method, path, impl_->headers, bytes, "application/xml");
  if (!r) throw DriverError("upload of " + name + ": " + httplib::to_string(r.error()));
  check_status(r, "upload of " + name);
}

QueryResponse HttpDriver::execute_query(const QuerySpec& q, const std::string& text, const Deadline& deadline) {
  if (deadline) {
    const auto left = std::chrono::duration_cast<std::chrono::microseconds>(*deadline - Clock::now());
    if (left.count() <= 0) throw TimeoutError(q.id + " exceeded its deadline");
    impl_->client->set_read_timeout(left.count() / 1'000'000, left.count() % 1'000'000);
  } else {
    impl_->client->set_read_timeout(300, 0);
  }
  const std::string path = impl_->prefix + expand(config_.query_path, "{id}", q.id);
  auto r = send(*impl_->client, config_.query_method, path, impl_->headers, text, "application/xquery");
  if (!r) {
    if (deadline && Clock::now() >= *deadline) throw TimeoutError(q.id + " exceeded its deadline");
    throw DriverError(q.id + ": " + httplib::to_string(r.error()));
  }
  check_status(r, q.id);
  QueryResponse resp;
  resp.payload = r->body;
  if (config_.comparable) {
    try {
      resp.rows = parse_result_xml(resp.payload, q);
    } catch (const ParseError& e) {
      throw DriverError(q.id + ": unreadable result: " + e.what());
    }
  }
  return resp;
}

// ---- mock backend ------------------------------------------------------------------

struct MockBackend::Impl {
  MockOptions options;
  httplib::Server server;
  std::thread thread;
  int port = 0;
  mutable std::mutex mu;
  ReferenceDriver engine;
  std::vector<std::string> uploaded;
  std::size_t served = 0;

  bool authorized(const httplib::Request& req) const {
    if (options.required_auth.empty()) return true;
    const auto colon = options.required_auth.find(':');
    const std::string name = trim(options.required_auth.substr(0, colon));
    const std::string value = trim(options.required_auth.substr(colon + 1));
    return req.has_header(name) && req.get_header_value(name) == value;
  }
};

MockBackend::MockBackend(MockOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->options = std::move(options);
  Impl* s = impl_.get();

  auto upload = [s](const httplib::Request& req, httplib::Response& res) {
    if (!s->authorized(req)) {
      res.status = 401;
      return;
    }
    const std::string name = req.matches[1];
    std::lock_guard lock(s->mu);
    try {
      s->engine.load_document(name, req.body);
      s->uploaded.push_back(name);
      res.set_content("stored " + name + "\n", "text/plain");
    } catch (const Error& e) {
      res.status = 400;
      res.set_content(e.what(), "text/plain");
    }
  };
  s->server.Put(R"(/documents/([^/]+))", upload);
  s->server.Post(R"(/documents/([^/]+))", upload);

  s->server.Post(R"(/queries/([^/]+))", [s](const httplib::Request& req, httplib::Response& res) {
    if (!s->authorized(req)) {
      res.status = 401;
      return;
    }
    if (s->options.latency.count() > 0) std::this_thread::sleep_for(s->options.latency);
    const std::string id = req.matches[1];
    std::lock_guard lock(s->mu);
    ++s->served;
    if (auto it = s->options.canned.find(id); it != s->options.canned.end()) {
      res.set_content(it->second, "application/xml");
      return;
    }
    const auto spec = find_query(id);
    if (!spec) {
      res.status = 404;
      res.set_content("unknown query " + id, "text/plain");
      return;
    }
    try {
      QueryResult r = *s->engine.execute_query(*spec, req.body, std::nullopt).rows;
      if (s->options.corrupt_query == id) {
        for (auto& row : r.rows) {
          if (!row.values.empty() && row.values.front()) {
            row.values.front() = *row.values.front() + Decimal::from_cents(1);
            break;
          }
        }
      }
      if (s->options.opaque)
        res.set_content("executed " + id + ": " + std::to_string(r.rows.size()) + " rows\n", "text/plain");
      else
        res.set_content(to_result_xml(r), "application/xml");
    } catch (const Error& e) {
      res.status = 500;
      res.set_content(e.what(), "text/plain");
    }
  });

  s->server.Post("/reset", [s](const httplib::Request&, httplib::Response& res) {
    std::lock_guard lock(s->mu);
    s->engine.reset();
    s->uploaded.clear();
    res.set_content("reset\n", "text/plain");
  });
}

MockBackend::~MockBackend() { stop(); }

void MockBackend::start() {
  if (impl_->thread.joinable()) return;
  impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
  if (impl_->port <= 0) throw DriverError("mock backend could not bind a port");
  impl_->thread = std::thread([s = impl_.get()] { s->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void MockBackend::stop() {
  if (!impl_->thread.joinable()) return;
  impl_->server.stop();
  impl_->thread.join();
}

int MockBackend::port() const { return impl_->port; }

std::string MockBackend::base_url() const { return "http://127.0.0.1:" + std::to_string(impl_->port); }

std::vector<std::string> MockBackend::uploaded() const {
  std::lock_guard lock(impl_->mu);
  return impl_->uploaded;
}

std::size_t MockBackend::queries_served() const {
  std::lock_guard lock(impl_->mu);
  return impl_->served;
}

}  // namespace xweb
