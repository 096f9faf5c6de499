#include "dictag/service.hpp"

#include <atomic>
#include <chrono>
#include <ctime>
#include <set>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "dictag/error.hpp"
#include "dictag/pipeline.hpp"

namespace dictag {

struct Service::Server {
  httplib::Server http;
  std::atomic<bool> stop_requested{false};
  std::atomic<bool> run_entered{false};
  std::atomic<bool> run_exited{false};
};

namespace {

using nlohmann::json;

ServiceResponse error_response(int status, const std::string& message) {
  return {status, json{{"error", message}}.dump()};
}

// "" counts as set, matching a bare checkbox-style form field.
std::optional<bool> parse_flag(const std::string& value) {
  static const std::set<std::string> yes{"", "1", "true", "yes", "on"};
  static const std::set<std::string> no{"0", "false", "no", "off"};
  if (yes.count(value)) return true;
  if (no.count(value)) return false;
  return std::nullopt;
}

std::map<std::string, std::string> collect_fields(const httplib::Request& req) {
  std::map<std::string, std::string> fields;
  for (const auto& [key, value] : req.params) fields.emplace(key, value);
  for (const auto& [key, file] : req.files) fields.emplace(key, file.content);
  return fields;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

Service::Service(std::vector<ServiceModel> models, ServiceConfig config)
    : models_(std::move(models)), config_(std::move(config)) {
  if (models_.empty()) throw Error(ErrorCode::ConfigError, "no models loaded");
  std::set<std::string> names;
  for (const auto& m : models_) {
    if (!m.model) throw Error(ErrorCode::ConfigError, "model '" + m.name + "' has no tagger");
    if (!names.insert(m.name).second) throw Error(ErrorCode::ConfigError, "duplicate model name '" + m.name + "'");
  }
  if (config_.workers == 0) throw Error(ErrorCode::ConfigError, "worker count must be positive");
}

Service::~Service() { stop(); }

const ServiceModel* Service::find_model(const std::string& name) const {
  for (const auto& m : models_) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

ServiceResponse Service::handle_models() const {
  json models = json::object();
  for (const auto& m : models_) models[m.name] = {"tokenizer", "tagger"};
  return {200, json{{"models", std::move(models)}, {"default_model", models_.front().name}}.dump()};
}

ServiceResponse Service::handle_process(const std::map<std::string, std::string>& fields) const {
  auto field = [&](const char* key) -> const std::string* {
    auto it = fields.find(key);
    return it == fields.end() ? nullptr : &it->second;
  };
  auto flag = [&](const char* key, bool fallback) -> std::optional<bool> {
    const std::string* v = field(key);
    return v ? parse_flag(*v) : std::optional<bool>(fallback);
  };

  const std::string* data = field("data");
  if (!data) return error_response(400, "missing required field 'data'");
  if (data->size() > config_.max_data_bytes) {
    return error_response(413, "data exceeds " + std::to_string(config_.max_data_bytes) + " bytes");
  }

  const ServiceModel* model = &models_.front();
  if (const std::string* name = field("model"); name && !name->empty()) {
    model = find_model(*name);
    if (!model) return error_response(404, "unknown model '" + *name + "'");
  }

  const std::string input = field("input") ? *field("input") : "text";
  if (input != "text" && input != "conllu") return error_response(400, "input must be 'text' or 'conllu'");
  if (const std::string* output = field("output"); output && *output != "conllu") {
    return error_response(400, "output must be 'conllu'");
  }
  const auto tokenizer = flag("tokenizer", input == "text");
  const auto tagger = flag("tagger", true);
  const auto dictionary = flag("dictionary", true);
  if (!tokenizer || !tagger || !dictionary) {
    return error_response(400, "flags must be one of 1/0, true/false, yes/no, on/off");
  }
  if (input == "text" && !*tokenizer) return error_response(400, "input=text requires the tokenizer");

  try {
    std::vector<Sentence> sentences =
        *tokenizer ? model->tokenizer.tokenize(*data) : read_conllu_string(*data);
    if (*tagger) {
      const MorphDict* dict = *dictionary ? model->dict.get() : nullptr;
      sentences = annotate(*model->model, dict, std::move(sentences));
    }
    return {200, json{{"model", model->name}, {"result", write_conllu(sentences)}}.dump()};
  } catch (const Error& e) {
    return error_response(400, e.what());
  }
}

void Service::log_access(const std::string& line) const {
  if (!config_.access_log) return;
  std::lock_guard lock(log_mutex_);
  *config_.access_log << line << '\n' << std::flush;
}

int Service::bind() {
  server_ = std::make_unique<Server>();
  auto& http = server_->http;
  const unsigned workers = config_.workers;
  http.new_task_queue = [workers] { return new httplib::ThreadPool(workers); };
  // urlencoding can triple the payload; the per-field limit is enforced in handle_process
  // no SO_REUSEPORT: a second instance on the same port must fail to bind
  http.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
  http.set_payload_max_length(config_.max_data_bytes * 3 + (64 << 10));

  auto reply = [](httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json; charset=utf-8");
  };
  http.Get("/api/models", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, handle_models());
  });
  auto process = [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, handle_process(collect_fields(req)));
  };
  http.Post("/api/process", process);
  http.Get("/api/process", process);
  http.set_logger([this](const httplib::Request& req, const httplib::Response& res) {
    log_access(json{{"time", utc_timestamp()},
                    {"remote", req.remote_addr},
                    {"method", req.method},
                    {"path", req.path},
                    {"status", res.status},
                    {"bytes", res.body.size()}}
                   .dump());
  });

  int port = config_.port;
  if (port == 0) {
    port = http.bind_to_any_port(config_.host);
  } else if (!http.bind_to_port(config_.host, port)) {
    port = -1;
  }
  if (port < 0) {
    throw Error(ErrorCode::ConfigError, "cannot bind " + config_.host + ":" + std::to_string(config_.port));
  }
  return port;
}

void Service::run() {
  if (!server_) throw Error(ErrorCode::ConfigError, "bind() must be called before run()");
  server_->run_entered = true;
  if (!server_->stop_requested) server_->http.listen_after_bind();
  server_->run_exited = true;
}

void Service::stop() {
  if (!server_) return;
  server_->stop_requested = true;
  // httplib ignores stop() until the accept loop is up
  while (server_->run_entered && !server_->run_exited && !server_->http.is_running()) {
    std::this_thread::yield();
  }
  server_->http.stop();
}

}  // namespace dictag
