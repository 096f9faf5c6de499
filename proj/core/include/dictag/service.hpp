#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <vector>

#include "dictag/conllu.hpp"
#include "dictag/morph_dict.hpp"
#include "dictag/tagger.hpp"

namespace dictag {

struct ServiceModel {
  std::string name;
  std::shared_ptr<const TaggerModel> model;
  std::shared_ptr<const MorphDict> dict;  // may be null
  Tokenizer tokenizer;
};

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  unsigned workers = 4;
  std::size_t max_data_bytes = 1 << 20;
  std::ostream* access_log = nullptr;  // one JSON object per line
};

struct ServiceResponse {
  int status = 200;
  std::string body;  // always JSON
};

/// REST front end over shared, immutable models.
///
///   GET  /api/models   {"models": {name: ["tokenizer", "tagger"]}, "default_model": name}
///   POST /api/process  fields: data (required), model, input=text|conllu,
///                      output=conllu, tokenizer, tagger, dictionary
///                      -> {"model": name, "result": "<CoNLL-U>"}
/// Errors are {"error": message} with 400, 404 (unknown model) or 413.
class Service {
 public:
  /// The first model is the default. Throws ConfigError when `models` is
  /// empty or names repeat.
  Service(std::vector<ServiceModel> models, ServiceConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  ServiceResponse handle_models() const;
  ServiceResponse handle_process(const std::map<std::string, std::string>& fields) const;

  /// Binds the listening socket and returns the port. Throws ConfigError.
  int bind();
  /// Serves until stop(); call bind() first.
  void run();
  /// Stops accepting and lets in-flight requests finish.
  void stop();

  const ServiceConfig& config() const noexcept { return config_; }

 private:
  struct Server;

  const ServiceModel* find_model(const std::string& name) const;
  void log_access(const std::string& line) const;

  std::vector<ServiceModel> models_;
  ServiceConfig config_;
  std::unique_ptr<Server> server_;
  mutable std::mutex log_mutex_;
};

}  // namespace dictag
