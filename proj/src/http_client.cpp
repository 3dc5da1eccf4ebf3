// Chat-completions adapter. Kept in its own file because httplib is heavy to compile.
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <cstdlib>

#include "mathgap/error.hpp"
#include "mathgap/harness.hpp"

namespace mathgap {

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;    // prefix without trailing slash
};

Endpoint split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::InvalidArgument, "base URL needs a scheme: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  Endpoint e;
  e.origin = url.substr(0, path_start);
  e.path = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!e.path.empty() && e.path.back() == '/') e.path.pop_back();
  return e;
}

class HttpClient : public ModelClient {
 public:
  HttpClient(std::string model, const ClientOptions& options)
      : model_(std::move(model)), endpoint_(split_url(options.base_url)), timeout_(options.timeout_seconds) {
    if (const char* key = std::getenv(options.api_key_env.c_str())) token_ = key;
  }

  std::string complete(const CompletionRequest& request) override {
    httplib::Client cli(endpoint_.origin);
    cli.set_connection_timeout(timeout_);
    cli.set_read_timeout(timeout_);
    httplib::Headers headers;
    if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);

    const Json body{{"model", model_},
                    {"messages", Json::array({Json{{"role", "user"}, {"content", request.prompt}}})},
                    {"temperature", request.temperature},
                    {"max_tokens", request.max_tokens}};
    auto res = cli.Post(endpoint_.path + "/chat/completions", headers, body.dump(), "application/json");
    if (!res) throw Error(ErrorCode::Transport, "request failed: " + httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300) {
      throw Error(ErrorCode::Transport, "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
    }
    try {
      const Json reply = Json::parse(res->body);
      const Json& content = reply.at("choices").at(0).at("message").at("content");
      return content.is_string() ? content.get<std::string>() : std::string{};
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Transport, std::string("unexpected response: ") + e.what());
    }
  }

 private:
  std::string model_;
  Endpoint endpoint_;
  int timeout_;
  std::string token_;
};

}  // namespace

std::unique_ptr<ModelClient> make_http_client(std::string model, const ClientOptions& options) {
  return std::make_unique<HttpClient>(std::move(model), options);
}

}  // namespace mathgap
