#include <httplib.h>

#include "cinesent/errors.hpp"
#include "cinesent/inference_client.hpp"

namespace cinesent {
namespace {

class HttpTransport final : public Transport {
 public:
  explicit HttpTransport(std::string endpoint) : endpoint_(std::move(endpoint)) {}

  std::optional<HttpResult> post(const std::string& path, const std::string& body,
                                 std::chrono::milliseconds timeout) override {
    auto client = make_client(timeout);
    return convert(client.Post(path, body, "application/json"));
  }

  std::optional<HttpResult> get(const std::string& path, std::chrono::milliseconds timeout) override {
    auto client = make_client(timeout);
    return convert(client.Get(path));
  }

 private:
  httplib::Client make_client(std::chrono::milliseconds timeout) const {
    httplib::Client client(endpoint_);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    return client;
  }

  static std::optional<HttpResult> convert(const httplib::Result& res) {
    if (!res) return std::nullopt;
    return HttpResult{res->status, res->body};
  }

  std::string endpoint_;
};

}  // namespace

std::shared_ptr<Transport> make_http_transport(const std::string& endpoint) {
  if (!endpoint.starts_with("http://")) throw ConfigError("endpoint must start with http://: " + endpoint);
  return std::make_shared<HttpTransport>(endpoint);
}

}  // namespace cinesent
