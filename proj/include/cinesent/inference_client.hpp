#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cinesent/linear_model.hpp"
#include "cinesent/sentiment.hpp"
#include "cinesent/textprep.hpp"
#include "cinesent/vectorizer.hpp"

namespace cinesent {

enum class BackendKind { NativeLinear, RemoteService, RemoteWithFallback };
std::string_view to_string(BackendKind kind);
BackendKind parse_backend_kind(std::string_view s);

struct BackendSelection {
  BackendKind kind = BackendKind::NativeLinear;
  std::string endpoint = "http://127.0.0.1:8080";
  int timeout_ms = 5000;
  std::size_t max_batch = 32;
  std::size_t max_in_flight = 1;

  void validate() const;
};

struct HttpResult {
  int status = 0;
  std::string body;
};

/// Minimal HTTP seam. Returns nullopt when the service is unreachable or the
/// request timed out; any HTTP response, including errors, is returned.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::optional<HttpResult> post(const std::string& path, const std::string& body,
                                         std::chrono::milliseconds timeout) = 0;
  virtual std::optional<HttpResult> get(const std::string& path, std::chrono::milliseconds timeout) = 0;
};

/// cpp-httplib backed transport for `http://host:port` endpoints.
std::shared_ptr<Transport> make_http_transport(const std::string& endpoint);

/// Trained logistic model plus the vocabulary it was trained with.
struct NativeClassifier {
  Vocabulary vocabulary;
  LinearModel model;
  std::string model_id;
  std::optional<StopwordSet> stopwords;

  std::vector<double> probabilities(const std::string& clean_text) const;
};

struct NativeBackends {
  std::optional<NativeClassifier> sentiment;
  std::optional<NativeClassifier> abuse;
};

struct AbuseResult {
  double probability = 0.0;
  bool abusive = false;
};

struct RunMetadata {
  std::string backend;
  std::string sentiment_model;
  std::string abuse_model;
  std::size_t remote_requests = 0;
  std::size_t retries = 0;
  std::size_t fallback_batches = 0;
  std::vector<std::string> events;
};

// Wire format helpers, shared with protocol fixtures.
std::string sentiment_request_body(std::span<const std::string> texts);
std::string abuse_request_body(std::span<const std::string> texts);

/// Batched sentiment and abuse classification through the configured
/// backend. Results always match the request in count and order. Safe to
/// share between threads.
class InferenceClient {
 public:
  InferenceClient(BackendSelection selection, std::shared_ptr<Transport> transport, NativeBackends native);

  /// One 10-probability vector per text. Texts are cleaned before they are
  /// classified and must not clean to an empty string.
  std::vector<LabelValues> classify_sentiment_batch(std::span<const std::string> texts);
  std::vector<AbuseResult> classify_abuse_batch(std::span<const std::string> texts);

  /// GET /v1/health; returns the advertised model ids.
  std::vector<std::string> health();

  RunMetadata metadata() const;

 private:
  enum class Task { Sentiment, Abuse };

  std::vector<std::vector<double>> classify(Task task, std::span<const std::string> texts);
  std::vector<std::vector<double>> run_batch(Task task, std::span<const std::string> cleaned, std::size_t begin);
  std::optional<std::vector<std::vector<double>>> remote_batch(Task task, std::span<const std::string> cleaned,
                                                               std::size_t begin);
  std::vector<std::vector<double>> native_batch(Task task, std::span<const std::string> cleaned) const;
  void note(const std::string& event);

  BackendSelection selection_;
  std::shared_ptr<Transport> transport_;
  NativeBackends native_;
  mutable std::mutex mutex_;
  RunMetadata metadata_;
};

}  // namespace cinesent
