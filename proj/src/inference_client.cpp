#include "cinesent/inference_client.hpp"

#include <cmath>
#include <future>

#include <json.hpp>

#include "cinesent/errors.hpp"
#include "cinesent/textprep.hpp"
#include "cinesent/util.hpp"

namespace cinesent {

using nlohmann::json;

std::string_view to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::NativeLinear: return "native";
    case BackendKind::RemoteService: return "remote";
    case BackendKind::RemoteWithFallback: return "remote_with_fallback";
  }
  return "?";
}

BackendKind parse_backend_kind(std::string_view s) {
  const auto v = to_lower_ascii(trim(s));
  if (v == "native") return BackendKind::NativeLinear;
  if (v == "remote") return BackendKind::RemoteService;
  if (v == "remote_with_fallback") return BackendKind::RemoteWithFallback;
  throw ConfigError("unknown backend '" + std::string(s) + "'");
}

void BackendSelection::validate() const {
  if (max_batch < 1) throw ConfigError("max batch size must be >= 1");
  if (timeout_ms <= 0) throw ConfigError("timeout must be positive");
  if (max_in_flight < 1) throw ConfigError("max in-flight requests must be >= 1");
}

std::vector<double> NativeClassifier::probabilities(const std::string& clean) const {
  auto tokens = tokenize(clean);
  if (stopwords) tokens = remove_stopwords(tokens, *stopwords);
  return predict_proba(model, transform(tokens, vocabulary));
}

std::string sentiment_request_body(std::span<const std::string> texts) {
  return json{{"texts", std::vector<std::string>(texts.begin(), texts.end())}}.dump();
}

std::string abuse_request_body(std::span<const std::string> texts) { return sentiment_request_body(texts); }

InferenceClient::InferenceClient(BackendSelection selection, std::shared_ptr<Transport> transport,
                                 NativeBackends native)
    : selection_(std::move(selection)), transport_(std::move(transport)), native_(std::move(native)) {
  selection_.validate();
  if (selection_.kind != BackendKind::NativeLinear && !transport_) {
    throw ConfigError("remote backend selected without a transport");
  }
  metadata_.backend = std::string(to_string(selection_.kind));
  if (selection_.kind != BackendKind::RemoteService) {
    if (native_.sentiment) metadata_.sentiment_model = native_.sentiment->model_id;
    if (native_.abuse) metadata_.abuse_model = native_.abuse->model_id;
  }
}

RunMetadata InferenceClient::metadata() const {
  std::lock_guard lock(mutex_);
  return metadata_;
}

void InferenceClient::note(const std::string& event) {
  std::lock_guard lock(mutex_);
  metadata_.events.push_back(event);
}

std::vector<LabelValues> InferenceClient::classify_sentiment_batch(std::span<const std::string> texts) {
  const auto rows = classify(Task::Sentiment, texts);
  std::vector<LabelValues> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) std::copy(rows[i].begin(), rows[i].end(), out[i].begin());
  return out;
}

std::vector<AbuseResult> InferenceClient::classify_abuse_batch(std::span<const std::string> texts) {
  const auto rows = classify(Task::Abuse, texts);
  std::vector<AbuseResult> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = {rows[i][0], rows[i][0] >= 0.5};
  return out;
}

std::vector<std::vector<double>> InferenceClient::classify(Task task, std::span<const std::string> texts) {
  if (texts.empty()) throw std::invalid_argument("classification request needs at least one text");
  std::vector<std::string> cleaned;
  cleaned.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    cleaned.push_back(clean_text(texts[i]));
    if (cleaned.back().empty()) throw std::invalid_argument("text " + std::to_string(i) + " is empty after cleaning");
  }
  const std::size_t n = cleaned.size();
  const std::size_t batch = selection_.max_batch;
  const std::size_t batches = (n + batch - 1) / batch;
  std::vector<std::vector<double>> out;
  out.reserve(n);
  for (std::size_t wave = 0; wave < batches; wave += selection_.max_in_flight) {
    const std::size_t wave_end = std::min(batches, wave + selection_.max_in_flight);
    std::vector<std::future<std::vector<std::vector<double>>>> pending;
    for (std::size_t b = wave; b < wave_end; ++b) {
      const std::size_t begin = b * batch;
      const std::span<const std::string> slice(cleaned.data() + begin, std::min(batch, n - begin));
      const auto launch = wave_end - wave > 1 ? std::launch::async : std::launch::deferred;
      pending.push_back(std::async(launch, [this, task, slice, begin] { return run_batch(task, slice, begin); }));
    }
    for (auto& f : pending) {
      auto rows = f.get();
      for (auto& r : rows) out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<std::vector<double>> InferenceClient::run_batch(Task task, std::span<const std::string> cleaned,
                                                            std::size_t begin) {
  if (selection_.kind == BackendKind::NativeLinear) return native_batch(task, cleaned);
  for (int attempt = 0; attempt < 2; ++attempt) {
    if (auto rows = remote_batch(task, cleaned, begin)) return std::move(*rows);
    if (attempt == 0) {
      std::lock_guard lock(mutex_);
      ++metadata_.retries;
    }
  }
  const std::size_t end = begin + cleaned.size();
  const std::string span = "[" + std::to_string(begin) + ", " + std::to_string(end) + ")";
  if (selection_.kind == BackendKind::RemoteWithFallback) {
    {
      std::lock_guard lock(mutex_);
      ++metadata_.fallback_batches;
      metadata_.events.push_back("fallback to native backend for " +
                                 std::string(task == Task::Sentiment ? "sentiment" : "abuse") + " batch " + span);
    }
    return native_batch(task, cleaned);
  }
  throw TransportError("inference service unavailable for batch " + span, begin, end);
}

std::optional<std::vector<std::vector<double>>> InferenceClient::remote_batch(Task task,
                                                                              std::span<const std::string> cleaned,
                                                                              std::size_t begin) {
  const bool sentiment = task == Task::Sentiment;
  const std::string path = sentiment ? "/v1/sentiment" : "/v1/abuse";
  const auto result = transport_->post(path, sentiment ? sentiment_request_body(cleaned) : abuse_request_body(cleaned),
                                       std::chrono::milliseconds(selection_.timeout_ms));
  {
    std::lock_guard lock(mutex_);
    ++metadata_.remote_requests;
  }
  if (!result || result->status >= 500) return std::nullopt;
  const std::string where = path + " batch at " + std::to_string(begin);
  if (result->status != 200) {
    std::string message = "HTTP " + std::to_string(result->status);
    const auto err = json::parse(result->body, nullptr, false);
    if (err.is_object() && err.contains("error") && err["error"].is_string()) {
      message += ": " + err["error"].get<std::string>();
    }
    throw ProtocolError(where + ": " + message);
  }
  const auto body = json::parse(result->body, nullptr, false);
  if (!body.is_object() || !body.contains("probs") || !body["probs"].is_array()) {
    throw ProtocolError(where + ": response lacks a probs array");
  }
  const auto& probs = body["probs"];
  if (probs.size() != cleaned.size()) {
    throw ProtocolError(where + ": expected " + std::to_string(cleaned.size()) + " results, got " +
                        std::to_string(probs.size()));
  }
  auto check_prob = [&](const json& v) {
    if (!v.is_number()) throw ProtocolError(where + ": non-numeric probability");
    const double p = v.get<double>();
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) throw ProtocolError(where + ": probability outside [0, 1]");
    return p;
  };
  std::vector<std::vector<double>> rows;
  rows.reserve(probs.size());
  if (sentiment) {
    if (!body.contains("labels") || !body["labels"].is_array() || body["labels"].size() != kSentimentLabelCount) {
      throw ProtocolError(where + ": response must list the 10 sentiment labels");
    }
    for (std::size_t l = 0; l < kSentimentLabelCount; ++l) {
      const auto& name = body["labels"][l];
      if (!name.is_string() || name.get<std::string>() != kSentimentLabelNames[l]) {
        throw ProtocolError(where + ": sentiment labels are not in canonical order");
      }
    }
    for (const auto& row : probs) {
      if (!row.is_array() || row.size() != kSentimentLabelCount) {
        throw ProtocolError(where + ": sentiment rows must hold 10 probabilities");
      }
      std::vector<double> r;
      for (const auto& v : row) r.push_back(check_prob(v));
      rows.push_back(std::move(r));
    }
  } else {
    for (const auto& v : probs) rows.push_back({check_prob(v)});
  }
  if (body.contains("model") && body["model"].is_string()) {
    std::lock_guard lock(mutex_);
    (sentiment ? metadata_.sentiment_model : metadata_.abuse_model) = body["model"].get<std::string>();
  }
  return rows;
}

std::vector<std::vector<double>> InferenceClient::native_batch(Task task, std::span<const std::string> cleaned) const {
  const auto& classifier = task == Task::Sentiment ? native_.sentiment : native_.abuse;
  if (!classifier) {
    throw ConfigError(std::string("no native ") + (task == Task::Sentiment ? "sentiment" : "abuse") +
                      " model configured");
  }
  const std::size_t expected = task == Task::Sentiment ? kSentimentLabelCount : 1;
  if (classifier->model.labels() != expected) {
    throw ConfigError("native model has " + std::to_string(classifier->model.labels()) + " labels, expected " +
                      std::to_string(expected));
  }
  std::vector<std::vector<double>> rows;
  rows.reserve(cleaned.size());
  for (const auto& text : cleaned) rows.push_back(classifier->probabilities(text));
  return rows;
}

std::vector<std::string> InferenceClient::health() {
  if (!transport_) throw ConfigError("no transport configured");
  const auto result = transport_->get("/v1/health", std::chrono::milliseconds(selection_.timeout_ms));
  if (!result) throw TransportError("inference service unreachable", 0, 0);
  const auto body = json::parse(result->body, nullptr, false);
  if (result->status != 200 || !body.is_object() || body.value("status", "") != "ok") {
    throw ProtocolError("inference service is not healthy (HTTP " + std::to_string(result->status) + ")");
  }
  std::vector<std::string> models;
  if (body.contains("models") && body["models"].is_array()) {
    for (const auto& m : body["models"]) {
      if (m.is_string()) models.push_back(m.get<std::string>());
    }
  }
  return models;
}

}  // namespace cinesent
