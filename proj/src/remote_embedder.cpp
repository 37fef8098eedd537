#include "zerofolio/remote_embedder.hpp"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <json.hpp>
#include <thread>

#include "zerofolio/error.hpp"
#include "zerofolio/parallel.hpp"

namespace zerofolio {

using nlohmann::json;

namespace {

std::string excerpt(const std::string& body) {
  constexpr std::size_t kMax = 200;
  return body.size() <= kMax ? body : body.substr(0, kMax) + "...";
}

}  // namespace

RemoteEmbedder::RemoteEmbedder(BackendConfig config) : config_(std::move(config)) {
  if (config_.kind != BackendKind::Remote) throw Error(ErrorKind::InvalidArgument, "backend is not Remote");
  config_.validate();
  const std::string& url = config_.endpoint_url;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorKind::InvalidArgument, "endpoint url needs a scheme: '" + url + "'");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  origin_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!path_.empty() && path_.back() == '/') path_.pop_back();
  const std::string suffix = "/embeddings";
  if (path_.size() < suffix.size() || path_.compare(path_.size() - suffix.size(), suffix.size(), suffix) != 0) {
    path_ += suffix;
  }
}

std::vector<EmbeddingVector> RemoteEmbedder::embed(const std::vector<std::string>& texts) const {
  for (const auto& t : texts) {
    if (t.empty()) throw Error(ErrorKind::InvalidArgument, "remote embedding of an empty text");
  }
  const std::size_t n_batches = (texts.size() + config_.batch_size - 1) / config_.batch_size;
  std::vector<std::vector<EmbeddingVector>> results(n_batches);
  parallel_for(n_batches, config_.max_parallel, [&](std::size_t b) {
    const auto first = texts.begin() + static_cast<std::ptrdiff_t>(b * config_.batch_size);
    const auto last = texts.begin() + static_cast<std::ptrdiff_t>(std::min(texts.size(), (b + 1) * config_.batch_size));
    results[b] = embed_batch(std::vector<std::string>(first, last));
  });
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (auto& batch : results) {
    for (auto& v : batch) {
      if (!out.empty() && v.size() != out.front().size()) {
        throw Error(ErrorKind::DimensionMismatch, "provider returned vectors of length " +
                                                      std::to_string(out.front().size()) + " and " +
                                                      std::to_string(v.size()));
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

std::vector<EmbeddingVector> RemoteEmbedder::embed_batch(const std::vector<std::string>& batch) const {
  const json request = {{"model", config_.model_id}, {"input", batch}};
  const std::string payload = request.dump();

  httplib::Client client(origin_);
  client.set_connection_timeout(std::chrono::seconds(config_.timeout_seconds));
  client.set_read_timeout(std::chrono::seconds(config_.timeout_seconds));
  client.set_write_timeout(std::chrono::seconds(config_.timeout_seconds));
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  int last_status = 0;
  std::string last_body;
  for (std::size_t attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      const auto shift = std::min<std::size_t>(attempt - 1, 16);
      const auto delay = std::min<std::uint64_t>(std::uint64_t{config_.initial_backoff_ms} << shift, 30000);
      std::this_thread::sleep_for(std::chrono::milliseconds(delay));
    }
    auto res = client.Post(path_, headers, payload, "application/json");
    if (!res) {
      last_status = 0;
      last_body = "connection failed: " + httplib::to_string(res.error());
      continue;
    }
    last_status = res->status;
    last_body = res->body;
    if (res->status == 401 || res->status == 403) {
      throw BackendError(ErrorKind::AuthError, res->status, excerpt(res->body));
    }
    if (res->status == 429 || res->status >= 500) continue;
    if (res->status != 200) throw BackendError(ErrorKind::BackendError, res->status, excerpt(res->body));

    json body;
    try {
      body = json::parse(res->body);
    } catch (const json::exception&) {
      throw BackendError(ErrorKind::BackendError, res->status, "unparseable JSON: " + excerpt(res->body));
    }
    if (!body.contains("data") || !body["data"].is_array()) {
      throw BackendError(ErrorKind::BackendError, res->status, "response lacks a data array");
    }
    const auto& data = body["data"];
    if (data.size() != batch.size()) {
      throw BackendError(ErrorKind::BackendError, res->status,
                         "expected " + std::to_string(batch.size()) + " embeddings, got " +
                             std::to_string(data.size()));
    }
    std::vector<EmbeddingVector> out(batch.size());
    std::vector<bool> filled(batch.size(), false);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto& item = data[i];
      std::size_t slot = i;
      if (item.contains("index") && item["index"].is_number_integer()) slot = item["index"].get<std::size_t>();
      if (slot >= batch.size() || filled[slot] || !item.contains("embedding") || !item["embedding"].is_array()) {
        throw BackendError(ErrorKind::BackendError, res->status, "malformed data entry " + std::to_string(i));
      }
      std::vector<double> values;
      values.reserve(item["embedding"].size());
      for (const auto& x : item["embedding"]) {
        if (!x.is_number() || !std::isfinite(x.get<double>())) {
          throw BackendError(ErrorKind::BackendError, res->status, "non-finite embedding value");
        }
        values.push_back(x.get<double>());
      }
      if (values.empty()) throw BackendError(ErrorKind::BackendError, res->status, "empty embedding");
      out[slot] = EmbeddingVector(std::move(values));
      filled[slot] = true;
    }
    for (const auto& v : out) {
      if (v.size() != out.front().size()) {
        throw Error(ErrorKind::DimensionMismatch, "provider returned vectors of length " +
                                                      std::to_string(out.front().size()) + " and " +
                                                      std::to_string(v.size()));
      }
    }
    return out;
  }
  if (last_status == 429) throw BackendError(ErrorKind::RateLimited, last_status, excerpt(last_body));
  throw BackendError(ErrorKind::BackendError, last_status, excerpt(last_body));
}

}  // namespace zerofolio
