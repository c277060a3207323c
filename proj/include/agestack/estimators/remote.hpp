#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "agestack/estimators/adapter.hpp"

namespace agestack::estimators {

enum class Provider { Aws, Azure, HowOld };

std::string_view to_string(Provider p);
// Throws UsageError.
Provider parse_provider(std::string_view text);

struct ClientConfig {
  Provider provider = Provider::Aws;
  std::string estimator_id = "aws";
  // scheme://host[:port], e.g. https://rekognition.eu-west-1.amazonaws.com
  std::string endpoint;
  std::string region = "us-east-1";
  // Names of environment variables holding credentials; values never live
  // in config files.
  std::string access_key_env = "AWS_ACCESS_KEY_ID";
  std::string secret_key_env = "AWS_SECRET_ACCESS_KEY";
  std::string session_token_env = "AWS_SESSION_TOKEN";
  std::string api_key_env = "AZURE_FACE_KEY";
  std::chrono::milliseconds timeout{10000};
  int max_retries = 4;
  std::chrono::milliseconds backoff_base{250};
  double backoff_factor = 2.0;
  // Non-loopback endpoints are refused unless this is set.
  bool live = false;
};

struct RemoteOutcome {
  core::Prediction prediction;
  int retries = 0;
};

// Sends one image to the configured provider. Responses carrying an age
// range set point = low. Retries 429 and 5xx (and AWS throttling) with
// exponential backoff up to max_retries. Throws AuthError, RateLimited,
// NoFaceDetected, ProtocolError, Timeout, UsageError (refused endpoint).
RemoteOutcome remote_predict(const ClientConfig& config, std::string_view image_bytes,
                             const std::string& subject_id);

// Parses a provider response body. Exposed for fixture tests.
// Throws NoFaceDetected or ProtocolError(200, digest) on an unexpected shape.
core::Prediction parse_response(Provider provider, std::string_view body);

// AWS Signature Version 4.
struct SigV4Request {
  std::string method;
  std::string host;
  std::string path = "/";
  std::string query;
  std::map<std::string, std::string> headers;  // lower-case names, host excluded
  std::string body;
  std::string amz_date;  // YYYYMMDD'T'HHMMSS'Z'
  std::string region;
  std::string service;
};

std::string sigv4_signing_key_hex(std::string_view secret, std::string_view date,
                                  std::string_view region, std::string_view service);
std::string sigv4_canonical_request(const SigV4Request& req);
// Full Authorization header value.
std::string sigv4_authorization(const SigV4Request& req, std::string_view access_key,
                                std::string_view secret_key);

// Reads image_root / subject.image_ref and calls remote_predict.
class RemoteAdapter final : public EstimatorAdapter {
 public:
  RemoteAdapter(ClientConfig config, std::filesystem::path image_root);

  const std::string& estimator_id() const override { return config_.estimator_id; }
  Capabilities capabilities() const override;
  core::Prediction predict(const core::SubjectRecord& subject) override;

 private:
  ClientConfig config_;
  std::filesystem::path image_root_;
};

}  // namespace agestack::estimators
