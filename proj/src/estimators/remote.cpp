#include "agestack/estimators/remote.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iterator>
#include <sstream>
#include <thread>

#include "agestack/core/digest.hpp"
#include "agestack/error.hpp"

namespace agestack::estimators {

using nlohmann::json;

std::string_view to_string(Provider p) {
  switch (p) {
    case Provider::Aws: return "aws";
    case Provider::Azure: return "azure";
    case Provider::HowOld: return "howold";
  }
  return "aws";
}

Provider parse_provider(std::string_view text) {
  if (text == "aws") return Provider::Aws;
  if (text == "azure") return Provider::Azure;
  if (text == "howold") return Provider::HowOld;
  throw UsageError("unknown provider '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// SigV4

std::string sigv4_signing_key_hex(std::string_view secret, std::string_view date,
                                  std::string_view region, std::string_view service) {
  const auto as_view = [](const core::Sha256& d) {
    return std::string(reinterpret_cast<const char*>(d.data()), d.size());
  };
  const auto k_date = as_view(core::hmac_sha256("AWS4" + std::string(secret), date));
  const auto k_region = as_view(core::hmac_sha256(k_date, region));
  const auto k_service = as_view(core::hmac_sha256(k_region, service));
  return core::to_hex(core::hmac_sha256(k_service, "aws4_request"));
}

namespace {

std::string signed_header_list(const SigV4Request& req) {
  std::map<std::string, std::string> all = req.headers;
  all["host"] = req.host;
  std::string out;
  for (const auto& [name, value] : all) {
    if (!out.empty()) out += ';';
    out += name;
  }
  return out;
}

std::string hex_to_bytes(std::string_view hex) {
  std::string out;
  for (std::size_t i = 0; i + 1 < hex.size(); i += 2) {
    out.push_back(static_cast<char>(std::stoi(std::string(hex.substr(i, 2)), nullptr, 16)));
  }
  return out;
}

}  // namespace

std::string sigv4_canonical_request(const SigV4Request& req) {
  std::map<std::string, std::string> all = req.headers;
  all["host"] = req.host;
  std::ostringstream out;
  out << req.method << '\n' << req.path << '\n' << req.query << '\n';
  for (const auto& [name, value] : all) out << name << ':' << value << '\n';
  out << '\n' << signed_header_list(req) << '\n' << core::sha256_hex(req.body);
  return out.str();
}

std::string sigv4_authorization(const SigV4Request& req, std::string_view access_key,
                                std::string_view secret_key) {
  const std::string date = req.amz_date.substr(0, 8);
  const std::string scope = date + "/" + req.region + "/" + req.service + "/aws4_request";
  const std::string string_to_sign = "AWS4-HMAC-SHA256\n" + req.amz_date + "\n" + scope + "\n" +
                                     core::sha256_hex(sigv4_canonical_request(req));
  const std::string key =
      hex_to_bytes(sigv4_signing_key_hex(secret_key, date, req.region, req.service));
  const std::string signature = core::to_hex(core::hmac_sha256(key, string_to_sign));
  return "AWS4-HMAC-SHA256 Credential=" + std::string(access_key) + "/" + scope +
         ", SignedHeaders=" + signed_header_list(req) + ", Signature=" + signature;
}

// ---------------------------------------------------------------------------
// Response parsing

namespace {

[[noreturn]] void shape_error(std::string_view body) {
  throw ProtocolError(200, core::sha256_hex(body));
}

json parse_json(std::string_view body) {
  auto j = json::parse(body, nullptr, false);
  if (j.is_discarded()) shape_error(body);
  return j;
}

}  // namespace

core::Prediction parse_response(Provider provider, std::string_view body) {
  core::Prediction p;
  p.raw_digest = core::sha256_hex(body);
  try {
    switch (provider) {
      case Provider::Aws: {
        const auto j = parse_json(body);
        const auto& faces = j.at("FaceDetails");
        if (!faces.is_array()) shape_error(body);
        if (faces.empty()) throw NoFaceDetected();
        const auto& range = faces.front().at("AgeRange");
        p.low = range.at("Low").get<double>();
        p.high = range.at("High").get<double>();
        p.point = *p.low;
        break;
      }
      case Provider::Azure: {
        const auto j = parse_json(body);
        if (!j.is_array()) shape_error(body);
        if (j.empty()) throw NoFaceDetected();
        p.point = j.front().at("faceAttributes").at("age").get<double>();
        break;
      }
      case Provider::HowOld: {
        auto j = parse_json(body);
        // The service has been seen returning its JSON as a JSON string.
        if (j.is_string()) j = parse_json(j.get<std::string>());
        const auto& faces = j.at("Faces");
        if (!faces.is_array()) shape_error(body);
        if (faces.empty()) throw NoFaceDetected();
        p.point = faces.front().at("attributes").at("age").get<double>();
        break;
      }
    }
  } catch (const json::exception&) {
    shape_error(body);
  }
  if (!std::isfinite(p.point) || p.point < 0.0 || (p.low && p.high && *p.low > *p.high)) {
    shape_error(body);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Transport

namespace {

struct Endpoint {
  std::string scheme;
  std::string host;  // host[:port] as it appears in the Host header
  std::string hostname;
};

Endpoint parse_endpoint(const std::string& endpoint) {
  const auto sep = endpoint.find("://");
  if (sep == std::string::npos) throw UsageError("endpoint must be scheme://host[:port]");
  Endpoint e;
  e.scheme = endpoint.substr(0, sep);
  if (e.scheme != "http" && e.scheme != "https") throw UsageError("endpoint scheme must be http(s)");
  e.host = endpoint.substr(sep + 3);
  if (const auto slash = e.host.find('/'); slash != std::string::npos) e.host.resize(slash);
  if (e.host.empty()) throw UsageError("endpoint has no host");
  e.hostname = e.host;
  if (e.hostname.front() == '[') {
    e.hostname = e.hostname.substr(0, e.hostname.find(']') + 1);
  } else if (const auto colon = e.hostname.rfind(':'); colon != std::string::npos) {
    e.hostname.resize(colon);
  }
  return e;
}

bool is_loopback(const std::string& hostname) {
  return hostname == "127.0.0.1" || hostname == "localhost" || hostname == "[::1]";
}

std::string env_or_throw(const std::string& name) {
  const char* v = name.empty() ? nullptr : std::getenv(name.c_str());
  if (!v || !*v) throw AuthError("credential environment variable '" + name + "' is not set");
  return v;
}

std::string amz_now() {
  const std::time_t t = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&t, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &utc);
  return buf;
}

struct PreparedRequest {
  std::string path;
  httplib::Headers headers;
  std::string body;
  std::string content_type;
};

PreparedRequest prepare(const ClientConfig& config, const Endpoint& endpoint,
                        std::string_view image) {
  PreparedRequest r;
  switch (config.provider) {
    case Provider::Aws: {
      const std::string access = env_or_throw(config.access_key_env);
      const std::string secret = env_or_throw(config.secret_key_env);
      const char* token = config.session_token_env.empty()
                              ? nullptr
                              : std::getenv(config.session_token_env.c_str());
      r.path = "/";
      r.content_type = "application/x-amz-json-1.1";
      r.body = json{{"Attributes", {"ALL"}}, {"Image", {{"Bytes", core::base64_encode(image)}}}}
                   .dump();
      SigV4Request sig;
      sig.method = "POST";
      sig.host = endpoint.host;
      sig.path = r.path;
      sig.headers = {{"content-type", r.content_type},
                     {"x-amz-date", amz_now()},
                     {"x-amz-target", "RekognitionService.DetectFaces"}};
      if (token && *token) sig.headers["x-amz-security-token"] = token;
      sig.body = r.body;
      sig.amz_date = sig.headers["x-amz-date"];
      sig.region = config.region;
      sig.service = "rekognition";
      for (const auto& [name, value] : sig.headers) {
        if (name != "content-type") r.headers.emplace(name, value);
      }
      r.headers.emplace("Host", endpoint.host);
      r.headers.emplace("Authorization", sigv4_authorization(sig, access, secret));
      break;
    }
    case Provider::Azure:
      r.path = "/face/v1.0/detect?returnFaceId=false&returnFaceAttributes=age";
      r.content_type = "application/octet-stream";
      r.body = std::string(image);
      r.headers.emplace("Ocp-Apim-Subscription-Key", env_or_throw(config.api_key_env));
      break;
    case Provider::HowOld:
      r.path = "/Home/Analyze?isTest=False";
      r.content_type = "application/octet-stream";
      r.body = std::string(image);
      break;
  }
  return r;
}

bool aws_error_is(std::string_view body, std::string_view type) {
  const auto j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return false;
  const auto it = j.find("__type");
  return it != j.end() && it->is_string() &&
         it->get<std::string>().find(type) != std::string::npos;
}

}  // namespace

RemoteOutcome remote_predict(const ClientConfig& config, std::string_view image_bytes,
                             const std::string& subject_id) {
  const Endpoint endpoint = parse_endpoint(config.endpoint);
  if (!config.live && !is_loopback(endpoint.hostname)) {
    throw UsageError("refusing non-loopback endpoint '" + config.endpoint +
                     "' without live = true");
  }
  if (config.max_retries < 0) throw UsageError("max_retries must be non-negative");

  httplib::Client client(endpoint.scheme + "://" + endpoint.host);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  const auto started = std::chrono::steady_clock::now();
  int retries = 0;
  for (;;) {
    const auto req = prepare(config, endpoint, image_bytes);
    const auto res = client.Post(req.path, req.headers, req.body, req.content_type);
    if (!res) {
      const auto err = res.error();
      if (err == httplib::Error::Read || err == httplib::Error::Write ||
          err == httplib::Error::ConnectionTimeout) {
        throw Timeout("request to " + config.endpoint + " timed out (" + httplib::to_string(err) +
                      ")");
      }
      throw RemoteError("request to " + config.endpoint + " failed: " + httplib::to_string(err));
    }

    const int status = res->status;
    const std::string& body = res->body;
    const bool throttled =
        status == 429 || (config.provider == Provider::Aws && status == 400 &&
                          (aws_error_is(body, "ThrottlingException") ||
                           aws_error_is(body, "ProvisionedThroughputExceededException")));
    const bool retryable = throttled || (status >= 500 && status <= 599);
    if (retryable) {
      if (retries < config.max_retries) {
        const double scale = std::pow(config.backoff_factor, retries);
        std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(
            static_cast<double>(config.backoff_base.count()) * scale));
        ++retries;
        continue;
      }
      if (throttled) throw RateLimited(retries + 1);
      throw ProtocolError(status, core::sha256_hex(body));
    }
    if (status == 401 || status == 403 ||
        (config.provider == Provider::Aws && status == 400 &&
         (aws_error_is(body, "UnrecognizedClientException") ||
          aws_error_is(body, "InvalidSignatureException") ||
          aws_error_is(body, "AccessDeniedException")))) {
      throw AuthError("provider rejected credentials (status " + std::to_string(status) + ")");
    }
    if (status != 200) throw ProtocolError(status, core::sha256_hex(body));

    RemoteOutcome out{parse_response(config.provider, body), retries};
    out.prediction.subject_id = subject_id;
    out.prediction.estimator_id = config.estimator_id;
    out.prediction.latency_ms = std::chrono::duration<double, std::milli>(
                                    std::chrono::steady_clock::now() - started)
                                    .count();
    return out;
  }
}

RemoteAdapter::RemoteAdapter(ClientConfig config, std::filesystem::path image_root)
    : config_(std::move(config)), image_root_(std::move(image_root)) {}

Capabilities RemoteAdapter::capabilities() const {
  return Capabilities{config_.provider == Provider::Aws, false, true, false};
}

core::Prediction RemoteAdapter::predict(const core::SubjectRecord& subject) {
  const auto path = image_root_ / subject.image_ref;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read image '" + path.string() + "'");
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return remote_predict(config_, bytes, subject.subject_id).prediction;
}

}  // namespace agestack::estimators
