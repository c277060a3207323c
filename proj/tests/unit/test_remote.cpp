#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "agestack/core/digest.hpp"
#include "agestack/error.hpp"
#include "agestack/estimators/remote.hpp"
#include "support/fixtures.hpp"
#include "support/mock_provider.hpp"

using namespace agestack;
using namespace agestack::estimators;
using agestack::testkit::MockProvider;

namespace {

const std::filesystem::path kFixtures =
    std::filesystem::path(AGESTACK_SOURCE_DIR) / "tests" / "fixtures" / "remote";

std::string fixture(const std::string& name) { return testkit::read_file(kFixtures / name); }

ClientConfig config_for(Provider p, const MockProvider& mock) {
  ClientConfig c;
  c.provider = p;
  c.estimator_id = std::string(to_string(p));
  c.endpoint = mock.endpoint();
  c.access_key_env = "AGESTACK_TEST_ACCESS_KEY";
  c.secret_key_env = "AGESTACK_TEST_SECRET_KEY";
  c.session_token_env = "AGESTACK_TEST_SESSION_TOKEN";
  c.api_key_env = "AGESTACK_TEST_API_KEY";
  c.backoff_base = std::chrono::milliseconds(1);
  c.timeout = std::chrono::milliseconds(2000);
  return c;
}

class Remote : public ::testing::Test {
 protected:
  void SetUp() override {
    ::setenv("AGESTACK_TEST_ACCESS_KEY", "AKIDEXAMPLE", 1);
    ::setenv("AGESTACK_TEST_SECRET_KEY", "wJalrXUtnFEMI/K7MDENG+bPxRfiCYEXAMPLEKEY", 1);
    ::unsetenv("AGESTACK_TEST_SESSION_TOKEN");
    ::setenv("AGESTACK_TEST_API_KEY", "test-subscription-key", 1);
  }
  MockProvider mock;
};

}  // namespace

TEST_F(Remote, AwsRangeUsesLowBound) {
  mock.script({{200, fixture("aws_detect_faces.json")}});
  const auto out = remote_predict(config_for(Provider::Aws, mock), "jpeg-bytes", "s1");
  EXPECT_EQ(out.prediction.point, 15.0);
  EXPECT_EQ(out.prediction.low, 15.0);
  EXPECT_EQ(out.prediction.high, 22.0);
  EXPECT_EQ(out.prediction.subject_id, "s1");
  EXPECT_EQ(out.retries, 0);
  EXPECT_EQ(out.prediction.raw_digest, core::sha256_hex(fixture("aws_detect_faces.json")));
  ASSERT_TRUE(out.prediction.latency_ms.has_value());

  const auto reqs = mock.requests();
  ASSERT_EQ(reqs.size(), 1u);
  EXPECT_EQ(reqs[0].get_header_value("X-Amz-Target"), "RekognitionService.DetectFaces");
  EXPECT_EQ(reqs[0].get_header_value("Content-Type"), "application/x-amz-json-1.1");
  const auto auth = reqs[0].get_header_value("Authorization");
  EXPECT_EQ(auth.rfind("AWS4-HMAC-SHA256 Credential=AKIDEXAMPLE/", 0), 0u) << auth;
  EXPECT_NE(auth.find("/us-east-1/rekognition/aws4_request"), std::string::npos);
  const auto body = nlohmann::json::parse(reqs[0].body);
  EXPECT_EQ(body.at("Image").at("Bytes"), core::base64_encode("jpeg-bytes"));
}

TEST_F(Remote, AzureAndHowOldPoints) {
  mock.script({{200, fixture("azure_detect.json")}});
  const auto az = remote_predict(config_for(Provider::Azure, mock), "img", "s2");
  EXPECT_EQ(az.prediction.point, 12.4);
  EXPECT_FALSE(az.prediction.low.has_value());
  auto reqs = mock.requests();
  EXPECT_EQ(reqs.back().get_header_value("Ocp-Apim-Subscription-Key"), "test-subscription-key");
  EXPECT_EQ(reqs.back().get_param_value("returnFaceAttributes"), "age");
  EXPECT_EQ(reqs.back().body, "img");

  mock.script({{200, fixture("howold_analyze.json")}});
  const auto ho = remote_predict(config_for(Provider::HowOld, mock), "img", "s3");
  EXPECT_EQ(ho.prediction.point, 17.0);
  reqs = mock.requests();
  EXPECT_EQ(reqs.back().path, "/Home/Analyze");
}

TEST_F(Remote, NoFaceForEveryProvider) {
  mock.script({{200, fixture("aws_no_face.json")}});
  EXPECT_THROW(remote_predict(config_for(Provider::Aws, mock), "x", "s"), NoFaceDetected);
  mock.script({{200, fixture("azure_no_face.json")}});
  EXPECT_THROW(remote_predict(config_for(Provider::Azure, mock), "x", "s"), NoFaceDetected);
  mock.script({{200, fixture("howold_no_face.json")}});
  EXPECT_THROW(remote_predict(config_for(Provider::HowOld, mock), "x", "s"), NoFaceDetected);
}

TEST_F(Remote, RetriesThenSucceeds) {
  mock.script({{429, "{}"}, {429, "{}"}, {429, "{}"}, {200, fixture("azure_detect.json")}});
  const auto out = remote_predict(config_for(Provider::Azure, mock), "x", "s");
  EXPECT_EQ(out.retries, 3);
  EXPECT_EQ(out.prediction.point, 12.4);
  EXPECT_EQ(mock.requests().size(), 4u);
}

TEST_F(Remote, ServerErrorsRetriedAndAwsThrottlingCounts) {
  mock.script({{503, "busy"}, {400, fixture("aws_throttling.json")}, {200, fixture("aws_detect_faces.json")}});
  EXPECT_EQ(remote_predict(config_for(Provider::Aws, mock), "x", "s").retries, 2);
}

TEST_F(Remote, RateLimitedAfterBudget) {
  mock.script({{429, "{}"}});
  auto c = config_for(Provider::Azure, mock);
  c.max_retries = 2;
  EXPECT_THROW(remote_predict(c, "x", "s"), RateLimited);
  EXPECT_EQ(mock.requests().size(), 3u);
}

TEST_F(Remote, PersistentServerErrorIsProtocolError) {
  mock.script({{502, "bad gateway"}});
  auto c = config_for(Provider::Azure, mock);
  c.max_retries = 1;
  try {
    remote_predict(c, "x", "s");
    FAIL();
  } catch (const ProtocolError& e) {
    EXPECT_EQ(e.status(), 502);
    EXPECT_EQ(e.body_digest(), core::sha256_hex("bad gateway"));
  }
}

TEST_F(Remote, AuthFailures) {
  mock.script({{401, fixture("azure_unauthorized.json")}});
  EXPECT_THROW(remote_predict(config_for(Provider::Azure, mock), "x", "s"), AuthError);
  mock.script({{400, fixture("aws_bad_signature.json")}});
  EXPECT_THROW(remote_predict(config_for(Provider::Aws, mock), "x", "s"), AuthError);
  mock.script({{403, "{}"}});
  EXPECT_THROW(remote_predict(config_for(Provider::HowOld, mock), "x", "s"), AuthError);

  ::unsetenv("AGESTACK_TEST_API_KEY");
  EXPECT_THROW(remote_predict(config_for(Provider::Azure, mock), "x", "s"), AuthError);
}

TEST_F(Remote, UnexpectedShapesAndStatuses) {
  mock.script({{200, "<html>not json</html>"}});
  try {
    remote_predict(config_for(Provider::Azure, mock), "x", "s");
    FAIL();
  } catch (const ProtocolError& e) {
    EXPECT_EQ(e.status(), 200);
  }
  mock.script({{404, "missing"}});
  EXPECT_THROW(remote_predict(config_for(Provider::Azure, mock), "x", "s"), ProtocolError);
  mock.script({{200, R"({"FaceDetails":[{"AgeRange":{"Low":30,"High":20}}]})"}});
  EXPECT_THROW(remote_predict(config_for(Provider::Aws, mock), "x", "s"), ProtocolError);
}

TEST_F(Remote, TimeoutIsNotRetried) {
  mock.script({{200, fixture("azure_detect.json"), 600}});
  auto c = config_for(Provider::Azure, mock);
  c.timeout = std::chrono::milliseconds(150);
  EXPECT_THROW(remote_predict(c, "x", "s"), Timeout);
  EXPECT_EQ(mock.requests().size(), 1u);
}

TEST_F(Remote, NonLoopbackRefusedUnlessLive) {
  auto c = config_for(Provider::Azure, mock);
  c.endpoint = "https://westeurope.api.cognitive.microsoft.com";
  EXPECT_THROW(remote_predict(c, "x", "s"), UsageError);
  c.endpoint = "ftp://127.0.0.1";
  EXPECT_THROW(remote_predict(c, "x", "s"), UsageError);
}

TEST(ParseResponse, FixturesOffline) {
  const auto p = parse_response(Provider::Aws, fixture("aws_detect_faces.json"));
  EXPECT_EQ(p.point, *p.low);
  EXPECT_EQ(parse_response(Provider::HowOld, fixture("howold_analyze.json")).point, 17.0);
  EXPECT_THROW(parse_response(Provider::Azure, "{}"), ProtocolError);
  EXPECT_EQ(parse_provider("aws"), Provider::Aws);
  EXPECT_EQ(parse_provider("azure"), Provider::Azure);
  EXPECT_EQ(parse_provider("howold"), Provider::HowOld);
  EXPECT_THROW(parse_provider("kairos"), UsageError);
}

TEST(SigV4, SigningKeyVector) {
  EXPECT_EQ(sigv4_signing_key_hex("wJalrXUtnFEMI/K7MDENG+bPxRfiCYEXAMPLEKEY", "20150830",
                                  "us-east-1", "iam"),
            "c4afb1cc5771d871763a393e44b703571b55cc28424d1a5e86da6ed3c154a4b9");
}

TEST(SigV4, GetVanillaVector) {
  SigV4Request r;
  r.method = "GET";
  r.host = "example.amazonaws.com";
  r.headers = {{"x-amz-date", "20150830T123600Z"}};
  r.amz_date = "20150830T123600Z";
  r.region = "us-east-1";
  r.service = "service";
  EXPECT_EQ(sigv4_canonical_request(r),
            "GET\n/\n\nhost:example.amazonaws.com\nx-amz-date:20150830T123600Z\n\n"
            "host;x-amz-date\n"
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sigv4_authorization(r, "AKIDEXAMPLE", "wJalrXUtnFEMI/K7MDENG+bPxRfiCYEXAMPLEKEY"),
            "AWS4-HMAC-SHA256 Credential=AKIDEXAMPLE/20150830/us-east-1/service/aws4_request, "
            "SignedHeaders=host;x-amz-date, "
            "Signature=5fa00fa31553b73ebf1942676e86291e8372ff2a2260956d9b8aae1d763fbf31");
}

TEST(SigV4, PostWithQueryAndBody) {
  // Expected signature computed with Python's hmac/hashlib.
  SigV4Request r;
  r.method = "POST";
  r.host = "example.amazonaws.com";
  r.query = "Param1=value1";
  r.headers = {{"content-type", "application/x-amz-json-1.1"},
               {"x-amz-date", "20150830T123600Z"},
               {"x-amz-target", "RekognitionService.DetectFaces"}};
  r.body = R"({"a":1})";
  r.amz_date = "20150830T123600Z";
  r.region = "us-east-1";
  r.service = "service";
  const auto auth = sigv4_authorization(r, "AKIDEXAMPLE", "wJalrXUtnFEMI/K7MDENG+bPxRfiCYEXAMPLEKEY");
  EXPECT_NE(auth.find("SignedHeaders=content-type;host;x-amz-date;x-amz-target"), std::string::npos);
  EXPECT_NE(auth.find("Signature=e552ad7acb549dd61d3c11d0d60a794deed97aa4d08ad51600e941b9b2444adf"),
            std::string::npos)
      << auth;
}

TEST_F(Remote, AdapterReadsImageFromRoot) {
  testkit::TempDir dir("remote-adapter");
  testkit::write_file(dir / "img/s1.jpg", "face-bytes");
  mock.script({{200, fixture("azure_detect.json")}});
  RemoteAdapter adapter(config_for(Provider::Azure, mock), dir.path());
  EXPECT_FALSE(adapter.capabilities().deterministic);
  const auto p = adapter.predict(testkit::subject("s1", 12));
  EXPECT_EQ(p.point, 12.4);
  EXPECT_EQ(mock.requests().back().body, "face-bytes");
  EXPECT_THROW(adapter.predict(testkit::subject("missing", 3)), DataError);
}
