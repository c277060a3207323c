#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace agestack {

// Every error raised by the library derives from Error. The CLI maps the
// category to a process exit code.
enum class ErrorCategory { Usage, Data, Remote };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorCategory::Data, what) {}
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorCategory::Usage, what) {}
};

class RemoteError : public Error {
 public:
  explicit RemoteError(const std::string& what) : Error(ErrorCategory::Remote, what) {}
};

// core-data

class SchemaError : public DataError {
 public:
  SchemaError(std::size_t line, std::size_t column, const std::string& reason)
      : DataError("schema error at line " + std::to_string(line) + ", column " +
                  std::to_string(column) + ": " + reason),
        line_(line),
        column_(column),
        reason_(reason) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string reason_;
};

class DuplicateSubjectId : public DataError {
 public:
  explicit DuplicateSubjectId(const std::string& id)
      : DataError("duplicate subject_id '" + id + "'"), id_(id) {}
  const std::string& subject_id() const noexcept { return id_; }

 private:
  std::string id_;
};

class UnderfilledAge : public DataError {
 public:
  UnderfilledAge(int age, std::size_t available, std::size_t quota)
      : DataError("age " + std::to_string(age) + " has " + std::to_string(available) +
                  " candidates, quota is " + std::to_string(quota)),
        age_(age),
        available_(available),
        quota_(quota) {}
  int age() const noexcept { return age_; }
  std::size_t available() const noexcept { return available_; }
  std::size_t quota() const noexcept { return quota_; }

 private:
  int age_;
  std::size_t available_;
  std::size_t quota_;
};

class OutOfRange : public DataError {
 public:
  explicit OutOfRange(const std::string& what) : DataError(what) {}
};

// metrics / stacking

class EmptyInput : public DataError {
 public:
  explicit EmptyInput(const std::string& what) : DataError(what) {}
};

class CoverageMismatch : public DataError {
 public:
  CoverageMismatch(const std::string& estimator_id, std::size_t missing_count)
      : DataError("estimator '" + estimator_id + "' is missing " +
                  std::to_string(missing_count) + " subject(s)"),
        estimator_id_(estimator_id),
        missing_count_(missing_count) {}
  const std::string& estimator_id() const noexcept { return estimator_id_; }
  std::size_t missing_count() const noexcept { return missing_count_; }

 private:
  std::string estimator_id_;
  std::size_t missing_count_;
};

class UnknownEstimator : public DataError {
 public:
  explicit UnknownEstimator(const std::string& id)
      : DataError("unknown estimator '" + id + "'") {}
};

class TooFewSubjects : public DataError {
 public:
  TooFewSubjects(std::size_t n, std::size_t k)
      : DataError("cannot split " + std::to_string(n) + " subjects into " +
                  std::to_string(k) + " folds") {}
};

// learners

class DimensionMismatch : public DataError {
 public:
  explicit DimensionMismatch(const std::string& what) : DataError(what) {}
};

class InvalidHyperparameter : public UsageError {
 public:
  explicit InvalidHyperparameter(const std::string& what) : UsageError(what) {}
};

class NonFiniteLoss : public DataError {
 public:
  explicit NonFiniteLoss(std::size_t epoch)
      : DataError("loss became non-finite at epoch " + std::to_string(epoch)) {}
};

// estimators

class MissingSubject : public DataError {
 public:
  MissingSubject(const std::string& estimator_id, const std::string& subject_id)
      : DataError("estimator '" + estimator_id + "' has no prediction for '" + subject_id +
                  "'") {}
};

class InvalidProfile : public UsageError {
 public:
  explicit InvalidProfile(const std::string& what) : UsageError(what) {}
};

class AuthError : public RemoteError {
 public:
  explicit AuthError(const std::string& what) : RemoteError(what) {}
};

class RateLimited : public RemoteError {
 public:
  explicit RateLimited(int attempts)
      : RemoteError("rate limited after " + std::to_string(attempts) + " attempts") {}
};

class NoFaceDetected : public RemoteError {
 public:
  NoFaceDetected() : RemoteError("no face detected") {}
};

class ProtocolError : public RemoteError {
 public:
  ProtocolError(int status, const std::string& body_digest)
      : RemoteError("protocol error: status " + std::to_string(status) + ", body sha256 " +
                    body_digest),
        status_(status),
        body_digest_(body_digest) {}
  int status() const noexcept { return status_; }
  const std::string& body_digest() const noexcept { return body_digest_; }

 private:
  int status_;
  std::string body_digest_;
};

class Timeout : public RemoteError {
 public:
  explicit Timeout(const std::string& what) : RemoteError(what) {}
};

}  // namespace agestack
