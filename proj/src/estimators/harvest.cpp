#include "agestack/estimators/harvest.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <thread>

#include "agestack/core/csv.hpp"
#include "agestack/core/manifest.hpp"
#include "agestack/error.hpp"

namespace agestack::estimators {

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const NoFaceDetected*>(&e)) return "NoFaceDetected";
  if (dynamic_cast<const AuthError*>(&e)) return "AuthError";
  if (dynamic_cast<const RateLimited*>(&e)) return "RateLimited";
  if (dynamic_cast<const ProtocolError*>(&e)) return "ProtocolError";
  if (dynamic_cast<const Timeout*>(&e)) return "Timeout";
  if (dynamic_cast<const MissingSubject*>(&e)) return "MissingSubject";
  if (dynamic_cast<const RemoteError*>(&e)) return "RemoteError";
  if (dynamic_cast<const DataError*>(&e)) return "DataError";
  return "Error";
}

HarvestResult harvest(const core::Manifest& manifest,
                      const std::vector<std::shared_ptr<EstimatorAdapter>>& adapters,
                      std::size_t concurrency_limit) {
  if (concurrency_limit == 0) throw UsageError("concurrency_limit must be at least 1");
  {
    std::vector<std::string> ids;
    for (const auto& a : adapters) ids.push_back(a->estimator_id());
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
      throw UsageError("two adapters share an estimator_id");
    }
  }

  const std::size_t n_tasks = manifest.size() * adapters.size();
  std::vector<std::optional<core::Prediction>> results(n_tasks);
  std::vector<std::optional<HarvestFailure>> failures(n_tasks);
  std::vector<std::unique_ptr<std::mutex>> guards;
  for (std::size_t a = 0; a < adapters.size(); ++a) guards.push_back(std::make_unique<std::mutex>());

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t t = next++; t < n_tasks; t = next++) {
      const auto& subject = manifest.records()[t / adapters.size()];
      const std::size_t a = t % adapters.size();
      auto& adapter = *adapters[a];
      try {
        core::Prediction p;
        if (adapter.capabilities().thread_safe) {
          p = adapter.predict(subject);
        } else {
          std::lock_guard lock(*guards[a]);
          p = adapter.predict(subject);
        }
        p.subject_id = subject.subject_id;
        p.estimator_id = adapter.estimator_id();
        core::validate(p);
        results[t] = std::move(p);
      } catch (const std::exception& e) {
        failures[t] = HarvestFailure{subject.subject_id, adapter.estimator_id(), error_kind(e),
                                     e.what()};
      }
    }
  };

  const std::size_t n_threads = std::clamp<std::size_t>(concurrency_limit, 1, std::max<std::size_t>(n_tasks, 1));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }

  HarvestResult out;
  for (auto& r : results) {
    if (r) out.predictions.push_back(std::move(*r));
  }
  for (auto& f : failures) {
    if (f) out.failures.push_back(std::move(*f));
  }
  core::sort_predictions(out.predictions);
  std::sort(out.failures.begin(), out.failures.end(),
            [](const HarvestFailure& a, const HarvestFailure& b) {
              return std::tie(a.subject_id, a.estimator_id) < std::tie(b.subject_id, b.estimator_id);
            });
  return out;
}

std::filesystem::path write_harvest(const HarvestResult& result,
                                    const std::filesystem::path& out_path,
                                    std::string_view comment) {
  core::write_predictions(result.predictions, out_path, comment);
  auto sidecar = out_path;
  sidecar.replace_filename(out_path.stem().string() + ".errors.csv");
  std::ofstream out(sidecar, std::ios::binary);
  if (!out) throw DataError("cannot open '" + sidecar.string() + "' for writing");
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "subject_id,estimator_id,error,message\n";
  for (const auto& f : result.failures) {
    core::csv::write_row(out, {f.subject_id, f.estimator_id, f.kind, f.message});
  }
  return sidecar;
}

}  // namespace agestack::estimators
