#ifndef JNKIT_EXPERIMENT_HPP_
#define JNKIT_EXPERIMENT_HPP_

#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "jnkit/corpus.hpp"
#include "jnkit/errors.hpp"
#include "jnkit/evaluator.hpp"
#include "jnkit/hmm.hpp"
#include "jnkit/maxent.hpp"
#include "jnkit/screener.hpp"

namespace jnkit {

std::string_view toolkit_version();

enum class Task { kPosHmm, kBioMaxent };
std::string_view to_string(Task task);
Task parse_task(std::string_view text);

enum class Transform { kJn, kJj2nn };
std::string_view to_string(Transform transform);
Transform parse_transform(std::string_view text);

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitInternal = 3,
};

/// Maps an exception to the exit code contract: ConfigError -> 1, data and
/// I/O problems -> 2, anything else -> 3.
int exit_code_for(const std::exception& e);

/// A pipeline stage failed; keeps the exit code of the underlying cause.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::exception& cause);

  const std::string& stage() const noexcept { return stage_; }
  int exit_code() const noexcept { return exit_code_; }

 private:
  std::string stage_;
  int exit_code_;
};

struct ExperimentConfig {
  std::string input_path;
  std::uint64_t seed = 1;
  double train_fraction = 0.9;
  /// Carved out of the train part and written to disk only.
  double dev_fraction = 0.0;
  std::optional<Scheme> scheme;
  ScreenConfig screen;
  std::string review_path;
  HmmConfig hmm;
  MaxEntConfig maxent;
  std::set<Task> tasks{Task::kPosHmm, Task::kBioMaxent};
  Transform transform = Transform::kJn;
  TagMap jj2nn_mapping = default_jj2nn_mapping();
  std::string output_dir;

  /// Checks ranges and that tasks is non-empty; ConfigError otherwise.
  void validate() const;
};

/// Applies one `section.key=value` setting. Unknown keys -> ConfigError.
void apply_setting(ExperimentConfig& config, std::string_view key,
                   std::string_view value);

/// Flat key=value lines; '#' starts a comment line.
void apply_config_text(ExperimentConfig& config, std::string_view text);

/// Canonical key=value dump used in manifests (output_dir omitted).
std::string config_snapshot(const ExperimentConfig& config);

struct TaskOutcome {
  EvalReport baseline;
  EvalReport modified;
  DeltaReport delta;
};

struct ExperimentResult {
  std::vector<CandidateRef> candidates;
  SplitIndices split;
  std::map<Task, TaskOutcome> tasks;
  std::string manifest;
};

/// screen -> review -> relabel -> split -> train/evaluate both arms ->
/// compare. Writes every artifact plus manifest.txt and timings.txt under
/// config.output_dir. Failures surface as StageError.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace jnkit

#endif  // JNKIT_EXPERIMENT_HPP_
