#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "opsum/config.hpp"

namespace opsum {

// Command implementations behind the CLI. Every command is deterministic
// given the config and rerun-safe; inputs are never mutated. Progress goes
// to `log`.

void cmd_extract_seeds(const PipelineConfig& config, std::ostream& log);
void cmd_train_aspects(const PipelineConfig& config, std::ostream& log);
void cmd_train_polarity(const PipelineConfig& config, std::ostream& log);
void cmd_summarize(const PipelineConfig& config, std::ostream& log);
void cmd_evaluate(const PipelineConfig& config, std::ostream& log);

struct RandomCheckSummary {
    double aspect_max_rel_error = 0.0;
    double mil_max_rel_error = 0.0;
    std::size_t aspect_trials = 0;
    std::size_t mil_trials = 0;
    std::size_t checked_parameters = 0;
};

// Randomized tiny-model gradient checks against central finite differences.
// Instances whose hinge margins or pooling maxima sit within 1e-3 of a
// non-differentiable point are redrawn, since finite differences are only
// meaningful where the objective is locally smooth.
RandomCheckSummary run_random_gradient_checks(std::uint64_t seed, std::size_t trials,
                                              std::ostream* log = nullptr);

}  // namespace opsum
