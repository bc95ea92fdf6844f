#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "opsum/config.hpp"
#include "opsum/errors.hpp"
#include "opsum/pipeline.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> out_override;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
    auto* c = cmd->add_option("--config", opts.config_path, "pipeline config file");
    if (config_required) c->required();
    cmd->add_option("--seed", opts.seed_override, "override the global rng seed");
    cmd->add_option("--out", opts.out_override, "override the output directory");
}

opsum::PipelineConfig resolve(const CommonOpts& opts) {
    opsum::PipelineConfig config =
        opts.config_path.empty() ? opsum::PipelineConfig{} : opsum::load_config(opts.config_path);
    if (opts.seed_override) config.seed = *opts.seed_override;
    if (opts.out_override) config.out_dir = *opts.out_override;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weakly-supervised aspect-based opinion summarization"};
    app.require_subcommand(1);

    CommonOpts seeds_opts, train_aspects_opts, train_polarity_opts, summarize_opts, evaluate_opts;
    auto* extract_seeds =
        app.add_subcommand("extract-seeds", "rank aspect terms by clarity and write seed file");
    add_common(extract_seeds, seeds_opts);
    auto* train_aspects = app.add_subcommand("train-aspects", "train the aspect model");
    add_common(train_aspects, train_aspects_opts);
    auto* train_polarity =
        app.add_subcommand("train-polarity", "train the multiple-instance sentiment model");
    add_common(train_polarity, train_polarity_opts);
    auto* summarize =
        app.add_subcommand("summarize", "rank opinions and write budgeted summaries");
    add_common(summarize, summarize_opts);
    auto* evaluate = app.add_subcommand("evaluate", "score predictions and summaries");
    add_common(evaluate, evaluate_opts);

    CommonOpts check_opts;
    std::size_t check_trials = 100;
    double check_tolerance = 1e-4;
    auto* gradient_check = app.add_subcommand(
        "gradient-check", "compare analytic gradients against finite differences");
    add_common(gradient_check, check_opts, false);
    gradient_check->add_option("--trials", check_trials, "number of random configurations");
    gradient_check->add_option("--tolerance", check_tolerance, "max allowed relative error");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // 0 for --help, 1 for usage errors (validation family)
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*extract_seeds) opsum::cmd_extract_seeds(resolve(seeds_opts), std::cout);
        if (*train_aspects) opsum::cmd_train_aspects(resolve(train_aspects_opts), std::cout);
        if (*train_polarity) opsum::cmd_train_polarity(resolve(train_polarity_opts), std::cout);
        if (*summarize) opsum::cmd_summarize(resolve(summarize_opts), std::cout);
        if (*evaluate) opsum::cmd_evaluate(resolve(evaluate_opts), std::cout);
        if (*gradient_check) {
            opsum::PipelineConfig config = resolve(check_opts);
            auto summary =
                opsum::run_random_gradient_checks(config.seed, check_trials, &std::cout);
            if (summary.aspect_max_rel_error >= check_tolerance ||
                summary.mil_max_rel_error >= check_tolerance) {
                std::cerr << "gradient check FAILED (tolerance " << check_tolerance << ")\n";
                return 1;
            }
        }
    } catch (const opsum::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const opsum::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const opsum::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
