// pmibias: co-occurrence counting, PMI bias estimation, correlation against
// ground-truth proportions and permutation tests.
//
// Exit codes: 0 ok, 1 internal error, 2 configuration error, 3 I/O error.

#include "pmibias/commands.hpp"
#include "pmibias/error.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace pmibias;

namespace {

enum ExitCode : int { kOk = 0, kInternal = 1, kConfig = 2, kIo = 3 };

int report_error(std::string_view kind, const std::string& message, int code) {
    nlohmann::json err = {{"error", kind}, {"message", message}, {"exit_code", code}};
    std::cerr << err.dump() << '\n';
    return code;
}

void warn(const std::string& message) {
    std::cerr << "warning: " << message << '\n';
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    return out;
}

void finish(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) {
        throw IoError("write failed on " + path.string());
    }
}

// Writes through `emit` to `path`, or to stdout when no path was given.
template <class Emit>
void write_to(const std::optional<fs::path>& path, Emit&& emit) {
    if (path) {
        auto out = open_output(*path);
        emit(out);
        finish(out, *path);
    } else {
        emit(std::cout);
    }
}

struct EstimateFlags {
    double smoothing = 0.0;
    std::string se_mode = "full";
    std::string method = "log-odds";
    double ci_level = biasmetric::kDefaultLevel;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--smoothing", smoothing,
                       "value added to every cell; 0.5 is the Haldane-Anscombe correction")
            ->capture_default_str();
        cmd.add_option("--se-mode", se_mode, "full | approx")->capture_default_str();
        cmd.add_option("--method", method, "log-odds | exact")->capture_default_str();
        cmd.add_option("--ci-level", ci_level, "confidence level in (0,1)")->capture_default_str();
    }

    biasmetric::EstimateOptions resolve() const {
        biasmetric::EstimateOptions o;
        o.smoothing = smoothing;
        o.se_mode = biasmetric::parse_se_mode(se_mode);
        o.method = biasmetric::parse_method(method);
        o.level = ci_level;
        if (!(smoothing >= 0.0)) {
            throw ConfigError("--smoothing must be non-negative");
        }
        if (!(ci_level > 0.0 && ci_level < 1.0)) {
            throw ConfigError("--ci-level must lie in (0, 1)");
        }
        return o;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PMI-based word-association bias with confidence intervals and significance tests"};
    app.require_subcommand(1);

    // count
    auto* count = app.add_subcommand("count", "count target-word windows over a corpus");
    fs::path corpus_path;
    fs::path words_path;
    std::optional<fs::path> output_path;
    std::optional<fs::path> vocab_path;
    std::string input_format = "one-doc-per-line";
    commands::CountOptions count_opts;
    bool cross_sentences = false;
    count->add_option("corpus", corpus_path, "corpus file or directory")->required();
    count->add_option("-w,--words", words_path, "word lists JSON")->required();
    count->add_option("-o,--output", output_path, "counts file (default: stdout)");
    count->add_option("--vocab-out", vocab_path, "also write the vocabulary TSV");
    count->add_option("--input-format", input_format,
                      "plain-text | one-doc-per-line | wiki-extracted-json")
        ->capture_default_str();
    count->add_option("--window", count_opts.cooccur.window, "tokens on each side")->capture_default_str();
    count->add_option("--min-count", count_opts.min_count, "minimum word frequency")->capture_default_str();
    count->add_option("--min-doc-tokens", count_opts.min_doc_tokens, "drop shorter documents")
        ->capture_default_str();
    count->add_flag("--per-word", count_opts.per_word, "store one row per target word");
    count->add_flag("--cross-sentences", cross_sentences, "let windows cross sentence boundaries");
    count->add_option("--threads", count_opts.threads, "worker threads (0 = all cores)")
        ->capture_default_str();

    // bias
    auto* bias = app.add_subcommand("bias", "estimate the bias of every context set");
    fs::path counts_path;
    std::string format = "tsv";
    EstimateFlags est;
    bias->add_option("counts", counts_path, "counts file")->required();
    bias->add_option("-w,--words", words_path, "word lists JSON")->required();
    bias->add_option("-o,--output", output_path, "report file (default: stdout)");
    bias->add_option("--format", format, "tsv | json")->capture_default_str();
    est.add_to(*bias);

    // correlate
    auto* corr = app.add_subcommand("correlate", "correlate biases with ground-truth proportions");
    fs::path report_path;
    fs::path truth_path;
    std::optional<fs::path> scatter_path;
    corr->add_option("report", report_path, "bias report (tsv or json)")->required();
    corr->add_option("-t,--truth", truth_path, "ground truth CSV label,percent")->required();
    corr->add_option("-o,--output", output_path, "summary file (default: stdout)");
    corr->add_option("--scatter", scatter_path, "scatter data TSV for plotting");
    corr->add_option("--format", format, "tsv | json")->capture_default_str();

    // permtest
    auto* perm = app.add_subcommand("permtest", "permutation test over target-word re-partitions");
    commands::PermtestOptions perm_opts;
    perm->add_option("counts", counts_path, "per-word counts file")->required();
    perm->add_option("-w,--words", words_path, "word lists JSON")->required();
    perm->add_option("-o,--output", output_path, "result file (default: stdout)");
    perm->add_option("--n-perm", perm_opts.n_perm, "random splits (all splits when fewer exist)")
        ->capture_default_str();
    perm->add_option("--seed", perm_opts.seed, "random seed")->capture_default_str();
    perm->add_option("--threads", perm_opts.threads, "worker threads (0 = all cores)")
        ->capture_default_str();
    perm->add_option("--format", format, "tsv | json")->capture_default_str();
    est.add_to(*perm);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error("config", e.what(), kConfig);
    }

    try {
        if (*count) {
            count_opts.input_format = corpus::parse_input_format(input_format);
            count_opts.cooccur.respect_sentence_boundaries = !cross_sentences;
            const auto lists = study::load_word_lists(words_path);
            const auto result = commands::count_corpus(corpus_path, lists, count_opts);
            for (const auto& w : result.warnings) {
                warn(w);
            }
            write_to(output_path, [&](std::ostream& out) { cooccur::save_counts(result.counts, out); });
            if (vocab_path) {
                corpus::save_vocabulary(result.vocabulary, *vocab_path);
            }
            const auto& s = result.counts.corpus;
            auto& log = output_path ? std::cout : std::cerr;
            log << "files\t" << result.ingest.files << '\n'
                << "documents_read\t" << s.documents_read << '\n'
                << "documents_kept\t" << s.documents_kept << '\n'
                << "records_skipped\t" << s.records_skipped << '\n'
                << "tokens\t" << s.tokens << '\n'
                << "vocabulary\t" << result.vocabulary.size() << '\n'
                << "events\t" << result.counts.total_events << '\n';
        } else if (*bias) {
            const auto fmt = commands::parse_output_format(format);
            const auto options = est.resolve();
            const auto lists = study::load_word_lists(words_path);
            const auto counts = cooccur::load_counts(counts_path);
            const auto report = commands::bias_report(counts, lists, options);
            for (const auto& m : report.messages) {
                warn(m);
            }
            write_to(output_path, [&](std::ostream& out) { commands::write_bias_report(report.rows, out, fmt); });
            if (output_path) {
                commands::print_bias_summary(report.rows, std::cout);
            }
            if (report.warnings > 0) {
                warn(std::to_string(report.warnings) + " row(s) could not be estimated");
            }
        } else if (*corr) {
            const auto fmt = commands::parse_output_format(format);
            std::ifstream in(report_path, std::ios::binary);
            if (!in) {
                throw IoError("cannot open " + report_path.string());
            }
            const auto rows = commands::read_bias_report(in);
            const auto truth = study::load_ground_truth(truth_path);
            const auto result = commands::correlate(rows, truth);
            for (const auto& label : result.unmatched) {
                warn("label '" + label + "' has no counterpart and was not joined");
            }
            for (const auto& label : result.excluded) {
                warn("label '" + label + "' has no estimate and was excluded");
            }
            write_to(output_path, [&](std::ostream& out) {
                commands::write_correlation_summary(result, out, fmt);
            });
            if (output_path) {
                std::cout << "n = " << result.result.n << ", r = " << commands::format_double(result.result.r)
                          << ", weighted r (1/se^2) = "
                          << commands::format_double(result.result.weighted_r.value_or(std::nan(""))) << '\n';
            }
            if (scatter_path) {
                auto out = open_output(*scatter_path);
                commands::write_scatter(result, out);
                finish(out, *scatter_path);
            }
        } else if (*perm) {
            const auto fmt = commands::parse_output_format(format);
            perm_opts.estimate = est.resolve();
            const auto lists = study::load_word_lists(words_path);
            const auto counts = cooccur::load_counts(counts_path);
            const auto rows = commands::permtest(counts, lists, perm_opts);
            write_to(output_path, [&](std::ostream& out) { commands::write_permtest(rows, out, fmt); });
        }
    } catch (const IoError& e) {
        return report_error("io", e.what(), kIo);
    } catch (const FormatError& e) {
        return report_error("format", e.what(), kConfig);
    } catch (const ConfigError& e) {
        return report_error("config", e.what(), kConfig);
    } catch (const ArgumentError& e) {
        return report_error("config", e.what(), kConfig);
    } catch (const UndefinedCorrelationError& e) {
        return report_error("config", e.what(), kConfig);
    } catch (const std::exception& e) {
        return report_error("internal", e.what(), kInternal);
    }
    return kOk;
}
