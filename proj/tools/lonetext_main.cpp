// lonetext: daily-window instant-message text mining with EMA loneliness
// labels. File-based pipeline stages; every command with a --seed is
// reproducible byte for byte.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lonetext/corpus.hpp"
#include "lonetext/errors.hpp"
#include "lonetext/evaluate.hpp"
#include "lonetext/features.hpp"
#include "lonetext/lda.hpp"
#include "lonetext/mathx.hpp"
#include "lonetext/parallel.hpp"
#include "lonetext/preprocess.hpp"
#include "lonetext/rng.hpp"
#include "lonetext/svm.hpp"
#include "lonetext/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace lonetext;

namespace {

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
}

// Every output directory gets the fully-resolved configuration of the
// command that produced it, sufficient to re-run it.
void write_resolved_config(const fs::path& dir, const std::string& command,
                           ordered_json config) {
    ordered_json root;
    root["command"] = command;
    root["config"] = std::move(config);
    root["resources"] = {{"stopwords_fnv1a64", hex64(stopwords_checksum())},
                         {"jargon_fnv1a64", hex64(jargon_checksum())}};
    write_text(dir / "resolved-config.json", root.dump(2) + "\n");
}

struct IngestArgs {
    std::string messages_path;
    std::string format = "jsonl";
    std::string ema_path;
    std::string kind = "rt";
    std::string out_path;
    double threshold = 50.0;
    bool inclusive_threshold = false;
    int tz_offset_minutes = 0;
    bool sent_only = false;
    std::string stemmer = "porter";
    int min_token_len = 2;
    std::string stopwords_path;
    std::string jargon_path;
};

int run_ingest(const IngestArgs& args) {
    PreprocessConfig prep;
    prep.min_token_len = args.min_token_len;
    prep.stemmer = args.stemmer == "none" ? PreprocessConfig::Stemmer::none
                                          : PreprocessConfig::Stemmer::porter;
    if (!args.stopwords_path.empty()) {
        std::ifstream in(args.stopwords_path, std::ios::binary);
        if (!in) throw DataError("cannot open stopwords file: " + args.stopwords_path);
        std::string word;
        while (std::getline(in, word)) {
            if (!word.empty()) prep.stopwords.insert(word);
        }
    }
    JargonMap jargon =
        args.jargon_path.empty() ? default_jargon() : JargonMap::from_file(args.jargon_path);

    WindowConfig window;
    window.binarize_threshold = args.threshold;
    window.inclusive_threshold = args.inclusive_threshold;
    window.tz_offset_minutes = args.tz_offset_minutes;
    window.sent_only = args.sent_only;

    auto messages = parse_messages(args.messages_path, args.format == "csv"
                                                           ? MessageFormat::csv
                                                           : MessageFormat::jsonl);
    auto ema = parse_ema(args.ema_path);
    Dataset dataset = window_by_day(messages, ema, ema_kind_from_string(args.kind), window, prep,
                                    jargon);
    fs::path out(args.out_path);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    dataset.save(out.string());

    DatasetStats stats = dataset_stats(dataset);
    std::printf("documents=%zu participants=%zu positive_rate=%.6f\n", stats.n_documents,
                stats.n_participants, stats.positive_rate);

    ordered_json config;
    config["messages"] = args.messages_path;
    config["format"] = args.format;
    config["ema"] = args.ema_path;
    config["kind"] = args.kind;
    config["out"] = args.out_path;
    config["threshold"] = args.threshold;
    config["inclusive_threshold"] = args.inclusive_threshold;
    config["tz_offset_minutes"] = args.tz_offset_minutes;
    config["sent_only"] = args.sent_only;
    config["stemmer"] = args.stemmer;
    config["min_token_len"] = args.min_token_len;
    config["stopwords"] = args.stopwords_path;
    config["jargon"] = args.jargon_path;
    write_resolved_config(out.has_parent_path() ? out.parent_path() : fs::path("."), "ingest",
                          std::move(config));
    return 0;
}

struct EvalArgs {
    std::string dataset_path;
    std::string matrix_path;
    std::string labels_path;
    std::string features = "unigram";
    int topics = 10;
    std::string weighting = "tfidf";
    double C = 1.0;
    double cost_factor = 0.0;  // 0 = auto
    int folds = 10;
    bool no_stratified = false;
    bool group_by_participant = false;
    std::size_t min_df = 2;
    double max_df = 0.95;
    int lda_max_iter = 100;
    double lda_tol = 1e-4;
    double alpha = 0.0;
    double eta = 0.0;
    std::uint64_t seed = 0;
    std::string out_dir;
    bool save_model = false;
    int threads = 0;
};

CvConfig build_cv_config(const EvalArgs& args) {
    if (args.folds < 2) throw ContractError("--folds must be >= 2");
    CvConfig config;
    config.features = feature_kind_from_string(args.features);
    config.topics = args.topics;
    config.text_weighting = args.weighting == "count" ? DocTermMatrix::Weighting::count
                                                      : DocTermMatrix::Weighting::tfidf;
    config.svm.C = args.C;
    config.svm.cost_factor = args.cost_factor;
    config.lda.max_iter = args.lda_max_iter;
    config.lda.tol = args.lda_tol;
    config.lda.alpha = args.alpha;
    config.lda.eta = args.eta;
    config.prep.min_df = args.min_df;
    config.prep.max_df_fraction = args.max_df;
    config.folds = args.folds;
    config.stratified = !args.no_stratified;
    config.group_by_participant = args.group_by_participant;
    config.seed = args.seed;
    config.threads = effective_threads(args.threads);
    return config;
}

ordered_json eval_args_json(const EvalArgs& args, const char* mode) {
    ordered_json config;
    config["mode"] = mode;
    config["dataset"] = args.dataset_path;
    config["matrix"] = args.matrix_path;
    config["labels"] = args.labels_path;
    config["features"] = args.features;
    config["topics"] = args.topics;
    config["weighting"] = args.weighting;
    config["C"] = args.C;
    config["cost_factor"] = args.cost_factor;
    config["folds"] = args.folds;
    config["stratified"] = !args.no_stratified;
    config["group_by_participant"] = args.group_by_participant;
    config["min_df"] = args.min_df;
    config["max_df"] = args.max_df;
    config["lda_max_iter"] = args.lda_max_iter;
    config["lda_tol"] = args.lda_tol;
    config["alpha"] = args.alpha;
    config["eta"] = args.eta;
    config["seed"] = args.seed;
    return config;
}

DocTermMatrix load_matrix_with_labels(const std::string& matrix_path,
                                      const std::string& labels_path) {
    DocTermMatrix counts = read_matrix_market(matrix_path);
    counts.labels = read_labels_csv(labels_path, counts.n_docs);
    return counts;
}

void save_full_models(const Dataset& dataset, const CvConfig& config, const fs::path& out) {
    // Final models fitted on the whole dataset, for the topic and
    // word-ranking reports.
    FoldModel model = fit_fold(dataset.token_docs(), dataset.labels(), config,
                               derive_seed(config.seed, "full"));
    model.vocab.save_tsv((out / "vocab.tsv").string());
    model.svm.save((out / "svm_model.json").string());
    if (config.features == FeatureKind::topic) {
        model.lda.save((out / "lda_model.json").string());
    }
}

int run_evaluate(const EvalArgs& args) {
    CvConfig config = build_cv_config(args);
    fs::create_directories(args.out_dir);
    fs::path out(args.out_dir);

    EvalReport report;
    const char* mode;
    if (!args.dataset_path.empty()) {
        mode = "dataset";
        Dataset dataset = Dataset::load(args.dataset_path);
        report = run_cv(dataset, config);
        if (args.save_model) save_full_models(dataset, config, out);
    } else if (!args.matrix_path.empty() && !args.labels_path.empty()) {
        mode = "matrix";
        report = run_cv(load_matrix_with_labels(args.matrix_path, args.labels_path), config);
    } else {
        throw ContractError("need --dataset, or --matrix with --labels");
    }

    write_text(out / "report.json", report.to_json_string());
    write_text(out / "report.csv", report.to_csv());
    write_resolved_config(out, "evaluate", eval_args_json(args, mode));
    std::printf("mean_f1=%.6f baseline_f1=%.6f p=%.6f\n", report.mean.f1,
                report.baseline_mean_f1, report.ttest.p_two_sided);
    return 0;
}

struct SweepArgs {
    EvalArgs eval;
    int t_min = 5;
    int t_max = 200;
    int t_step = 5;
};

int run_sweep(const SweepArgs& args) {
    CvConfig config = build_cv_config(args.eval);
    config.features = FeatureKind::topic;
    fs::create_directories(args.eval.out_dir);
    fs::path out(args.eval.out_dir);

    SweepResult result;
    if (!args.eval.dataset_path.empty()) {
        Dataset dataset = Dataset::load(args.eval.dataset_path);
        result = sweep_topics(dataset, config, args.t_min, args.t_max, args.t_step);
    } else if (!args.eval.matrix_path.empty() && !args.eval.labels_path.empty()) {
        result = sweep_topics(
            load_matrix_with_labels(args.eval.matrix_path, args.eval.labels_path), config,
            args.t_min, args.t_max, args.t_step);
    } else {
        throw ContractError("need --dataset, or --matrix with --labels");
    }

    write_text(out / "sweep.csv", result.to_csv());
    ordered_json best;
    best["best_topics"] = result.best_topics;
    best["mean_f1"] = result.best_report.mean.f1;
    write_text(out / "best.json", best.dump(2) + "\n");
    write_text(out / "best_report.json", result.best_report.to_json_string());

    ordered_json config_json = eval_args_json(args.eval, "sweep");
    config_json["t_min"] = args.t_min;
    config_json["t_max"] = args.t_max;
    config_json["t_step"] = args.t_step;
    write_resolved_config(out, "sweep", std::move(config_json));
    std::printf("best_topics=%d mean_f1=%.6f\n", result.best_topics,
                result.best_report.mean.f1);
    return 0;
}

std::vector<double> read_number_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r" || line[0] == '#') continue;
        try {
            values.push_back(std::stod(line));
        } catch (const std::exception&) {
            throw MalformedRecord(line_no, "cannot parse number \"" + line + "\"");
        }
    }
    return values;
}

int run_ttest(const std::string& a_path, const std::string& b_path) {
    TTestResult result = paired_t_test(read_number_file(a_path), read_number_file(b_path));
    ordered_json j;
    j["t"] = result.t;
    j["df"] = result.df;
    j["p"] = result.p_two_sided;
    j["degenerate"] = result.degenerate;
    std::printf("%s\n", j.dump().c_str());
    return 0;
}

int run_topics(const std::string& model_path, const std::string& vocab_path, int top_n,
               const std::string& out_path) {
    if (top_n < 0) throw ContractError("--top-n must be >= 0");
    std::string report;
    if (top_n > 0) {
        LdaModel model = LdaModel::load(model_path);
        Vocabulary vocab = Vocabulary::load_tsv(vocab_path);
        auto topics = topic_top_words(model, vocab, std::min(top_n, model.V));
        char buf[512];
        for (std::size_t t = 0; t < topics.size(); ++t) {
            for (std::size_t r = 0; r < topics[t].size(); ++r) {
                std::snprintf(buf, sizeof buf, "%zu\t%zu\t%s\t%.6f\n", t, r + 1,
                              topics[t][r].first.c_str(), topics[t][r].second);
                report += buf;
            }
        }
    }
    if (out_path.empty()) {
        std::fputs(report.c_str(), stdout);
    } else {
        fs::path out(out_path);
        if (out.has_parent_path()) fs::create_directories(out.parent_path());
        write_text(out, report);
        ordered_json config{{"model", model_path}, {"vocab", vocab_path}, {"top_n", top_n},
                            {"out", out_path}};
        write_resolved_config(out.has_parent_path() ? out.parent_path() : fs::path("."),
                              "topics", std::move(config));
    }
    return 0;
}

int run_rank_words(const std::string& model_path, const std::string& vocab_path, int top_n,
                   const std::string& out_path) {
    if (top_n < 0) throw ContractError("--top-n must be >= 0");
    std::string report;
    if (top_n > 0) {
        SvmModel model = SvmModel::load(model_path);
        Vocabulary vocab = Vocabulary::load_tsv(vocab_path);
        auto ranked = rank_words_by_weight(model, vocab);
        char buf[512];
        std::size_t n = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(top_n));
        for (std::size_t r = 0; r < n; ++r) {
            std::snprintf(buf, sizeof buf, "%zu\t%s\t%.6f\n", r + 1, ranked[r].first.c_str(),
                          ranked[r].second);
            report += buf;
        }
    }
    if (out_path.empty()) {
        std::fputs(report.c_str(), stdout);
    } else {
        fs::path out(out_path);
        if (out.has_parent_path()) fs::create_directories(out.parent_path());
        write_text(out, report);
        ordered_json config{{"model", model_path}, {"vocab", vocab_path}, {"top_n", top_n},
                            {"out", out_path}};
        write_resolved_config(out.has_parent_path() ? out.parent_path() : fs::path("."),
                              "rank-words", std::move(config));
    }
    return 0;
}

void write_tsv_matrix(const Mat& m, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    char buf[64];
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
            out << buf << (c + 1 == m.cols() ? '\n' : '\t');
        }
    }
}

int run_synth(const std::string& spec_path, const std::string& out_dir) {
    SynthSpec spec = SynthSpec::from_file(spec_path);
    SynthCorpus corpus = generate_corpus(spec);
    fs::create_directories(out_dir);
    fs::path out(out_dir);

    write_matrix_market(corpus.counts, (out / "corpus.mtx").string());
    if (spec.has_label_link) {
        write_labels_csv(corpus.counts.labels, (out / "labels.csv").string());
    }
    write_tsv_matrix(corpus.theta_true, out / "theta_true.tsv");
    write_tsv_matrix(corpus.true_topics, out / "topics_true.tsv");
    {
        std::ofstream tokens(out / "tokens.tsv", std::ios::binary);
        if (!tokens) throw DataError("cannot write tokens.tsv");
        tokens << "doc\tpos\tword\tz\n";
        for (std::size_t d = 0; d < corpus.tokens.size(); ++d) {
            for (std::size_t p = 0; p < corpus.tokens[d].size(); ++p) {
                tokens << d << '\t' << p << '\t' << corpus.tokens[d][p].first << '\t'
                       << corpus.tokens[d][p].second << '\n';
            }
        }
    }
    ordered_json config;
    config["spec"] = spec_path;
    config["out"] = out_dir;
    config["resolved_spec"] = ordered_json::parse(spec.to_json_string());
    write_resolved_config(out, "synth", std::move(config));
    std::printf("docs=%zu terms=%zu labels=%s\n", corpus.counts.n_docs, corpus.counts.n_terms,
                spec.has_label_link ? "yes" : "no");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"daily-window instant-message text mining with EMA loneliness labels"};
    app.require_subcommand(1);

    IngestArgs ingest;
    auto* cmd_ingest = app.add_subcommand("ingest", "parse message and EMA files into a dataset");
    cmd_ingest->add_option("--messages", ingest.messages_path, "messages file")->required();
    cmd_ingest->add_option("--format", ingest.format, "messages format")
        ->check(CLI::IsMember({"jsonl", "csv"}));
    cmd_ingest->add_option("--ema", ingest.ema_path, "EMA responses csv")->required();
    cmd_ingest->add_option("--kind", ingest.kind, "label stream: rt or eod")
        ->required()
        ->check(CLI::IsMember({"rt", "eod"}));
    cmd_ingest->add_option("--out", ingest.out_path, "output dataset json")->required();
    cmd_ingest->add_option("--threshold", ingest.threshold, "binarization threshold");
    cmd_ingest->add_flag("--inclusive-threshold", ingest.inclusive_threshold,
                         "label lonely when score >= threshold instead of >");
    cmd_ingest->add_option("--tz-offset-minutes", ingest.tz_offset_minutes,
                           "day-boundary offset from UTC");
    cmd_ingest->add_flag("--sent-only", ingest.sent_only, "ignore received messages");
    cmd_ingest->add_option("--stemmer", ingest.stemmer, "porter or none")
        ->check(CLI::IsMember({"porter", "none"}));
    cmd_ingest->add_option("--min-token-len", ingest.min_token_len, "minimum token length");
    cmd_ingest->add_option("--stopwords", ingest.stopwords_path, "override stopword list");
    cmd_ingest->add_option("--jargon", ingest.jargon_path, "override jargon map");

    EvalArgs eval;
    auto* cmd_evaluate = app.add_subcommand("evaluate", "stratified cross-validation report");
    auto add_eval_options = [](CLI::App* cmd, EvalArgs& args, bool with_features) {
        cmd->add_option("--dataset", args.dataset_path, "dataset json from ingest");
        cmd->add_option("--matrix", args.matrix_path, "MatrixMarket count matrix");
        cmd->add_option("--labels", args.labels_path, "labels csv for --matrix");
        if (with_features) {
            cmd->add_option("--features", args.features, "unigram, bigram or topics")
                ->check(CLI::IsMember({"unigram", "bigram", "topics"}));
            cmd->add_option("--topics", args.topics, "topic count for --features topics");
            cmd->add_option("--weighting", args.weighting, "tfidf or count for n-gram features")
                ->check(CLI::IsMember({"tfidf", "count"}));
        }
        cmd->add_option("--C", args.C, "SVM cost");
        cmd->add_option("--cost-factor", args.cost_factor,
                        "positive-class cost multiplier (0 = auto class ratio)");
        cmd->add_option("--folds", args.folds, "cross-validation folds");
        cmd->add_flag("--no-stratified", args.no_stratified, "disable stratified folding");
        cmd->add_flag("--group-by-participant", args.group_by_participant,
                      "keep each participant's days in one fold");
        cmd->add_option("--min-df", args.min_df, "prune terms below this document frequency");
        cmd->add_option("--max-df", args.max_df, "prune terms above this document fraction");
        cmd->add_option("--lda-max-iter", args.lda_max_iter, "LDA outer iterations");
        cmd->add_option("--lda-tol", args.lda_tol, "LDA relative ELBO tolerance");
        cmd->add_option("--alpha", args.alpha, "document-topic prior (0 = 1/T)");
        cmd->add_option("--eta", args.eta, "topic-word prior (0 = 1/T)");
        cmd->add_option("--seed", args.seed, "global seed");
        cmd->add_option("--out", args.out_dir, "output directory")->required();
        cmd->add_option("--threads", args.threads, "worker cap (0 = all cores)");
    };
    add_eval_options(cmd_evaluate, eval, true);
    cmd_evaluate->add_flag("--save-model", eval.save_model,
                           "also fit and save models on the full dataset");

    SweepArgs sweep;
    auto* cmd_sweep = app.add_subcommand("sweep", "topic-count sweep by mean F1");
    add_eval_options(cmd_sweep, sweep.eval, false);
    cmd_sweep->add_option("--t-min", sweep.t_min, "smallest topic count");
    cmd_sweep->add_option("--t-max", sweep.t_max, "largest topic count");
    cmd_sweep->add_option("--t-step", sweep.t_step, "topic count step");

    std::string ttest_a, ttest_b;
    auto* cmd_ttest = app.add_subcommand("ttest", "paired Student t-test of two fold files");
    cmd_ttest->add_option("--a", ttest_a, "first value file, one number per line")->required();
    cmd_ttest->add_option("--b", ttest_b, "second value file")->required();

    std::string model_path, vocab_path, report_out;
    int top_n = 10;
    auto* cmd_topics = app.add_subcommand("topics", "top words per topic of a fitted model");
    cmd_topics->add_option("--model", model_path, "lda model json")->required();
    cmd_topics->add_option("--vocab", vocab_path, "vocabulary tsv")->required();
    cmd_topics->add_option("--top-n", top_n, "words per topic");
    cmd_topics->add_option("--out", report_out, "output tsv (default stdout)");

    std::string rank_model_path, rank_vocab_path, rank_out;
    int rank_top_n = 20;
    auto* cmd_rank = app.add_subcommand("rank-words", "terms ranked by SVM weight");
    cmd_rank->add_option("--model", rank_model_path, "svm model json")->required();
    cmd_rank->add_option("--vocab", rank_vocab_path, "vocabulary tsv")->required();
    cmd_rank->add_option("--top-n", rank_top_n, "terms to print");
    cmd_rank->add_option("--out", rank_out, "output tsv (default stdout)");

    std::string synth_spec, synth_out;
    auto* cmd_synth = app.add_subcommand("synth", "generate a synthetic labeled corpus");
    cmd_synth->add_option("--spec", synth_spec, "generator spec json")->required();
    cmd_synth->add_option("--out", synth_out, "output directory")->required();

    try {
        app.parse(argc, argv);
        if (*cmd_ingest) return run_ingest(ingest);
        if (*cmd_evaluate) return run_evaluate(eval);
        if (*cmd_sweep) return run_sweep(sweep);
        if (*cmd_ttest) return run_ttest(ttest_a, ttest_b);
        if (*cmd_topics) return run_topics(model_path, vocab_path, top_n, report_out);
        if (*cmd_rank) return run_rank_words(rank_model_path, rank_vocab_path, rank_top_n, rank_out);
        if (*cmd_synth) return run_synth(synth_spec, synth_out);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return static_cast<int>(e.error_class());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
