#include "service_rag/cli.hpp"

#include <algorithm>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <omp.h>

#include "service_rag/config.hpp"
#include "service_rag/corpus.hpp"
#include "service_rag/datasets.hpp"
#include "service_rag/embedding_cache.hpp"
#include "service_rag/eval.hpp"
#include "service_rag/fs_util.hpp"
#include "service_rag/index.hpp"
#include "service_rag/prompts.hpp"
#include "service_rag/report.hpp"
#include "service_rag/tasks.hpp"
#include "service_rag/text.hpp"

namespace service_rag::cli {

namespace fs = std::filesystem;

ExitStatus exit_status_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::usage: return ExitStatus::usage;
        case ErrorKind::input: return ExitStatus::input;
        case ErrorKind::provider: return ExitStatus::provider;
        case ErrorKind::internal: return ExitStatus::internal;
    }
    return ExitStatus::internal;
}

namespace {

/// Embedding provider plus the optional cache in front of it.
class EmbedderStack {
public:
    explicit EmbedderStack(const AppConfig& cfg) : base_(make_embedding_provider(cfg.embedding)) {
        if (!cfg.cache_dir.empty()) {
            cache_ = std::make_unique<EmbeddingCache>(cfg.cache_dir);
            caching_ = std::make_unique<CachingEmbedder>(*base_, *cache_);
        }
    }

    EmbeddingProvider& get() { return caching_ ? static_cast<EmbeddingProvider&>(*caching_) : *base_; }

private:
    std::unique_ptr<EmbeddingProvider> base_;
    std::unique_ptr<EmbeddingCache> cache_;
    std::unique_ptr<CachingEmbedder> caching_;
};

struct Context {
    AppConfig cfg;
    std::ostream& out;
    std::ostream& err;
};

Corpus load_corpus_arg(const std::string& path, const std::string& format, std::ostream& err) {
    const fs::path p(path);
    if (!fs::exists(p)) throw InputError("corpus not found: " + path);
    CorpusFormat f = detect_corpus_format(p);
    if (format == "jsonl") f = CorpusFormat::jsonl;
    if (format == "text-dir") f = CorpusFormat::text_dir;
    auto corpus = load_corpus(p, f);
    for (const auto& w : corpus.warnings) err << "warning: " << w << "\n";
    return corpus;
}

std::string read_input_text(const std::string& path) {
    if (!fs::exists(path)) throw InputError("input file not found: " + path);
    auto text = read_file_bytes(path);
    if (trim(text).empty()) throw InputError("input file is empty: " + path);
    return text;
}

void emit_text(Context& ctx, const std::string& text, const std::string& output_path) {
    if (output_path.empty()) {
        ctx.out << text;
        if (text.empty() || text.back() != '\n') ctx.out << '\n';
    } else {
        write_file_atomic(output_path, text.ends_with('\n') ? text : text + "\n");
        ctx.err << "wrote " << output_path << "\n";
    }
}

VectorIndex load_index_arg(const std::string& path, const std::string& model_id) {
    if (!fs::exists(path)) throw InputError("index file not found: " + path);
    return VectorIndex::load(path, model_id);
}

// ---------------------------------------------------------------------------

struct IngestArgs {
    std::string corpus;
    std::string format = "auto";
};

void cmd_ingest(Context& ctx, const IngestArgs& a) {
    const auto corpus = load_corpus_arg(a.corpus, a.format, ctx.err);
    std::size_t messages = 0;
    for (const auto& inc : corpus.incidents) messages += inc.exchange.size();
    ctx.out << "incidents: " << corpus.incidents.size() << "\n";
    ctx.out << "messages: " << messages << "\n";
    for (const auto& inc : corpus.incidents) ctx.out << inc.id << "\n";
}

struct IndexArgs {
    std::string corpus;
    std::string format = "auto";
    std::string index_path;
    std::size_t chunk_size = 1000;
    std::size_t overlap = 20;
};

void cmd_index(Context& ctx, const IndexArgs& a) {
    const auto corpus = load_corpus_arg(a.corpus, a.format, ctx.err);
    const auto chunks = chunk_corpus(corpus, ctx.cfg.chunker);
    EmbedderStack embedder(ctx.cfg);

    std::vector<std::string> texts;
    texts.reserve(chunks.size());
    for (const auto& c : chunks) texts.push_back(c.text);
    const auto embeddings = texts.empty() ? std::vector<Embedding>{} : embedder.get().embed(texts);
    if (embeddings.empty()) throw InputError("corpus has no text to index: " + a.corpus);

    VectorIndex index(embedder.get().model_id(), embeddings.front().dim());
    index.add(chunks, embeddings);
    index.save(a.index_path);

    ctx.out << "incidents: " << corpus.incidents.size() << "\n";
    ctx.out << "chunks: " << chunks.size() << "\n";
    ctx.out << "entries: " << index.size() << "\n";
    ctx.out << "model: " << index.model_id() << "\n";
    ctx.out << "dim: " << index.dim() << "\n";
    ctx.err << "wrote " << a.index_path << "\n";
}

struct CorrectArgs {
    std::string input;
    std::string output;
};

void cmd_correct(Context& ctx, const CorrectArgs& a) {
    const auto text = read_input_text(a.input);
    auto chat = make_chat_provider(ctx.cfg);
    const auto r = correct_text(text, *chat, ctx.cfg.chat);
    ctx.err << "words: " << r.words_original << " -> " << r.words_corrected << "\n";
    emit_text(ctx, r.corrected_text, a.output);
}

struct SummarizeArgs {
    std::string input;
    std::size_t words = 100;
    std::string output;
};

void cmd_summarize(Context& ctx, const SummarizeArgs& a) {
    const auto text = read_input_text(a.input);
    auto chat = make_chat_provider(ctx.cfg);
    const auto r = summarize(fs::path(a.input).stem().string(), text, a.words, *chat, ctx.cfg.chat);
    ctx.err << "summary words: " << r.summary_words << " (target " << r.target_words << ")\n";
    emit_text(ctx, r.summary_text, a.output);
}

struct AskArgs {
    std::string question;
    std::string index_path;
    std::size_t k = 2;
};

void cmd_ask(Context& ctx, const AskArgs& a) {
    if (trim(a.question).empty()) throw InputError("question is empty");
    EmbedderStack embedder(ctx.cfg);
    const auto index = load_index_arg(a.index_path, embedder.get().model_id());
    auto chat = make_chat_provider(ctx.cfg);

    const auto r = answer_question(a.question, index, embedder.get(), *chat, a.k, ctx.cfg.chat);
    for (const auto& h : r.hits) {
        ctx.err << fmt::format("hit {}: {}#{} similarity {:.4f}\n", h.rank, h.chunk.incident_id, h.chunk.seq,
                               h.similarity);
    }
    emit_text(ctx, r.answer_text, {});
    if (!r.answered) ctx.err << "answered: false\n";
}

struct EvalCorrectionArgs {
    std::string emails;
    std::size_t errors = 10;
    std::uint64_t seed = 1;
};

void cmd_eval_correction(Context& ctx, const EvalCorrectionArgs& a) {
    if (!fs::exists(a.emails)) throw InputError("emails file not found: " + a.emails);
    const auto emails = load_reference_emails(a.emails);

    // Inject everything up front so bad inputs fail before any provider call.
    std::vector<TypoInjection> injected;
    for (std::size_t i = 0; i < emails.size(); ++i) {
        TypoInjectorConfig tc;
        tc.seed = a.seed + i;
        tc.error_count = emails[i].errors ? emails[i].errors : a.errors;
        try {
            injected.push_back(inject_typos(emails[i].text, tc));
        } catch (const InputError& e) {
            throw InputError("email '" + emails[i].id + "': " + e.what());
        }
    }

    auto chat = make_chat_provider(ctx.cfg);
    CorrectionReport report;
    for (std::size_t i = 0; i < emails.size(); ++i) {
        const auto corrected = correct_text(injected[i].corrupted_text, *chat, ctx.cfg.chat);
        report.rows.push_back(
            eval_correction(emails[i].id, emails[i].text, injected[i].corrupted_text, corrected.corrected_text));
    }
    write_report_files(ctx.cfg.out_dir, "correction", report);
    ctx.out << render_report(report, ReportFormat::markdown);
}

struct EvalSummariesArgs {
    std::string corpus;
    std::string format = "auto";
    std::vector<std::size_t> targets = {100, 200, 500};
};

void cmd_eval_summaries(Context& ctx, const EvalSummariesArgs& a) {
    const auto corpus = load_corpus_arg(a.corpus, a.format, ctx.err);
    if (std::find(a.targets.begin(), a.targets.end(), std::size_t{0}) != a.targets.end()) {
        throw UsageError("--targets values must be positive");
    }
    auto chat = make_chat_provider(ctx.cfg);
    EmbedderStack embedder(ctx.cfg);

    SummaryReport report;
    for (const auto& inc : corpus.incidents) {
        const auto source = incident_document(inc);
        for (auto target : a.targets) {
            const auto s = summarize(inc.id, source, target, *chat, ctx.cfg.chat);
            report.rows.push_back(eval_summary(source, s, embedder.get(), ctx.cfg.reading_wpm));
        }
    }
    write_report_files(ctx.cfg.out_dir, "summaries", report);
    ctx.out << render_report(report, ReportFormat::markdown);
}

struct EvalRetrievalArgs {
    std::string index_path;
    std::string queries;
    std::vector<std::size_t> k_sweep = {1, 2, 3};
};

void cmd_eval_retrieval(Context& ctx, const EvalRetrievalArgs& a) {
    if (!fs::exists(a.queries)) throw InputError("queries file not found: " + a.queries);
    if (std::find(a.k_sweep.begin(), a.k_sweep.end(), std::size_t{0}) != a.k_sweep.end()) {
        throw UsageError("--k-sweep values must be positive");
    }
    const auto queries = load_queries(a.queries);
    EmbedderStack embedder(ctx.cfg);
    const auto index = load_index_arg(a.index_path, embedder.get().model_id());

    std::vector<RetrievalEvalReport> reports;
    for (auto k : a.k_sweep) reports.push_back(eval_retrieval(queries, index, embedder.get(), k));
    write_report_files(ctx.cfg.out_dir, "retrieval", reports);
    ctx.out << render_report(std::span<const RetrievalEvalReport>(reports), ReportFormat::markdown);
}

struct EvalAnswersArgs {
    std::string index_path;
    std::string queries;
    std::string answers;
    std::size_t k = 2;
};

void cmd_eval_answers(Context& ctx, const EvalAnswersArgs& a) {
    if (a.queries.empty() == a.answers.empty()) throw UsageError("give exactly one of --queries or --answers");
    const auto& input = a.queries.empty() ? a.answers : a.queries;
    if (!fs::exists(input)) throw InputError("input file not found: " + input);

    std::vector<RetrievalQuery> queries;
    std::vector<AnswerRecord> answers;
    if (!a.queries.empty()) {
        queries = load_queries(a.queries);
    } else {
        answers = load_answers(a.answers);
    }
    EmbedderStack embedder(ctx.cfg);
    const auto index = load_index_arg(a.index_path, embedder.get().model_id());

    if (!queries.empty()) {
        auto chat = make_chat_provider(ctx.cfg);
        for (const auto& q : queries) {
            const auto r = answer_question(q.text, index, embedder.get(), *chat, a.k, ctx.cfg.chat);
            answers.push_back({q.id, q.truth_incident_id, r.answer_text});
        }
    }
    const auto matrix = eval_answers(answers, index, embedder.get());
    write_report_files(ctx.cfg.out_dir, "answers_matrix", matrix);
    ctx.out << render_report(matrix, ReportFormat::markdown);
}

struct ParaphraseArgs {
    std::string corpus;
    std::string format = "auto";
    std::string incident;
    std::size_t n = 10;
    std::string output;
};

void cmd_paraphrase(Context& ctx, const ParaphraseArgs& a) {
    const auto corpus = load_corpus_arg(a.corpus, a.format, ctx.err);
    const auto* inc = corpus.find(a.incident);
    if (!inc) throw InputError("incident '" + a.incident + "' not found in " + a.corpus);
    auto chat = make_chat_provider(ctx.cfg);

    const auto prompt = render_paraphrase_prompt(inc->request_text, a.n);
    const auto reply = chat->complete(prompt.messages, ctx.cfg.chat);
    const auto variants = parse_paraphrases(reply);
    if (variants.empty()) throw ProviderError("paraphrase reply contained no usable variants");
    if (variants.size() != a.n) {
        ctx.err << "warning: asked for " << a.n << " paraphrases, got " << variants.size() << "\n";
    }

    std::vector<RetrievalQuery> queries;
    for (std::size_t i = 0; i < variants.size(); ++i) {
        queries.push_back(RetrievalQuery{inc->id + "-p" + std::to_string(i + 1), variants[i], inc->id});
    }
    const fs::path out_path =
        a.output.empty() ? ctx.cfg.out_dir / ("queries_" + inc->id + ".jsonl") : fs::path(a.output);
    write_file_atomic(out_path, queries_to_jsonl(queries));
    ctx.out << out_path.string() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const AppConfig defaults;

    CLI::App app{"LLM toolkit for technical service: text correction, summarization, retrieval-augmented answering "
                 "and their evaluation.",
                 "service-rag"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string provider = "remote";
    std::string base_url = defaults.embedding.endpoint_url;
    std::string embed_model = defaults.embedding.model_name;
    std::string chat_model = defaults.chat.model_name;
    std::string cache_dir;
    std::string out_dir = defaults.out_dir.string();
    std::size_t parallelism = defaults.parallelism;

    auto* o_config = app.add_option("--config", config_path, "TOML configuration file");
    auto* o_provider = app.add_option("--provider", provider, "Embedding and chat backend")
                           ->check(CLI::IsMember({"remote", "mock"}));
    auto* o_base_url = app.add_option("--base-url", base_url, "OpenAI-compatible endpoint base URL");
    auto* o_embed_model = app.add_option("--embed-model", embed_model, "Embedding model name");
    auto* o_chat_model = app.add_option("--chat-model", chat_model, "Chat model name");
    auto* o_cache_dir = app.add_option("--cache-dir", cache_dir, "Embedding cache directory (empty disables)");
    auto* o_out = app.add_option("--out", out_dir, "Output directory for reports");
    auto* o_parallelism = app.add_option("--parallelism", parallelism, "Worker thread bound")
                              ->check(CLI::PositiveNumber);

    IngestArgs ingest_args;
    auto* ingest = app.add_subcommand("ingest", "Validate a corpus and list its incidents");
    ingest->add_option("corpus", ingest_args.corpus, "Corpus JSONL file or text directory")->required();
    ingest->add_option("--format", ingest_args.format, "Corpus format")
        ->check(CLI::IsMember({"auto", "jsonl", "text-dir"}));

    IndexArgs index_args;
    index_args.chunk_size = defaults.chunker.chunk_size_tokens;
    index_args.overlap = defaults.chunker.overlap_tokens;
    auto* index = app.add_subcommand("index", "Chunk and embed a corpus into a vector index file");
    index->add_option("corpus", index_args.corpus, "Corpus JSONL file or text directory")->required();
    index->add_option("--index", index_args.index_path, "Index file to write")->required();
    index->add_option("--format", index_args.format, "Corpus format")
        ->check(CLI::IsMember({"auto", "jsonl", "text-dir"}));
    auto* o_chunk_size = index->add_option("--chunk-size", index_args.chunk_size, "Chunk size in tokens")
                             ->check(CLI::PositiveNumber);
    auto* o_overlap = index->add_option("--overlap", index_args.overlap, "Overlap between chunks in tokens");

    CorrectArgs correct_args;
    auto* correct = app.add_subcommand("correct", "Fix spelling and grammar of a text file");
    correct->add_option("input", correct_args.input, "Text file to correct")->required();
    correct->add_option("-o,--output", correct_args.output, "Write the result here instead of stdout");

    SummarizeArgs summarize_args;
    auto* summarize_cmd = app.add_subcommand("summarize", "Summarize a text file to a target length");
    summarize_cmd->add_option("input", summarize_args.input, "Text file to summarize")->required();
    summarize_cmd->add_option("--words", summarize_args.words, "Target summary length in words")
        ->check(CLI::PositiveNumber);
    summarize_cmd->add_option("-o,--output", summarize_args.output, "Write the result here instead of stdout");

    AskArgs ask_args;
    ask_args.k = defaults.k;
    auto* ask = app.add_subcommand("ask", "Answer a question from an index of historical incidents");
    ask->add_option("question", ask_args.question, "The customer question")->required();
    ask->add_option("--index", ask_args.index_path, "Index file built by 'index'")->required();
    auto* o_ask_k = ask->add_option("--k", ask_args.k, "Number of chunks to retrieve")->check(CLI::PositiveNumber);

    auto* eval = app.add_subcommand("eval", "Run an evaluation and write report files to --out");
    eval->require_subcommand(1);
    eval->fallthrough();

    EvalCorrectionArgs evc_args;
    auto* evc = eval->add_subcommand("correction", "Inject typos into reference emails, correct them, count errors");
    evc->add_option("emails", evc_args.emails, "JSONL of {id, text, errors?} reference emails")->required();
    evc->add_option("--errors", evc_args.errors, "Typos per email when the record has no 'errors'")
        ->check(CLI::PositiveNumber);
    evc->add_option("--seed", evc_args.seed, "Base seed; email i uses seed + i");

    EvalSummariesArgs evs_args;
    auto* evs = eval->add_subcommand("summaries", "Summarize every incident and score the summaries");
    evs->add_option("corpus", evs_args.corpus, "Corpus JSONL file or text directory")->required();
    evs->add_option("--format", evs_args.format, "Corpus format")->check(CLI::IsMember({"auto", "jsonl", "text-dir"}));
    evs->add_option("--targets", evs_args.targets, "Target summary lengths in words")->delimiter(',');
    double reading_wpm = defaults.reading_wpm;
    auto* o_wpm = evs->add_option("--reading-wpm", reading_wpm, "Reading speed for the time-saved estimate")
                      ->check(CLI::PositiveNumber);

    EvalRetrievalArgs evr_args;
    auto* evr = eval->add_subcommand("retrieval", "Proportion of retrieved chunks from the correct incident");
    evr->add_option("--index", evr_args.index_path, "Index file built by 'index'")->required();
    evr->add_option("--queries", evr_args.queries, "JSONL of {id, incident_id, text} queries")->required();
    evr->add_option("--k-sweep", evr_args.k_sweep, "Values of k to evaluate")->delimiter(',');

    EvalAnswersArgs eva_args;
    eva_args.k = defaults.k;
    auto* eva = eval->add_subcommand("answers", "Distance matrix between answers and incidents");
    eva->add_option("--index", eva_args.index_path, "Index file built by 'index'")->required();
    eva->add_option("--queries", eva_args.queries, "JSONL queries to answer with retrieval-augmented generation");
    eva->add_option("--answers", eva_args.answers, "JSONL of {id, incident_id, answer} precomputed answers");
    auto* o_eva_k = eva->add_option("--k", eva_args.k, "Number of chunks to retrieve per query")
                        ->check(CLI::PositiveNumber);

    ParaphraseArgs para_args;
    auto* para = app.add_subcommand("paraphrase", "Generate synthetic reformulations of an incident's request");
    para->add_option("corpus", para_args.corpus, "Corpus JSONL file or text directory")->required();
    para->add_option("--format", para_args.format, "Corpus format")->check(CLI::IsMember({"auto", "jsonl", "text-dir"}));
    para->add_option("--incident", para_args.incident, "Incident id")->required();
    para->add_option("--n", para_args.n, "Number of reformulations")->check(CLI::PositiveNumber);
    para->add_option("-o,--output", para_args.output, "Queries file (default: <out>/queries_<id>.jsonl)");

    // Subcommand help lists the global flags too; they may follow the subcommand.
    std::string global_help = "Global options (before or after the subcommand):\n";
    const auto formatter = std::dynamic_pointer_cast<CLI::Formatter>(app.get_formatter());
    for (const auto* opt : app.get_options()) {
        if (opt != app.get_help_ptr()) global_help += formatter->make_option(opt, false);
    }
    for (auto* sub : {ingest, index, correct, summarize_cmd, ask, eval, evc, evs, evr, eva, para}) {
        sub->footer(global_help);
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : static_cast<int>(ExitStatus::usage);
    }

    try {
        Context ctx{config_path.empty() ? AppConfig{} : load_app_config(config_path), out, err};
        auto& cfg = ctx.cfg;
        apply_env_overrides(cfg);
        if (o_provider->count()) cfg.embedding.kind = cfg.chat_kind = parse_provider_kind(provider);
        if (o_base_url->count()) cfg.embedding.endpoint_url = cfg.chat_endpoint_url = base_url;
        if (o_embed_model->count()) cfg.embedding.model_name = embed_model;
        if (o_chat_model->count()) cfg.chat.model_name = chat_model;
        if (o_cache_dir->count()) cfg.cache_dir = cache_dir;
        if (o_out->count()) cfg.out_dir = out_dir;
        if (o_parallelism->count()) cfg.parallelism = parallelism;
        if (o_chunk_size->count()) cfg.chunker.chunk_size_tokens = index_args.chunk_size;
        if (o_overlap->count()) cfg.chunker.overlap_tokens = index_args.overlap;
        if (o_wpm->count()) cfg.reading_wpm = reading_wpm;
        if (!o_ask_k->count()) ask_args.k = cfg.k;
        if (!o_eva_k->count()) eva_args.k = cfg.k;
        (void)o_config;
        cfg.validate();
        omp_set_num_threads(static_cast<int>(cfg.parallelism));

        if (ingest->parsed()) cmd_ingest(ctx, ingest_args);
        else if (index->parsed()) cmd_index(ctx, index_args);
        else if (correct->parsed()) cmd_correct(ctx, correct_args);
        else if (summarize_cmd->parsed()) cmd_summarize(ctx, summarize_args);
        else if (ask->parsed()) cmd_ask(ctx, ask_args);
        else if (evc->parsed()) cmd_eval_correction(ctx, evc_args);
        else if (evs->parsed()) cmd_eval_summaries(ctx, evs_args);
        else if (evr->parsed()) cmd_eval_retrieval(ctx, evr_args);
        else if (eva->parsed()) cmd_eval_answers(ctx, eva_args);
        else if (para->parsed()) cmd_paraphrase(ctx, para_args);
        return static_cast<int>(ExitStatus::success);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(exit_status_for(e.kind()));
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return static_cast<int>(ExitStatus::internal);
    }
}

}  // namespace service_rag::cli
