// Copyright 2026 The Simforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "simforge/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "simforge/errors.hpp"
#include "simforge/eval.hpp"
#include "simforge/pipeline.hpp"
#include "simforge/version.hpp"

namespace simforge::cli {

namespace {

int exit_code_for(Errc code)
{
    switch (code) {
    case Errc::IoError:
    case Errc::FormatError:
    case Errc::ProviderUnavailable:
    case Errc::DimensionMismatch:
        return kExitIo;
    default:
        return kExitUsage;
    }
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        raise(Errc::IoError, "cannot open " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        raise(Errc::IoError, "failed reading " + path);
    }
    return buffer.str();
}

struct Flags {
    std::string config_path;
    std::string calibration_path;
    std::string index_path;
    std::string rules_path;
    std::string out_path;
    std::string format = "json";
    std::string provider = "builtin";
    std::string endpoint;
    std::string weights;
    std::string kind;
    std::string lang;
    std::vector<std::string> inputs;
    std::size_t k = 5;
    std::size_t w = 4;
    std::size_t limit = 10;
    std::size_t max_batch = 32;
    int timeout_ms = 5000;
    double t_low = 30.0;
    double t_copy = 0.6;
    double fail_at = 0.0;
};

struct Settings {
    pipeline::PipelineConfig config;
    std::string rules_path;
    std::string format = "json";
    std::optional<double> fail_at;
    std::string out_path;
};

void add_common_options(CLI::App* sub, Flags& f)
{
    sub->add_option("--config", f.config_path, "JSON config file (flags override it)");
    sub->add_option("--calibration", f.calibration_path,
                    "calibration output JSON supplying weights and t_low");
    sub->add_option("--k", f.k, "fingerprint k-gram size");
    sub->add_option("--w", f.w, "winnowing window");
    sub->add_option("--provider", f.provider, "embedding provider: builtin|remote");
    sub->add_option("--endpoint", f.endpoint, "remote embedding endpoint URL");
    sub->add_option("--timeout-ms", f.timeout_ms, "remote request timeout");
    sub->add_option("--max-batch", f.max_batch, "remote batch size");
    sub->add_option("--rules", f.rules_path, "suppression rules JSON");
    sub->add_option("--weights", f.weights,
                    "fusion weights lexical,fingerprint,semantic,structural,stylometric");
    sub->add_option("--t-low", f.t_low, "score below this is original");
    sub->add_option("--t-copy", f.t_copy, "fingerprint containment at or above this is a copy");
    sub->add_option("-o,--out", f.out_path, "write output to this file instead of stdout");
}

decision::FusionWeights parse_weights(const std::string& text)
{
    std::vector<double> values;
    std::stringstream stream(text);
    std::string part;
    while (std::getline(stream, part, ',')) {
        try {
            values.push_back(std::stod(part));
        } catch (const std::exception&) {
            raise(Errc::ValidationError, "weights must be numbers");
        }
    }
    if (values.size() != 5) {
        raise(Errc::ValidationError, "weights need exactly 5 comma-separated values");
    }
    double sum = 0.0;
    for (double v : values) {
        if (v < 0.0) {
            raise(Errc::ValidationError, "weights must be nonnegative");
        }
        sum += v;
    }
    if (sum < 1.0 - 1e-9 || sum > 1.0 + 1e-9) {
        raise(Errc::ValidationError, "weights must sum to 1");
    }
    decision::FusionWeights w;
    w.lexical = values[0];
    w.fingerprint = values[1];
    w.semantic = values[2];
    w.structural = values[3];
    w.stylometric = values[4];
    return w;
}

void apply_config_file(Settings& s, const std::string& path)
{
    nlohmann::json root = nlohmann::json::parse(read_file(path), nullptr, false);
    if (root.is_discarded() || !root.is_object()) {
        raise(Errc::FormatError, "config file is not a JSON object");
    }
    try {
        if (root.contains("k")) s.config.k = root["k"].get<std::size_t>();
        if (root.contains("w")) s.config.w = root["w"].get<std::size_t>();
        if (root.contains("candidate_limit")) {
            s.config.candidate_limit = root["candidate_limit"].get<std::size_t>();
        }
        if (root.contains("weights")) {
            const auto& w = root["weights"];
            s.config.weights.lexical = w.value("lexical", s.config.weights.lexical);
            s.config.weights.fingerprint = w.value("fingerprint", s.config.weights.fingerprint);
            s.config.weights.semantic = w.value("semantic", s.config.weights.semantic);
            s.config.weights.structural = w.value("structural", s.config.weights.structural);
            s.config.weights.stylometric = w.value("stylometric", s.config.weights.stylometric);
        }
        if (root.contains("thresholds")) {
            const auto& t = root["thresholds"];
            s.config.thresholds.t_low = t.value("t_low", s.config.thresholds.t_low);
            s.config.thresholds.t_copy = t.value("t_copy", s.config.thresholds.t_copy);
        }
        if (root.contains("provider")) {
            const auto& p = root["provider"];
            std::string kind = p.value("kind", "builtin");
            if (kind == "remote") {
                s.config.provider.kind = embeddings::ProviderConfig::Kind::Remote;
            } else if (kind == "builtin") {
                s.config.provider.kind = embeddings::ProviderConfig::Kind::Builtin;
            } else {
                raise(Errc::ValidationError, "provider kind must be builtin or remote");
            }
            s.config.provider.endpoint = p.value("endpoint", s.config.provider.endpoint);
            s.config.provider.timeout_ms = p.value("timeout_ms", s.config.provider.timeout_ms);
            s.config.provider.max_batch = p.value("max_batch", s.config.provider.max_batch);
        }
        if (root.contains("rules")) {
            std::filesystem::path rp(root["rules"].get<std::string>());
            if (rp.is_relative()) {
                rp = std::filesystem::path(path).parent_path() / rp;
            }
            s.rules_path = rp.string();
        }
        if (root.contains("format")) s.format = root["format"].get<std::string>();
        if (root.contains("fail_at")) s.fail_at = root["fail_at"].get<double>();
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::FormatError, std::string("malformed config file: ") + e.what());
    }
}

void apply_calibration_file(Settings& s, const std::string& path)
{
    nlohmann::json root = nlohmann::json::parse(read_file(path), nullptr, false);
    if (root.is_discarded() || !root.is_object() || !root.contains("weights")
        || !root.contains("t_low")) {
        raise(Errc::FormatError, "calibration file needs weights and t_low");
    }
    try {
        const auto& w = root["weights"];
        s.config.weights.lexical = w.at("lexical").get<double>();
        s.config.weights.fingerprint = w.at("fingerprint").get<double>();
        s.config.weights.semantic = w.at("semantic").get<double>();
        s.config.weights.structural = w.at("structural").get<double>();
        s.config.weights.stylometric = w.at("stylometric").get<double>();
        s.config.thresholds.t_low = root["t_low"].get<double>();
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::FormatError, std::string("malformed calibration file: ") + e.what());
    }
}

Settings build_settings(const CLI::App* sub, const Flags& f)
{
    Settings s;
    if (sub->count("--config") > 0) {
        apply_config_file(s, f.config_path);
    }
    if (sub->count("--calibration") > 0) {
        apply_calibration_file(s, f.calibration_path);
    }
    if (sub->count("--k") > 0) s.config.k = f.k;
    if (sub->count("--w") > 0) s.config.w = f.w;
    if (sub->get_option_no_throw("--limit") != nullptr && sub->count("--limit") > 0) {
        s.config.candidate_limit = f.limit;
    }
    if (sub->count("--weights") > 0) s.config.weights = parse_weights(f.weights);
    if (sub->count("--t-low") > 0) s.config.thresholds.t_low = f.t_low;
    if (sub->count("--t-copy") > 0) s.config.thresholds.t_copy = f.t_copy;
    if (sub->count("--provider") > 0) {
        if (f.provider == "remote") {
            s.config.provider.kind = embeddings::ProviderConfig::Kind::Remote;
        } else if (f.provider == "builtin") {
            s.config.provider.kind = embeddings::ProviderConfig::Kind::Builtin;
        } else {
            raise(Errc::ValidationError, "provider must be builtin or remote");
        }
    }
    if (sub->count("--endpoint") > 0) s.config.provider.endpoint = f.endpoint;
    if (sub->count("--timeout-ms") > 0) s.config.provider.timeout_ms = f.timeout_ms;
    if (sub->count("--max-batch") > 0) s.config.provider.max_batch = f.max_batch;
    if (sub->count("--rules") > 0) s.rules_path = f.rules_path;
    if (sub->get_option_no_throw("--format") != nullptr && sub->count("--format") > 0) {
        s.format = f.format;
    }
    if (sub->get_option_no_throw("--fail-at") != nullptr && sub->count("--fail-at") > 0) {
        s.fail_at = f.fail_at;
    }
    if (sub->count("--out") > 0) s.out_path = f.out_path;

    if (const char* env = std::getenv("SIMFORGE_EMBED_ENDPOINT")) {
        if (*env != '\0') {
            s.config.provider.endpoint = env;
        }
    }

    if (s.config.k < 1 || s.config.w < 1) {
        raise(Errc::ValidationError, "k and w must be at least 1");
    }
    if (s.config.candidate_limit < 1) {
        raise(Errc::ValidationError, "limit must be at least 1");
    }
    if (s.config.thresholds.t_copy < 0.0 || s.config.thresholds.t_copy > 1.0) {
        raise(Errc::ValidationError, "t-copy must be in [0,1]");
    }
    if (s.fail_at.has_value() && (*s.fail_at < 0.0 || *s.fail_at > 100.0)) {
        raise(Errc::ValidationError, "fail-at must be in [0,100]");
    }
    if (s.format != "json" && s.format != "text" && s.format != "html") {
        raise(Errc::ValidationError, "format must be json, text or html");
    }
    if (s.config.provider.kind == embeddings::ProviderConfig::Kind::Remote
        && s.config.provider.endpoint.empty()) {
        raise(Errc::ValidationError, "remote provider needs --endpoint or SIMFORGE_EMBED_ENDPOINT");
    }
    return s;
}

report::ReportFormat format_from_name(const std::string& name)
{
    if (name == "text") return report::ReportFormat::Text;
    if (name == "html") return report::ReportFormat::Html;
    return report::ReportFormat::Json;
}

void emit(const std::string& payload, const Settings& s, std::ostream& out)
{
    if (s.out_path.empty()) {
        out << payload << "\n";
        return;
    }
    std::ofstream file(s.out_path, std::ios::binary);
    if (!file) {
        raise(Errc::IoError, "cannot open " + s.out_path + " for writing");
    }
    file << payload << "\n";
    if (!file) {
        raise(Errc::IoError, "failed writing " + s.out_path);
    }
}

std::optional<DocKind> kind_from_flag(const std::string& value)
{
    if (value == "text") return DocKind::Text;
    if (value == "code") return DocKind::Code;
    if (value.empty()) return std::nullopt;
    raise(Errc::ValidationError, "kind must be text or code");
}

std::optional<CodeLanguage> lang_from_flag(const std::string& value)
{
    if (value == "clike") return CodeLanguage::CLike;
    if (value == "pythonlike") return CodeLanguage::PythonLike;
    if (value.empty()) return std::nullopt;
    raise(Errc::ValidationError, "lang must be clike or pythonlike");
}

Document ingest_path(const std::string& path, std::uint64_t ordinal,
                     std::optional<DocKind> kind = std::nullopt,
                     std::optional<CodeLanguage> lang = std::nullopt)
{
    corpus::IngestOptions options;
    options.kind = kind;
    options.language = lang;
    options.path_hint = path;
    options.ordinal = ordinal;
    return corpus::ingest_document(read_file(path), options);
}

std::vector<std::string> collect_input_files(const std::vector<std::string>& inputs)
{
    std::vector<std::string> files;
    for (const std::string& input : inputs) {
        std::filesystem::path p(input);
        std::error_code ec;
        if (std::filesystem::is_directory(p, ec)) {
            std::vector<std::string> in_dir;
            for (const auto& entry :
                 std::filesystem::recursive_directory_iterator(p, ec)) {
                if (entry.is_regular_file()) {
                    in_dir.push_back(entry.path().generic_string());
                }
            }
            std::sort(in_dir.begin(), in_dir.end());
            files.insert(files.end(), in_dir.begin(), in_dir.end());
        } else if (std::filesystem::is_regular_file(p, ec)) {
            files.push_back(p.generic_string());
        } else {
            raise(Errc::IoError, "no such file or directory: " + input);
        }
    }
    if (files.empty()) {
        raise(Errc::EmptyInput, "no input files found");
    }
    return files;
}

rules::RuleSet load_rules_or_default(const Settings& s, std::size_t k)
{
    if (s.rules_path.empty()) {
        return {};
    }
    return rules::load_rules(s.rules_path, k);
}

int run_index(const Flags& f, const Settings& s, std::ostream& out, std::ostream& err)
{
    if (s.out_path.empty()) {
        raise(Errc::ValidationError, "index needs -o/--out for the index file");
    }
    auto files = collect_input_files(f.inputs);
    auto kind = kind_from_flag(f.kind);
    auto lang = lang_from_flag(f.lang);

    std::vector<Document> docs;
    docs.reserve(files.size());
    std::uint64_t ordinal = 0;
    for (const std::string& path : files) {
        try {
            docs.push_back(ingest_path(path, ordinal, kind, lang));
        } catch (const Error& e) {
            if (e.code() != Errc::EmptyDocument) {
                throw;
            }
            err << "skipped (no tokens): " << path << "\n";
        }
        ++ordinal;
    }

    auto provider = embeddings::make_provider(s.config.provider);
    auto index = corpus::build_index(docs, s.config.k, s.config.w, *provider);
    corpus::save_index(index, s.out_path);
    out << "indexed " << index.documents.size() << " documents -> " << s.out_path << "\n";
    return kExitOk;
}

int run_check(const Flags& f, const Settings& s, std::ostream& out)
{
    auto index = corpus::load_index(f.index_path);
    auto ruleset = load_rules_or_default(s, index.k);
    auto provider = embeddings::make_provider(s.config.provider);
    Document query = ingest_path(f.inputs.front(), 0);

    auto rep = pipeline::check_document(query, index, s.config, ruleset, *provider);
    emit(report::render(rep, format_from_name(s.format)), s, out);
    if (s.fail_at.has_value() && rep.overall_score >= *s.fail_at) {
        return kExitFailThreshold;
    }
    return kExitOk;
}

int run_compare(const Flags& f, const Settings& s, std::ostream& out)
{
    auto ruleset = load_rules_or_default(s, s.config.k);
    auto provider = embeddings::make_provider(s.config.provider);
    Document a = ingest_path(f.inputs[0], 0);
    Document b = ingest_path(f.inputs[1], 1);

    auto rep = pipeline::compare_documents(a, b, s.config, ruleset, *provider);
    emit(report::render(rep, format_from_name(s.format)), s, out);
    if (s.fail_at.has_value() && rep.overall_score >= *s.fail_at) {
        return kExitFailThreshold;
    }
    return kExitOk;
}

int run_intrinsic(const Flags& f, const Settings& s, std::ostream& out)
{
    auto ruleset = load_rules_or_default(s, s.config.k);
    Document doc = ingest_path(f.inputs.front(), 0);
    auto rep = pipeline::intrinsic_report(doc, s.config, ruleset);
    emit(report::render(rep, format_from_name(s.format)), s, out);
    return kExitOk;
}

int run_calibrate(const Flags& f, const Settings& s, std::ostream& out)
{
    std::optional<corpus::CorpusIndex> index;
    if (!f.index_path.empty()) {
        index = corpus::load_index(f.index_path);
    }
    auto ruleset = load_rules_or_default(s, index ? index->k : s.config.k);
    auto provider = embeddings::make_provider(s.config.provider);
    auto pairs = pipeline::load_labeled_pairs(f.inputs.front());
    auto scored = pipeline::score_labeled_pairs(pairs, s.config, ruleset, *provider,
                                                index ? &*index : nullptr);
    auto result = decision::calibrate_weights(scored);

    nlohmann::json payload;
    payload["t_low"] = result.t_low;
    payload["train_f1"] = result.train_f1;
    payload["weights"] = {{"lexical", result.weights.lexical},
                          {"fingerprint", result.weights.fingerprint},
                          {"semantic", result.weights.semantic},
                          {"structural", result.weights.structural},
                          {"stylometric", result.weights.stylometric}};
    emit(payload.dump(), s, out);
    return kExitOk;
}

int run_eval(const Flags& f, const Settings& s, std::ostream& out)
{
    std::optional<corpus::CorpusIndex> index;
    if (!f.index_path.empty()) {
        index = corpus::load_index(f.index_path);
    }
    auto ruleset = load_rules_or_default(s, index ? index->k : s.config.k);
    auto provider = embeddings::make_provider(s.config.provider);
    auto pairs = pipeline::load_labeled_pairs(f.inputs.front());
    auto scored = pipeline::score_labeled_pairs(pairs, s.config, ruleset, *provider,
                                                index ? &*index : nullptr);

    std::vector<bool> predictions;
    std::vector<bool> labels;
    predictions.reserve(scored.size());
    labels.reserve(scored.size());
    for (const auto& [channels, label] : scored) {
        double score = decision::aggregate(channels, s.config.weights);
        predictions.push_back(score >= s.config.thresholds.t_low);
        labels.push_back(label == decision::PairLabel::Plagiarized);
    }
    emit(eval::metrics_json(eval::confusion(predictions, labels)), s, out);
    return kExitOk;
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"deterministic multi-channel similarity engine for text and source code"};
    app.name("simforge");
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    Flags index_flags;
    CLI::App* index_cmd = app.add_subcommand("index", "ingest documents and save an index");
    index_cmd->add_option("inputs", index_flags.inputs, "files or directories to ingest")
        ->required();
    index_cmd->add_option("--kind", index_flags.kind, "force document kind: text|code");
    index_cmd->add_option("--lang", index_flags.lang, "force code language: clike|pythonlike");
    add_common_options(index_cmd, index_flags);

    Flags check_flags;
    CLI::App* check_cmd =
        app.add_subcommand("check", "check one document against an index");
    check_cmd->add_option("query", check_flags.inputs, "document to check")
        ->required()
        ->expected(1);
    check_cmd->add_option("--index", check_flags.index_path, "index file")->required();
    check_cmd->add_option("--limit", check_flags.limit, "max candidate sources");
    check_cmd->add_option("--format", check_flags.format, "report format: json|text|html");
    check_cmd->add_option("--fail-at", check_flags.fail_at,
                          "exit 1 when the overall score reaches this value");
    add_common_options(check_cmd, check_flags);

    Flags compare_flags;
    CLI::App* compare_cmd = app.add_subcommand("compare", "compare two documents pairwise");
    compare_cmd->add_option("files", compare_flags.inputs, "two documents")
        ->required()
        ->expected(2);
    compare_cmd->add_option("--format", compare_flags.format, "report format: json|text|html");
    compare_cmd->add_option("--fail-at", compare_flags.fail_at,
                            "exit 1 when the overall score reaches this value");
    add_common_options(compare_cmd, compare_flags);

    Flags intrinsic_flags;
    CLI::App* intrinsic_cmd =
        app.add_subcommand("intrinsic", "reference-free stylometric inspection");
    intrinsic_cmd->add_option("file", intrinsic_flags.inputs, "document to inspect")
        ->required()
        ->expected(1);
    intrinsic_cmd->add_option("--format", intrinsic_flags.format,
                              "report format: json|text|html");
    add_common_options(intrinsic_cmd, intrinsic_flags);

    Flags calibrate_flags;
    CLI::App* calibrate_cmd =
        app.add_subcommand("calibrate", "fit fusion weights from labeled pairs");
    calibrate_cmd->add_option("pairs", calibrate_flags.inputs, "labeled pairs JSON")
        ->required()
        ->expected(1);
    calibrate_cmd->add_option("--index", calibrate_flags.index_path,
                              "index supplying idf and fingerprint parameters");
    add_common_options(calibrate_cmd, calibrate_flags);

    Flags eval_flags;
    CLI::App* eval_cmd = app.add_subcommand("eval", "score labeled pairs and print metrics");
    eval_cmd->add_option("pairs", eval_flags.inputs, "labeled pairs JSON")
        ->required()
        ->expected(1);
    eval_cmd->add_option("--index", eval_flags.index_path,
                         "index supplying idf and fingerprint parameters");
    add_common_options(eval_cmd, eval_flags);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e, out, err);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (index_cmd->parsed()) {
            return run_index(index_flags, build_settings(index_cmd, index_flags), out, err);
        }
        if (check_cmd->parsed()) {
            return run_check(check_flags, build_settings(check_cmd, check_flags), out);
        }
        if (compare_cmd->parsed()) {
            return run_compare(compare_flags, build_settings(compare_cmd, compare_flags), out);
        }
        if (intrinsic_cmd->parsed()) {
            return run_intrinsic(intrinsic_flags, build_settings(intrinsic_cmd, intrinsic_flags),
                                 out);
        }
        if (calibrate_cmd->parsed()) {
            return run_calibrate(calibrate_flags, build_settings(calibrate_cmd, calibrate_flags),
                                 out);
        }
        if (eval_cmd->parsed()) {
            return run_eval(eval_flags, build_settings(eval_cmd, eval_flags), out);
        }
        err << "error: no subcommand selected\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    }
}

} // namespace simforge::cli
