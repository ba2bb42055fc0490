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

#include "simforge/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "simforge/errors.hpp"

namespace simforge::report {

void Report::finalize()
{
    std::sort(results.begin(), results.end(), [](const SourceResult& a, const SourceResult& b) {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        return a.source_id < b.source_id;
    });
    overall_score = results.empty() ? 0.0 : results.front().score;
}

namespace {

std::string fixed(double value, int digits)
{
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", digits, value);
    return buffer;
}

const char* kind_name(DocKind kind)
{
    return kind == DocKind::Code ? "code" : "text";
}

nlohmann::json channels_to_json(const decision::ChannelScores& channels)
{
    nlohmann::json j = nlohmann::json::object();
    if (channels.lexical) j["lexical"] = *channels.lexical;
    if (channels.fingerprint) j["fingerprint"] = *channels.fingerprint;
    if (channels.semantic) j["semantic"] = *channels.semantic;
    if (channels.structural) j["structural"] = *channels.structural;
    if (channels.stylometric) j["stylometric"] = *channels.stylometric;
    return j;
}

std::string render_json(const Report& report)
{
    nlohmann::json root;
    root["version"] = 1;
    root["query"] = {{"id", report.query.id},
                     {"kind", kind_name(report.query.kind)},
                     {"name", report.query.name}};
    root["overall_score"] = report.overall_score;

    nlohmann::json results = nlohmann::json::array();
    for (const SourceResult& r : report.results) {
        nlohmann::json item;
        item["source"] = r.source_id;
        item["score"] = r.score;
        item["verdict"] = decision::verdict_name(r.verdict);
        item["channels"] = channels_to_json(r.channels);
        nlohmann::json evidence = nlohmann::json::array();
        for (const EvidenceRecord& e : r.evidence) {
            nlohmann::json entry;
            entry["channel"] = channel_name(e.match.channel);
            entry["query_span"] =
                nlohmann::json::array({e.match.query_span.begin, e.match.query_span.end});
            entry["source_span"] =
                nlohmann::json::array({e.match.source_span.begin, e.match.source_span.end});
            entry["strength"] = e.match.strength;
            entry["excerpt"] = e.excerpt;
            evidence.push_back(std::move(entry));
        }
        item["evidence"] = std::move(evidence);
        results.push_back(std::move(item));
    }
    root["results"] = std::move(results);

    root["config"] = {
        {"k", report.config.k},
        {"w", report.config.w},
        {"weights",
         {{"lexical", report.config.weights.lexical},
          {"fingerprint", report.config.weights.fingerprint},
          {"semantic", report.config.weights.semantic},
          {"structural", report.config.weights.structural},
          {"stylometric", report.config.weights.stylometric}}},
        {"thresholds",
         {{"t_low", report.config.thresholds.t_low}, {"t_copy", report.config.thresholds.t_copy}}},
        {"tool_version", report.config.tool_version},
    };
    return root.dump();
}

void append_channels_line(std::ostringstream& out, const decision::ChannelScores& channels)
{
    out << "  channels:";
    if (channels.lexical) out << " lexical=" << fixed(*channels.lexical, 4);
    if (channels.fingerprint) out << " fingerprint=" << fixed(*channels.fingerprint, 4);
    if (channels.semantic) out << " semantic=" << fixed(*channels.semantic, 4);
    if (channels.structural) out << " structural=" << fixed(*channels.structural, 4);
    if (channels.stylometric) out << " stylometric=" << fixed(*channels.stylometric, 4);
    out << "\n";
}

std::string render_text(const Report& report)
{
    std::ostringstream out;
    out << "query: " << report.query.name << " [" << report.query.id << ", "
        << kind_name(report.query.kind) << "]\n";
    out << "overall score: " << fixed(report.overall_score, 2) << "\n";
    out << "sources: " << report.results.size() << "\n";
    for (const SourceResult& r : report.results) {
        out << "\n";
        out << "source " << r.source_id << "  score " << fixed(r.score, 2) << "  verdict "
            << decision::verdict_name(r.verdict) << "\n";
        append_channels_line(out, r.channels);
        for (const EvidenceRecord& e : r.evidence) {
            out << "  [" << channel_name(e.match.channel) << "] query " << e.match.query_span.begin
                << ".." << e.match.query_span.end << " source " << e.match.source_span.begin
                << ".." << e.match.source_span.end << " strength " << fixed(e.match.strength, 4)
                << "\n";
            if (!e.excerpt.empty()) {
                out << "    \"" << e.excerpt << "\"\n";
            }
        }
    }
    return out.str();
}

std::string html_escape(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

std::string render_html(const Report& report)
{
    std::ostringstream out;
    out << "<!doctype html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n"
        << "<title>similarity report</title>\n"
        << "<style>body{font-family:sans-serif;margin:2em}table{border-collapse:collapse}"
        << "td,th{border:1px solid #999;padding:4px 8px}mark{background:#fde68a}"
        << ".verdict{font-weight:bold}</style>\n</head>\n<body>\n";
    out << "<h1>Similarity report</h1>\n";
    out << "<p>query: <strong>" << html_escape(report.query.name) << "</strong> ["
        << html_escape(report.query.id) << ", " << kind_name(report.query.kind) << "]</p>\n";
    out << "<p>overall score: <strong>" << fixed(report.overall_score, 2) << "</strong></p>\n";
    for (const SourceResult& r : report.results) {
        out << "<section>\n<h2>" << html_escape(r.source_id) << " &mdash; "
            << fixed(r.score, 2) << " &mdash; <span class=\"verdict\">"
            << decision::verdict_name(r.verdict) << "</span></h2>\n";
        out << "<table><tr>";
        if (r.channels.lexical) out << "<th>lexical</th>";
        if (r.channels.fingerprint) out << "<th>fingerprint</th>";
        if (r.channels.semantic) out << "<th>semantic</th>";
        if (r.channels.structural) out << "<th>structural</th>";
        if (r.channels.stylometric) out << "<th>stylometric</th>";
        out << "</tr><tr>";
        if (r.channels.lexical) out << "<td>" << fixed(*r.channels.lexical, 4) << "</td>";
        if (r.channels.fingerprint) out << "<td>" << fixed(*r.channels.fingerprint, 4) << "</td>";
        if (r.channels.semantic) out << "<td>" << fixed(*r.channels.semantic, 4) << "</td>";
        if (r.channels.structural) out << "<td>" << fixed(*r.channels.structural, 4) << "</td>";
        if (r.channels.stylometric) out << "<td>" << fixed(*r.channels.stylometric, 4) << "</td>";
        out << "</tr></table>\n<ul>\n";
        for (const EvidenceRecord& e : r.evidence) {
            out << "<li>[" << channel_name(e.match.channel) << "] tokens "
                << e.match.query_span.begin << ".." << e.match.query_span.end << " &rarr; "
                << e.match.source_span.begin << ".." << e.match.source_span.end << " (strength "
                << fixed(e.match.strength, 4) << ")";
            if (!e.excerpt.empty()) {
                out << "<br><mark>" << html_escape(e.excerpt) << "</mark>";
            }
            out << "</li>\n";
        }
        out << "</ul>\n</section>\n";
    }
    out << "</body>\n</html>\n";
    return out.str();
}

Channel channel_from_name_checked(const std::string& name)
{
    if (name == "fingerprint") return Channel::Fingerprint;
    if (name == "semantic") return Channel::Semantic;
    if (name == "structural") return Channel::Structural;
    if (name == "stylometric") return Channel::Stylometric;
    raise(Errc::FormatError, "unknown evidence channel: " + name);
}

double checked_unit(const nlohmann::json& value, const char* what)
{
    if (!value.is_number()) {
        raise(Errc::FormatError, std::string(what) + " is not a number");
    }
    double v = value.get<double>();
    if (v < 0.0 || v > 1.0) {
        raise(Errc::FormatError, std::string(what) + " out of [0,1]");
    }
    return v;
}

Span parse_span(const nlohmann::json& j, const char* what)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_unsigned()
        || !j[1].is_number_unsigned()) {
        raise(Errc::FormatError, std::string(what) + " is not a [begin,end] pair");
    }
    Span s{j[0].get<std::size_t>(), j[1].get<std::size_t>()};
    if (s.end < s.begin) {
        raise(Errc::FormatError, std::string(what) + " is inverted");
    }
    return s;
}

Report parse_checked(std::string_view bytes)
{
    nlohmann::json root = nlohmann::json::parse(bytes, nullptr, false);
    if (root.is_discarded() || !root.is_object()) {
        raise(Errc::FormatError, "report payload is not valid JSON");
    }
    if (root.value("version", 0) != 1) {
        raise(Errc::FormatError, "unsupported report version");
    }

    Report report;
    const auto& query = root.at("query");
    report.query.id = query.at("id").get<std::string>();
    report.query.kind = query.value("kind", "text") == "code" ? DocKind::Code : DocKind::Text;
    report.query.name = query.value("name", report.query.id);

    if (!root.contains("overall_score") || !root["overall_score"].is_number()) {
        raise(Errc::FormatError, "missing overall_score");
    }
    report.overall_score = root["overall_score"].get<double>();
    if (report.overall_score < 0.0 || report.overall_score > 100.0) {
        raise(Errc::FormatError, "overall_score out of [0,100]");
    }

    for (const auto& item : root.value("results", nlohmann::json::array())) {
        SourceResult r;
        r.source_id = item.at("source").get<std::string>();
        r.score = item.at("score").get<double>();
        if (r.score < 0.0 || r.score > 100.0) {
            raise(Errc::FormatError, "result score out of [0,100]");
        }
        auto verdict = decision::verdict_from_name(item.at("verdict").get<std::string>());
        if (!verdict) {
            raise(Errc::FormatError, "unknown verdict");
        }
        r.verdict = *verdict;
        for (const auto& [name, value] : item.at("channels").items()) {
            double v = checked_unit(value, "channel score");
            if (name == "lexical") {
                r.channels.lexical = v;
            } else if (name == "fingerprint") {
                r.channels.fingerprint = v;
            } else if (name == "semantic") {
                r.channels.semantic = v;
            } else if (name == "structural") {
                r.channels.structural = v;
            } else if (name == "stylometric") {
                r.channels.stylometric = v;
            } else {
                raise(Errc::FormatError, "unknown channel: " + name);
            }
        }
        for (const auto& entry : item.value("evidence", nlohmann::json::array())) {
            EvidenceRecord e;
            e.match.channel = channel_from_name_checked(entry.at("channel").get<std::string>());
            e.match.query_span = parse_span(entry.at("query_span"), "query_span");
            e.match.source_span = parse_span(entry.at("source_span"), "source_span");
            e.match.strength = checked_unit(entry.at("strength"), "strength");
            e.excerpt = entry.value("excerpt", "");
            r.evidence.push_back(std::move(e));
        }
        report.results.push_back(std::move(r));
    }

    const auto& config = root.at("config");
    report.config.k = config.at("k").get<std::size_t>();
    report.config.w = config.at("w").get<std::size_t>();
    const auto& weights = config.at("weights");
    report.config.weights.lexical = weights.at("lexical").get<double>();
    report.config.weights.fingerprint = weights.at("fingerprint").get<double>();
    report.config.weights.semantic = weights.at("semantic").get<double>();
    report.config.weights.structural = weights.at("structural").get<double>();
    report.config.weights.stylometric = weights.at("stylometric").get<double>();
    const auto& thresholds = config.at("thresholds");
    report.config.thresholds.t_low = thresholds.at("t_low").get<double>();
    report.config.thresholds.t_copy = thresholds.at("t_copy").get<double>();
    report.config.tool_version = config.value("tool_version", "");
    return report;
}

} // namespace

std::string render(const Report& report, ReportFormat format)
{
    switch (format) {
    case ReportFormat::Json: return render_json(report);
    case ReportFormat::Text: return render_text(report);
    case ReportFormat::Html: return render_html(report);
    }
    return render_json(report);
}

Report parse_report(std::string_view bytes)
{
    try {
        return parse_checked(bytes);
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::FormatError, std::string("malformed report payload: ") + e.what());
    }
}

} // namespace simforge::report
