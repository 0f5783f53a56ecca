#include "remixgraph/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "remixgraph/errors.hpp"

namespace remixgraph::ingest {

namespace {

using nlohmann::json;

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

bool blank(std::string_view s) { return trim(s).empty(); }

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

// --- JSON field helpers ----------------------------------------------------

std::string scalar_id(const json& v, const char* what) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return v.dump();
    throw InvalidArgument(std::string(what) + " must be a string");
}

std::string optional_string(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return {};
    if (!it->is_string()) throw InvalidArgument(std::string("'") + key + "' must be a string");
    return it->get<std::string>();
}

std::vector<std::string> string_list(const json& obj, const char* key, bool allow_integers) {
    std::vector<std::string> out;
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return out;
    if (!it->is_array()) throw InvalidArgument(std::string("'") + key + "' must be an array");
    for (const auto& v : *it) {
        if (v.is_string()) {
            out.push_back(v.get<std::string>());
        } else if (allow_integers && v.is_number_integer()) {
            out.push_back(v.dump());
        } else {
            throw InvalidArgument(std::string("'") + key + "' must contain only strings");
        }
    }
    return out;
}

std::optional<Timestamp> json_timestamp(const json& obj) {
    auto it = obj.find("created_at");
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (it->is_number_integer()) return Timestamp{std::chrono::seconds{it->get<std::int64_t>()}};
    if (it->is_number_float()) {
        const double v = it->get<double>();
        if (v != static_cast<double>(static_cast<std::int64_t>(v))) {
            throw InvalidArgument("'created_at' epoch seconds must be integral");
        }
        return Timestamp{std::chrono::seconds{static_cast<std::int64_t>(v)}};
    }
    if (it->is_string()) {
        auto ts = parse_timestamp(it->get<std::string>());
        if (!ts) throw InvalidArgument("'created_at' is not RFC 3339 or epoch seconds");
        return ts;
    }
    throw InvalidArgument("'created_at' must be a string, number or null");
}

void require_id(const std::string& id) {
    if (blank(id)) throw InvalidArgument("'id' must be non-empty");
}

void require_parents(const std::vector<std::string>& parents) {
    for (const auto& p : parents) {
        if (blank(p)) throw InvalidArgument("parent ids must be non-empty");
    }
}

// --- CSV -------------------------------------------------------------------

// Reads one RFC 4180 record, which may span lines inside quotes. Returns
// false at end of input. `line` is advanced past the consumed lines and
// `start` receives the record's first line. Blank lines are skipped.
bool read_csv_record(std::istream& in, std::size_t& line, std::size_t& start,
                     std::vector<std::string>& fields, std::string& error) {
    fields.clear();
    error.clear();
    std::string text;
    do {
        if (!std::getline(in, text)) {
            if (in.bad()) throw IoError("read failure");
            return false;
        }
        ++line;
        strip_cr(text);
    } while (blank(text));
    start = line;

    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    std::size_t i = 0;
    for (;;) {
        if (i == text.size()) {
            if (!quoted) break;
            std::string next;
            if (!std::getline(in, next)) {
                if (in.bad()) throw IoError("read failure");
                error = "unterminated quoted field";
                return true;
            }
            ++line;
            strip_cr(next);
            field.push_back('\n');
            text = std::move(next);
            i = 0;
            continue;
        }
        const char c = text[i++];
        if (quoted) {
            if (c == '"') {
                if (i < text.size() && text[i] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            was_quoted = false;
        } else if (c == '"' && field.empty() && !was_quoted) {
            quoted = true;
            was_quoted = true;
        } else if (was_quoted) {
            error = "unexpected character after closing quote";
            // consume the rest of the physical line
            i = text.size();
        } else {
            field.push_back(c);
        }
    }
    fields.push_back(std::move(field));
    return true;
}

std::string join_header(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += trim(fields[i]);
    }
    return out;
}

std::vector<std::string> split_tags(std::string_view s) {
    std::vector<std::string> out;
    if (blank(s)) return out;
    std::size_t pos = 0;
    for (;;) {
        auto bar = s.find('|', pos);
        out.emplace_back(s.substr(pos, bar == std::string_view::npos ? bar : bar - pos));
        if (bar == std::string_view::npos) break;
        pos = bar + 1;
    }
    return out;
}

std::string lowercase_collapsed(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char c : trim(raw)) {
        if (is_space(c)) {
            pending_space = true;
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
    }
    return out;
}

} // namespace

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::MalformedRecord: return "malformed_record";
    case ErrorKind::MalformedEdge: return "malformed_edge";
    case ErrorKind::DuplicateDesign: return "duplicate_design";
    case ErrorKind::SelfLoop: return "self_loop";
    case ErrorKind::CycleEdge: return "cycle_edge";
    }
    return "unknown";
}

TagSet normalize_tags(const std::vector<std::string>& raw) {
    std::vector<std::string> tags;
    tags.reserve(raw.size());
    for (const auto& r : raw) {
        auto t = lowercase_collapsed(r);
        if (!t.empty()) tags.push_back(std::move(t));
    }
    return TagSet::from_normalized(std::move(tags));
}

// ---------------------------------------------------------------------------
// Timestamps

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    text = trim(text);
    if (text.empty()) return std::nullopt;

    std::int64_t epoch = 0;
    if (parse_int(text, epoch)) return Timestamp{seconds{epoch}};

    // YYYY-MM-DD[Tt ]HH:MM:SS[.frac](Z|z|+HH:MM|-HH:MM)
    auto digits = [&](std::size_t pos, std::size_t len, int& out) {
        return pos + len <= text.size() && parse_int(text.substr(pos, len), out);
    };
    int y, mo, d, h, mi, s;
    if (text.size() < 20) return std::nullopt;
    if (!digits(0, 4, y) || text[4] != '-' || !digits(5, 2, mo) || text[7] != '-' ||
        !digits(8, 2, d)) {
        return std::nullopt;
    }
    if (text[10] != 'T' && text[10] != 't' && text[10] != ' ') return std::nullopt;
    if (!digits(11, 2, h) || text[13] != ':' || !digits(14, 2, mi) || text[16] != ':' ||
        !digits(17, 2, s)) {
        return std::nullopt;
    }
    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        const std::size_t frac_start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        if (pos == frac_start) return std::nullopt;
    }
    if (pos >= text.size()) return std::nullopt;
    int offset_minutes = 0;
    if (text[pos] == 'Z' || text[pos] == 'z') {
        ++pos;
    } else if (text[pos] == '+' || text[pos] == '-') {
        const int sign = text[pos] == '-' ? -1 : 1;
        int oh, om;
        if (!digits(pos + 1, 2, oh) || pos + 3 >= text.size() || text[pos + 3] != ':' ||
            !digits(pos + 4, 2, om) || oh > 23 || om > 59) {
            return std::nullopt;
        }
        offset_minutes = sign * (oh * 60 + om);
        pos += 6;
    } else {
        return std::nullopt;
    }
    if (pos != text.size()) return std::nullopt;

    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 60) return std::nullopt;
    auto tp = sys_days{ymd} + hours{h} + minutes{mi} + seconds{s} - minutes{offset_minutes};
    return time_point_cast<seconds>(tp);
}

std::string format_timestamp(Timestamp ts) {
    using namespace std::chrono;
    const auto day_point = floor<days>(ts);
    const year_month_day ymd{day_point};
    const hh_mm_ss hms{ts - day_point};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

// ---------------------------------------------------------------------------
// Parsers

ParseResult parse_jsonl(std::istream& in) {
    ParseResult result;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        strip_cr(text);
        if (blank(text)) continue;
        try {
            json obj = json::parse(text);
            if (!obj.is_object()) throw InvalidArgument("record is not a JSON object");
            auto id_it = obj.find("id");
            if (id_it == obj.end()) throw InvalidArgument("missing 'id'");

            DesignRecord rec;
            rec.line = line;
            rec.id = scalar_id(*id_it, "'id'");
            require_id(rec.id);
            rec.title = optional_string(obj, "title");
            rec.author = optional_string(obj, "author");
            rec.created_at = json_timestamp(obj);
            rec.raw_tags = string_list(obj, "tags", false);
            rec.raw_parents = string_list(obj, "parents", true);
            require_parents(rec.raw_parents);
            result.records.push_back(std::move(rec));
        } catch (const json::exception& e) {
            result.errors.push_back({line, ErrorKind::MalformedRecord, e.what()});
        } catch (const InvalidArgument& e) {
            result.errors.push_back({line, ErrorKind::MalformedRecord, e.what()});
        }
    }
    if (in.bad()) throw IoError("read failure");
    return result;
}

ParseResult parse_csv(std::istream& nodes, std::istream& edges) {
    static constexpr std::string_view node_header = "id,title,author,created_at,tags";
    static constexpr std::string_view edge_header = "child_id,parent_id";

    ParseResult result;
    std::vector<std::string> fields;
    std::string error;
    std::size_t line = 0;
    std::size_t start = 0;

    if (read_csv_record(nodes, line, start, fields, error)) {
        if (!error.empty() || join_header(fields) != node_header) {
            throw HeaderMismatch("nodes header must be '" + std::string(node_header) + "'");
        }
        while (read_csv_record(nodes, line, start, fields, error)) {
            try {
                if (!error.empty()) throw InvalidArgument(error);
                if (fields.size() != 5) {
                    throw InvalidArgument("expected 5 fields, found " + std::to_string(fields.size()));
                }
                DesignRecord rec;
                rec.line = start;
                rec.id = fields[0];
                require_id(rec.id);
                rec.title = fields[1];
                rec.author = fields[2];
                if (!blank(fields[3])) {
                    rec.created_at = parse_timestamp(fields[3]);
                    if (!rec.created_at) {
                        throw InvalidArgument("created_at is not RFC 3339 or epoch seconds");
                    }
                }
                rec.raw_tags = split_tags(fields[4]);
                result.records.push_back(std::move(rec));
            } catch (const InvalidArgument& e) {
                result.errors.push_back({start, ErrorKind::MalformedRecord, e.what()});
            }
        }
    }

    // first record per id receives the edges; later duplicates are rejected downstream
    std::unordered_map<std::string, std::size_t> by_id;
    for (std::size_t i = 0; i < result.records.size(); ++i) {
        by_id.emplace(std::string(trim(result.records[i].id)), i);
    }

    line = 0;
    if (read_csv_record(edges, line, start, fields, error)) {
        if (!error.empty() || join_header(fields) != edge_header) {
            throw HeaderMismatch("edges header must be '" + std::string(edge_header) + "'");
        }
        while (read_csv_record(edges, line, start, fields, error)) {
            auto reject = [&](std::string why) {
                result.errors.push_back({start, ErrorKind::MalformedEdge, "edges: " + why});
            };
            if (!error.empty()) {
                reject(error);
                continue;
            }
            if (fields.size() != 2) {
                reject("expected 2 fields, found " + std::to_string(fields.size()));
                continue;
            }
            const auto child = std::string(trim(fields[0]));
            if (child.empty() || blank(fields[1])) {
                reject("empty id");
                continue;
            }
            auto it = by_id.find(child);
            if (it == by_id.end()) {
                reject("unknown child id '" + child + "'");
                continue;
            }
            result.records[it->second].raw_parents.push_back(fields[1]);
        }
    }
    if (nodes.bad() || edges.bad()) throw IoError("read failure");
    return result;
}

// ---------------------------------------------------------------------------
// Graph construction

IngestResult build_graph(const std::vector<DesignRecord>& records) {
    IngestResult out;
    auto& graph = out.graph;
    auto& report = out.report;
    report.records_read = records.size();

    for (const auto& rec : records) {
        std::optional<DesignId> id;
        std::vector<DesignId> parents;
        try {
            id.emplace(rec.id);
            std::unordered_set<std::string> seen;
            for (const auto& raw : rec.raw_parents) {
                DesignId p(raw);
                if (seen.insert(p.value()).second) parents.push_back(std::move(p));
            }
        } catch (const InvalidArgument& e) {
            ++report.malformed_records;
            report.details.push_back({rec.line, ErrorKind::MalformedRecord, e.what()});
            continue;
        }

        if (std::find(parents.begin(), parents.end(), *id) != parents.end()) {
            ++report.self_loops_rejected;
            report.details.push_back(
                {rec.line, ErrorKind::SelfLoop, "design '" + id->value() + "' lists itself as a parent"});
            continue;
        }
        if (auto existing = graph.find(*id); existing && !graph.node(*existing).is_stub) {
            ++report.duplicates_rejected;
            report.details.push_back(
                {rec.line, ErrorKind::DuplicateDesign, "duplicate id '" + id->value() + "'"});
            continue;
        }

        Design design(*id);
        design.title = rec.title;
        design.author = rec.author;
        design.created_at = rec.created_at;
        design.tags = normalize_tags(rec.raw_tags);
        graph.add_design(std::move(design));
        ++report.records_accepted;

        for (const auto& p : parents) {
            graph.ensure_stub(p);
            try {
                graph.add_edge(*id, p);
            } catch (const CycleError& e) {
                ++report.cycle_edges_rejected;
                report.details.push_back({rec.line, ErrorKind::CycleEdge, e.what()});
            }
        }
    }

    report.stubs_created = graph.stub_count();
    report.timestamp_violations = graph.timestamp_violations();
    return out;
}

IngestResult build_graph(const ParseResult& parsed) {
    IngestResult out = build_graph(parsed.records);
    auto& report = out.report;
    for (const auto& e : parsed.errors) {
        if (e.kind == ErrorKind::MalformedRecord) {
            ++report.records_read;
            ++report.malformed_records;
        } else {
            ++report.edge_rows_rejected;
        }
    }
    report.details.insert(report.details.begin(), parsed.errors.begin(), parsed.errors.end());
    return out;
}

// ---------------------------------------------------------------------------
// Writers

void write_jsonl(const LineageGraph& graph, std::ostream& out) {
    std::vector<NodeIndex> order;
    for (NodeIndex i = 0; i < graph.node_count(); ++i) {
        if (!graph.node(i).is_stub) order.push_back(i);
    }
    std::sort(order.begin(), order.end(),
              [&](NodeIndex a, NodeIndex b) { return graph.node(a).id < graph.node(b).id; });

    for (NodeIndex i : order) {
        const auto& d = graph.node(i);
        nlohmann::ordered_json obj;
        obj["id"] = d.id.value();
        obj["title"] = d.title;
        obj["author"] = d.author;
        obj["created_at"] = d.created_at ? nlohmann::ordered_json(format_timestamp(*d.created_at))
                                         : nlohmann::ordered_json(nullptr);
        obj["tags"] = d.tags.values();
        auto parents = nlohmann::ordered_json::array();
        for (NodeIndex p : graph.parent_indices(i)) parents.push_back(graph.node(p).id.value());
        obj["parents"] = std::move(parents);
        out << obj.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace) << '\n';
    }
}

void write_report(const IngestReport& report, std::ostream& out) {
    const std::pair<const char*, std::size_t> rows[] = {
        {"records_read", report.records_read},
        {"records_accepted", report.records_accepted},
        {"duplicates_rejected", report.duplicates_rejected},
        {"self_loops_rejected", report.self_loops_rejected},
        {"malformed_records", report.malformed_records},
        {"edge_rows_rejected", report.edge_rows_rejected},
        {"cycle_edges_rejected", report.cycle_edges_rejected},
        {"stubs_created", report.stubs_created},
        {"timestamp_violations", report.timestamp_violations},
    };
    for (const auto& [name, value] : rows) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%-22s %zu\n", name, value);
        out << buf;
    }
    for (const auto& e : report.details) {
        out << "line " << e.line << ": " << to_string(e.kind) << ": " << e.reason << '\n';
    }
}

} // namespace remixgraph::ingest
