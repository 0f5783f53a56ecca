#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "remixgraph/model.hpp"

namespace remixgraph::ingest {

/// One parsed input record before tag normalization and graph insertion.
struct DesignRecord {
    std::size_t line = 0; // 1-based line the record starts on
    std::string id;
    std::string title;
    std::string author;
    std::optional<Timestamp> created_at;
    std::vector<std::string> raw_tags;
    std::vector<std::string> raw_parents;
};

enum class ErrorKind {
    MalformedRecord, // a node record could not be parsed
    MalformedEdge,   // a CSV edge row was unusable
    DuplicateDesign,
    SelfLoop,
    CycleEdge,
};

const char* to_string(ErrorKind kind) noexcept;

struct LineError {
    std::size_t line = 0;
    ErrorKind kind = ErrorKind::MalformedRecord;
    std::string reason;
};

struct ParseResult {
    std::vector<DesignRecord> records;
    std::vector<LineError> errors;
};

/// records_read == records_accepted + duplicates_rejected
///               + self_loops_rejected + malformed_records
struct IngestReport {
    std::size_t records_read = 0;
    std::size_t records_accepted = 0;
    std::size_t duplicates_rejected = 0;
    std::size_t self_loops_rejected = 0;
    std::size_t malformed_records = 0;
    std::size_t edge_rows_rejected = 0;
    std::size_t cycle_edges_rejected = 0;
    std::size_t stubs_created = 0; // unresolved parent references left in the final graph
    std::size_t timestamp_violations = 0;
    std::vector<LineError> details; // parser errors first, then build errors, each in input order

    bool balanced() const noexcept {
        return records_read ==
               records_accepted + duplicates_rejected + self_loops_rejected + malformed_records;
    }
    bool clean() const noexcept { return details.empty(); }
};

struct IngestResult {
    LineageGraph graph;
    IngestReport report;
};

/// Lowercases (ASCII), trims, collapses internal whitespace runs to one
/// space, drops empties and duplicates.
TagSet normalize_tags(const std::vector<std::string>& raw);

/// Accepts RFC 3339 (`2012-06-01T12:00:00Z`, fractional seconds and numeric
/// offsets allowed) or integral epoch seconds given as a string.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Formats as `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_timestamp(Timestamp ts);

/// Newline-delimited JSON objects:
///   {"id": str, "title": str, "author": str, "created_at": str|number|null,
///    "tags": [str], "parents": [str]}
/// Unknown keys are ignored; blank lines are skipped. A bad line becomes a
/// MalformedRecord error and parsing continues. Throws IoError on stream failure.
ParseResult parse_jsonl(std::istream& in);

/// Nodes header `id,title,author,created_at,tags` (tags separated by `|`),
/// edges header `child_id,parent_id`. RFC 4180 quoting is honoured. Throws
/// HeaderMismatch when a non-empty file has the wrong header.
ParseResult parse_csv(std::istream& nodes, std::istream& edges);

/// Inserts records in order. Never throws for data problems; they are
/// reported instead. Duplicate ids keep the first record; edges that would
/// close a cycle are dropped individually.
IngestResult build_graph(const std::vector<DesignRecord>& records);

/// As above, folding the parser's line errors into the report.
IngestResult build_graph(const ParseResult& parsed);

/// Canonical JSONL: one line per non-stub design sorted by id, keys in
/// schema order. Stubs are implied by the parent references.
void write_jsonl(const LineageGraph& graph, std::ostream& out);

/// Human-readable report rendering.
void write_report(const IngestReport& report, std::ostream& out);

} // namespace remixgraph::ingest
