#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "remixgraph/metrics.hpp"
#include "remixgraph/model.hpp"
#include "remixgraph/recommend.hpp"

// Output formats: CSV tables, Graphviz DOT, SVG scatter, summary text/JSON.
// Everything here is byte-deterministic for a given input and uses LF line
// endings.
namespace remixgraph::render {

/// Shortest decimal form that round-trips to the same double.
std::string format_number(double value);

/// RFC 4180 field quoting when the value contains `,`, `"`, CR or LF.
std::string csv_field(std::string_view value);

/// Header `id,betweenness,independence,quadrant`; undefined independence
/// is written as `NA` and a missing quadrant as an empty field.
void write_score_csv(std::span<const metrics::DesignScore> rows, std::ostream& out);

/// Header `id_a,id_b,tag_distance,structural_separation,combined_score`.
void write_pairs_csv(std::span<const recommend::PairCandidate> pairs, std::ostream& out);

/// Digraph with edges child -> parent. Nodes are listed in id order;
/// multi-parent designs are drawn bold boxes and stubs dashed.
void write_dot(const LineageGraph& graph, std::ostream& out);

struct PlotOptions {
    int width = 640;
    int height = 480;
    std::string title = "Multi-parent design scores";
};

/// Self-contained SVG scatter: x = normalized betweenness, y = independence.
/// One `class="marker"` circle per labelled row and two `class="threshold"`
/// lines. Rows without a quadrant are not drawn.
void write_plot_svg(const metrics::Classification& classification, std::ostream& out,
                    const PlotOptions& options = {});

void write_summary_text(const metrics::Summary& summary, std::ostream& out);
void write_summary_json(const metrics::Summary& summary, std::ostream& out);

} // namespace remixgraph::render
