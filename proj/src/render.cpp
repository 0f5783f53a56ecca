#include "remixgraph/render.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <ostream>
#include <vector>

#include <json.hpp>

namespace remixgraph::render {

namespace {

std::string dot_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default:
            // control characters other than tab/newline are not allowed in XML 1.0
            if (static_cast<unsigned char>(c) < 0x20 && c != '\t' && c != '\n') {
                out.push_back(' ');
            } else {
                out.push_back(c);
            }
        }
    }
    return out;
}

std::string fixed(double v, int decimals = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    // avoid "-0.00"
    if (std::string_view(buf).find_first_not_of("-0.") == std::string_view::npos) {
        std::snprintf(buf, sizeof buf, "%.*f", decimals, 0.0);
    }
    return buf;
}

const char* quadrant_colour(metrics::Quadrant q) {
    switch (q) {
    case metrics::Quadrant::Q1: return "#7f7f7f";
    case metrics::Quadrant::Q2: return "#1f77b4";
    case metrics::Quadrant::Q3: return "#ff7f0e";
    case metrics::Quadrant::Q4: return "#d62728";
    }
    return "#000000";
}

} // namespace

std::string format_number(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

std::string csv_field(std::string_view value) {
    if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_score_csv(std::span<const metrics::DesignScore> rows, std::ostream& out) {
    out << "id,betweenness,independence,quadrant\n";
    for (const auto& r : rows) {
        out << csv_field(r.id.value()) << ',' << format_number(r.betweenness) << ','
            << (r.independence ? format_number(*r.independence) : "NA") << ','
            << (r.quadrant ? metrics::to_string(*r.quadrant) : "") << '\n';
    }
}

void write_pairs_csv(std::span<const recommend::PairCandidate> pairs, std::ostream& out) {
    out << "id_a,id_b,tag_distance,structural_separation,combined_score\n";
    for (const auto& p : pairs) {
        out << csv_field(p.id_a.value()) << ',' << csv_field(p.id_b.value()) << ','
            << format_number(p.tag_distance) << ',' << format_number(p.structural_separation) << ','
            << format_number(p.combined_score) << '\n';
    }
}

void write_dot(const LineageGraph& graph, std::ostream& out) {
    std::vector<NodeIndex> order(graph.node_count());
    for (NodeIndex i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](NodeIndex a, NodeIndex b) { return graph.node(a).id < graph.node(b).id; });

    out << "digraph remix {\n";
    out << "  rankdir=BT;\n";
    out << "  node [shape=ellipse];\n";
    for (NodeIndex v : order) {
        const auto& d = graph.node(v);
        out << "  " << dot_quote(d.id.value()) << " [label=" << dot_quote(d.id.value());
        if (d.is_stub) {
            out << ", style=dashed";
        } else if (graph.parent_indices(v).size() >= 2) {
            out << ", shape=box, style=bold";
        }
        out << "];\n";
    }
    for (NodeIndex v : order) {
        for (NodeIndex p : graph.parent_indices(v)) {
            out << "  " << dot_quote(graph.node(v).id.value()) << " -> " << dot_quote(graph.node(p).id.value())
                << ";\n";
        }
    }
    out << "}\n";
}

void write_plot_svg(const metrics::Classification& classification, std::ostream& out,
                    const PlotOptions& options) {
    const double left = 70, right = 20, top = 40, bottom = 55;
    const double w = options.width, h = options.height;
    const double plot_w = w - left - right;
    const double plot_h = h - top - bottom;
    const auto& t = classification.thresholds;

    double x_max = t.betweenness;
    double x_min = std::min(0.0, t.betweenness);
    for (const auto& r : classification.rows) {
        if (r.quadrant) x_max = std::max(x_max, r.betweenness);
    }
    x_max = x_max > x_min ? x_min + (x_max - x_min) * 1.05 : x_min + 1.0;
    const double y_min = std::min(0.0, t.independence);
    const double y_max = std::max(1.0, t.independence);

    auto sx = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
    auto sy = [&](double y) { return top + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h; };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\""
        << options.height << "\" viewBox=\"0 0 " << options.width << ' ' << options.height << "\">\n";
    out << "  <rect x=\"0\" y=\"0\" width=\"" << options.width << "\" height=\"" << options.height
        << "\" fill=\"#ffffff\"/>\n";
    out << "  <text x=\"" << fixed(w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">"
        << xml_escape(options.title) << "</text>\n";

    // axes
    out << "  <line class=\"axis\" x1=\"" << fixed(left) << "\" y1=\"" << fixed(top + plot_h) << "\" x2=\""
        << fixed(left + plot_w) << "\" y2=\"" << fixed(top + plot_h) << "\" stroke=\"#000000\"/>\n";
    out << "  <line class=\"axis\" x1=\"" << fixed(left) << "\" y1=\"" << fixed(top) << "\" x2=\"" << fixed(left)
        << "\" y2=\"" << fixed(top + plot_h) << "\" stroke=\"#000000\"/>\n";

    auto tick_label = [&](double x, double y, const char* anchor, double value) {
        out << "  <text x=\"" << fixed(x) << "\" y=\"" << fixed(y) << "\" text-anchor=\"" << anchor
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(format_number(value))
            << "</text>\n";
    };
    tick_label(left, top + plot_h + 16, "start", x_min);
    tick_label(left + plot_w, top + plot_h + 16, "end", x_max);
    tick_label(left - 6, top + plot_h, "end", y_min);
    tick_label(left - 6, top + 10, "end", y_max);

    out << "  <text x=\"" << fixed(left + plot_w / 2) << "\" y=\"" << fixed(h - 12)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">normalized betweenness</text>\n";
    out << "  <text x=\"18\" y=\"" << fixed(top + plot_h / 2) << "\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 " << fixed(top + plot_h / 2)
        << ")\">independence score</text>\n";

    // quadrant boundaries
    out << "  <line class=\"threshold\" x1=\"" << fixed(sx(t.betweenness)) << "\" y1=\"" << fixed(top)
        << "\" x2=\"" << fixed(sx(t.betweenness)) << "\" y2=\"" << fixed(top + plot_h)
        << "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";
    out << "  <line class=\"threshold\" x1=\"" << fixed(left) << "\" y1=\"" << fixed(sy(t.independence))
        << "\" x2=\"" << fixed(left + plot_w) << "\" y2=\"" << fixed(sy(t.independence))
        << "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";

    for (const auto& r : classification.rows) {
        if (!r.quadrant || !r.independence) continue;
        out << "  <circle class=\"marker\" cx=\"" << fixed(sx(r.betweenness)) << "\" cy=\""
            << fixed(sy(*r.independence)) << "\" r=\"4\" fill=\"" << quadrant_colour(*r.quadrant)
            << "\" fill-opacity=\"0.8\"><title>" << xml_escape(r.id.value()) << " ("
            << metrics::to_string(*r.quadrant) << ")</title></circle>\n";
    }
    out << "</svg>\n";
}

void write_summary_text(const metrics::Summary& s, std::ostream& out) {
    const std::pair<const char*, std::string> rows[] = {
        {"total_designs", std::to_string(s.total_designs)},
        {"stubs", std::to_string(s.stubs)},
        {"edges", std::to_string(s.edges)},
        {"multi_parent", std::to_string(s.multi_parent)},
        {"multi_parent_resolved", std::to_string(s.multi_parent_resolved)},
        {"multi_parent_ratio", format_number(s.multi_parent_ratio)},
        {"components", std::to_string(s.components)},
        {"timestamp_violations", std::to_string(s.timestamp_violations)},
    };
    for (const auto& [name, value] : rows) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%-22s %s\n", name, value.c_str());
        out << buf;
    }
}

void write_summary_json(const metrics::Summary& s, std::ostream& out) {
    nlohmann::ordered_json j;
    j["total_designs"] = s.total_designs;
    j["stubs"] = s.stubs;
    j["edges"] = s.edges;
    j["multi_parent"] = s.multi_parent;
    j["multi_parent_resolved"] = s.multi_parent_resolved;
    j["multi_parent_ratio"] = s.multi_parent_ratio;
    j["components"] = s.components;
    j["timestamp_violations"] = s.timestamp_violations;
    out << j.dump(2) << '\n';
}

} // namespace remixgraph::render
