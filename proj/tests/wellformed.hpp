#pragma once

// Small validating parsers for the DOT and XML subsets the renderers emit.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace wellformed {

struct DotStats {
    bool ok = false;
    std::string error;
    int node_statements = 0;
    int edge_statements = 0;
};

class DotParser {
public:
    explicit DotParser(std::string_view text) : s_(text) {}

    DotStats parse() {
        DotStats st;
        try {
            expect_word("digraph");
            skip_ws();
            if (peek() != '{') id();
            expect('{');
            for (;;) {
                skip_ws();
                if (peek() == '}') {
                    ++pos_;
                    break;
                }
                statement(st);
            }
            skip_ws();
            if (pos_ != s_.size()) fail("trailing content");
            st.ok = true;
        } catch (const std::string& e) {
            st.error = e;
        }
        return st;
    }

private:
    [[noreturn]] void fail(const std::string& why) { throw why + " at offset " + std::to_string(pos_); }
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    void expect(char c) {
        skip_ws();
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    void expect_word(std::string_view w) {
        skip_ws();
        if (s_.substr(pos_, w.size()) != w) fail("expected " + std::string(w));
        pos_ += w.size();
    }
    std::string id() {
        skip_ws();
        std::string out;
        if (peek() == '"') {
            ++pos_;
            for (;;) {
                if (pos_ >= s_.size()) fail("unterminated string");
                char c = s_[pos_++];
                if (c == '\\') {
                    if (pos_ >= s_.size()) fail("dangling escape");
                    out.push_back(s_[pos_++]);
                } else if (c == '"') {
                    return out;
                } else if (c == '\n') {
                    fail("raw newline in string");
                } else {
                    out.push_back(c);
                }
            }
        }
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                    s_[pos_] == '.')) {
            out.push_back(s_[pos_++]);
        }
        if (out.empty()) fail("expected identifier");
        return out;
    }
    void attr_list() {
        expect('[');
        for (;;) {
            skip_ws();
            if (peek() == ']') {
                ++pos_;
                return;
            }
            id();
            expect('=');
            id();
            skip_ws();
            if (peek() == ',') ++pos_;
        }
    }
    void statement(DotStats& st) {
        const std::string first = id();
        skip_ws();
        if (peek() == '=') {
            ++pos_;
            id();
        } else if (s_.substr(pos_, 2) == "->") {
            pos_ += 2;
            id();
            skip_ws();
            if (peek() == '[') attr_list();
            ++st.edge_statements;
        } else {
            if (peek() == '[') attr_list();
            if (first != "node" && first != "edge" && first != "graph") ++st.node_statements;
        }
        expect(';');
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

struct XmlStats {
    bool ok = false;
    std::string error;
    std::vector<std::string> elements; // start tags in document order
    std::vector<std::string> classes;  // class attribute per element ("" when absent)
};

class XmlParser {
public:
    explicit XmlParser(std::string_view text) : s_(text) {}

    XmlStats parse() {
        XmlStats st;
        try {
            if (s_.substr(0, 5) == "<?xml") {
                auto end = s_.find("?>");
                if (end == std::string_view::npos) fail("bad prolog");
                pos_ = end + 2;
            }
            skip_ws();
            element(st);
            skip_ws();
            if (pos_ != s_.size()) fail("content after root element");
            st.ok = true;
        } catch (const std::string& e) {
            st.error = e;
        }
        return st;
    }

private:
    [[noreturn]] void fail(const std::string& why) { throw why + " at offset " + std::to_string(pos_); }
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    std::string name() {
        std::string out;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-' ||
                                    s_[pos_] == ':' || s_[pos_] == '_')) {
            out.push_back(s_[pos_++]);
        }
        if (out.empty()) fail("expected name");
        return out;
    }
    void text_until(char stop) {
        while (pos_ < s_.size() && s_[pos_] != stop) {
            if (s_[pos_] == '<' && stop != '<') fail("'<' in attribute");
            if (s_[pos_] == '&') {
                auto semi = s_.find(';', pos_);
                if (semi == std::string_view::npos) fail("bad entity");
                auto ent = s_.substr(pos_ + 1, semi - pos_ - 1);
                if (ent != "amp" && ent != "lt" && ent != "gt" && ent != "quot" && ent != "apos") {
                    fail("unknown entity");
                }
                pos_ = semi + 1;
                continue;
            }
            if (static_cast<unsigned char>(s_[pos_]) < 0x20 && s_[pos_] != '\n' && s_[pos_] != '\t' &&
                s_[pos_] != '\r') {
                fail("control character");
            }
            ++pos_;
        }
    }
    void element(XmlStats& st) {
        if (peek() != '<') fail("expected '<'");
        ++pos_;
        const std::string tag = name();
        st.elements.push_back(tag);
        st.classes.emplace_back();
        const std::size_t slot = st.classes.size() - 1;
        for (;;) {
            skip_ws();
            if (peek() == '/') {
                ++pos_;
                if (peek() != '>') fail("expected '>'");
                ++pos_;
                return;
            }
            if (peek() == '>') {
                ++pos_;
                break;
            }
            const std::string attr = name();
            skip_ws();
            if (peek() != '=') fail("expected '='");
            ++pos_;
            skip_ws();
            if (peek() != '"') fail("expected quote");
            ++pos_;
            const std::size_t start = pos_;
            text_until('"');
            if (attr == "class") st.classes[slot] = std::string(s_.substr(start, pos_ - start));
            ++pos_;
        }
        for (;;) {
            text_until('<');
            if (pos_ >= s_.size()) fail("unclosed <" + tag + ">");
            if (s_.substr(pos_, 2) == "</") {
                pos_ += 2;
                if (name() != tag) fail("mismatched close tag for " + tag);
                skip_ws();
                if (peek() != '>') fail("expected '>'");
                ++pos_;
                return;
            }
            element(st);
        }
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

} // namespace wellformed
