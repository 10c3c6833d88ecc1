#include "pswitch/circuit_format.h"

#include <sstream>
#include <vector>

#include "pswitch/errors.h"

using namespace pswitch;

namespace {

struct Token {
    std::string text;
    size_t line;
    size_t column;
};

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    size_t line = 1;
    size_t column = 1;
    size_t i = 0;
    auto advance = [&]() {
        if (text[i] == '\n') {
            line++;
            column = 1;
        } else {
            column++;
        }
        i++;
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') {
                advance();
            }
        } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            advance();
        } else if (c == '(' || c == ')') {
            out.push_back({std::string(1, c), line, column});
            advance();
        } else {
            Token t{"", line, column};
            while (i < text.size() && text[i] != '(' && text[i] != ')' && text[i] != '#' && text[i] != ' ' &&
                   text[i] != '\t' && text[i] != '\n' && text[i] != '\r') {
                t.text += text[i];
                advance();
            }
            out.push_back(std::move(t));
        }
    }
    return out;
}

Rational parse_fraction(const Token &t) {
    if (t.text.find('/') == std::string::npos) {
        throw SyntaxError("expected a fraction a/b, got '" + t.text + "'", t.line, t.column);
    }
    Rational r;
    try {
        r = Rational::parse(t.text);
    } catch (const DomainError &) {
        throw SyntaxError("malformed fraction '" + t.text + "'", t.line, t.column);
    }
    if (!r.is_open_probability()) {
        throw SyntaxError("fraction out of (0,1): '" + t.text + "'", t.line, t.column);
    }
    return r;
}

class SexpParser {
   public:
    SexpParser(std::vector<Token> tokens, size_t end_line, size_t end_column)
        : tokens_(std::move(tokens)), end_line_(end_line), end_column_(end_column) {
    }

    SpCircuit parse_all() {
        SpCircuit c = parse_expr();
        if (pos_ < tokens_.size()) {
            const Token &t = tokens_[pos_];
            throw SyntaxError("unexpected trailing token '" + t.text + "'", t.line, t.column);
        }
        return c;
    }

   private:
    const Token &peek() {
        if (pos_ >= tokens_.size()) {
            throw SyntaxError("unexpected end of input", end_line_, end_column_);
        }
        return tokens_[pos_];
    }

    SpCircuit parse_expr() {
        const Token &t = peek();
        pos_++;
        if (t.text == ")") {
            throw SyntaxError("unexpected ')'", t.line, t.column);
        }
        if (t.text != "(") {
            return SpCircuit::leaf(parse_fraction(t));
        }
        const Token &op = peek();
        pos_++;
        NodeKind kind;
        if (op.text == "s") {
            kind = NodeKind::series;
        } else if (op.text == "p") {
            kind = NodeKind::parallel;
        } else {
            throw SyntaxError("expected 's' or 'p' after '(', got '" + op.text + "'", op.line, op.column);
        }
        std::vector<SpCircuit> kids;
        while (peek().text != ")") {
            kids.push_back(parse_expr());
        }
        const Token &close = peek();
        pos_++;
        if (kids.size() < 2) {
            throw SyntaxError(std::string(kind == NodeKind::series ? "series" : "parallel") +
                                  " node needs at least 2 children",
                              close.line, close.column);
        }
        return SpCircuit::compose(kind, std::move(kids));
    }

    std::vector<Token> tokens_;
    size_t pos_ = 0;
    size_t end_line_;
    size_t end_column_;
};

std::pair<size_t, size_t> end_position(std::string_view text) {
    size_t line = 1;
    size_t column = 1;
    for (char c : text) {
        if (c == '\n') {
            line++;
            column = 1;
        } else {
            column++;
        }
    }
    return {line, column};
}

std::string dot_escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    return out;
}

void dot_node(const SpCircuit &c, size_t &next, std::ostringstream &out) {
    size_t id = next++;
    if (c.is_leaf()) {
        out << "  n" << id << " [shape=box, label=\"" << c.probability().str() << "\"];\n";
        return;
    }
    out << "  n" << id << " [shape=ellipse, label=\"" << (c.kind() == NodeKind::series ? "series" : "parallel")
        << "\"];\n";
    for (const auto &k : c.children()) {
        size_t child = next;
        dot_node(k, next, out);
        out << "  n" << id << " -> n" << child << ";\n";
    }
}

}  // namespace

SpCircuit pswitch::parse_sp_circuit(std::string_view text) {
    auto tokens = tokenize(text);
    auto [line, column] = end_position(text);
    if (tokens.empty()) {
        throw SyntaxError("empty circuit", line, column);
    }
    return SexpParser(std::move(tokens), line, column).parse_all();
}

GeneralCircuit pswitch::parse_general_circuit(std::string_view text) {
    std::string source;
    std::string sink;
    bool have_terminals = false;
    std::vector<GeneralCircuit::EdgeSpec> edges;
    size_t line_no = 0;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        line_no++;
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        auto tokens = tokenize(line);
        if (tokens.empty()) {
            continue;
        }
        for (const auto &t : tokens) {
            if (t.text == "(" || t.text == ")") {
                throw SyntaxError("unexpected '" + t.text + "' in edge list", line_no, t.column);
            }
        }
        if (!have_terminals) {
            if (tokens[0].text != "terminals" || tokens.size() != 3) {
                throw SyntaxError("expected 'terminals A B'", line_no, tokens[0].column);
            }
            if (tokens[1].text == tokens[2].text) {
                throw SyntaxError("terminals must be distinct", line_no, tokens[2].column);
            }
            source = tokens[1].text;
            sink = tokens[2].text;
            have_terminals = true;
            continue;
        }
        if (tokens.size() != 3) {
            throw SyntaxError("expected 'u v a/b'", line_no, tokens[0].column);
        }
        Token frac = tokens[2];
        frac.line = line_no;
        edges.push_back({tokens[0].text, tokens[1].text, parse_fraction(frac)});
    }
    if (!have_terminals) {
        auto [line, column] = end_position(text);
        throw SyntaxError("missing 'terminals A B' line", line, column);
    }
    return GeneralCircuit(std::move(source), std::move(sink), std::move(edges));
}

AnyCircuit pswitch::parse_circuit(std::string_view text) {
    auto tokens = tokenize(text);
    if (!tokens.empty() && tokens[0].text == "terminals") {
        return parse_general_circuit(text);
    }
    return parse_sp_circuit(text);
}

std::string pswitch::to_dot(const SpCircuit &circuit) {
    std::ostringstream out;
    out << "digraph sp {\n";
    size_t next = 0;
    dot_node(circuit, next, out);
    out << "}\n";
    return out.str();
}

std::string pswitch::to_dot(const GeneralCircuit &circuit) {
    std::ostringstream out;
    out << "graph circuit {\n";
    for (const auto &n : circuit.nodes()) {
        bool terminal = n == circuit.source() || n == circuit.sink();
        out << "  \"" << dot_escape(n) << "\"" << (terminal ? " [shape=doublecircle]" : " [shape=circle]") << ";\n";
    }
    for (const auto &e : circuit.edges()) {
        out << "  \"" << dot_escape(e.u) << "\" -- \"" << dot_escape(e.v) << "\" [label=\"" << e.probability.str()
            << "\"];\n";
    }
    out << "}\n";
    return out.str();
}
