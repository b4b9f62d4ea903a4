#pragma once

#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "vassan/core.hpp"

namespace vassan {

enum class StmtKind { mul, copy, destructive_copy, min, mul_by_n, choose, seq };

struct SourceLocation {
    std::size_t line = 0;
    std::size_t column = 0;
};

// One program statement. Argument order per kind:
//   mul: z x y   copy: x y   destructive_copy: x y   min: s l t   mul_by_n: z x
// For min, `l` is restored after the gadget and `t` is consumed.
struct Statement {
    StmtKind kind = StmtKind::seq;
    std::vector<std::string> args;
    Player player = Player::demon;              // choose only
    std::vector<std::vector<Statement>> blocks;  // choose: alternatives; seq: one block
    SourceLocation location;

    static Statement mul(std::string z, std::string x, std::string y) { return {StmtKind::mul, {z, x, y}}; }
    static Statement copy(std::string x, std::string y) { return {StmtKind::copy, {x, y}}; }
    static Statement destructive_copy(std::string x, std::string y) { return {StmtKind::destructive_copy, {x, y}}; }
    static Statement min(std::string s, std::string l, std::string t) { return {StmtKind::min, {s, l, t}}; }
    static Statement mul_by_n(std::string z, std::string x) { return {StmtKind::mul_by_n, {z, x}}; }
    static Statement choose(Player p, std::vector<std::vector<Statement>> blocks) {
        Statement s{StmtKind::choose, {}};
        s.player = p;
        s.blocks = std::move(blocks);
        return s;
    }
    static Statement seq(std::vector<Statement> body) {
        Statement s{StmtKind::seq, {}};
        s.blocks.push_back(std::move(body));
        return s;
    }

    // Structural equality; source locations are ignored.
    bool operator==(const Statement& o) const {
        return kind == o.kind && args == o.args && blocks == o.blocks &&
               (kind != StmtKind::choose || player == o.player);
    }
};

struct ProgramAst {
    std::vector<std::string> declared;
    std::vector<Statement> body;

    bool operator==(const ProgramAst&) const = default;
};

class ParseError : public ModelError {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& msg)
        : ModelError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
          line_(line),
          column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_, column_;
};

// Checks the AST invariants: declared identifiers, non-empty choices, and no gadget reading a
// counter destructively while writing it.
inline void check_program(const ProgramAst& ast) {
    std::set<std::string> declared(ast.declared.begin(), ast.declared.end());
    auto fail = [](const Statement& s, const std::string& msg) {
        throw ParseError(s.location.line, s.location.column, msg);
    };
    std::function<void(const std::vector<Statement>&)> walk = [&](const std::vector<Statement>& body) {
        for (const auto& s : body) {
            for (const auto& a : s.args)
                if (!declared.count(a)) fail(s, "undeclared identifier '" + a + "'");
            switch (s.kind) {
                case StmtKind::mul:
                    if (s.args[0] == s.args[1] || s.args[0] == s.args[2]) fail(s, "product target must differ from its operands");
                    break;
                case StmtKind::copy:
                case StmtKind::destructive_copy:
                case StmtKind::mul_by_n:
                    if (s.args[0] == s.args[1]) fail(s, "assignment target must differ from its source");
                    break;
                case StmtKind::min:
                    if (s.args[0] == s.args[1] || s.args[0] == s.args[2]) fail(s, "min target must differ from its operands");
                    break;
                case StmtKind::choose:
                    if (s.blocks.size() < 2) fail(s, "choose needs at least two alternatives");
                    [[fallthrough]];
                case StmtKind::seq:
                    for (const auto& b : s.blocks) {
                        if (b.empty()) fail(s, "empty block");
                        walk(b);
                    }
                    break;
            }
        }
    };
    if (ast.body.empty()) throw ParseError(1, 1, "program has no statements");
    walk(ast.body);
}

namespace detail {

struct Token {
    enum class Kind { ident, number, arrow, star, lbracket, rbracket, lparen, rparen, comma, lbrace, rbrace, semi, dots, newline, end };
    Kind kind;
    std::string text;
    std::size_t line, column;
};

inline std::vector<Token> tokenize_program(const std::string& text) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1, i = 0;
    auto push = [&](Token::Kind k, std::string t, std::size_t c) { out.push_back({k, std::move(t), line, c}); };
    while (i < text.size()) {
        char ch = text[i];
        if (ch == '#') {
            while (i < text.size() && text[i] != '\n') ++i, ++col;
            continue;
        }
        if (ch == '\n') {
            push(Token::Kind::newline, "\n", col);
            ++i, ++line, col = 1;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i, ++col;
            continue;
        }
        const std::size_t start_col = col;
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::string id;
            while (i < text.size()) {
                char c = text[i];
                if (c == '_' && i + 1 < text.size() && text[i + 1] == '{') {
                    std::size_t close = text.find('}', i);
                    if (close == std::string::npos) throw ParseError(line, col, "unterminated subscript");
                    id += text.substr(i, close - i + 1);
                    col += close - i + 1;
                    i = close + 1;
                } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
                    id += c;
                    ++i, ++col;
                } else {
                    break;
                }
            }
            push(Token::Kind::ident, id, start_col);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(ch)) || (ch == '-' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            std::string num(1, ch);
            ++i, ++col;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) num += text[i++], ++col;
            push(Token::Kind::number, num, start_col);
            continue;
        }
        auto two = text.substr(i, 2);
        if (two == "<-") {
            push(Token::Kind::arrow, two, start_col);
            i += 2, col += 2;
            continue;
        }
        if (two == "..") {
            push(Token::Kind::dots, two, start_col);
            i += 2, col += 2;
            continue;
        }
        Token::Kind k;
        switch (ch) {
            case '*': k = Token::Kind::star; break;
            case '[': k = Token::Kind::lbracket; break;
            case ']': k = Token::Kind::rbracket; break;
            case '(': k = Token::Kind::lparen; break;
            case ')': k = Token::Kind::rparen; break;
            case ',': k = Token::Kind::comma; break;
            case '{': k = Token::Kind::lbrace; break;
            case '}': k = Token::Kind::rbrace; break;
            case ';': k = Token::Kind::semi; break;
            default: throw ParseError(line, col, std::string("unexpected character '") + ch + "'");
        }
        push(k, std::string(1, ch), start_col);
        ++i, ++col;
    }
    out.push_back({Token::Kind::end, "", line, col});
    return out;
}

// Replaces `_{expr}` subscripts and a bare `_var` suffix segment by the loop value.
inline std::string substitute_index(const std::string& id, const std::map<std::string, long>& env, std::size_t line,
                                    std::size_t col) {
    std::string out;
    std::size_t i = 0;
    while (i < id.size()) {
        if (id[i] == '_' && i + 1 < id.size() && id[i + 1] == '{') {
            std::size_t close = id.find('}', i);
            std::string expr = id.substr(i + 2, close - i - 2);
            std::string name;
            std::size_t j = 0;
            while (j < expr.size() && (std::isalnum(static_cast<unsigned char>(expr[j])) || expr[j] == '_')) name += expr[j++];
            long value;
            if (!name.empty() && std::isdigit(static_cast<unsigned char>(name[0]))) {
                value = std::stol(name);
            } else {
                auto it = env.find(name);
                if (it == env.end()) throw ParseError(line, col, "unknown index variable in '" + id + "'");
                value = it->second;
            }
            if (j < expr.size()) {
                char op = expr[j];
                std::string rest = expr.substr(j + 1);
                if ((op != '+' && op != '-') || rest.empty() ||
                    rest.find_first_not_of("0123456789") != std::string::npos)
                    throw ParseError(line, col, "unsupported subscript expression '" + expr + "'");
                value += (op == '+' ? 1 : -1) * std::stol(rest);
            }
            out += std::to_string(value);
            i = close + 1;
            continue;
        }
        if (id[i] == '_') {
            std::size_t j = i + 1;
            while (j < id.size() && std::isalnum(static_cast<unsigned char>(id[j]))) ++j;
            auto it = env.find(id.substr(i + 1, j - i - 1));
            if (it != env.end() && (j == id.size() || id[j] == '_')) {
                out += std::to_string(it->second);
                i = j;
                continue;
            }
        }
        out += id[i++];
    }
    return out;
}

class ProgramParser {
public:
    explicit ProgramParser(const std::string& text) : toks_(tokenize_program(text)) {}

    ProgramAst parse() {
        ProgramAst ast;
        std::map<std::string, long> env;
        parse_block(ast, ast.body, env, false);
        check_program(ast);
        return ast;
    }

private:
    using Kind = Token::Kind;

    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }
    [[noreturn]] void error(const Token& t, const std::string& msg) const { throw ParseError(t.line, t.column, msg); }
    const Token& expect(Kind k, const char* what) {
        if (peek().kind != k) error(peek(), std::string("expected ") + what);
        return next();
    }
    void skip_separators() {
        while (peek().kind == Kind::newline || peek().kind == Kind::semi) ++pos_;
    }

    std::string ident(const std::map<std::string, long>& env, const std::set<std::string>& declared) {
        const auto& t = expect(Kind::ident, "identifier");
        auto name = substitute_index(t.text, env, t.line, t.column);
        if (!declared.count(name)) error(t, "undeclared identifier '" + name + "'");
        return name;
    }

    void parse_block(ProgramAst& ast, std::vector<Statement>& body, std::map<std::string, long>& env, bool braced) {
        while (true) {
            skip_separators();
            const auto& t = peek();
            if (t.kind == Kind::end) {
                if (braced) error(t, "missing '}'");
                return;
            }
            if (t.kind == Kind::rbrace) {
                if (!braced) error(t, "unexpected '}'");
                next();
                return;
            }
            parse_statement(ast, body, env);
        }
    }

    std::vector<Statement> parse_braced(ProgramAst& ast, std::map<std::string, long>& env) {
        skip_newlines();
        const auto& open = expect(Kind::lbrace, "'{'");
        std::vector<Statement> body;
        parse_block(ast, body, env, true);
        if (body.empty()) error(open, "empty block");
        return body;
    }

    void skip_newlines() {
        while (peek().kind == Kind::newline) ++pos_;
    }

    void parse_statement(ProgramAst& ast, std::vector<Statement>& body, std::map<std::string, long>& env) {
        const Token& head = next();
        if (head.kind != Kind::ident) error(head, "expected a statement");
        SourceLocation loc{head.line, head.column};
        std::set<std::string> declared(ast.declared.begin(), ast.declared.end());

        if (head.text == "decl") {
            while (peek().kind == Kind::ident) {
                const auto& t = next();
                auto name = substitute_index(t.text, env, t.line, t.column);
                if (declared.count(name)) error(t, "identifier '" + name + "' declared twice");
                declared.insert(name);
                ast.declared.push_back(name);
            }
            return;
        }
        if (head.text == "choose" || head.text == "achoose") {
            std::vector<std::vector<Statement>> blocks;
            blocks.push_back(parse_braced(ast, env));
            while (true) {
                std::size_t save = pos_;
                skip_newlines();
                if (peek().kind == Kind::ident && peek().text == "or") {
                    next();
                    blocks.push_back(parse_braced(ast, env));
                } else {
                    pos_ = save;
                    break;
                }
            }
            if (blocks.size() < 2) error(head, "choose needs at least two alternatives");
            auto s = Statement::choose(head.text == "choose" ? Player::demon : Player::angel, std::move(blocks));
            s.location = loc;
            body.push_back(std::move(s));
            return;
        }
        if (head.text == "foreach") {
            const auto& var = expect(Kind::ident, "loop variable");
            const auto& in = expect(Kind::ident, "'in'");
            if (in.text != "in") error(in, "expected 'in'");
            const auto& lo = expect(Kind::number, "lower bound");
            expect(Kind::dots, "'..'");
            const auto& hi = expect(Kind::number, "upper bound");
            long a = std::stol(lo.text), b = std::stol(hi.text);
            if (a < 1) error(lo, "foreach bound must be positive");
            if (b < 1) error(hi, "foreach bound must be positive");
            skip_newlines();
            std::size_t body_start = pos_;
            if (a > b) {
                // Parse once for syntax with a placeholder value, then drop the result.
                ProgramAst scratch = ast;
                std::vector<Statement> ignored;
                auto scoped = env;
                scoped[var.text] = a;
                parse_braced(scratch, scoped);
                return;
            }
            std::size_t body_end = body_start;
            for (long i = a; i <= b; ++i) {
                pos_ = body_start;
                auto scoped = env;
                scoped[var.text] = i;
                auto stmts = parse_braced(ast, scoped);
                for (auto& s : stmts) body.push_back(std::move(s));
                body_end = pos_;
            }
            pos_ = body_end;
            return;
        }
        // Assignment forms.
        pos_--;
        auto target = ident(env, declared);
        expect(Kind::arrow, "'<-'");
        Statement s;
        if (peek().kind == Kind::lbracket) {
            next();
            auto src = ident(env, declared);
            expect(Kind::rbracket, "']'");
            s = Statement::destructive_copy(target, src);
        } else if (peek().kind == Kind::ident && peek().text == "min" && toks_[pos_ + 1].kind == Kind::lparen) {
            next();
            next();
            auto l = ident(env, declared);
            expect(Kind::comma, "','");
            auto t = ident(env, declared);
            expect(Kind::rparen, "')'");
            s = Statement::min(target, l, t);
        } else {
            auto x = ident(env, declared);
            if (peek().kind == Kind::star) {
                next();
                const auto& y = expect(Kind::ident, "identifier or n");
                if (y.text == "n") {
                    s = Statement::mul_by_n(target, x);
                } else {
                    auto yn = substitute_index(y.text, env, y.line, y.column);
                    if (!declared.count(yn)) error(y, "undeclared identifier '" + yn + "'");
                    s = Statement::mul(target, x, yn);
                }
            } else {
                s = Statement::copy(target, x);
            }
        }
        s.location = loc;
        body.push_back(std::move(s));
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline ProgramAst parse_program(const std::string& text) { return detail::ProgramParser(text).parse(); }

namespace detail {
inline void print_block(std::ostringstream& os, const std::vector<Statement>& body, int indent) {
    std::string pad(indent * 2, ' ');
    for (const auto& s : body) {
        os << pad;
        switch (s.kind) {
            case StmtKind::mul: os << s.args[0] << " <- " << s.args[1] << " * " << s.args[2] << "\n"; break;
            case StmtKind::copy: os << s.args[0] << " <- " << s.args[1] << "\n"; break;
            case StmtKind::destructive_copy: os << s.args[0] << " <- [" << s.args[1] << "]\n"; break;
            case StmtKind::min: os << s.args[0] << " <- min(" << s.args[1] << ", " << s.args[2] << ")\n"; break;
            case StmtKind::mul_by_n: os << s.args[0] << " <- " << s.args[1] << " * n\n"; break;
            case StmtKind::seq:
                os << "# block\n";
                print_block(os, s.blocks.front(), indent);
                break;
            case StmtKind::choose:
                os << (s.player == Player::demon ? "choose" : "achoose");
                for (std::size_t b = 0; b < s.blocks.size(); ++b) {
                    os << (b ? " or {\n" : " {\n");
                    print_block(os, s.blocks[b], indent + 1);
                    os << pad << "}";
                }
                os << "\n";
                break;
        }
    }
}
}  // namespace detail

inline std::string to_dsl(const ProgramAst& ast) {
    std::ostringstream os;
    os << "decl";
    for (const auto& d : ast.declared) os << " " << d;
    os << "\n";
    detail::print_block(os, ast.body, 0);
    return os.str();
}

}  // namespace vassan
