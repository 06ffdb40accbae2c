#include "mapcheck/parse.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace mapcheck {

namespace {

enum class TokKind {
    ident,      // lower-case or digit initial: constants, predicate names, keywords
    uident,     // upper-case initial: variables
    null_tok,   // _k
    lbrace,
    rbrace,
    lparen,
    rparen,
    comma,
    semi,
    dot,
    slash,
    arrow,      // ->
    turnstile,  // :-
    eof,
};

const char* describe(TokKind k) {
    switch (k) {
        case TokKind::ident: return "identifier";
        case TokKind::uident: return "variable";
        case TokKind::null_tok: return "labelled null";
        case TokKind::lbrace: return "'{'";
        case TokKind::rbrace: return "'}'";
        case TokKind::lparen: return "'('";
        case TokKind::rparen: return "')'";
        case TokKind::comma: return "','";
        case TokKind::semi: return "';'";
        case TokKind::dot: return "'.'";
        case TokKind::slash: return "'/'";
        case TokKind::arrow: return "'->'";
        case TokKind::turnstile: return "':-'";
        case TokKind::eof: return "end of input";
    }
    return "token";
}

struct Token {
    TokKind kind;
    std::string text;
    std::uint64_t value = 0;  // null id
    SourcePos pos;
};

class Lexer {
public:
    explicit Lexer(const SourceText& text) : text_(text) {}

    std::vector<Token> tokens() {
        std::vector<Token> out;
        for (;;) {
            skip_blank_and_comments();
            SourcePos pos{line_, column_};
            if (at_end()) {
                out.push_back({TokKind::eof, "", 0, pos});
                return out;
            }
            char c = peek();
            if (c == '{') { out.push_back(single(TokKind::lbrace, pos)); continue; }
            if (c == '}') { out.push_back(single(TokKind::rbrace, pos)); continue; }
            if (c == '(') { out.push_back(single(TokKind::lparen, pos)); continue; }
            if (c == ')') { out.push_back(single(TokKind::rparen, pos)); continue; }
            if (c == ',') { out.push_back(single(TokKind::comma, pos)); continue; }
            if (c == ';') { out.push_back(single(TokKind::semi, pos)); continue; }
            if (c == '.') { out.push_back(single(TokKind::dot, pos)); continue; }
            if (c == '/') { out.push_back(single(TokKind::slash, pos)); continue; }
            if (c == '-') {
                advance();
                if (!at_end() && peek() == '>') {
                    advance();
                    out.push_back({TokKind::arrow, "->", 0, pos});
                    continue;
                }
                throw parse_error(text_.origin, pos, "expected '->'");
            }
            if (c == ':') {
                advance();
                if (!at_end() && peek() == '-') {
                    advance();
                    out.push_back({TokKind::turnstile, ":-", 0, pos});
                    continue;
                }
                throw parse_error(text_.origin, pos, "expected ':-'");
            }
            if (c == '_') {
                advance();
                std::string digits;
                while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
                    digits += take();
                if (digits.empty())
                    throw parse_error(text_.origin, pos,
                                      "expected digits after '_' (labelled nulls are _1, _2, ...)");
                out.push_back({TokKind::null_tok, "_" + digits,
                               std::stoull(digits), pos});
                continue;
            }
            if (std::isalnum(static_cast<unsigned char>(c))) {
                std::string word;
                while (!at_end() &&
                       (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
                    word += take();
                bool upper = std::isupper(static_cast<unsigned char>(word[0])) != 0;
                out.push_back({upper ? TokKind::uident : TokKind::ident, word, 0, pos});
                continue;
            }
            throw parse_error(text_.origin, pos,
                              std::string("unexpected character '") + c + "'");
        }
    }

private:
    bool at_end() const { return offset_ >= text_.content.size(); }
    char peek() const { return text_.content[offset_]; }

    void advance() {
        if (text_.content[offset_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++offset_;
    }

    char take() {
        char c = peek();
        advance();
        return c;
    }

    Token single(TokKind kind, SourcePos pos) {
        std::string text(1, take());
        return {kind, text, 0, pos};
    }

    void skip_blank_and_comments() {
        for (;;) {
            while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
            if (!at_end() && peek() == '-' && offset_ + 1 < text_.content.size() &&
                text_.content[offset_ + 1] == '-') {
                while (!at_end() && peek() != '\n') advance();
                continue;
            }
            return;
        }
    }

    const SourceText& text_;
    std::size_t offset_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

// What a term production is allowed to yield in the current context.
struct TermContext {
    bool allow_variables = false;
    bool allow_nulls = false;
    const char* variable_message = "variables are not allowed here";
    const char* null_message = "labelled nulls are not allowed here";
};

class Parser {
public:
    Parser(const SourceText& text) : origin_(text.origin), tokens_(Lexer(text).tokens()) {}

    ParsedMapping mapping() {
        ParsedMapping out;
        expect_keyword("source");
        out.mapping.source = decls();
        expect_keyword("target");
        out.mapping.target = decls();
        expect_keyword("st");
        tgds(out.mapping.st_tgds, out.st_positions);
        expect_keyword("t");
        tgds(out.mapping.t_tgds, out.t_positions);
        expect(TokKind::eof);
        return out;
    }

    Instance instance(const Schema& schema) {
        Instance out(schema);
        TermContext ctx;
        ctx.allow_nulls = true;
        ctx.variable_message = "variables cannot appear in instance facts";
        while (peek().kind != TokKind::eof) {
            SourcePos pos = peek().pos;
            Atom a = atom(ctx);
            expect(TokKind::dot);
            try {
                out.insert(a, 0);
            } catch (const error& e) {
                throw parse_error(origin_, pos, e.what());
            }
        }
        return out;
    }

    ConjunctiveQuery query(const Schema& schema) {
        ConjunctiveQuery q;
        Token head = expect(TokKind::ident);
        if (head.text != "q")
            throw parse_error(origin_, head.pos, "query head must be named 'q'");
        expect(TokKind::lparen);
        if (peek().kind != TokKind::rparen) {
            for (;;) {
                Token v = peek();
                if (v.kind != TokKind::uident)
                    throw parse_error(origin_, v.pos, "query head arguments must be variables");
                q.head_vars.push_back(take().text);
                if (peek().kind != TokKind::comma) break;
                take();
            }
        }
        expect(TokKind::rparen);
        expect(TokKind::turnstile);

        TermContext ctx;
        ctx.allow_variables = true;
        ctx.null_message = "labelled nulls cannot appear in queries";
        std::vector<SourcePos> atom_positions;
        for (;;) {
            atom_positions.push_back(peek().pos);
            q.body.push_back(atom(ctx));
            if (peek().kind != TokKind::comma) break;
            take();
        }
        expect(TokKind::dot);
        expect(TokKind::eof);

        for (std::size_t i = 0; i < q.body.size(); ++i) {
            const Atom& a = q.body[i];
            auto arity = schema.arity_of(a.predicate);
            if (!arity)
                throw parse_error(origin_, atom_positions[i],
                                  "predicate '" + a.predicate + "' is not declared in the schema");
            if (*arity != a.args.size())
                throw parse_error(origin_, atom_positions[i],
                                  "predicate '" + a.predicate + "' has arity " +
                                      std::to_string(*arity) + ", got " +
                                      std::to_string(a.args.size()) + " arguments");
        }
        auto body_vars = q.body_var_names();
        for (const std::string& v : q.head_vars)
            if (body_vars.count(v) == 0)
                throw parse_error(origin_, tokens_.front().pos,
                                  "unsafe head variable '" + v + "' does not occur in the body");
        return q;
    }

private:
    const Token& peek() const { return tokens_[index_]; }

    Token take() { return tokens_[index_++]; }

    Token expect(TokKind kind) {
        const Token& t = peek();
        if (t.kind != kind)
            throw parse_error(origin_, t.pos,
                              std::string("expected ") + describe(kind) + ", found " +
                                  (t.kind == TokKind::eof ? std::string(describe(TokKind::eof))
                                                          : "'" + t.text + "'"));
        return take();
    }

    void expect_keyword(const std::string& word) {
        const Token& t = peek();
        if (t.kind != TokKind::ident || t.text != word)
            throw parse_error(origin_, t.pos,
                              "expected '" + word + "', found " +
                                  (t.kind == TokKind::eof ? std::string(describe(TokKind::eof))
                                                          : "'" + t.text + "'"));
        take();
        expect(TokKind::lbrace);
    }

    Schema decls() {
        Schema out;
        while (peek().kind != TokKind::rbrace) {
            Token name = expect(TokKind::ident);
            expect(TokKind::slash);
            Token arity = expect(TokKind::ident);
            for (char c : arity.text)
                if (!std::isdigit(static_cast<unsigned char>(c)))
                    throw parse_error(origin_, arity.pos, "expected an arity number");
            expect(TokKind::semi);
            try {
                out.add_relation(name.text, std::stoull(arity.text));
            } catch (const error& e) {
                throw parse_error(origin_, name.pos, e.what());
            }
        }
        take();  // rbrace
        return out;
    }

    void tgds(std::vector<Tgd>& out, std::vector<SourcePos>& positions) {
        TermContext ctx;
        ctx.allow_variables = true;
        ctx.null_message = "labelled nulls cannot appear in dependencies";
        while (peek().kind != TokKind::rbrace) {
            SourcePos pos = peek().pos;
            Tgd tgd;
            for (;;) {
                tgd.body.push_back(atom(ctx));
                if (peek().kind != TokKind::comma) break;
                take();
            }
            expect(TokKind::arrow);
            for (;;) {
                tgd.head.push_back(atom(ctx));
                if (peek().kind != TokKind::comma) break;
                take();
            }
            expect(TokKind::semi);
            out.push_back(std::move(tgd));
            positions.push_back(pos);
        }
        take();  // rbrace
    }

    Atom atom(const TermContext& ctx) {
        Token name = expect(TokKind::ident);
        expect(TokKind::lparen);
        Atom out;
        out.predicate = name.text;
        for (;;) {
            out.args.push_back(term(ctx));
            if (peek().kind != TokKind::comma) break;
            take();
        }
        expect(TokKind::rparen);
        return out;
    }

    Term term(const TermContext& ctx) {
        const Token& t = peek();
        switch (t.kind) {
            case TokKind::ident:
                return Term::constant(take().text);
            case TokKind::uident:
                if (!ctx.allow_variables) throw parse_error(origin_, t.pos, ctx.variable_message);
                return Term::variable(take().text);
            case TokKind::null_tok:
                if (!ctx.allow_nulls) throw parse_error(origin_, t.pos, ctx.null_message);
                return Term::null(take().value);
            default:
                throw parse_error(origin_, t.pos,
                                  "expected a term, found " +
                                      (t.kind == TokKind::eof
                                           ? std::string(describe(TokKind::eof))
                                           : "'" + t.text + "'"));
        }
    }

    std::string origin_;
    std::vector<Token> tokens_;
    std::size_t index_ = 0;
};

std::string format_pos(const std::string& origin, SourcePos pos) {
    return origin + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.column);
}

}  // namespace

parse_error::parse_error(const std::string& origin, SourcePos pos, const std::string& message)
    : error(format_pos(origin, pos) + ": " + message), pos_(pos) {}

ParsedMapping parse_mapping_raw(const SourceText& text) {
    return Parser(text).mapping();
}

SchemaMapping parse_mapping(const SourceText& text) {
    ParsedMapping parsed = parse_mapping_raw(text);
    ValidationReport report = validate_mapping(parsed.mapping);
    if (report.valid()) return std::move(parsed.mapping);

    auto pos_of = [&](const Violation& v) -> SourcePos {
        const auto& positions = v.group == "st" ? parsed.st_positions : parsed.t_positions;
        if (v.index >= 0 && static_cast<std::size_t>(v.index) < positions.size())
            return positions[static_cast<std::size_t>(v.index)];
        return SourcePos{1, 1};
    };

    std::string message = "mapping validation failed:";
    for (const Violation& v : report.violations) {
        SourcePos pos = pos_of(v);
        message += "\n  " + format_pos(text.origin, pos) + ": " + v.where + ": " + v.message;
    }
    throw parse_error(text.origin, pos_of(report.violations.front()), message);
}

Instance parse_instance(const SourceText& text, const Schema& schema) {
    return Parser(text).instance(schema);
}

ConjunctiveQuery parse_query(const SourceText& text, const Schema& schema) {
    return Parser(text).query(schema);
}

std::string serialize_instance(const Instance& i) {
    std::string out;
    for (const auto& [atom, level] : i.facts()) out += atom.to_string() + ".\n";
    return out;
}

SourceText load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return SourceText{ss.str(), path};
}

}  // namespace mapcheck
