#include "segedit/pipeline/instruction.hpp"

#include <cctype>
#include <optional>

namespace segedit {

namespace {

std::string describe_position(int line, int column) {
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

bool blank(std::string_view s) {
    return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

enum class TokenKind { word, semicolon, end };

struct Token {
    TokenKind kind = TokenKind::end;
    std::string text;     // word text with any escape removed
    bool escaped = false; // written as "\with"
    int line = 1;
    int column = 1;
};

bool iequals_ascii(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i]))) {
            return false;
        }
    }
    return true;
}

bool is_keyword(Token const& t, std::string_view kw) {
    return t.kind == TokenKind::word && !t.escaped && iequals_ascii(t.text, kw);
}

class Lexer {
  public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            Token t;
            t.line = line_;
            t.column = column_;
            if (pos_ >= src_.size()) {
                out.push_back(t);
                return out;
            }
            if (src_[pos_] == ';') {
                t.kind = TokenKind::semicolon;
                advance();
                out.push_back(t);
                continue;
            }
            t.kind = TokenKind::word;
            std::size_t start = pos_;
            while (pos_ < src_.size() && src_[pos_] != ';' && !at_space()) {
                advance();
            }
            t.text = std::string(src_.substr(start, pos_ - start));
            if (t.text.size() == 5 && t.text[0] == '\\' && iequals_ascii(t.text.substr(1), "with")) {
                t.text.erase(0, 1);
                t.escaped = true;
            }
            out.push_back(std::move(t));
        }
    }

  private:
    // Length in bytes of the UTF-8 sequence at pos_; throws on malformed input.
    std::size_t sequence_length() const {
        auto lead = static_cast<unsigned char>(src_[pos_]);
        std::size_t len = lead < 0x80 ? 1 : (lead >> 5) == 0x6 ? 2 : (lead >> 4) == 0xE ? 3 : (lead >> 3) == 0x1E ? 4 : 0;
        if (len == 0 || pos_ + len > src_.size()) {
            throw ParseError(ParseError::Kind::syntax, line_, column_, "valid UTF-8 text", "invalid byte sequence");
        }
        for (std::size_t i = 1; i < len; ++i) {
            if ((static_cast<unsigned char>(src_[pos_ + i]) & 0xC0) != 0x80) {
                throw ParseError(ParseError::Kind::syntax, line_, column_, "valid UTF-8 text",
                                 "invalid byte sequence");
            }
        }
        return len;
    }

    bool at_space() const {
        char c = src_[pos_];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
            return true;
        }
        // U+00A0 no-break space, U+3000 ideographic space
        auto rest = src_.substr(pos_);
        return rest.starts_with("\xC2\xA0") || rest.starts_with("\xE3\x80\x80");
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            column_ = 1;
            ++pos_;
            return;
        }
        pos_ += sequence_length();
        ++column_;
    }

    void skip_space() {
        while (pos_ < src_.size() && at_space()) {
            advance();
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

std::string found_text(Token const& t) {
    switch (t.kind) {
    case TokenKind::end: return "end of input";
    case TokenKind::semicolon: return "';'";
    case TokenKind::word: return "'" + std::string(t.escaped ? "\\" : "") + t.text + "'";
    }
    return "?";
}

class Parser {
  public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    std::vector<EditInstruction> script() {
        std::vector<EditInstruction> out;
        while (true) {
            if (peek().kind == TokenKind::semicolon) {
                fail(ParseError::Kind::empty_clause, "'replace'");
            }
            out.push_back(clause());
            if (peek().kind == TokenKind::end) {
                return out;
            }
            if (peek().kind != TokenKind::semicolon) {
                fail(ParseError::Kind::syntax, "';' or end of input");
            }
            next();
            if (peek().kind == TokenKind::end) {
                return out;
            }
        }
    }

  private:
    EditInstruction clause() {
        if (!is_keyword(peek(), "replace")) {
            fail(ParseError::Kind::syntax, "'replace'");
        }
        next();
        EditInstruction ins;
        ins.source_prompt = phrase("source phrase");
        if (!is_keyword(peek(), "with")) {
            fail(ParseError::Kind::syntax, "'with'");
        }
        next();
        ins.target_prompt = phrase("target phrase");
        return ins;
    }

    std::string phrase(char const* what) {
        std::string text;
        while (peek().kind == TokenKind::word && !is_keyword(peek(), "with")) {
            if (!text.empty()) {
                text += ' ';
            }
            text += next().text;
        }
        if (text.empty()) {
            fail(ParseError::Kind::syntax, what);
        }
        return text;
    }

    Token const& peek() const { return tokens_[index_]; }
    Token const& next() { return tokens_[index_++]; }

    [[noreturn]] void fail(ParseError::Kind kind, std::string expected) const {
        auto const& t = peek();
        throw ParseError(kind, t.line, t.column, std::move(expected), found_text(t));
    }

    std::vector<Token> tokens_;
    std::size_t index_ = 0;
};

std::string escape_phrase(std::string const& phrase) {
    std::string out;
    std::size_t i = 0;
    while (i < phrase.size()) {
        std::size_t j = phrase.find(' ', i);
        if (j == std::string::npos) j = phrase.size();
        std::string_view word(phrase.data() + i, j - i);
        if (!out.empty()) out += ' ';
        if (iequals_ascii(word, "with")) out += '\\';
        out += word;
        i = j + 1;
    }
    return out;
}

} // namespace

void EditInstruction::validate() const {
    if (blank(source_prompt)) {
        throw InvalidArgument("source prompt is empty");
    }
    if (blank(target_prompt)) {
        throw InvalidArgument("target prompt is empty");
    }
}

ParseError::ParseError(Kind kind, int line, int column, std::string expected, std::string found)
    : Error(describe_position(line, column) + ": " +
            (kind == Kind::empty_clause ? "empty clause; " : std::string()) + "expected " + expected +
            ", found " + found),
      kind_(kind), line_(line), column_(column), expected_(std::move(expected)), found_(std::move(found)) {}

std::vector<EditInstruction> parse_instructions(std::string_view script) {
    auto tokens = Lexer(script).run();
    if (tokens.size() == 1) {
        throw ParseError(ParseError::Kind::empty_clause, tokens[0].line, tokens[0].column, "'replace'",
                         "end of input");
    }
    return Parser(std::move(tokens)).script();
}

std::string render_instructions(std::span<EditInstruction const> instructions) {
    std::string out;
    for (auto const& ins : instructions) {
        if (!out.empty()) {
            out += "; ";
        }
        out += "replace " + escape_phrase(ins.source_prompt) + " with " + escape_phrase(ins.target_prompt);
    }
    return out;
}

} // namespace segedit
