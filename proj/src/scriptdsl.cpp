#include "kirby/scriptdsl.hpp"

#include "script_detail.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>
#include <set>
#include <sstream>

namespace kirby {

namespace {

struct Token
{
    std::string text;
    int col = 0;
};

[[nodiscard]] bool is_identifier(const std::string& s)
{
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
        return false;
    }
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    });
}

[[nodiscard]] bool is_int(const std::string& s)
{
    static const std::regex re("[+-]?[0-9]+");
    return std::regex_match(s, re);
}

[[nodiscard]] bool is_token_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || std::string_view("_-+=.,:/()[]*'?").find(c) !=
                                                               std::string_view::npos;
}

/// Splits one line (comment already removed) into tokens. Bracketed and
/// parenthesised groups form a single token with blanks dropped.
[[nodiscard]] std::vector<Token> tokenize(const std::string& line, int line_no)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        Token tok;
        tok.col = static_cast<int>(i) + 1;
        std::vector<char> stack;
        int open_col = 0;
        while (i < line.size()) {
            const char c = line[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                if (stack.empty()) {
                    break;
                }
                ++i;
                continue;
            }
            if (!is_token_char(c)) {
                throw ParseError(ErrorCode::SyntaxError, line_no, static_cast<int>(i) + 1,
                                 std::string("unexpected character '") + c + "'");
            }
            if (c == '[' || c == '(') {
                if (stack.empty()) {
                    open_col = static_cast<int>(i) + 1;
                }
                stack.push_back(c == '[' ? ']' : ')');
            } else if (c == ']' || c == ')') {
                if (stack.empty() || stack.back() != c) {
                    throw ParseError(ErrorCode::SyntaxError, line_no, static_cast<int>(i) + 1,
                                     std::string("unbalanced '") + c + "'");
                }
                stack.pop_back();
            }
            tok.text += c;
            ++i;
        }
        if (!stack.empty()) {
            throw ParseError(ErrorCode::SyntaxError, line_no, open_col, "unclosed bracket");
        }
        out.push_back(std::move(tok));
    }
    return out;
}

const std::set<std::string>& move_keywords()
{
    static const std::set<std::string> k{"blowup", "blowdown",   "slide", "cancelpair", "uncancelpair",
                                         "rbd",    "rbu",        "seal",  "unseal"};
    return k;
}

const std::set<std::string>& expect_keys()
{
    static const std::set<std::string> k{"b1",    "b2",   "euler",  "chi",   "sigma",   "det",
                                         "torsion", "boundary", "form", "pieces", "chain", "handles",
                                         "onehandles"};
    return k;
}

/// Walks the argument tokens of one statement and reports positioned errors.
class Cursor
{
public:
    Cursor(const std::vector<Token>& toks, int line)
        : toks_(toks)
        , line_(line)
    {}

    [[nodiscard]] bool at_end() const { return pos_ >= toks_.size(); }
    [[nodiscard]] const std::string& peek() const { return toks_.at(pos_).text; }

    const std::string& take(const char* what)
    {
        if (at_end()) {
            const Token& last = toks_.back();
            throw ParseError(ErrorCode::ArityError, line_, last.col,
                             "'" + toks_.front().text + "' is missing " + what + " after token " +
                                 std::to_string(toks_.size()) + " (at token " + std::to_string(toks_.size()) +
                                 ")");
        }
        return toks_[pos_++].text;
    }

    const std::string& identifier(const char* what)
    {
        const std::size_t at = pos_;
        const std::string& s = take(what);
        if (!is_identifier(s)) {
            fail(at, std::string("expected ") + what + ", got '" + s + "'");
        }
        return s;
    }

    void literal(const std::string& word)
    {
        const std::size_t at = pos_;
        const std::string& s = take(("'" + word + "'").c_str());
        if (s != word) {
            fail(at, "expected '" + word + "', got '" + s + "'");
        }
    }

    const std::string& list(const char* what)
    {
        const std::size_t at = pos_;
        const std::string& s = take(what);
        if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
            fail(at, std::string("expected ") + what + " in brackets, got '" + s + "'");
        }
        return s;
    }

    void finish() const
    {
        if (!at_end()) {
            throw ParseError(ErrorCode::ArityError, line_, toks_[pos_].col,
                             "unexpected extra argument '" + toks_[pos_].text + "' at token " +
                                 std::to_string(pos_ + 1));
        }
    }

    [[noreturn]] void fail(std::size_t at, const std::string& msg) const
    {
        throw ParseError(ErrorCode::SyntaxError, line_, toks_.at(at).col, msg);
    }

    [[nodiscard]] std::size_t pos() const { return pos_; }

private:
    const std::vector<Token>& toks_;
    int line_;
    std::size_t pos_ = 1;
};

}  // namespace

// --- list helpers shared with the executor -----------------------------------

namespace detail {

/// "[a,b,[c,d]]" -> {"a","b","[c,d]"}; "[]" -> {}.
std::vector<std::string> split_list(const std::string& token)
{
    if (token.size() < 2 || token.front() != '[' || token.back() != ']') {
        throw Error(ErrorCode::SyntaxError, "expected a bracket list, got '" + token + "'");
    }
    std::vector<std::string> items;
    std::string cur;
    int depth = 0;
    for (std::size_t i = 1; i + 1 < token.size(); ++i) {
        const char c = token[i];
        if (c == '[' || c == '(') {
            ++depth;
        } else if (c == ']' || c == ')') {
            --depth;
        }
        if (c == ',' && depth == 0) {
            items.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty() || !items.empty()) {
        items.push_back(cur);
    }
    for (const auto& it : items) {
        if (it.empty()) {
            throw Error(ErrorCode::SyntaxError, "empty item in list '" + token + "'");
        }
    }
    return items;
}

Integer parse_integer(const std::string& s)
{
    if (!is_int(s)) {
        throw Error(ErrorCode::SyntaxError, "expected an integer, got '" + s + "'");
    }
    return Integer(s[0] == '+' ? s.substr(1) : s);
}

int parse_small_int(const std::string& s)
{
    const Integer v = parse_integer(s);
    if (v < -1000000 || v > 1000000) {
        throw Error(ErrorCode::SyntaxError, "integer out of range: '" + s + "'");
    }
    return static_cast<int>(v);
}

std::vector<std::vector<Rational>> parse_matrix(const std::string& s)
{
    std::vector<std::vector<Rational>> rows;
    for (const auto& row : split_list(s)) {
        std::vector<Rational> r;
        for (const auto& v : split_list(row)) {
            r.push_back(parse_rational(v));
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::pair<std::string, std::string> split_once(const std::string& s, char sep)
{
    const auto at = s.find(sep);
    if (at == std::string::npos || at == 0 || at + 1 == s.size()) {
        throw Error(ErrorCode::SyntaxError, std::string("expected 'a") + sep + "b', got '" + s + "'");
    }
    return {s.substr(0, at), s.substr(at + 1)};
}

}  // namespace detail

namespace {

using detail::split_list;
using detail::split_once;

void check_label_list(const std::string& token, int line, int col)
{
    try {
        for (const auto& l : split_list(token)) {
            if (!is_identifier(l)) {
                throw Error(ErrorCode::SyntaxError, "'" + l + "' is not a label");
            }
        }
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(ErrorCode::SyntaxError, line, col, e.detail());
    }
}

void check_expectation(const std::string& key, const std::string& value)
{
    if (key == "det") {
        (void)parse_rational(value);
    } else if (key == "torsion") {
        if (value != "?") {
            for (const auto& v : split_list(value)) {
                (void)detail::parse_integer(v);
            }
        }
    } else if (key == "boundary") {
        (void)parse_lens(value);
    } else if (key == "form") {
        (void)detail::parse_matrix(value);
    } else if (key == "pieces") {
        (void)split_list(value);
    } else {
        (void)detail::parse_integer(value);
    }
}

void validate(const std::vector<Token>& toks, int line)
{
    const std::string& kw = toks.front().text;
    Cursor c(toks, line);
    auto col_of = [&](std::size_t idx) { return toks.at(idx).col; };

    if (kw == "blowup") {
        if (!c.at_end() && c.peek() == "vertex") {
            c.literal("vertex");
            c.identifier("a vertex label");
        } else if (!c.at_end() && c.peek() == "edge") {
            c.literal("edge");
            c.identifier("a vertex label");
            c.identifier("a vertex label");
        }
        if (!c.at_end() && c.peek() == "as") {
            c.literal("as");
            c.identifier("a new label");
        }
    } else if (kw == "blowdown") {
        c.identifier("a handle label");
    } else if (kw == "slide") {
        c.identifier("a handle label");
        c.literal("over");
        c.identifier("a handle label");
        if (!c.at_end()) {
            const std::size_t at = c.pos();
            const std::string& s = c.take("a sign");
            if (s != "+" && s != "-") {
                c.fail(at, "slide sign must be + or -, got '" + s + "'");
            }
        }
    } else if (kw == "cancelpair") {
        c.identifier("a 1-handle label");
        c.identifier("a 2-handle label");
    } else if (kw == "uncancelpair") {
        if (!c.at_end() && c.peek() != "link") {
            c.identifier("a 1-handle label");
            c.identifier("a 2-handle label");
        }
        if (!c.at_end()) {
            c.literal("link");
            const std::size_t at = c.pos();
            const std::string& l = c.list("linking list");
            try {
                for (const auto& item : split_list(l)) {
                    auto [x, k] = split_once(item, '=');
                    if (!is_identifier(x)) {
                        throw Error(ErrorCode::SyntaxError, "'" + x + "' is not a label");
                    }
                    (void)detail::parse_integer(k);
                }
            } catch (const Error& e) {
                c.fail(at, e.detail());
            }
        }
    } else if (kw == "rbd") {
        c.literal("chain");
        const std::size_t at = c.pos();
        check_label_list(c.list("chain labels"), line, col_of(at));
        const std::size_t nat = c.pos();
        const std::string& n = c.take("'n=N'");
        if (n.rfind("n=", 0) != 0 || !is_int(n.substr(2))) {
            c.fail(nat, "expected 'n=N', got '" + n + "'");
        }
        if (!c.at_end()) {
            c.literal("as");
            c.identifier("a piece name");
        }
    } else if (kw == "rbu") {
        c.identifier("a piece name");
        if (!c.at_end() && c.peek() == "chain") {
            c.literal("chain");
            const std::size_t at = c.pos();
            check_label_list(c.list("chain labels"), line, col_of(at));
        }
        if (!c.at_end()) {
            c.literal("couple");
            const std::size_t at = c.pos();
            const std::string& l = c.list("coupling list");
            try {
                for (const auto& item : split_list(l)) {
                    auto [lhs, k] = split_once(item, '=');
                    auto [x, s] = split_once(lhs, '.');
                    if (!is_identifier(x) || !(is_identifier(s) || is_int(s))) {
                        throw Error(ErrorCode::SyntaxError, "bad coupling '" + item + "'");
                    }
                    (void)detail::parse_integer(k);
                }
            } catch (const Error& e) {
                c.fail(at, e.detail());
            }
        }
    } else if (kw == "seal") {
        c.identifier("a 1-handle label");
        c.identifier("a 2-handle label");
        if (!c.at_end()) {
            c.literal("as");
            c.identifier("a piece name");
        }
    } else if (kw == "unseal") {
        c.identifier("a piece name");
        c.literal("as");
        const std::size_t at = c.pos();
        const std::string& pair = c.list("[1-handle,2-handle]");
        check_label_list(pair, line, col_of(at));
        if (split_list(pair).size() != 2) {
            c.fail(at, "unseal needs exactly two labels, [1-handle,2-handle]");
        }
        if (!c.at_end()) {
            c.literal("couple");
            const std::size_t cat = c.pos();
            const std::string& l = c.list("coupling list");
            try {
                for (const auto& item : split_list(l)) {
                    auto [x, ac] = split_once(item, '=');
                    auto [a, k] = split_once(ac, ':');
                    if (!is_identifier(x)) {
                        throw Error(ErrorCode::SyntaxError, "'" + x + "' is not a label");
                    }
                    (void)detail::parse_integer(a);
                    (void)detail::parse_integer(k);
                }
            } catch (const Error& e) {
                c.fail(cat, e.detail());
            }
        }
    } else if (kw == "expect") {
        (void)c.take("an assertion");
        for (std::size_t i = 1; i < toks.size(); ++i) {
            const std::string& t = toks[i].text;
            const auto eq = t.find('=');
            if (eq == std::string::npos || eq == 0) {
                throw ParseError(ErrorCode::SyntaxError, line, toks[i].col, "expected key=value, got '" + t + "'");
            }
            const std::string key = t.substr(0, eq);
            if (!expect_keys().contains(key)) {
                throw ParseError(ErrorCode::SyntaxError, line, toks[i].col, "unknown invariant '" + key + "'");
            }
            try {
                check_expectation(key, t.substr(eq + 1));
            } catch (const Error& e) {
                throw ParseError(ErrorCode::SyntaxError, line, toks[i].col + static_cast<int>(eq) + 1, e.detail());
            }
        }
        return;
    }
    c.finish();
}

}  // namespace

std::string Statement::to_string() const
{
    std::string out = keyword;
    for (const auto& a : args) {
        out += ' ';
        out += a;
    }
    return out;
}

std::size_t MoveScript::move_count() const
{
    return static_cast<std::size_t>(
        std::count_if(statements.begin(), statements.end(), [](const Statement& s) { return !s.is_expect(); }));
}

MoveScript parse_script(const std::string& text)
{
    MoveScript script;
    bool have_header = false;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') {
            raw.pop_back();
        }
        const auto first = raw.find_first_not_of(" \t");
        if (first != std::string::npos && raw.compare(first, 2, "#!") == 0) {
            std::string note = raw.substr(first + 2);
            const auto s = note.find_first_not_of(' ');
            script.notes.push_back(s == std::string::npos ? "" : note.substr(s));
            continue;
        }
        const std::string body = raw.substr(0, raw.find('#'));
        std::vector<Token> toks = tokenize(body, line_no);
        if (toks.empty()) {
            continue;
        }
        const std::string& kw = toks.front().text;
        if (kw == "manifold") {
            if (have_header) {
                throw ParseError(ErrorCode::SyntaxError, line_no, toks.front().col, "second 'manifold' header");
            }
            if (toks.size() < 2) {
                throw ParseError(ErrorCode::ArityError, line_no, toks.front().col,
                                 "'manifold' needs a constructor (at token 1)");
            }
            if (toks.size() > 2) {
                throw ParseError(ErrorCode::ArityError, line_no, toks[2].col,
                                 "unexpected extra argument '" + toks[2].text + "' at token 3");
            }
            script.header = toks[1].text;
            if (script.header != "start") {
                try {
                    (void)construct_start(script.header);
                } catch (const Error& e) {
                    throw ParseError(ErrorCode::SyntaxError, line_no, toks[1].col, e.detail());
                }
            }
            have_header = true;
            continue;
        }
        if (!have_header) {
            throw ParseError(ErrorCode::SyntaxError, line_no, toks.front().col,
                             "script must start with 'manifold <constructor>'");
        }
        if (kw != "expect" && !move_keywords().contains(kw)) {
            throw ParseError(ErrorCode::UnknownMove, line_no, toks.front().col, "unknown move '" + kw + "'");
        }
        validate(toks, line_no);
        Statement st;
        st.keyword = kw;
        st.line = line_no;
        for (std::size_t i = 1; i < toks.size(); ++i) {
            st.args.push_back(toks[i].text);
        }
        script.statements.push_back(std::move(st));
    }
    if (!have_header) {
        throw ParseError(ErrorCode::SyntaxError, std::max(line_no, 1), 1, "missing 'manifold' header");
    }
    return script;
}

std::string print_script(const MoveScript& script)
{
    std::ostringstream out;
    out << "manifold " << script.header << '\n';
    for (const auto& n : script.notes) {
        out << "#! " << n << '\n';
    }
    for (const auto& s : script.statements) {
        out << s.to_string() << '\n';
    }
    return out.str();
}

}  // namespace kirby
