#include "pdens/dsl.hpp"

#include "pdens/errors.hpp"
#include "pdens/padic.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace pdens {

namespace {

struct Token {
    enum class Type { Ident, Number, String, Punct, End };
    Type type = Type::End;
    std::string text;
    int line = 1;
    int col = 1;
};

std::vector<Token> lex(const std::string& src, int line0 = 1, int col0 = 1) {
    std::vector<Token> out;
    int line = line0, col = col0;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto is_ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.col = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (is_ident_char(src[j]) ||
                                      (src[j] == '-' && j + 1 < src.size() &&
                                       std::isalpha(static_cast<unsigned char>(src[j + 1])) && j > i &&
                                       std::isalpha(static_cast<unsigned char>(src[j - 1])))))
                ++j;
            t.type = Token::Type::Ident;
            t.text = src.substr(i, j - i);
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            t.type = Token::Type::Number;
            t.text = src.substr(i, j - i);
            advance(j - i);
        } else if (c == '"') {
            std::size_t j = i + 1;
            while (j < src.size() && src[j] != '"' && src[j] != '\n') ++j;
            if (j >= src.size() || src[j] != '"') throw SyntaxError("unterminated string", line, col);
            t.type = Token::Type::String;
            t.text = src.substr(i + 1, j - i - 1);
            advance(j + 1 - i);
        } else if (src.compare(i, 3, "\xE2\x89\xA5") == 0 || src.compare(i, 3, "\xE2\x89\xA4") == 0) {
            t.type = Token::Type::Punct;
            t.text = src[i + 2] == '\xA5' ? ">=" : "<=";
            i += 3;
            ++col;
        } else if (src.compare(i, 3, "\xE2\x88\x88") == 0) {
            t.type = Token::Type::Ident;
            t.text = "in";
            i += 3;
            ++col;
        } else {
            t.type = Token::Type::Punct;
            std::string two = src.substr(i, 2);
            if (two == ">=" || two == "<=" || two == "==") {
                t.text = two;
            } else if (std::string("(),;=*/+-<>").find(c) != std::string::npos) {
                t.text = std::string(1, c);
            } else {
                throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
            }
            advance(t.text.size());
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.line = line;
    end.col = col;
    out.push_back(end);
    return out;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

class Cursor {
public:
    explicit Cursor(std::vector<Token> toks) : toks_(std::move(toks)) {}

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    const Token& next() {
        const Token& t = peek();
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    bool at_end() const { return peek().type == Token::Type::End; }
    [[noreturn]] void fail(const std::string& msg, const Token& t) const {
        throw SyntaxError(msg + (t.type == Token::Type::End ? " at end of input" : " near '" + t.text + "'"), t.line,
                          t.col);
    }
    [[noreturn]] void fail(const std::string& msg) const { fail(msg, peek()); }

    bool is_punct(const std::string& p, std::size_t k = 0) const {
        return peek(k).type == Token::Type::Punct && peek(k).text == p;
    }
    bool is_word(const std::string& w, std::size_t k = 0) const {
        return peek(k).type == Token::Type::Ident && peek(k).text == w;
    }
    bool is_word_ci(const std::string& w) const { return peek().type == Token::Type::Ident && lower(peek().text) == w; }
    bool accept_punct(const std::string& p) {
        if (!is_punct(p)) return false;
        next();
        return true;
    }
    bool accept_word(const std::string& w) {
        if (!is_word(w)) return false;
        next();
        return true;
    }
    void expect_punct(const std::string& p) {
        if (!accept_punct(p)) fail("expected '" + p + "'");
    }
    void expect_word(const std::string& w) {
        if (!accept_word(w)) fail("expected '" + w + "'");
    }
    std::string expect_ident(const std::string& what) {
        if (peek().type != Token::Type::Ident) fail("expected " + what);
        return next().text;
    }

    Integer natural() {
        if (peek().type != Token::Type::Number) fail("expected a number");
        return Integer(next().text);
    }
    long integer() {
        bool neg = accept_punct("-");
        const Token& t = peek();
        Integer v = natural();
        if (neg) v = -v;
        if (!v.fits_slong_p()) fail("integer out of range", t);
        return v.get_si();
    }
    Rational rational() {
        bool neg = accept_punct("-");
        const Token& t = peek();
        Integer num = natural();
        Integer den = 1;
        if (accept_punct("/")) {
            den = natural();
            if (den == 0) fail("zero denominator", t);
        }
        Rational r(num, den);
        r.canonicalize();
        return neg ? Rational(-r) : r;
    }
    Point point() {
        Point out;
        if (!accept_punct("(")) return {rational()};
        out.push_back(rational());
        while (accept_punct(",")) out.push_back(rational());
        expect_punct(")");
        return out;
    }
    // "P n", "P_n" or "Pn"
    long power_group() {
        const Token& t = peek();
        if (t.type != Token::Type::Ident || t.text.empty() || t.text[0] != 'P') fail("expected 'P n'");
        std::string rest = t.text.substr(1);
        if (!rest.empty() && rest[0] == '_') rest = rest.substr(1);
        next();
        long n;
        if (rest.empty()) {
            n = integer();
        } else {
            if (!std::all_of(rest.begin(), rest.end(), [](unsigned char c) { return std::isdigit(c); }))
                fail("expected 'P n'", t);
            n = std::stol(rest);
        }
        if (n < 1) throw SemanticError("power group exponent must be positive, got " + std::to_string(n));
        return n;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

// ---- formulas ----

class FormulaParser {
public:
    explicit FormulaParser(Cursor& c) : c_(c) {}

    FormulaPtr disjunction() {
        FormulaPtr f = conjunction();
        while (c_.is_word_ci("or")) {
            c_.next();
            f = Formula1D::disj(f, conjunction());
        }
        return f;
    }

private:
    FormulaPtr conjunction() {
        FormulaPtr f = negation();
        while (c_.is_word_ci("and")) {
            c_.next();
            f = Formula1D::conj(f, negation());
        }
        return f;
    }
    FormulaPtr negation() {
        if (c_.is_word_ci("not")) {
            c_.next();
            return Formula1D::negate(negation());
        }
        return atom();
    }
    Rational shifted_t() {
        if (!c_.accept_word("t")) c_.fail("expected 't'");
        if (c_.accept_punct("-")) return c_.rational();
        if (c_.accept_punct("+")) return -c_.rational();
        return Rational(0);
    }
    Cmp cmp() {
        static const std::vector<std::pair<std::string, Cmp>> ops{
            {"<", Cmp::Lt}, {"<=", Cmp::Le}, {"=", Cmp::Eq}, {"==", Cmp::Eq}, {">=", Cmp::Ge}, {">", Cmp::Gt}};
        for (const auto& [s, c] : ops)
            if (c_.accept_punct(s)) return c;
        c_.fail("expected a comparison");
    }
    FormulaPtr atom() {
        if (c_.accept_punct("(")) {
            FormulaPtr f = disjunction();
            c_.expect_punct(")");
            return f;
        }
        if (c_.is_word_ci("true") || c_.is_word_ci("false")) return Formula1D::truth(lower(c_.next().text) == "true");
        if (c_.accept_word("ord")) {
            c_.expect_punct("(");
            Rational center = shifted_t();
            c_.expect_punct(")");
            Cmp op = cmp();
            return Formula1D::ord(center, op, c_.integer());
        }
        Rational center = shifted_t();
        if (!c_.is_word_ci("in")) c_.fail("expected 'in'");
        c_.next();
        Rational lambda(1);
        if (c_.peek().type != Token::Type::Ident) {
            lambda = c_.rational();
            c_.expect_punct("*");
        }
        if (lambda == 0) throw SemanticError("coset scale must be nonzero");
        long n = c_.power_group();
        return Formula1D::coset(center, PowerCoset{lambda, n});
    }

    Cursor& c_;
};

// ---- documents ----

const std::map<std::string, std::string>& verb_aliases() {
    static const std::map<std::string, std::string> m{
        {"density", "density"},       {"volume", "volume"},   {"theta", "theta"},
        {"theta-sequence", "theta"}, {"cone", "cone"},       {"sc", "sc"},
        {"mt-check", "mt-check"},     {"distinguished", "distinguished"},
        {"distinguished-check", "distinguished"},             {"crofton", "crofton"},
        {"member", "member"},         {"additivity", "additivity"}};
    return m;
}

class DocParser {
public:
    DocParser(const std::string& src) : c_(lex(src)) {}

    Document run() {
        Document d;
        if (!c_.accept_word("prime"))
            throw SyntaxError("a document must start with 'prime p;'", c_.peek().line, c_.peek().col);
        const Token& pt = c_.peek();
        long p = c_.integer();
        try {
            Prime check(p);
            (void)check;
        } catch (const Error& e) {
            throw SemanticError("prime " + std::to_string(p) + " is not an odd prime (line " +
                                std::to_string(pt.line) + ")");
        }
        d.prime = p;
        c_.expect_punct(";");
        while (!c_.at_end()) {
            const Token& t = c_.peek();
            if (c_.accept_word("set")) {
                SetDef s;
                s.name = declare(c_.expect_ident("a set name"), t);
                c_.expect_punct("=");
                s.expr = set_expr();
                c_.expect_punct(";");
                sets_.insert(s.name);
                d.items.push_back(std::move(s));
            } else if (c_.accept_word("group")) {
                GroupDef g;
                g.name = declare(c_.expect_ident("a group name"), t);
                c_.expect_punct("=");
                g.expr = group_expr();
                c_.expect_punct(";");
                groups_.insert(g.name);
                d.items.push_back(std::move(g));
            } else if (c_.accept_word("query")) {
                d.items.push_back(query());
            } else if (c_.is_word("prime")) {
                throw SemanticError("prime declared more than once (line " + std::to_string(t.line) + ")");
            } else {
                c_.fail("expected 'set', 'group' or 'query'");
            }
        }
        return d;
    }

private:
    std::string declare(const std::string& name, const Token& at) {
        if (sets_.count(name) || groups_.count(name))
            throw SemanticError("name '" + name + "' defined twice (line " + std::to_string(at.line) + ")");
        return name;
    }
    std::string set_ref(const Token& at) {
        std::string name = c_.expect_ident("a set name");
        if (!sets_.count(name))
            throw SemanticError("undefined set '" + name + "' (line " + std::to_string(at.line) + ")");
        return name;
    }

    GroupExpr group_expr() {
        GroupExpr g;
        if (c_.accept_word("cosets")) {
            g.power = false;
            g.n = c_.integer();
            if (g.n < 1) throw SemanticError("coset exponent must be positive");
            c_.expect_punct("(");
            g.reps.push_back(c_.rational());
            while (c_.accept_punct(",")) g.reps.push_back(c_.rational());
            c_.expect_punct(")");
            for (const auto& r : g.reps)
                if (r == 0) throw SemanticError("coset representatives must be nonzero");
            return g;
        }
        g.n = c_.power_group();
        return g;
    }

    GroupSpec group_spec() {
        const Token& t = c_.peek();
        if (t.type == Token::Type::Ident && !c_.is_word("cosets") && groups_.count(t.text)) {
            c_.next();
            return GroupSpec{t.text, {}};
        }
        if (t.type == Token::Type::Ident && !c_.is_word("cosets") && (t.text.empty() || t.text[0] != 'P'))
            throw SemanticError("undefined group '" + t.text + "' (line " + std::to_string(t.line) + ")");
        return GroupSpec{"", group_expr()};
    }

    PowerCoset coset_literal() {
        Rational lambda = c_.rational();
        c_.expect_punct("*");
        long n = c_.power_group();
        if (lambda == 0) throw SemanticError("coset scale must be nonzero");
        return {lambda, n};
    }

    SetExpr set_expr() {
        using K = SetExpr::Kind;
        const Token& t = c_.peek();
        SetExpr e;
        if (c_.accept_word("cell")) {
            e.kind = K::Cell;
            c_.expect_punct("(");
            c_.expect_word("center");
            e.center = c_.rational();
            c_.expect_punct(",");
            c_.expect_word("coset");
            e.coset = coset_literal();
            while (c_.accept_punct(",")) {
                c_.expect_word("ord");
                if (c_.accept_punct(">=")) {
                    if (e.lo) c_.fail("lower bound given twice");
                    e.lo = c_.integer();
                } else if (c_.accept_punct("<=")) {
                    if (e.hi) c_.fail("upper bound given twice");
                    e.hi = c_.integer();
                } else {
                    c_.fail("expected '>=' or '<='");
                }
            }
            c_.expect_punct(")");
        } else if (c_.is_word("sphere") || c_.is_word("ball")) {
            e.kind = c_.next().text == "sphere" ? K::Sphere : K::Ball;
            c_.expect_punct("(");
            e.center = c_.rational();
            c_.expect_punct(",");
            e.lo = c_.integer();
            c_.expect_punct(")");
        } else if (c_.accept_word("point")) {
            e.kind = K::Point;
            c_.expect_punct("(");
            e.center = c_.rational();
            c_.expect_punct(")");
        } else if (c_.accept_word("coset")) {
            e.kind = K::Coset;
            c_.expect_punct("(");
            e.center = c_.rational();
            c_.expect_punct(",");
            e.coset.scale = c_.rational();
            c_.expect_punct(",");
            e.coset.n = c_.integer();
            c_.expect_punct(")");
            if (e.coset.scale == 0 || e.coset.n < 1) throw SemanticError("malformed coset (line " + std::to_string(t.line) + ")");
        } else if (c_.accept_word("evenval")) {
            e.kind = K::Evenval;
            c_.expect_punct("(");
            e.center = c_.rational();
            c_.expect_punct(")");
        } else if (c_.accept_word("union")) {
            if (c_.accept_word("over")) {
                e.kind = K::UnionOver;
                std::string var = c_.expect_ident("a variable");
                c_.expect_word("in");
                c_.expect_word("Z");
                c_.expect_word("of");
                c_.expect_word("sphere");
                c_.expect_punct("(");
                e.center = c_.rational();
                c_.expect_punct(",");
                linear(var, e);
                c_.expect_punct(")");
            } else {
                e.kind = K::Union;
                list(e);
            }
        } else if (c_.accept_word("box")) {
            e.kind = K::Box;
            list(e);
            if (e.children.size() < 2) throw SemanticError("a box needs at least two factors");
        } else if (c_.accept_word("graph")) {
            e.kind = K::Graph;
            c_.expect_punct("(");
            e.children.push_back(set_expr());
            c_.expect_punct(",");
            e.slope = c_.rational();
            c_.expect_punct(",");
            e.power = c_.integer();
            if (c_.accept_punct(",")) e.m0 = c_.integer();
            c_.expect_punct(")");
            if (e.slope == 0) throw SemanticError("graph constant must be nonzero");
            if (e.power < 2) throw SemanticError("graph exponent must be at least 2");
        } else if (c_.accept_word("raycone")) {
            e.kind = K::RayCone;
            c_.expect_word("origin");
            e.origin = c_.point();
            while (c_.accept_word("ray")) {
                c_.expect_word("dir");
                RayDecl r;
                r.direction = c_.point();
                if (r.direction.size() != e.origin.size())
                    throw SemanticError("ray direction and origin differ in dimension");
                if (std::all_of(r.direction.begin(), r.direction.end(), [](const Rational& x) { return x == 0; }))
                    throw SemanticError("ray direction must be nonzero");
                c_.expect_word("coset");
                r.coset = coset_literal();
                e.rays.push_back(std::move(r));
            }
            e.apex = c_.accept_word("apex");
        } else if (c_.accept_word("formula")) {
            e.kind = K::Formula;
            const Token& s = c_.peek();
            if (s.type != Token::Type::String) c_.fail("expected a quoted formula");
            c_.next();
            // positions inside the string are reported relative to the document
            Cursor inner(lex(s.text, s.line, s.col + 1));
            e.formula = FormulaParser(inner).disjunction();
            if (!inner.at_end()) inner.fail("trailing input in formula");
        } else if (t.type == Token::Type::Ident) {
            e.kind = K::Ref;
            e.name = set_ref(t);
        } else {
            c_.fail("expected a set expression");
        }
        return e;
    }

    void list(SetExpr& e) {
        c_.expect_punct("(");
        e.children.push_back(set_expr());
        while (c_.accept_punct(",")) e.children.push_back(set_expr());
        c_.expect_punct(")");
    }

    // [a] k [(+|-) b]  or a plain constant
    void linear(const std::string& var, SetExpr& e) {
        e.step = 0;
        e.offset = 0;
        if (c_.peek().type == Token::Type::Number || c_.is_punct("-")) {
            long a = c_.integer();
            if (c_.accept_word(var)) {
                e.step = a;
            } else {
                e.offset = a;
                finish_linear(e);
                return;
            }
        } else {
            c_.expect_word(var);
            e.step = 1;
        }
        if (c_.accept_punct("+"))
            e.offset = c_.integer();
        else if (c_.accept_punct("-"))
            e.offset = -c_.integer();
        finish_linear(e);
    }
    void finish_linear(SetExpr& e) {
        if (e.step < 1) throw SemanticError("the union needs a positive step a in 'a k + b'");
    }

    Query query() {
        Query q;
        const Token& vt = c_.peek();
        std::string verb = c_.expect_ident("a query verb");
        auto it = verb_aliases().find(verb);
        if (it == verb_aliases().end())
            throw SemanticError("unknown query verb '" + verb + "' (line " + std::to_string(vt.line) + ")");
        q.verb = it->second;
        q.set = set_ref(c_.peek());
        std::set<std::string> seen;
        while (!c_.accept_punct(";")) {
            const Token& o = c_.peek();
            std::string opt = c_.expect_ident("a query option or ';'");
            if (!seen.insert(opt).second) c_.fail("option '" + opt + "' given twice", o);
            if (opt == "at") {
                q.at = c_.point();
            } else if (opt == "group") {
                q.group = group_spec();
            } else if (opt == "level") {
                q.level = c_.integer();
            } else if (opt == "refine") {
                c_.expect_punct("(");
                q.refine.push_back(group_spec());
                while (c_.accept_punct(",")) q.refine.push_back(group_spec());
                c_.expect_punct(")");
            } else if (opt == "depth") {
                q.depth = c_.integer();
            } else if (opt == "dim") {
                q.dim = static_cast<int>(c_.integer());
            } else if (opt == "dir") {
                q.dir = c_.point();
            } else if (opt == "with") {
                q.with = set_ref(c_.peek());
            } else {
                c_.fail("unknown query option '" + opt + "'", o);
            }
        }
        return q;
    }

    Cursor c_;
    std::set<std::string> sets_, groups_;
};

// ---- printing ----

std::string rat(const Rational& r) { return to_string(r); }

std::string point_text(const Point& x) {
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + rat(x[i]);
    return s + ")";
}

std::string at_text(const Point& x) { return x.size() == 1 ? rat(x[0]) : point_text(x); }

std::string coset_text(const PowerCoset& c) { return rat(c.scale) + " * P " + std::to_string(c.n); }

std::string group_text(const GroupExpr& g) {
    if (g.power) return "P " + std::to_string(g.n);
    std::string s = "cosets " + std::to_string(g.n) + " (";
    for (std::size_t i = 0; i < g.reps.size(); ++i) s += (i ? ", " : "") + rat(g.reps[i]);
    return s + ")";
}

std::string group_text(const GroupSpec& g) { return g.name.empty() ? group_text(g.expr) : g.name; }

std::string escape_formula(const FormulaPtr& f) { return "\"" + f->to_string() + "\""; }

}  // namespace

FormulaPtr parse_formula(const std::string& text) {
    Cursor c(lex(text));
    FormulaPtr f = FormulaParser(c).disjunction();
    if (!c.at_end()) c.fail("trailing input in formula");
    return f;
}

bool operator==(const SetExpr& a, const SetExpr& b) {
    bool formulas = (!a.formula && !b.formula) || (a.formula && b.formula && formulas_equal(a.formula, b.formula));
    return a.kind == b.kind && a.center == b.center && a.coset == b.coset && a.lo == b.lo && a.hi == b.hi &&
           a.step == b.step && a.offset == b.offset && a.slope == b.slope && a.power == b.power && a.m0 == b.m0 &&
           a.origin == b.origin && a.rays == b.rays && a.apex == b.apex && formulas && a.name == b.name &&
           a.children == b.children;
}

std::vector<Query> Document::queries() const {
    std::vector<Query> out;
    for (const auto& it : items)
        if (const auto* q = std::get_if<Query>(&it)) out.push_back(*q);
    return out;
}

const SetDef* Document::find_set(const std::string& name) const {
    for (const auto& it : items)
        if (const auto* s = std::get_if<SetDef>(&it); s && s->name == name) return s;
    return nullptr;
}

const GroupDef* Document::find_group(const std::string& name) const {
    for (const auto& it : items)
        if (const auto* g = std::get_if<GroupDef>(&it); g && g->name == name) return g;
    return nullptr;
}

Document parse(const std::string& source) { return DocParser(source).run(); }

std::string print(const SetExpr& e) {
    using K = SetExpr::Kind;
    auto children = [&](const std::string& head) {
        std::string s = head + "(";
        for (std::size_t i = 0; i < e.children.size(); ++i) s += (i ? ", " : "") + print(e.children[i]);
        return s + ")";
    };
    switch (e.kind) {
        case K::Cell: {
            std::string s = "cell(center " + rat(e.center) + ", coset " + coset_text(e.coset);
            if (e.lo) s += ", ord >= " + std::to_string(*e.lo);
            if (e.hi) s += ", ord <= " + std::to_string(*e.hi);
            return s + ")";
        }
        case K::Sphere: return "sphere(" + rat(e.center) + ", " + std::to_string(*e.lo) + ")";
        case K::Ball: return "ball(" + rat(e.center) + ", " + std::to_string(*e.lo) + ")";
        case K::Point: return "point(" + rat(e.center) + ")";
        case K::Coset:
            return "coset(" + rat(e.center) + ", " + rat(e.coset.scale) + ", " + std::to_string(e.coset.n) + ")";
        case K::Evenval: return "evenval(" + rat(e.center) + ")";
        case K::UnionOver: {
            std::string lin = e.step == 1 ? "k" : std::to_string(e.step) + "k";
            if (e.offset > 0) lin += " + " + std::to_string(e.offset);
            if (e.offset < 0) lin += " - " + std::to_string(-e.offset);
            return "union over k in Z of sphere(" + rat(e.center) + ", " + lin + ")";
        }
        case K::Union: return children("union");
        case K::Box: return children("box");
        case K::Graph: {
            std::string s = "graph(" + print(e.children.at(0)) + ", " + rat(e.slope) + ", " + std::to_string(e.power);
            if (e.m0) s += ", " + std::to_string(*e.m0);
            return s + ")";
        }
        case K::RayCone: {
            std::string s = "raycone origin " + point_text(e.origin);
            for (const auto& r : e.rays) s += " ray dir " + point_text(r.direction) + " coset " + coset_text(r.coset);
            if (e.apex) s += " apex";
            return s;
        }
        case K::Formula: return "formula " + escape_formula(e.formula);
        case K::Ref: return e.name;
    }
    return "";
}

std::string print(const Document& d) {
    std::ostringstream out;
    out << "prime " << d.prime << ";\n";
    for (const auto& it : d.items) {
        if (const auto* s = std::get_if<SetDef>(&it)) {
            out << "set " << s->name << " = " << print(s->expr) << ";\n";
        } else if (const auto* g = std::get_if<GroupDef>(&it)) {
            out << "group " << g->name << " = " << group_text(g->expr) << ";\n";
        } else {
            const auto& q = std::get<Query>(it);
            out << "query " << q.verb << " " << q.set;
            if (q.at) out << " at " << at_text(*q.at);
            if (q.group) out << " group " << group_text(*q.group);
            if (q.level) out << " level " << *q.level;
            if (!q.refine.empty()) {
                out << " refine (";
                for (std::size_t i = 0; i < q.refine.size(); ++i) out << (i ? ", " : "") << group_text(q.refine[i]);
                out << ")";
            }
            if (q.depth) out << " depth " << *q.depth;
            if (q.dim) out << " dim " << *q.dim;
            if (q.dir) out << " dir " << point_text(*q.dir);
            if (q.with) out << " with " << *q.with;
            out << ";\n";
        }
    }
    return out.str();
}

const std::vector<std::string>& query_verbs() {
    static const std::vector<std::string> v{"density", "volume",        "theta",   "cone",   "sc",
                                            "mt-check", "distinguished", "crofton", "member", "additivity"};
    return v;
}

// ---- evaluation ----

namespace {

Set1D as_set1d(const DefinableSet& x) {
    if (x.ambient() != 1) throw SemanticError("expected a subset of K");
    if (x.pieces().empty()) return Set1D::empty(x.prime());
    return std::get<Set1D>(x.pieces().front());
}

Set1D union_over(long p, const Rational& c, long step, long offset) {
    const auto& pc = PowerClasses::get(p, step);
    std::vector<Cell1D> cells;
    for (long u = 0; u < pc.unit_classes(); ++u)
        cells.emplace_back(c, PowerCoset{pc.representative({mod(offset, step), u}), step});
    return Set1D::from_cells(p, cells);
}

}  // namespace

DefinableSet Evaluator::set(const std::string& name) {
    auto it = cache_.find(name);
    if (it != cache_.end()) return it->second;
    const SetDef* def = doc_.find_set(name);
    if (!def) throw SemanticError("undefined set '" + name + "'");
    DefinableSet x = set(def->expr);
    cache_.emplace(name, x);
    return x;
}

DefinableSet Evaluator::set(const SetExpr& e) {
    using K = SetExpr::Kind;
    using F = Formula1D;
    const long p = doc_.prime;
    switch (e.kind) {
        case K::Cell: return DefinableSet::from(Set1D::from_cells(p, {Cell1D(e.center, e.coset, e.lo, e.hi)}));
        case K::Sphere: return DefinableSet::from(normalize_1d(p, F::ord(e.center, Cmp::Eq, *e.lo)));
        case K::Ball: return DefinableSet::from(normalize_1d(p, F::ord(e.center, Cmp::Ge, *e.lo)));
        case K::Point: return DefinableSet::from(Set1D::from_cells(p, {Cell1D::point(e.center)}));
        case K::Coset: return DefinableSet::from(normalize_1d(p, F::coset(e.center, e.coset)));
        case K::Evenval: return DefinableSet::from(union_over(p, e.center, 2, 0));
        case K::UnionOver: return DefinableSet::from(union_over(p, e.center, e.step, e.offset));
        case K::Union: {
            DefinableSet acc = set(e.children.at(0));
            for (std::size_t i = 1; i < e.children.size(); ++i) {
                DefinableSet next = set(e.children[i]);
                if (next.ambient() != acc.ambient()) throw SemanticError("union of sets in different spaces");
                acc = acc.unite(next);
            }
            return acc;
        }
        case K::Box: {
            BoxSet b;
            for (const auto& c : e.children) b.factors.push_back(as_set1d(set(c)));
            return DefinableSet::from(std::move(b));
        }
        case K::Graph: {
            Set1D base = as_set1d(set(e.children.at(0)));
            long m0 = e.m0 ? *e.m0 : MonomialGraph::least_level(e.slope, e.power, p);
            return DefinableSet::from(MonomialGraph{base, e.slope, e.power, m0});
        }
        case K::RayCone: {
            RayCone r(p, e.origin, e.apex);
            for (const auto& ray : e.rays) r.add_ray(ray.direction, ray.coset);
            return DefinableSet::from(std::move(r));
        }
        case K::Formula: return DefinableSet::from(normalize_1d(p, e.formula));
        case K::Ref: return set(e.name);
    }
    throw InternalInconsistency("unknown set expression");
}

Subgroup Evaluator::group(const GroupSpec& g) {
    GroupExpr e = g.expr;
    if (!g.name.empty()) {
        const GroupDef* def = doc_.find_group(g.name);
        if (!def) throw SemanticError("undefined group '" + g.name + "'");
        e = def->expr;
    }
    if (e.power) return Subgroup::power(doc_.prime, e.n);
    return Subgroup::from_representatives(doc_.prime, e.n, e.reps);
}

}  // namespace pdens
