#pragma once

#include "pdens/formula.hpp"
#include "pdens/sets.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace pdens {

/// Parses the formula syntax printed by Formula1D::to_string, plus a few
/// spellings: P_2 / P2, unicode comparison and membership signs, upper-case
/// connectives.
FormulaPtr parse_formula(const std::string& text);

struct RayDecl {
    Point direction;
    PowerCoset coset;
    friend bool operator==(const RayDecl&, const RayDecl&) = default;
};

struct SetExpr {
    enum class Kind { Cell, Sphere, Ball, Point, Coset, Evenval, UnionOver, Union, Box, Graph, RayCone, Formula, Ref };
    Kind kind = Kind::Ref;
    Rational center;                        // cell, sphere, ball, point, coset, evenval, union over
    PowerCoset coset;                       // cell, coset
    std::optional<long> lo, hi;             // cell bounds; sphere/ball level in lo
    long step = 1, offset = 0;              // union over k of sphere(c, step k + offset)
    Rational slope;                         // graph constant
    long power = 2;                         // graph exponent
    std::optional<long> m0;                 // graph level
    pdens::Point origin;                    // ray cone
    std::vector<RayDecl> rays;
    bool apex = false;
    FormulaPtr formula;
    std::string name;                       // reference
    std::vector<SetExpr> children;          // union, box, graph base

    friend bool operator==(const SetExpr& a, const SetExpr& b);
};

struct GroupExpr {
    bool power = true;  // P n, else the subgroup generated by cosets of P n
    long n = 1;
    std::vector<Rational> reps;
    friend bool operator==(const GroupExpr&, const GroupExpr&) = default;
};

/// A named group or an inline expression.
struct GroupSpec {
    std::string name;
    GroupExpr expr;
    friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

struct SetDef {
    std::string name;
    SetExpr expr;
    friend bool operator==(const SetDef&, const SetDef&) = default;
};

struct GroupDef {
    std::string name;
    GroupExpr expr;
    friend bool operator==(const GroupDef&, const GroupDef&) = default;
};

struct Query {
    std::string verb;
    std::string set;
    std::optional<Point> at;
    std::optional<GroupSpec> group;
    std::optional<long> level;
    std::vector<GroupSpec> refine;
    std::optional<long> depth;
    std::optional<int> dim;
    std::optional<Point> dir;
    std::optional<std::string> with;
    friend bool operator==(const Query&, const Query&) = default;
};

using Item = std::variant<SetDef, GroupDef, Query>;

struct Document {
    long prime = 0;
    std::vector<Item> items;
    friend bool operator==(const Document&, const Document&) = default;

    std::vector<Query> queries() const;
    const SetDef* find_set(const std::string& name) const;
    const GroupDef* find_group(const std::string& name) const;
};

/// Throws SyntaxError (with line and column) or SemanticError.
Document parse(const std::string& source);
/// Canonical text; parse(print(d)) == d.
std::string print(const Document& d);
std::string print(const SetExpr& e);

/// Query verbs in canonical spelling.
const std::vector<std::string>& query_verbs();

/// Evaluates named sets and groups of a parsed document, memoized.
class Evaluator {
public:
    explicit Evaluator(const Document& d) : doc_(d) {}
    DefinableSet set(const std::string& name);
    DefinableSet set(const SetExpr& e);
    Subgroup group(const GroupSpec& g);

private:
    const Document& doc_;
    std::map<std::string, DefinableSet> cache_;
};

}  // namespace pdens
