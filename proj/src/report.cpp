#include "pdens/report.hpp"

#include "pdens/errors.hpp"
#include "pdens/volume.hpp"

#include <cstdlib>

namespace pdens {

namespace {

Json coset_json(const PowerClasses& pc, const CosetClass& c) {
    return Json{{"lambda", to_json(pc.representative(c))}, {"n", pc.n()}};
}

Json limits(const EPSequence& s) {
    Json out = Json::array();
    for (const auto& r : s.branch_limits()) out.push_back(to_json(r));
    return out;
}

Json sequence_json(const EPSequence& s) {
    Json head = Json::array();
    for (const auto& r : s.head()) head.push_back(to_json(r));
    Json pattern = Json::array();
    for (long n = s.onset(); n < s.onset() + s.modulus(); ++n) pattern.push_back(to_json(s.eval(n)));
    // branch c holds the terms for n = c mod modulus; the constant is the (0, 0) term
    Json branches = Json::array();
    for (const auto& b : s.branches()) {
        Json terms = Json::array();
        if (b.constant != 0) terms.push_back(Json{{"c", to_json(b.constant)}, {"l", 0}, {"a", 0}});
        for (const auto& t : b.terms) terms.push_back(Json{{"c", to_json(t.c)}, {"l", t.l}, {"a", t.a}});
        branches.push_back(terms);
    }
    return Json{{"modulus", s.modulus()}, {"onset", s.onset()}, {"head", head}, {"pattern", pattern},
                {"branches", branches}, {"branch_limits", limits(s)}};
}

Point default_point(const DefinableSet& x, const Query& q) {
    Point at = q.at ? *q.at : Point(static_cast<std::size_t>(x.ambient()));
    if (static_cast<int>(at.size()) != x.ambient())
        throw SemanticError("point " + to_string(at) + " does not live in K^" + std::to_string(x.ambient()));
    return at;
}

Subgroup query_group(Evaluator& eval, const DefinableSet& x, const Query& q) {
    if (q.group) return eval.group(*q.group);
    return Subgroup::power(x.prime(), x.coset_lcm());
}

// One point per coset piece of the cone, away from the apex.
std::vector<std::pair<Point, Rational>> cone_samples(const ConeWithMultiplicity& c) {
    std::vector<std::pair<Point, Rational>> out;
    for (const auto& [u, w] : c.rays) {
        const auto& pc = PowerClasses::get(c.p, w.n);
        for (const auto& [k, m] : w.weight) out.push_back({scale(pc.representative(k), u), m});
    }
    if (c.product) {
        const auto& pc = PowerClasses::get(c.p, c.product->n);
        for (const auto& [t, m] : c.product->weight) {
            Point z;
            for (const auto& k : t) z.push_back(pc.representative(k));
            out.push_back({z, m});
        }
    }
    return out;
}

}  // namespace

Json to_json(const Rational& r) { return to_string(r); }

Json to_json(const Point& x) {
    Json out = Json::array();
    for (const auto& c : x) out.push_back(to_json(c));
    return out;
}

Json to_json(const DensityReport& r) {
    return Json{{"point", to_json(r.point)},
                {"dim", r.dim},
                {"density", to_json(r.density)},
                {"modulus", r.modulus},
                {"sphere_branch_limits", limits(r.theta)},
                {"ball_branch_limits", limits(r.theta_ball)}};
}

Json to_json(const ConeWithMultiplicity& c) {
    Json rays = Json::array();
    for (const auto& [u, w] : c.rays) {
        const auto& pc = PowerClasses::get(c.p, w.n);
        for (const auto& [k, m] : w.weight)
            rays.push_back(Json{{"direction", to_json(u)}, {"coset", coset_json(pc, k)}, {"multiplicity", to_json(m)}});
    }
    Json out{{"origin", to_json(c.base_point)}, {"apex", c.apex}, {"dimension", c.dimension()}, {"rays", rays}};
    if (c.product) {
        const auto& pc = PowerClasses::get(c.p, c.product->n);
        Json prod = Json::array();
        for (const auto& [t, m] : c.product->weight) {
            Json cosets = Json::array();
            for (const auto& k : t) cosets.push_back(coset_json(pc, k));
            prod.push_back(Json{{"cosets", cosets}, {"multiplicity", to_json(m)}});
        }
        out["product"] = prod;
    }
    return out;
}

Json to_json(const CroftonResult& r) {
    Json bad = Json::array();
    for (const auto& u : r.bad_directions) bad.push_back(to_json(u));
    return Json{{"value", to_json(r.value)},
                {"depth_used", r.depth_used},
                {"cells_evaluated", r.cells_evaluated},
                {"bad_directions", bad}};
}

long default_depth() {
    if (const char* env = std::getenv("PDENS_DEPTH")) {
        try {
            long d = std::stol(env);
            if (d > 0) return d;
        } catch (const std::exception&) {
        }
    }
    return 12;
}

Json run_query(Evaluator& eval, const Query& q, const RunOptions& options, bool* ok) {
    Json out{{"query", q.verb}, {"set", q.set}};
    auto check = [&](bool passed) {
        if (!passed) *ok = false;
        return passed;
    };
    DefinableSet x = eval.set(q.set);
    const Point at = default_point(x, q);
    const int dim = q.dim ? *q.dim : x.dimension();

    if (q.verb == "density") {
        out.update(to_json(local_density(StepFunction::indicator(x, dim), at)));
    } else if (q.verb == "volume") {
        if (!q.level) throw SemanticError("a volume query needs 'level n'");
        out["point"] = to_json(at);
        out["level"] = *q.level;
        out["dim"] = dim;
        out["ball_volume"] = to_json(ball_volume(x, at, *q.level, dim));
        out["sphere_volume"] = to_json(volume_on_sphere(x, at, *q.level, dim));
    } else if (q.verb == "theta") {
        auto f = StepFunction::indicator(x, dim);
        out["point"] = to_json(at);
        out["dim"] = dim;
        out["sphere"] = sequence_json(theta_sequence(f, at));
        out["ball"] = sequence_json(theta_ball_sequence(f, at));
    } else if (q.verb == "cone") {
        Subgroup g = query_group(eval, x, q);
        out["group"] = g.describe();
        out["cone"] = to_json(tangent_cone(x, at, g));
    } else if (q.verb == "sc") {
        Subgroup g = query_group(eval, x, q);
        ConeWithMultiplicity c = sc_multiplicity(x, at, g);
        const long depth = q.depth ? *q.depth : options.depth;
        out["group"] = g.describe();
        out["cone"] = to_json(c);
        Json checks = Json::array();
        std::vector<std::pair<Point, Rational>> samples;
        if (q.dir)
            samples.push_back({*q.dir, c.multiplicity_at(*q.dir)});
        else
            samples = cone_samples(c);
        for (const auto& [z, m] : samples) {
            CrossCheck cc = sc_cross_check(x, at, g, z, depth);
            bool inside = check(cc.interval.contains(m));
            checks.push_back(Json{{"z", to_json(z)},
                                  {"multiplicity", to_json(m)},
                                  {"lo", to_json(cc.interval.lo)},
                                  {"hi", to_json(cc.interval.hi)},
                                  {"depth", cc.depth},
                                  {"contains", inside}});
        }
        out["cross_checks"] = checks;
    } else if (q.verb == "mt-check") {
        Subgroup g = query_group(eval, x, q);
        MtResult r = theorem_mt_check(x, at, g, options.refine_bound);
        out["lhs"] = to_json(r.lhs);
        out["rhs"] = to_json(r.rhs);
        out["equal"] = check(r.equal);
        out["group"] = r.group.describe();
        out["refinements"] = r.refinements;
    } else if (q.verb == "distinguished") {
        Subgroup g = query_group(eval, x, q);
        std::vector<Subgroup> refs;
        for (const auto& s : q.refine) refs.push_back(eval.group(s));
        if (refs.empty())
            for (long k : {2L, 3L, 6L}) refs.push_back(g.intersect(Subgroup::power(x.prime(), k * g.exponent())));
        Json names = Json::array();
        for (const auto& r : refs) names.push_back(r.describe());
        out["group"] = g.describe();
        out["refinements"] = names;
        out["equal"] = check(distinguished_check(x, at, g, refs));
    } else if (q.verb == "crofton") {
        CroftonCheck r = verify_crofton(x, at);
        out["lhs"] = to_json(r.lhs);
        out["rhs"] = to_json(r.rhs);
        out["equal"] = check(r.equal);
        out["depth_used"] = r.detail.depth_used;
        out["cells_evaluated"] = r.detail.cells_evaluated;
        Json bad = Json::array();
        for (const auto& u : r.detail.bad_directions) bad.push_back(to_json(u));
        out["bad_directions"] = bad;
    } else if (q.verb == "member") {
        if (!q.at) throw SemanticError("a member query needs 'at'");
        out["point"] = to_json(at);
        if (x.ambient() == 1 && !x.pieces().empty()) {
            const auto& s = std::get<Set1D>(x.pieces().front());
            out["member"] = s.contains(PadicNumber::from_rational(Prime(x.prime()), at[0], options.precision));
            out["precision"] = options.precision;
        } else {
            out["member"] = x.contains(at);
        }
    } else if (q.verb == "additivity") {
        if (!q.with) throw SemanticError("an additivity query needs 'with NAME'");
        out["with"] = *q.with;
        out["point"] = to_json(at);
        out["equal"] = check(density_additivity_check(x, eval.set(*q.with), at));
    } else {
        throw SemanticError("unknown query verb '" + q.verb + "'");
    }
    return out;
}

RunOutput run(const Document& doc, const RunOptions& options) {
    RunOutput out;
    Evaluator eval(doc);
    for (const auto& q : doc.queries()) {
        try {
            out.results.push_back(run_query(eval, q, options, &out.ok));
        } catch (const Error& e) {
            out.ok = false;
            out.results.push_back(
                Json{{"query", q.verb}, {"set", q.set}, {"error_kind", e.kind()}, {"message", e.what()}});
        }
    }
    return out;
}

}  // namespace pdens
