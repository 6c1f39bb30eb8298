#include "unitrat/analyze.hpp"

#include <cctype>
#include <sstream>

namespace unitrat {

using nlohmann::json;

GroupSpec parse_group(const std::string& text) {
    std::vector<Rat> gens;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
        std::erase_if(item, [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
        if (!item.empty()) gens.push_back(rat_from_string(item));
    }
    if (gens.empty()) throw std::invalid_argument("empty group generator list");
    return GroupSpec(std::move(gens));
}

json series_to_json(const TruncatedSeries& s) {
    json arr = json::array();
    for (const auto& [n, c] : s.coeffs()) arr.push_back({{"n", n}, {"c", rat_to_string(c)}});
    return arr;
}

json upr_to_json(const UnitProductRational& r) {
    json num = json::array();
    for (const auto& [e, c] : r.numerator().terms())
        num.push_back({{"n", e}, {"c", rat_to_string(c)}});
    json blocks = json::array();
    for (const Block& b : r.blocks())
        blocks.push_back({{"c", rat_to_string(b.c)}, {"e", b.e}, {"mult", b.mult}});
    return {{"numerator", num}, {"blocks", blocks}};
}

json set_to_json(const SimpleLinearSet& s) {
    return {{"offset", s.offset()}, {"periods", s.periods()}};
}

SimpleLinearSet set_from_json(const json& j) {
    Vec offset = j.at("offset").get<Vec>();
    std::vector<Vec> periods;
    for (const auto& p : j.at("periods")) periods.push_back(p.get<Vec>());
    return SimpleLinearSet(std::move(offset), std::move(periods));
}

json pieces_to_json(const PiecewisePolyExp& p) {
    json pieces = json::array();
    for (const PolyExpPiece& piece : p.pieces) {
        json terms = json::array();
        for (const ExpPolyTerm& t : piece.formula.terms) {
            json b = json::array();
            for (const auto& [mono, c] : t.b.terms())
                b.push_back({{"mono", mono}, {"c", rat_to_string(c)}});
            json beta = json::array();
            for (const Rat& x : t.beta) beta.push_back(rat_to_string(x));
            terms.push_back({{"B", b}, {"beta", beta}});
        }
        pieces.push_back({{"set", set_to_json(piece.set)}, {"terms", terms}});
    }
    return {{"semantics", p.semantics == Semantics::partition ? "partition" : "additive"},
            {"pieces", pieces}};
}

json skew_to_json(const SkewGeomSum& f) {
    json arr = json::array();
    for (const SkewGeometric& s : f.summands) {
        json factors = json::array();
        for (const auto& [c, e] : s.factors)
            factors.push_back({{"c", rat_to_string(c)}, {"e", e}});
        arr.push_back({{"c0", rat_to_string(s.c0)}, {"u0", s.u0}, {"factors", factors}});
    }
    std::string status;
    switch (f.status) {
    case Ambiguity::unambiguous: status = "unambiguous"; break;
    case Ambiguity::trivially_ambiguous: status = "trivially_ambiguous"; break;
    case Ambiguity::ambiguous: status = "ambiguous"; break;
    case Ambiguity::unknown: status = "unknown"; break;
    }
    return {{"summands", arr}, {"status", status}};
}

json precursive_to_json(const PRecursiveSystem& sys) {
    json recs = json::object();
    for (size_t j = 0; j < sys.recursions.size(); ++j) {
        json list = json::array();
        for (const PRecursion& r : sys.recursions[j]) {
            json q = json::array();
            for (const Rat& c : r.q.coeffs()) q.push_back(rat_to_string(c));
            list.push_back({{"a", r.shift}, {"Q", q}});
        }
        recs[std::to_string(j + 1)] = list;
    }
    json sections = json::array();
    for (const auto& s : sys.sections)
        sections.push_back({{"axis", s.axis + 1},
                            {"value", s.value},
                            {"system", precursive_to_json(*s.system)}});
    json initial = json::array();
    for (const auto& [n, c] : sys.initial) initial.push_back({{"n", n}, {"c", rat_to_string(c)}});
    return {{"d", sys.dim}, {"k", sys.k}, {"recursions", recs}, {"sections", sections},
            {"initial", initial}};
}

PRecursiveSystem precursive_from_json(const json& j) {
    PRecursiveSystem sys;
    sys.dim = j.at("d").get<size_t>();
    sys.k = j.at("k").get<long>();
    sys.recursions.resize(sys.dim);
    const json& recs = j.at("recursions");
    for (size_t axis = 0; axis < sys.dim; ++axis) {
        auto it = recs.find(std::to_string(axis + 1));
        if (it == recs.end()) continue;
        for (const json& r : *it) {
            std::vector<Rat> q;
            for (const json& c : r.at("Q")) q.push_back(rat_from_string(c.get<std::string>()));
            sys.recursions[axis].push_back({r.at("a").get<Vec>(), UniPoly(std::move(q))});
        }
    }
    if (j.contains("sections"))
        for (const json& s : j.at("sections"))
            sys.sections.push_back(
                {s.at("axis").get<size_t>() - 1, s.at("value").get<long>(),
                 std::make_shared<PRecursiveSystem>(precursive_from_json(s.at("system")))});
    if (j.contains("initial"))
        for (const json& iv : j.at("initial"))
            sys.initial[iv.at("n").get<Vec>()] = rat_from_string(iv.at("c").get<std::string>());
    for (const auto& axis : sys.recursions) {
        bool nonzero = false;
        for (const PRecursion& r : axis)
            if (!r.q.is_zero()) nonzero = true;
        if (!nonzero) throw std::invalid_argument("precursive system: axis without a recursion");
    }
    return sys;
}

json AnalyzeReport::to_json() const {
    json stages_j = json::array();
    for (const StageNote& s : stages)
        stages_j.push_back({{"stage", s.stage}, {"ok", s.ok}, {"note", s.note}});
    json j{{"exit_code", exit_code}, {"verdict", verdict}, {"stages", stages_j},
           {"notes", notes}};
    j["normalized"] = upr_to_json(normalized);
    json dec = json::array();
    for (const DecompTerm& t : decomposition) dec.push_back(upr_to_json(t.fraction));
    j["decomposition"] = dec;
    if (coeff_form) j["coeff_form"] = pieces_to_json(*coeff_form);
    if (skew) j["skew"] = skew_to_json(*skew);
    if (structure) j["structure"] = structure->describe();
    if (group) j["group_verdict"] = group->describe();
    json z = json::array();
    for (const Vec& n : zero_coefficients) z.push_back(n);
    j["zero_coefficients"] = z;
    return j;
}

AnalyzeReport analyze(const RationalExpr& expr, const std::optional<GroupSpec>& group,
                      const AnalyzeOptions& opts) {
    AnalyzeReport rep;
    try {
        // 1. single fraction over the least common denominator
        rep.normalized = normalize_sum(expr.terms);
        rep.stages.push_back({"normalize_sum", true, "oracle equality at degree 8"});

        // 2. rational splitting of blocks along exponent gcds
        std::vector<Block> split_blocks;
        for (const Block& b : rep.normalized.blocks()) {
            GcdSplit gs = gcd_normalize(b);
            if (gs.note) rep.notes.push_back("block " + vec_to_string(b.e) + ": " + *gs.note);
            for (const Block& nb : gs.blocks) split_blocks.push_back(nb);
        }
        UnitProductRational split(rep.normalized.dim(), rep.normalized.numerator(),
                                  split_blocks);
        if (opts.exact_verify &&
            compare(expand_rational(split, 8), expand_rational(rep.normalized, 8)))
            throw std::logic_error("gcd_normalize changed the function");
        rep.stages.push_back({"gcd_normalize", true, ""});

        // 3. Leinartas decomposition with the exact identity check
        rep.decomposition = leinartas_decompose(split);
        rep.stages.push_back(
            {"leinartas_decompose", true,
             std::to_string(rep.decomposition.size()) + " independent terms, exact identity"});

        // 4. piecewise coefficient formulas
        PiecewisePolyExp pile;
        pile.semantics = Semantics::additive;
        for (const DecompTerm& t : rep.decomposition)
            for (PolyExpPiece& piece : term_to_pieces(t).pieces)
                pile.pieces.push_back(std::move(piece));
        pile = canonicalize(pile);
        rep.stages.push_back({"term_to_pieces", true,
                              std::to_string(pile.pieces.size()) + " pieces (additive)"});

        // 5. partition upgrade
        PartitionUpgrade up = partition_upgrade(pile);
        if (!up.result) {
            rep.stages.push_back({"partition_upgrade", false, up.note});
            rep.notes.push_back("capability: " + up.note);
            rep.verdict = "capability_limit";
            rep.exit_code = 3;
            return rep;
        }
        rep.coeff_form = *up.result;
        rep.stages.push_back({"partition_upgrade", true,
                              std::to_string(rep.coeff_form->pieces.size()) + " pieces"});

        // final attestation: the partition form reproduces the input expansion
        if (opts.exact_verify) {
            TruncatedSeries in = expand_rational(expr.terms, opts.bound);
            bool ok = true;
            Vec bad;
            for (const auto& [n, c] : in.coeffs())
                if (evaluate_at(*rep.coeff_form, n) != c) {
                    ok = false;
                    bad = n;
                    break;
                }
            if (ok)
                for (const PolyExpPiece& piece : rep.coeff_form->pieces)
                    for (const Vec& n : enumerate_upto(piece.set, opts.bound))
                        if (evaluate_at(*rep.coeff_form, n) != in.coeff(n)) {
                            ok = false;
                            bad = n;
                            break;
                        }
            if (!ok) throw std::logic_error("final attestation failed at " + vec_to_string(bad));
            rep.stages.push_back({"final_attestation", true,
                                  "partition form equals input expansion to degree " +
                                      std::to_string(opts.bound)});
        }

        // 6. structure classification
        if (group) {
            rep.structure = classify_structure(*rep.coeff_form, *group, opts.r);
            rep.stages.push_back({"classify_structure", true, rep.structure->describe()});
        } else {
            bool nonconst = false;
            for (const PolyExpPiece& piece : rep.coeff_form->pieces)
                for (const ExpPolyTerm& t : piece.formula.terms)
                    if (t.b.terms().size() != 1 || !is_zero_vec(t.b.terms().begin()->first))
                        nonconst = true;
            rep.stages.push_back(
                {"classify_structure", true,
                 nonconst ? "not_bezivin (no group supplied)" : "exponential form, no group"});
        }

        // 7. skew-geometric conversion, torsion normalization, certification
        if (auto skew = from_polyexp(*rep.coeff_form)) {
            SkewGeomSum normalized_skew = torsion_normalize(*skew);
            AmbiguityReport amb = classify_ambiguity(normalized_skew);
            normalized_skew.status = amb.status;
            rep.skew = normalized_skew;
            rep.stages.push_back({"torsion_normalize", true,
                                  std::to_string(normalized_skew.summands.size()) + " summands"});
            if (group) {
                rep.group = certify_group(normalized_skew, *group, opts.r);
                // one root-power rewrite attempt for an offending denominator
                if (rep.group->kind == GroupVerdict::fail && rep.group->witness) {
                    if (auto rw = group->root_power_member(*rep.group->witness); rw && rw->n > 1)
                        rep.notes.push_back("witness " + rat_to_string(*rep.group->witness) +
                                            " satisfies c^" + std::to_string(rw->n) +
                                            " in G; coset refinement may certify the rewrite");
                }
                rep.stages.push_back({"certify_group", rep.group->kind != GroupVerdict::fail,
                                      rep.group->describe()});
            }
        } else {
            rep.stages.push_back(
                {"skew_conversion", false,
                 "non-constant coefficient polynomial; series is not piecewise exponential"});
        }

        // 8. zero-coefficient scan over the partition form
        if (opts.zero_scan) {
            const long zb = *opts.zero_scan;
            Vec n(rep.normalized.dim(), 0);
            while (true) {
                if (evaluate_at(*rep.coeff_form, n) == 0) rep.zero_coefficients.push_back(n);
                size_t c = n.size();
                bool done = false;
                while (c > 0) {
                    --c;
                    ++n[c];
                    if (total_degree(n) <= zb) break;
                    n[c] = 0;
                    if (c == 0) done = true;
                }
                if (done) break;
            }
        }

        // verdict and exit code
        if (rep.structure) {
            switch (rep.structure->kind) {
            case StructureVerdict::polya:
            case StructureVerdict::bezivin:
                rep.verdict = rep.structure->describe();
                rep.exit_code = 0;
                break;
            case StructureVerdict::not_bezivin:
            case StructureVerdict::constants_outside_group:
                rep.verdict = rep.structure->describe();
                rep.exit_code = 1;
                break;
            }
            if (rep.group && rep.group->kind == GroupVerdict::fail) rep.exit_code = 1;
        } else {
            rep.verdict = "decomposed";
            rep.exit_code = 0;
        }
    } catch (const capability_error& e) {
        rep.verdict = "capability_limit";
        rep.notes.push_back(e.what());
        rep.exit_code = 3;
    }
    return rep;
}

} // namespace unitrat
