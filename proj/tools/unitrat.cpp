// Command-line surface: expression parsing, series expansion, Leinartas
// decomposition, coefficient forms, group certification, Hadamard operations,
// semilinear set queries and P-recursive systems.

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "unitrat/analyze.hpp"

using namespace unitrat;
using nlohmann::json;

namespace {

constexpr int exit_ok = 0, exit_structural = 1, exit_input = 2, exit_capability = 3;

void print_series(const TruncatedSeries& s, const std::optional<Vec>& box, bool as_json) {
    auto in_box = [&](const Vec& n) {
        if (!box) return true;
        for (size_t i = 0; i < n.size() && i < box->size(); ++i)
            if (n[i] > (*box)[i]) return false;
        return true;
    };
    if (as_json) {
        json arr = json::array();
        for (const auto& [n, c] : s.coeffs())
            if (in_box(n)) arr.push_back({{"n", n}, {"c", rat_to_string(c)}});
        std::cout << arr.dump(2) << "\n";
        return;
    }
    if (s.dim() == 1) {
        std::cout << "n : coefficient\n";
        for (const auto& [n, c] : s.coeffs())
            if (in_box(n)) std::cout << n[0] << " : " << rat_to_string(c) << "\n";
        return;
    }
    if (s.dim() == 2) {
        long max1 = 0, max2 = 0;
        size_t width = 1;
        for (const auto& [n, c] : s.coeffs()) {
            if (!in_box(n)) continue;
            max1 = std::max(max1, n[0]);
            max2 = std::max(max2, n[1]);
            width = std::max(width, rat_to_string(c).size());
        }
        std::cout << "rows n1 = 0.." << max1 << ", columns n2 = 0.." << max2 << "\n";
        for (long i = 0; i <= max1; ++i) {
            for (long j = 0; j <= max2; ++j) {
                Vec n{i, j};
                const bool shown = in_box(n) && i + j <= s.bound();
                std::cout << std::setw(static_cast<int>(width) + 1)
                          << (shown ? rat_to_string(s.coeff(n)) : ".");
            }
            std::cout << "\n";
        }
        return;
    }
    for (const auto& [n, c] : s.coeffs())
        if (in_box(n)) std::cout << vec_to_string(n) << " : " << rat_to_string(c) << "\n";
}

Vec parse_point(const std::string& text) {
    Vec v;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) v.push_back(std::stol(item));
    if (v.empty()) throw std::invalid_argument("empty point");
    return v;
}

json set_list_json(const SemilinearSet& s) {
    json arr = json::array();
    for (const SimpleLinearSet& c : s.components) arr.push_back(set_to_json(c));
    return {{"components", arr}, {"disjoint", s.disjoint}};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact analysis of rational power series with unit-product denominators"};
    app.require_subcommand(1);

    long bound = 12;
    std::string group_text;
    bool as_json = false;
    bool exact_verify = true;
    app.add_option("--bound", bound, "truncation bound (total degree)")->capture_default_str();
    app.add_option("--group", group_text, "group generators g1,g2,...");
    app.add_flag("--json", as_json, "JSON output");
    app.add_flag("--exact-verify,!--no-exact-verify", exact_verify,
                 "run exactness attestations (default on)");

    std::string expr_text, expr2_text, set_text, point_text, system_path;
    std::vector<std::string> set_texts;
    std::string box_text;
    long r_opt = -1, zero_scan = -1, vanish_from = 0;
    std::string strips_text;

    CLI::App* expand = app.add_subcommand("expand", "truncated power-series expansion");
    expand->add_option("expr", expr_text, "rational expression")->required();
    expand->add_option("--box", box_text, "per-axis caps b1,b2,...");

    CLI::App* decomp = app.add_subcommand("decompose", "Leinartas decomposition");
    decomp->add_option("expr", expr_text)->required();

    CLI::App* coeff = app.add_subcommand("coeff-form", "piecewise coefficient formulas");
    coeff->add_option("expr", expr_text)->required();

    CLI::App* certify = app.add_subcommand("certify", "full structure certification");
    certify->add_option("expr", expr_text)->required();
    certify->add_option("--r", r_opt, "summand bound r to check against");
    certify->add_option("--zero-scan", zero_scan, "report zero coefficients up to this degree");

    CLI::App* hadamard = app.add_subcommand("hadamard", "coefficientwise operations");
    hadamard->require_subcommand(1);
    CLI::App* hprod = hadamard->add_subcommand("product", "Hadamard product");
    hprod->add_option("expr1", expr_text)->required();
    hprod->add_option("expr2", expr2_text)->required();
    CLI::App* hsub = hadamard->add_subcommand("subinverse", "Hadamard sub-inverse");
    hsub->add_option("expr", expr_text)->required();

    CLI::App* restrict_cmd = app.add_subcommand("restrict", "restrict a skew-geometric series");
    restrict_cmd->add_option("expr", expr_text)->required();
    restrict_cmd->add_option("--set", set_text, "simple linear set literal")->required();

    CLI::App* sets = app.add_subcommand("sets", "semilinear set queries");
    sets->require_subcommand(1);
    CLI::App* member = sets->add_subcommand("member", "membership coordinates");
    member->add_option("--set", set_text)->required();
    member->add_option("--point", point_text)->required();
    CLI::App* inter = sets->add_subcommand("intersect", "exact intersection");
    inter->add_option("--set", set_texts, "set literal (twice)")->required()->expected(2);
    CLI::App* overlap = sets->add_subcommand("overlap", "maximum overlap count");
    overlap->add_option("--set", set_texts, "set literals")->required();

    CLI::App* prec = app.add_subcommand("prec", "P-recursive systems");
    prec->require_subcommand(1);
    CLI::App* peval = prec->add_subcommand("eval", "evaluate from initial data");
    peval->add_option("--system", system_path, "system JSON file")->required();
    peval->add_option("--point", point_text)->required();
    CLI::App* pcheck = prec->add_subcommand("check", "check a series against a system");
    pcheck->add_option("--system", system_path)->required();
    pcheck->add_option("--expr", expr_text)->required();
    CLI::App* pvanish = prec->add_subcommand("vanish", "vanishing propagation");
    pvanish->add_option("--system", system_path)->required();
    pvanish->add_option("--expr", expr_text)->required();
    pvanish->add_option("--from", vanish_from, "zero-freeness threshold c")->required();
    pvanish->add_option("--strips", strips_text, "strip origins l1,...,ld")->required();

    CLI::App* ocmp = app.add_subcommand("oracle-compare", "first coefficient mismatch");
    ocmp->add_option("expr1", expr_text)->required();
    ocmp->add_option("expr2", expr2_text)->required();

    // global flags remain usable after a subcommand name
    for (CLI::App* sc : app.get_subcommands({})) {
        sc->fallthrough();
        for (CLI::App* nested : sc->get_subcommands({})) nested->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    // "-" reads the expression from stdin, "@path" from a file
    auto resolve = [](std::string& text) {
        if (text == "-") {
            std::ostringstream buf;
            buf << std::cin.rdbuf();
            text = buf.str();
        } else if (!text.empty() && text.front() == '@') {
            std::ifstream in(text.substr(1));
            if (!in) throw std::invalid_argument("cannot open " + text.substr(1));
            std::ostringstream buf;
            buf << in.rdbuf();
            text = buf.str();
        }
    };

    try {
        resolve(expr_text);
        resolve(expr2_text);
        std::optional<GroupSpec> group;
        if (!group_text.empty()) group = parse_group(group_text);

        if (expand->parsed()) {
            RationalExpr e = parse(expr_text);
            std::optional<Vec> box;
            if (!box_text.empty()) box = parse_point(box_text);
            print_series(expand_rational(e.terms, bound), box, as_json);
            return exit_ok;
        }

        if (decomp->parsed()) {
            RationalExpr e = parse(expr_text);
            UnitProductRational r = normalize_sum(e.terms);
            std::vector<DecompTerm> terms = leinartas_decompose(r);
            if (as_json) {
                json arr = json::array();
                for (const DecompTerm& t : terms) arr.push_back(upr_to_json(t.fraction));
                std::cout << json{{"terms", arr}, {"exact_identity", true}}.dump(2) << "\n";
            } else {
                std::cout << terms.size() << " independent terms (exact identity verified):\n";
                for (const DecompTerm& t : terms)
                    std::cout << "  " << t.fraction.to_string() << "\n";
            }
            return exit_ok;
        }

        if (coeff->parsed() || certify->parsed()) {
            AnalyzeOptions opts;
            opts.bound = bound;
            opts.exact_verify = exact_verify;
            if (r_opt >= 0) opts.r = r_opt;
            if (zero_scan >= 0) opts.zero_scan = zero_scan;
            if (certify->parsed() && !group)
                throw std::invalid_argument("certify requires --group");
            AnalyzeReport rep = analyze(parse(expr_text), group, opts);
            if (as_json) {
                std::cout << rep.to_json().dump(2) << "\n";
            } else {
                for (const StageNote& s : rep.stages)
                    std::cout << (s.ok ? "[ok]   " : "[note] ") << s.stage
                              << (s.note.empty() ? "" : ": " + s.note) << "\n";
                for (const std::string& n : rep.notes) std::cout << "note: " << n << "\n";
                if (rep.coeff_form) {
                    std::cout << rep.coeff_form->pieces.size() << " partition pieces\n";
                    std::cout << pieces_to_json(*rep.coeff_form).dump(2) << "\n";
                }
                std::cout << "verdict: " << rep.verdict << "\n";
                if (!rep.zero_coefficients.empty()) {
                    std::cout << "zero coefficients:";
                    for (const Vec& n : rep.zero_coefficients)
                        std::cout << " " << vec_to_string(n);
                    std::cout << "\n";
                }
            }
            return rep.exit_code;
        }

        if (hprod->parsed()) {
            RationalExpr e1 = parse(expr_text), e2 = parse(expr2_text);
            if (e1.dim != e2.dim) throw std::invalid_argument("dimension mismatch");
            print_series(hadamard_product(expand_rational(e1.terms, bound),
                                          expand_rational(e2.terms, bound)),
                         std::nullopt, as_json);
            return exit_ok;
        }

        if (hsub->parsed()) {
            RationalExpr e = parse(expr_text);
            // exact route through the pipeline when it reaches an unambiguous sum
            AnalyzeOptions opts;
            opts.bound = bound;
            AnalyzeReport rep = analyze(e, std::nullopt, opts);
            if (rep.skew && classify_ambiguity(*rep.skew).status == Ambiguity::unambiguous) {
                SkewGeomSum inv = subinverse_unambiguous(*rep.skew);
                if (as_json) {
                    std::cout << skew_to_json(inv).dump(2) << "\n";
                } else {
                    std::cout << "exact sub-inverse (unambiguous skew-geometric sum):\n";
                    for (const SkewGeometric& s : inv.summands)
                        std::cout << "  " << s.to_rational().to_string() << "\n";
                }
                return exit_ok;
            }
            std::cout << "no unambiguous skew-geometric form reached; truncated sub-inverse:\n";
            print_series(hadamard_subinverse(expand_rational(e.terms, bound)), std::nullopt,
                         as_json);
            return exit_ok;
        }

        if (restrict_cmd->parsed()) {
            RationalExpr e = parse(expr_text);
            if (e.terms.size() != 1 || e.terms[0].numerator().terms().size() != 1)
                throw std::invalid_argument(
                    "restrict expects a single skew-geometric fraction (monomial numerator)");
            const UnitProductRational& f = e.terms[0];
            const auto& [u0, c0] = *f.numerator().terms().begin();
            std::vector<std::pair<Rat, Vec>> factors;
            for (const Block& b : f.blocks())
                for (long i = 0; i < b.mult; ++i) factors.emplace_back(b.c, b.e);
            SkewGeometric g(c0, u0, std::move(factors));
            SimpleLinearSet sub = parse_simple_set(set_text);
            SkewGeometric r = restrict_to(g, sub);
            if (as_json) {
                SkewGeomSum one{{r}, Ambiguity::unambiguous};
                std::cout << skew_to_json(one).dump(2) << "\n";
            } else {
                std::cout << r.to_rational().to_string() << "\n";
            }
            return exit_ok;
        }

        if (member->parsed()) {
            SimpleLinearSet s = parse_simple_set(set_text);
            auto m = s.member_coords(parse_point(point_text));
            if (as_json) {
                json j;
                j["member"] = m.has_value();
                if (m) j["coords"] = *m;
                std::cout << j.dump(2) << "\n";
            } else if (m) {
                std::cout << "member, coordinates " << vec_to_string(*m) << "\n";
            } else {
                std::cout << "not a member\n";
            }
            return exit_ok;
        }

        if (inter->parsed()) {
            SemilinearSet s = intersect_simple(parse_simple_set(set_texts[0]),
                                               parse_simple_set(set_texts[1]));
            if (as_json) {
                std::cout << set_list_json(s).dump(2) << "\n";
            } else if (s.empty()) {
                std::cout << "empty\n";
            } else {
                for (const SimpleLinearSet& c : s.components)
                    std::cout << c.to_string() << "\n";
            }
            return exit_ok;
        }

        if (overlap->parsed()) {
            std::vector<SimpleLinearSet> list;
            for (const std::string& t : set_texts) list.push_back(parse_simple_set(t));
            OverlapResult r = max_overlap(list);
            if (as_json) {
                std::cout << json{{"r", r.r}, {"witness", r.witness}}.dump(2) << "\n";
            } else {
                std::cout << "max overlap r = " << r.r << ", witness subset {";
                for (size_t i = 0; i < r.witness.size(); ++i)
                    std::cout << (i ? "," : "") << r.witness[i];
                std::cout << "}\n";
            }
            return exit_ok;
        }

        if (peval->parsed() || pcheck->parsed() || pvanish->parsed()) {
            std::ifstream in(system_path);
            if (!in) throw std::invalid_argument("cannot open " + system_path);
            json j = json::parse(in);
            PRecursiveSystem sys = precursive_from_json(j);
            if (peval->parsed()) {
                Rat v = evaluate(sys, parse_point(point_text));
                if (as_json)
                    std::cout << json{{"value", rat_to_string(v)}}.dump(2) << "\n";
                else
                    std::cout << rat_to_string(v) << "\n";
                return exit_ok;
            }
            RationalExpr e = parse(expr_text);
            if (e.dim != sys.dim) throw std::invalid_argument("dimension mismatch with system");
            TruncatedSeries f = expand_rational(e.terms, bound);
            if (pcheck->parsed()) {
                auto v = check_solution(sys, f);
                if (as_json) {
                    json out{{"satisfied", !v.has_value()}};
                    if (v) out["violation"] = {{"axis", v->axis + 1}, {"n", v->n}};
                    std::cout << out.dump(2) << "\n";
                } else if (v) {
                    std::cout << "violated on axis " << (v->axis + 1) << " at "
                              << vec_to_string(v->n) << "\n";
                } else {
                    std::cout << "all recursion instances satisfied to degree " << f.bound()
                              << "\n";
                }
                return v ? exit_structural : exit_ok;
            }
            Vec strips = parse_point(strips_text);
            VanishVerdict v = vanishing_propagate(
                sys, [&](const Vec& n) { return f.coeff(n); }, vanish_from, strips, bound);
            std::string kind = v.kind == VanishVerdict::confirmed ? "confirmed"
                               : v.kind == VanishVerdict::hypothesis_failed
                                   ? "hypothesis_failed"
                                   : "crosscheck_failed";
            if (as_json) {
                json out{{"verdict", kind}, {"region_lower", v.region_lower}};
                if (v.witness) out["witness"] = *v.witness;
                std::cout << out.dump(2) << "\n";
            } else {
                std::cout << kind;
                if (v.witness) std::cout << " at " << vec_to_string(*v.witness);
                std::cout << "\n";
            }
            return v.kind == VanishVerdict::confirmed ? exit_ok : exit_structural;
        }

        if (ocmp->parsed()) {
            RationalExpr e1 = parse(expr_text), e2 = parse(expr2_text);
            if (e1.dim != e2.dim) throw std::invalid_argument("dimension mismatch");
            auto m = compare(expand_rational(e1.terms, bound), expand_rational(e2.terms, bound));
            if (as_json) {
                json out{{"equal_to_bound", !m.has_value()}};
                if (m)
                    out["mismatch"] = {{"n", m->n},
                                       {"lhs", rat_to_string(m->c1)},
                                       {"rhs", rat_to_string(m->c2)}};
                std::cout << out.dump(2) << "\n";
            } else if (m) {
                std::cout << "first mismatch at " << vec_to_string(m->n) << ": "
                          << rat_to_string(m->c1) << " vs " << rat_to_string(m->c2) << "\n";
            } else {
                std::cout << "equal to degree " << bound << "\n";
            }
            return m ? exit_structural : exit_ok;
        }
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return exit_input;
    } catch (const capability_error& e) {
        std::cerr << "capability limit: " << e.what() << "\n";
        return exit_capability;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return exit_input;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return exit_capability;
    }
    return exit_input;
}
