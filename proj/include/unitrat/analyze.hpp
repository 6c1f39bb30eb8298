#ifndef UNITRAT_ANALYZE_HPP
#define UNITRAT_ANALYZE_HPP

#include <json.hpp>

#include "unitrat/parser.hpp"
#include "unitrat/precursive.hpp"

namespace unitrat {

struct AnalyzeOptions {
    long bound = 12;           // oracle bound for the final attestation
    std::optional<long> r;     // target summand bound, if supplied
    bool exact_verify = true;
    std::optional<long> zero_scan; // scan coefficients up to this total degree
};

struct StageNote {
    std::string stage;
    bool ok;
    std::string note;
};

/// Full pipeline result. exit_code: 0 certified, 1 structural failure with
/// witness, 2 input error, 3 capability limit.
struct AnalyzeReport {
    int exit_code = 0;
    std::string verdict;
    std::vector<StageNote> stages;
    std::vector<std::string> notes;
    UnitProductRational normalized{1};
    std::vector<DecompTerm> decomposition;
    std::optional<PiecewisePolyExp> coeff_form; // partition form when reached
    std::optional<SkewGeomSum> skew;
    std::optional<StructureVerdict> structure;
    std::optional<GroupVerdict> group;
    std::vector<Vec> zero_coefficients;

    nlohmann::json to_json() const;
};

/// normalize_sum -> gcd_normalize -> leinartas_decompose -> term_to_pieces ->
/// canonicalize -> partition upgrade -> classify_structure -> skew-geometric
/// conversion -> torsion_normalize -> certify_group, with exactness
/// attestations at every stage.
AnalyzeReport analyze(const RationalExpr& expr, const std::optional<GroupSpec>& group,
                      const AnalyzeOptions& opts = {});

GroupSpec parse_group(const std::string& text);

// JSON forms of the domain types (External Interfaces)
nlohmann::json series_to_json(const TruncatedSeries& s);
nlohmann::json upr_to_json(const UnitProductRational& r);
nlohmann::json set_to_json(const SimpleLinearSet& s);
SimpleLinearSet set_from_json(const nlohmann::json& j);
nlohmann::json pieces_to_json(const PiecewisePolyExp& p);
nlohmann::json skew_to_json(const SkewGeomSum& f);

nlohmann::json precursive_to_json(const PRecursiveSystem& sys);
PRecursiveSystem precursive_from_json(const nlohmann::json& j);

} // namespace unitrat

#endif
