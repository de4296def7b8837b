#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vineprune {

// The four cut families applied to a pruning region.
enum class CutType {
    CleanCut,        // remove the whole region
    BaseBudCut,      // keep only the base buds of the basal cane
    SpurCut,         // keep the first N nodes of the basal cane
    ReplacementCut,  // spur cut plus cutting the arm above the basal cane
};

const char* to_string(CutType cut);

// Predicates a rule may test against a region assessment. Each maps to a
// boolean fact; rules are conjunctions of (possibly negated) facts.
enum class CutCondition {
    Always,
    IsNew,
    IsReplacement,
    HasBasalCane,
    TooClose,
    Ventral,
    Dorsal,
    Intermediate,
    Vertical,
    NotVertical,
    GrowthUnknown,
    VigorInRange,
    VigorOutOfRange,
    VigorUnknown,
    NoCanes,
};

struct CutTerm {
    CutCondition condition;
    bool negated = false;
};

// One row of the decision table. First matching rule wins; a rule with
// no outcome means "skip this region".
struct CutRule {
    std::vector<CutTerm> terms;
    std::optional<CutType> outcome;
    std::string source;  // the text the rule was parsed from
};

// Parse "cond & !cond2 => outcome" where outcome is one of clean_cut,
// base_bud_cut, spur_cut, replacement_cut, skip. Throws ConfigError on
// unknown tokens or malformed syntax.
CutRule parse_cut_rule(std::string_view text);

// The built-in decision table:
//   1. crowded new regions are removed outright
//   2. new ventral shoots keep base buds only
//   3. regions rooted on an arm get a replacement cut
//   4. a vertical basal cane of acceptable vigor earns a spur cut
//   5. a basal cane that is not vertical, or whose vigor is out of
//      range, is cut back to its base buds
//   6. regions without canes have nothing to cut
//   7. anything left defaults to a spur cut, never over-pruning
std::vector<CutRule> default_cut_rules();

} // namespace vineprune
