#include "vineprune/cut_rules.hpp"

#include <array>
#include <utility>

#include "vineprune/errors.hpp"

namespace vineprune {

const char* to_string(CutType cut) {
    switch (cut) {
        case CutType::CleanCut: return "clean_cut";
        case CutType::BaseBudCut: return "base_bud_cut";
        case CutType::SpurCut: return "spur_cut";
        case CutType::ReplacementCut: return "replacement_cut";
    }
    return "?";
}

namespace {

constexpr std::array<std::pair<std::string_view, CutCondition>, 15> kConditionNames{{
    {"always", CutCondition::Always},
    {"is_new", CutCondition::IsNew},
    {"is_replacement", CutCondition::IsReplacement},
    {"has_basal_cane", CutCondition::HasBasalCane},
    {"too_close", CutCondition::TooClose},
    {"ventral", CutCondition::Ventral},
    {"dorsal", CutCondition::Dorsal},
    {"intermediate", CutCondition::Intermediate},
    {"vertical", CutCondition::Vertical},
    {"not_vertical", CutCondition::NotVertical},
    {"growth_unknown", CutCondition::GrowthUnknown},
    {"vigor_in_range", CutCondition::VigorInRange},
    {"vigor_out_of_range", CutCondition::VigorOutOfRange},
    {"vigor_unknown", CutCondition::VigorUnknown},
    {"no_canes", CutCondition::NoCanes},
}};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

CutCondition lookup_condition(std::string_view name, std::string_view rule) {
    for (const auto& [n, c] : kConditionNames)
        if (n == name) return c;
    throw ConfigError("unknown cut-rule condition '" + std::string(name) + "' in rule '" +
                      std::string(rule) + "'");
}

std::optional<CutType> lookup_outcome(std::string_view name, std::string_view rule) {
    if (name == "skip") return std::nullopt;
    if (name == "clean_cut") return CutType::CleanCut;
    if (name == "base_bud_cut") return CutType::BaseBudCut;
    if (name == "spur_cut") return CutType::SpurCut;
    if (name == "replacement_cut") return CutType::ReplacementCut;
    throw ConfigError("unknown cut-rule outcome '" + std::string(name) + "' in rule '" +
                      std::string(rule) + "'");
}

} // namespace

CutRule parse_cut_rule(std::string_view text) {
    const size_t arrow = text.find("=>");
    if (arrow == std::string_view::npos)
        throw ConfigError("cut rule is missing '=>': '" + std::string(text) + "'");

    CutRule rule;
    rule.source = std::string(trim(text));
    rule.outcome = lookup_outcome(trim(text.substr(arrow + 2)), text);

    std::string_view lhs = text.substr(0, arrow);
    while (true) {
        const size_t amp = lhs.find('&');
        std::string_view token = trim(amp == std::string_view::npos ? lhs : lhs.substr(0, amp));
        if (token.empty())
            throw ConfigError("empty condition in cut rule '" + std::string(text) + "'");
        CutTerm term;
        if (token.front() == '!') {
            term.negated = true;
            token = trim(token.substr(1));
        }
        term.condition = lookup_condition(token, text);
        rule.terms.push_back(term);
        if (amp == std::string_view::npos) break;
        lhs = lhs.substr(amp + 1);
    }
    return rule;
}

std::vector<CutRule> default_cut_rules() {
    static const char* kRules[] = {
        "is_new & too_close => clean_cut",
        "is_new & ventral => base_bud_cut",
        "is_replacement & has_basal_cane => replacement_cut",
        "has_basal_cane & vertical & vigor_in_range => spur_cut",
        "has_basal_cane & not_vertical => base_bud_cut",
        "has_basal_cane & vigor_out_of_range => base_bud_cut",
        "no_canes => skip",
        "always => spur_cut",
    };
    std::vector<CutRule> rules;
    for (const char* r : kRules) rules.push_back(parse_cut_rule(r));
    return rules;
}

} // namespace vineprune
