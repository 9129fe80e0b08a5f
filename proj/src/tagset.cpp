#include "taglex/tagset.hpp"

#include "taglex/error.hpp"

#include <algorithm>
#include <array>

namespace taglex {

namespace {

constexpr std::array<std::string_view, 11> kFunctionCodes = {
    "CON", "DET", "P", "PP", "PRO", "PS", "IF", "INT", "MQUA", "QUA", "SPEC"};

struct Gloss {
    std::string_view code;
    std::string_view description;
};

// Report order; AR is appended last.
constexpr std::array<Gloss, 38> kBijankhan = {{
    {"ADJ", "adjective (unspecified)"},
    {"ADJ_CMPR", "comparative adjective"},
    {"ADJ_INO", "participle used as adjective"},
    {"ADJ_ORD", "ordinal adjective"},
    {"ADJ_SIM", "simple adjective"},
    {"ADJ_SUP", "superlative adjective"},
    {"ADV", "adverb (unspecified)"},
    {"ADV_EXM", "example adverb"},
    {"ADV_I", "interrogative adverb"},
    {"ADV_NEGG", "negation adverb"},
    {"ADV_NI", "non-interrogative adverb"},
    {"ADV_TIME", "adverb of time"},
    {"CON", "conjunction"},
    {"DEFAULT", "default (untagged)"},
    {"DELM", "delimiter"},
    {"DET", "determiner"},
    {"IF", "conditional"},
    {"INT", "interjection"},
    {"MORP", "morpheme"},
    {"MQUA", "quantifier modifier"},
    {"N_PL", "plural noun"},
    {"N_SING", "singular noun"},
    {"NP", "noun phrase"},
    {"OH", "exclamation"},
    {"OHH", "exclamation noun"},
    {"P", "preposition"},
    {"PP", "prepositional phrase"},
    {"PRO", "pronoun"},
    {"PS", "pseudo-sentence"},
    {"QUA", "quantifier"},
    {"SPEC", "specifier"},
    {"V_AUX", "auxiliary verb"},
    {"V_IMP", "imperative verb"},
    {"V_PA", "past tense verb"},
    {"V_PRE", "predicative verb"},
    {"V_PRS", "present tense verb"},
    {"V_SUB", "subjunctive verb"},
    {"AR", "Arabic-script loanword"},
}};

}  // namespace

std::string_view to_string(Category c) {
    switch (c) {
        case Category::Noun: return "noun";
        case Category::Verb: return "verb";
        case Category::Adjective: return "adjective";
        case Category::Adverb: return "adverb";
        case Category::Function: return "function";
        case Category::Delimiter: return "delimiter";
        case Category::Other: return "other";
    }
    return "other";
}

std::optional<Category> parse_category(std::string_view s) {
    for (auto c : {Category::Noun, Category::Verb, Category::Adjective, Category::Adverb,
                   Category::Function, Category::Delimiter, Category::Other}) {
        if (to_string(c) == s) return c;
    }
    return std::nullopt;
}

Category category_for_code(std::string_view code) {
    if (code.starts_with("N_")) return Category::Noun;
    if (code.starts_with("V_")) return Category::Verb;
    if (code.starts_with("ADJ")) return Category::Adjective;
    if (code.starts_with("ADV")) return Category::Adverb;
    if (code == "DELM") return Category::Delimiter;
    if (std::find(kFunctionCodes.begin(), kFunctionCodes.end(), code) != kFunctionCodes.end())
        return Category::Function;
    return Category::Other;
}

bool is_valid_tag_code(std::string_view code) {
    if (code.empty() || code.front() < 'A' || code.front() > 'Z') return false;
    return std::all_of(code.begin(), code.end(),
                       [](char c) { return (c >= 'A' && c <= 'Z') || c == '_'; });
}

TagSet::TagSet(std::string name, std::vector<TagDef> tags)
    : name_(std::move(name)), tags_(std::move(tags)) {
    for (std::size_t i = 0; i < tags_.size(); ++i) {
        const auto& code = tags_[i].code;
        if (!is_valid_tag_code(code)) throw InvalidArgument("invalid tag code '" + code + "'");
        if (!index_.emplace(code, i).second)
            throw InvalidArgument("duplicate tag code '" + code + "'");
    }
}

const TagDef* TagSet::lookup(std::string_view code) const {
    auto it = index_.find(std::string(code));
    return it == index_.end() ? nullptr : &tags_[it->second];
}

nlohmann::json TagSet::to_json() const {
    nlohmann::json tags = nlohmann::json::array();
    for (const auto& t : tags_) {
        tags.push_back({{"code", t.code},
                        {"description", t.description},
                        {"category", std::string(to_string(t.category))}});
    }
    return {{"name", name_}, {"tags", std::move(tags)}};
}

TagSet TagSet::from_json(const nlohmann::json& doc) {
    try {
        std::vector<TagDef> tags;
        for (const auto& t : doc.at("tags")) {
            TagDef def;
            def.code = t.at("code").get<std::string>();
            def.description = t.value("description", "");
            if (t.contains("category")) {
                auto cat = parse_category(t.at("category").get<std::string>());
                if (!cat) throw InvalidArgument("unknown category for tag " + def.code);
                def.category = *cat;
            } else {
                def.category = category_for_code(def.code);
            }
            tags.push_back(std::move(def));
        }
        return TagSet(doc.at("name").get<std::string>(), std::move(tags));
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed tagset document: ") + e.what());
    }
}

const TagSet& default_tagset() {
    static const TagSet tagset = [] {
        std::vector<TagDef> tags;
        tags.reserve(kBijankhan.size());
        for (const auto& g : kBijankhan) {
            tags.push_back({std::string(g.code), std::string(g.description),
                            category_for_code(g.code)});
        }
        return TagSet("bijankhan-v1", std::move(tags));
    }();
    return tagset;
}

bool tag_code_less(std::string_view a, std::string_view b) {
    auto key = [](char c) { return c == '_' ? 0 : static_cast<unsigned char>(c); };
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [&](char x, char y) { return key(x) < key(y); });
}

}  // namespace taglex
