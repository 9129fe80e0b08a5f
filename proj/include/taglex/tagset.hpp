#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace taglex {

enum class Category { Noun, Verb, Adjective, Adverb, Function, Delimiter, Other };

std::string_view to_string(Category c);
std::optional<Category> parse_category(std::string_view s);

/// Coarse class of a tag code: N_ -> noun, V_ -> verb, ADJ -> adjective,
/// ADV -> adverb, DELM -> delimiter, closed-class codes -> function,
/// anything else -> other.
Category category_for_code(std::string_view code);

/// `[A-Z][A-Z_]*`
bool is_valid_tag_code(std::string_view code);

struct TagDef {
    std::string code;
    std::string description;
    Category category = Category::Other;

    bool operator==(const TagDef&) const = default;
};

inline constexpr std::string_view kArTag = "AR";

class TagSet {
public:
    TagSet() = default;
    /// Throws InvalidArgument on a malformed or duplicate code.
    TagSet(std::string name, std::vector<TagDef> tags);

    const std::string& name() const noexcept { return name_; }
    const std::vector<TagDef>& tags() const noexcept { return tags_; }
    std::size_t size() const noexcept { return tags_.size(); }

    const TagDef* lookup(std::string_view code) const;
    bool contains(std::string_view code) const { return lookup(code) != nullptr; }

    nlohmann::json to_json() const;
    static TagSet from_json(const nlohmann::json& doc);

    bool operator==(const TagSet& other) const {
        return name_ == other.name_ && tags_ == other.tags_;
    }

private:
    std::string name_;
    std::vector<TagDef> tags_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// The Bijankhan catalog: the 37 lexicon tags in report order, then AR.
const TagSet& default_tagset();

/// Report ordering for tag codes: byte order except that '_' sorts before
/// letters, so N_PL < N_SING < NP.
bool tag_code_less(std::string_view a, std::string_view b);

}  // namespace taglex
