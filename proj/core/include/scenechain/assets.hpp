#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scenechain/scene.hpp"

namespace scenechain {

struct AssetEntry {
  std::string asset_id;
  std::string category;
  Vec3 canonical_size;
  Vec3 min_size;
  Vec3 max_size;

  friend bool operator==(const AssetEntry&, const AssetEntry&) = default;
};

inline constexpr std::string_view kGenericCategory = "generic";

// Synthetic furniture catalog with per-category size priors, keyword aliases
// and per-room mandatory-object tables. Immutable after construction.
class AssetCatalog {
 public:
  static AssetCatalog builtin();
  static AssetCatalog from_json(const Json& j);
  static AssetCatalog load(const std::filesystem::path& path);

  Json to_json() const;

  const std::vector<AssetEntry>& entries() const { return entries_; }
  const std::map<std::string, std::vector<std::size_t>>& category_index() const { return category_index_; }
  const std::map<std::string, std::vector<std::string>>& mandatory_by_room() const { return mandatory_by_room_; }

  bool has_category(std::string_view category) const;
  std::vector<const AssetEntry*> entries_for(std::string_view category) const;

  // Longest whole-word keyword (category name or alias) found in the text.
  std::optional<std::string> match_category(std::string_view description) const;
  // match_category with the "generic" fallback.
  std::string category_of(std::string_view description) const;
  // All keyword hits in reading order, longest-first without overlaps.
  std::vector<std::string> categories_mentioned(std::string_view text) const;

  // Canonical room type named by the text (room name or alias), if any.
  std::optional<std::string> match_room_type(std::string_view text) const;
  std::optional<std::string> essential_for(std::string_view room_type) const;
  const std::vector<std::string>* common_for(std::string_view room_type) const;

  // Componentwise min of min_size / max of max_size over the category.
  std::optional<std::pair<Vec3, Vec3>> category_range(std::string_view category) const;

 private:
  void rebuild_index();

  std::vector<AssetEntry> entries_;
  std::map<std::string, std::vector<std::size_t>> category_index_;
  std::map<std::string, std::string> aliases_;  // alias -> category
  std::map<std::string, std::vector<std::string>> mandatory_by_room_;
  std::map<std::string, std::string> essential_by_room_;
  std::map<std::string, std::vector<std::string>> common_by_room_;
  std::map<std::string, std::string> room_aliases_;
  std::vector<std::pair<std::string, std::string>> keywords_;  // (keyword, category)
  std::vector<std::pair<std::string, std::string>> room_keywords_;
};

// Sum over axes of |ln(canonical_d / target_d)|; symmetric in its arguments.
double aspect_alignment_error(const Vec3& canonical, const Vec3& target);

// Retrieval: category by keyword, then the entry minimizing the alignment
// error (ties by asset_id). Throws UnknownCategoryNoFallback only when the
// fallback is disabled.
const AssetEntry& retrieve(const AssetCatalog& catalog, std::string_view description, const Vec3& target_size,
                           bool allow_fallback = true);

// true iff every axis lies in [0.5 * min_d, 2.0 * max_d]; unknown categories
// count as valid.
bool size_valid(const AssetCatalog& catalog, std::string_view category, const Vec3& size);

struct MandatoryObjects {
  std::string room_type;
  std::vector<std::string> items;  // categories, duplicates for multiple instances
  std::optional<std::string> essential;
};

// Throws UnknownRoomType when the room type is neither known nor inferable
// from the instruction.
MandatoryObjects mandatory_objects(const AssetCatalog& catalog, std::string_view room_type,
                                   std::string_view instruction);

std::string normalize_text(std::string_view text);

}  // namespace scenechain
