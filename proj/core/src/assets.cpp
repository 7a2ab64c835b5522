#include "scenechain/assets.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "scenechain/error.hpp"

namespace scenechain {

namespace detail {
extern const std::string_view kBuiltinCatalogJson;
}

std::string normalize_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    const unsigned char u = static_cast<unsigned char>(c);
    if (c == '_' || c == '-') {
      out += ' ';
    } else {
      out += static_cast<char>(std::tolower(u));
    }
  }
  return out;
}

namespace {

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

// Whole-word occurrence of keyword at pos, allowing a plural "s"/"es" suffix.
// Returns the matched length or 0.
std::size_t word_match_at(const std::string& text, std::size_t pos, const std::string& keyword) {
  if (text.compare(pos, keyword.size(), keyword) != 0) return 0;
  if (pos > 0 && is_word_char(text[pos - 1])) return 0;
  std::size_t end = pos + keyword.size();
  auto boundary = [&](std::size_t e) { return e >= text.size() || !is_word_char(text[e]); };
  if (boundary(end)) return keyword.size();
  if (text.compare(end, 2, "es") == 0 && boundary(end + 2)) return keyword.size() + 2;
  if (text[end] == 's' && boundary(end + 1)) return keyword.size() + 1;
  return 0;
}

struct Hit {
  std::size_t pos;
  std::size_t len;
  std::size_t keyword_len;
  const std::string* value;
};

std::vector<Hit> find_hits(const std::string& text, const std::vector<std::pair<std::string, std::string>>& keywords) {
  std::vector<Hit> hits;
  for (const auto& [kw, value] : keywords) {
    if (kw.empty()) continue;
    for (std::size_t pos = text.find(kw); pos != std::string::npos; pos = text.find(kw, pos + 1)) {
      const std::size_t len = word_match_at(text, pos, kw);
      if (len > 0) hits.push_back({pos, len, kw.size(), &value});
    }
  }
  return hits;
}

std::optional<std::string> longest_hit(const std::string& text,
                                       const std::vector<std::pair<std::string, std::string>>& keywords) {
  const auto hits = find_hits(text, keywords);
  const Hit* best = nullptr;
  for (const auto& h : hits) {
    if (best == nullptr || h.keyword_len > best->keyword_len ||
        (h.keyword_len == best->keyword_len && h.pos < best->pos)) {
      best = &h;
    }
  }
  if (best == nullptr) return std::nullopt;
  return *best->value;
}

Vec3 vec3_field(const Json& j, const char* key) {
  const Json& a = j.at(key);
  if (!a.is_array() || a.size() != 3) throw Error(ErrorCode::InvalidConfig, std::string(key) + " must have 3 numbers");
  return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

}  // namespace

AssetCatalog AssetCatalog::builtin() {
  static const AssetCatalog catalog = from_json(Json::parse(detail::kBuiltinCatalogJson));
  return catalog;
}

AssetCatalog AssetCatalog::load(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return from_json(Json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, "catalog " + path.string() + ": " + e.what());
  }
}

AssetCatalog AssetCatalog::from_json(const Json& j) {
  AssetCatalog c;
  try {
    for (const auto& e : j.at("entries")) {
      AssetEntry entry{e.at("asset_id").get<std::string>(), normalize_text(e.at("category").get<std::string>()),
                       vec3_field(e, "canonical_size"), vec3_field(e, "min_size"), vec3_field(e, "max_size")};
      const auto ok = [](double lo, double mid, double hi) { return 0.0 < lo && lo <= mid && mid <= hi; };
      if (!ok(entry.min_size.x, entry.canonical_size.x, entry.max_size.x) ||
          !ok(entry.min_size.y, entry.canonical_size.y, entry.max_size.y) ||
          !ok(entry.min_size.z, entry.canonical_size.z, entry.max_size.z)) {
        throw Error(ErrorCode::InvalidConfig, "asset " + entry.asset_id + " violates 0 < min <= canonical <= max");
      }
      c.entries_.push_back(std::move(entry));
    }
    if (j.contains("aliases")) {
      for (const auto& [alias, cat] : j["aliases"].items()) c.aliases_[normalize_text(alias)] = normalize_text(cat.get<std::string>());
    }
    for (const auto& [room, items] : j.at("mandatory_by_room").items()) {
      std::vector<std::string> list;
      for (const auto& it : items) list.push_back(normalize_text(it.get<std::string>()));
      if (list.size() < 5 || list.size() > 15) {
        throw Error(ErrorCode::InvalidConfig, "mandatory list for " + room + " must have 5-15 items");
      }
      c.mandatory_by_room_[normalize_text(room)] = std::move(list);
    }
    if (j.contains("essential_by_room")) {
      for (const auto& [room, cat] : j["essential_by_room"].items()) {
        c.essential_by_room_[normalize_text(room)] = normalize_text(cat.get<std::string>());
      }
    }
    if (j.contains("common_by_room")) {
      for (const auto& [room, items] : j["common_by_room"].items()) {
        std::vector<std::string> list;
        for (const auto& it : items) list.push_back(normalize_text(it.get<std::string>()));
        c.common_by_room_[normalize_text(room)] = std::move(list);
      }
    }
    if (j.contains("room_aliases")) {
      for (const auto& [alias, room] : j["room_aliases"].items()) {
        c.room_aliases_[normalize_text(alias)] = normalize_text(room.get<std::string>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("catalog: ") + e.what());
  }
  c.rebuild_index();
  for (const auto& [alias, cat] : c.aliases_) {
    if (!c.has_category(cat)) throw Error(ErrorCode::InvalidConfig, "alias " + alias + " names unknown category " + cat);
  }
  for (const auto& [room, items] : c.mandatory_by_room_) {
    for (const auto& it : items) {
      if (!c.has_category(it)) throw Error(ErrorCode::InvalidConfig, "mandatory item " + it + " is not a category");
    }
  }
  return c;
}

void AssetCatalog::rebuild_index() {
  category_index_.clear();
  keywords_.clear();
  room_keywords_.clear();
  for (std::size_t i = 0; i < entries_.size(); ++i) category_index_[entries_[i].category].push_back(i);
  for (const auto& [cat, idx] : category_index_) {
    if (cat != kGenericCategory) keywords_.emplace_back(cat, cat);
  }
  for (const auto& [alias, cat] : aliases_) keywords_.emplace_back(alias, cat);
  for (const auto& [room, items] : mandatory_by_room_) room_keywords_.emplace_back(room, room);
  for (const auto& [alias, room] : room_aliases_) room_keywords_.emplace_back(alias, room);
}

Json AssetCatalog::to_json() const {
  Json j = Json::object();
  j["version"] = 1;
  Json entries = Json::array();
  for (const auto& e : entries_) {
    Json je = Json::object();
    je["asset_id"] = e.asset_id;
    je["category"] = e.category;
    je["canonical_size"] = vec3_to_json(e.canonical_size);
    je["min_size"] = vec3_to_json(e.min_size);
    je["max_size"] = vec3_to_json(e.max_size);
    entries.push_back(std::move(je));
  }
  j["entries"] = std::move(entries);
  Json aliases = Json::object();
  for (const auto& [a, c] : aliases_) aliases[a] = c;
  j["aliases"] = std::move(aliases);
  Json mandatory = Json::object();
  for (const auto& [r, items] : mandatory_by_room_) mandatory[r] = items;
  j["mandatory_by_room"] = std::move(mandatory);
  Json essential = Json::object();
  for (const auto& [r, c] : essential_by_room_) essential[r] = c;
  j["essential_by_room"] = std::move(essential);
  Json common = Json::object();
  for (const auto& [r, items] : common_by_room_) common[r] = items;
  j["common_by_room"] = std::move(common);
  Json rooms = Json::object();
  for (const auto& [a, r] : room_aliases_) rooms[a] = r;
  j["room_aliases"] = std::move(rooms);
  return j;
}

bool AssetCatalog::has_category(std::string_view category) const {
  return category_index_.find(std::string(category)) != category_index_.end();
}

std::vector<const AssetEntry*> AssetCatalog::entries_for(std::string_view category) const {
  std::vector<const AssetEntry*> out;
  auto it = category_index_.find(std::string(category));
  if (it == category_index_.end()) return out;
  for (std::size_t i : it->second) out.push_back(&entries_[i]);
  return out;
}

std::optional<std::string> AssetCatalog::match_category(std::string_view description) const {
  return longest_hit(normalize_text(description), keywords_);
}

std::string AssetCatalog::category_of(std::string_view description) const {
  auto c = match_category(description);
  return c ? *c : std::string(kGenericCategory);
}

std::vector<std::string> AssetCatalog::categories_mentioned(std::string_view text) const {
  const std::string norm = normalize_text(text);
  auto hits = find_hits(norm, keywords_);
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    if (a.keyword_len != b.keyword_len) return a.keyword_len > b.keyword_len;
    return a.pos < b.pos;
  });
  std::vector<bool> taken(norm.size(), false);
  std::vector<Hit> kept;
  for (const auto& h : hits) {
    bool free = true;
    for (std::size_t i = h.pos; i < h.pos + h.len; ++i) free = free && !taken[i];
    if (!free) continue;
    for (std::size_t i = h.pos; i < h.pos + h.len; ++i) taken[i] = true;
    kept.push_back(h);
  }
  std::sort(kept.begin(), kept.end(), [](const Hit& a, const Hit& b) { return a.pos < b.pos; });
  std::vector<std::string> out;
  for (const auto& h : kept) out.push_back(*h.value);
  return out;
}

std::optional<std::string> AssetCatalog::match_room_type(std::string_view text) const {
  return longest_hit(normalize_text(text), room_keywords_);
}

std::optional<std::string> AssetCatalog::essential_for(std::string_view room_type) const {
  auto it = essential_by_room_.find(std::string(room_type));
  if (it == essential_by_room_.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::string>* AssetCatalog::common_for(std::string_view room_type) const {
  auto it = common_by_room_.find(std::string(room_type));
  return it == common_by_room_.end() ? nullptr : &it->second;
}

std::optional<std::pair<Vec3, Vec3>> AssetCatalog::category_range(std::string_view category) const {
  const auto list = entries_for(category);
  if (list.empty()) return std::nullopt;
  Vec3 lo = list.front()->min_size;
  Vec3 hi = list.front()->max_size;
  for (const auto* e : list) {
    lo = {std::min(lo.x, e->min_size.x), std::min(lo.y, e->min_size.y), std::min(lo.z, e->min_size.z)};
    hi = {std::max(hi.x, e->max_size.x), std::max(hi.y, e->max_size.y), std::max(hi.z, e->max_size.z)};
  }
  return std::make_pair(lo, hi);
}

double aspect_alignment_error(const Vec3& canonical, const Vec3& target) {
  return std::fabs(std::log(canonical.x) - std::log(target.x)) + std::fabs(std::log(canonical.y) - std::log(target.y)) +
         std::fabs(std::log(canonical.z) - std::log(target.z));
}

const AssetEntry& retrieve(const AssetCatalog& catalog, std::string_view description, const Vec3& target_size,
                           bool allow_fallback) {
  auto category = catalog.match_category(description);
  if (!category) {
    if (!allow_fallback) {
      throw Error(ErrorCode::UnknownCategoryNoFallback, "no category matches '" + std::string(description) + "'");
    }
    category = std::string(kGenericCategory);
  }
  const auto candidates = catalog.entries_for(*category);
  if (candidates.empty()) {
    throw Error(ErrorCode::UnknownCategoryNoFallback, "catalog has no entries for " + *category);
  }
  const AssetEntry* best = nullptr;
  double best_err = 0.0;
  for (const auto* e : candidates) {
    const double err = aspect_alignment_error(e->canonical_size, target_size);
    if (best == nullptr || err < best_err || (err == best_err && e->asset_id < best->asset_id)) {
      best = e;
      best_err = err;
    }
  }
  return *best;
}

bool size_valid(const AssetCatalog& catalog, std::string_view category, const Vec3& size) {
  const auto range = catalog.category_range(category);
  if (!range) return true;
  const auto& [lo, hi] = *range;
  auto ok = [](double v, double mn, double mx) { return v >= 0.5 * mn && v <= 2.0 * mx; };
  return ok(size.x, lo.x, hi.x) && ok(size.y, lo.y, hi.y) && ok(size.z, lo.z, hi.z);
}

MandatoryObjects mandatory_objects(const AssetCatalog& catalog, std::string_view room_type,
                                   std::string_view instruction) {
  std::string room = normalize_text(room_type);
  if (auto canonical = catalog.match_room_type(room); canonical && !room.empty()) room = *canonical;
  if (room.empty() || catalog.mandatory_by_room().count(room) == 0) {
    auto inferred = catalog.match_room_type(instruction);
    if (room.empty() && inferred) {
      room = *inferred;
    } else if (catalog.mandatory_by_room().count(room) == 0) {
      throw Error(ErrorCode::UnknownRoomType, "no mandatory-object table for '" + std::string(room_type) + "'");
    }
  }
  auto it = catalog.mandatory_by_room().find(room);
  if (it == catalog.mandatory_by_room().end()) {
    throw Error(ErrorCode::UnknownRoomType, "no mandatory-object table for '" + room + "'");
  }
  MandatoryObjects out;
  out.room_type = room;
  out.items = it->second;
  out.essential = catalog.essential_for(room);
  for (const auto& cat : catalog.categories_mentioned(instruction)) {
    if (std::find(out.items.begin(), out.items.end(), cat) == out.items.end()) out.items.push_back(cat);
  }
  if (out.items.size() > 15) out.items.resize(15);
  if (const auto* common = catalog.common_for(room)) {
    for (const auto& cat : *common) {
      if (out.items.size() >= 5) break;
      if (std::find(out.items.begin(), out.items.end(), cat) == out.items.end()) out.items.push_back(cat);
    }
  }
  return out;
}

}  // namespace scenechain
