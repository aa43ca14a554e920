// Copyright 2026 The lmtkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lmtkit/registry.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <set>
#include <string>

#include <json.hpp>

#include "lmtkit/error.hpp"

namespace lmt {

std::string_view to_string(Tier tier) {
  switch (tier) {
    case Tier::kHigh: return "High";
    case Tier::kMedium: return "Medium";
    case Tier::kLow: return "Low";
  }
  return "Low";
}

Tier parse_tier(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "high") return Tier::kHigh;
  if (lower == "medium" || lower == "mid") return Tier::kMedium;
  if (lower == "low") return Tier::kLow;
  throw Error(ErrorCode::kInvalidArgument, "unknown tier '" + std::string(text) + "'");
}

bool is_valid_code(std::string_view code) {
  if (code.empty() || code.front() < 'a' || code.front() > 'z') return false;
  if (code.back() == '_') return false;
  return std::all_of(code.begin(), code.end(),
                     [](char c) { return (c >= 'a' && c <= 'z') || c == '_'; });
}

Direction parse_direction(std::string_view key) {
  const auto pos = key.find('2');
  if (pos == std::string_view::npos || key.find('2', pos + 1) != std::string_view::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                "malformed direction '" + std::string(key) + "', expected <src>2<tgt>");
  }
  Direction d{std::string(key.substr(0, pos)), std::string(key.substr(pos + 1))};
  if (!is_valid_code(d.src) || !is_valid_code(d.tgt)) {
    throw Error(ErrorCode::kInvalidArgument,
                "malformed direction '" + std::string(key) + "'");
  }
  return d;
}

std::size_t& TierCounts::operator[](Tier t) {
  switch (t) {
    case Tier::kHigh: return high;
    case Tier::kMedium: return medium;
    case Tier::kLow: return low;
  }
  return low;
}

std::size_t TierCounts::operator[](Tier t) const {
  return const_cast<TierCounts&>(*this)[t];
}

namespace {

// Language table: 13 High (>1% of CulturaX), 18 Medium (0.1%-1%],
// 29 Low (<=0.1%).
const std::vector<Language>& builtin_languages() {
  static const std::vector<Language> table = {
      {"en", "English", "Latin", "Indo-European", Tier::kHigh},
      {"ar", "Arabic", "Arabic", "Afro-Asiatic", Tier::kHigh},
      {"es", "Spanish", "Latin", "Indo-European", Tier::kHigh},
      {"de", "German", "Latin", "Indo-European", Tier::kHigh},
      {"fr", "French", "Latin", "Indo-European", Tier::kHigh},
      {"it", "Italian", "Latin", "Indo-European", Tier::kHigh},
      {"ja", "Japanese", "Japanese", "Japonic", Tier::kHigh},
      {"nl", "Dutch", "Latin", "Indo-European", Tier::kHigh},
      {"pl", "Polish", "Latin", "Indo-European", Tier::kHigh},
      {"pt", "Portuguese", "Latin", "Indo-European", Tier::kHigh},
      {"ru", "Russian", "Cyrillic", "Indo-European", Tier::kHigh},
      {"tr", "Turkish", "Latin", "Turkic", Tier::kHigh},
      {"zh", "Chinese", "Han", "Sino-Tibetan", Tier::kHigh},

      {"bg", "Bulgarian", "Cyrillic", "Indo-European", Tier::kMedium},
      {"bn", "Bengali", "Bengali", "Indo-European", Tier::kMedium},
      {"cs", "Czech", "Latin", "Indo-European", Tier::kMedium},
      {"da", "Danish", "Latin", "Indo-European", Tier::kMedium},
      {"el", "Modern Greek", "Greek", "Indo-European", Tier::kMedium},
      {"fa", "Persian", "Arabic", "Indo-European", Tier::kMedium},
      {"fi", "Finnish", "Latin", "Uralic", Tier::kMedium},
      {"hi", "Hindi", "Devanagari", "Indo-European", Tier::kMedium},
      {"hu", "Hungarian", "Latin", "Uralic", Tier::kMedium},
      {"id", "Indonesian", "Latin", "Austronesian", Tier::kMedium},
      {"ko", "Korean", "Hangul", "Koreanic", Tier::kMedium},
      {"no", "Norwegian", "Latin", "Indo-European", Tier::kMedium},
      {"ro", "Romanian", "Latin", "Indo-European", Tier::kMedium},
      {"sk", "Slovak", "Latin", "Indo-European", Tier::kMedium},
      {"sv", "Swedish", "Latin", "Indo-European", Tier::kMedium},
      {"th", "Thai", "Thai", "Tai-Kadai", Tier::kMedium},
      {"uk", "Ukrainian", "Cyrillic", "Indo-European", Tier::kMedium},
      {"vi", "Vietnamese", "Latin", "Austroasiatic", Tier::kMedium},

      {"am", "Amharic", "Ge'ez", "Afro-Asiatic", Tier::kLow},
      {"az", "Azerbaijani", "Latin", "Turkic", Tier::kLow},
      {"bo", "Tibetan", "Tibetan", "Sino-Tibetan", Tier::kLow},
      {"he", "Modern Hebrew", "Hebrew", "Afro-Asiatic", Tier::kLow},
      {"hr", "Croatian", "Latin", "Indo-European", Tier::kLow},
      {"hy", "Armenian", "Armenian", "Indo-European", Tier::kLow},
      {"is", "Icelandic", "Latin", "Indo-European", Tier::kLow},
      {"jv", "Javanese", "Latin", "Austronesian", Tier::kLow},
      {"ka", "Georgian", "Georgian", "Kartvelian", Tier::kLow},
      {"kk", "Kazakh", "Cyrillic", "Turkic", Tier::kLow},
      {"km", "Central Khmer", "Khmer", "Austroasiatic", Tier::kLow},
      {"ky", "Kirghiz", "Cyrillic", "Turkic", Tier::kLow},
      {"lo", "Lao", "Lao", "Tai-Kadai", Tier::kLow},
      {"mn_cn", "Chinese Mongolian", "Mongolian", "Mongolic", Tier::kLow},
      {"mr", "Marathi", "Devanagari", "Indo-European", Tier::kLow},
      {"ms", "Malay", "Latin", "Austronesian", Tier::kLow},
      {"my", "Burmese", "Myanmar", "Sino-Tibetan", Tier::kLow},
      {"ne", "Nepali", "Devanagari", "Indo-European", Tier::kLow},
      {"ps", "Pashto", "Arabic", "Indo-European", Tier::kLow},
      {"si", "Sinhala", "Sinhala", "Indo-European", Tier::kLow},
      {"sw", "Swahili", "Latin", "Atlantic-Congo", Tier::kLow},
      {"ta", "Tamil", "Tamil", "Dravidian", Tier::kLow},
      {"te", "Telugu", "Telugu", "Dravidian", Tier::kLow},
      {"tg", "Tajik", "Cyrillic", "Indo-European", Tier::kLow},
      {"tl", "Tagalog", "Latin", "Austronesian", Tier::kLow},
      {"ug", "Uighur", "Arabic", "Turkic", Tier::kLow},
      {"ur", "Urdu", "Arabic", "Indo-European", Tier::kLow},
      {"uz", "Uzbek", "Latin", "Turkic", Tier::kLow},
      {"yue", "Yue Chinese", "Han", "Sino-Tibetan", Tier::kLow},
  };
  return table;
}

// Chosen by shared family and, where possible, shared script.
const AuxiliaryMap& builtin_auxiliaries() {
  static const AuxiliaryMap table = {
      {"bg", "ru"}, {"da", "de"}, {"fa", "ar"}, {"no", "de"}, {"ro", "it"},
      {"sk", "cs"}, {"sv", "de"}, {"uk", "ru"}, {"vi", "fr"}, {"az", "tr"},
      {"hr", "pl"}, {"is", "de"}, {"kk", "ru"}, {"ky", "ru"}, {"ps", "ar"},
      {"tg", "ru"}, {"tl", "es"}, {"ur", "fa"}, {"uz", "tr"},
  };
  return table;
}

Language parse_language_line(const nlohmann::json& j, std::size_t line) {
  auto field = [&](const char* key) -> std::string {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) {
      throw Error(ErrorCode::kParseError,
                  std::string("missing or non-string field '") + key + "'", line);
    }
    return it->get<std::string>();
  };
  Language lang;
  lang.code = field("code");
  lang.name = field("name");
  lang.script = field("script");
  lang.family = field("family");
  try {
    lang.tier = parse_tier(field("tier"));
  } catch (const Error& e) {
    throw Error(ErrorCode::kParseError, "field 'tier': " + e.detail(), line);
  }
  return lang;
}

template <typename Fn>
void for_each_json_line(std::istream& in, Fn&& fn) {
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kParseError, e.what(), line);
    }
    if (!j.is_object()) throw Error(ErrorCode::kParseError, "expected a JSON object", line);
    fn(j, line);
  }
}

AuxiliaryMap read_auxiliaries(std::istream& in) {
  AuxiliaryMap aux;
  for_each_json_line(in, [&](const nlohmann::json& j, std::size_t line) {
    auto lang = j.find("lang");
    auto target = j.find("aux");
    if (lang == j.end() || target == j.end() || !lang->is_string() || !target->is_string()) {
      throw Error(ErrorCode::kParseError, "expected {\"lang\",\"aux\"}", line);
    }
    if (!aux.emplace(lang->get<std::string>(), target->get<std::string>()).second) {
      throw Error(ErrorCode::kDuplicateLanguage,
                  "duplicate auxiliary entry for '" + lang->get<std::string>() + "'", line);
    }
  });
  return aux;
}

}  // namespace

const Registry& Registry::builtin() {
  static const Registry registry =
      Registry::from_languages(builtin_languages(), builtin_auxiliaries());
  return registry;
}

Registry Registry::from_languages(std::vector<Language> languages,
                                  AuxiliaryMap auxiliaries) {
  Registry r;
  r.languages_ = std::move(languages);
  for (std::size_t i = 0; i < r.languages_.size(); ++i) {
    const auto& code = r.languages_[i].code;
    if (!is_valid_code(code)) {
      throw Error(ErrorCode::kInvalidRecord, "invalid language code '" + code + "'");
    }
    if (!r.index_.emplace(code, i).second) {
      throw Error(ErrorCode::kDuplicateLanguage, "duplicate language '" + code + "'");
    }
  }
  for (auto center : {kEnglish, kChinese}) {
    if (!r.contains(center)) {
      throw Error(ErrorCode::kMissingCenter,
                  "registry lacks center language '" + std::string(center) + "'");
    }
  }
  for (const auto& [lang, aux] : auxiliaries) {
    if (!r.contains(lang)) {
      throw Error(ErrorCode::kUnknownLanguage, "auxiliary entry for unknown language '" + lang + "'");
    }
    if (!r.contains(aux)) {
      throw Error(ErrorCode::kUnknownLanguage, "unknown auxiliary language '" + aux + "'");
    }
    if (is_center(lang) || is_center(aux) || lang == aux) {
      throw Error(ErrorCode::kInvalidRecord,
                  "auxiliary entry " + lang + "->" + aux + " must pair two non-center languages");
    }
  }
  r.auxiliaries_ = std::move(auxiliaries);
  return r;
}

Registry Registry::load(std::istream& languages, std::istream* auxiliaries) {
  std::vector<Language> langs;
  for_each_json_line(languages, [&](const nlohmann::json& j, std::size_t line) {
    langs.push_back(parse_language_line(j, line));
  });

  AuxiliaryMap aux;
  if (auxiliaries != nullptr) {
    aux = read_auxiliaries(*auxiliaries);
  } else {
    std::set<std::string> present;
    for (const auto& l : langs) present.insert(l.code);
    for (const auto& [lang, a] : builtin_auxiliaries()) {
      if (present.count(lang) && present.count(a)) aux.emplace(lang, a);
    }
  }
  return from_languages(std::move(langs), std::move(aux));
}

bool Registry::contains(std::string_view code) const {
  return index_.find(std::string(code)) != index_.end();
}

const Language& Registry::at(std::string_view code) const {
  auto it = index_.find(std::string(code));
  if (it == index_.end()) {
    throw Error(ErrorCode::kUnknownLanguage, "unknown language '" + std::string(code) + "'");
  }
  return languages_[it->second];
}

TierCounts Registry::tier_counts() const {
  TierCounts counts;
  for (const auto& l : languages_) ++counts[l.tier];
  return counts;
}

std::optional<std::string> Registry::auxiliary_for(const Direction& direction) const {
  if (!direction.is_centric()) {
    throw Error(ErrorCode::kInvalidArgument,
                "direction " + direction.key() + " does not involve a center language");
  }
  at(direction.src);
  at(direction.tgt);
  if (is_center(direction.src) && is_center(direction.tgt)) return std::nullopt;

  const bool en_side = direction.src == kEnglish || direction.tgt == kEnglish;
  const std::string& other = is_center(direction.src) ? direction.tgt : direction.src;
  if (!en_side) return std::string(kEnglish);
  auto it = auxiliaries_.find(other);
  if (it == auxiliaries_.end()) return std::nullopt;
  return it->second;
}

Registry load_registry(const std::string& path, const std::optional<std::string>& aux_path) {
  if (path.empty() || path == "builtin") {
    if (!aux_path) return Registry::builtin();
    std::ifstream aux(*aux_path);
    if (!aux) throw Error(ErrorCode::kIoError, "cannot open auxiliary table '" + *aux_path + "'");
    return Registry::from_languages(Registry::builtin().languages(), read_auxiliaries(aux));
  }
  std::ifstream langs(path);
  if (!langs) throw Error(ErrorCode::kIoError, "cannot open registry '" + path + "'");
  if (aux_path) {
    std::ifstream aux(*aux_path);
    if (!aux) throw Error(ErrorCode::kIoError, "cannot open auxiliary table '" + *aux_path + "'");
    return Registry::load(langs, &aux);
  }
  return Registry::load(langs, nullptr);
}

}  // namespace lmt
