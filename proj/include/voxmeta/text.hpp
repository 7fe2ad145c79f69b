// include/voxmeta/text.hpp

// Copyright 2026 The VoxMeta Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VOXMETA_TEXT_HPP
#define VOXMETA_TEXT_HPP

#include <string>
#include <string_view>

namespace voxmeta::text {

// Canonical person key: lowercase, Latin diacritics folded to ASCII,
// combining marks stripped, internal whitespace collapsed to single spaces,
// trimmed. Handles both precomposed ("é") and decomposed ("e" + U+0301)
// spellings, so the composed/decomposed form of a name maps to one key.
// Idempotent: normalize_person_key(normalize_person_key(s)) == result.
std::string normalize_person_key(std::string_view name);

// True iff `text` contains `year` rendered as a 4-digit ASCII token that is
// not embedded in a longer digit run ("2014" matches in "Best of 2014 tour"
// but not in "ID 20149 clip").
bool has_year_token(std::string_view text, int year);

}  // namespace voxmeta::text

#endif  // VOXMETA_TEXT_HPP
