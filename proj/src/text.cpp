// src/text.cpp

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

#include "voxmeta/text.hpp"

#include <cstdint>

namespace voxmeta::text {

namespace {

// Decode one UTF-8 code point starting at `i`; advances `i`. Malformed bytes
// decode as U+FFFD and consume a single byte, so normalization stays total.
std::uint32_t decode_utf8(std::string_view s, std::size_t& i) {
  const auto byte = [&](std::size_t k) -> std::uint32_t {
    return static_cast<unsigned char>(s[k]);
  };
  const std::uint32_t b0 = byte(i);
  if (b0 < 0x80) {
    i += 1;
    return b0;
  }
  const auto cont = [&](std::size_t k) {
    return k < s.size() && (byte(k) & 0xc0) == 0x80;
  };
  if ((b0 & 0xe0) == 0xc0 && cont(i + 1)) {
    const std::uint32_t cp = ((b0 & 0x1f) << 6) | (byte(i + 1) & 0x3f);
    i += 2;
    return cp;
  }
  if ((b0 & 0xf0) == 0xe0 && cont(i + 1) && cont(i + 2)) {
    const std::uint32_t cp = ((b0 & 0x0f) << 12) | ((byte(i + 1) & 0x3f) << 6) |
                             (byte(i + 2) & 0x3f);
    i += 3;
    return cp;
  }
  if ((b0 & 0xf8) == 0xf0 && cont(i + 1) && cont(i + 2) && cont(i + 3)) {
    const std::uint32_t cp = ((b0 & 0x07) << 18) | ((byte(i + 1) & 0x3f) << 12) |
                             ((byte(i + 2) & 0x3f) << 6) | (byte(i + 3) & 0x3f);
    i += 4;
    return cp;
  }
  i += 1;
  return 0xfffd;
}

void encode_utf8(std::uint32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else {
    out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  }
}

// ASCII folding for the Latin-1 Supplement and Latin Extended-A blocks,
// already lowercased. Covers the celebrity-name repertoire of the corpus;
// code points outside the table pass through unchanged.
const char* fold_latin(std::uint32_t cp) {
  switch (cp) {
    case 0x00df: return "ss";  // ß
    case 0x00e0: case 0x00e1: case 0x00e2: case 0x00e3:
    case 0x00e4: case 0x00e5: case 0x0101: case 0x0103:
    case 0x0105: return "a";
    case 0x00e6: return "ae";  // æ
    case 0x00e7: case 0x0107: case 0x0109: case 0x010b:
    case 0x010d: return "c";
    case 0x010f: case 0x0111: return "d";
    case 0x00e8: case 0x00e9: case 0x00ea: case 0x00eb:
    case 0x0113: case 0x0115: case 0x0117: case 0x0119:
    case 0x011b: return "e";
    case 0x011d: case 0x011f: case 0x0121: case 0x0123: return "g";
    case 0x0125: case 0x0127: return "h";
    case 0x00ec: case 0x00ed: case 0x00ee: case 0x00ef:
    case 0x0129: case 0x012b: case 0x012d: case 0x012f:
    case 0x0131: return "i";
    case 0x0133: return "ij";  // ĳ
    case 0x0135: return "j";
    case 0x0137: case 0x0138: return "k";
    case 0x013a: case 0x013c: case 0x013e: case 0x0140:
    case 0x0142: return "l";
    case 0x00f1: case 0x0144: case 0x0146: case 0x0148:
    case 0x0149: case 0x014b: return "n";
    case 0x00f0: return "d";   // ð
    case 0x00f2: case 0x00f3: case 0x00f4: case 0x00f5:
    case 0x00f6: case 0x00f8: case 0x014d: case 0x014f:
    case 0x0151: return "o";
    case 0x0153: return "oe";  // œ
    case 0x0155: case 0x0157: case 0x0159: return "r";
    case 0x015b: case 0x015d: case 0x015f: case 0x0161: return "s";
    case 0x00fe: return "th";  // þ
    case 0x0163: case 0x0165: case 0x0167: return "t";
    case 0x00f9: case 0x00fa: case 0x00fb: case 0x00fc:
    case 0x0169: case 0x016b: case 0x016d: case 0x016f:
    case 0x0171: case 0x0173: return "u";
    case 0x0175: return "w";
    case 0x00fd: case 0x00ff: case 0x0177: return "y";
    case 0x017a: case 0x017c: case 0x017e: return "z";
    default: return nullptr;
  }
}

// Lowercase within the handled repertoire: ASCII A-Z, Latin-1 uppercase, and
// the even/odd cased pairs of Latin Extended-A.
std::uint32_t to_lower(std::uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp >= 0x00c0 && cp <= 0x00de && cp != 0x00d7) return cp + 32;
  // Latin Extended-A case pairs: even/odd up to U+0137, parity flips for
  // U+0139..U+0148, then even/odd again from U+014A.
  if (cp >= 0x0100 && cp <= 0x0137 && (cp % 2 == 0)) return cp + 1;
  if (cp >= 0x0139 && cp <= 0x0148 && (cp % 2 == 1)) return cp + 1;
  if (cp >= 0x014a && cp <= 0x0177 && (cp % 2 == 0)) return cp + 1;
  if (cp == 0x0178) return 0x00ff;  // Ÿ
  if (cp >= 0x0179 && cp <= 0x017d && (cp % 2 == 1)) return cp + 1;
  return cp;
}

bool is_space_cp(std::uint32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' ||
         cp == '\v' || cp == 0x00a0 || cp == 0x2002 || cp == 0x2003 ||
         cp == 0x2009 || cp == 0x202f || cp == 0x3000;
}

bool is_combining_mark(std::uint32_t cp) {
  return (cp >= 0x0300 && cp <= 0x036f) || (cp >= 0x1ab0 && cp <= 0x1aff) ||
         (cp >= 0x20d0 && cp <= 0x20ff);
}

}  // namespace

std::string normalize_person_key(std::string_view name) {
  std::string out;
  out.reserve(name.size());
  bool pending_space = false;
  bool emitted = false;
  std::size_t i = 0;
  while (i < name.size()) {
    std::uint32_t cp = decode_utf8(name, i);
    if (is_space_cp(cp)) {
      pending_space = emitted;
      continue;
    }
    if (is_combining_mark(cp)) continue;
    cp = to_lower(cp);
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    if (const char* folded = fold_latin(cp)) {
      out += folded;
    } else {
      encode_utf8(cp, out);
    }
    emitted = true;
  }
  return out;
}

bool has_year_token(std::string_view text, int year) {
  if (year < 1000 || year > 9999) return false;
  char token[5];
  for (int k = 3; k >= 0; --k) {
    token[k] = static_cast<char>('0' + year % 10);
    year /= 10;
  }
  token[4] = '\0';
  const auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  std::size_t pos = 0;
  while ((pos = text.find(token, pos)) != std::string_view::npos) {
    const bool digit_before = pos > 0 && is_digit(text[pos - 1]);
    const bool digit_after = pos + 4 < text.size() && is_digit(text[pos + 4]);
    if (!digit_before && !digit_after) return true;
    pos += 1;
  }
  return false;
}

}  // namespace voxmeta::text
