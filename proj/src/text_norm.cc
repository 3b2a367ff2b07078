// Copyright (c) 2026 The biasforge Authors
//
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

#include "biasforge/text_norm.h"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>
#include <unistd.h>

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "biasforge/error.h"

namespace biasforge {

namespace {

enum class CharClass { kWord, kApostrophe, kMark, kSeparator };

CharClass classify(UChar32 c) {
  if (c == U'\'' || c == 0x2019) return CharClass::kApostrophe;
  const auto mask = U_GET_GC_MASK(c);
  if (mask & (U_GC_L_MASK | U_GC_ND_MASK)) return CharClass::kWord;
  if (mask & U_GC_M_MASK) return CharClass::kMark;
  return CharClass::kSeparator;
}

void append_utf8(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  std::int32_t len = 0;
  UBool error = false;
  U8_APPEND(buf, len, U8_MAX_LENGTH, c, error);
  if (!error) out.append(buf, static_cast<std::size_t>(len));
}

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) {
    throw Error("ICU NFC normalizer unavailable");
  }
  return *n;
}

icu::UnicodeString nfc_of(const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc().normalize(s, status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");
  return out;
}

}  // namespace

std::string NormalizedText::render() const {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

NormalizedText normalize(std::string_view text) {
  NormalizedText result;
  result.raw = std::string(text);

  // fromUTF8 maps ill-formed sequences to U+FFFD, which classifies as a
  // separator.
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<std::int32_t>(text.size())));
  u = nfc_of(u);
  u.toLower(icu::Locale::getRoot());
  u = nfc_of(u);

  std::vector<UChar32> cps;
  cps.reserve(static_cast<std::size_t>(u.length()));
  for (std::int32_t i = 0; i < u.length(); i = u.moveIndex32(i, 1)) {
    cps.push_back(u.char32At(i));
  }

  auto next_significant = [&](std::size_t i) -> CharClass {
    for (std::size_t k = i + 1; k < cps.size(); ++k) {
      const CharClass cls = classify(cps[k]);
      if (cls != CharClass::kMark) return cls;
    }
    return CharClass::kSeparator;
  };

  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      result.words.push_back(std::move(current));
      current.clear();
    }
  };

  for (std::size_t i = 0; i < cps.size(); ++i) {
    switch (classify(cps[i])) {
      case CharClass::kWord:
        append_utf8(current, cps[i]);
        break;
      case CharClass::kApostrophe:
        if (!current.empty() && next_significant(i) == CharClass::kWord) {
          current.push_back('\'');
        } else {
          flush();
        }
        break;
      case CharClass::kMark:
        break;
      case CharClass::kSeparator:
        flush();
        break;
    }
  }
  flush();
  return result;
}

NormalizedText split_words(std::string_view text) {
  NormalizedText result;
  result.raw = std::string(text);
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) result.words.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return result;
}

std::vector<NormalizedText> normalize_external(
    const std::string& command, const std::vector<std::string>& lines) {
  namespace fs = std::filesystem;
  std::string in_template =
      (fs::temp_directory_path() / "biasforge-norm-XXXXXX").string();
  const int fd = mkstemp(in_template.data());
  if (fd < 0) throw IoError("cannot create temporary file for normalizer");
  close(fd);
  const fs::path in_path = in_template;
  const fs::path out_path = in_template + ".out";

  struct Cleanup {
    fs::path a, b;
    ~Cleanup() {
      std::error_code ec;
      fs::remove(a, ec);
      fs::remove(b, ec);
    }
  } cleanup{in_path, out_path};

  {
    std::ofstream in(in_path, std::ios::binary);
    for (std::string line : lines) {
      for (char& c : line) {
        if (c == '\n' || c == '\r') c = ' ';
      }
      in << line << '\n';
    }
    if (!in) throw IoError("cannot write normalizer input");
  }

  const std::string shell = command + " < '" + in_path.string() + "' > '" +
                            out_path.string() + "'";
  const int rc = std::system(shell.c_str());
  if (rc != 0) {
    throw IoError("external normalizer failed (exit status " +
                  std::to_string(rc) + "): " + command);
  }

  std::ifstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot read normalizer output");
  std::vector<NormalizedText> result;
  result.reserve(lines.size());
  std::string line;
  std::size_t index = 0;
  while (std::getline(out, line)) {
    if (index >= lines.size()) {
      throw IoError("external normalizer produced more lines than it was given");
    }
    NormalizedText t = split_words(line);
    t.raw = lines[index++];
    result.push_back(std::move(t));
  }
  if (result.size() != lines.size()) {
    throw IoError("external normalizer produced " +
                  std::to_string(result.size()) + " lines for " +
                  std::to_string(lines.size()) + " inputs");
  }
  return result;
}

}  // namespace biasforge
