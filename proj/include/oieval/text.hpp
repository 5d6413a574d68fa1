#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

namespace oieval {

/// Raised when input bytes are not well-formed UTF-8.
class Utf8Error : public std::runtime_error {
 public:
  Utf8Error(std::string what, std::size_t offset)
      : std::runtime_error(std::move(what)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Decodes UTF-8 into Unicode scalar values. Throws Utf8Error on ill-formed input.
inline std::u32string to_code_points(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto length = static_cast<std::int32_t>(text.size());
  std::int32_t i = 0;
  while (i < length) {
    const std::int32_t start = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0)
      throw Utf8Error("invalid UTF-8 sequence at byte " + std::to_string(start),
                      static_cast<std::size_t>(start));
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

inline bool is_valid_utf8(std::string_view text) {
  try {
    to_code_points(text);
    return true;
  } catch (const Utf8Error&) {
    return false;
  }
}

inline bool is_whitespace(char32_t c) {
  return u_isUWhiteSpace(static_cast<UChar32>(c)) != 0;
}

inline bool contains_whitespace(std::string_view text) {
  for (char32_t c : to_code_points(text))
    if (is_whitespace(c)) return true;
  return false;
}

// Splits on maximal runs of Unicode whitespace; leading/trailing runs produce
// no empty words.
inline std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto length = static_cast<std::int32_t>(text.size());
  std::int32_t i = 0;
  std::int32_t word_start = -1;
  while (i < length) {
    const std::int32_t start = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0)
      throw Utf8Error("invalid UTF-8 sequence at byte " + std::to_string(start),
                      static_cast<std::size_t>(start));
    if (u_isUWhiteSpace(c)) {
      if (word_start >= 0) {
        words.emplace_back(text.substr(word_start, start - word_start));
        word_start = -1;
      }
    } else if (word_start < 0) {
      word_start = start;
    }
  }
  if (word_start >= 0) words.emplace_back(text.substr(word_start));
  return words;
}

/// Unicode Normalization Form C.
inline std::string normalize_nfc(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status))
    throw std::runtime_error(std::string("ICU NFC unavailable: ") + u_errorName(status));
  const auto source = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<std::int32_t>(text.size())));
  icu::UnicodeString normalized = nfc->normalize(source, status);
  if (U_FAILURE(status))
    throw std::runtime_error(std::string("NFC normalization failed: ") + u_errorName(status));
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

}  // namespace oieval
