#include "hostnet/text_clean.hpp"

#include <cctype>
#include <cstdint>

#include "hostnet/utf8.hpp"

namespace hostnet {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Parses the entity between '&' and ';' (exclusive). Returns false when it
// is not one we handle; the caller then keeps the text literal.
bool decode_entity(std::string_view body, std::string& out) {
  if (body == "amp") { out += '&'; return true; }
  if (body == "lt") { out += '<'; return true; }
  if (body == "gt") { out += '>'; return true; }
  if (body == "quot") { out += '"'; return true; }
  if (body.size() >= 2 && body[0] == '#') {
    std::uint32_t cp = 0;
    std::size_t i = 1;
    int base = 10;
    if (body[1] == 'x' || body[1] == 'X') { base = 16; i = 2; }
    if (i >= body.size()) return false;
    for (; i < body.size(); ++i) {
      const char c = body[i];
      int digit;
      if (c >= '0' && c <= '9') digit = c - '0';
      else if (base == 16 && c >= 'a' && c <= 'f') digit = c - 'a' + 10;
      else if (base == 16 && c >= 'A' && c <= 'F') digit = c - 'A' + 10;
      else return false;
      cp = cp * static_cast<std::uint32_t>(base) + static_cast<std::uint32_t>(digit);
      if (cp > 0x10FFFF) return false;
    }
    out += utf8_encode(static_cast<char32_t>(cp));
    return true;
  }
  return false;
}

std::string unescape_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '&') {
      const std::size_t semi = s.find(';', i + 1);
      // Entity bodies are short; anything longer is literal text.
      if (semi != std::string_view::npos && semi - i <= 12 &&
          decode_entity(s.substr(i + 1, semi - i - 1), out)) {
        i = semi + 1;
        continue;
      }
    }
    out += s[i];
    ++i;
  }
  return out;
}

std::string strip_tags(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '<') {
      const std::size_t close = s.find('>', i + 1);
      if (close != std::string_view::npos) {
        i = close + 1;
        continue;
      }
    }
    out += s[i];
    ++i;
  }
  return out;
}

std::string strip_urls(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s.compare(i, 7, "http://") == 0 || s.compare(i, 8, "https://") == 0) {
      while (i < s.size() && !is_space(s[i])) ++i;
      continue;
    }
    out += s[i];
    ++i;
  }
  return out;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out += ' ';
      pending_space = false;
      out += c;
    }
  }
  return out;
}

}  // namespace

std::string clean_text(std::string_view raw) {
  return collapse_whitespace(strip_urls(strip_tags(unescape_entities(raw))));
}

}  // namespace hostnet
