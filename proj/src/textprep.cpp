#include "cinesent/textprep.hpp"

#include <array>

#include "cinesent/util.hpp"

namespace cinesent {
namespace {

constexpr char32_t kReplacement = 0xFFFD;

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    int len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      cp = b0;
      len = 1;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      len = 2;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      len = 3;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      len = 4;
    } else {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    if (i + static_cast<std::size_t>(len) > s.size()) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += static_cast<std::size_t>(len);
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Symbol, pictograph and emoji blocks plus emoji joiners and selectors.
bool is_symbol(char32_t cp) {
  return cp == 0x00A9 || cp == 0x00AE || cp == 0x2122 || cp == 0x200D || cp == 0x20E3 ||
         (cp >= 0x2190 && cp <= 0x21FF) || (cp >= 0x2300 && cp <= 0x23FF) ||
         (cp >= 0x2460 && cp <= 0x27BF) || (cp >= 0x2900 && cp <= 0x297F) ||
         (cp >= 0x2B00 && cp <= 0x2BFF) || cp == 0x3030 || cp == 0x303D || cp == 0x3297 || cp == 0x3299 ||
         (cp >= 0xFE00 && cp <= 0xFE0F) || cp == 0xFFFC || cp == 0xFFFD ||
         (cp >= 0x1F000 && cp <= 0x1FAFF) || (cp >= 0xE0000 && cp <= 0xE007F) ||
         (cp >= 0xE000 && cp <= 0xF8FF);
}

bool is_space(char32_t cp) {
  return cp < 0x20 || cp == ' ' || cp == 0x7F || (cp >= 0x80 && cp <= 0x9F) || cp == 0x00A0 ||
         (cp >= 0x2000 && cp <= 0x200C) || cp == 0x2028 || cp == 0x2029 || cp == 0x202F || cp == 0x205F ||
         cp == 0x3000 || cp == 0xFEFF;
}

bool is_punct_nonascii(char32_t cp) {
  return (cp >= 0xA1 && cp <= 0xBF) || cp == 0xD7 || cp == 0xF7 || (cp >= 0x2010 && cp <= 0x206F) ||
         (cp >= 0x3001 && cp <= 0x303F) || (cp >= 0xFF01 && cp <= 0xFF0F);
}

bool is_word_char(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
  }
  return !is_symbol(cp) && !is_space(cp) && !is_punct_nonascii(cp);
}

bool is_apostrophe(char32_t cp) { return cp == '\'' || cp == 0x2019 || cp == 0x02BC; }

char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp < 0xC0) return cp;
  if (cp <= 0xDE && cp != 0xD7) return cp + 32;
  if ((cp >= 0x100 && cp <= 0x137) || (cp >= 0x14A && cp <= 0x177)) return cp | 1;
  if ((cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E)) return (cp & 1) ? cp + 1 : cp;
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 32;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 32;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 80;
  return cp;
}

bool starts_with_ci(const std::u32string& s, std::size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    if (to_lower(s[pos + k]) != static_cast<char32_t>(prefix[k])) return false;
  }
  return true;
}

void blank_until_space(std::u32string& s, std::size_t pos) {
  while (pos < s.size() && !is_space(s[pos])) s[pos++] = ' ';
}

}  // namespace

std::string clean_text(std::string_view raw) {
  std::u32string text = decode_utf8(raw);
  for (auto& cp : text) {
    if (is_symbol(cp) || is_space(cp)) cp = ' ';
  }
  for (std::size_t i = 0; i < text.size(); ++i) {
    const bool token_start = i == 0 || text[i - 1] == ' ';
    if (starts_with_ci(text, i, "http://") || starts_with_ci(text, i, "https://") ||
        (token_start && starts_with_ci(text, i, "www."))) {
      blank_until_space(text, i);
    }
  }
  for (std::size_t i = 0; i + 1 < text.size(); ++i) {
    if (text[i] == '#' && (is_word_char(text[i + 1]) || text[i + 1] == '_')) {
      text[i++] = ' ';
      while (i < text.size() && (is_word_char(text[i]) || text[i] == '_')) text[i++] = ' ';
      --i;
    }
  }
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char32_t cp : text) {
    if (cp == ' ') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    append_utf8(out, to_lower(cp));
  }
  return out;
}

TokenSequence tokenize(std::string_view clean) {
  const std::u32string text = decode_utf8(clean);
  TokenSequence tokens;
  std::string current;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char32_t cp = text[i];
    if (is_word_char(cp)) {
      append_utf8(current, to_lower(cp));
    } else if (is_apostrophe(cp) && !current.empty() && i + 1 < text.size() && is_word_char(text[i + 1])) {
      current += '\'';
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

TokenSequence split_clitics(const TokenSequence& tokens) {
  static constexpr std::array<std::string_view, 6> kClitics = {"s", "re", "ll", "ve", "d", "m"};
  TokenSequence out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens) {
    const auto pos = tok.rfind('\'');
    if (pos != std::string::npos && pos > 0) {
      const std::string_view tail = std::string_view(tok).substr(pos + 1);
      bool is_clitic = false;
      for (auto c : kClitics) is_clitic = is_clitic || tail == c;
      if (is_clitic) {
        out.push_back(tok.substr(0, pos));
        out.emplace_back(tail);
        continue;
      }
    }
    out.push_back(tok);
  }
  return out;
}

StopwordSet::StopwordSet(std::string name, std::initializer_list<std::string_view> words) : name_(std::move(name)) {
  for (auto w : words) words_.insert(to_lower_ascii(w));
}

StopwordSet::StopwordSet(std::string name, const std::vector<std::string>& words) : name_(std::move(name)) {
  for (const auto& w : words) words_.insert(to_lower_ascii(w));
}

// English function words, including the bare fragments left by split_clitics.
#define CINESENT_FUNCTION_WORDS                                                                              \
  "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your", "yours", "yourself",           \
      "yourselves", "he", "him", "his", "himself", "she", "her", "hers", "herself", "it", "its", "itself",   \
      "they", "them", "their", "theirs", "themselves", "what", "which", "who", "whom", "this", "that",       \
      "these", "those", "am", "is", "are", "was", "were", "be", "been", "being", "have", "has", "had",       \
      "having", "do", "does", "did", "doing", "a", "an", "the", "and", "but", "if", "or", "because", "as",   \
      "until", "while", "of", "at", "by", "for", "with", "about", "against", "between", "into", "through",   \
      "during", "before", "after", "above", "below", "to", "from", "up", "down", "in", "out", "on", "off",   \
      "over", "under", "again", "further", "then", "once", "here", "there", "when", "where", "why", "how",   \
      "all", "any", "both", "each", "few", "more", "most", "other", "some", "such", "only", "own", "same",   \
      "so", "than", "too", "very", "s", "t", "can", "will", "just", "should", "now", "d", "ll", "m", "o",    \
      "re", "ve", "y", "it's", "that's", "i'm", "you're", "he's", "she's", "we're", "they're", "i've",       \
      "you've", "we've", "they've", "i'd", "you'd", "he'd", "she'd", "we'd", "they'd", "i'll", "you'll",    \
      "he'll", "she'll", "we'll", "they'll"

const StopwordSet& StopwordSet::ngram_profile() {
  static const StopwordSet profile("ngram", {CINESENT_FUNCTION_WORDS, "nor"});
  return profile;
}

const StopwordSet& StopwordSet::classify_profile() {
  static const StopwordSet profile("classify", {CINESENT_FUNCTION_WORDS, "would", "could", "also", "us", "let",
                                               "get", "got", "may", "might", "shall", "must", "yet", "ever",
                                               "much", "many", "every", "within", "upon", "whether"});
  return profile;
}

#undef CINESENT_FUNCTION_WORDS

StopwordSet parse_stopwords(std::string_view text, std::string name) {
  std::vector<std::string> words;
  for (auto line : split(text, '\n')) {
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) words.emplace_back(line);
  }
  return StopwordSet(std::move(name), words);
}

StopwordSet load_stopwords(const std::filesystem::path& path, std::string name) {
  return parse_stopwords(read_file(path), std::move(name));
}

TokenSequence remove_stopwords(const TokenSequence& tokens, const StopwordSet& profile) {
  TokenSequence out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!profile.contains(t)) out.push_back(t);
  }
  return out;
}

}  // namespace cinesent
