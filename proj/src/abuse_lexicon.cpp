#include "cinesent/abuse_lexicon.hpp"

#include <algorithm>
#include <optional>
#include <vector>

#include "cinesent/errors.hpp"
#include "cinesent/util.hpp"

namespace cinesent {

AbuseLexicon::AbuseLexicon(std::string name, std::string version)
    : name_(std::move(name)), version_(std::move(version)) {}

void AbuseLexicon::add(std::string_view term, std::string_view category) {
  std::vector<std::string> parts;
  for (auto p : split(trim(term), ' ')) {
    if (!p.empty()) parts.push_back(to_lower_ascii(p));
  }
  if (parts.empty() || parts.size() > 2) {
    throw FormatError("lexicon term must be one or two tokens: '" + std::string(term) + "'");
  }
  const std::string key = parts.size() == 1 ? parts[0] : parts[0] + " " + parts[1];
  (parts.size() == 1 ? unigrams_ : bigrams_).insert(key);
  if (!category.empty()) categories_[key] = std::string(category);
}

bool AbuseLexicon::has_bigram(const std::string& first, const std::string& second) const {
  if (bigrams_.empty()) return false;
  return bigrams_.contains(first + " " + second);
}

std::string_view AbuseLexicon::category(const std::string& term) const {
  const auto it = categories_.find(term);
  return it == categories_.end() ? std::string_view{} : std::string_view(it->second);
}

AbuseLexicon parse_lexicon(std::string_view text, std::string name) {
  std::optional<AbuseLexicon> lexicon;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    if (!lexicon) {
      const auto t = trim(line);
      if (!t.starts_with("version=") || trim(t.substr(8)).empty()) {
        throw FormatError("lexicon must start with a version=<string> line");
      }
      lexicon.emplace(std::move(name), std::string(trim(t.substr(8))));
      continue;
    }
    const auto tab = line.find('\t');
    try {
      if (tab == std::string_view::npos) {
        lexicon->add(line);
      } else {
        lexicon->add(line.substr(0, tab), trim(line.substr(tab + 1)));
      }
    } catch (const FormatError& e) {
      throw FormatError("lexicon line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!lexicon) throw FormatError("lexicon must start with a version=<string> line");
  if (lexicon->empty()) throw FormatError("lexicon contains no terms");
  return std::move(*lexicon);
}

AbuseLexicon load_lexicon(const std::filesystem::path& path) {
  return parse_lexicon(read_file(path), path.stem().string());
}

AbuseCount count_abusive(const TokenSequence& tokens, const AbuseLexicon& lexicon) {
  if (lexicon.empty()) throw std::invalid_argument("abuse lexicon is empty");
  const std::size_t n = tokens.size();
  // best[i]: maximum hits within tokens[i..n).
  std::vector<std::uint64_t> best(n + 2, 0);
  for (std::size_t i = n; i-- > 0;) {
    best[i] = best[i + 1] + (lexicon.has_unigram(tokens[i]) ? 1 : 0);
    if (i + 1 < n && lexicon.has_bigram(tokens[i], tokens[i + 1])) best[i] = std::max(best[i], best[i + 2] + 1);
  }
  return {best[0], n};
}

AbusiveTime abusive_time(const SubtitleDocument& doc, const CuePredicate& flagged) {
  AbusiveTime t;
  for (std::size_t i = 0; i < doc.cues.size(); ++i) {
    const auto& cue = doc.cues[i];
    t.dialogue_ms = std::max(t.dialogue_ms, cue.end_ms);
    if (flagged(i, cue)) t.abusive_ms += cue.duration_ms();
  }
  return t;
}

}  // namespace cinesent
