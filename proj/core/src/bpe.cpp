#include "hostnet/bpe.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "hostnet/errors.hpp"
#include "hostnet/utf8.hpp"

namespace hostnet {

namespace {

using SymbolPair = std::pair<std::string, std::string>;

struct PairHash {
  std::size_t operator()(const SymbolPair& p) const {
    const std::size_t h1 = std::hash<std::string>{}(p.first);
    const std::size_t h2 = std::hash<std::string>{}(p.second);
    return h1 ^ (h2 + 0x9E3779B97F4A7C15ULL + (h1 << 6) + (h1 >> 2));
  }
};

std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) words.emplace_back(line.substr(start, i - start));
  }
  return words;
}

std::vector<std::string> word_symbols(std::string_view word) {
  std::vector<std::string> syms = utf8_chars(word);
  syms.emplace_back(kEowMarker);
  return syms;
}

// One left-to-right greedy pass; for a single rule this is exhaustive
// because a merged symbol can never re-form its own left or right part.
void apply_merge(std::vector<std::string>& syms, const std::string& left,
                 const std::string& right) {
  std::vector<std::string> out;
  out.reserve(syms.size());
  std::size_t i = 0;
  while (i < syms.size()) {
    if (i + 1 < syms.size() && syms[i] == left && syms[i + 1] == right) {
      out.push_back(left + right);
      i += 2;
    } else {
      out.push_back(std::move(syms[i]));
      ++i;
    }
  }
  syms = std::move(out);
}

bool single_codepoint(std::string_view symbol) {
  return !symbol.empty() && utf8_chars(symbol).size() == 1;
}

}  // namespace

int BpeModel::id_of(std::string_view symbol) const {
  const auto it = vocab.find(std::string(symbol));
  if (it != vocab.end()) return it->second;
  if (single_codepoint(symbol)) {
    return static_cast<int>(symbols.size()) + static_cast<int>(utf8_first_codepoint(symbol));
  }
  return -1;
}

void BpeModel::rebuild_vocab() {
  std::set<std::string> all;
  all.insert(eow_marker);
  for (const auto& [l, r] : merges) {
    all.insert(l);
    all.insert(r);
    all.insert(l + r);
  }
  vocab.clear();
  symbols.assign(all.begin(), all.end());
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    vocab.emplace(symbols[i], static_cast<int>(i));
  }
}

BpeModel bpe_train(const Corpus& corpus, std::size_t vocab_size) {
  // Unique words with multiplicities; sorted for a deterministic walk.
  std::map<std::string, long long> word_counts;
  for (const auto& line : corpus) {
    for (auto& w : split_words(line)) ++word_counts[w];
  }
  if (word_counts.empty()) throw DataError("bpe_train: empty corpus");

  std::vector<std::vector<std::string>> words;
  std::vector<long long> counts;
  words.reserve(word_counts.size());
  std::set<std::string> inventory;
  for (const auto& [word, count] : word_counts) {
    words.push_back(word_symbols(word));
    counts.push_back(count);
    for (const auto& s : words.back()) inventory.insert(s);
  }

  if (vocab_size < inventory.size()) {
    throw ConfigError("bpe_train: vocab_size " + std::to_string(vocab_size) +
                      " is smaller than the " + std::to_string(inventory.size()) +
                      " distinct initial symbols");
  }

  BpeModel model;
  while (inventory.size() < vocab_size) {
    std::unordered_map<SymbolPair, long long, PairHash> pair_counts;
    for (std::size_t w = 0; w < words.size(); ++w) {
      const auto& syms = words[w];
      for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
        pair_counts[{syms[i], syms[i + 1]}] += counts[w];
      }
    }

    // Highest count wins; ties break to the lexicographically smallest
    // pair, so the selection is a total order and the scan order of the
    // hash map does not matter.
    const SymbolPair* best = nullptr;
    long long best_count = 0;
    for (const auto& [pair, count] : pair_counts) {
      if (count > best_count ||
          (count == best_count && best != nullptr && pair < *best)) {
        best = &pair;
        best_count = count;
      }
    }
    if (best == nullptr || best_count < 2) break;

    for (auto& syms : words) apply_merge(syms, best->first, best->second);
    inventory.insert(best->first + best->second);
    model.merges.push_back(*best);
  }

  model.rebuild_vocab();
  return model;
}

std::vector<std::string> bpe_encode_symbols(std::string_view text, const BpeModel& model) {
  std::vector<std::string> out;
  for (const auto& word : split_words(text)) {
    std::vector<std::string> syms = word_symbols(word);
    for (const auto& [l, r] : model.merges) apply_merge(syms, l, r);
    for (auto& s : syms) out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::int64_t> bpe_encode(std::string_view text, const BpeModel& model) {
  std::vector<std::int64_t> ids;
  for (const auto& symbol : bpe_encode_symbols(text, model)) {
    const int id = model.id_of(symbol);
    if (id < 0) {
      throw VocabularyError("bpe_encode: symbol '" + symbol + "' has no id");
    }
    ids.push_back(id);
  }
  return ids;
}

std::string bpe_decode(const std::vector<std::int64_t>& ids, const BpeModel& model) {
  std::string text;
  const auto base = static_cast<std::int64_t>(model.symbols.size());
  for (const std::int64_t id : ids) {
    if (id >= 0 && id < base) {
      text += model.symbols[static_cast<std::size_t>(id)];
    } else if (id >= base && id - base <= 0x10FFFF) {
      text += utf8_encode(static_cast<char32_t>(id - base));
    } else {
      throw VocabularyError("bpe_decode: unknown id " + std::to_string(id));
    }
  }
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text.compare(i, model.eow_marker.size(), model.eow_marker) == 0) {
      out += ' ';
      i += model.eow_marker.size();
    } else {
      out += text[i];
      ++i;
    }
  }
  if (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

void save_bpe(const BpeModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "bpe v1 eow=" << model.eow_marker << "\n";
  for (const auto& [l, r] : model.merges) out << l << '\t' << r << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

BpeModel load_bpe(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty model file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::string expected = "bpe v1 eow=" + std::string(kEowMarker);
  if (line != expected) {
    throw ParseError(path.string() + ": bad header '" + line + "'");
  }
  BpeModel model;
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError(path.string() + ": line " + std::to_string(line_number) +
                       ": expected left<TAB>right");
    }
    model.merges.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  model.rebuild_vocab();
  return model;
}

}  // namespace hostnet
