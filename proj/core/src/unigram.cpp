#include "hostnet/unigram.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <unordered_map>

#include "hostnet/errors.hpp"
#include "hostnet/utf8.hpp"

namespace hostnet {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kSeedCap = 100000;
constexpr int kMaxEmIterations = 50;
constexpr double kEmRelTolerance = 1e-10;

struct WordEntry {
  std::string text;
  std::vector<std::string> chars;
  long long count = 0;
};

std::vector<WordEntry> collect_words(const Corpus& corpus) {
  std::map<std::string, long long> counts;
  for (const auto& line : corpus) {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      const std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i > start) ++counts[line.substr(start, i - start)];
    }
  }
  std::vector<WordEntry> words;
  words.reserve(counts.size());
  for (const auto& [text, count] : counts) {
    words.push_back({text, utf8_chars(text), count});
  }
  return words;
}

std::string join(const std::vector<std::string>& chars, std::size_t start, std::size_t len) {
  std::string piece;
  for (std::size_t i = start; i < start + len; ++i) piece += chars[i];
  return piece;
}

// Segmentation lattice of one word: every substring edge up to max_len
// characters. Whether an edge is live depends on the current vocabulary.
struct WordLattice {
  std::size_t length = 0;
  std::vector<int> edge_start;
  std::vector<int> edge_end;
  std::vector<std::string> edge_piece;
  std::vector<std::vector<int>> ending_at;    // edge ids by end position
  std::vector<std::vector<int>> starting_at;  // edge ids by start position
};

WordLattice build_lattice(const WordEntry& word, std::size_t max_len) {
  WordLattice lattice;
  const std::size_t n = word.chars.size();
  lattice.length = n;
  lattice.ending_at.resize(n + 1);
  lattice.starting_at.resize(n + 1);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t len = 1; len <= std::min(max_len, n - s); ++len) {
      const int id = static_cast<int>(lattice.edge_piece.size());
      lattice.edge_start.push_back(static_cast<int>(s));
      lattice.edge_end.push_back(static_cast<int>(s + len));
      lattice.edge_piece.push_back(join(word.chars, s, len));
      lattice.ending_at[s + len].push_back(id);
      lattice.starting_at[s].push_back(id);
    }
  }
  return lattice;
}

double log_sum_exp(const std::vector<double>& terms) {
  double best = kNegInf;
  for (double t : terms) best = std::max(best, t);
  if (best == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - best);
  return best + std::log(acc);
}

// Forward pass over the lattice; returns log of the marginal probability
// of the word. `skip` suppresses one piece (for prune scoring).
double word_log_marginal(const WordLattice& lattice,
                         const std::map<std::string, double>& log_p,
                         const std::string* skip) {
  std::vector<double> alpha(lattice.length + 1, kNegInf);
  alpha[0] = 0.0;
  std::vector<double> terms;
  for (std::size_t t = 1; t <= lattice.length; ++t) {
    terms.clear();
    for (int e : lattice.ending_at[t]) {
      const std::string& piece = lattice.edge_piece[e];
      if (skip != nullptr && piece == *skip) continue;
      const auto it = log_p.find(piece);
      if (it == log_p.end()) continue;
      const double a = alpha[static_cast<std::size_t>(lattice.edge_start[e])];
      if (a == kNegInf) continue;
      terms.push_back(a + it->second);
    }
    alpha[t] = log_sum_exp(terms);
  }
  return alpha[lattice.length];
}

struct EmResult {
  std::vector<double> log_likelihood;       // one entry per iteration
  std::vector<double> word_log_marginals;   // at the final parameters
};

// EM at a fixed vocabulary. Updates log_p in place; the likelihood series
// it returns is non-decreasing up to rounding.
EmResult run_em(const std::vector<WordEntry>& words,
                const std::vector<WordLattice>& lattices,
                std::map<std::string, double>& log_p) {
  EmResult result;
  double previous = kNegInf;
  for (int iter = 0; iter < kMaxEmIterations; ++iter) {
    std::map<std::string, double> expected;
    double total_ll = 0.0;
    std::vector<double> marginals(words.size());
    std::vector<double> terms;

    for (std::size_t w = 0; w < words.size(); ++w) {
      const WordLattice& lattice = lattices[w];
      const std::size_t n = lattice.length;
      std::vector<double> alpha(n + 1, kNegInf), beta(n + 1, kNegInf);
      alpha[0] = 0.0;
      for (std::size_t t = 1; t <= n; ++t) {
        terms.clear();
        for (int e : lattice.ending_at[t]) {
          const auto it = log_p.find(lattice.edge_piece[e]);
          if (it == log_p.end()) continue;
          const double a = alpha[static_cast<std::size_t>(lattice.edge_start[e])];
          if (a == kNegInf) continue;
          terms.push_back(a + it->second);
        }
        alpha[t] = log_sum_exp(terms);
      }
      beta[n] = 0.0;
      for (std::size_t s = n; s-- > 0;) {
        terms.clear();
        for (int e : lattice.starting_at[s]) {
          const auto it = log_p.find(lattice.edge_piece[e]);
          if (it == log_p.end()) continue;
          const double b = beta[static_cast<std::size_t>(lattice.edge_end[e])];
          if (b == kNegInf) continue;
          terms.push_back(it->second + b);
        }
        beta[s] = log_sum_exp(terms);
      }
      const double log_z = alpha[n];
      marginals[w] = log_z;
      total_ll += static_cast<double>(words[w].count) * log_z;

      for (std::size_t e = 0; e < lattice.edge_piece.size(); ++e) {
        const auto it = log_p.find(lattice.edge_piece[e]);
        if (it == log_p.end()) continue;
        const double a = alpha[static_cast<std::size_t>(lattice.edge_start[e])];
        const double b = beta[static_cast<std::size_t>(lattice.edge_end[e])];
        if (a == kNegInf || b == kNegInf) continue;
        const double posterior = std::exp(a + it->second + b - log_z);
        expected[lattice.edge_piece[e]] += static_cast<double>(words[w].count) * posterior;
      }
    }

    result.log_likelihood.push_back(total_ll);
    result.word_log_marginals = std::move(marginals);

    double total_expected = 0.0;
    for (const auto& [piece, count] : expected) total_expected += count;
    for (auto& [piece, lp] : log_p) {
      const auto it = expected.find(piece);
      const double count = it == expected.end() ? 0.0 : it->second;
      lp = std::log(std::max(count, 1e-300)) - std::log(total_expected);
    }

    if (previous != kNegInf &&
        std::abs(total_ll - previous) <= kEmRelTolerance * (1.0 + std::abs(total_ll))) {
      break;
    }
    previous = total_ll;
  }
  return result;
}

std::size_t piece_char_length(const std::string& piece) {
  return utf8_chars(piece).size();
}

}  // namespace

void UnigramModel::finalize() {
  max_piece_chars = 0;
  for (const auto& [piece, lp] : pieces) {
    max_piece_chars = std::max(max_piece_chars, piece_char_length(piece));
  }
}

double sequence_probability(const std::vector<std::string>& pieces,
                            const UnigramModel& model) {
  double total = 0.0;
  for (const auto& piece : pieces) {
    const auto it = model.pieces.find(piece);
    if (it == model.pieces.end()) {
      throw VocabularyError("sequence_probability: piece '" + piece +
                            "' is not in the vocabulary");
    }
    total += it->second;
  }
  return total;
}

UnigramModel unigram_train(const Corpus& corpus, std::size_t vocab_size,
                           double prune_fraction, int seed_max_len,
                           UnigramTrainReport* report) {
  if (prune_fraction <= 0.0 || prune_fraction >= 1.0) {
    throw ConfigError("unigram_train: prune_fraction must be in (0, 1)");
  }
  if (seed_max_len < 1) throw ConfigError("unigram_train: seed_max_len must be >= 1");

  const std::vector<WordEntry> words = collect_words(corpus);
  if (words.empty()) throw DataError("unigram_train: empty corpus");

  // Seed vocabulary: substring counts, all single characters kept.
  std::map<std::string, long long> seed_counts;
  for (const auto& word : words) {
    const std::size_t n = word.chars.size();
    for (std::size_t s = 0; s < n; ++s) {
      std::string piece;
      for (std::size_t len = 1; len <= std::min<std::size_t>(seed_max_len, n - s); ++len) {
        piece += word.chars[s + len - 1];
        seed_counts[piece] += word.count;
      }
    }
  }

  std::size_t char_count = 0;
  for (const auto& [piece, count] : seed_counts) {
    if (piece_char_length(piece) == 1) ++char_count;
  }
  if (vocab_size < char_count) {
    throw ConfigError("unigram_train: vocab_size " + std::to_string(vocab_size) +
                      " is smaller than the " + std::to_string(char_count) +
                      " distinct corpus characters");
  }

  // Cap to the most frequent pieces, never discarding single characters.
  std::vector<std::pair<std::string, long long>> multi;
  for (const auto& [piece, count] : seed_counts) {
    if (piece_char_length(piece) > 1) multi.emplace_back(piece, count);
  }
  const std::size_t multi_budget = kSeedCap > char_count ? kSeedCap - char_count : 0;
  if (multi.size() > multi_budget) {
    std::sort(multi.begin(), multi.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    for (std::size_t i = multi_budget; i < multi.size(); ++i) {
      seed_counts.erase(multi[i].first);
    }
  }

  // Initial probabilities proportional to substring occurrence counts.
  double total_count = 0.0;
  for (const auto& [piece, count] : seed_counts) total_count += static_cast<double>(count);
  std::map<std::string, double> log_p;
  for (const auto& [piece, count] : seed_counts) {
    log_p[piece] = std::log(static_cast<double>(count)) - std::log(total_count);
  }

  std::vector<WordLattice> lattices;
  lattices.reserve(words.size());
  for (const auto& word : words) {
    lattices.push_back(build_lattice(word, static_cast<std::size_t>(seed_max_len)));
  }

  while (true) {
    EmResult em = run_em(words, lattices, log_p);
    if (report != nullptr) {
      report->em_runs.push_back(em.log_likelihood);
      report->vocab_sizes.push_back(log_p.size());
    }
    if (log_p.size() <= vocab_size) break;

    // Word marginals at the fitted parameters, for prune scoring.
    std::vector<double> base(words.size());
    for (std::size_t w = 0; w < words.size(); ++w) {
      base[w] = word_log_marginal(lattices[w], log_p, nullptr);
    }

    // Words whose lattice can use each multi-character piece.
    std::map<std::string, std::vector<std::size_t>> users;
    for (std::size_t w = 0; w < words.size(); ++w) {
      std::set<std::string> seen;
      for (const auto& piece : lattices[w].edge_piece) {
        if (piece_char_length(piece) > 1 && log_p.count(piece) > 0) seen.insert(piece);
      }
      for (const auto& piece : seen) users[piece].push_back(w);
    }

    // Cost of removing each piece: total likelihood lost when its edges
    // disappear from every lattice.
    std::vector<std::pair<double, std::string>> losses;
    losses.reserve(users.size());
    for (const auto& [piece, word_ids] : users) {
      double loss = 0.0;
      for (std::size_t w : word_ids) {
        const double without = word_log_marginal(lattices[w], log_p, &piece);
        loss += static_cast<double>(words[w].count) * (base[w] - without);
      }
      losses.emplace_back(loss, piece);
    }

    const std::size_t multi_count = losses.size();
    std::size_t drop = std::max<std::size_t>(
        1, static_cast<std::size_t>(prune_fraction * static_cast<double>(multi_count)));
    drop = std::min(drop, log_p.size() - vocab_size);
    drop = std::min(drop, multi_count);
    if (drop == 0) break;  // only single characters left to remove

    std::sort(losses.begin(), losses.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return a.second < b.second;
    });
    for (std::size_t i = 0; i < drop; ++i) log_p.erase(losses[i].second);

    // Renormalize the surviving pieces.
    std::vector<double> remaining;
    remaining.reserve(log_p.size());
    for (const auto& [piece, lp] : log_p) remaining.push_back(lp);
    const double lse = log_sum_exp(remaining);
    for (auto& [piece, lp] : log_p) lp -= lse;
  }

  UnigramModel model;
  model.pieces = std::move(log_p);
  model.finalize();
  return model;
}

std::vector<std::string> unigram_encode(std::string_view text, const UnigramModel& model) {
  const std::vector<std::string> chars = utf8_chars(text);
  const std::size_t n = chars.size();
  if (n == 0) return {};
  const std::size_t max_len = std::max<std::size_t>(model.max_piece_chars, 1);

  struct Candidate {
    double score = 0.0;
    int count = 0;
    std::vector<int> lens;
    bool valid = false;
  };
  // True when a beats b under (score desc, piece count asc, leftmost
  // piece lengths longest-first).
  auto beats = [](const Candidate& a, const Candidate& b) {
    if (!b.valid) return true;
    if (a.score != b.score) return a.score > b.score;
    if (a.count != b.count) return a.count < b.count;
    const std::size_t m = std::min(a.lens.size(), b.lens.size());
    for (std::size_t i = 0; i < m; ++i) {
      if (a.lens[i] != b.lens[i]) return a.lens[i] > b.lens[i];
    }
    return false;
  };

  std::vector<Candidate> dp(n + 1);
  dp[0].valid = true;
  for (std::size_t t = 1; t <= n; ++t) {
    for (std::size_t len = 1; len <= std::min(max_len, t); ++len) {
      const std::size_t s = t - len;
      if (!dp[s].valid) continue;
      const std::string piece = join(chars, s, len);
      const auto it = model.pieces.find(piece);
      double lp;
      if (it != model.pieces.end()) {
        lp = it->second;
      } else if (len == 1) {
        lp = kUnknownPieceLogProb;
      } else {
        continue;
      }
      Candidate cand;
      cand.score = dp[s].score + lp;
      cand.count = dp[s].count + 1;
      cand.lens = dp[s].lens;
      cand.lens.push_back(static_cast<int>(len));
      cand.valid = true;
      if (beats(cand, dp[t])) dp[t] = std::move(cand);
    }
  }

  std::vector<std::string> pieces;
  std::size_t pos = 0;
  for (int len : dp[n].lens) {
    pieces.push_back(join(chars, pos, static_cast<std::size_t>(len)));
    pos += static_cast<std::size_t>(len);
  }
  return pieces;
}

double unigram_corpus_log_likelihood(const Corpus& corpus, const UnigramModel& model) {
  const std::vector<WordEntry> words = collect_words(corpus);
  const std::size_t max_len = std::max<std::size_t>(model.max_piece_chars, 1);
  double total = 0.0;
  for (const auto& word : words) {
    const WordLattice lattice = build_lattice(word, max_len);
    // Unknown single characters participate at the floor probability so
    // the likelihood stays finite on unseen text.
    std::map<std::string, double> log_p;
    double z = word_log_marginal(lattice, model.pieces, nullptr);
    if (z == kNegInf) {
      std::map<std::string, double> patched = model.pieces;
      for (const auto& c : word.chars) patched.emplace(c, kUnknownPieceLogProb);
      z = word_log_marginal(lattice, patched, nullptr);
    }
    total += static_cast<double>(word.count) * z;
  }
  return total;
}

void save_unigram(const UnigramModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "unigram v1\n";
  char buffer[64];
  for (const auto& [piece, lp] : model.pieces) {
    std::snprintf(buffer, sizeof(buffer), "%.17g", lp);
    out << piece << '\t' << buffer << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

UnigramModel load_unigram(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty model file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "unigram v1") {
    throw ParseError(path.string() + ": bad header '" + line + "'");
  }
  UnigramModel model;
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(path.string() + ": line " + std::to_string(line_number) +
                       ": expected piece<TAB>log_prob");
    }
    const std::string piece = line.substr(0, tab);
    const std::string number = line.substr(tab + 1);
    char* end = nullptr;
    const double lp = std::strtod(number.c_str(), &end);
    if (end == nullptr || *end != '\0' || number.empty()) {
      throw ParseError(path.string() + ": line " + std::to_string(line_number) +
                       ": bad log probability '" + number + "'");
    }
    model.pieces[piece] = lp;
  }
  model.finalize();
  return model;
}

}  // namespace hostnet
