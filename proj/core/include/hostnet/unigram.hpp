#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hostnet/bpe.hpp"  // Corpus

namespace hostnet {

/// Log-probability assigned to a character that is not in the vocabulary;
/// encoding falls back to single-character pieces at this floor instead of
/// failing.
inline constexpr double kUnknownPieceLogProb = -1e9;

/// Unigram language-model tokenizer: pieces with log-probabilities whose
/// linear probabilities sum to 1. Segmentation of a string scores as the
/// sum of its pieces' log-probabilities.
struct UnigramModel {
  std::map<std::string, double> pieces;  // piece -> log p(piece)
  std::size_t max_piece_chars = 0;       // derived, in codepoints

  void finalize();  // recomputes max_piece_chars
};

/// Sum of stored log-probabilities. Throws VocabularyError on a piece
/// outside the model. Empty input scores log(1) = 0.
double sequence_probability(const std::vector<std::string>& pieces,
                            const UnigramModel& model);

/// Per-run EM log-likelihood trajectories, one inner vector per EM run at
/// a fixed vocabulary (a prune round shrinks the vocabulary between runs).
struct UnigramTrainReport {
  std::vector<std::vector<double>> em_runs;
  std::vector<std::size_t> vocab_sizes;
};

/// Trains by EM over per-word segmentation lattices with likelihood-guided
/// pruning: seed with all word substrings up to seed_max_len characters
/// (capped to the 100k most frequent), then alternately fit probabilities
/// by EM and drop the prune_fraction of multi-character pieces whose
/// removal costs the least total log-likelihood, until at most vocab_size
/// pieces remain. Single characters are never dropped.
UnigramModel unigram_train(const Corpus& corpus, std::size_t vocab_size,
                           double prune_fraction = 0.2, int seed_max_len = 8,
                           UnigramTrainReport* report = nullptr);

/// Highest-probability segmentation by dynamic programming over prefixes.
/// Ties break to fewer pieces, then to the leftmost-longest segmentation.
/// Characters outside the vocabulary become single-character pieces at the
/// kUnknownPieceLogProb floor, so encoding is total.
std::vector<std::string> unigram_encode(std::string_view text, const UnigramModel& model);

/// Total corpus log-likelihood of the model (sum over lines of the
/// log-marginal over all segmentations).
double unigram_corpus_log_likelihood(const Corpus& corpus, const UnigramModel& model);

/// Text model file: header "unigram v1", then piece<TAB>log_prob lines in
/// lexicographic piece order. UTF-8, LF.
void save_unigram(const UnigramModel& model, const std::filesystem::path& path);
UnigramModel load_unigram(const std::filesystem::path& path);

}  // namespace hostnet
