#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hostnet {

/// Training text, one example per line.
using Corpus = std::vector<std::string>;

inline constexpr std::string_view kEowMarker = "</w>";

/// Byte-pair-encoding model: the ordered merge list is the trained state;
/// the dense symbol-id map is derived canonically from it (sorted set of
/// the end-of-word marker plus every symbol a merge mentions), so a saved
/// and reloaded model assigns the same ids as the freshly trained one.
///
/// Characters outside the symbol table encode into an escape id space:
/// id = vocab size + codepoint. Encoding is therefore total and decoding
/// exact for any input.
struct BpeModel {
  std::vector<std::pair<std::string, std::string>> merges;
  std::unordered_map<std::string, int> vocab;       // symbol -> dense id
  std::vector<std::string> symbols;                 // id -> symbol
  std::string eow_marker = std::string(kEowMarker);

  /// Id for a symbol: dense id when known, escape id for single
  /// characters, -1 for unknown multi-character symbols.
  int id_of(std::string_view symbol) const;

  /// Rebuilds vocab/symbols from the merge list.
  void rebuild_vocab();
};

/// Learns merges from whitespace-split words until the symbol inventory
/// (initial characters + end-of-word marker + merge outputs) reaches
/// vocab_size or no adjacent pair occurs at least twice. Ties between
/// equally frequent pairs break lexicographically.
BpeModel bpe_train(const Corpus& corpus, std::size_t vocab_size);

/// Splits on whitespace, turns each word into characters plus the
/// end-of-word marker, and applies the merges in training order.
std::vector<std::string> bpe_encode_symbols(std::string_view text, const BpeModel& model);
std::vector<std::int64_t> bpe_encode(std::string_view text, const BpeModel& model);

/// Inverse of bpe_encode up to whitespace normalization. Throws
/// VocabularyError on an id outside both the dense and escape spaces.
std::string bpe_decode(const std::vector<std::int64_t>& ids, const BpeModel& model);

/// Text model file: header "bpe v1 eow=</w>", then one merge per line as
/// left<TAB>right. UTF-8, LF.
void save_bpe(const BpeModel& model, const std::filesystem::path& path);
BpeModel load_bpe(const std::filesystem::path& path);

}  // namespace hostnet
