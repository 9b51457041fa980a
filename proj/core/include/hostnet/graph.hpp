#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "hostnet/matrix.hpp"

namespace hostnet {

/// One token of a dependency-parsed sentence. Indices follow the CoNLL-U
/// convention: `index` is 1-based, `head` is the 1-based index of the head
/// token with 0 marking the syntactic root.
struct Token {
  int index = 0;
  std::string surface;
  int head = 0;
  std::string deprel;
};

struct Sentence {
  std::string id;
  std::vector<Token> tokens;

  int size() const { return static_cast<int>(tokens.size()); }
};

/// The three edge relations of the dependency graph: head-to-dependent,
/// dependent-to-head, and self-loop.
enum class RelationKind : int { Forward = 0, Inverse = 1, SelfLoop = 2 };

inline constexpr int kRelationCount = 3;
inline constexpr std::array<RelationKind, kRelationCount> kAllRelations = {
    RelationKind::Forward, RelationKind::Inverse, RelationKind::SelfLoop};

const char* relation_name(RelationKind r);

/// 0-based directed edge src -> dst carrying one relation kind.
struct Edge {
  int src = 0;
  int dst = 0;
  RelationKind rel = RelationKind::Forward;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Directed labeled graph over the tokens of one sentence, plus per-node
/// feature vectors (n x d0).
struct DependencyGraph {
  int node_count = 0;
  Matrix features;
  std::vector<Edge> edges;
};

/// In-neighbor lists per (relation, node), with the normalization constant
/// c(i, r) = max(1, |N(i, r)|) that divides incoming messages.
struct NeighborIndex {
  int node_count = 0;
  // neighbors[r][i] = sources of edges (j -> i) labeled r.
  std::array<std::vector<std::vector<int>>, kRelationCount> neighbors;
  // norm[r][i] = max(1, |neighbors[r][i]|), as a double for direct division.
  std::array<std::vector<double>, kRelationCount> norm;
};

/// Checks the Sentence invariants: consecutive 1-based indices, heads in
/// range, head != index, exactly one root, and acyclic head links.
/// Throws StructureError naming the sentence id.
void validate_sentence(const Sentence& sentence);

/// Parses a CoNLL-U document: 10 tab-separated columns per token line,
/// blank line between sentences, '#' comment lines. Multiword-token ranges
/// ("3-4") and empty nodes ("5.1") are skipped. Columns 1, 2, 7, 8 become
/// index, surface, head, deprel. Accepts LF and CRLF.
///
/// Throws ParseError with a line number for malformed lines, and
/// StructureError naming the sentence for invalid head trees.
std::vector<Sentence> parse_conllu(std::string_view text);

/// The edge list build_graph would produce: one Forward edge head -> t and
/// one Inverse edge t -> head per non-root token, then one SelfLoop per
/// node. Indices are 0-based.
std::vector<Edge> dependency_edges(const Sentence& sentence);

/// Builds the three-relation graph for a sentence with one feature row per
/// token. Throws DimensionError when the row count does not match.
DependencyGraph build_graph(const Sentence& sentence, Matrix features);

/// Groups in-edges by (relation, destination) and attaches normalization
/// constants.
NeighborIndex neighbor_index(const DependencyGraph& graph);

}  // namespace hostnet
