#include "hostnet/graph.hpp"

#include <charconv>
#include <utility>

#include "hostnet/errors.hpp"

namespace hostnet {

namespace {

constexpr int kConlluColumns = 10;

bool parse_int(std::string_view s, int& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

const char* relation_name(RelationKind r) {
  switch (r) {
    case RelationKind::Forward: return "forward";
    case RelationKind::Inverse: return "inverse";
    case RelationKind::SelfLoop: return "self_loop";
  }
  return "?";
}

void validate_sentence(const Sentence& sentence) {
  const int n = sentence.size();
  auto fail = [&](const std::string& what) {
    throw StructureError("sentence '" + sentence.id + "': " + what);
  };
  if (n == 0) fail("empty sentence");

  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const Token& t = sentence.tokens[i];
    if (t.index != i + 1) {
      fail("token indices must be consecutive from 1, got " + std::to_string(t.index) +
           " at position " + std::to_string(i + 1));
    }
    if (t.head < 0 || t.head > n) {
      fail("head " + std::to_string(t.head) + " of token " + std::to_string(t.index) +
           " out of range [0, " + std::to_string(n) + "]");
    }
    if (t.head == t.index) {
      fail("token " + std::to_string(t.index) + " is its own head");
    }
    if (t.head == 0) ++roots;
  }
  if (roots != 1) {
    fail("expected exactly one root token, found " + std::to_string(roots));
  }

  // Walk each token to the root; revisiting a token on the way means the
  // head links contain a cycle.
  std::vector<int> state(n, 0);  // 0 unseen, 1 on current path, 2 done
  for (int start = 0; start < n; ++start) {
    int node = start;
    std::vector<int> path;
    while (node != -1 && state[node] == 0) {
      state[node] = 1;
      path.push_back(node);
      node = sentence.tokens[node].head - 1;  // -1 once we reach the root
    }
    if (node != -1 && state[node] == 1) {
      fail("head links contain a cycle through token " + std::to_string(node + 1));
    }
    for (int visited : path) state[visited] = 2;
  }
}

std::vector<Sentence> parse_conllu(std::string_view text) {
  std::vector<Sentence> sentences;
  Sentence current;
  std::string pending_id;
  int line_number = 0;

  auto flush = [&]() {
    if (current.tokens.empty()) {
      pending_id.clear();
      return;
    }
    current.id = pending_id.empty()
                     ? "sentence " + std::to_string(sentences.size() + 1)
                     : pending_id;
    validate_sentence(current);
    sentences.push_back(std::move(current));
    current = {};
    pending_id.clear();
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_number;

    if (line.empty()) {
      flush();
    } else if (line.front() == '#') {
      std::string_view comment = line.substr(1);
      const std::size_t eq = comment.find('=');
      if (eq != std::string_view::npos && trim(comment.substr(0, eq)) == "sent_id") {
        pending_id = std::string(trim(comment.substr(eq + 1)));
      }
    } else {
      const auto fields = split_tabs(line);
      if (fields.size() != kConlluColumns) {
        throw ParseError("line " + std::to_string(line_number) + ": expected " +
                         std::to_string(kConlluColumns) + " tab-separated columns, got " +
                         std::to_string(fields.size()));
      }
      const std::string_view id_field = fields[0];
      // Multiword-token ranges ("3-4") and empty nodes ("5.1") carry no
      // tree structure; skip them.
      if (id_field.find('-') != std::string_view::npos ||
          id_field.find('.') != std::string_view::npos) {
        pos = eol + 1;
        if (eol == text.size()) break;
        continue;
      }
      Token token;
      if (!parse_int(id_field, token.index)) {
        throw ParseError("line " + std::to_string(line_number) +
                         ": token index is not an integer: '" + std::string(id_field) + "'");
      }
      if (!parse_int(fields[6], token.head)) {
        throw ParseError("line " + std::to_string(line_number) +
                         ": head is not an integer: '" + std::string(fields[6]) + "'");
      }
      token.surface = std::string(fields[1]);
      token.deprel = std::string(fields[7]);
      current.tokens.push_back(std::move(token));
    }

    if (eol == text.size()) break;
    pos = eol + 1;
  }
  flush();
  return sentences;
}

std::vector<Edge> dependency_edges(const Sentence& sentence) {
  const int n = sentence.size();
  std::vector<Edge> edges;
  edges.reserve(3 * static_cast<std::size_t>(n));
  for (const Token& t : sentence.tokens) {
    if (t.head != 0) edges.push_back({t.head - 1, t.index - 1, RelationKind::Forward});
  }
  for (const Token& t : sentence.tokens) {
    if (t.head != 0) edges.push_back({t.index - 1, t.head - 1, RelationKind::Inverse});
  }
  for (int i = 0; i < n; ++i) edges.push_back({i, i, RelationKind::SelfLoop});
  return edges;
}

DependencyGraph build_graph(const Sentence& sentence, Matrix features) {
  validate_sentence(sentence);
  const int n = sentence.size();
  if (features.rows() != static_cast<std::size_t>(n)) {
    throw DimensionError("build_graph: " + std::to_string(features.rows()) +
                         " feature rows for " + std::to_string(n) + " tokens (sentence '" +
                         sentence.id + "')");
  }
  if (features.cols() == 0) {
    throw DimensionError("build_graph: feature dimension must be positive");
  }
  DependencyGraph graph;
  graph.node_count = n;
  graph.features = std::move(features);
  graph.edges = dependency_edges(sentence);
  return graph;
}

NeighborIndex neighbor_index(const DependencyGraph& graph) {
  NeighborIndex index;
  index.node_count = graph.node_count;
  for (int r = 0; r < kRelationCount; ++r) {
    index.neighbors[r].assign(graph.node_count, {});
  }
  for (const Edge& e : graph.edges) {
    index.neighbors[static_cast<int>(e.rel)][e.dst].push_back(e.src);
  }
  for (int r = 0; r < kRelationCount; ++r) {
    index.norm[r].resize(graph.node_count);
    for (int i = 0; i < graph.node_count; ++i) {
      const std::size_t degree = index.neighbors[r][i].size();
      index.norm[r][i] = degree == 0 ? 1.0 : static_cast<double>(degree);
    }
  }
  return index;
}

}  // namespace hostnet
