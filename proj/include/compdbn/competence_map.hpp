#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace compdbn {

/// Kinds of relationship between competences that take part in inference.
enum class RelationshipType { Specialization, Inclusion };

std::string_view relationship_keyword(RelationshipType type);

struct Competence {
  std::string id;
  std::string name;
  std::vector<std::string> attributes;  // metadata only, never turned into factors

  friend bool operator==(const Competence&, const Competence&) = default;
};

/// A directed relationship. For Specialization the parent is the more general
/// competence; for Inclusion the parent is the super-competence.
struct Edge {
  std::string parent;
  std::string child;
  RelationshipType type;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Diagnostic {
  enum class Kind { DuplicateId, EmptyName, UnknownId, DuplicateEdge, Cycle };

  Kind kind;
  std::string locus;  // offending node id or "parent->child"
  std::string message;
};

std::string_view diagnostic_kind_name(Diagnostic::Kind kind);

/// Thrown by parse_map and lookups on a map. Line/column are 1-based; zero
/// when the error is not tied to a source position.
class MapError : public std::runtime_error {
 public:
  MapError(const std::string& what, std::size_t line = 0, std::size_t column = 0);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Competences interrelated by specialization and inclusion edges.
///
/// The container itself does not enforce the invariants so that `validate`
/// can report on arbitrary content; `parse_map` only ever returns maps for
/// which `validate` is empty.
class CompetenceMap {
 public:
  void add_competence(Competence competence);
  void add_attribute(std::string_view id, std::string attribute);
  void add_edge(Edge edge);

  const std::vector<Competence>& competences() const { return competences_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t size() const { return competences_.size(); }

  bool contains(std::string_view id) const;
  const Competence& competence(std::string_view id) const;

  /// Competence ids in lexicographic order.
  std::vector<std::string> ids() const;

  /// Edges whose child is `id`, sorted by (parent, type).
  std::vector<Edge> parent_edges(std::string_view id) const;

  /// Number of Inclusion edges leaving `super_id`.
  int sub_competence_count(std::string_view super_id) const;

  /// Parents-before-children order with lexicographic tie-break. Throws
  /// MapError if the edges contain a cycle.
  std::vector<std::string> topological_order() const;

  friend bool operator==(const CompetenceMap& a, const CompetenceMap& b);

 private:
  std::vector<Competence> competences_;
  std::vector<Edge> edges_;
};

/// Empty iff every map invariant holds.
std::vector<Diagnostic> validate(const CompetenceMap& map);

/// Parses the line-oriented map format:
///
///     competence  <id> "<display name>"
///     attribute   <id> "<attribute text>"
///     specializes <general-id> <specific-id>
///     includes    <super-id> <sub-id>
///
/// `#` starts a comment. Throws MapError on syntax errors (with position) and
/// on the first validation diagnostic.
CompetenceMap parse_map(std::string_view text);

/// Statements only; the result may violate map invariants (see `validate`).
CompetenceMap parse_map_syntax(std::string_view text);

/// Throws std::ios_base::failure if the file cannot be read.
std::string read_map_file(const std::string& path);
CompetenceMap load_map_file(const std::string& path);

/// Deterministic text form: competences by id, then edges sorted.
std::string serialize_map(const CompetenceMap& map);

/// GraphViz rendering; specialization edges dashed, inclusion edges solid.
std::string map_to_dot(const CompetenceMap& map);

/// The six-node project-collaboration submap shipped with the library.
std::string_view bundled_submap_text();
CompetenceMap bundled_submap();

}  // namespace compdbn
