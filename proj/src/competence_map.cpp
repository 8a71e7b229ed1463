#include "compdbn/competence_map.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <queue>
#include <set>
#include <sstream>

namespace compdbn {

namespace {

constexpr std::string_view kBundledSubmap = R"(# Project-collaboration submap.
# Generic competences: to collaborate, decomposed into to propose and to contribute.
# Each one is specialized into its project-specific counterpart.

competence collaborate "To collaborate"
competence propose "To propose"
competence contribute "To contribute"
competence collaborate_in_project "To collaborate in project"
competence propose_on_project "To propose on project"
competence contribute_to_project "To contribute to project"

attribute collaborate "To propose ways to solve a problem or develop a team project, defining a course of action with specific steps."
attribute collaborate "To provide points of view with openness and to consider those of other people in a reflective manner."

includes collaborate propose
includes collaborate contribute
includes collaborate_in_project propose_on_project
includes collaborate_in_project contribute_to_project

specializes collaborate collaborate_in_project
specializes propose propose_on_project
specializes contribute contribute_to_project
)";

bool is_id_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '-' || c == '.';
}

// Tokenizer for a single statement line.
class LineScanner {
 public:
  LineScanner(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

  void skip_space() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t' || line_[pos_] == '\r'))
      ++pos_;
  }

  bool at_end() {
    skip_space();
    return pos_ >= line_.size() || line_[pos_] == '#';
  }

  std::size_t column() const { return pos_ + 1; }

  std::string identifier(std::string_view what) {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < line_.size() && is_id_char(line_[pos_])) ++pos_;
    if (pos_ == start) fail("expected " + std::string(what), start);
    return std::string(line_.substr(start, pos_ - start));
  }

  std::string quoted(std::string_view what) {
    skip_space();
    if (pos_ >= line_.size() || line_[pos_] != '"') fail("expected quoted " + std::string(what), pos_);
    const std::size_t open = pos_++;
    std::string out;
    while (pos_ < line_.size()) {
      const char c = line_[pos_++];
      if (c == '"') return out;
      if (c == '\\') {
        if (pos_ >= line_.size()) break;
        const char e = line_[pos_++];
        if (e != '"' && e != '\\') fail("unknown escape sequence", pos_ - 2);
        out.push_back(e);
      } else {
        out.push_back(c);
      }
    }
    fail("unterminated string", open);
  }

  void expect_end() {
    if (!at_end()) fail("unexpected trailing text", pos_);
  }

  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    throw MapError("line " + std::to_string(line_no_) + ", column " + std::to_string(at + 1) + ": " +
                       msg,
                   line_no_, at + 1);
  }

 private:
  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string edge_locus(const Edge& e) { return e.parent + "->" + e.child; }

}  // namespace

std::string_view relationship_keyword(RelationshipType type) {
  return type == RelationshipType::Specialization ? "specializes" : "includes";
}

std::string_view diagnostic_kind_name(Diagnostic::Kind kind) {
  switch (kind) {
    case Diagnostic::Kind::DuplicateId: return "duplicate-id";
    case Diagnostic::Kind::EmptyName: return "empty-name";
    case Diagnostic::Kind::UnknownId: return "unknown-id";
    case Diagnostic::Kind::DuplicateEdge: return "duplicate-edge";
    case Diagnostic::Kind::Cycle: return "cycle";
  }
  return "unknown";
}

MapError::MapError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(what), line_(line), column_(column) {}

void CompetenceMap::add_competence(Competence competence) {
  competences_.push_back(std::move(competence));
}

void CompetenceMap::add_attribute(std::string_view id, std::string attribute) {
  for (auto& c : competences_) {
    if (c.id == id) {
      c.attributes.push_back(std::move(attribute));
      return;
    }
  }
  throw MapError("attribute for unknown competence '" + std::string(id) + "'");
}

void CompetenceMap::add_edge(Edge edge) { edges_.push_back(std::move(edge)); }

bool CompetenceMap::contains(std::string_view id) const {
  return std::any_of(competences_.begin(), competences_.end(),
                     [&](const Competence& c) { return c.id == id; });
}

const Competence& CompetenceMap::competence(std::string_view id) const {
  for (const auto& c : competences_)
    if (c.id == id) return c;
  throw MapError("unknown competence '" + std::string(id) + "'");
}

std::vector<std::string> CompetenceMap::ids() const {
  std::vector<std::string> out;
  out.reserve(competences_.size());
  for (const auto& c : competences_) out.push_back(c.id);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Edge> CompetenceMap::parent_edges(std::string_view id) const {
  std::vector<Edge> out;
  for (const auto& e : edges_)
    if (e.child == id) out.push_back(e);
  std::sort(out.begin(), out.end());
  return out;
}

int CompetenceMap::sub_competence_count(std::string_view super_id) const {
  if (!contains(super_id)) throw MapError("unknown competence '" + std::string(super_id) + "'");
  return static_cast<int>(std::count_if(edges_.begin(), edges_.end(), [&](const Edge& e) {
    return e.type == RelationshipType::Inclusion && e.parent == super_id;
  }));
}

std::vector<std::string> CompetenceMap::topological_order() const {
  std::map<std::string, int> indegree;
  std::map<std::string, std::vector<std::string>> children;
  for (const auto& c : competences_) indegree.emplace(c.id, 0);
  for (const auto& e : edges_) {
    if (!indegree.count(e.parent) || !indegree.count(e.child))
      throw MapError("edge " + edge_locus(e) + " references an unknown competence");
    ++indegree[e.child];
    children[e.parent].push_back(e.child);
  }
  std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
  for (const auto& [id, deg] : indegree)
    if (deg == 0) ready.push(id);
  std::vector<std::string> order;
  while (!ready.empty()) {
    std::string id = ready.top();
    ready.pop();
    for (const auto& child : children[id])
      if (--indegree[child] == 0) ready.push(child);
    order.push_back(std::move(id));
  }
  if (order.size() != indegree.size()) throw MapError("competence map contains a cycle");
  return order;
}

bool operator==(const CompetenceMap& a, const CompetenceMap& b) {
  auto by_id = [](std::vector<Competence> v) {
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
    return v;
  };
  auto sorted = [](std::vector<Edge> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  return by_id(a.competences_) == by_id(b.competences_) && sorted(a.edges_) == sorted(b.edges_);
}

std::vector<Diagnostic> validate(const CompetenceMap& map) {
  using Kind = Diagnostic::Kind;
  std::vector<Diagnostic> out;

  std::set<std::string> seen;
  for (const auto& c : map.competences()) {
    if (!seen.insert(c.id).second)
      out.push_back({Kind::DuplicateId, c.id, "duplicate competence id '" + c.id + "'"});
    if (c.name.empty())
      out.push_back({Kind::EmptyName, c.id, "competence '" + c.id + "' has an empty name"});
  }

  std::set<Edge> edge_set;
  std::map<std::string, std::vector<std::string>> adjacency;
  for (const auto& e : map.edges()) {
    bool known = true;
    for (const auto* end : {&e.parent, &e.child}) {
      if (!seen.count(*end)) {
        out.push_back({Kind::UnknownId, edge_locus(e),
                       "edge " + edge_locus(e) + " references unknown id '" + *end + "'"});
        known = false;
      }
    }
    if (!edge_set.insert(e).second)
      out.push_back({Kind::DuplicateEdge, edge_locus(e),
                     "duplicate " + std::string(relationship_keyword(e.type)) + " edge " +
                         edge_locus(e)});
    if (known) adjacency[e.parent].push_back(e.child);
  }

  // Three-colour DFS; one diagnostic per back edge found.
  std::map<std::string, int> colour;
  std::function<void(const std::string&)> visit = [&](const std::string& id) {
    colour[id] = 1;
    auto it = adjacency.find(id);
    if (it != adjacency.end()) {
      std::vector<std::string> next = it->second;
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      for (const auto& child : next) {
        if (colour[child] == 1) {
          out.push_back({Kind::Cycle, id + "->" + child,
                         "cycle through edge " + id + "->" + child});
        } else if (colour[child] == 0) {
          visit(child);
        }
      }
    }
    colour[id] = 2;
  };
  for (const auto& id : seen)
    if (colour[id] == 0) visit(id);

  return out;
}

CompetenceMap parse_map_syntax(std::string_view text) {
  CompetenceMap map;
  std::set<std::string> ids;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;

    LineScanner scan(line, line_no);
    if (scan.at_end()) {
      if (end == text.size()) break;
      continue;
    }
    const std::size_t keyword_col = scan.column();
    const std::string keyword = scan.identifier("statement keyword");
    if (keyword == "competence") {
      std::string id = scan.identifier("competence id");
      std::string name = scan.quoted("display name");
      scan.expect_end();
      ids.insert(id);
      map.add_competence({std::move(id), std::move(name), {}});
    } else if (keyword == "attribute") {
      std::string id = scan.identifier("competence id");
      std::string attribute = scan.quoted("attribute text");
      scan.expect_end();
      if (!ids.count(id))
        throw MapError("line " + std::to_string(line_no) + ": attribute for unknown id '" + id + "'",
                       line_no, keyword_col);
      map.add_attribute(id, std::move(attribute));
    } else if (keyword == "specializes" || keyword == "includes") {
      std::string parent = scan.identifier("parent id");
      std::string child = scan.identifier("child id");
      scan.expect_end();
      map.add_edge({std::move(parent), std::move(child),
                    keyword == "includes" ? RelationshipType::Inclusion
                                          : RelationshipType::Specialization});
    } else {
      scan.fail("unknown statement '" + keyword + "'", keyword_col - 1);
    }
    if (end == text.size()) break;
  }
  return map;
}

CompetenceMap parse_map(std::string_view text) {
  CompetenceMap map = parse_map_syntax(text);
  if (auto diags = validate(map); !diags.empty()) throw MapError(diags.front().message);
  return map;
}

std::string read_map_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open map file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

CompetenceMap load_map_file(const std::string& path) { return parse_map(read_map_file(path)); }

std::string serialize_map(const CompetenceMap& map) {
  std::vector<Competence> comps = map.competences();
  std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  std::vector<Edge> edges = map.edges();
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.parent, a.child, a.type) < std::tie(b.parent, b.child, b.type);
  });

  std::string out;
  for (const auto& c : comps) out += "competence " + c.id + " " + quote(c.name) + "\n";
  for (const auto& c : comps)
    for (const auto& a : c.attributes) out += "attribute " + c.id + " " + quote(a) + "\n";
  for (const auto& e : edges)
    out += std::string(relationship_keyword(e.type)) + " " + e.parent + " " + e.child + "\n";
  return out;
}

std::string map_to_dot(const CompetenceMap& map) {
  std::string out = "digraph competences {\n  rankdir=TB;\n  node [shape=box];\n";
  for (const auto& id : map.ids())
    out += "  \"" + id + "\" [label=" + quote(map.competence(id).name) + "];\n";
  std::vector<Edge> edges = map.edges();
  std::sort(edges.begin(), edges.end());
  for (const auto& e : edges) {
    out += "  \"" + e.parent + "\" -> \"" + e.child + "\" [style=" +
           (e.type == RelationshipType::Specialization ? "dashed" : "solid") + "];\n";
  }
  out += "}\n";
  return out;
}

std::string_view bundled_submap_text() { return kBundledSubmap; }

CompetenceMap bundled_submap() { return parse_map(kBundledSubmap); }

}  // namespace compdbn
