// Control-flow graphs, cut-points and segments.
#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tileproof/frontend/ast.hpp"

namespace tileproof::cfg {

using frontend::ExprP;
using frontend::StmtP;

enum class NodeKind {
  Start,
  End,
  Assign,       // var := expr
  Store,        // var[index] := expr
  Assume,       // expr
  Cond,         // expr, tt/ff successors
  LoopHead,     // var < expr, tt into the body
  CounterInit,  // var := 0
  CounterIncr,  // var := var + 1
};

enum class EdgeLabel { True, False, Uncond };

const char* to_string(NodeKind k);
const char* to_string(EdgeLabel l);

struct Node {
  int id = 0;
  NodeKind kind = NodeKind::Start;
  std::string var;
  ExprP index;
  ExprP expr;
  int loop = -1;  // LoopHead / CounterInit / CounterIncr: owning loop
};

struct Edge {
  int src = 0;
  int dst = 0;
  EdgeLabel label = EdgeLabel::Uncond;
  bool back = false;
};

struct Loop {
  int index = 0;  // pre-order position
  int head = -1;
  int init = -1;  // CounterInit, when built from an AST
  int incr = -1;  // CounterIncr, when built from an AST
  std::string counter;
  ExprP trip;
  StmtP stmt;       // originating For statement, when built from an AST
  int parent = -1;  // enclosing loop
  std::set<int> nodes;
};

class Cfg {
 public:
  int add_node(NodeKind kind, std::string var = {}, ExprP expr = nullptr,
               ExprP index = nullptr);
  void add_edge(int src, int dst, EdgeLabel label = EdgeLabel::Uncond);

  /// Classifies back-edges, computes natural loops and the topological order
  /// of the back-edge-free graph. Call once all nodes and edges exist.
  void finalize();

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Loop>& loops() const { return loops_; }
  const Node& node(int id) const { return nodes_.at(id); }
  int start() const { return start_; }
  int end() const { return end_; }

  std::vector<int> out_edges(int n) const;  // edge indices
  std::vector<int> in_edges(int n) const;
  std::vector<int> cutpoints() const;       // loop heads, ascending id
  bool is_cutpoint(int n) const;
  int topo_rank(int n) const { return rank_.at(n); }

  /// "S", "E", or "h<k>" for the k-th loop head (1-based, pre-order).
  std::string cut_label(int n) const;

  /// Loop whose head is n, or -1.
  int loop_of_head(int n) const;

  std::string to_dot(const std::string& name = "cfg") const;

 private:
  friend Cfg build_cfg(const frontend::Program& p);

  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_, in_;
  std::vector<Loop> loops_;
  std::vector<int> rank_;
  int start_ = -1;
  int end_ = -1;
};

Cfg build_cfg(const frontend::Program& p);

struct Segment {
  int id = 0;
  int source = 0;          // Start or a loop head
  int sink = 0;            // forward sink (head or End), or the back-edge source
  int target = 0;          // cut-point or End control reaches next
  bool closes_loop = false;  // sink leaves through a back-edge
  std::set<int> nodes;
  std::vector<int> edges;  // indices into Cfg::edges(), never back-edges
  int loop = -1;           // innermost enclosing loop, -1 for none
  std::string ell;         // its counter, empty for none
  std::vector<std::string> outer_vars;  // counters of enclosing loops, outermost first
  std::string label;       // e.g. "h1->h1"

  std::string file_label() const;  // "h1-h1"
};

std::vector<Segment> segments(const Cfg& c);

}  // namespace tileproof::cfg
