#include "tileproof/cfg/cfg.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "tileproof/frontend/printer.hpp"

namespace tileproof::cfg {

using namespace frontend;

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Start: return "start";
    case NodeKind::End: return "end";
    case NodeKind::Assign: return "assign";
    case NodeKind::Store: return "store";
    case NodeKind::Assume: return "assume";
    case NodeKind::Cond: return "cond";
    case NodeKind::LoopHead: return "loophead";
    case NodeKind::CounterInit: return "counterinit";
    case NodeKind::CounterIncr: return "counterincr";
  }
  return "?";
}

const char* to_string(EdgeLabel l) {
  switch (l) {
    case EdgeLabel::True: return "tt";
    case EdgeLabel::False: return "ff";
    case EdgeLabel::Uncond: return "U";
  }
  return "?";
}

int Cfg::add_node(NodeKind kind, std::string var, ExprP expr, ExprP index) {
  Node n;
  n.id = static_cast<int>(nodes_.size());
  n.kind = kind;
  n.var = std::move(var);
  n.expr = std::move(expr);
  n.index = std::move(index);
  nodes_.push_back(std::move(n));
  return nodes_.back().id;
}

void Cfg::add_edge(int src, int dst, EdgeLabel label) {
  edges_.push_back(Edge{src, dst, label, false});
}

std::vector<int> Cfg::out_edges(int n) const { return out_.at(n); }
std::vector<int> Cfg::in_edges(int n) const { return in_.at(n); }

std::vector<int> Cfg::cutpoints() const {
  std::vector<int> out;
  for (const auto& l : loops_) out.push_back(l.head);
  std::sort(out.begin(), out.end());
  return out;
}

bool Cfg::is_cutpoint(int n) const { return loop_of_head(n) >= 0; }

int Cfg::loop_of_head(int n) const {
  for (const auto& l : loops_)
    if (l.head == n) return l.index;
  return -1;
}

std::string Cfg::cut_label(int n) const {
  if (n == start_) return "S";
  if (n == end_) return "E";
  int l = loop_of_head(n);
  if (l >= 0) return "h" + std::to_string(l + 1);
  return "n" + std::to_string(n);
}

void Cfg::finalize() {
  size_t n = nodes_.size();
  start_ = end_ = -1;
  for (const auto& nd : nodes_) {
    if (nd.kind == NodeKind::Start && start_ < 0) start_ = nd.id;
    if (nd.kind == NodeKind::End && end_ < 0) end_ = nd.id;
  }
  if (start_ < 0 || end_ < 0) throw std::logic_error("cfg needs Start and End nodes");
  out_.assign(n, {});
  in_.assign(n, {});
  for (size_t i = 0; i < edges_.size(); ++i) {
    edges_[i].back = false;
    out_[edges_[i].src].push_back(static_cast<int>(i));
    in_[edges_[i].dst].push_back(static_cast<int>(i));
  }
  auto label_order = [](EdgeLabel l) {
    return l == EdgeLabel::True ? 0 : l == EdgeLabel::Uncond ? 1 : 2;
  };
  for (auto& outs : out_) {
    std::sort(outs.begin(), outs.end(), [&](int a, int b) {
      const Edge& ea = edges_[a];
      const Edge& eb = edges_[b];
      if (label_order(ea.label) != label_order(eb.label))
        return label_order(ea.label) < label_order(eb.label);
      return ea.dst < eb.dst;
    });
  }

  // Iterative DFS; an edge into a node still on the stack is a back-edge.
  std::vector<int> state(n, 0);  // 0 new, 1 on stack, 2 done
  std::vector<std::pair<int, size_t>> stack{{start_, 0}};
  state[start_] = 1;
  while (!stack.empty()) {
    auto& [u, k] = stack.back();
    if (k < out_[u].size()) {
      int e = out_[u][k++];
      int v = edges_[e].dst;
      if (state[v] == 1) {
        edges_[e].back = true;
      } else if (state[v] == 0) {
        state[v] = 1;
        stack.push_back({v, 0});
      }
    } else {
      state[u] = 2;
      stack.pop_back();
    }
  }

  // Natural loops, merged per head, indexed by head id.
  std::map<int, std::set<int>> bodies;
  for (const auto& e : edges_) {
    if (!e.back) continue;
    auto& body = bodies[e.dst];
    body.insert(e.dst);
    std::vector<int> work{e.src};
    while (!work.empty()) {
      int x = work.back();
      work.pop_back();
      if (!body.insert(x).second) continue;
      for (int ie : in_[x]) work.push_back(edges_[ie].src);
    }
  }
  std::vector<Loop> old = std::move(loops_);
  loops_.clear();
  for (auto& [head, body] : bodies) {
    Loop l;
    l.index = static_cast<int>(loops_.size());
    l.head = head;
    l.counter = nodes_[head].var;
    l.trip = nodes_[head].expr;
    l.nodes = std::move(body);
    for (const auto& o : old)
      if (o.head == head) {
        l.stmt = o.stmt;
        l.init = o.init;
        l.incr = o.incr;
      }
    loops_.push_back(std::move(l));
  }
  for (auto& l : loops_) {
    size_t best = SIZE_MAX;
    for (const auto& o : loops_) {
      if (o.index == l.index || o.nodes.size() <= l.nodes.size()) continue;
      if (!std::includes(o.nodes.begin(), o.nodes.end(), l.nodes.begin(), l.nodes.end()))
        continue;
      if (o.nodes.size() < best) {
        best = o.nodes.size();
        l.parent = o.index;
      }
    }
  }

  // Kahn's algorithm on the forward graph, smallest id first.
  std::vector<int> indeg(n, 0);
  for (const auto& e : edges_)
    if (!e.back) ++indeg[e.dst];
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.push(static_cast<int>(i));
  rank_.assign(n, -1);
  int r = 0;
  while (!ready.empty()) {
    int u = ready.top();
    ready.pop();
    rank_[u] = r++;
    for (int e : out_[u]) {
      if (edges_[e].back) continue;
      if (--indeg[edges_[e].dst] == 0) ready.push(edges_[e].dst);
    }
  }
  if (r != static_cast<int>(n)) throw std::logic_error("forward graph is not acyclic");
}

std::string Cfg::to_dot(const std::string& name) const {
  std::ostringstream os;
  os << "digraph \"" << name << "\" {\n";
  for (const auto& nd : nodes_) {
    std::string text;
    switch (nd.kind) {
      case NodeKind::Start: text = "Start"; break;
      case NodeKind::End: text = "End"; break;
      case NodeKind::Assign: text = nd.var + " := " + frontend::to_string(nd.expr); break;
      case NodeKind::Store:
        text = nd.var + "[" + frontend::to_string(nd.index) + "] := " + frontend::to_string(nd.expr);
        break;
      case NodeKind::Assume: text = "assume " + frontend::to_string(nd.expr); break;
      case NodeKind::Cond: text = frontend::to_string(nd.expr); break;
      case NodeKind::LoopHead:
        text = nd.var + " < " + (nd.expr ? frontend::to_string(nd.expr) : "?");
        break;
      case NodeKind::CounterInit: text = nd.var + " := 0"; break;
      case NodeKind::CounterIncr: text = nd.var + " := " + nd.var + " + 1"; break;
    }
    std::string esc;
    for (char c : text) {
      if (c == '"' || c == '\\') esc += '\\';
      esc += c;
    }
    os << "  n" << nd.id << " [label=\"" << nd.id << ": " << esc << "\"";
    if (nd.kind == NodeKind::Cond || nd.kind == NodeKind::LoopHead) os << " shape=diamond";
    if (is_cutpoint(nd.id)) os << " peripheries=2";
    os << "];\n";
  }
  for (const auto& e : edges_) {
    os << "  n" << e.src << " -> n" << e.dst << " [label=\"" << to_string(e.label) << "\"";
    if (e.back) os << " style=dashed";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

namespace {

struct Builder {
  Cfg& g;
  std::vector<std::tuple<int, int, int, StmtP>> loop_info;  // head, init, incr, stmt
  using Pending = std::vector<std::pair<int, EdgeLabel>>;

  void connect(const Pending& from, int to) {
    for (const auto& [src, lab] : from) g.add_edge(src, to, lab);
  }

  Pending build(const StmtP& s, Pending in) {
    switch (s->kind) {
      case StmtKind::Skip: return in;
      case StmtKind::Assign: {
        int n = g.add_node(NodeKind::Assign, s->var, s->expr);
        connect(in, n);
        return {{n, EdgeLabel::Uncond}};
      }
      case StmtKind::Store: {
        int n = g.add_node(NodeKind::Store, s->var, s->expr, s->index);
        connect(in, n);
        return {{n, EdgeLabel::Uncond}};
      }
      case StmtKind::Assume: {
        int n = g.add_node(NodeKind::Assume, "", s->expr);
        connect(in, n);
        return {{n, EdgeLabel::Uncond}};
      }
      case StmtKind::If: {
        int c = g.add_node(NodeKind::Cond, "", s->expr);
        connect(in, c);
        Pending t = build(s->children[0], {{c, EdgeLabel::True}});
        Pending f = build(s->children[1], {{c, EdgeLabel::False}});
        t.insert(t.end(), f.begin(), f.end());
        return t;
      }
      case StmtKind::Seq: {
        for (const auto& c : s->children) in = build(c, std::move(in));
        return in;
      }
      case StmtKind::For: {
        int init = g.add_node(NodeKind::CounterInit, s->var);
        connect(in, init);
        int head = g.add_node(NodeKind::LoopHead, s->var, s->expr);
        g.add_edge(init, head);
        Pending body = build(s->children[0], {{head, EdgeLabel::True}});
        int incr = g.add_node(NodeKind::CounterIncr, s->var);
        connect(body, incr);
        g.add_edge(incr, head);
        loop_info.emplace_back(head, init, incr, s);
        return {{head, EdgeLabel::False}};
      }
    }
    return in;
  }
};

}  // namespace

Cfg build_cfg(const Program& p) {
  Cfg g;
  Builder b{g, {}};
  int start = g.add_node(NodeKind::Start);
  auto pending = b.build(p.body ? p.body : mk_skip(), {{start, EdgeLabel::Uncond}});
  int end = g.add_node(NodeKind::End);
  b.connect(pending, end);
  g.finalize();
  // Attach AST provenance; loops are indexed by head id, which follows pre-order.
  for (auto& [head, init, incr, stmt] : b.loop_info) {
    Loop& l = g.loops_[g.loop_of_head(head)];
    l.init = init;
    l.incr = incr;
    l.stmt = stmt;
  }
  for (const auto& l : g.loops_) {
    g.nodes_[l.head].loop = l.index;
    if (l.init >= 0) g.nodes_[l.init].loop = l.index;
    if (l.incr >= 0) g.nodes_[l.incr].loop = l.index;
  }
  return g;
}

std::string Segment::file_label() const {
  std::string out = label;
  auto pos = out.find("->");
  if (pos != std::string::npos) out.replace(pos, 2, "-");
  return out;
}

std::vector<Segment> segments(const Cfg& c) {
  std::vector<int> sources{c.start()};
  for (int h : c.cutpoints()) sources.push_back(h);
  const auto& edges = c.edges();
  auto is_stop = [&](int n) { return n == c.end() || c.is_cutpoint(n); };

  // Nodes of `region` that reach a member of `goals` without leaving region.
  auto backward = [&](const std::set<int>& region, const std::set<int>& goals, int src) {
    std::set<int> seen;
    std::vector<int> work(goals.begin(), goals.end());
    while (!work.empty()) {
      int x = work.back();
      work.pop_back();
      if (!region.count(x) || !seen.insert(x).second) continue;
      if (x == src) continue;
      for (int e : c.in_edges(x)) {
        if (edges[e].back) continue;
        int y = edges[e].src;
        if (y != src && is_stop(y)) continue;
        work.push_back(y);
      }
    }
    return seen;
  };
  auto edges_within = [&](const std::set<int>& ns, int src, const std::set<int>& sinks) {
    std::vector<int> out;
    for (size_t i = 0; i < edges.size(); ++i) {
      const Edge& e = edges[i];
      if (e.back || !ns.count(e.src) || !ns.count(e.dst)) continue;
      if (e.src != src && (sinks.count(e.src) || is_stop(e.src))) continue;
      out.push_back(static_cast<int>(i));
    }
    return out;
  };

  std::vector<Segment> out;
  for (int src : sources) {
    std::set<int> region{src};
    std::vector<int> work{src};
    std::set<int> fwd_sinks;
    std::map<int, std::set<int>> closing;  // back-edge target -> back-edge sources
    while (!work.empty()) {
      int x = work.back();
      work.pop_back();
      for (int e : c.out_edges(x)) {
        const Edge& ed = edges[e];
        if (ed.back) {
          closing[ed.dst].insert(x);
          continue;
        }
        int y = ed.dst;
        if (is_stop(y)) {
          fwd_sinks.insert(y);
          region.insert(y);
          continue;
        }
        if (region.insert(y).second) work.push_back(y);
      }
    }
    for (int t : fwd_sinks) {
      Segment s;
      s.source = src;
      s.sink = s.target = t;
      s.nodes = backward(region, {t}, src);
      s.edges = edges_within(s.nodes, src, {t});
      out.push_back(std::move(s));
    }
    // One closing segment per back-edge target; groups sharing an edge merge.
    std::vector<Segment> groups;
    for (const auto& [tgt, terms] : closing) {
      Segment s;
      s.source = src;
      s.closes_loop = true;
      s.target = tgt;
      s.nodes = backward(region, terms, src);
      s.edges = edges_within(s.nodes, src, {});
      s.sink = *std::max_element(terms.begin(), terms.end(), [&](int a, int b) {
        return c.topo_rank(a) < c.topo_rank(b);
      });
      groups.push_back(std::move(s));
    }
    bool merged = true;
    while (merged) {
      merged = false;
      for (size_t i = 0; i < groups.size() && !merged; ++i) {
        for (size_t j = i + 1; j < groups.size() && !merged; ++j) {
          std::set<int> ei(groups[i].edges.begin(), groups[i].edges.end());
          bool share = false;
          for (int e : groups[j].edges) share = share || ei.count(e);
          if (!share) continue;
          Segment& a = groups[i];
          Segment& b = groups[j];
          a.nodes.insert(b.nodes.begin(), b.nodes.end());
          a.edges = edges_within(a.nodes, src, {});
          if (b.target == src || (a.target != src && c.topo_rank(b.sink) > c.topo_rank(a.sink))) {
            a.target = b.target;
            a.sink = b.sink;
          }
          groups.erase(groups.begin() + static_cast<long>(j));
          merged = true;
        }
      }
    }
    for (auto& g : groups) out.push_back(std::move(g));
  }

  for (auto& s : out) {
    for (const auto& l : c.loops()) {
      if (!std::includes(l.nodes.begin(), l.nodes.end(), s.nodes.begin(), s.nodes.end()))
        continue;
      if (s.loop < 0 || l.nodes.size() < c.loops()[s.loop].nodes.size()) s.loop = l.index;
    }
    if (s.loop >= 0) {
      s.ell = c.loops()[s.loop].counter;
      for (int p = c.loops()[s.loop].parent; p >= 0; p = c.loops()[p].parent)
        s.outer_vars.insert(s.outer_vars.begin(), c.loops()[p].counter);
    }
    s.label = c.cut_label(s.source) + "->" + c.cut_label(s.target);
  }
  std::sort(out.begin(), out.end(), [&](const Segment& a, const Segment& b) {
    if (c.topo_rank(a.source) != c.topo_rank(b.source))
      return c.topo_rank(a.source) < c.topo_rank(b.source);
    if (a.closes_loop != b.closes_loop) return a.closes_loop;
    return c.topo_rank(a.sink) < c.topo_rank(b.sink);
  });
  for (size_t i = 0; i < out.size(); ++i) out[i].id = static_cast<int>(i);
  return out;
}

}  // namespace tileproof::cfg
