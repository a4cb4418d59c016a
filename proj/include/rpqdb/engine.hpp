#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rpqdb/algebra.hpp"
#include "rpqdb/graph.hpp"
#include "rpqdb/parser.hpp"
#include "rpqdb/planner.hpp"

namespace rpqdb {

class TimeoutError : public std::runtime_error {
 public:
  TimeoutError() : std::runtime_error("query timed out") {}
};

/// Shared state of one evaluation: the graph, the caps, an optional
/// cooperative deadline and recursion diagnostics.
struct ExecContext {
  const Graph& g;
  EvalCaps caps;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  RecursionStats rec_stats;
  uint32_t tick_counter = 0;

  void tick() {
    if (!deadline) return;
    if ((++tick_counter & 0x3ff) != 0) return;
    if (std::chrono::steady_clock::now() > *deadline) throw TimeoutError();
  }
};

namespace physical {

/// Pull-based operator: next() yields paths until exhaustion; pulling past
/// the end keeps returning false. All work happens on demand.
class Operator {
 public:
  explicit Operator(ExecContext& ctx) : ctx_(ctx) {}
  virtual ~Operator() = default;
  virtual bool next(Path& out) = 0;

 protected:
  ExecContext& ctx_;
};

using OperatorPtr = std::unique_ptr<Operator>;

/// Evaluates a source-side condition directly against a node, skipping path
/// construction. Only And/PropCmp/LabelCmp trees anchored at FIRST qualify.
inline bool eval_on_node(NodeIndex v, const Condition& c, const Graph& g) {
  switch (c.kind) {
    case Condition::Kind::And:
      return eval_on_node(v, *c.lhs, g) && eval_on_node(v, *c.rhs, g);
    case Condition::Kind::LabelCmp:
      return compare(PropertyValue(g.node(v).label), c.op, c.value);
    case Condition::Kind::PropCmp: {
      if (c.property == "@id")
        return compare(PropertyValue(g.node(v).id), c.op, c.value);
      if (c.property == "@label")
        return compare(PropertyValue(g.node(v).label), c.op, c.value);
      const PropertyValue* pv = g.node(v).property(c.property);
      return pv && compare(*pv, c.op, c.value);
    }
    default:
      return false;  // not reachable for fused conditions
  }
}

inline bool node_fusible(const Condition& c) {
  switch (c.kind) {
    case Condition::Kind::And:
      return node_fusible(*c.lhs) && node_fusible(*c.rhs);
    case Condition::Kind::PropCmp:
    case Condition::Kind::LabelCmp:
      return c.anchor.kind == Anchor::Kind::First;
    default:
      return false;
  }
}

/// If the condition pins FIRST().@id to a constant, a scan can jump to that
/// single vertex through the node catalog.
inline std::optional<NodeIndex> pinned_source(const Condition& c,
                                              const Graph& g) {
  if (c.kind == Condition::Kind::And) {
    if (auto v = pinned_source(*c.lhs, g)) return v;
    return pinned_source(*c.rhs, g);
  }
  if (c.kind == Condition::Kind::PropCmp && c.op == CmpOp::Eq &&
      c.property == "@id" && c.value.is_text())
    return g.node_index(c.value.text());
  return std::nullopt;
}

/// Demand-driven first-node index over a sub-plan: from(v) yields exactly
/// the sub-plan's result paths that start at v, in the sub-plan's order,
/// computed lazily and memoized. Scans read the CSR partitions directly;
/// joins and recursions compose per node, so a seeded consumer only ever
/// touches the part of the graph it reaches.
class SegmentSource {
 public:
  SegmentSource(const PlanNode& plan, ExecContext& ctx)
      : plan_(plan), ctx_(ctx) {
    for (const PlanPtr& c : plan.children)
      kids_.push_back(std::make_unique<SegmentSource>(*c, ctx));
    if (plan.kind == PlanNode::Kind::Scan1) {
      labels_.push_back(plan.label);
    } else if (plan.kind == PlanNode::Kind::NegScan1) {
      for (const std::string& l : ctx.g.edge_labels())
        if (l != plan.label) labels_.push_back(l);
    } else if (plan.kind == PlanNode::Kind::Selection) {
      fused_ = node_fusible(*plan.condition);
    }
  }

  const std::vector<Path>& from(NodeIndex v) {
    auto it = memo_.find(v);
    if (it != memo_.end()) return it->second;
    return memo_.emplace(v, compute(v)).first->second;
  }

 private:
  std::vector<Path> compute(NodeIndex v) {
    using Kind = PlanNode::Kind;
    std::vector<Path> out;
    switch (plan_.kind) {
      case Kind::Scan0:
        out.push_back(Path::at(v));
        break;
      case Kind::Scan1:
      case Kind::NegScan1:
        for (const std::string& l : labels_)
          for (auto [e, t] : ctx_.g.out_edges(v, l))
            out.push_back(Path::hop(v, e, t));
        break;
      case Kind::Selection: {
        if (fused_ && !eval_on_node(v, *plan_.condition, ctx_.g)) break;
        const std::vector<Path>& in = kids_[0]->from(v);
        if (fused_) {
          out = in;
          break;
        }
        for (const Path& p : in)
          if (eval_condition(p, *plan_.condition, ctx_.g)) out.push_back(p);
        break;
      }
      case Kind::Union: {
        PathSet set;
        for (const Path& p : kids_[0]->from(v)) set.insert(p);
        for (const Path& p : kids_[1]->from(v)) set.insert(p);
        out = set.paths();
        break;
      }
      case Kind::Join: {
        PathSet set;
        // Copy: the kid's memo may rehash while the right side is probed.
        std::vector<Path> left = kids_[0]->from(v);
        for (const Path& p : left) {
          ctx_.tick();
          for (const Path& q : kids_[1]->from(p.last())) {
            if (p.length() + q.length() > ctx_.caps.max_path_length) continue;
            Path r = concat(p, q);
            if (satisfies(r, plan_.semantic)) set.insert(std::move(r));
          }
        }
        out = set.paths();
        break;
      }
      case Kind::Recursive:
      case Kind::RecursiveSeeded: {
        SegmentSource& seed = *kids_[0];
        SegmentSource& base =
            plan_.kind == Kind::RecursiveSeeded ? *kids_[1] : *kids_[0];
        PathSet r;
        for (const Path& p : seed.from(v))
          if (p.length() <= ctx_.caps.max_path_length &&
              satisfies(p, plan_.semantic))
            r.insert(p);
        size_t frontier_begin = 0;
        size_t rounds = 0;
        while (rounds < ctx_.caps.max_recursion_depth) {
          size_t frontier_end = r.size();
          if (frontier_begin == frontier_end) break;
          bool grew = false;
          for (size_t i = frontier_begin; i < frontier_end; ++i) {
            ctx_.tick();
            // Copy: r grows while base.from() may also rehash.
            Path p = r[i];
            for (const Path& q : base.from(p.last())) {
              if (p.length() + q.length() > ctx_.caps.max_path_length) {
                ctx_.rec_stats.hit_length_cap = true;
                continue;
              }
              Path cand = concat(p, q);
              if (!satisfies(cand, plan_.semantic)) continue;
              grew |= r.insert(std::move(cand));
            }
          }
          frontier_begin = frontier_end;
          if (!grew) break;
          ++rounds;
        }
        if (rounds == ctx_.caps.max_recursion_depth &&
            frontier_begin < r.size())
          ctx_.rec_stats.hit_depth_cap = true;
        ctx_.rec_stats.rounds = std::max(ctx_.rec_stats.rounds, rounds);
        out = r.paths();
        break;
      }
      case Kind::Projection:
        throw std::logic_error("Projection cannot feed a join or recursion");
    }
    return out;
  }

  const PlanNode& plan_;
  ExecContext& ctx_;
  std::vector<std::unique_ptr<SegmentSource>> kids_;
  std::vector<std::string> labels_;
  bool fused_ = false;
  std::unordered_map<NodeIndex, std::vector<Path>> memo_;
};

/// Zero-length paths, optionally restricted by a fused node condition.
class Scan0 : public Operator {
 public:
  Scan0(ExecContext& ctx, ConditionPtr filter)
      : Operator(ctx), filter_(std::move(filter)) {}

  bool next(Path& out) override {
    while (v_ < ctx_.g.node_count()) {
      ctx_.tick();
      NodeIndex v = v_++;
      if (filter_ && !eval_on_node(v, *filter_, ctx_.g)) continue;
      out = Path::at(v);
      return true;
    }
    return false;
  }

 private:
  ConditionPtr filter_;
  NodeIndex v_ = 0;
};

/// Length-1 paths over one or more label partitions, in label order then
/// CSR order. A fused source condition skips whole adjacency lists; a
/// pinned @id source collapses the scan to a single vertex.
class Scan1 : public Operator {
 public:
  Scan1(ExecContext& ctx, std::vector<std::string> labels,
        ConditionPtr filter)
      : Operator(ctx), labels_(std::move(labels)), filter_(std::move(filter)) {
    if (filter_) {
      if (auto v = pinned_source(*filter_, ctx_.g)) {
        if (eval_on_node(*v, *filter_, ctx_.g))
          only_source_ = *v;
        else
          dead_ = true;  // pinned vertex fails another conjunct
      }
    }
    advance_label();
  }

  bool next(Path& out) override {
    while (part_) {
      if (edge_pos_ < edge_end_) {
        auto [e, t] = part_->columns[edge_pos_++];
        out = Path::hop(cur_v_, e, t);
        return true;
      }
      if (!advance_vertex()) advance_label();
    }
    return false;
  }

 private:
  void advance_label() {
    part_ = nullptr;
    if (dead_) return;
    while (label_pos_ < labels_.size()) {
      const CsrPartition* part = ctx_.g.partition(labels_[label_pos_++]);
      if (!part) continue;
      part_ = part;
      if (only_source_) {
        v_ = *only_source_;
        v_end_ = v_ + 1;
      } else {
        v_ = 0;
        v_end_ = static_cast<NodeIndex>(ctx_.g.node_count());
      }
      edge_pos_ = edge_end_ = 0;
      if (advance_vertex()) return;
      part_ = nullptr;
    }
  }
  bool advance_vertex() {
    while (v_ < v_end_) {
      ctx_.tick();
      NodeIndex v = v_++;
      if (filter_ && !only_source_ && !eval_on_node(v, *filter_, ctx_.g))
        continue;
      if (part_->offsets[v] == part_->offsets[v + 1]) continue;
      cur_v_ = v;
      edge_pos_ = part_->offsets[v];
      edge_end_ = part_->offsets[v + 1];
      return true;
    }
    return false;
  }

  std::vector<std::string> labels_;
  ConditionPtr filter_;
  std::optional<NodeIndex> only_source_;
  bool dead_ = false;
  const CsrPartition* part_ = nullptr;
  size_t label_pos_ = 0;
  NodeIndex v_ = 0, v_end_ = 0, cur_v_ = 0;
  size_t edge_pos_ = 0, edge_end_ = 0;
};

class Selection : public Operator {
 public:
  Selection(ExecContext& ctx, OperatorPtr child, const Condition& cond)
      : Operator(ctx), child_(std::move(child)), cond_(cond) {}

  bool next(Path& out) override {
    Path p;
    while (child_->next(p)) {
      ctx_.tick();
      if (eval_condition(p, cond_, ctx_.g)) {
        out = std::move(p);
        return true;
      }
    }
    return false;
  }

 private:
  OperatorPtr child_;
  const Condition& cond_;
};

class Union : public Operator {
 public:
  Union(ExecContext& ctx, OperatorPtr a, OperatorPtr b)
      : Operator(ctx), a_(std::move(a)), b_(std::move(b)) {}

  bool next(Path& out) override {
    Path p;
    while (true) {
      ctx_.tick();
      Operator* src = on_b_ ? b_.get() : a_.get();
      if (!src->next(p)) {
        if (on_b_) return false;
        on_b_ = true;
        continue;
      }
      if (seen_.insert(p)) {
        out = std::move(p);
        return true;
      }
    }
  }

 private:
  OperatorPtr a_, b_;
  PathSet seen_;
  bool on_b_ = false;
};

/// Join: the left side streams; compatible right-side segments come from the
/// demand-driven index (a-major, b-minor order).
class Join : public Operator {
 public:
  Join(ExecContext& ctx, OperatorPtr left, const PlanNode& right,
       PathSemantic tau)
      : Operator(ctx), left_(std::move(left)), right_(right, ctx), tau_(tau) {}

  bool next(Path& out) override {
    while (true) {
      ctx_.tick();
      if (match_pos_ < matches_.size()) {
        const Path& q = matches_[match_pos_++];
        if (cur_.length() + q.length() > ctx_.caps.max_path_length) continue;
        Path r = concat(cur_, q);
        if (!satisfies(r, tau_)) continue;
        if (!emitted_.insert(r)) continue;
        out = std::move(r);
        return true;
      }
      if (!left_->next(cur_)) return false;
      matches_ = right_.from(cur_.last());
      match_pos_ = 0;
    }
  }

 private:
  OperatorPtr left_;
  SegmentSource right_;
  PathSemantic tau_;
  PathSet emitted_;
  Path cur_;
  std::vector<Path> matches_;  // copy: the memo may rehash between pulls
  size_t match_pos_ = 0;
};

/// Transitive expansion by semi-naive fixpoint rounds, produced on demand so
/// a LIMIT near the root stops the expansion early. The seed operator fills
/// R0; extensions come from the base's demand-driven segment index.
class Recursive : public Operator {
 public:
  Recursive(ExecContext& ctx, OperatorPtr seed, const PlanNode& base,
            PathSemantic tau)
      : Operator(ctx), tau_(tau), seed_child_(std::move(seed)),
        base_(base, ctx) {}

  bool next(Path& out) override {
    if (!opened_) open();
    while (emit_pos_ >= r_.size()) {
      if (!expand_round()) return false;
    }
    out = r_[emit_pos_++];
    return true;
  }

 private:
  void open() {
    opened_ = true;
    Path p;
    while (seed_child_->next(p)) {
      ctx_.tick();
      if (p.length() <= ctx_.caps.max_path_length && satisfies(p, tau_))
        r_.insert(std::move(p));
    }
    seed_child_.reset();
  }

  bool expand_round() {
    if (frontier_begin_ >= r_.size()) return false;
    if (rounds_ >= ctx_.caps.max_recursion_depth) {
      ctx_.rec_stats.hit_depth_cap = true;
      return false;
    }
    size_t frontier_end = r_.size();
    bool grew = false;
    for (size_t i = frontier_begin_; i < frontier_end; ++i) {
      ctx_.tick();
      Path p = r_[i];  // copy: r_ grows during the loop
      for (const Path& q : base_.from(p.last())) {
        if (p.length() + q.length() > ctx_.caps.max_path_length) {
          ctx_.rec_stats.hit_length_cap = true;
          continue;
        }
        Path cand = concat(p, q);
        if (!satisfies(cand, tau_)) continue;
        grew |= r_.insert(std::move(cand));
      }
    }
    frontier_begin_ = frontier_end;
    ++rounds_;
    ctx_.rec_stats.rounds = std::max(ctx_.rec_stats.rounds, rounds_);
    return grew;
  }

  PathSemantic tau_;
  OperatorPtr seed_child_;
  SegmentSource base_;
  PathSet r_;
  bool opened_ = false;
  size_t emit_pos_ = 0;
  size_t frontier_begin_ = 0;
  size_t rounds_ = 0;
};

}  // namespace physical

/// A compiled query: the operator tree plus the projection spec at the root.
struct PhysicalPlan {
  std::unique_ptr<ExecContext> ctx;
  PlanPtr plan;  // owns the nodes the operators reference
  physical::OperatorPtr root;
  std::vector<ProjectionTerm> terms;
  std::optional<size_t> limit;
  PathSemantic semantic = PathSemantic::Walk;
};

namespace detail {

inline std::vector<std::string> complement_labels(const Graph& g,
                                                  const std::string& label) {
  std::vector<std::string> out;
  for (const std::string& l : g.edge_labels())
    if (l != label) out.push_back(l);
  return out;
}

inline physical::OperatorPtr compile_node(const PlanNode& n,
                                          ExecContext& ctx) {
  using Kind = PlanNode::Kind;
  using namespace physical;
  switch (n.kind) {
    case Kind::Scan0:
      return std::make_unique<Scan0>(ctx, nullptr);
    case Kind::Scan1:
      return std::make_unique<Scan1>(ctx, std::vector<std::string>{n.label},
                                     nullptr);
    case Kind::NegScan1:
      return std::make_unique<Scan1>(ctx, complement_labels(ctx.g, n.label),
                                     nullptr);
    case Kind::Selection: {
      const PlanNode& c = *n.children[0];
      // Source-only conditions fuse into scans and filter vertices before
      // any path is built.
      if (node_fusible(*n.condition)) {
        if (c.kind == Kind::Scan0)
          return std::make_unique<Scan0>(ctx, n.condition->clone());
        if (c.kind == Kind::Scan1)
          return std::make_unique<Scan1>(
              ctx, std::vector<std::string>{c.label}, n.condition->clone());
        if (c.kind == Kind::NegScan1)
          return std::make_unique<Scan1>(
              ctx, complement_labels(ctx.g, c.label), n.condition->clone());
      }
      return std::make_unique<Selection>(ctx, compile_node(c, ctx),
                                         *n.condition);
    }
    case Kind::Union:
      return std::make_unique<Union>(ctx, compile_node(*n.children[0], ctx),
                                     compile_node(*n.children[1], ctx));
    case Kind::Join:
      return std::make_unique<Join>(ctx, compile_node(*n.children[0], ctx),
                                    *n.children[1], n.semantic);
    case Kind::Recursive:
      return std::make_unique<Recursive>(
          ctx, compile_node(*n.children[0], ctx), *n.children[0], n.semantic);
    case Kind::RecursiveSeeded:
      return std::make_unique<Recursive>(
          ctx, compile_node(*n.children[0], ctx), *n.children[1], n.semantic);
    case Kind::Projection:
      throw std::logic_error("Projection must be the plan root");
  }
  throw std::logic_error("unreachable plan kind");
}

}  // namespace detail

/// Binds a logical plan to a graph and caps. The plan is cloned into the
/// physical plan, which keeps it alive for the operators.
inline PhysicalPlan compile(
    const PlanNode& plan, const Graph& g, const EvalCaps& caps,
    std::optional<std::chrono::steady_clock::time_point> deadline =
        std::nullopt) {
  if (plan.kind != PlanNode::Kind::Projection)
    throw std::logic_error("plan root must be a Projection");
  PhysicalPlan pp;
  pp.ctx = std::make_unique<ExecContext>(ExecContext{g, caps, deadline, {}, 0});
  pp.plan = plan.clone();
  pp.root = detail::compile_node(*pp.plan->children[0], *pp.ctx);
  pp.terms = pp.plan->terms;
  pp.limit = pp.plan->limit;
  pp.semantic = pp.plan->semantic;
  return pp;
}

/// Ordered result rows plus run diagnostics.
struct ResultSet {
  std::vector<Row> rows;
  double elapsed_seconds = 0.0;
  bool recursion_truncated = false;
  size_t root_paths_pulled = 0;

  /// Paths of the whole-path cells, in row order (first path cell per row).
  std::vector<Path> paths() const {
    std::vector<Path> out;
    for (const Row& r : rows)
      for (const Cell& c : r)
        if (c.is_path()) {
          out.push_back(c.path());
          break;
        }
    return out;
  }
};

/// Drains the plan: pulls at most min(LIMIT, session limit) paths from the
/// root and projects each into a row. Results must satisfy the effective
/// semantic (scans alone never check it, e.g. a self-loop under ACYCLIC).
inline ResultSet execute(PhysicalPlan& pp) {
  auto start = std::chrono::steady_clock::now();
  ResultSet rs;
  size_t cap = pp.ctx->caps.result_limit;
  if (pp.limit && *pp.limit < cap) cap = *pp.limit;
  Path p;
  while (rs.rows.size() < cap && pp.root->next(p)) {
    ++rs.root_paths_pulled;
    if (!satisfies(p, pp.semantic)) continue;
    Row row;
    row.reserve(pp.terms.size());
    for (const ProjectionTerm& t : pp.terms)
      row.push_back(project_term(p, t, pp.ctx->g));
    rs.rows.push_back(std::move(row));
  }
  rs.recursion_truncated = pp.ctx->rec_stats.truncated();
  rs.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return rs;
}

struct RunConfig {
  PathSemantic default_semantic = PathSemantic::Walk;
  EvalCaps caps;
  bool optimize_plans = true;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Full pipeline: parse, translate, optionally optimize, compile, execute.
inline ResultSet run(const std::string& query_text, const Graph& g,
                     const RunConfig& cfg = {}) {
  ParsedQuery q = parse_query(query_text);
  PlanPtr plan = translate(q, cfg.default_semantic);
  if (cfg.optimize_plans) plan = optimize(std::move(plan));
  PhysicalPlan pp = compile(*plan, g, cfg.caps, cfg.deadline);
  return execute(pp);
}

}  // namespace rpqdb
