#include "cpsp/sp.hpp"

#include <functional>
#include <optional>

#include "cpsp/lp.hpp"
#include "text_util.hpp"

namespace cpsp {

namespace {

// Pre-order traversal carrying the inequalities on the root path.  visit
// returns a non-empty string to abort with that reason.
using Visitor = std::function<std::string(std::size_t id, std::size_t order,
                                          const std::vector<LinIneq>& path)>;

Verdict traverse(const SpProof& p, const Visitor& visit) {
  struct Frame {
    std::size_t id, depth;
    std::optional<LinIneq> edge;
  };
  if (p.root >= p.nodes.size()) return Verdict::fail(0, "root index out of range");
  std::vector<Frame> stack{{p.root, 0, std::nullopt}};
  std::vector<LinIneq> path;
  std::vector<bool> seen(p.nodes.size(), false);
  std::size_t order = 0;
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (seen[f.id]) return Verdict::fail(order, "node reached twice (not a tree)");
    seen[f.id] = true;
    path.resize(f.depth == 0 ? 0 : f.depth - 1);
    if (f.edge) path.push_back(std::move(*f.edge));
    const SpNode& node = p.nodes[f.id];
    if (!node.leaf) {
      if (node.a.size() != p.dim()) return Verdict::fail(order, "query dimension mismatch");
      if (node.left >= p.nodes.size() || node.right >= p.nodes.size())
        return Verdict::fail(order, "child index out of range");
    }
    if (std::string why = visit(f.id, order, path); !why.empty()) return Verdict::fail(order, why);
    ++order;
    if (!node.leaf) {
      stack.push_back({node.right, f.depth + 1, right_edge(node.a, node.b)});
      stack.push_back({node.left, f.depth + 1, left_edge(node.a, node.b)});
    }
  }
  return Verdict::ok();
}

Polytope node_polytope(const Polytope& axioms, const std::vector<LinIneq>& path) {
  Polytope q = axioms;
  for (const auto& e : path) q.add(e);
  return q;
}

}  // namespace

std::size_t SpProof::add_leaf(std::vector<SpLeafTerm> cert) {
  SpNode n;
  n.leaf = true;
  n.cert = std::move(cert);
  nodes.push_back(std::move(n));
  return nodes.size() - 1;
}

std::size_t SpProof::add_query(IntVec a, Integer b, std::size_t left, std::size_t right) {
  SpNode n;
  n.a = std::move(a);
  n.b = std::move(b);
  n.left = left;
  n.right = right;
  nodes.push_back(std::move(n));
  return nodes.size() - 1;
}

LinIneq left_edge(const IntVec& a, const Integer& b) { return LinIneq(negate(a), 1 - b); }
LinIneq right_edge(const IntVec& a, const Integer& b) { return LinIneq(a, b); }

std::vector<SpLeafTerm> leaf_certificate(const Polytope& axioms, const std::vector<LinIneq>& edges) {
  LpResult r = lp_feasibility(node_polytope(axioms, edges));
  if (!r.infeasible()) throw Error("leaf_certificate: node polytope is not empty");
  std::vector<SpLeafTerm> cert;
  for (std::size_t i = 0; i < r.dual.size(); ++i) {
    if (r.dual[i] == 0) continue;
    if (i < axioms.size()) cert.push_back({SpLeafTerm::Axiom, i, r.dual[i]});
    else cert.push_back({SpLeafTerm::Edge, i - axioms.size(), r.dual[i]});
  }
  return cert;
}

Verdict verify_sp(const SpProof& p) {
  const std::size_t n = p.dim();
  return traverse(p, [&](std::size_t id, std::size_t, const std::vector<LinIneq>& path) {
    const SpNode& node = p.nodes[id];
    if (!node.leaf) return std::string();
    std::vector<LinIneq> rows;
    RatVec lambda;
    for (const auto& t : node.cert) {
      if (t.src == SpLeafTerm::Axiom) {
        if (t.index >= p.axioms.size()) return std::string("leaf cites a missing axiom");
        rows.push_back(p.axioms.ineqs[t.index]);
      } else {
        if (t.index >= path.size()) return std::string("leaf cites an edge not on its path");
        rows.push_back(path[t.index]);
      }
      lambda.push_back(t.lambda);
    }
    for (const auto& l : lambda)
      if (l < 0) return std::string("negative leaf multiplier");
    if (!farkas_check(rows, lambda, LinIneq::contradiction(n)))
      return std::string("leaf multipliers do not yield 0 >= 1");
    return std::string();
  });
}

QueryClass classify_query(const Polytope& p, const IntVec& a, const Integer& b) {
  if (lp_feasibility(p).infeasible()) return {QueryKind::Pathlike, Side::Left};
  if (lp_feasibility(p.with(left_edge(a, b))).infeasible()) return {QueryKind::Pathlike, Side::Left};
  if (lp_feasibility(p.with(right_edge(a, b))).infeasible()) return {QueryKind::Pathlike, Side::Right};
  LpResult lo = lp_optimum(p, a, Direction::Minimize);
  if (lo.optimal() && lo.value >= Rational(b - 1)) return {QueryKind::Facelike, Side::Left};
  LpResult hi = lp_optimum(p, a, Direction::Maximize);
  if (hi.optimal() && hi.value <= Rational(b)) return {QueryKind::Facelike, Side::Right};
  return {QueryKind::General, Side::None};
}

std::vector<QueryClass> classify_all(const SpProof& p) {
  std::vector<QueryClass> out;
  Verdict v = traverse(p, [&](std::size_t id, std::size_t, const std::vector<LinIneq>& path) {
    const SpNode& node = p.nodes[id];
    if (!node.leaf) out.push_back(classify_query(node_polytope(p.axioms, path), node.a, node.b));
    return std::string();
  });
  if (!v) throw Error("classify_all: malformed tree: " + v.reason);
  return out;
}

bool all_facelike(const SpProof& p) {
  for (const auto& c : classify_all(p))
    if (c.kind == QueryKind::General) return false;
  return true;
}

bool all_pathlike(const SpProof& p) {
  for (const auto& c : classify_all(p))
    if (c.kind != QueryKind::Pathlike) return false;
  return true;
}

Rational sp_diameter_bound(const Polytope& p) {
  if (lp_feasibility(p).infeasible()) return 0;
  Rational total = 0;
  for (std::size_t i = 0; i < p.dim; ++i) {
    LpResult lo = lp_optimum(p, unit(p.dim, i), Direction::Minimize);
    LpResult hi = lp_optimum(p, unit(p.dim, i), Direction::Maximize);
    if (!lo.optimal() || !hi.optimal())
      throw Error("sp_diameter_bound: coordinate " + std::to_string(i + 1) + " is unbounded");
    Rational r = hi.value - lo.value;
    total += r * r;
  }
  return total;
}

ProofStats stats(const SpProof& p) {
  ProofStats s;
  Verdict v = traverse(p, [&](std::size_t id, std::size_t, const std::vector<LinIneq>& path) {
    const SpNode& node = p.nodes[id];
    s.depth = std::max(s.depth, path.size());
    if (!node.leaf) {
      ++s.size;
      for (const auto& c : node.a) s.max_coeff_bits = std::max(s.max_coeff_bits, bit_length(c));
    }
    return std::string();
  });
  if (!v) throw Error("stats: malformed tree: " + v.reason);
  return s;
}

SpProof read_sp(std::istream& in, const Polytope& axioms) {
  detail::LineReader r(in);
  std::vector<std::string> t;
  if (!r.next(t) || t.size() != 3 || t[0] != "p" || t[1] != "sp") r.fail("expected 'p sp n'");
  const std::size_t n = detail::to_size(r, t[2]);
  if (n != axioms.dim) r.fail("proof dimension differs from the instance");
  SpProof p;
  p.axioms = axioms;

  auto expect = [&](const char* tok) {
    if (!r.next(t) || t.size() != 1 || t[0] != tok) r.fail(std::string("expected '") + tok + "'");
  };
  std::function<std::size_t()> node = [&]() -> std::size_t {
    if (!r.next(t)) r.fail("unexpected end of proof");
    if (t.size() >= 2 && t[0] == "leaf" && t[1] == ":") {
      std::vector<SpLeafTerm> cert;
      if ((t.size() - 2) % 2 != 0) r.fail("expected 'src|edge idx*lambda' pairs");
      for (std::size_t k = 2; k < t.size(); k += 2) {
        SpLeafTerm term;
        if (t[k] == "src") term.src = SpLeafTerm::Axiom;
        else if (t[k] == "edge") term.src = SpLeafTerm::Edge;
        else r.fail("expected 'src' or 'edge', got '" + t[k] + "'");
        auto star = t[k + 1].find('*');
        if (star == std::string::npos) r.fail("expected 'idx*lambda'");
        std::size_t idx = detail::to_size(r, t[k + 1].substr(0, star));
        if (idx == 0) r.fail("indices are 1-based");
        term.index = idx - 1;
        if (!detail::parse_rational(t[k + 1].substr(star + 1), term.lambda))
          r.fail("bad multiplier '" + t[k + 1] + "'");
        cert.push_back(std::move(term));
      }
      return p.add_leaf(std::move(cert));
    }
    if (t.size() != n + 4 || t[0] != "q" || t[1] != ":" || t[n + 2] != ",")
      r.fail("expected 'q : c1 .. cn , b' or 'leaf : ...'");
    IntVec a(n);
    for (std::size_t i = 0; i < n; ++i)
      if (!detail::parse_integer(t[2 + i], a[i])) r.fail("bad coefficient '" + t[2 + i] + "'");
    Integer b;
    if (!detail::parse_integer(t[n + 3], b)) r.fail("bad threshold '" + t[n + 3] + "'");
    std::size_t id = p.add_query(std::move(a), std::move(b), 0, 0);
    expect("(");
    std::size_t left = node();
    expect(")");
    expect("(");
    std::size_t right = node();
    expect(")");
    p.nodes[id].left = left;
    p.nodes[id].right = right;
    return id;
  };
  p.root = node();
  if (r.next(t)) r.fail("trailing content after the proof tree");
  return p;
}

void write_sp(std::ostream& out, const SpProof& p) {
  out << "p sp " << p.dim() << "\n";
  std::function<void(std::size_t)> node = [&](std::size_t id) {
    const SpNode& q = p.nodes.at(id);
    if (q.leaf) {
      out << "leaf :";
      for (const auto& term : q.cert)
        out << (term.src == SpLeafTerm::Axiom ? " src " : " edge ") << term.index + 1 << "*"
            << to_string(term.lambda);
      out << "\n";
      return;
    }
    out << "q :";
    for (const auto& c : q.a) out << " " << c;
    out << " , " << q.b << "\n(\n";
    node(q.left);
    out << ")\n(\n";
    node(q.right);
    out << ")\n";
  };
  node(p.root);
}

}  // namespace cpsp
