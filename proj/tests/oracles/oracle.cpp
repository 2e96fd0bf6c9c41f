#include "oracle.hpp"

#include <stdexcept>

namespace oracle {

bool operator==(const Node& a, const Node& b) {
  return a.kind == b.kind && a.index == b.index && a.label == b.label && a.binders == b.binders && a.kids == b.kids;
}

Node from_term(const scopekit::Term& t) {
  Node n;
  switch (t.kind()) {
    case scopekit::Term::Kind::Var:
      n.kind = Node::Var;
      n.index = t.context().size() - 1 - t.position();
      return n;
    case scopekit::Term::Kind::Op:
      n.kind = Node::Op;
      n.label = t.op().label;
      for (auto& a : t.op().args) n.binders.push_back(a.binder.size());
      break;
    case scopekit::Term::Kind::Meta:
      n.kind = Node::Meta;
      n.label = t.hole().id;
      break;
  }
  for (auto& k : t.children()) n.kids.push_back(from_term(k));
  return n;
}

std::string show(const Node& n) {
  switch (n.kind) {
    case Node::Var: return "i" + std::to_string(n.index);
    case Node::Op: {
      std::string s = n.label + "(";
      for (std::size_t i = 0; i < n.kids.size(); ++i)
        s += (i ? "," : "") + std::string(n.binders[i], '\\') + show(n.kids[i]);
      return s + ")";
    }
    case Node::Meta: {
      std::string s = "?" + n.label + "{";
      for (std::size_t i = 0; i < n.kids.size(); ++i) s += (i ? "," : "") + show(n.kids[i]);
      return s + "}";
    }
  }
  return "";
}

Node shift(const Node& n, std::size_t by, std::size_t cutoff) {
  Node out = n;
  if (n.kind == Node::Var) {
    if (n.index >= cutoff) out.index += by;
    return out;
  }
  for (std::size_t i = 0; i < n.kids.size(); ++i)
    out.kids[i] = shift(n.kids[i], by, cutoff + (n.kind == Node::Op ? n.binders[i] : 0));
  return out;
}

namespace {

Node subst_at(const Node& t, const std::vector<Node>& sigma, std::size_t depth) {
  if (t.kind == Node::Var) {
    if (t.index < depth) return t;
    std::size_t from_right = t.index - depth;
    if (from_right >= sigma.size()) throw std::logic_error("free variable outside the substitution");
    return shift(sigma[sigma.size() - 1 - from_right], depth);
  }
  Node out = t;
  for (std::size_t i = 0; i < t.kids.size(); ++i)
    out.kids[i] = subst_at(t.kids[i], sigma, depth + (t.kind == Node::Op ? t.binders[i] : 0));
  return out;
}

Node rename_at(const Node& t, const std::vector<std::size_t>& map, std::size_t source_len, std::size_t depth) {
  if (t.kind == Node::Var) {
    if (t.index < depth) return t;
    std::size_t pos = map.size() - 1 - (t.index - depth);
    Node v = t;
    v.index = source_len - 1 - map.at(pos) + depth;
    return v;
  }
  Node out = t;
  for (std::size_t i = 0; i < t.kids.size(); ++i)
    out.kids[i] = rename_at(t.kids[i], map, source_len, depth + (t.kind == Node::Op ? t.binders[i] : 0));
  return out;
}

}  // namespace

Node substitute(const Node& t, const std::vector<Node>& sigma) { return subst_at(t, sigma, 0); }

Node rename(const Node& t, const std::vector<std::size_t>& map, std::size_t source_len) {
  return rename_at(t, map, source_len, 0);
}

Node meta_substitute(const Node& t, const std::map<std::string, Body>& bodies) {
  if (t.kind == Node::Var) return t;
  Node out = t;
  for (auto& k : out.kids) k = meta_substitute(k, bodies);
  if (t.kind == Node::Op) return out;
  const Body& b = bodies.at(t.label);
  if (b.ctx_len != out.kids.size()) throw std::logic_error("hole environment of the wrong length");
  return substitute(b.node, out.kids);
}

std::size_t count_nodes(const scopekit::Term& t) {
  std::size_t n = 1;
  for (auto& k : t.children()) n += count_nodes(k);
  return n;
}

}  // namespace oracle
