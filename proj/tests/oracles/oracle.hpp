#pragma once

#include <map>
#include <string>
#include <vector>

#include "scopekit/term.hpp"

// Reference implementations on a plain de Bruijn representation, written
// without the library's renamings, environments or fold.
namespace oracle {

struct Node {
  enum Kind { Var, Op, Meta } kind = Var;
  std::size_t index = 0;             // de Bruijn index: 0 is the innermost variable
  std::string label;                 // operator label or hole id
  std::vector<std::size_t> binders;  // per argument, how many variables it binds
  std::vector<Node> kids;

  friend bool operator==(const Node& a, const Node& b);
};

Node from_term(const scopekit::Term& t);
std::string show(const Node& n);

// free indices >= cutoff grow by `by`
Node shift(const Node& n, std::size_t by, std::size_t cutoff = 0);
// t over a context of length n; sigma[pos] for each position, over the target
Node substitute(const Node& t, const std::vector<Node>& sigma);
// renaming as a position map target -> source, lengths of both contexts
Node rename(const Node& t, const std::vector<std::size_t>& map, std::size_t source_len);

struct Body {
  Node node;
  std::size_t ctx_len;
};
Node meta_substitute(const Node& t, const std::map<std::string, Body>& bodies);

std::size_t count_nodes(const scopekit::Term& t);

}  // namespace oracle
