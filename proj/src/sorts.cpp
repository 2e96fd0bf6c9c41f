#include "scopekit/sorts.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace scopekit {

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::IllSorted: return "IllSorted";
    case ErrorKind::ContextMismatch: return "ContextMismatch";
    case ErrorKind::NotFlattenable: return "NotFlattenable";
    case ErrorKind::UnknownOperator: return "UnknownOperator";
    case ErrorKind::UnknownHole: return "UnknownHole";
    case ErrorKind::MissingAlgebraCase: return "MissingAlgebraCase";
    case ErrorKind::BoundExceeded: return "BoundExceeded";
    case ErrorKind::DepthExceeded: return "DepthExceeded";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::SortMismatch: return "SortMismatch";
    case ErrorKind::NeedUnfulfilled: return "NeedUnfulfilled";
    case ErrorKind::DisabledConstruct: return "DisabledConstruct";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::UnsupportedCapability: return "UnsupportedCapability";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::Evaluation: return "EvaluationError";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Error";
}

static std::string format_error(ErrorKind kind, const std::string& msg, SourceLoc loc) {
  std::ostringstream os;
  os << kind_name(kind);
  if (loc.known()) os << " at " << loc.line << ":" << loc.col;
  os << ": " << msg;
  return os.str();
}

Error::Error(ErrorKind kind, const std::string& msg, SourceLoc loc)
    : std::runtime_error(format_error(kind, msg, loc)), kind_(kind), loc_(loc), bare_(msg) {}

std::string to_string(const Sort& s) {
  return s.is_first() ? s.id : "C " + s.id;
}

static void check_unique(const std::vector<SortId>& v, const char* which) {
  std::set<SortId> seen;
  for (auto& s : v)
    if (!seen.insert(s).second)
      throw Error(ErrorKind::InvalidInput, std::string("duplicate ") + which + " sort '" + s + "'");
}

SortingSystem::SortingSystem(std::vector<SortId> fst, std::vector<SortId> snd)
    : finite_(true), fst_(std::move(fst)), snd_(std::move(snd)) {
  check_unique(fst_, "first-class");
  check_unique(snd_, "second-class");
}

SortingSystem SortingSystem::open(Membership fst, Membership snd, std::string description) {
  SortingSystem s;
  s.finite_ = false;
  s.fst_pred_ = std::move(fst);
  s.snd_pred_ = std::move(snd);
  s.description_ = std::move(description);
  return s;
}

const std::vector<SortId>& SortingSystem::fst_sorts() const {
  if (!finite_) throw Error(ErrorKind::InvalidInput, "open sorting system has no finite sort list");
  return fst_;
}

const std::vector<SortId>& SortingSystem::snd_sorts() const {
  if (!finite_) throw Error(ErrorKind::InvalidInput, "open sorting system has no finite sort list");
  return snd_;
}

bool SortingSystem::has_first(const SortId& s) const {
  if (!finite_) return fst_pred_(s);
  return std::find(fst_.begin(), fst_.end(), s) != fst_.end();
}

bool SortingSystem::has_second(const SortId& s) const {
  if (!finite_) return snd_pred_(s);
  return std::find(snd_.begin(), snd_.end(), s) != snd_.end();
}

const std::shared_ptr<const std::vector<SortId>>& Context::empty_entries() {
  static const auto e = std::make_shared<const std::vector<SortId>>();
  return e;
}

Context Context::extended(const Context& delta) const {
  if (delta.empty()) return *this;
  if (empty()) return delta;
  std::vector<SortId> e = *entries_;
  e.insert(e.end(), delta.entries_->begin(), delta.entries_->end());
  return Context(std::move(e));
}

void Context::validate(const SortingSystem& sys) const {
  for (auto& s : *entries_)
    if (!sys.has_first(s))
      throw Error(ErrorKind::IllSorted, "context entry '" + s + "' is not a first-class sort");
}

std::string to_string(const Context& c) {
  std::string out = "[";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ",";
    out += c[i];
  }
  return out + "]";
}

Renaming::Renaming(Context source, Context target, std::vector<std::size_t> map)
    : source_(std::move(source)), target_(std::move(target)), map_(std::move(map)) {
  if (map_.size() != target_.size())
    throw Error(ErrorKind::ContextMismatch, "renaming map has " + std::to_string(map_.size()) +
                                                " entries for target " + to_string(target_));
  for (std::size_t y = 0; y < map_.size(); ++y) {
    if (map_[y] >= source_.size())
      throw Error(ErrorKind::ContextMismatch, "renaming sends position " + std::to_string(y) +
                                                  " outside " + to_string(source_));
    if (source_[map_[y]] != target_[y])
      throw Error(ErrorKind::IllSorted, "renaming does not preserve the sort of position " +
                                            std::to_string(y));
  }
}

std::string to_string(const Renaming& r) {
  std::ostringstream os;
  os << to_string(r.source()) << "<-" << to_string(r.target()) << "{";
  for (std::size_t y = 0; y < r.map().size(); ++y) os << (y ? "," : "") << y << "->" << r.map()[y];
  os << "}";
  return os.str();
}

Renaming identity_renaming(const Context& g) {
  std::vector<std::size_t> m(g.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = i;
  return Renaming(g, g, std::move(m));
}

Renaming compose_renamings(const Renaming& rho, const Renaming& rho2) {
  if (rho.target() != rho2.source())
    throw Error(ErrorKind::ContextMismatch, "cannot compose " + to_string(rho) + " with " + to_string(rho2));
  std::vector<std::size_t> m(rho2.map().size());
  for (std::size_t y = 0; y < m.size(); ++y) m[y] = rho(rho2(y));
  return Renaming(rho.source(), rho2.target(), std::move(m));
}

Concat concat_contexts(const Context& g1, const Context& g2) {
  Context g = g1.extended(g2);
  std::vector<std::size_t> m1(g1.size()), m2(g2.size());
  for (std::size_t i = 0; i < g1.size(); ++i) m1[i] = i;
  for (std::size_t i = 0; i < g2.size(); ++i) m2[i] = g1.size() + i;
  return Concat{g, Renaming(g, g1, std::move(m1)), Renaming(g, g2, std::move(m2))};
}

Renaming extend_renaming(const Renaming& rho, const Context& delta) {
  std::vector<std::size_t> m = rho.map();
  for (std::size_t i = 0; i < delta.size(); ++i) m.push_back(rho.source().size() + i);
  return Renaming(rho.source().extended(delta), rho.target().extended(delta), std::move(m));
}

Renaming pair_renamings(const Renaming& a, const Renaming& b) {
  if (a.source() != b.source())
    throw Error(ErrorKind::ContextMismatch, "pairing renamings with different sources");
  std::vector<std::size_t> m = a.map();
  m.insert(m.end(), b.map().begin(), b.map().end());
  return Renaming(a.source(), a.target().extended(b.target()), std::move(m));
}

std::vector<std::size_t> vars_of_sort(const Context& g, const SortId& s) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i] == s) out.push_back(i);
  return out;
}

}  // namespace scopekit
