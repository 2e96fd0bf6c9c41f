#include "scopekit/semantics/values.hpp"

#include <algorithm>

#include "scopekit/error.hpp"

namespace scopekit::sem {

SemVal SemVal::atom(long a) { return SemVal(std::make_shared<const Node>(Node{Kind::Atom, a, {}})); }
SemVal SemVal::tuple(std::vector<SemVal> xs) {
  return SemVal(std::make_shared<const Node>(Node{Kind::Tuple, 0, std::move(xs)}));
}
SemVal SemVal::inj(long tag, SemVal payload) {
  return SemVal(std::make_shared<const Node>(Node{Kind::Inj, tag, {std::move(payload)}}));
}
SemVal SemVal::table(std::vector<SemVal> xs) {
  return SemVal(std::make_shared<const Node>(Node{Kind::Table, 0, std::move(xs)}));
}
SemVal SemVal::set(std::vector<SemVal> xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return SemVal(std::make_shared<const Node>(Node{Kind::Set, 0, std::move(xs)}));
}

int compare(const SemVal& a, const SemVal& b) {
  if (a.n_ == b.n_) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (a.num() != b.num()) return a.num() < b.num() ? -1 : 1;
  const auto& x = a.items();
  const auto& y = b.items();
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
    if (int c = compare(x[i], y[i])) return c;
  if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
  return 0;
}

std::string SemVal::str() const {
  auto list = [&](char open, char close) {
    std::string s(1, open);
    for (std::size_t i = 0; i < size(); ++i) {
      if (i) s += ',';
      s += items()[i].str();
    }
    return s + close;
  };
  switch (kind()) {
    case Kind::Atom:
      return std::to_string(num());
    case Kind::Tuple:
      return list('(', ')');
    case Kind::Inj:
      return "in" + std::to_string(num()) + " " + payload().str();
    case Kind::Table:
      return list('[', ']');
    case Kind::Set:
      return list('{', '}');
  }
  return "?";
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a >= kHuge - b ? kHuge : a + b; }
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kHuge / b ? kHuge : a * b;
}
std::uint64_t sat_pow(std::uint64_t a, std::uint64_t n) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < n && r < kHuge; ++i) r = sat_mul(r, a);
  if (a <= 1) return n == 0 ? 1 : a;
  return r;
}

std::vector<SemVal> Carrier::elements(std::uint64_t limit) const {
  std::uint64_t n = size();
  if (n > limit)
    throw Error(ErrorKind::BoundExceeded, "set of size " + (n >= kHuge ? std::string("> 2^62") : std::to_string(n)) +
                                              " is too large to enumerate (limit " + std::to_string(limit) + ")");
  std::vector<SemVal> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(unrank(i));
  return out;
}

namespace {

[[noreturn]] void foreign(const SemVal& v) {
  throw Error(ErrorKind::Evaluation, "value " + v.str() + " is not an element of the carrier");
}

class Atoms final : public Carrier {
 public:
  explicit Atoms(std::uint64_t n) : n_(n) {}
  std::uint64_t size() const override { return n_; }
  std::uint64_t rank(const SemVal& v) const override {
    if (v.kind() != SemVal::Kind::Atom || v.num() < 0 || static_cast<std::uint64_t>(v.num()) >= n_) foreign(v);
    return static_cast<std::uint64_t>(v.num());
  }
  SemVal unrank(std::uint64_t i) const override { return SemVal::atom(static_cast<long>(i)); }

 private:
  std::uint64_t n_;
};

// mixed radix, first component most significant
class Product final : public Carrier {
 public:
  explicit Product(std::vector<CarrierRef> parts) : parts_(std::move(parts)) {
    size_ = 1;
    for (auto& p : parts_) size_ = sat_mul(size_, p->size());
  }
  std::uint64_t size() const override { return size_; }
  std::uint64_t rank(const SemVal& v) const override {
    if (v.kind() != SemVal::Kind::Tuple || v.size() != parts_.size()) foreign(v);
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < parts_.size(); ++i) r = r * parts_[i]->size() + parts_[i]->rank(v[i]);
    return r;
  }
  SemVal unrank(std::uint64_t i) const override {
    std::vector<SemVal> xs(parts_.size());
    for (std::size_t k = parts_.size(); k-- > 0;) {
      std::uint64_t n = parts_[k]->size();
      xs[k] = parts_[k]->unrank(i % n);
      i /= n;
    }
    return SemVal::tuple(std::move(xs));
  }

 private:
  std::vector<CarrierRef> parts_;
  std::uint64_t size_;
};

class Sum final : public Carrier {
 public:
  explicit Sum(std::vector<CarrierRef> parts) : parts_(std::move(parts)) {
    size_ = 0;
    for (auto& p : parts_) size_ = sat_add(size_, p->size());
  }
  std::uint64_t size() const override { return size_; }
  std::uint64_t rank(const SemVal& v) const override {
    if (v.kind() != SemVal::Kind::Inj || v.num() < 0 || static_cast<std::size_t>(v.num()) >= parts_.size())
      foreign(v);
    std::uint64_t off = 0;
    for (long k = 0; k < v.num(); ++k) off += parts_[static_cast<std::size_t>(k)]->size();
    return off + parts_[static_cast<std::size_t>(v.num())]->rank(v.payload());
  }
  SemVal unrank(std::uint64_t i) const override {
    for (std::size_t k = 0; k < parts_.size(); ++k) {
      if (i < parts_[k]->size()) return SemVal::inj(static_cast<long>(k), parts_[k]->unrank(i));
      i -= parts_[k]->size();
    }
    throw Error(ErrorKind::Evaluation, "rank out of range");
  }

 private:
  std::vector<CarrierRef> parts_;
  std::uint64_t size_;
};

class Power final : public Carrier {
 public:
  Power(std::uint64_t n, CarrierRef cod) : n_(n), cod_(std::move(cod)), size_(sat_pow(cod_->size(), n)) {}
  std::uint64_t size() const override { return size_; }
  std::uint64_t rank(const SemVal& v) const override {
    if (v.kind() != SemVal::Kind::Table || v.size() != n_) foreign(v);
    std::uint64_t r = 0;
    for (auto& x : v.items()) r = r * cod_->size() + cod_->rank(x);
    return r;
  }
  SemVal unrank(std::uint64_t i) const override {
    std::vector<SemVal> xs(n_);
    for (std::uint64_t k = n_; k-- > 0;) {
      xs[k] = cod_->unrank(i % cod_->size());
      i /= cod_->size();
    }
    return SemVal::table(std::move(xs));
  }

 private:
  std::uint64_t n_;
  CarrierRef cod_;
  std::uint64_t size_;
};

// subsets as bitmasks over the base ranks
class Powerset final : public Carrier {
 public:
  explicit Powerset(CarrierRef base)
      : base_(std::move(base)), size_(base_->size() >= 62 ? kHuge : std::uint64_t{1} << base_->size()) {}
  std::uint64_t size() const override { return size_; }
  std::uint64_t rank(const SemVal& v) const override {
    if (v.kind() != SemVal::Kind::Set) foreign(v);
    std::uint64_t r = 0;
    for (auto& x : v.items()) r |= std::uint64_t{1} << base_->rank(x);
    return r;
  }
  SemVal unrank(std::uint64_t i) const override {
    std::vector<SemVal> xs;
    for (std::uint64_t k = 0; i >> k; ++k)
      if ((i >> k) & 1u) xs.push_back(base_->unrank(k));
    return SemVal::set(std::move(xs));
  }

 private:
  CarrierRef base_;
  std::uint64_t size_;
};

}  // namespace

CarrierRef atoms(std::uint64_t n) { return std::make_shared<Atoms>(n); }
CarrierRef product(std::vector<CarrierRef> parts) { return std::make_shared<Product>(std::move(parts)); }
CarrierRef sum(std::vector<CarrierRef> parts) { return std::make_shared<Sum>(std::move(parts)); }
CarrierRef power(std::uint64_t n, CarrierRef cod) { return std::make_shared<Power>(n, std::move(cod)); }
CarrierRef powerset(CarrierRef base) { return std::make_shared<Powerset>(std::move(base)); }

}  // namespace scopekit::sem
