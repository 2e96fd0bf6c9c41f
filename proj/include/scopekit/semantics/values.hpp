#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace scopekit::sem {

// Elements of the finite sets the models live in.  Immutable and totally
// ordered so they can be compared, sorted and used as set members.
class SemVal {
 public:
  enum class Kind { Atom, Tuple, Inj, Table, Set };

  SemVal() : SemVal(atom(0)) {}
  static SemVal atom(long a);
  static SemVal tuple(std::vector<SemVal> xs);
  static SemVal inj(long tag, SemVal payload);
  static SemVal table(std::vector<SemVal> xs);
  // members are sorted and deduplicated
  static SemVal set(std::vector<SemVal> xs);

  Kind kind() const { return n_->kind; }
  long num() const { return n_->num; }  // atom value or injection tag
  const std::vector<SemVal>& items() const { return n_->kids; }
  const SemVal& payload() const { return n_->kids.at(0); }
  const SemVal& operator[](std::size_t i) const { return n_->kids.at(i); }
  std::size_t size() const { return n_->kids.size(); }

  std::string str() const;

  friend int compare(const SemVal& a, const SemVal& b);
  friend bool operator==(const SemVal& a, const SemVal& b) { return compare(a, b) == 0; }
  friend bool operator!=(const SemVal& a, const SemVal& b) { return compare(a, b) != 0; }
  friend bool operator<(const SemVal& a, const SemVal& b) { return compare(a, b) < 0; }

 private:
  struct Node {
    Kind kind;
    long num = 0;
    std::vector<SemVal> kids;
  };
  explicit SemVal(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

// sizes saturate here; anything this large is never enumerated
inline constexpr std::uint64_t kHuge = std::uint64_t{1} << 62;
std::uint64_t sat_add(std::uint64_t a, std::uint64_t b);
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t sat_pow(std::uint64_t a, std::uint64_t n);

// A finite set with a bijection onto {0, .., size-1}.
class Carrier {
 public:
  virtual ~Carrier() = default;
  virtual std::uint64_t size() const = 0;
  virtual std::uint64_t rank(const SemVal& v) const = 0;
  virtual SemVal unrank(std::uint64_t i) const = 0;
  // throws BoundExceeded above limit
  std::vector<SemVal> elements(std::uint64_t limit = 1u << 20) const;
};
using CarrierRef = std::shared_ptr<const Carrier>;

CarrierRef atoms(std::uint64_t n);                        // Atom 0 .. n-1
CarrierRef product(std::vector<CarrierRef> parts);       // Tuple
CarrierRef sum(std::vector<CarrierRef> parts);           // Inj(tag, payload)
CarrierRef power(std::uint64_t n, CarrierRef cod);       // Table of n entries
CarrierRef powerset(CarrierRef base);                    // Set

}  // namespace scopekit::sem
