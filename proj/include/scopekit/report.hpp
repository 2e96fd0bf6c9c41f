#pragma once

#include <string>
#include <vector>

namespace scopekit {

struct CheckRecord {
  std::string suite;
  std::string axiom;
  bool pass = true;
  long long cases = 0;
  std::string witness;  // first failure, or an informational line
};

class Report {
 public:
  void add(CheckRecord r) { records_.push_back(std::move(r)); }
  void add(const std::string& suite, const std::string& axiom, bool pass, long long cases,
           std::string witness = {});
  void merge(const Report& other);
  bool all_pass() const;
  // one record per (suite, axiom): cases summed, first failure kept
  Report condensed() const;
  const std::vector<CheckRecord>& records() const { return records_; }

  std::string to_text() const;
  std::string to_json() const;

 private:
  std::vector<CheckRecord> records_;
};

}  // namespace scopekit
