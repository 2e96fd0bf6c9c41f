#include "scopekit/report.hpp"

#include <sstream>

#include "json.hpp"

namespace scopekit {

void Report::add(const std::string& suite, const std::string& axiom, bool pass, long long cases,
                 std::string witness) {
  records_.push_back(CheckRecord{suite, axiom, pass, cases, std::move(witness)});
}

void Report::merge(const Report& other) {
  records_.insert(records_.end(), other.records_.begin(), other.records_.end());
}

bool Report::all_pass() const {
  for (auto& r : records_)
    if (!r.pass) return false;
  return true;
}

Report Report::condensed() const {
  Report out;
  for (auto& r : records_) {
    CheckRecord* hit = nullptr;
    for (auto& o : out.records_)
      if (o.suite == r.suite && o.axiom == r.axiom) hit = &o;
    if (!hit) {
      out.records_.push_back(r);
      continue;
    }
    hit->cases += r.cases;
    if (hit->pass && !r.pass) {
      hit->pass = false;
      hit->witness = r.witness;
    } else if (hit->witness.empty()) {
      hit->witness = r.witness;
    }
  }
  return out;
}

std::string Report::to_text() const {
  std::ostringstream os;
  for (auto& r : records_) {
    os << (r.pass ? "PASS " : "FAIL ") << r.suite << " / " << r.axiom << " (" << r.cases << " cases)";
    if (!r.witness.empty()) os << "\n     " << r.witness;
    os << "\n";
  }
  return os.str();
}

std::string Report::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (auto& r : records_)
    arr.push_back({{"suite", r.suite},
                   {"axiom", r.axiom},
                   {"status", r.pass ? "pass" : "fail"},
                   {"cases", r.cases},
                   {"witness", r.witness}});
  return nlohmann::json{{"all_pass", all_pass()}, {"records", arr}}.dump(2);
}

}  // namespace scopekit
