#pragma once

#include "scalar.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qhopf {

// First nonzero term of a difference lhs - rhs.
struct Residual {
  std::string identity;  // which sub-identity failed
  std::string term;      // basis element carrying the nonzero coefficient
  std::vector<Gauss> series;
};

struct Report {
  std::string name;
  std::string anchor;
  std::optional<Residual> residual;
  std::vector<std::pair<std::string, std::string>> info;
  double ms = 0;

  bool passed() const { return !residual.has_value(); }
};

// records the first failure only
class ReportBuilder {
 public:
  ReportBuilder(std::string name, std::string anchor) : start_(std::chrono::steady_clock::now()) {
    r_.name = std::move(name);
    r_.anchor = std::move(anchor);
  }

  bool failed() const { return r_.residual.has_value(); }
  void fail(Residual res) {
    if (!r_.residual) r_.residual = std::move(res);
  }
  void fail(std::string identity, std::string term = {}, std::vector<Gauss> series = {}) {
    fail(Residual{std::move(identity), std::move(term), std::move(series)});
  }
  void info(std::string key, std::string value) { r_.info.emplace_back(std::move(key), std::move(value)); }

  Report done() {
    r_.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    return std::move(r_);
  }

 private:
  Report r_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace qhopf
