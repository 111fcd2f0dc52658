#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "transport/measure.hpp"

namespace transport {

/// A black-box transformation of discrete probability measures.
struct MeasureMapOracle {
  std::function<DiscreteMeasure(const DiscreteMeasure&)> apply;
  std::string name;
  std::optional<double> lipschitz;  // claimed constant, when known
  double p = 1.0;                   // exponent the transformation is stated for
  bool pure = true;                 // pure oracles may be evaluated concurrently

  DiscreteMeasure operator()(const DiscreteMeasure& mu) const {
    if (!apply) throw OracleError("measure map oracle has no callable");
    return apply(mu);
  }
};

/// An oracle backed by a subprocess speaking line-delimited JSON: one measure
/// per request line, one measure per response line. Calls are serialized; on
/// timeout the child is restarted and the request retried.
class SubprocessOracle {
 public:
  SubprocessOracle(std::string command, int timeout_ms = 10000, int retries = 1);
  ~SubprocessOracle();

  SubprocessOracle(const SubprocessOracle&) = delete;
  SubprocessOracle& operator=(const SubprocessOracle&) = delete;

  DiscreteMeasure apply(const DiscreteMeasure& mu);

  /// Wraps this instance; the wrapper shares ownership.
  static MeasureMapOracle make(std::string command, int timeout_ms = 10000, int retries = 1);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace transport
