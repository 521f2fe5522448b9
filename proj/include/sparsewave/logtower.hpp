#pragma once

#include <string>

namespace spw {

// Nonnegative magnitude stored as an iterated exponential: value =
// exp applied `depth` times to `top`. Canonical band: depth 0 holds plain
// values in [0, 709); for depth >= 1 the top lies in [ln 709, 709), which
// makes (depth, top) lexicographic order agree with numeric order.
//
// Addition keeps the dominant term once the log-scale gap stops being
// representable as a double; at those depths the discarded term is smaller
// by more than a factor exp(-700) of the leading one's log, so downstream
// comparisons are unaffected.
class LogTower {
 public:
  LogTower() : depth_(0), top_(0) {}
  static LogTower from_value(double v);
  static LogTower from_log(double ln_v);  // value = e^{ln_v}, any double ln_v

  bool is_zero() const { return depth_ == 0 && top_ == 0; }
  int depth() const { return depth_; }
  double top() const { return top_; }

  LogTower ln() const;    // requires value >= 1
  LogTower exp() const;
  LogTower pow(double a) const;        // value^a, a > 0
  LogTower scale_log(double c) const;  // value * e^c

  double to_double() const;      // +inf when beyond double range
  double log_as_double() const;  // ln(value), +inf when beyond double range
  std::string str() const;

  static int compare(const LogTower& a, const LogTower& b);

  friend LogTower operator*(const LogTower& a, const LogTower& b);
  friend LogTower operator+(const LogTower& a, const LogTower& b);

 private:
  int depth_;
  double top_;
  void canonicalize();
};

struct SignedLogTower {
  int sign = 0;  // -1, 0, +1
  LogTower mag;
  static int compare(const SignedLogTower& a, const SignedLogTower& b);
};

// a - b with sign.
SignedLogTower tower_sub(const LogTower& a, const LogTower& b);

}  // namespace spw
