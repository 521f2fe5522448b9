#include "sparsewave/logtower.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace spw {

namespace {
constexpr double BHI = 709.0;
const double BLO = std::log(BHI);  // 6.5639...
constexpr double INF = std::numeric_limits<double>::infinity();
}  // namespace

void LogTower::canonicalize() {
  if (depth_ == 0) {
    if (top_ < 0) throw std::invalid_argument("LogTower: negative value");
    while (top_ >= BHI) {
      top_ = std::log(top_);
      depth_ = 1;
      // a single log always lands below BHI for finite doubles
    }
    return;
  }
  while (depth_ >= 1 && top_ < BLO) {
    top_ = std::exp(top_);
    --depth_;
  }
  while (top_ >= BHI) {
    top_ = std::log(top_);
    ++depth_;
  }
}

LogTower LogTower::from_value(double v) {
  LogTower t;
  t.depth_ = 0;
  t.top_ = v;
  t.canonicalize();
  return t;
}

LogTower LogTower::from_log(double ln_v) {
  if (ln_v < BLO) return from_value(std::exp(ln_v));
  LogTower t;
  t.depth_ = 1;
  t.top_ = ln_v;
  t.canonicalize();
  return t;
}

LogTower LogTower::ln() const {
  if (depth_ == 0) {
    if (top_ < 1.0) throw std::invalid_argument("LogTower::ln: value below 1");
    return from_value(std::log(top_));
  }
  LogTower t;
  t.depth_ = depth_ - 1;
  t.top_ = top_;
  t.canonicalize();
  return t;
}

LogTower LogTower::exp() const {
  LogTower t;
  if (depth_ == 0 && top_ < BLO) return from_value(std::exp(top_));
  t.depth_ = depth_ + 1;
  t.top_ = top_;
  t.canonicalize();
  return t;
}

double LogTower::to_double() const {
  if (depth_ == 0) return top_;
  if (depth_ == 1) return std::exp(top_);
  return INF;
}

double LogTower::log_as_double() const {
  if (depth_ == 0) return std::log(top_);
  if (depth_ == 1) return top_;
  if (depth_ == 2) return std::exp(top_);
  return INF;
}

int LogTower::compare(const LogTower& a, const LogTower& b) {
  if (a.depth_ != b.depth_) return a.depth_ < b.depth_ ? -1 : 1;
  if (a.top_ == b.top_) return 0;
  return a.top_ < b.top_ ? -1 : 1;
}

LogTower LogTower::scale_log(double c) const {
  if (is_zero()) return *this;
  if (depth_ == 0) {
    double l = std::log(top_) + c;
    return from_log(l);
  }
  if (depth_ == 1) return from_log(top_ + c);
  // value = exp(Y); value*e^c = exp(Y + c); relative bump of Y by c
  LogTower y = ln();
  if (y.depth_ == 0) return from_value(y.top_ + c > 0 ? y.top_ + c : 0).exp();
  if (y.depth_ == 1) {
    // Y = e^t; Y + c = e^{t + log1p(c e^{-t})}
    double adj = std::log1p(c * std::exp(-y.top_));
    LogTower y2;
    y2.depth_ = 1;
    y2.top_ = y.top_ + adj;
    y2.canonicalize();
    return y2.exp();
  }
  return *this;  // c is negligible at this depth
}

LogTower LogTower::pow(double a) const {
  if (a <= 0) throw std::invalid_argument("LogTower::pow: exponent must be > 0");
  if (is_zero()) return *this;
  if (depth_ == 0) {
    double l = a * std::log(top_);
    return from_log(l);
  }
  // ln(value^a) = a * ln(value)
  LogTower l = ln();
  if (l.depth_ == 0) return from_log(a * l.top_);
  return l.scale_log(std::log(a)).exp();
}

LogTower operator*(const LogTower& a, const LogTower& b) {
  if (a.is_zero() || b.is_zero()) return LogTower();
  double la = a.log_as_double(), lb = b.log_as_double();
  if (std::isfinite(la) && std::isfinite(lb)) return LogTower::from_log(la + lb);
  if (std::isfinite(la)) return b.scale_log(la);
  if (std::isfinite(lb)) return a.scale_log(lb);
  return (a.ln() + b.ln()).exp();  // both beyond double-log range
}

LogTower operator+(const LogTower& a, const LogTower& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const LogTower& big = LogTower::compare(a, b) >= 0 ? a : b;
  const LogTower& small = LogTower::compare(a, b) >= 0 ? b : a;
  double lb = big.log_as_double(), ls = small.log_as_double();
  if (std::isfinite(lb) && std::isfinite(ls)) {
    double delta = lb - ls;
    if (delta > 40.0) return big;
    return LogTower::from_log(lb + std::log1p(std::exp(-delta)));
  }
  return big;  // gap beyond double-log resolution
}

SignedLogTower tower_sub(const LogTower& a, const LogTower& b) {
  int c = LogTower::compare(a, b);
  SignedLogTower r;
  if (c == 0) {
    r.sign = 0;
    r.mag = LogTower();
    return r;
  }
  const LogTower& big = c > 0 ? a : b;
  const LogTower& small = c > 0 ? b : a;
  r.sign = c;
  double lb = big.log_as_double(), ls = small.log_as_double();
  if (std::isfinite(lb) && std::isfinite(ls) && lb - ls < 40.0) {
    double em = -std::expm1(ls - lb);  // 1 - e^{-(lb-ls)}
    r.mag = LogTower::from_log(lb + std::log(em));
  } else {
    r.mag = big;
  }
  return r;
}

int SignedLogTower::compare(const SignedLogTower& a, const SignedLogTower& b) {
  if (a.sign != b.sign) return a.sign < b.sign ? -1 : 1;
  int c = LogTower::compare(a.mag, b.mag);
  return a.sign >= 0 ? c : -c;
}

std::string LogTower::str() const {
  std::ostringstream os;
  if (depth_ == 0)
    os << top_;
  else if (depth_ == 1)
    os << "exp(" << top_ << ")";
  else
    os << "exp^" << depth_ << "(" << top_ << ")";
  return os.str();
}

}  // namespace spw
