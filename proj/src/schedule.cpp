#include "cgd/schedule.hpp"

#include "cgd/error.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace cgd {
namespace {

double parse_number(std::string_view text) {
  std::string buf(text);
  char* end = nullptr;
  double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size()) {
    throw InputError("invalid number: '" + buf + "'");
  }
  return v;
}

std::string short_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

LambdaSetting LambdaSetting::parse(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) return constant(parse_number(text));
  return linear(parse_number(text.substr(0, colon)),
                parse_number(text.substr(colon + 1)));
}

std::string LambdaSetting::label() const {
  if (kind == ScheduleKind::constant) return short_double(start);
  return "L(" + short_double(start) + ", " + short_double(end) + ")";
}

LambdaSchedule::LambdaSchedule(LambdaSetting setting, int length)
    : setting_(setting), length_(length) {
  if (length_ < 1) throw InputError("lambda schedule length must be >= 1");
  if (!std::isfinite(setting_.start) || !std::isfinite(setting_.end) ||
      setting_.start < 0.0 || setting_.end < 0.0) {
    throw InputError("lambda values must be finite and non-negative");
  }
  if (setting_.kind == ScheduleKind::constant) setting_.end = setting_.start;
}

double LambdaSchedule::at(int k) const {
  if (k < 0 || k >= length_) {
    throw InputError("schedule index " + std::to_string(k) +
                     " outside [0, " + std::to_string(length_) + ")");
  }
  if (setting_.kind == ScheduleKind::constant || length_ == 1) {
    return setting_.start;
  }
  if (k == length_ - 1) return setting_.end;
  double t = static_cast<double>(k) / static_cast<double>(length_ - 1);
  return setting_.start + t * (setting_.end - setting_.start);
}

}  // namespace cgd
