#pragma once

#include <string>
#include <string_view>

namespace cgd {

enum class ScheduleKind { constant, linear };

/// Length-free description of a penalty schedule: a constant λ or the
/// increasing linear ramp L(a, b).
struct LambdaSetting {
  ScheduleKind kind = ScheduleKind::constant;
  double start = 0.0;
  double end = 0.0;

  static LambdaSetting constant(double value) {
    return {ScheduleKind::constant, value, value};
  }
  static LambdaSetting linear(double start, double end) {
    return {ScheduleKind::linear, start, end};
  }

  /// Accepts "0.4" (constant) or "0.01:0.1" (linear).
  static LambdaSetting parse(std::string_view text);

  /// "0.4" or "L(0.01, 0.1)".
  [[nodiscard]] std::string label() const;

  friend bool operator==(const LambdaSetting&, const LambdaSetting&) = default;
};

/// The sequence λ_0 .. λ_{T-1}.
class LambdaSchedule {
 public:
  /// Throws InputError for negative or non-finite endpoints or length < 1.
  LambdaSchedule(LambdaSetting setting, int length);

  static LambdaSchedule constant(double value, int length) {
    return {LambdaSetting::constant(value), length};
  }
  static LambdaSchedule linear(double start, double end, int length) {
    return {LambdaSetting::linear(start, end), length};
  }

  /// λ_k. Throws InputError when k is outside [0, length).
  [[nodiscard]] double at(int k) const;

  [[nodiscard]] int length() const { return length_; }
  [[nodiscard]] const LambdaSetting& setting() const { return setting_; }

 private:
  LambdaSetting setting_;
  int length_;
};

}  // namespace cgd
