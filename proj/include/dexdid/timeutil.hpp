#pragma once

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dexdid {

// Floor division; C++ integer division truncates toward zero, slots before
// the origin need the mathematical floor.
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  std::int64_t r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

constexpr std::int64_t slot_of(std::int64_t ts, std::int64_t origin, std::int64_t dt) {
  return floor_div(ts - origin, dt);
}

constexpr std::int64_t slot_start(std::int64_t slot, std::int64_t origin, std::int64_t dt) {
  return origin + slot * dt;
}

// "YYYY-MM-DD" -> UTC seconds at 00:00.
inline std::int64_t parse_iso_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-')
    throw std::invalid_argument("expected YYYY-MM-DD date, got '" + s + "'");
  int y = std::stoi(s.substr(0, 4));
  unsigned m = static_cast<unsigned>(std::stoi(s.substr(5, 2)));
  unsigned d = static_cast<unsigned>(std::stoi(s.substr(8, 2)));
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) throw std::invalid_argument("invalid calendar date '" + s + "'");
  auto days = std::chrono::sys_days{ymd}.time_since_epoch();
  return std::chrono::duration_cast<std::chrono::seconds>(days).count();
}

inline std::string format_iso_date(std::int64_t ts) {
  auto days = std::chrono::sys_days{std::chrono::days{floor_div(ts, 86400)}};
  std::chrono::year_month_day ymd{days};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()));
  return buf;
}

// Accepts either an ISO date or a raw epoch-seconds integer.
inline std::int64_t parse_time_arg(const std::string& s) {
  if (s.find('-', 1) != std::string::npos) return parse_iso_date(s);
  return std::stoll(s);
}

}  // namespace dexdid
