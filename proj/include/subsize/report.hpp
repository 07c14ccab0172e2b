#ifndef SUBSIZE_REPORT_HPP
#define SUBSIZE_REPORT_HPP

#include <chrono>
#include <string>

#include "subsize/errors.hpp"
#include "subsize/group.hpp"
#include "subsize/thresholds.hpp"

namespace subsize {

inline constexpr const char *kReportSchema = "subsize.report/1";

/// `exhausted` means no certificate was found within the budgets; a window
/// search can never prove nonexistence in G.
enum class Verdict { Holds, Fails, Exhausted };

inline const char *to_string(Verdict v)
{
  switch (v) {
  case Verdict::Holds:
    return "holds";
  case Verdict::Fails:
    return "fails";
  default:
    return "exhausted";
  }
}

inline Verdict verdict_from_string(const std::string &s)
{
  if (s == "holds")
    return Verdict::Holds;
  if (s == "fails")
    return Verdict::Fails;
  if (s == "exhausted")
    return Verdict::Exhausted;
  throw spec_error("unknown verdict \"" + s + "\"");
}

struct CheckReport
{
  std::string property;
  Verdict verdict = Verdict::Exhausted;
  json certificate = json::object();
  json budgets_used = json::object();
  std::size_t window = 0;
  Thresholds thresholds;
  double runtime_ms = 0.0;

  bool holds() const { return verdict == Verdict::Holds; }
};

inline json to_json(const CheckReport &r)
{
  return {{"property", r.property},
          {"verdict", to_string(r.verdict)},
          {"certificate", r.certificate},
          {"window", r.window},
          {"thresholds", to_json(r.thresholds)},
          {"budgets_used", r.budgets_used},
          {"runtime_ms", r.runtime_ms}};
}

inline CheckReport report_from_json(const json &j)
{
  try {
    CheckReport r;
    r.property = j.at("property").get<std::string>();
    r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    r.certificate = j.at("certificate");
    r.window = j.at("window").get<std::size_t>();
    r.thresholds = thresholds_from_json(j.at("thresholds"));
    r.budgets_used = j.value("budgets_used", json::object());
    r.runtime_ms = j.value("runtime_ms", 0.0);
    return r;
  } catch (const json::exception &e) {
    throw spec_error(std::string("malformed check report: ") + e.what());
  }
}

/// Stamps `runtime_ms` on the report when it goes out of scope.
class ReportTimer
{
public:
  explicit ReportTimer(CheckReport &r) : report_(r), start_(std::chrono::steady_clock::now()) {}
  ~ReportTimer()
  {
    auto d = std::chrono::steady_clock::now() - start_;
    report_.runtime_ms = std::chrono::duration<double, std::milli>(d).count();
  }
  ReportTimer(const ReportTimer &) = delete;
  ReportTimer &operator=(const ReportTimer &) = delete;

private:
  CheckReport &report_;
  std::chrono::steady_clock::time_point start_;
};

} // namespace subsize

#endif // SUBSIZE_REPORT_HPP
