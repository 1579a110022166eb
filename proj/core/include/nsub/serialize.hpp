#pragma once

#include "nsub/adapt.hpp"
#include "nsub/fit.hpp"
#include "nsub/resolve.hpp"
#include "nsub/stability.hpp"
#include "nsub/sublevel.hpp"

#include <nlohmann/json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace nsub {

/// Insertion-ordered JSON so that reports are byte-stable.
using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "nsub-report/1";
inline constexpr const char* kVersion = "0.1.0";

Json to_json(const Rational& q);  // "num/den" string
Json to_json(const PuiseuxPoly& p);
Json to_json(const NewtonPolygon& np);
Json to_json(const BisectrixClass& bc);
Json to_json(const GrowthIndex& g);
Json to_json(const IsolatedRoot& r);
Json to_json(const Shear& s);
Json to_json(const AdaptReport& r);
Json to_json(const Chart& c);
Json to_json(const TraceNode& t);
Json to_json(const Decomposition& d);
Json to_json(const VerifyReport& v);
Json to_json(const MeasureSample& m);
Json to_json(const FitResult& f);
Json to_json(const LogPresence& l);
Json to_json(const ExceptionalSet& e);
Json to_json(const SweepRow& r);
Json to_json(const SweepReport& r);
Json to_json(const PairReport& r);

/// Report wrapper: schema, command, input echo, config, results, versions.
Json envelope(const std::string& command, const Json& input, const Json& config, const Json& results);

/// Shortest round-trip text of a double ("nan"/"inf" spelled out).
std::string format_double(double v);

/// RFC-4180 table writer (CRLF line ends, quoting only where needed).
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  std::string str() const;
  static std::string escape(const std::string& cell);

 private:
  std::size_t width_;
  std::string out_;
};

}  // namespace nsub
