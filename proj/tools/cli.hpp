#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace baryiter::cli {

using Json = nlohmann::ordered_json;

enum ExitCode { kOk = 0, kUsage = 1, kFailed = 2 };

/// Serializable form of a solver run; every number is a decimal string.
struct TraceDocument {
  struct Row {
    std::size_t i = 0;
    std::string x;
    std::string f;
    std::optional<std::string> abs_error;
    std::string status;
  };

  std::string problem;
  std::string method;
  Json config = Json::object();
  std::vector<Row> steps;
  std::string status;
  std::size_t iterations = 0;
  std::optional<std::string> empirical_order;
};

Json to_json(const TraceDocument& doc);
TraceDocument document_from_json(const Json& j);
std::string emit_json(const TraceDocument& doc);
std::string emit_csv(const TraceDocument& doc);

/// Runs one command line (without the program name). Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace baryiter::cli
