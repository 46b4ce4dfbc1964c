#pragma once

// File formats and job execution behind the command-line tool.
//
// Inputs are single JSON documents dispatched on "kind": "classical", "cq",
// "graph" or "representation". Results are JSON documents; +infinity is
// written as null with a sibling "is_infinite": true.

#include "sptheta/channels.hpp"
#include "sptheta/exponents.hpp"
#include "sptheta/zeroerror.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace sptheta::cli {

enum class Command {
  capacity,
  e0,
  esp_curve,
  rrho,
  radius,
  rinf,
  cfb,
  theta,
  value,
  value_sp,
  zero_error_bound,
  certify,
};

/// Command names as typed on the command line ("esp-curve", "value-sp", ...).
std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command c);

enum class Units { nats, bits };

using Channel = std::variant<ClassicalChannel, CQChannel>;
using InputDocument = std::variant<ClassicalChannel, CQChannel, ConfusabilityGraph,
                                   VectorRepresentation, ProjectorRepresentation>;

/// Throws ValidationError on malformed documents, naming the offending row,
/// state or vertex.
InputDocument parse_document(const nlohmann::json& doc);
/// Reads and parses a file; I/O and JSON syntax failures are ValidationErrors.
InputDocument load_document(const std::filesystem::path& path);

Channel load_channel(const std::filesystem::path& path);
/// Accepts graphs, channels (their confusability graph) and representations.
ConfusabilityGraph load_graph(const std::filesystem::path& path);

struct RateGrid {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;

  /// start + k step for k = 0, 1, ... while <= stop (with 1e-9 step slack).
  std::vector<double> points() const;
};

/// Parses "A:B:STEP". Throws ValidationError unless A <= B, STEP > 0 and the
/// grid has at most 100000 points.
RateGrid parse_rate_grid(std::string_view text);

struct JobSpec {
  Command command = Command::capacity;
  std::string input_path;
  std::optional<double> rho;
  std::optional<double> alpha;
  std::optional<double> rate;
  std::optional<RateGrid> rate_grid;
  std::optional<int> blocklength;
  double tolerance = 1e-6;
  std::uint64_t seed = 0;
  Units units = Units::nats;

  /// Per-command parameter checks; throws ValidationError or DomainError.
  void validate() const;
};

struct RunResult {
  nlohmann::json document;
  bool converged = true;
  std::optional<SpherePackingCurve> curve;  ///< esp-curve only, always in nats
};

/// Validates the job, loads the input and computes. Solver non-convergence is
/// reported through `converged`, not thrown.
RunResult run(const JobSpec& job);

/// "R_nats,Esp_nats" header then one row per point, 12 significant digits, "inf" for +infinity.
std::string format_curve(const SpherePackingCurve& curve);
std::vector<CurvePoint> parse_curve(std::string_view csv);
/// Throws std::runtime_error on I/O failure.
void export_curve(const SpherePackingCurve& curve, const std::filesystem::path& path);

/// Two-column human-readable rendering of a result document.
std::string render_table(const nlohmann::json& document);

}  // namespace sptheta::cli
