// Command-line front end: one job per invocation.
//
// Exit codes: 0 success, 2 validation error, 3 non-convergence (the result
// document is still written), 4 size cap exceeded, 1 anything else.

#include "sptheta/cli.hpp"
#include "sptheta/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

enum Exit { ok = 0, failure = 1, invalid = 2, unconverged = 3, too_large = 4 };

int fail(const char* kind, const std::string& message, int code) {
  nlohmann::json err = {{"error", kind}, {"message", message}};
  std::cerr << err.dump() << "\n";
  return code;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace sptheta;

  CLI::App app{"Reliability exponents, information radii and zero-error bounds"};
  std::string command_text, units_text = "nats", grid_text, out_path;
  std::optional<double> rho, alpha, rate;
  std::optional<int> blocklength;
  cli::JobSpec job;
  bool table = false;

  app.add_option("--input", job.input_path, "channel, graph or representation JSON")->required();
  app.add_option("--command", command_text,
                 "capacity, e0, esp-curve, rrho, radius, rinf, cfb, theta, value, value-sp, "
                 "zero-error-bound or certify")
      ->required();
  app.add_option("--rho", rho, "Gallager parameter");
  app.add_option("--alpha", alpha, "Renyi order in (0,1)");
  app.add_option("--rate", rate, "single rate in nats");
  app.add_option("--rate-grid", grid_text, "rates A:B:STEP in nats");
  app.add_option("--blocklength", blocklength, "block length n");
  app.add_option("--tol", job.tolerance, "solver tolerance")->capture_default_str();
  app.add_option("--seed", job.seed, "random restart seed")->capture_default_str();
  app.add_option("--units", units_text, "nats or bits")
      ->check(CLI::IsMember({"nats", "bits"}))
      ->capture_default_str();
  app.add_option("--out", out_path,
                 "write the result here; esp-curve with a .csv path writes the curve CSV");
  app.add_flag("--table", table, "print a human-readable table instead of JSON on stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("validation", e.what(), invalid);
  }

  try {
    auto cmd = cli::parse_command(command_text);
    if (!cmd) throw ValidationError("unknown command \"" + command_text + "\"");
    job.command = *cmd;
    job.rho = rho;
    job.alpha = alpha;
    job.rate = rate;
    job.blocklength = blocklength;
    if (!grid_text.empty()) job.rate_grid = cli::parse_rate_grid(grid_text);
    job.units = units_text == "bits" ? cli::Units::bits : cli::Units::nats;

    const auto result = cli::run(job);
    const std::string doc = result.document.dump(2) + "\n";
    const bool csv = !out_path.empty() && result.curve &&
                     std::filesystem::path(out_path).extension() == ".csv";
    if (csv) {
      cli::export_curve(*result.curve, out_path);
    } else if (!out_path.empty()) {
      write_file(out_path, doc);
    }
    if (table) {
      std::cout << cli::render_table(result.document);
    } else if (out_path.empty()) {
      std::cout << doc;
    }
    return result.converged ? ok : unconverged;
  } catch (const ValidationError& e) {
    return fail("validation", e.what(), invalid);
  } catch (const DomainError& e) {
    return fail("validation", e.what(), invalid);
  } catch (const ConvergenceError& e) {
    return fail("convergence", e.what(), unconverged);
  } catch (const CapacityError& e) {
    return fail("capacity", e.what(), too_large);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), failure);
  }
}
