#include "support.hpp"

#include "sptheta/cli.hpp"
#include "sptheta/errors.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace sptheta;
using namespace sptheta::cli;
using nlohmann::json;

namespace {

std::string data(const char* name) { return std::string(SPTHETA_DATA_DIR) + "/" + name; }

JobSpec job(Command c, const char* file) {
  JobSpec j;
  j.command = c;
  j.input_path = data(file);
  return j;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("command names round trip") {
  for (auto c : {Command::capacity, Command::e0, Command::esp_curve, Command::rrho, Command::radius,
                 Command::rinf, Command::cfb, Command::theta, Command::value, Command::value_sp,
                 Command::zero_error_bound, Command::certify})
    CHECK(parse_command(command_name(c)) == c);
  CHECK_FALSE(parse_command("esp_curve").has_value());
}

TEST_CASE("documents dispatch on kind") {
  auto bsc = parse_document(json::parse(R"({"kind":"classical","W":[[0.9,0.1],[0.1,0.9]]})"));
  REQUIRE(std::holds_alternative<ClassicalChannel>(bsc));
  CHECK(std::get<ClassicalChannel>(bsc)(0, 1) == doctest::Approx(0.1));

  auto cq = parse_document(json::parse(
      R"({"kind":"cq","states":[[[[1,0],[0,0]],[[0,0],[0,0]]],[[[0,0],[0,0]],[[0,0],[1,0]]]]})"));
  REQUIRE(std::holds_alternative<CQChannel>(cq));
  CHECK(std::get<CQChannel>(cq).dim() == 2);

  auto g = parse_document(json::parse(R"({"kind":"graph","n":3,"edges":[[0,1]]})"));
  CHECK(std::get<ConfusabilityGraph>(g).edge_count() == 1);

  try {
    parse_document(json::parse(R"({"kind":"classical","W":[[0.5,0.4],[0.1,0.9]]})"));
    FAIL("accepted a bad row");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()) == "row 0 sums to 0.9");
  }
  CHECK_THROWS_AS(parse_document(json::parse(R"({"kind":"matrix"})")), ValidationError);
  CHECK_THROWS_AS(parse_document(json::parse(R"({"W":[[1]]})")), ValidationError);
  CHECK_THROWS_AS(parse_document(json::parse(R"({"kind":"graph","n":2,"edges":[[0,2]]})")),
                  ValidationError);
  CHECK_THROWS_AS(parse_document(json::parse(R"({"kind":"cq","states":[[[1,0],[0,1]]]})")),
                  ValidationError);
  CHECK_THROWS_AS(load_document(data("missing.json")), ValidationError);
}

TEST_CASE("input labels") {
  auto d = parse_document(
      json::parse(R"({"kind":"classical","W":[[1,0],[0,1]],"labels":["zero","one"]})"));
  CHECK(std::get<ClassicalChannel>(d).input_labels == std::vector<std::string>{"zero", "one"});
  CHECK_THROWS_AS(parse_document(json::parse(R"({"kind":"classical","W":[[1]],"labels":["a","b"]})")),
                  ValidationError);
  CHECK_THROWS_AS(parse_document(json::parse(R"({"kind":"classical","W":[[1]],"labels":[3]})")),
                  ValidationError);

  auto path = std::filesystem::temp_directory_path() / "sptheta_labels_test.json";
  std::ofstream(path) << R"({"kind":"classical","W":[[0.5,0.5],[0,1]],"labels":["a","b"]})";
  auto j = job(Command::cfb, "bsc.json");
  j.input_path = path;
  CHECK(run(j).document["input"]["labels"] == json::array({"a", "b"}));
  std::filesystem::remove(path);
  CHECK_FALSE(run(job(Command::cfb, "bsc.json")).document["input"].contains("labels"));
}

TEST_CASE("fixtures load") {
  CHECK(std::holds_alternative<ClassicalChannel>(load_channel(data("bsc.json"))));
  CHECK(load_graph(data("typewriter.json")) == ConfusabilityGraph::cycle(5));
  CHECK(load_graph(data("pentagon.json")) == ConfusabilityGraph::cycle(5));
  CHECK(load_graph(data("umbrella.json")) == ConfusabilityGraph::cycle(5));
  CHECK_THROWS_AS(load_channel(data("pentagon.json")), ValidationError);
  CHECK(std::holds_alternative<VectorRepresentation>(load_document(data("umbrella.json"))));
}

TEST_CASE("rate grids") {
  auto g = parse_rate_grid("0:0.5:0.25");
  CHECK(g.points() == std::vector<double>{0.0, 0.25, 0.5});
  CHECK(parse_rate_grid("0.1:0.1:1").points().size() == 1);
  CHECK_THROWS_AS(parse_rate_grid("0:1"), ValidationError);
  CHECK_THROWS_AS(parse_rate_grid("0:1:0"), ValidationError);
  CHECK_THROWS_AS(parse_rate_grid("1:0:0.1"), ValidationError);
  CHECK_THROWS_AS(parse_rate_grid("a:1:0.1"), ValidationError);
  CHECK_THROWS_AS(parse_rate_grid("0:1:1e-9"), ValidationError);
}

TEST_CASE("job parameters are checked per command") {
  auto j = job(Command::e0, "bsc.json");
  CHECK_THROWS_AS(j.validate(), ValidationError);
  j.rho = 1.0;
  CHECK_NOTHROW(j.validate());
  j.alpha = 0.5;
  CHECK_THROWS_AS(j.validate(), ValidationError);

  auto r = job(Command::rrho, "bsc.json");
  r.rho = 0.0;
  CHECK_THROWS_AS(r.validate(), DomainError);

  auto rad = job(Command::radius, "bsc.json");
  rad.alpha = 1.0;
  CHECK_THROWS_AS(rad.validate(), DomainError);

  auto t = job(Command::theta, "pentagon.json");
  t.tolerance = -1;
  CHECK_THROWS_AS(t.validate(), DomainError);

  auto z = job(Command::zero_error_bound, "pentagon.json");
  CHECK_THROWS_AS(z.validate(), ValidationError);
  z.blocklength = 0;
  CHECK_THROWS_AS(z.validate(), DomainError);

  auto c = job(Command::esp_curve, "bsc.json");
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c.rate = 0.1;
  c.rate_grid = parse_rate_grid("0:1:0.5");
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("run: theta on the pentagon") {
  auto r = run(job(Command::theta, "pentagon.json"));
  CHECK(r.converged);
  CHECK(r.document["result"]["theta_log"].get<double>() == doctest::Approx(0.804719).epsilon(1e-6));
  CHECK(r.document["result"]["gap"].get<double>() < 1e-6);
  CHECK(r.document["input"]["kind"] == "graph");
}

TEST_CASE("run: capacity in nats and bits") {
  auto j = job(Command::capacity, "bsc.json");
  auto nats = run(j);
  CHECK(nats.document["result"]["capacity"].get<double>() == doctest::Approx(0.368064).epsilon(1e-6));
  j.units = Units::bits;
  auto bits = run(j);
  CHECK(bits.document["result"]["capacity"].get<double>() ==
        doctest::Approx(0.368064 / std::log(2.0)).epsilon(1e-6));
  CHECK(bits.document["params"]["units"] == "bits");
  CHECK_THROWS_AS(run(job(Command::capacity, "pentagon.json")), ValidationError);
}

TEST_CASE("run: sphere-packing curve on the noiseless channel") {
  auto j = job(Command::esp_curve, "noiseless.json");
  j.rate_grid = parse_rate_grid("0:0.69:0.1");
  auto r = run(j);
  REQUIRE(r.curve.has_value());
  const auto& pts = r.document["result"]["points"];
  CHECK(pts.size() == 7);
  for (const auto& p : pts) {
    CHECK(p["esp"].is_null());
    CHECK(p["is_infinite"] == true);
  }
}

TEST_CASE("run: remaining commands") {
  auto rinf = run(job(Command::rinf, "typewriter.json"));
  CHECK(rinf.document["result"]["r_inf"].get<double>() == doctest::Approx(std::log(2.5)).epsilon(1e-6));
  auto cfb = run(job(Command::cfb, "typewriter.json"));
  CHECK(cfb.document["result"]["c_fb"].get<double>() == doctest::Approx(std::log(2.5)).epsilon(1e-9));
  auto value = run(job(Command::value, "umbrella.json"));
  CHECK(value.document["result"]["value"].get<double>() == doctest::Approx(0.804719).epsilon(1e-6));
  auto vsp = run(job(Command::value_sp, "umbrella.json"));
  CHECK(vsp.document["result"]["value"].get<double>() == doctest::Approx(0.804719).epsilon(1e-4));
  auto z = job(Command::zero_error_bound, "pentagon.json");
  z.blocklength = 2;
  auto zr = run(z);
  CHECK(zr.document["result"]["independence_number"] == 5);
  CHECK(zr.document["result"]["code"][1] == json::array({1, 2}));
  auto c = job(Command::certify, "umbrella.json");
  c.blocklength = 2;
  CHECK(run(c).document["result"]["theta_sp_log"].get<double>() ==
        doctest::Approx(0.804719).epsilon(1e-6));
  auto e = job(Command::rrho, "bsc.json");
  e.rho = 1.0;
  CHECK(run(e).document["result"]["r_rho"].get<double>() == doctest::Approx(0.223144).epsilon(1e-6));
  auto rad = job(Command::radius, "bsc.json");
  rad.rho = 1.0;
  CHECK(run(rad).document["result"]["alpha"].get<double>() == 0.5);
  CHECK_THROWS_AS(run(job(Command::value, "pentagon.json")), ValidationError);
}

TEST_CASE("run is reproducible") {
  auto j = job(Command::e0, "typewriter.json");
  j.rho = 0.7;
  j.seed = 5;
  CHECK(run(j).document.dump() == run(j).document.dump());
}

TEST_CASE("curve CSV format") {
  SpherePackingCurve c;
  c.points = {{0.1, infinity}, {0.2, 0.5}, {0.3, 0.0}};
  const auto text = format_curve(c);
  CHECK(text ==
        "R_nats,Esp_nats\n0.100000000000,inf\n0.200000000000,0.500000000000\n"
        "0.300000000000,0.00000000000\n");
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);

  auto back = parse_curve(text);
  REQUIRE(back.size() == 3);
  CHECK(std::isinf(back[0].esp));
  CHECK(back[1].rate == 0.2);
  CHECK(back[1].esp == 0.5);
  CHECK_THROWS_AS(parse_curve("R,E\n"), ValidationError);
  CHECK_THROWS_AS(parse_curve("R_nats,Esp_nats\n0.1;2\n"), ValidationError);
}

TEST_CASE("exported curves parse back to the computed curve") {
  auto j = job(Command::esp_curve, "bsc.json");
  j.rate_grid = parse_rate_grid("0:0.4:0.05");
  auto r = run(j);
  auto path = std::filesystem::temp_directory_path() / "sptheta_curve_test.csv";
  export_curve(*r.curve, path);
  auto back = parse_curve(slurp(path));
  REQUIRE(back.size() == r.curve->points.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].rate == doctest::Approx(r.curve->points[i].rate).epsilon(1e-11));
    CHECK(back[i].esp == doctest::Approx(r.curve->points[i].esp).epsilon(1e-11));
  }
  std::filesystem::remove(path);
  CHECK_THROWS(export_curve(*r.curve, "/nonexistent-dir/x.csv"));
}

TEST_CASE("table rendering") {
  auto r = run(job(Command::theta, "pentagon.json"));
  auto t = render_table(r.document);
  CHECK(t.find("theta_log") != std::string::npos);
  CHECK(t.find("converged") != std::string::npos);
}
