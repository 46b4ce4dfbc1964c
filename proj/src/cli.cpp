#include "sptheta/cli.hpp"

#include "sptheta/errors.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

namespace sptheta::cli {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 12> command_names{{
    {Command::capacity, "capacity"},
    {Command::e0, "e0"},
    {Command::esp_curve, "esp-curve"},
    {Command::rrho, "rrho"},
    {Command::radius, "radius"},
    {Command::rinf, "rinf"},
    {Command::cfb, "cfb"},
    {Command::theta, "theta"},
    {Command::value, "value"},
    {Command::value_sp, "value-sp"},
    {Command::zero_error_bound, "zero-error-bound"},
    {Command::certify, "certify"},
}};

constexpr std::size_t max_grid_points = 100000;

// -------------------------------------------------------------------------
// parsing helpers

double number_at(const json& v, const std::string& where) {
  if (!v.is_number()) throw ValidationError(where + " must be a number");
  return v.get<double>();
}

Complex complex_at(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2)
    return {number_at(v[0], where + " real part"), number_at(v[1], where + " imaginary part")};
  throw ValidationError(where + " must be a number or a [re, im] pair");
}

const json& field(const json& doc, const char* key, const std::string& where) {
  auto it = doc.find(key);
  if (it == doc.end()) throw ValidationError(where + " is missing \"" + key + "\"");
  return *it;
}

const json& array_field(const json& doc, const char* key, const std::string& where) {
  const json& v = field(doc, key, where);
  if (!v.is_array()) throw ValidationError(where + " field \"" + key + "\" must be an array");
  return v;
}

CMatrix complex_matrix(const json& m, const std::string& where) {
  if (!m.is_array() || m.empty()) throw ValidationError(where + " must be a nonempty matrix");
  const auto rows = static_cast<Eigen::Index>(m.size());
  if (!m[0].is_array()) throw ValidationError(where + " row 0 must be an array");
  const auto cols = static_cast<Eigen::Index>(m[0].size());
  CMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = m[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ValidationError(where + " row " + std::to_string(i) + " has the wrong length");
    for (Eigen::Index j = 0; j < cols; ++j)
      out(i, j) = complex_at(row[static_cast<std::size_t>(j)],
                             where + " entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
  }
  return out;
}

CVector complex_vector(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw ValidationError(where + " must be a nonempty vector");
  CVector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = complex_at(v[i], where + " entry " + std::to_string(i));
  return out;
}

ConfusabilityGraph graph_from(const json& doc, const std::string& where) {
  const json& n = field(doc, "n", where);
  if (!n.is_number_integer() || n.get<long long>() < 0)
    throw ValidationError(where + " field \"n\" must be a nonnegative integer");
  const auto count = n.get<std::size_t>();
  if (count > max_graph_vertices)
    throw CapacityError("graph has " + std::to_string(count) + " vertices, cap is " +
                        std::to_string(max_graph_vertices));
  std::vector<Edge> edges;
  const json& es = array_field(doc, "edges", where);
  for (std::size_t k = 0; k < es.size(); ++k) {
    const json& e = es[k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
        e[0].get<long long>() < 0 || e[1].get<long long>() < 0)
      throw ValidationError(where + " edge " + std::to_string(k) +
                            " must be a pair of vertex indices");
    edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
  }
  return ConfusabilityGraph(count, edges);
}

InputDocument representation_from(const json& doc) {
  const std::string where = "representation";
  ConfusabilityGraph g = graph_from(doc, where);
  const bool has_vectors = doc.contains("vectors");
  const bool has_projectors = doc.contains("projectors");
  if (has_vectors == has_projectors)
    throw ValidationError("representation needs exactly one of \"vectors\" or \"projectors\"");
  if (has_vectors) {
    std::vector<CVector> us;
    const json& vs = array_field(doc, "vectors", where);
    for (std::size_t x = 0; x < vs.size(); ++x)
      us.push_back(complex_vector(vs[x], "vector " + std::to_string(x)));
    std::optional<CVector> handle;
    if (doc.contains("handle")) handle = complex_vector(doc["handle"], "handle");
    return VectorRepresentation(std::move(g), std::move(us), std::move(handle));
  }
  std::vector<CMatrix> ps;
  const json& list = array_field(doc, "projectors", where);
  for (std::size_t x = 0; x < list.size(); ++x)
    ps.push_back(complex_matrix(list[x], "projector " + std::to_string(x)));
  std::optional<DensityOperator> handle;
  if (doc.contains("handle")) handle = DensityOperator(complex_matrix(doc["handle"], "handle"));
  return ProjectorRepresentation(std::move(g), std::move(ps), std::move(handle));
}

// -------------------------------------------------------------------------
// output helpers

class Writer {
 public:
  explicit Writer(Units u) : bits_(u == Units::bits) {}

  // information quantity in the requested units; null when infinite
  json info(double nats) const {
    if (std::isinf(nats)) return nullptr;
    return bits_ ? nats / std::numbers::ln2 : nats;
  }

  // info() plus the sibling flag
  void put(json& obj, const char* key, double nats) const {
    obj[key] = info(nats);
    if (std::isinf(nats)) obj["is_infinite"] = true;
  }

 private:
  bool bits_;
};

json distribution(const ProbabilityDistribution& p) {
  json out = json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) out.push_back(p[i]);
  return out;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const CMatrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    out.push_back(row);
  }
  return out;
}

json vector_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

json center_json(const RadiusCenter& c) {
  if (const auto* p = std::get_if<ProbabilityDistribution>(&c)) return distribution(*p);
  return matrix_json(std::get<DensityOperator>(c).matrix());
}

json report_json(const SolverReport& r, const Writer& w, std::uint64_t seed) {
  json out;
  out["converged"] = r.converged;
  out["gap"] = w.info(r.gap);
  out["iterations"] = r.iterations;
  out["seed"] = seed;
  return out;
}

std::string kind_of(const InputDocument& d) {
  switch (d.index()) {
    case 0: return "classical";
    case 1: return "cq";
    case 2: return "graph";
    default: return "representation";
  }
}

const char* units_name(Units u) { return u == Units::bits ? "bits" : "nats"; }

void reject(bool given, const char* flag, Command c) {
  if (given)
    throw ValidationError(std::string(flag) + " is not used by " + std::string(command_name(c)));
}

std::string fmt_csv(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.12g", v);
  return buf;
}

ConfusabilityGraph graph_of(const InputDocument& d) {
  return std::visit(
      [](const auto& v) -> ConfusabilityGraph {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ConfusabilityGraph>) {
          return v;
        } else if constexpr (std::is_same_v<T, ClassicalChannel> || std::is_same_v<T, CQChannel>) {
          return confusability_graph(v);
        } else {
          return v.graph();
        }
      },
      d);
}

const ClassicalChannel& need_classical(const InputDocument& d, Command c) {
  if (const auto* w = std::get_if<ClassicalChannel>(&d)) return *w;
  throw ValidationError(std::string(command_name(c)) + " needs a classical channel, got " +
                        kind_of(d));
}

bool is_channel(const InputDocument& d) { return d.index() <= 1; }

// -------------------------------------------------------------------------
// commands

struct Context {
  Context(const JobSpec& j, const InputDocument& in) : job(j), input(in), w(j.units) {}

  const JobSpec& job;
  const InputDocument& input;
  SolverConfig cfg;
  Writer w;
  json result = json::object();
  json solver = json::object();
  bool converged = true;
  std::optional<SpherePackingCurve> curve;

  void report(const SolverReport& r) {
    solver = report_json(r, w, job.seed);
    converged = converged && r.converged;
  }
};

void run_capacity(Context& ctx) {
  const auto& ch = need_classical(ctx.input, ctx.job.command);
  const auto ba = capacity_classical(ch, ctx.cfg);
  const auto mm = capacity_minmax(ch, ctx.cfg);
  ctx.w.put(ctx.result, "capacity", ba.value);
  ctx.result["input_distribution"] = distribution(ba.input);
  ctx.result["minmax"] = ctx.w.info(mm.value);
  ctx.result["minmax_gap"] = ctx.w.info(mm.gap);
  ctx.result["minmax_center"] = center_json(mm.center);
  ctx.report(ba.report);
  ctx.converged = ctx.converged && mm.report.converged;
}

template <typename Ch>
void run_e0_on(Context& ctx, const Ch& ch) {
  const double rho = *ctx.job.rho;
  const auto pt = e0_max(ch, rho, ctx.cfg);
  ctx.result["rho"] = rho;
  if (ctx.job.command == Command::rrho) {
    ctx.w.put(ctx.result, "r_rho", pt.e0 / rho);
  } else {
    ctx.w.put(ctx.result, "e0", pt.e0);
  }
  ctx.result["optimal_input"] = distribution(pt.optimal_input);
  ctx.result["restart_spread"] = ctx.w.info(pt.restart_spread);
  ctx.report(pt.report);
}

template <typename Ch>
void run_curve_on(Context& ctx, const Ch& ch) {
  std::vector<double> rates =
      ctx.job.rate_grid ? ctx.job.rate_grid->points() : std::vector<double>{*ctx.job.rate};
  auto curve = esp_curve(ch, rates, ctx.cfg);
  ctx.w.put(ctx.result, "r_inf", curve.r_inf);
  json pts = json::array();
  for (const auto& p : curve.points) {
    json row;
    row["rate"] = ctx.w.info(p.rate);
    row["esp"] = ctx.w.info(p.esp);
    row["is_infinite"] = std::isinf(p.esp);
    pts.push_back(row);
  }
  ctx.result["points"] = pts;
  ctx.solver = {{"converged", true}, {"seed", ctx.job.seed}};
  ctx.curve = std::move(curve);
}

template <typename Ch>
void run_radius_on(Context& ctx, const Ch& ch) {
  const double alpha = ctx.job.alpha ? *ctx.job.alpha : alpha_of_rho(*ctx.job.rho);
  const auto r = radius_solve(ch, alpha, ctx.cfg);
  ctx.result["alpha"] = alpha;
  ctx.w.put(ctx.result, "radius", r.value);
  ctx.result["center"] = center_json(r.center);
  ctx.report(r.report);
}

void run_rinf(Context& ctx) {
  if (!is_channel(ctx.input))
    throw ValidationError("rinf needs a channel, got " + kind_of(ctx.input));
  if (const auto* w = std::get_if<ClassicalChannel>(&ctx.input)) {
    const auto r = r_inf_classical(*w, ctx.cfg);
    ctx.w.put(ctx.result, "r_inf", r.primal);
    ctx.result["input_distribution"] = distribution(r.input);
    ctx.result["dual"] = ctx.w.info(r.dual.value);
    ctx.result["dual_center"] = center_json(r.dual.center);
    ctx.report(r.dual.report);
    return;
  }
  const auto r = r_inf_quantum(std::get<CQChannel>(ctx.input), ctx.cfg);
  ctx.w.put(ctx.result, "r_inf", r.value);
  ctx.result["center"] = center_json(r.center);
  ctx.report(r.report);
}

void run_cfb(Context& ctx) {
  const auto r = c_fb(need_classical(ctx.input, ctx.job.command));
  ctx.w.put(ctx.result, "c_fb", r.value);
  ctx.result["input_distribution"] = distribution(r.input);
  ctx.result["gap"] = ctx.w.info(r.gap);
  ctx.solver = {{"converged", true}, {"gap", ctx.w.info(r.gap)}, {"seed", ctx.job.seed}};
}

void run_theta(Context& ctx) {
  const auto g = graph_of(ctx.input);
  try {
    const auto cert = theta(g, ctx.cfg);
    ctx.result["theta_log"] = ctx.w.info(cert.theta_log);
    ctx.result["theta"] = cert.primal_value;
    ctx.result["dual_value"] = cert.dual_value;
    ctx.result["gap"] = cert.duality_gap;
    ctx.solver = {{"converged", true},
                  {"gap", cert.duality_gap},
                  {"iterations", cert.iterations},
                  {"seed", ctx.job.seed}};
  } catch (const ConvergenceError& e) {
    ctx.result["theta_log"] = ctx.w.info(e.best_value());
    ctx.result["gap"] = e.gap();
    ctx.solver = {{"converged", false}, {"gap", e.gap()}, {"seed", ctx.job.seed}};
    ctx.converged = false;
  }
}

void run_value(Context& ctx) {
  const auto* rep = std::get_if<VectorRepresentation>(&ctx.input);
  if (!rep)
    throw ValidationError("value needs a representation with \"vectors\", got " +
                          kind_of(ctx.input));
  const auto v = lovasz_value(*rep, ctx.cfg);
  ctx.w.put(ctx.result, "value", v.value);
  ctx.result["handle"] = vector_json(v.handle);
  ctx.result["relaxation_value"] = ctx.w.info(v.relaxation_value);
  ctx.result["relaxation_gap"] = ctx.w.info(v.relaxation_gap);
  SolverReport r;
  r.value = v.relaxation_value;
  r.gap = v.relaxation_gap;
  r.converged = v.relaxation_gap <= ctx.cfg.tolerance;
  ctx.report(r);
}

ProjectorRepresentation projectors_of(const InputDocument& d, Command c) {
  if (const auto* v = std::get_if<VectorRepresentation>(&d))
    return ProjectorRepresentation::from_vectors(*v);
  if (const auto* p = std::get_if<ProjectorRepresentation>(&d)) return *p;
  throw ValidationError(std::string(command_name(c)) + " needs a representation, got " +
                        kind_of(d));
}

void run_value_sp(Context& ctx) {
  const auto v = value_sp(projectors_of(ctx.input, ctx.job.command), ctx.cfg);
  ctx.w.put(ctx.result, "value", v.value);
  ctx.result["handle"] = matrix_json(v.handle.matrix());
  ctx.report(v.report);
}

void run_zero_error_bound(Context& ctx) {
  const int n = *ctx.job.blocklength;
  const auto g = graph_of(ctx.input);
  if (g.size() == 0) throw ValidationError("graph has no vertices");
  const auto set = max_independent_set(strong_power(g, n));
  ctx.result["blocklength"] = n;
  ctx.result["independence_number"] = set.size;
  json code = json::array();
  for (auto idx : set.witness) code.push_back(decode_sequence(idx, g.size(), n));
  ctx.result["code"] = code;
  ctx.w.put(ctx.result, "lower_bound", std::log(static_cast<double>(set.size)) / n);
  ctx.solver = {{"converged", true}, {"seed", ctx.job.seed}};
}

void run_certify(Context& ctx) {
  const auto g = graph_of(ctx.input);
  std::vector<ProjectorRepresentation> reps;
  if (ctx.input.index() >= 3) reps.push_back(projectors_of(ctx.input, ctx.job.command));
  const auto r = certify_capacity_bounds(g, reps, *ctx.job.blocklength, ctx.cfg);
  ctx.result["lower"] = ctx.w.info(r.lower);
  ctx.result["lower_blocklength"] = r.lower_blocklength;
  ctx.result["theta_log"] = ctx.w.info(r.theta_log);
  ctx.result["theta_sp_log"] = ctx.w.info(r.theta_sp_log);
  ctx.solver = {{"converged", true}, {"seed", ctx.job.seed}};
}

template <typename Fn>
void on_channel(Context& ctx, Fn&& fn) {
  if (const auto* w = std::get_if<ClassicalChannel>(&ctx.input)) return fn(*w);
  if (const auto* q = std::get_if<CQChannel>(&ctx.input)) return fn(*q);
  throw ValidationError(std::string(command_name(ctx.job.command)) + " needs a channel, got " +
                        kind_of(ctx.input));
}

}  // namespace

// ---------------------------------------------------------------------------

std::optional<Command> parse_command(std::string_view name) {
  for (const auto& [c, n] : command_names)
    if (n == name) return c;
  return std::nullopt;
}

std::string_view command_name(Command c) {
  for (const auto& [k, n] : command_names)
    if (k == c) return n;
  return "unknown";
}

// optional "labels": one string per input symbol, for reporting only
std::vector<std::string> labels_from(const json& doc, Eigen::Index inputs) {
  if (!doc.contains("labels")) return {};
  const json& ls = array_field(doc, "labels", "input");
  if (static_cast<Eigen::Index>(ls.size()) != inputs)
    throw ValidationError("labels has " + std::to_string(ls.size()) + " entries, channel has " +
                          std::to_string(inputs) + " inputs");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (!ls[i].is_string()) throw ValidationError("label " + std::to_string(i) + " must be a string");
    out.push_back(ls[i].get<std::string>());
  }
  return out;
}

InputDocument parse_document(const json& doc) {
  if (!doc.is_object()) throw ValidationError("input must be a JSON object");
  const json& kind = field(doc, "kind", "input");
  if (!kind.is_string()) throw ValidationError("\"kind\" must be a string");
  const auto k = kind.get<std::string>();
  if (k == "classical") {
    const json& rows = array_field(doc, "W", "classical channel");
    std::vector<std::vector<double>> w;
    for (std::size_t x = 0; x < rows.size(); ++x) {
      if (!rows[x].is_array()) throw ValidationError("row " + std::to_string(x) + " must be an array");
      std::vector<double> row;
      for (std::size_t y = 0; y < rows[x].size(); ++y)
        row.push_back(number_at(rows[x][y], "row " + std::to_string(x) + " entry " +
                                                std::to_string(y)));
      w.push_back(std::move(row));
    }
    ClassicalChannel ch = validate_classical(w);
    ch.input_labels = labels_from(doc, ch.input_size());
    return ch;
  }
  if (k == "cq") {
    const json& states = array_field(doc, "states", "cq channel");
    std::vector<CMatrix> mats;
    for (std::size_t x = 0; x < states.size(); ++x)
      mats.push_back(complex_matrix(states[x], "state " + std::to_string(x)));
    CQChannel ch = validate_cq(mats);
    ch.input_labels = labels_from(doc, ch.input_size());
    return ch;
  }
  if (k == "graph") return graph_from(doc, "graph");
  if (k == "representation") return representation_from(doc);
  throw ValidationError("unknown kind \"" + k + "\"");
}

InputDocument load_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return parse_document(doc);
}

Channel load_channel(const std::filesystem::path& path) {
  auto d = load_document(path);
  if (auto* w = std::get_if<ClassicalChannel>(&d)) return std::move(*w);
  if (auto* q = std::get_if<CQChannel>(&d)) return std::move(*q);
  throw ValidationError(path.string() + " holds a " + kind_of(d) + ", not a channel");
}

ConfusabilityGraph load_graph(const std::filesystem::path& path) {
  return graph_of(load_document(path));
}

std::vector<double> RateGrid::points() const {
  std::vector<double> out;
  for (std::size_t k = 0;; ++k) {
    const double r = start + static_cast<double>(k) * step;
    if (r > stop + 1e-9 * step) break;
    out.push_back(r);
  }
  return out;
}

RateGrid parse_rate_grid(std::string_view text) {
  std::array<double, 3> parts{};
  std::size_t pos = 0;
  for (int k = 0; k < 3; ++k) {
    auto end = text.find(':', pos);
    if ((k < 2) != (end != std::string_view::npos))
      throw ValidationError("rate grid must look like A:B:STEP, got \"" + std::string(text) + "\"");
    std::string piece(text.substr(pos, end == std::string_view::npos ? text.npos : end - pos));
    char* stop = nullptr;
    parts[static_cast<std::size_t>(k)] = std::strtod(piece.c_str(), &stop);
    if (piece.empty() || stop != piece.c_str() + piece.size() ||
        !std::isfinite(parts[static_cast<std::size_t>(k)]))
      throw ValidationError("rate grid field \"" + piece + "\" is not a finite number");
    pos = end + 1;
  }
  RateGrid g{parts[0], parts[1], parts[2]};
  if (g.start < 0.0) throw ValidationError("rate grid must start at a nonnegative rate");
  if (g.stop < g.start) throw ValidationError("rate grid end is below its start");
  if (!(g.step > 0.0)) throw ValidationError("rate grid step must be positive");
  if ((g.stop - g.start) / g.step + 1.0 > static_cast<double>(max_grid_points))
    throw ValidationError("rate grid has more than " + std::to_string(max_grid_points) + " points");
  return g;
}

void JobSpec::validate() const {
  if (!(tolerance > 0.0) || !std::isfinite(tolerance))
    throw DomainError("--tol must be a positive finite number");
  if (input_path.empty()) throw ValidationError("--input is required");
  const Command c = command;
  const bool uses_rho = c == Command::e0 || c == Command::rrho || c == Command::radius;
  const bool uses_alpha = c == Command::radius;
  const bool uses_rates = c == Command::esp_curve;
  const bool uses_n = c == Command::zero_error_bound || c == Command::certify;
  reject(rho && !uses_rho, "--rho", c);
  reject(alpha && !uses_alpha, "--alpha", c);
  reject((rate || rate_grid) && !uses_rates, rate ? "--rate" : "--rate-grid", c);
  reject(blocklength && !uses_n, "--blocklength", c);

  if (rho && (!std::isfinite(*rho) || *rho < 0.0))
    throw DomainError("--rho must be a finite number >= 0");
  if ((c == Command::rrho || c == Command::e0) && !rho)
    throw ValidationError(std::string(command_name(c)) + " needs --rho");
  if (c == Command::rrho && !(*rho > 0.0)) throw DomainError("rrho needs --rho > 0");
  if (c == Command::radius) {
    if (rho.has_value() == alpha.has_value())
      throw ValidationError("radius needs exactly one of --alpha or --rho");
    if (alpha && !(*alpha > 0.0 && *alpha < 1.0))
      throw DomainError("--alpha must lie in (0,1)");
    if (rho && !(*rho > 0.0)) throw DomainError("radius needs --rho > 0");
  }
  if (uses_rates) {
    if (rate.has_value() == rate_grid.has_value())
      throw ValidationError("esp-curve needs exactly one of --rate or --rate-grid");
    if (rate && !(std::isfinite(*rate) && *rate >= 0.0))
      throw DomainError("--rate must be a finite number >= 0");
  }
  if (uses_n) {
    if (!blocklength)
      throw ValidationError(std::string(command_name(c)) + " needs --blocklength");
    if (*blocklength < 1) throw DomainError("--blocklength must be >= 1");
  }
}

RunResult run(const JobSpec& job) {
  job.validate();
  const InputDocument input = load_document(job.input_path);
  Context ctx(job, input);
  ctx.cfg.tolerance = job.tolerance;
  ctx.cfg.seed = job.seed;
  ctx.cfg.validate();

  switch (job.command) {
    case Command::capacity: run_capacity(ctx); break;
    case Command::e0:
    case Command::rrho: on_channel(ctx, [&](const auto& ch) { run_e0_on(ctx, ch); }); break;
    case Command::esp_curve: on_channel(ctx, [&](const auto& ch) { run_curve_on(ctx, ch); }); break;
    case Command::radius: on_channel(ctx, [&](const auto& ch) { run_radius_on(ctx, ch); }); break;
    case Command::rinf: run_rinf(ctx); break;
    case Command::cfb: run_cfb(ctx); break;
    case Command::theta: run_theta(ctx); break;
    case Command::value: run_value(ctx); break;
    case Command::value_sp: run_value_sp(ctx); break;
    case Command::zero_error_bound: run_zero_error_bound(ctx); break;
    case Command::certify: run_certify(ctx); break;
  }

  json params = json::object();
  if (job.rho) params["rho"] = *job.rho;
  if (job.alpha) params["alpha"] = *job.alpha;
  if (job.rate) params["rate"] = *job.rate;
  if (job.rate_grid)
    params["rate_grid"] = {job.rate_grid->start, job.rate_grid->stop, job.rate_grid->step};
  if (job.blocklength) params["blocklength"] = *job.blocklength;
  params["tolerance"] = job.tolerance;
  params["seed"] = job.seed;
  params["units"] = units_name(job.units);

  json source = {{"path", job.input_path}, {"kind", kind_of(input)}};
  const std::vector<std::string>* labels = nullptr;
  if (const auto* c = std::get_if<ClassicalChannel>(&input)) labels = &c->input_labels;
  if (const auto* c = std::get_if<CQChannel>(&input)) labels = &c->input_labels;
  if (labels && !labels->empty()) source["labels"] = *labels;

  RunResult out;
  out.document = {{"command", std::string(command_name(job.command))},
                  {"input", source},
                  {"params", params},
                  {"result", ctx.result},
                  {"solver", ctx.solver}};
  out.converged = ctx.converged;
  out.curve = std::move(ctx.curve);
  return out;
}

std::string format_curve(const SpherePackingCurve& curve) {
  std::string out = "R_nats,Esp_nats\n";
  for (const auto& p : curve.points) out += fmt_csv(p.rate) + "," + fmt_csv(p.esp) + "\n";
  return out;
}

std::vector<CurvePoint> parse_curve(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) || line != "R_nats,Esp_nats")
    throw ValidationError("curve CSV must start with the header R_nats,Esp_nats");
  std::vector<CurvePoint> out;
  auto cell = [](const std::string& s, std::size_t row) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
      throw ValidationError("curve row " + std::to_string(row) + " has a bad number \"" + s + "\"");
    return v;
  };
  for (std::size_t row = 0; std::getline(in, line); ++row) {
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ValidationError("curve row " + std::to_string(row) + " needs two columns");
    out.push_back({cell(line.substr(0, comma), row), cell(line.substr(comma + 1), row)});
  }
  return out;
}

void export_curve(const SpherePackingCurve& curve, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << format_curve(curve);
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

std::string render_table(const json& document) {
  std::ostringstream os;
  auto scalar = [](const json& v) -> std::string {
    if (v.is_null()) return "inf";
    if (v.is_number_float()) {
      std::ostringstream s;
      s << std::setprecision(10) << v.get<double>();
      return s.str();
    }
    return v.dump();
  };
  os << document.value("command", "") << "  (" << document["params"].value("units", "nats")
     << ")\n";
  const json& r = document["result"];
  if (r.contains("points")) {
    os << std::left << std::setw(20) << "rate" << "esp\n";
    for (const auto& p : r["points"])
      os << std::left << std::setw(20) << scalar(p["rate"]) << scalar(p["esp"]) << "\n";
  }
  for (const auto& [k, v] : r.items()) {
    if (k == "points" || v.is_array() || v.is_object()) continue;
    os << std::left << std::setw(20) << k << scalar(v) << "\n";
  }
  for (const auto& [k, v] : document["solver"].items())
    os << std::left << std::setw(20) << k << scalar(v) << "\n";
  return os.str();
}

}  // namespace sptheta::cli
