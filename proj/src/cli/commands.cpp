#include "commands.hpp"

#include "config.hpp"

#include "mshimura/galois.hpp"
#include "mshimura/growth.hpp"
#include "mshimura/harvest.hpp"
#include "mshimura/theta.hpp"
#include "mshimura/uniformization.hpp"
#include "mshimura/volume.hpp"
#include "mshimura/weakly_special.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

namespace mshimura::cli {

namespace {

constexpr int kOk = 0, kConfigError = 1, kLowConfidence = 2;

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Json number(double x) { return std::isfinite(x) ? Json(std::stod(fmt(x))) : Json(nullptr); }

struct Context {
  const Options& opts;
  std::ostream& log;
  Json config;
  std::filesystem::path out;

  void write(const std::string& name, const std::string& text) const {
    std::ofstream f(out / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (out / name).string());
    f << text;
  }
  void write(const std::string& name, const Json& j) const { write(name, j.dump(2) + "\n"); }
};

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::string s;
  auto line = [&](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
    s += "\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return s;
}

Json fit_json(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 4) return nullptr;
  try {
    const GrowthFit fit = fit_loglog(x, y);
    Json sched = Json::array();
    for (double m : fit.schedule) sched.push_back(number(m));
    return {{"slope", number(fit.slope)}, {"intercept", number(fit.intercept)}, {"r2", number(fit.r2)}, {"schedule", sched}};
  } catch (const std::invalid_argument&) {
    return nullptr;
  }
}

// ---------------------------------------------------------------------------

int cmd_count(Context& ctx) {
  Reader r(ctx.config, "$");
  const ParamCurve curve = parse_curve(r.at("curve"), r.path("curve"));
  const Json& sched = array(r.at("schedule"), r.path("schedule"));
  if (sched.empty()) throw ConfigError(r.path("schedule"), "empty schedule");
  std::vector<long long> Ms;
  for (size_t i = 0; i < sched.size(); ++i) {
    const std::string p = r.path("schedule") + "[" + std::to_string(i) + "]";
    if (!sched[i].is_number_integer()) throw ConfigError(p, "expected an integer");
    const long long M = sched[i].get<long long>();
    if (M < 1 || M > 32767) throw ConfigError(p, "must lie in [1, 32767]");
    if (!Ms.empty() && M <= Ms.back()) throw ConfigError(p, "schedule must be strictly increasing");
    Ms.push_back(M);
  }
  ThetaConfig cfg;
  cfg.threads = ctx.opts.threads;
  if (r.has("resolution")) {
    Reader res(r.at("resolution"), r.path("resolution"));
    cfg.initial_step = res.number("initial_step", cfg.initial_step);
    if (!(cfg.initial_step > 0)) throw ConfigError(res.path("initial_step"), "must be positive");
    cfg.max_depth = static_cast<int>(res.integer("max_depth", 0, 40, cfg.max_depth));
    res.finish();
  }
  cfg.low_confidence_ratio = r.number("low_confidence_ratio", cfg.low_confidence_ratio);
  const bool with_volume = r.boolean("volume", true) && curve.parameter() == Parameter::Complex;
  const bool record_runtime = r.boolean("record_runtime", false);
  r.finish();

  std::vector<std::vector<std::string>> rows;
  std::vector<double> xs, ys;
  Json flagged = Json::array();
  bool low = false;
  for (long long M : Ms) {
    const auto t0 = std::chrono::steady_clock::now();
    ThetaRun run = theta_count(curve, M, cfg);
    if (with_volume) run.record.volume = curve_volume(curve, static_cast<double>(M), false).value;
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    const ThetaRecord& rec = run.record;
    rows.push_back({std::to_string(M), std::to_string(rec.count), std::to_string(rec.uncertain), fmt(rec.volume),
                    record_runtime ? fmt(ms) : "0"});
    ctx.log << "M=" << M << " count=" << rec.count << " uncertain=" << rec.uncertain << "\n";
    if (rec.low_confidence) {
      low = true;
      flagged.push_back(M);
    }
    if (rec.count > 0) {
      xs.push_back(static_cast<double>(M));
      ys.push_back(static_cast<double>(rec.count));
    }
  }
  ctx.write("count.csv", csv({"M", "count", "uncertain", "volume", "runtime_ms"}, rows));
  ctx.write("growth.json", Json{{"fit", fit_json(xs, ys)}, {"low_confidence", flagged}});
  return low ? kLowConfidence : kOk;
}

int cmd_volume(Context& ctx) {
  Reader r(ctx.config, "$");
  const ParamCurve curve = parse_curve(r.at("curve"), r.path("curve"));
  if (curve.parameter() != Parameter::Complex) throw ConfigError(r.path("curve"), "a complex parameter is required");
  const Json& sched = array(r.at("schedule"), r.path("schedule"));
  if (sched.empty()) throw ConfigError(r.path("schedule"), "empty schedule");
  std::vector<double> Ms;
  for (size_t i = 0; i < sched.size(); ++i) {
    const std::string p = r.path("schedule") + "[" + std::to_string(i) + "]";
    if (!sched[i].is_number() || !(sched[i].get<double>() > 0)) throw ConfigError(p, "expected a positive number");
    if (!Ms.empty() && sched[i].get<double>() <= Ms.back()) throw ConfigError(p, "schedule must be strictly increasing");
    Ms.push_back(sched[i].get<double>());
  }
  const bool truncate = r.boolean("truncate", false);
  const double tol = r.number("tolerance", 1e-2);
  if (!(tol > 0 && tol < 1)) throw ConfigError(r.path("tolerance"), "must lie in (0, 1)");
  r.finish();

  std::vector<std::vector<std::string>> rows;
  std::vector<double> xs, ys;
  bool all_converged = true;
  for (double M : Ms) {
    const VolumeResult v = curve_volume(curve, M, truncate, tol);
    rows.push_back({fmt(M), fmt(v.value), fmt(v.achieved_tolerance), v.converged ? "1" : "0"});
    all_converged = all_converged && v.converged;
    if (v.value > 0) {
      xs.push_back(M);
      ys.push_back(v.value);
    }
  }
  ctx.write("volume.csv", csv({"M", "volume", "achieved_tolerance", "converged"}, rows));
  ctx.write("growth.json", Json{{"fit", fit_json(xs, ys)}, {"converged", all_converged}});
  return all_converged ? kOk : kLowConfidence;
}

Complex parse_complex(const Json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError(path, "expected a number or [re, im]");
}

Json complex_json(Complex z) { return Json::array({number(z.real()), number(z.imag())}); }

int cmd_reduce(Context& ctx) {
  Reader r(ctx.config, "$");
  const DatumPtr datum = parse_datum(r.at("datum"), r.path("datum"));
  if (datum->genus() > 1) throw ConfigError(r.path("datum"), "reduction requires g <= 1");
  const Json& points = array(r.at("points"), r.path("points"));
  r.finish();
  // Parse everything before computing.
  struct Input {
    ComplexVec u;
    RealVec v;
    std::optional<Complex> tau;
  };
  std::vector<Input> inputs;
  for (size_t i = 0; i < points.size(); ++i) {
    Reader pr(points[i], r.path("points") + "[" + std::to_string(i) + "]");
    Input in;
    const Json& u = array(pr.at("u"), pr.path("u"));
    in.u.resize(static_cast<Eigen::Index>(u.size()));
    for (size_t k = 0; k < u.size(); ++k) in.u(static_cast<Eigen::Index>(k)) = parse_complex(u[k], pr.path("u"));
    const Json& v = array(pr.at("v"), pr.path("v"));
    in.v.resize(static_cast<Eigen::Index>(v.size()));
    for (size_t k = 0; k < v.size(); ++k) {
      if (!v[k].is_number()) throw ConfigError(pr.path("v"), "expected numbers");
      in.v(static_cast<Eigen::Index>(k)) = v[k].get<double>();
    }
    if (pr.has("tau")) in.tau = parse_complex(pr.at("tau"), pr.path("tau"));
    pr.finish();
    inputs.push_back(std::move(in));
  }
  Json results = Json::array();
  for (size_t i = 0; i < inputs.size(); ++i) {
    Json entry{{"index", i}};
    try {
      const DomainPoint x(datum, inputs[i].u, inputs[i].v, inputs[i].tau);
      const Reduction red = reduce(x, datum->level());
      const DomainPoint check = act(red.gamma, x);
      Json y{{"u", Json::array()}, {"v", Json::array()}};
      for (Eigen::Index k = 0; k < red.y.u.size(); ++k) y["u"].push_back(complex_json(red.y.u(k)));
      for (Eigen::Index k = 0; k < red.y.v.size(); ++k) y["v"].push_back(number(red.y.v(k)));
      if (red.y.tau) y["tau"] = complex_json(*red.y.tau);
      entry["gamma"] = {{"u", to_json(red.gamma.u())}, {"v", to_json(red.gamma.v())}, {"m", to_json(red.gamma.m())}};
      entry["y"] = y;
      entry["residual"] = number(distance(check, red.y));
      entry["in_fundamental_set"] = in_fundamental_set(red.y);
    } catch (const std::exception& e) {
      entry["error"] = e.what();
    }
    results.push_back(std::move(entry));
  }
  ctx.write("reduce.json", Json{{"results", results}});
  return kOk;
}

std::vector<RatVec> parse_vectors(const Json& j, const std::string& path) {
  std::vector<RatVec> out;
  for (size_t i = 0; i < array(j, path).size(); ++i) out.push_back(parse_rat_vector(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

int cmd_classify(Context& ctx) {
  Reader r(ctx.config, "$");
  WeaklySpecialCandidate c;
  c.datum = parse_datum(r.at("datum"), r.path("datum"));
  c.w0 = parse_vectors(r.at("w0"), r.path("w0"));
  c.z_u = r.has("z_u") ? parse_rat_vector(r.at("z_u"), r.path("z_u")) : RatVec(RatVec::Zero(c.datum->u_dim()));
  c.z_v = parse_rat_vector(r.at("z_v"), r.path("z_v"));
  if (r.has("J")) c.J = parse_rat_matrix(r.at("J"), r.path("J"));
  std::optional<Lattice> gamma_u;
  if (r.has("gamma_u")) {
    std::vector<IntVec> gens;
    const Json& rows = array(r.at("gamma_u"), r.path("gamma_u"));
    for (size_t i = 0; i < rows.size(); ++i) gens.push_back(parse_int_vector(rows[i], r.path("gamma_u") + "[" + std::to_string(i) + "]"));
    for (const auto& g : gens)
      if (g.size() != c.datum->u_dim()) throw ConfigError(r.path("gamma_u"), "rows must have length r");
    gamma_u = Lattice::from_generators(gens, c.datum->u_dim());
  }
  r.finish();
  Verdict v;
  RatMat u0, v0;
  try {
    v = is_weakly_special_fiber(c);
    u0 = candidate_u0(c);
    v0 = candidate_v0(c);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("$", e.what());
  }
  Json out{{"weakly_special", v.weakly_special}, {"reason", v.reason}, {"u0", to_json(u0)}, {"v0", to_json(v0)}};
  if (gamma_u) {
    std::vector<RatVec> gens;
    for (const auto& w : c.w0)
      if (!all_zero(w.tail(c.datum->v_dim()))) gens.push_back(w.tail(c.datum->v_dim()));
    out["half_psi_integral"] = half_psi_integrality(*c.datum, gens, c.z_v, *gamma_u);
  }
  ctx.write("classify.json", out);
  return kOk;
}

int cmd_subtorus(Context& ctx) {
  Reader r(ctx.config, "$");
  MonodromyData data;
  data.dim = r.integer("dimension", 0, 64);
  const Json& gens = array(r.at("generators"), r.path("generators"));
  for (size_t i = 0; i < gens.size(); ++i) {
    const std::string p = r.path("generators") + "[" + std::to_string(i) + "]";
    IntVec g = parse_int_vector(gens[i], p);
    if (g.size() != data.dim) throw ConfigError(p, "length differs from dimension");
    data.generators.push_back(std::move(g));
  }
  std::optional<RatMat> J;
  if (r.has("J")) J = parse_rat_matrix(r.at("J"), r.path("J"));
  std::optional<std::pair<ParamCurve, long long>> harvest;
  if (r.has("harvest")) {
    Reader h(r.at("harvest"), r.path("harvest"));
    ParamCurve curve = parse_curve(h.at("curve"), h.path("curve"));
    harvest.emplace(std::move(curve), h.integer("M", 1, 64));
    h.finish();
  }
  r.finish();
  const Lattice torus = smallest_subtorus(data);
  Json out{{"subtorus", to_json(torus)}, {"rank", torus.rank()}};
  if (J) {
    try {
      const Lattice ab = smallest_subabelian(data, *J);
      out["subabelian"] = to_json(ab);
      out["subabelian_rank"] = ab.rank();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(r.path("J"), e.what());
    }
  }
  if (harvest) {
    ThetaConfig cfg;
    cfg.threads = ctx.opts.threads;
    const ThetaRun run = theta_count(harvest->first, harvest->second, cfg);
    const Lattice stab = harvest_stabilizer(harvest->first, run.gammas);
    out["stabilizer"] = to_json(stab);
    out["stabilizer_rank"] = stab.rank();
    out["stabilizer_exact"] = translation_stabilizer(harvest->first).exact();
  }
  ctx.write("subtorus.json", out);
  return kOk;
}

void parse_unit_interval(Reader& r, const std::string& key, double& value) {
  value = r.number(key);
  if (!(value > 0 && value < 1)) throw ConfigError(r.path(key), "must lie in (0, 1)");
}

int cmd_orbit(Context& ctx) {
  Reader r(ctx.config, "$");
  double B = 0, eps = 0;
  parse_unit_interval(r, "B", B);
  parse_unit_interval(r, "epsilon", eps);
  const auto n_max = static_cast<std::uint64_t>(r.integer("n_max", 1, 10000000, 100000));
  const DatumPtr datum = r.has("datum") ? parse_datum(r.at("datum"), r.path("datum")) : SymplecticDatum::standard(1, 4);
  std::vector<HeisenbergElement<Rat>> checks;
  if (r.has("cross_check")) {
    const Json& list = array(r.at("cross_check"), r.path("cross_check"));
    for (size_t i = 0; i < list.size(); ++i) {
      Reader w(list[i], r.path("cross_check") + "[" + std::to_string(i) + "]");
      RatVec u = w.has("u") ? parse_rat_vector(w.at("u"), w.path("u")) : RatVec(RatVec::Zero(datum->u_dim()));
      RatVec v = parse_rat_vector(w.at("v"), w.path("v"));
      w.finish();
      if (u.size() != datum->u_dim() || v.size() != datum->v_dim()) throw ConfigError(w.path(), "shape does not match the datum");
      checks.emplace_back(datum, std::move(u), std::move(v));
    }
  }
  const long long guard = r.integer("guard", 1, 8, 2);
  r.finish();

  std::vector<SweepRow> rows;
  const SweepSummary s = bound_sweep(n_max, B, eps, &rows);
  std::string text = "N,omega,euler_product,ell,ratio\n";
  for (const auto& row : rows)
    text += std::to_string(row.N) + "," + std::to_string(row.omega) + "," + fmt(row.euler_product) + "," + fmt(row.ell) +
            "," + fmt(row.ratio) + "\n";
  ctx.write("orbit.csv", text);

  Json cross = Json::array();
  for (const auto& w : checks) {
    const Integer N = ord(w);
    Json entry{{"ord", N.str()}, {"closed_form", to_json(index_lower_bound(w))}, {"cases", Json::array()}};
    if (N > 1000000) throw ConfigError("$.cross_check", "ord(w) too large for enumeration");
    Integer product = 1;
    for (const auto& c : local_cases(w)) {
      const std::uint64_t local = local_index_bruteforce(c, w, static_cast<int>(guard));
      product *= local;
      entry["cases"].push_back({{"p", c.p}, {"n", c.n}, {"m", c.m}, {"bruteforce", local}, {"formula", local_index_formula(c)}});
    }
    entry["local_product"] = product.str();
    entry["match"] = Rat(product) == index_lower_bound(w);
    cross.push_back(std::move(entry));
  }
  ctx.write("orbit_summary.json",
            Json{{"B", number(B)},
                 {"epsilon", number(eps)},
                 {"n_max", n_max},
                 {"min_ratio", number(s.min_ratio)},
                 {"argmin_ratio", s.argmin_ratio},
                 {"C_epsilon", number(s.min_ratio)},
                 {"min_b_term", number(s.min_b_term)},
                 {"argmin_b_term", s.argmin_b_term},
                 {"min_euler_term", number(s.min_euler_term)},
                 {"argmin_euler_term", s.argmin_euler_term},
                 {"cross_check", cross}});
  return kOk;
}

int cmd_index_check(Context& ctx) {
  Reader r(ctx.config, "$");
  const Json& cases = array(r.at("cases"), r.path("cases"));
  const long long guard = r.integer("guard", 1, 8, 2);
  r.finish();
  std::vector<LocalIndexCase> list;
  for (size_t i = 0; i < cases.size(); ++i) {
    Reader c(cases[i], r.path("cases") + "[" + std::to_string(i) + "]");
    LocalIndexCase lc;
    lc.p = static_cast<std::uint64_t>(c.integer("p", 2, 97));
    if (factorize(lc.p).size() != 1 || factorize(lc.p)[0].second != 1) throw ConfigError(c.path("p"), "must be prime");
    lc.n = static_cast<int>(c.integer("n", 1, 6));
    lc.m = static_cast<int>(c.integer("m", 0, 6));
    c.finish();
    list.push_back(lc);
  }
  const DatumPtr datum = SymplecticDatum::standard(1, 4);
  std::vector<std::vector<std::string>> rows;
  for (const auto& c : list) {
    RatVec v = RatVec::Zero(2);
    v(0) = Rat(1) / Rat(ipow(c.p, c.n));
    const HeisenbergElement<Rat> w(datum, RatVec::Zero(1), v);
    const std::uint64_t brute = local_index_bruteforce(c, w, static_cast<int>(guard));
    const std::uint64_t formula = local_index_formula(c);
    rows.push_back({std::to_string(c.p), std::to_string(c.n), std::to_string(c.m), std::to_string(brute),
                    std::to_string(formula), brute == formula ? "1" : "0"});
  }
  ctx.write("index.csv", csv({"p", "n", "m", "bruteforce", "formula", "match"}, rows));
  return kOk;
}

const std::map<std::string, std::function<int(Context&)>>& table() {
  static const std::map<std::string, std::function<int(Context&)>> t{
      {"count", cmd_count},   {"volume", cmd_volume}, {"reduce", cmd_reduce},           {"classify", cmd_classify},
      {"subtorus", cmd_subtorus}, {"orbit", cmd_orbit}, {"index-check", cmd_index_check}};
  return t;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"count", "volume", "reduce", "classify", "subtorus", "orbit", "index-check"};
  return names;
}

int run(const std::string& subcommand, const Options& opts, std::ostream& log) {
  const auto it = table().find(subcommand);
  if (it == table().end()) {
    log << "error: unknown subcommand " << subcommand << "\n";
    return kConfigError;
  }
  try {
    Context ctx{opts, log, load_config(opts.config), opts.out};
    std::filesystem::create_directories(ctx.out);
    const Json manifest{{"tool", "mshimura-cli"},
                        {"subcommand", subcommand},
                        {"config_hash", [&] {
                           char buf[32];
                           std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                                         static_cast<unsigned long long>(config_hash(ctx.config)));
                           return std::string(buf);
                         }()},
                        {"config", ctx.config},
                        {"modules",
                         {{"core-arith", "1.0.0"},
                          {"heisenberg", "1.0.0"},
                          {"uniformization", "1.0.0"},
                          {"counting-lab", "1.0.0"},
                          {"weakly-special", "1.0.0"},
                          {"galois-orbit", "1.0.0"},
                          {"cli", "1.0.0"}}},
                        {"threads", opts.threads},
                        {"seed", opts.seed}};
    const int code = it->second(ctx);
    ctx.write("manifest.json", manifest);
    return code;
  } catch (const ConfigError& e) {
    log << "config error in " << opts.config << " at " << e.what() << "\n";
    return kConfigError;
  } catch (const GuardError& e) {
    log << "error: " << e.what() << "\n";
    return kLowConfidence;
  }
}

}  // namespace mshimura::cli
