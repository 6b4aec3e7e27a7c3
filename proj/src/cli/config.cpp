#include "config.hpp"

#include <fstream>

namespace mshimura::cli {

Reader::Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
  if (!j_.is_object()) throw ConfigError(path_, "expected an object");
}

bool Reader::has(const std::string& key) {
  seen_.insert(key);
  return j_.contains(key);
}

const Json& Reader::at(const std::string& key) {
  if (!has(key)) throw ConfigError(path(key), "missing");
  return j_.at(key);
}

void Reader::finish() const {
  for (const auto& item : j_.items())
    if (!seen_.count(item.key())) throw ConfigError(path(item.key()), "unknown key");
}

long long Reader::integer(const std::string& key, long long lo, long long hi) {
  const Json& v = at(key);
  if (!v.is_number_integer()) throw ConfigError(path(key), "expected an integer");
  const long long x = v.get<long long>();
  if (x < lo || x > hi)
    throw ConfigError(path(key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return x;
}

long long Reader::integer(const std::string& key, long long lo, long long hi, long long fallback) {
  return has(key) ? integer(key, lo, hi) : fallback;
}

double Reader::number(const std::string& key) {
  const Json& v = at(key);
  if (!v.is_number()) throw ConfigError(path(key), "expected a number");
  return v.get<double>();
}

double Reader::number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

bool Reader::boolean(const std::string& key, bool fallback) {
  if (!has(key)) return fallback;
  const Json& v = j_.at(key);
  if (!v.is_boolean()) throw ConfigError(path(key), "expected true or false");
  return v.get<bool>();
}

Json load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("$", "cannot read " + file);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("$", std::string("invalid JSON: ") + e.what());
  }
}

const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array");
  return j;
}

Rat parse_rational(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_string()) {
    try {
      return parse_rat(j.get<std::string>());
    } catch (const std::invalid_argument&) {
      throw ConfigError(path, "malformed rational \"" + j.get<std::string>() + "\"");
    }
  }
  throw ConfigError(path, "expected an integer or a string \"p/q\"");
}

GaussRat parse_gauss(const Json& j, const std::string& path) {
  if (j.is_array()) {
    if (j.size() != 2) throw ConfigError(path, "expected [re, im]");
    return {parse_rational(j[0], path + "[0]"), parse_rational(j[1], path + "[1]")};
  }
  return GaussRat(parse_rational(j, path));
}

RatVec parse_rat_vector(const Json& j, const std::string& path) {
  array(j, path);
  RatVec v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = parse_rational(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

RatMat parse_rat_matrix(const Json& j, const std::string& path) {
  array(j, path);
  if (j.empty()) throw ConfigError(path, "empty matrix");
  const size_t cols = array(j[0], path + "[0]").size();
  RatMat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const RatVec row = parse_rat_vector(j[i], p);
    if (static_cast<size_t>(row.size()) != cols) throw ConfigError(p, "ragged matrix");
    m.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return m;
}

IntVec parse_int_vector(const Json& j, const std::string& path) {
  array(j, path);
  IntVec v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) throw ConfigError(path + "[" + std::to_string(i) + "]", "expected an integer");
    v(static_cast<Eigen::Index>(i)) = j[i].get<long long>();
  }
  return v;
}

ParamCurve parse_curve(const Json& j, const std::string& path) {
  Reader r(j, path);
  const Json& amb = r.at("ambient");
  Ambient ambient;
  if (amb == "torus")
    ambient = Ambient::Torus;
  else if (amb == "abelian")
    ambient = Ambient::Abelian;
  else
    throw ConfigError(r.path("ambient"), "expected \"torus\" or \"abelian\"");
  Parameter parameter = Parameter::Complex;
  if (r.has("parameter")) {
    const Json& par = r.at("parameter");
    if (par == "real")
      parameter = Parameter::Real;
    else if (par != "complex")
      throw ConfigError(r.path("parameter"), "expected \"complex\" or \"real\"");
  }
  const Json& comps = array(r.at("components"), r.path("components"));
  if (comps.empty()) throw ConfigError(r.path("components"), "no components");
  std::vector<GaussPoly> polys;
  for (size_t i = 0; i < comps.size(); ++i) {
    const std::string p = r.path("components") + "[" + std::to_string(i) + "]";
    GaussPoly poly;
    for (size_t k = 0; k < array(comps[i], p).size(); ++k)
      poly.push_back(parse_gauss(comps[i][k], p + "[" + std::to_string(k) + "]"));
    polys.push_back(std::move(poly));
  }
  r.finish();
  try {
    return ParamCurve(ambient, parameter, std::move(polys));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

DatumPtr parse_datum(const Json& j, const std::string& path) {
  Reader r(j, path);
  const int g = static_cast<int>(r.integer("g", 0, 8));
  const int level = static_cast<int>(r.integer("level", 4, 1 << 20, 4));
  UAction action = UAction::Similitude;
  if (r.has("u_action")) {
    const Json& a = r.at("u_action");
    if (a == "trivial")
      action = UAction::Trivial;
    else if (a != "similitude")
      throw ConfigError(r.path("u_action"), "expected \"similitude\" or \"trivial\"");
  }
  std::vector<PsiMatrix> forms;
  const Json psi = r.has("psi") ? r.at("psi") : Json("standard");
  if (psi == "standard") {
    forms.push_back(standard_form(g));
  } else if (psi == "zero") {
    const long long rank = r.integer("r", 1, 8, 1);
    for (long long k = 0; k < rank; ++k) forms.push_back(PsiMatrix::Zero(2 * g, 2 * g));
  } else {
    array(psi, r.path("psi"));
    for (size_t k = 0; k < psi.size(); ++k) {
      const std::string p = r.path("psi") + "[" + std::to_string(k) + "]";
      const RatMat m = parse_rat_matrix(psi[k], p);
      PsiMatrix f(m.rows(), m.cols());
      for (Eigen::Index a = 0; a < m.rows(); ++a)
        for (Eigen::Index b = 0; b < m.cols(); ++b) {
          if (denominator(m(a, b)) != 1) throw ConfigError(p, "form entries must be integers");
          f(a, b) = numerator(m(a, b)).convert_to<long long>();
        }
      forms.push_back(std::move(f));
    }
  }
  r.finish();
  try {
    return SymplecticDatum::create(g, std::move(forms), level, action);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

std::uint64_t config_hash(const Json& j) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Json to_json(const Rat& x) { return format_rat(x); }

Json to_json(const RatVec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(format_rat(v(i)));
  return out;
}

Json to_json(const RatMat& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(RatVec(m.row(i).transpose())));
  return out;
}

Json to_json(const Lattice& l) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < l.rank(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < l.ambient_dim(); ++k) {
      const Integer& x = l.basis()(i, k);
      if (abs(x) < Integer(1) << 62)
        row.push_back(x.convert_to<long long>());
      else
        row.push_back(x.str());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace mshimura::cli
