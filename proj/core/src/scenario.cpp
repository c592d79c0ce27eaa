#include "uavsee/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace uavsee {

using nlohmann::json;

PhysicalParams default_physics() {
  PhysicalParams p;
  p.beta0 = db_to_linear(-60.0);
  p.noise_w = dbm_to_watts(-110.0);
  p.slot_s = 0.5;
  p.bandwidth_hz = 1.0e6;
  p.altitude_m = 100.0;
  p.p_max_w = 1.0;
  p.v_max = 50.0;
  p.a_max = 5.0;
  p.gravity = 9.8;
  p.c1 = 9.26e-4;
  p.c2 = 2250.0;
  p.tolerance = 1.0e-2;
  return p;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

int derive_slot_count(double period_s, double slot_s) {
  if (!(period_s > 0.0) || !std::isfinite(period_s)) {
    throw ValidationError("period_s must be finite and strictly positive");
  }
  if (!(slot_s > 0.0) || !std::isfinite(slot_s)) {
    throw ValidationError("slot_s must be finite and strictly positive");
  }
  const double ratio = period_s / slot_s;
  const long n = std::lround(ratio);
  if (n < 1 || std::abs(static_cast<double>(n) * slot_s - period_s) > 1e-9 * period_s) {
    std::ostringstream os;
    os << "horizon: N * slot_s must equal period_s exactly (period_s=" << period_s
       << ", slot_s=" << slot_s << ")";
    throw ValidationError(os.str());
  }
  return static_cast<int>(n);
}

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ValidationError(std::string(name) + " must be finite and strictly positive");
  }
}

void require_finite(const std::vector<Vec2>& pts, const char* name) {
  for (const auto& p : pts) {
    if (!p.allFinite()) throw ValidationError(std::string(name) + ": positions must be finite");
  }
}

Vec2 parse_point(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError(std::string(what) + ": expected a 2-element numeric array");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Vec2> parse_points(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(std::string("missing required key '") + key + "'");
  const json& arr = doc.at(key);
  if (!arr.is_array()) throw ParseError(std::string(key) + ": expected an array of points");
  std::vector<Vec2> out;
  out.reserve(arr.size());
  for (const auto& p : arr) out.push_back(parse_point(p, key));
  return out;
}

double number_or(const json& doc, const char* key, double fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  if (!v.is_number()) throw ParseError(std::string(key) + ": expected a number");
  return v.get<double>();
}

// Reads a quantity that may be supplied either in linear units or in a
// logarithmic unit; exactly one tagged form is allowed.
double tagged_or(const json& doc, const char* linear_key, const char* log_key,
                 double (*from_log)(double), const char* bare_key, double fallback) {
  if (doc.contains(bare_key)) {
    throw ParseError(std::string(bare_key) + ": unit tag required (use '" + linear_key +
                     "' or '" + log_key + "')");
  }
  const bool has_lin = doc.contains(linear_key);
  const bool has_log = doc.contains(log_key);
  if (has_lin && has_log) {
    throw ParseError(std::string("both '") + linear_key + "' and '" + log_key + "' given");
  }
  if (has_lin) return number_or(doc, linear_key, fallback);
  if (has_log) return from_log(number_or(doc, log_key, 0.0));
  return fallback;
}

}  // namespace

void validate(const Scenario& sc) {
  if (sc.eavesdroppers.empty()) throw ValidationError("K1 >= 1: at least one eavesdropper");
  if (sc.legit_users.empty()) throw ValidationError("K2 >= 1: at least one legitimate user");
  if (sc.suav_count < 1) throw ValidationError("M2 >= 1: at least one source UAV");
  if (sc.juav_count < 0) throw ValidationError("M1 >= 0: jamming UAV count is negative");
  require_finite(sc.legit_users, "legit_users");
  require_finite(sc.eavesdroppers, "eavesdroppers");
  const PhysicalParams& p = sc.phys;
  require_positive(p.beta0, "beta0");
  require_positive(p.noise_w, "noise power");
  require_positive(p.slot_s, "slot_s");
  require_positive(p.bandwidth_hz, "bandwidth_hz");
  require_positive(p.altitude_m, "altitude_m");
  require_positive(p.p_max_w, "p_max_w");
  require_positive(p.v_max, "v_max");
  require_positive(p.a_max, "a_max");
  require_positive(p.gravity, "gravity");
  require_positive(p.c1, "c1");
  require_positive(p.c2, "c2");
  require_positive(p.tolerance, "tolerance");
  const int n = derive_slot_count(sc.period_s, p.slot_s);
  if (n != sc.slot_count) {
    throw ValidationError("horizon: slot_count must equal round(period_s / slot_s)");
  }
  if (sc.orbit) {
    if (!sc.orbit->center.allFinite()) throw ValidationError("initial_orbit: center must be finite");
    require_positive(sc.orbit->radius_m, "initial_orbit.radius_m");
  }
}

Scenario load_scenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed scenario JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("scenario document must be a JSON object");

  Scenario sc;
  const PhysicalParams d = default_physics();
  sc.legit_users = parse_points(doc, "legit_users");
  sc.eavesdroppers = parse_points(doc, "eavesdroppers");
  if (!doc.contains("suav_count")) throw ParseError("missing required key 'suav_count'");
  if (!doc.contains("period_s")) throw ParseError("missing required key 'period_s'");
  if (!doc.at("suav_count").is_number_integer()) throw ParseError("suav_count: expected an integer");
  sc.suav_count = doc.at("suav_count").get<int>();
  if (doc.contains("juav_count")) {
    if (!doc.at("juav_count").is_number_integer()) throw ParseError("juav_count: expected an integer");
    sc.juav_count = doc.at("juav_count").get<int>();
  }
  if (doc.contains("slot_count")) {
    throw ParseError("slot_count is derived from period_s / slot_s and cannot be set");
  }
  sc.period_s = number_or(doc, "period_s", 0.0);

  PhysicalParams& p = sc.phys;
  p.beta0 = tagged_or(doc, "beta0_linear", "beta0_db", &db_to_linear, "beta0", d.beta0);
  p.noise_w = tagged_or(doc, "noise_w", "noise_dbm", &dbm_to_watts, "noise", d.noise_w);
  p.slot_s = number_or(doc, "slot_s", d.slot_s);
  p.bandwidth_hz = number_or(doc, "bandwidth_hz", d.bandwidth_hz);
  p.altitude_m = number_or(doc, "altitude_m", d.altitude_m);
  p.p_max_w = number_or(doc, "p_max_w", d.p_max_w);
  p.v_max = number_or(doc, "v_max_mps", d.v_max);
  p.a_max = number_or(doc, "a_max_mps2", d.a_max);
  p.gravity = number_or(doc, "gravity_mps2", d.gravity);
  p.c1 = number_or(doc, "c1", d.c1);
  p.c2 = number_or(doc, "c2", d.c2);
  p.tolerance = number_or(doc, "tolerance", d.tolerance);

  if (doc.contains("initial_orbit")) {
    const json& o = doc.at("initial_orbit");
    if (!o.is_object()) throw ParseError("initial_orbit: expected an object");
    InitialOrbit orbit;
    if (!o.contains("center") || !o.contains("radius_m")) {
      throw ParseError("initial_orbit: requires 'center' and 'radius_m'");
    }
    orbit.center = parse_point(o.at("center"), "initial_orbit.center");
    orbit.radius_m = number_or(o, "radius_m", 0.0);
    sc.orbit = orbit;
  }

  sc.slot_count = derive_slot_count(sc.period_s, p.slot_s);
  validate(sc);
  return sc;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

std::string to_json(const Scenario& sc) {
  auto points = [](const std::vector<Vec2>& pts) {
    json arr = json::array();
    for (const auto& p : pts) arr.push_back({p.x(), p.y()});
    return arr;
  };
  json doc;
  doc["legit_users"] = points(sc.legit_users);
  doc["eavesdroppers"] = points(sc.eavesdroppers);
  doc["suav_count"] = sc.suav_count;
  doc["juav_count"] = sc.juav_count;
  doc["period_s"] = sc.period_s;
  const PhysicalParams& p = sc.phys;
  doc["slot_s"] = p.slot_s;
  doc["beta0_linear"] = p.beta0;
  doc["noise_w"] = p.noise_w;
  doc["bandwidth_hz"] = p.bandwidth_hz;
  doc["altitude_m"] = p.altitude_m;
  doc["p_max_w"] = p.p_max_w;
  doc["v_max_mps"] = p.v_max;
  doc["a_max_mps2"] = p.a_max;
  doc["gravity_mps2"] = p.gravity;
  doc["c1"] = p.c1;
  doc["c2"] = p.c2;
  doc["tolerance"] = p.tolerance;
  if (sc.orbit) {
    doc["initial_orbit"] = {{"center", {sc.orbit->center.x(), sc.orbit->center.y()}},
                            {"radius_m", sc.orbit->radius_m}};
  }
  return doc.dump(2);
}

bool operator==(const PhysicalParams& a, const PhysicalParams& b) {
  return a.beta0 == b.beta0 && a.noise_w == b.noise_w && a.slot_s == b.slot_s &&
         a.bandwidth_hz == b.bandwidth_hz && a.altitude_m == b.altitude_m &&
         a.p_max_w == b.p_max_w && a.v_max == b.v_max && a.a_max == b.a_max &&
         a.gravity == b.gravity && a.c1 == b.c1 && a.c2 == b.c2 && a.tolerance == b.tolerance;
}

bool operator==(const InitialOrbit& a, const InitialOrbit& b) {
  return a.center == b.center && a.radius_m == b.radius_m;
}

bool operator==(const Scenario& a, const Scenario& b) {
  return a.legit_users == b.legit_users && a.eavesdroppers == b.eavesdroppers &&
         a.suav_count == b.suav_count && a.juav_count == b.juav_count &&
         a.period_s == b.period_s && a.slot_count == b.slot_count && a.phys == b.phys &&
         a.orbit == b.orbit;
}

InitialOrbit default_orbit(const Scenario& sc) {
  InitialOrbit orbit;
  Vec2 centroid = Vec2::Zero();
  for (const auto& w : sc.legit_users) centroid += w;
  if (!sc.legit_users.empty()) centroid /= static_cast<double>(sc.legit_users.size());
  orbit.center = centroid;

  const double omega = 2.0 * std::numbers::pi / sc.period_s;
  const double stagger = 10.0 * std::max(0, sc.uav_count() - 1);
  // Largest circle radius r + stagger must satisfy omega*r <= 0.8 v_max and
  // omega^2*r <= 0.8 a_max.
  const double r_speed = 0.8 * sc.phys.v_max / omega;
  const double r_accel = 0.8 * sc.phys.a_max / (omega * omega);
  double r = std::min({150.0, r_speed - stagger, r_accel - stagger});
  orbit.radius_m = std::max(r, 20.0);
  return orbit;
}

}  // namespace uavsee
