#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace uavsee {

using Vec2 = Eigen::Vector2d;

/// Raised when a scenario document cannot be parsed.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a parsed scenario violates one of its invariants. The message
/// names the violated invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fleet-wide physical constants. All values are stored in linear SI units;
/// dB/dBm conversion only happens while reading a scenario document.
struct PhysicalParams {
  double beta0 = 1.0e-6;         // channel power gain at 1 m
  double noise_w = 1.0e-14;      // receiver noise power [W]
  double slot_s = 0.5;           // slot duration delta [s]
  double bandwidth_hz = 1.0e6;   // B [Hz]
  double altitude_m = 100.0;     // H [m]
  double p_max_w = 1.0;          // per-UAV transmit power cap [W]
  double v_max = 50.0;           // [m/s]
  double a_max = 5.0;            // [m/s^2]
  double gravity = 9.8;          // [m/s^2]
  double c1 = 9.26e-4;           // fixed-wing drag coefficient
  double c2 = 2250.0;            // fixed-wing induced-power coefficient
  double tolerance = 1.0e-2;     // outer convergence tolerance (Dinkelbach, BCD)
};

/// Default parameter block used throughout the simulations.
PhysicalParams default_physics();

double db_to_linear(double db);
double dbm_to_watts(double dbm);

/// Circle used to seed every UAV's periodic trajectory.
struct InitialOrbit {
  Vec2 center = Vec2::Zero();
  double radius_m = 0.0;
};

/// Immutable problem instance. UAV indices 0..M2-1 are source UAVs (SUAVs),
/// M2..M2+M1-1 are jamming UAVs (JUAVs).
struct Scenario {
  std::vector<Vec2> legit_users;    // w_{k2}
  std::vector<Vec2> eavesdroppers;  // w_{k1}
  int suav_count = 1;               // M2
  int juav_count = 0;               // M1
  double period_s = 0.0;            // T
  int slot_count = 0;               // N, derived: N * delta == T
  PhysicalParams phys;
  std::optional<InitialOrbit> orbit;  // absent: derived by default_orbit()

  int uav_count() const { return suav_count + juav_count; }
  int user_count() const { return static_cast<int>(legit_users.size()); }
  int eve_count() const { return static_cast<int>(eavesdroppers.size()); }
  bool is_suav(int uav) const { return uav < suav_count; }
};

/// Checks every scenario invariant; throws ValidationError naming the first
/// violated one.
void validate(const Scenario& sc);

/// Derives N from T and delta. Throws ValidationError unless N * delta == T.
int derive_slot_count(double period_s, double slot_s);

/// Parses a JSON scenario document. Physics keys absent from the document
/// fall back to default_physics(). Unit-tagged alternatives are accepted:
/// "beta0_db" | "beta0_linear", "noise_dbm" | "noise_w".
Scenario load_scenario(std::string_view json_text);
Scenario load_scenario_file(const std::string& path);

/// Serializes with linear units so that load_scenario(to_json(sc)) == sc.
std::string to_json(const Scenario& sc);

bool operator==(const PhysicalParams& a, const PhysicalParams& b);
bool operator==(const InitialOrbit& a, const InitialOrbit& b);
bool operator==(const Scenario& a, const Scenario& b);

/// Seed orbit when the scenario does not pin one: centered at the user
/// centroid, radius 150 m shrunk until the largest staggered circle uses at
/// most 80% of v_max and a_max.
InitialOrbit default_orbit(const Scenario& sc);

}  // namespace uavsee
