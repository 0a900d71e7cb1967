#pragma once

// Grid abstraction of per-cell constant-velocity systems with bounded speed
// and heading disturbances.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "apobs/observation.hpp"

namespace apobs {

/// x[axis] >= c (ge) or x[axis] <= c. Half-spaces are closed.
struct HalfSpace {
  int axis = 0;
  bool ge = true;
  double c = 0.0;
};
using Conjunction = std::vector<HalfSpace>;
/// Finite union of conjunctions.
using Region = std::vector<Conjunction>;

bool contains(const Region& r, const std::vector<double>& x);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};
using Box = std::vector<Interval>;

/// Motion mode of a cell: heading angle (2-D only) or velocity vector, plus
/// speed deviation ev and heading deviation etheta.
struct Mode {
  bool heading = true;
  double theta = 0.0;
  std::vector<double> velocity;
  double v = 0.0;
  double ev = 0.0;
  double etheta = 0.0;
};

enum class Boundary { Sink, Clamp };

struct SystemSpec {
  int dim = 2;
  Box domain;
  double eta = 1.0;
  double tau = 1.0;
  std::vector<double> x_in;
  std::vector<Mode> modes;  // one per grid cell, in Grid index order
  std::map<std::string, Region> aps;
  Boundary boundary = Boundary::Sink;
  std::string field_name = "table";  // how the modes were produced
  std::string metadata;              // generator parameters as JSON text
};

/// Grid points k*eta inside the domain; cells are indexed lexicographically
/// (axis 0 most significant).
class Grid {
 public:
  Grid() = default;
  Grid(const Box& domain, double eta);

  std::size_t size() const { return size_; }
  int dim() const { return static_cast<int>(kmin_.size()); }
  double eta() const { return eta_; }
  std::vector<std::int64_t> coords(std::size_t index) const;
  std::size_t index(const std::vector<std::int64_t>& k) const;
  bool valid(const std::vector<std::int64_t>& k) const;
  std::vector<double> center(std::size_t index) const;
  Box cell_box(std::size_t index) const;
  const std::vector<std::int64_t>& kmin() const { return kmin_; }
  const std::vector<std::int64_t>& counts() const { return counts_; }

 private:
  double eta_ = 1.0;
  std::vector<std::int64_t> kmin_, counts_;
  std::size_t size_ = 0;
};

/// Nearest grid cell, ties rounded half-up per coordinate. Throws Error(Spec)
/// for points outside the domain.
std::size_t gamma(const SystemSpec& spec, const Grid& grid, const std::vector<double>& x);

enum class Tri { Plus, Minus, Unknown };
char to_char(Tri t);

/// Classifies a closed box against a region: contained / disjoint / neither.
Tri classify_box(const Box& box, const Region& r);

/// Observations of p allowed at the start (from rho_Z of the source box) and
/// at the end (from rho_E of the target box).
ObsSet start_set(Tri rho_z);
ObsSet end_set(Tri rho_e);

/// Box containing every end position after tau from the cell box of `cell`.
Box reach_box(const SystemSpec& spec, const Grid& grid, std::size_t cell);
/// Displacement hull {tau * u} of a mode.
Box displacement_box(const Mode& m, double tau, int dim);

struct SymbolicModel {
  std::vector<std::string> aps;  // tracked, sorted
  Grid grid;
  bool has_sink = false;  // state grid.size() is the out-of-domain sink
  std::vector<std::vector<std::pair<Label, int>>> out;  // sorted
  int initial = 0;

  std::size_t size() const { return out.size(); }
  std::size_t transition_count() const;
  bool has_transition(int q, Label l, int q2) const;
};

struct ModelOptions {
  bool single_change_filter = true;
};

SymbolicModel build_symbolic_model(const SystemSpec& spec, const std::vector<std::string>& tracked,
                                   const ModelOptions& opt = {});

struct TauPair {
  std::string p, q;
  double distance = 0.0;
};

struct TauValidation {
  double v_max = 0.0;
  std::vector<TauPair> pairs;
  double tau_max = 0.0;  // +inf without pairs
  bool separated = true;  // every distance > 0
  bool pass = true;
  std::string message;
};

double max_speed(const SystemSpec& spec);
TauValidation validate_tau(const SystemSpec& spec, const std::vector<std::string>& tracked);
/// Throws Error(TauValidation) when validation fails.
void require_tau(const SystemSpec& spec, const std::vector<std::string>& tracked);

struct Trajectory {
  std::vector<std::vector<double>> points;  // at multiples of tau
  std::vector<int> states;                  // abstract state per point (sink if outside)
  Word word;                                // observations per step (prefix only, loop empty)
  bool chopping_error = false;
  std::string error;
};

Trajectory simulate_trajectory(const SystemSpec& spec, const std::vector<std::string>& tracked, std::size_t steps,
                               std::uint64_t seed, int samples_per_step = 1000);

void validate_spec(const SystemSpec& spec);

}  // namespace apobs
