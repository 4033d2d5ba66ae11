#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "fivebar/errors.hpp"
#include "fivebar/geometry.hpp"
#include "fivebar/kinematics.hpp"
#include "fivebar/marching_squares.hpp"
#include "fivebar/singularity.hpp"
#include "fivebar/union_find.hpp"

namespace fivebar {

enum class Connectivity { Four = 4, Eight = 8 };

// Regular workspace grid. Cells are indexed (col i, row j) with row 0 at
// y_min; cells are stored row-major.
struct GridSpec {
  double x_min = -1.0, x_max = 1.0;
  double y_min = -1.0, y_max = 1.0;
  int nx = 512, ny = 512;
  Connectivity connectivity = Connectivity::Four;
  // Components smaller than max(min_component_cells,
  // min_component_fraction * feasible cells of the mode) are treated as
  // discretisation fragments and left unlabeled.
  double min_component_fraction = 1e-3;
  int min_component_cells = 8;

  void validate() const {
    if (nx < 2) throw ValidationError("nx", "need at least 2 cells");
    if (ny < 2) throw ValidationError("ny", "need at least 2 cells");
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min))
      throw ValidationError("x_range", "x_max must exceed x_min");
    if (!std::isfinite(y_min) || !std::isfinite(y_max) || !(y_max > y_min))
      throw ValidationError("y_range", "y_max must exceed y_min");
    if (!(min_component_fraction >= 0.0 && min_component_fraction < 1.0))
      throw ValidationError("min_component_fraction", "must lie in [0, 1)");
    if (min_component_cells < 1) throw ValidationError("min_component_cells", "must be at least 1");
  }

  double dx() const { return (x_max - x_min) / nx; }
  double dy() const { return (y_max - y_min) / ny; }
  std::size_t cells() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }

  Point2 center(int i, int j) const { return {x_min + (i + 0.5) * dx(), y_min + (j + 0.5) * dy()}; }
  Point2 corner(int i, int j) const { return {x_min + i * dx(), y_min + j * dy()}; }

  GridSpec with_resolution(int new_nx, int new_ny) const {
    GridSpec g = *this;
    g.nx = new_nx;
    g.ny = new_ny;
    return g;
  }

  bool operator==(const GridSpec&) const = default;
};

// Box enclosing both leg annuli, padded by `margin` of its extent per side.
inline GridSpec default_grid(const Geometry& g, int n = 512, double margin = 0.05) {
  const double reach_y = std::max(g.leg1_outer(), g.leg2_outer());
  const double x0 = -g.leg1_outer(), x1 = g.l0() + g.leg2_outer();
  const double w = x1 - x0, h = 2.0 * reach_y;
  GridSpec spec;
  spec.x_min = x0 - margin * w;
  spec.x_max = x1 + margin * w;
  spec.y_min = -reach_y - margin * h;
  spec.y_max = reach_y + margin * h;
  spec.nx = n;
  spec.ny = n;
  return spec;
}

enum class CellStatus : std::uint8_t {
  Unreachable,   // outside a leg annulus
  ModeBoundary,  // a B entry vanishes: serial singularity
  Singular,      // det A within eps_a of zero at the centre
  Straddling,    // the cell's corners disagree with its centre
  Interior,      // centre and corners share one non-singular sign pattern
};

struct CellRecord {
  Point2 pose = Point2::Zero();
  CellStatus status = CellStatus::Unreachable;
  int det_a_sign = 0;               // nonzero only for Interior cells
  double det_a = std::numeric_limits<double>::quiet_NaN();
  std::optional<JointConfig> q;     // present iff feasible

  bool feasible() const { return q.has_value(); }
};

struct ModeField {
  WorkingMode mode;
  GridSpec grid;
  std::vector<CellRecord> cells;

  const CellRecord& at(int i, int j) const { return cells[grid.index(i, j)]; }
  std::size_t feasible_count() const {
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const CellRecord& c) { return c.feasible(); }));
  }
};

namespace detail {

// -1 / +1 for a non-singular sample, 0 otherwise.
inline int sample_sign(const Geometry& g, const Point2& p, const WorkingMode& mode, const Tolerances& tol) {
  auto cfg = try_inverse_kinematics(g, p, mode, tol);
  if (!cfg) return 0;
  const double det = det_a(*cfg);
  if (std::abs(det) <= tol.eps_a) return 0;
  return det > 0 ? 1 : -1;
}

template <typename Fn>
void parallel_rows(int rows, unsigned workers, Fn&& fn) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(rows)));
  if (workers == 1) {
    fn(0, rows);
    return;
  }
  std::vector<std::thread> pool;
  const int chunk = (rows + static_cast<int>(workers) - 1) / static_cast<int>(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const int lo = static_cast<int>(w) * chunk;
    const int hi = std::min(rows, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

// Evaluates inverse kinematics at every cell centre and cell corner for one
// working mode. Results do not depend on `workers`.
inline ModeField sample_workspace(const Geometry& g, const GridSpec& grid, const WorkingMode& mode,
                                  const Tolerances& tol, unsigned workers = 1) {
  grid.validate();
  ModeField field{mode, grid, std::vector<CellRecord>(grid.cells())};
  const int cx = grid.nx + 1;
  std::vector<int> corner_sign(static_cast<std::size_t>(cx) * (grid.ny + 1), 0);

  detail::parallel_rows(grid.ny + 1, workers, [&](int lo, int hi) {
    for (int j = lo; j < hi; ++j)
      for (int i = 0; i <= grid.nx; ++i)
        corner_sign[static_cast<std::size_t>(j) * cx + i] = detail::sample_sign(g, grid.corner(i, j), mode, tol);
  });

  detail::parallel_rows(grid.ny, workers, [&](int lo, int hi) {
    for (int j = lo; j < hi; ++j) {
      for (int i = 0; i < grid.nx; ++i) {
        CellRecord& cell = field.cells[grid.index(i, j)];
        cell.pose = grid.center(i, j);
        auto cfg = try_inverse_kinematics(g, cell.pose, mode, tol);
        if (!cfg) {
          cell.status = cfg.error() == ErrorKind::ModeBoundary ? CellStatus::ModeBoundary : CellStatus::Unreachable;
          continue;
        }
        cell.q = cfg->q;
        cell.det_a = det_a(*cfg);
        if (std::abs(cell.det_a) <= tol.eps_a) {
          cell.status = CellStatus::Singular;
          continue;
        }
        const int s = cell.det_a > 0 ? 1 : -1;
        const auto corner = [&](int ci, int cj) { return corner_sign[static_cast<std::size_t>(cj) * cx + ci]; };
        const bool agree = corner(i, j) == s && corner(i + 1, j) == s && corner(i, j + 1) == s && corner(i + 1, j + 1) == s;
        cell.status = agree ? CellStatus::Interior : CellStatus::Straddling;
        cell.det_a_sign = agree ? s : 0;
      }
    }
  });
  return field;
}

inline ModeField sample_workspace(const Geometry& g, const GridSpec& grid, const WorkingMode& mode) {
  return sample_workspace(g, grid, mode, Tolerances::for_geometry(g));
}

// ---------------------------------------------------------------------------
// Labeling

struct AspectId {
  WorkingMode mode;
  int det_a_sign = 1;
  int component_index = 0;

  bool operator==(const AspectId&) const = default;
};

struct BoundingBox {
  double x_min = 0, y_min = 0, x_max = 0, y_max = 0;
  bool operator==(const BoundingBox&) const = default;
};

struct AspectInfo {
  AspectId id;
  std::size_t cells = 0;
  std::size_t first_cell = 0;  // smallest row-major member
  BoundingBox bbox;            // over member cell extents
};

struct LabeledField {
  ModeField field;
  std::vector<int> labels;          // index into `aspects`, -1 when unlabeled
  std::vector<AspectInfo> aspects;  // positive det A first, then negative; scan order within
  std::size_t fragments = 0;        // components dropped by the size filter
  std::size_t fragment_cells = 0;

  const AspectInfo* find(const AspectId& id) const {
    for (const auto& a : aspects)
      if (a.id == id) return &a;
    return nullptr;
  }
  std::size_t count(int det_a_sign) const {
    return static_cast<std::size_t>(
        std::count_if(aspects.begin(), aspects.end(), [&](const AspectInfo& a) { return a.id.det_a_sign == det_a_sign; }));
  }
};

inline LabeledField label_aspects(ModeField field, Connectivity connectivity, std::size_t min_cells) {
  const GridSpec& grid = field.grid;
  const std::size_t n = grid.cells();
  DisjointSet sets(n);
  auto sign_at = [&](int i, int j) { return field.cells[grid.index(i, j)].det_a_sign; };

  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const int s = sign_at(i, j);
      if (s == 0) continue;
      const std::size_t here = grid.index(i, j);
      if (i > 0 && sign_at(i - 1, j) == s) sets.unite(here, grid.index(i - 1, j));
      if (j > 0 && sign_at(i, j - 1) == s) sets.unite(here, grid.index(i, j - 1));
      if (connectivity == Connectivity::Eight && j > 0) {
        if (i > 0 && sign_at(i - 1, j - 1) == s) sets.unite(here, grid.index(i - 1, j - 1));
        if (i + 1 < grid.nx && sign_at(i + 1, j - 1) == s) sets.unite(here, grid.index(i + 1, j - 1));
      }
    }
  }

  struct Component {
    std::size_t root, first, cells = 0;
    int sign;
    BoundingBox bbox;
  };
  std::map<std::size_t, std::size_t> slot;  // root -> components index
  std::vector<Component> comps;
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const int s = sign_at(i, j);
      if (s == 0) continue;
      const std::size_t here = grid.index(i, j);
      const std::size_t root = sets.find(here);
      auto [it, fresh] = slot.try_emplace(root, comps.size());
      const double x0 = grid.x_min + i * grid.dx(), y0 = grid.y_min + j * grid.dy();
      if (fresh) comps.push_back({root, here, 0, s, {x0, y0, x0 + grid.dx(), y0 + grid.dy()}});
      Component& c = comps[it->second];
      ++c.cells;
      c.bbox.x_min = std::min(c.bbox.x_min, x0);
      c.bbox.y_min = std::min(c.bbox.y_min, y0);
      c.bbox.x_max = std::max(c.bbox.x_max, x0 + grid.dx());
      c.bbox.y_max = std::max(c.bbox.y_max, y0 + grid.dy());
    }
  }

  LabeledField out;
  out.labels.assign(n, -1);
  std::map<std::size_t, int> label_of_root;
  for (int sign : {1, -1}) {
    int index = 0;
    for (const auto& c : comps) {
      if (c.sign != sign) continue;
      if (c.cells < min_cells) {
        ++out.fragments;
        out.fragment_cells += c.cells;
        continue;
      }
      label_of_root[c.root] = static_cast<int>(out.aspects.size());
      out.aspects.push_back({AspectId{field.mode, sign, index++}, c.cells, c.first, c.bbox});
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (field.cells[k].det_a_sign == 0) continue;
    auto it = label_of_root.find(sets.find(k));
    if (it != label_of_root.end()) out.labels[k] = it->second;
  }
  out.field = std::move(field);
  return out;
}

// Size threshold taken from the field's grid settings.
inline LabeledField label_aspects(ModeField field, Connectivity connectivity) {
  const double by_fraction = field.grid.min_component_fraction * static_cast<double>(field.feasible_count());
  const auto min_cells =
      std::max<std::size_t>(static_cast<std::size_t>(field.grid.min_component_cells), static_cast<std::size_t>(std::ceil(by_fraction)));
  return label_aspects(std::move(field), connectivity, min_cells);
}

inline LabeledField label_aspects(ModeField field) {
  const Connectivity c = field.grid.connectivity;
  return label_aspects(std::move(field), c);
}

// Pairs of labeled cells with opposite det A sign sharing an edge.
inline std::size_t count_sign_contacts(const LabeledField& lf) {
  const GridSpec& grid = lf.field.grid;
  std::size_t contacts = 0;
  auto labeled_sign = [&](int i, int j) {
    const std::size_t k = grid.index(i, j);
    return lf.labels[k] >= 0 ? lf.field.cells[k].det_a_sign : 0;
  };
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const int s = labeled_sign(i, j);
      if (s == 0) continue;
      if (i + 1 < grid.nx && labeled_sign(i + 1, j) == -s) ++contacts;
      if (j + 1 < grid.ny && labeled_sign(i, j + 1) == -s) ++contacts;
    }
  }
  return contacts;
}

// ---------------------------------------------------------------------------
// Projections

// Parallel aspect: member cells of one generalized aspect, as cell indices.
inline std::vector<std::size_t> project_to_workspace(const LabeledField& lf, const AspectId& id) {
  const AspectInfo* info = lf.find(id);
  if (!info) throw KinematicError(ErrorKind::UnknownAspect, id.mode.str());
  const int label = static_cast<int>(info - lf.aspects.data());
  std::vector<std::size_t> out;
  out.reserve(info->cells);
  for (std::size_t k = 0; k < lf.labels.size(); ++k)
    if (lf.labels[k] == label) out.push_back(k);
  return out;
}

// Serial aspect: actuated joint values of the member cells, wrapped to (-pi, pi].
inline std::vector<JointConfig> project_to_jointspace(const LabeledField& lf, const AspectId& id) {
  std::vector<JointConfig> out;
  for (std::size_t k : project_to_workspace(lf, id)) out.push_back(*lf.field.cells[k].q);
  return out;
}

// ---------------------------------------------------------------------------
// Aspect table

struct PatternRow {
  Sign det_a = Sign::Positive;
  Sign b11 = Sign::Positive;
  Sign b22 = Sign::Positive;
  int count = 0;

  bool operator==(const PatternRow&) const = default;
};

struct AspectSummary {
  int id = 0;
  WorkingMode mode;
  Sign sign = Sign::Positive;
  int index = 0;
  std::size_t cells = 0;
  BoundingBox bbox;

  bool operator==(const AspectSummary&) const = default;
};

struct AspectReport {
  Geometry geometry = Geometry::reference();
  GridSpec grid;
  std::vector<PatternRow> rows;
  int total = 0;
  std::vector<AspectSummary> aspects;
  std::vector<std::string> warnings;

  int count(Sign det_a, Sign b11, Sign b22) const {
    for (const auto& r : rows)
      if (r.det_a == det_a && r.b11 == b11 && r.b22 == b22) return r.count;
    return 0;
  }

  bool operator==(const AspectReport&) const = default;
};

// Row order of the aspect table: (det A, B11, B22).
inline std::vector<std::array<Sign, 3>> table_row_order() {
  constexpr Sign P = Sign::Positive, N = Sign::Negative;
  return {{P, P, P}, {P, P, N}, {P, N, N}, {P, N, P}, {N, P, N}, {N, P, P}, {N, N, P}, {N, N, N}};
}

struct AtlasOptions {
  Tolerances tolerances;
  unsigned workers = 1;
  bool check_stability = true;  // re-run at half resolution and compare counts
};

struct Atlas {
  AspectReport report;
  std::vector<LabeledField> fields;  // one per working mode, ++ +- -+ --
};

namespace detail {

inline std::vector<LabeledField> label_all_modes(const Geometry& g, const GridSpec& grid, const AtlasOptions& opt) {
  std::vector<LabeledField> out;
  for (const auto& mode : five_bar_working_modes())
    out.push_back(label_aspects(sample_workspace(g, grid, mode, opt.tolerances, opt.workers)));
  return out;
}

inline std::vector<PatternRow> tabulate(const std::vector<LabeledField>& fields) {
  std::vector<PatternRow> rows;
  for (const auto& key : table_row_order()) {
    PatternRow row{key[0], key[1], key[2], 0};
    for (const auto& lf : fields)
      if (lf.field.mode == WorkingMode(key[1], key[2])) row.count += static_cast<int>(lf.count(to_int(key[0])));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace detail

inline Atlas compute_atlas(const Geometry& g, const GridSpec& grid, const AtlasOptions& opt) {
  grid.validate();
  Atlas atlas;
  atlas.fields = detail::label_all_modes(g, grid, opt);
  AspectReport& r = atlas.report;
  r.geometry = g;
  r.grid = grid;
  r.rows = detail::tabulate(atlas.fields);
  for (const auto& row : r.rows) r.total += row.count;

  int id = 0;
  for (const auto& lf : atlas.fields)
    for (const auto& a : lf.aspects)
      r.aspects.push_back({id++, a.id.mode, a.id.det_a_sign > 0 ? Sign::Positive : Sign::Negative,
                           a.id.component_index, a.cells, a.bbox});

  for (const auto& lf : atlas.fields) {
    if (const auto contacts = count_sign_contacts(lf); contacts > 0)
      r.warnings.push_back("ResolutionUnstable: mode " + lf.field.mode.str() + " has " + std::to_string(contacts) +
                           " opposite-sign cell contacts");
  }
  if (opt.check_stability && grid.nx >= 4 && grid.ny >= 4) {
    const auto coarse = detail::tabulate(detail::label_all_modes(g, grid.with_resolution(grid.nx / 2, grid.ny / 2), opt));
    if (coarse != r.rows)
      r.warnings.push_back("ResolutionUnstable: aspect counts differ at " + std::to_string(grid.nx / 2) + "x" +
                           std::to_string(grid.ny / 2));
  }
  return atlas;
}

inline Atlas compute_atlas(const Geometry& g, const GridSpec& grid) {
  return compute_atlas(g, grid, AtlasOptions{Tolerances::for_geometry(g)});
}

inline AspectReport enumerate_generalized_aspects(const Geometry& g, const GridSpec& grid, const AtlasOptions& opt) {
  return compute_atlas(g, grid, opt).report;
}

inline AspectReport enumerate_generalized_aspects(const Geometry& g, const GridSpec& grid) {
  return compute_atlas(g, grid).report;
}

// ---------------------------------------------------------------------------
// Singularity curves

struct SingularityLoci {
  std::vector<Polyline> parallel_curves;
  std::vector<Polyline> serial_curves;
};

namespace detail {

// Circle sampled into `segments` chords and cut to the grid rectangle.
inline std::vector<Polyline> clipped_circle(const Point2& centre, double radius, const GridSpec& grid,
                                            int segments = 720) {
  std::vector<Polyline> out;
  if (radius <= 0.0) return out;
  auto inside = [&](const Point2& p) {
    return p.x() >= grid.x_min && p.x() <= grid.x_max && p.y() >= grid.y_min && p.y() <= grid.y_max;
  };
  std::vector<Point2> pts;
  for (int k = 0; k <= segments; ++k) {
    const double t = two_pi * k / segments;
    pts.push_back(centre + radius * Point2(std::cos(t), std::sin(t)));
  }
  Polyline current;
  for (const auto& p : pts) {
    if (inside(p)) {
      current.push_back(p);
    } else if (!current.empty()) {
      if (current.size() > 1) out.push_back(std::move(current));
      current.clear();
    }
  }
  if (current.size() > 1) {
    // The run wrapping through angle 0 is split in two; join it back.
    if (!out.empty() && inside(pts.front()) && current.size() != pts.size()) {
      current.insert(current.end(), out.front().begin() + 1, out.front().end());
      out.front() = std::move(current);
    } else {
      out.push_back(std::move(current));
    }
  }
  return out;
}

}  // namespace detail

inline SingularityLoci singularity_loci(const ModeField& field, const Geometry& g) {
  const GridSpec& grid = field.grid;
  std::vector<double> values(grid.cells(), 0.0);
  std::vector<std::uint8_t> valid(grid.cells(), 0);
  for (std::size_t k = 0; k < grid.cells(); ++k) {
    if (!field.cells[k].feasible()) continue;
    values[k] = field.cells[k].det_a;
    valid[k] = 1;
  }
  SingularityLoci loci;
  loci.parallel_curves =
      zero_isolines(values, valid, grid.nx, grid.ny, [&](int i, int j) { return grid.center(i, j); });
  for (double r : {g.leg1_outer(), g.leg1_inner()})
    for (auto& line : detail::clipped_circle(g.a(), r, grid)) loci.serial_curves.push_back(std::move(line));
  for (double r : {g.leg2_outer(), g.leg2_inner()})
    for (auto& line : detail::clipped_circle(g.b(), r, grid)) loci.serial_curves.push_back(std::move(line));
  return loci;
}

inline SingularityLoci singularity_loci(const Geometry& g, const GridSpec& grid, const WorkingMode& mode,
                                        const Tolerances& tol) {
  return singularity_loci(sample_workspace(g, grid, mode, tol), g);
}

inline SingularityLoci singularity_loci(const Geometry& g, const GridSpec& grid, const WorkingMode& mode) {
  return singularity_loci(g, grid, mode, Tolerances::for_geometry(g));
}

}  // namespace fivebar
