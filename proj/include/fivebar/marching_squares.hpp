#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "fivebar/geometry.hpp"

namespace fivebar {

using Polyline = std::vector<Point2>;

// Zero-level isolines of a scalar field sampled on a regular lattice.
// Node (i, j) sits at `node_position(i, j)` with value values[j * nx + i];
// squares touching an invalid node are skipped. Segments are stitched into
// polylines through shared lattice edges, so closed loops come back with the
// first point repeated at the end.
inline std::vector<Polyline> zero_isolines(std::span<const double> values, std::span<const std::uint8_t> valid,
                                           int nx, int ny,
                                           const std::function<Point2(int, int)>& node_position) {
  auto node = [&](int i, int j) { return static_cast<std::size_t>(j) * nx + i; };
  auto above = [&](int i, int j) { return values[node(i, j)] > 0.0; };
  // Edge ids: 2 * node for the edge to the right neighbour, 2 * node + 1 upward.
  auto h_edge = [&](int i, int j) { return 2 * node(i, j); };
  auto v_edge = [&](int i, int j) { return 2 * node(i, j) + 1; };

  auto crossing = [&](std::size_t edge) {
    const std::size_t n0 = edge / 2;
    const int i = static_cast<int>(n0 % nx);
    const int j = static_cast<int>(n0 / nx);
    const int i1 = (edge % 2 == 0) ? i + 1 : i;
    const int j1 = (edge % 2 == 0) ? j : j + 1;
    const double v0 = values[node(i, j)];
    const double v1 = values[node(i1, j1)];
    const double t = (v0 == v1) ? 0.5 : v0 / (v0 - v1);
    return Point2(node_position(i, j) + t * (node_position(i1, j1) - node_position(i, j)));
  };

  std::vector<std::array<std::size_t, 2>> segments;
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      if (!valid[node(i, j)] || !valid[node(i + 1, j)] || !valid[node(i + 1, j + 1)] || !valid[node(i, j + 1)])
        continue;
      const int code = (above(i, j) ? 1 : 0) | (above(i + 1, j) ? 2 : 0) | (above(i + 1, j + 1) ? 4 : 0) |
                       (above(i, j + 1) ? 8 : 0);
      if (code == 0 || code == 15) continue;
      const std::size_t bottom = h_edge(i, j), right = v_edge(i + 1, j), top = h_edge(i, j + 1), left = v_edge(i, j);
      switch (code) {
        case 1: case 14: segments.push_back({left, bottom}); break;
        case 2: case 13: segments.push_back({bottom, right}); break;
        case 3: case 12: segments.push_back({left, right}); break;
        case 4: case 11: segments.push_back({right, top}); break;
        case 6: case 9: segments.push_back({bottom, top}); break;
        case 7: case 8: segments.push_back({left, top}); break;
        case 5: case 10: {
          // Saddle: the mean of the corners decides which diagonal pair joins.
          const double mean = 0.25 * (values[node(i, j)] + values[node(i + 1, j)] + values[node(i + 1, j + 1)] +
                                      values[node(i, j + 1)]);
          const bool centre_above = mean > 0.0;
          if ((code == 5) == centre_above) {
            segments.push_back({left, top});
            segments.push_back({bottom, right});
          } else {
            segments.push_back({left, bottom});
            segments.push_back({right, top});
          }
          break;
        }
        default: break;
      }
    }
  }

  std::unordered_map<std::size_t, std::vector<std::size_t>> by_edge;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    by_edge[segments[s][0]].push_back(s);
    by_edge[segments[s][1]].push_back(s);
  }

  std::vector<bool> used(segments.size(), false);
  auto next_segment = [&](std::size_t edge, std::size_t from) -> std::ptrdiff_t {
    for (std::size_t s : by_edge[edge])
      if (s != from && !used[s]) return static_cast<std::ptrdiff_t>(s);
    return -1;
  };

  // Walk from `edge` through unused segments, appending crossing points.
  auto walk = [&](std::size_t start_seg, std::size_t edge, std::vector<std::size_t>& chain) {
    std::size_t seg = start_seg;
    while (true) {
      std::ptrdiff_t nxt = next_segment(edge, seg);
      if (nxt < 0) break;
      seg = static_cast<std::size_t>(nxt);
      used[seg] = true;
      edge = segments[seg][0] == edge ? segments[seg][1] : segments[seg][0];
      chain.push_back(edge);
    }
  };

  std::vector<Polyline> lines;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    used[s] = true;
    std::vector<std::size_t> forward{segments[s][0], segments[s][1]};
    walk(s, segments[s][1], forward);
    std::vector<std::size_t> backward;
    if (forward.front() != forward.back()) walk(s, segments[s][0], backward);
    std::vector<std::size_t> chain(backward.rbegin(), backward.rend());
    chain.insert(chain.end(), forward.begin(), forward.end());
    Polyline line;
    line.reserve(chain.size());
    for (std::size_t e : chain) line.push_back(crossing(e));
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace fivebar
