// Copyright 2026 The DNA Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dna/corridor.h"

#include <algorithm>
#include <cstdlib>

namespace dna {

bool Cell::Contains(StateId s) const {
  return std::binary_search(members.begin(), members.end(), s);
}

std::vector<StateId> Corridor::Members() const {
  std::vector<StateId> out;
  for (const Cell& c : cells) out.insert(out.end(), c.members.begin(), c.members.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Partition Partition::FromRegions(std::vector<Region> region) {
  Partition p;
  p.region = std::move(region);
  for (StateId s = 0; s < static_cast<StateId>(p.region.size()); ++s) {
    switch (p.region[s]) {
      case Region::kIn:
        p.in.push_back(s);
        break;
      case Region::kOmega:
        p.omega.push_back(s);
        break;
      case Region::kOut:
        p.out.push_back(s);
        break;
    }
  }
  return p;
}

namespace {

// Visits every in-grid state of the box [lo, hi] in row-major order.
template <typename Fn>
void ForEachInBox(const Grid& grid, std::vector<int> lo, std::vector<int> hi,
                  Fn&& fn) {
  const int dims = grid.dims();
  for (int k = 0; k < dims; ++k) {
    lo[k] = std::max(lo[k], 0);
    hi[k] = std::min(hi[k], grid.extent(k) - 1);
    if (lo[k] > hi[k]) return;
  }
  GridState cur(lo);
  while (true) {
    fn(grid.Id(cur));
    int k = dims - 1;
    while (k >= 0 && cur.coords[k] == hi[k]) {
      cur.coords[k] = lo[k];
      --k;
    }
    if (k < 0) return;
    ++cur.coords[k];
  }
}

}  // namespace

Cell MakeCell(const Grid& grid, const GridState& center, int d) {
  if (d < 1) {
    throw Error(ErrorCode::kInvalidArgument, "cell half-width must be >= 1");
  }
  if (!grid.Contains(center)) {
    throw Error(ErrorCode::kOutOfBounds,
                "cell center " + ToString(center) + " off grid");
  }
  Cell cell{center, d, {}};
  std::vector<int> lo(center.coords), hi(center.coords);
  for (int k = 0; k < grid.dims(); ++k) {
    lo[k] -= d;
    hi[k] += d;
  }
  ForEachInBox(grid, lo, hi, [&](StateId s) { cell.members.push_back(s); });
  return cell;
}

TerminalEdge MakeTerminalEdge(const Grid& grid, const Cell& cell,
                              EdgeSpec spec) {
  if (spec.k < 0 || spec.k >= grid.dims() || (spec.alpha != -1 && spec.alpha != 1)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid terminal edge selector");
  }
  TerminalEdge edge{cell.center, cell.d, spec, {}};
  std::vector<int> lo(cell.center.coords), hi(cell.center.coords);
  for (int k = 0; k < grid.dims(); ++k) {
    lo[k] -= cell.d;
    hi[k] += cell.d;
  }
  lo[spec.k] = hi[spec.k] = cell.center[spec.k] + spec.alpha * cell.d;
  ForEachInBox(grid, lo, hi, [&](StateId s) { edge.members.push_back(s); });
  return edge;
}

std::vector<TerminalEdge> TerminalEdges(const Grid& grid, const Cell& cell) {
  std::vector<TerminalEdge> out;
  for (int k = 0; k < grid.dims(); ++k) {
    for (int alpha : {-1, 1}) {
      TerminalEdge e = MakeTerminalEdge(grid, cell, {k, alpha});
      if (!e.members.empty()) out.push_back(std::move(e));
    }
  }
  return out;
}

bool CellsAdjacent(const Grid& grid, const Cell& a, const Cell& b) {
  if (a.members == b.members) return false;
  for (StateId s : a.members) {
    for (const GridState& n : grid.Neighbors(grid.State(s))) {
      if (b.Contains(grid.Id(n))) return true;
    }
  }
  return false;
}

Corridor ExtendCorridor(const Grid& grid, const Corridor& corridor,
                        const TerminalEdge& edge, int spacing) {
  if (corridor.cells.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot extend an empty corridor");
  }
  const Cell& last = corridor.last();
  if (edge.center != last.center || edge.d != last.d) {
    throw Error(ErrorCode::kInvalidArgument,
                "edge does not belong to the last cell of the corridor");
  }
  if (spacing < 1 || spacing > 2 * last.d + 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "cell spacing must lie in [1, 2d+1] to keep cells adjacent");
  }
  GridState center = last.center;
  center.coords[edge.spec.k] += edge.spec.alpha * spacing;
  if (!grid.Contains(center)) {
    throw Error(ErrorCode::kOffGrid,
                "extension center " + ToString(center) + " leaves the grid");
  }
  Cell next = MakeCell(grid, center, last.d);
  if (!CellsAdjacent(grid, last, next)) {
    throw Error(ErrorCode::kOffGrid,
                "extension across the grid boundary covers no new states");
  }
  Corridor out{corridor.cells, std::nullopt};
  out.cells.push_back(std::move(next));
  return out;
}

Partition PartitionStates(const Grid& grid, const Corridor& corridor) {
  if (!corridor.edge.has_value()) {
    throw Error(ErrorCode::kInvalidArgument, "corridor has no terminal edge");
  }
  std::vector<Region> region(grid.num_states(), Region::kOut);
  for (const Cell& c : corridor.cells) {
    for (StateId s : c.members) region[s] = Region::kIn;
  }
  const TerminalEdge edge = MakeTerminalEdge(grid, corridor.last(), *corridor.edge);
  for (StateId s : edge.members) region[s] = Region::kOmega;
  return Partition::FromRegions(std::move(region));
}

std::string CorridorKey(const Corridor& corridor) {
  std::string key;
  for (std::size_t i = 0; i < corridor.cells.size(); ++i) {
    if (i > 0) key += ";";
    const GridState& c = corridor.cells[i].center;
    for (int k = 0; k < c.dims(); ++k) {
      if (k > 0) key += ",";
      key += std::to_string(c[k]);
    }
  }
  if (corridor.edge.has_value()) {
    key += "|k" + std::to_string(corridor.edge->k) +
           (corridor.edge->alpha < 0 ? "-" : "+");
  }
  return key;
}

}  // namespace dna
