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

#ifndef DNA_CORRIDOR_H_
#define DNA_CORRIDOR_H_

#include <optional>
#include <string>
#include <vector>

#include "dna/grid_mdp.h"

namespace dna {

// Axis-aligned block {s : |s[k] - center[k]| <= d for all k}, clipped to the
// grid. Members are sorted state ids.
struct Cell {
  GridState center;
  int d = 1;
  std::vector<StateId> members;

  bool Contains(StateId s) const;
  friend bool operator==(const Cell& a, const Cell& b) {
    return a.center == b.center && a.d == b.d;
  }
};

// Side of a cell: members s with s[k] - center[k] == alpha * d.
struct EdgeSpec {
  int k = 0;
  int alpha = 1;

  friend bool operator==(const EdgeSpec&, const EdgeSpec&) = default;
};

struct TerminalEdge {
  GridState center;  // of the parent cell
  int d = 1;
  EdgeSpec spec;
  std::vector<StateId> members;
};

// Chain of pairwise adjacent cells, optionally with the terminal edge of the
// last cell chosen.
struct Corridor {
  std::vector<Cell> cells;
  std::optional<EdgeSpec> edge;

  const Cell& last() const { return cells.back(); }
  int length() const { return static_cast<int>(cells.size()); }
  // Sorted union of all cell members.
  std::vector<StateId> Members() const;
};

enum class Region : unsigned char { kIn, kOmega, kOut };

// (S_in, S_omega, S_out): pairwise disjoint, covering every state.
struct Partition {
  std::vector<Region> region;  // indexed by state id
  std::vector<StateId> in;
  std::vector<StateId> omega;
  std::vector<StateId> out;

  bool IsIn(StateId s) const { return region[s] == Region::kIn; }
  bool IsOmega(StateId s) const { return region[s] == Region::kOmega; }
  bool IsOut(StateId s) const { return region[s] == Region::kOut; }
  int num_states() const { return static_cast<int>(region.size()); }

  // Builds the three lists from a region vector.
  static Partition FromRegions(std::vector<Region> region);
};

Cell MakeCell(const Grid& grid, const GridState& center, int d);

// 2K candidate sides in (k ascending, alpha -1 then +1) order; sides left
// empty by clipping are dropped.
std::vector<TerminalEdge> TerminalEdges(const Grid& grid, const Cell& cell);

TerminalEdge MakeTerminalEdge(const Grid& grid, const Cell& cell, EdgeSpec spec);

// True iff the member sets differ and some pair of members are neighbors.
bool CellsAdjacent(const Grid& grid, const Cell& a, const Cell& b);

// Appends the cell obtained by moving the last center `spacing` steps across
// `edge`. Throws kOffGrid when the new center leaves the grid or the new cell
// does not reach past the last one.
Corridor ExtendCorridor(const Grid& grid, const Corridor& corridor,
                        const TerminalEdge& edge, int spacing);

Partition PartitionStates(const Grid& grid, const Corridor& corridor);

// Readable key: centers then the chosen edge, e.g. "0,0;3,0|k0+".
std::string CorridorKey(const Corridor& corridor);

}  // namespace dna

#endif  // DNA_CORRIDOR_H_
