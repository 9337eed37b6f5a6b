// dump.hpp - little-endian binary dumps of Liouvillians and density matrices
//
// Layout (all integers little-endian):
//   8 bytes   magic "PHCHILL1"
//   uint32    kind (1 = full Liouvillian, 2 = density matrix, 3 = zero-charge Liouvillian block)
//   uint32    number of subsystems S
//   S*uint32  subsystem dimensions (Kronecker order, subsystem 0 most significant)
//   uint64    rows
//   uint64    cols
//   rows*cols (re, im) float64 pairs, row-major
// For kind 3 an extra uint64 count followed by that many uint64 vectorized indices
// (i + j*d) trails the matrix, naming the rows/columns kept.
#pragma once

#include "phonon_chill/hilbert.hpp"
#include "phonon_chill/steadystate.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace phonon_chill {

enum class DumpKind : std::uint32_t {
  Liouvillian = 1,
  DensityMatrix = 2,
  LiouvillianBlock = 3,
};

struct DumpContents {
  DumpKind kind = DumpKind::DensityMatrix;
  std::vector<std::size_t> dims;
  Matrix matrix;
  std::vector<std::size_t> kept;
};

void write_dump(const std::string& path, const Liouvillian& liouvillian);
void write_dump(const std::string& path, const LabeledOperator& rho);

DumpContents read_dump(const std::string& path);

}  // namespace phonon_chill
