#pragma once

#include <filesystem>
#include <iosfwd>

#include "segservo/servo.hpp"

namespace segservo {

// Everything needed to resume servoing with a learned Jacobian.
struct JacobianFile {
  PseudoJacobian jacobian;
  CouplingMatrix coupling;
  double alpha = 0.0;
  double gain = 1.0;
  FeatureVector target;
};

// Line-oriented text:
//
//   segservo-jacobian 1
//   alpha <a>
//   gain <lambda>
//   target <s*_x> <s*_y>
//   features s_x s_y
//   joint <name> coupling <h_1> <h_2> values <j_1> <j_2>
//   ...
//
// Numbers use the shortest decimal form that reads back to the same double,
// so save -> load -> save is byte-identical.
void write_jacobian(std::ostream& out, const JacobianFile& file);
JacobianFile read_jacobian(std::istream& in);

void save_jacobian(const std::filesystem::path& path, const JacobianFile& file);
JacobianFile load_jacobian(const std::filesystem::path& path);

}  // namespace segservo
