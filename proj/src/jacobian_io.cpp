#include "segservo/jacobian_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "segservo/error.hpp"
#include "segservo/numeric_text.hpp"

namespace segservo {

void write_jacobian(std::ostream& out, const JacobianFile& file) {
  const auto& j = file.jacobian;
  if (file.coupling.rows() != j.rows() || file.coupling.cols() != j.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "coupling and Jacobian sizes differ");
  }
  out << "segservo-jacobian 1\n";
  out << "alpha " << format_double(file.alpha) << '\n';
  out << "gain " << format_double(file.gain) << '\n';
  out << "target " << format_double(file.target.s_x) << ' ' << format_double(file.target.s_y) << '\n';
  out << "features s_x s_y\n";
  for (int i = 0; i < j.rows(); ++i) {
    out << "joint " << j.joints()[static_cast<std::size_t>(i)] << " coupling";
    for (int k = 0; k < j.cols(); ++k) out << ' ' << (file.coupling(i, k) ? 1 : 0);
    out << " values";
    for (int k = 0; k < j.cols(); ++k) out << ' ' << format_double(j(i, k));
    out << '\n';
  }
}

JacobianFile read_jacobian(std::istream& in) {
  JacobianFile file;
  std::vector<std::string> joints;
  std::vector<std::vector<double>> coupling_rows;
  std::vector<std::vector<double>> value_rows;
  bool have_header = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_whitespace(line);
    if (tokens.empty() || tokens[0].starts_with('#')) continue;
    const auto bad = [&](const std::string& why) {
      return Error(ErrorKind::ParseError, "jacobian line " + std::to_string(line_no) + ": " + why);
    };
    const std::string& key = tokens[0];
    if (key == "segservo-jacobian") {
      if (tokens.size() != 2 || tokens[1] != "1") throw bad("unsupported format version");
      have_header = true;
    } else if (key == "alpha" && tokens.size() == 2) {
      file.alpha = parse_double(tokens[1]);
    } else if (key == "gain" && tokens.size() == 2) {
      file.gain = parse_double(tokens[1]);
    } else if (key == "target" && tokens.size() == 3) {
      file.target = {parse_double(tokens[1]), parse_double(tokens[2])};
    } else if (key == "features") {
      if (tokens.size() != 3 || tokens[1] != "s_x" || tokens[2] != "s_y") throw bad("features must be s_x s_y");
    } else if (key == "joint") {
      // joint <name> coupling h h values v v
      if (tokens.size() != 2 + 1 + kFeatureCount + 1 + kFeatureCount || tokens[2] != "coupling" ||
          tokens[3 + kFeatureCount] != "values") {
        throw bad("malformed joint row");
      }
      joints.push_back(tokens[1]);
      std::vector<double> h;
      std::vector<double> v;
      for (int k = 0; k < kFeatureCount; ++k) {
        h.push_back(static_cast<double>(parse_int(tokens[static_cast<std::size_t>(3 + k)])));
        v.push_back(parse_double(tokens[static_cast<std::size_t>(4 + kFeatureCount + k)]));
      }
      coupling_rows.push_back(std::move(h));
      value_rows.push_back(std::move(v));
    } else {
      throw bad("unexpected entry '" + key + "'");
    }
  }
  if (!have_header) throw Error(ErrorKind::ParseError, "missing segservo-jacobian header");
  if (joints.empty()) throw Error(ErrorKind::ParseError, "jacobian has no joint rows");

  const auto n = static_cast<Eigen::Index>(joints.size());
  Eigen::MatrixXd h(n, kFeatureCount);
  Eigen::MatrixXd v(n, kFeatureCount);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int k = 0; k < kFeatureCount; ++k) {
      h(i, k) = coupling_rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      v(i, k) = value_rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    }
  }
  file.coupling = CouplingMatrix(h);
  file.jacobian = PseudoJacobian(std::move(joints), v);
  if (!file.jacobian.gated_by(file.coupling)) {
    throw Error(ErrorKind::ParseError, "jacobian has a nonzero value where the coupling is 0");
  }
  return file;
}

void save_jacobian(const std::filesystem::path& path, const JacobianFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ConfigError, "cannot write " + path.string());
  write_jacobian(out, file);
}

JacobianFile load_jacobian(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open jacobian file " + path.string());
  return read_jacobian(in);
}

}  // namespace segservo
