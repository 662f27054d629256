#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "leadsel/graph.hpp"

namespace leadsel {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, end);
  if (std::isfinite(v) && s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

namespace {

std::string next_line(std::istream& in, const char* what) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) return line;
  }
  throw ParameterError(std::string("unexpected end of input while reading ") + what);
}

}  // namespace

void write_graph(std::ostream& out, const Graph& g) {
  const Index n = g.size();
  out << "n " << n << '\n';
  for (Index i = 0; i < n; ++i) out << format_double(g.coords()(i, 0)) << ' ' << format_double(g.coords()(i, 1)) << '\n';
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (g.has_edge(i, j)) out << i << ' ' << j << ' ' << format_double(g.weight(i, j)) << '\n';
}

Graph read_graph(std::istream& in) {
  std::istringstream header(next_line(in, "header"));
  std::string tag;
  Index n = -1;
  if (!(header >> tag >> n) || tag != "n" || n < 0) throw ParameterError("graph header must be `n <V>`");

  Points<double> coords(n, 2);
  for (Index i = 0; i < n; ++i) {
    std::istringstream row(next_line(in, "coordinates"));
    if (!(row >> coords(i, 0) >> coords(i, 1))) throw ParameterError("bad coordinate line " + std::to_string(i));
  }
  Matrix<double> adj = Matrix<double>::Zero(n, n);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    Index i, j;
    double w;
    if (!(row >> i >> j >> w)) throw ParameterError("bad edge line: " + line);
    if (i < 0 || j < 0 || i >= n || j >= n || i == j) throw ParameterError("edge endpoint out of range: " + line);
    if (!(w > 0)) throw ParameterError("edge weight must be > 0: " + line);
    adj(i, j) = w;
    adj(j, i) = w;
  }
  return Graph(std::move(coords), std::move(adj));
}

void save_graph(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_graph(out, g);
  if (!out) throw IoError("write failed: " + path);
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  return read_graph(in);
}

void write_matrix(std::ostream& out, const Matrix<double>& m) {
  if (m.rows() != m.cols()) throw ParameterError("matrix text format requires a square matrix");
  out << m.rows() << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << format_double(m(i, j));
    out << '\n';
  }
}

Matrix<double> read_matrix(std::istream& in) {
  std::istringstream header(next_line(in, "matrix order"));
  Index n = -1;
  if (!(header >> n) || n < 0) throw ParameterError("matrix header must be the order");
  Matrix<double> m(n, n);
  for (Index i = 0; i < n; ++i) {
    std::istringstream row(next_line(in, "matrix row"));
    for (Index j = 0; j < n; ++j)
      if (!(row >> m(i, j))) throw ParameterError("short matrix row " + std::to_string(i));
  }
  return m;
}

}  // namespace leadsel
