#pragma once

// Serialization: point-set text format, density CSV, weight-table CSV.

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "discrelab/densities.hpp"
#include "discrelab/spectral.hpp"
#include "discrelab/torus.hpp"

namespace discrelab {

// header "dim N", then one line per point: coordinates followed by the weight
inline void write_point_set(std::ostream& os, const WeightedPointSet& ps) {
  os << ps.dim << ' ' << ps.size() << '\n';
  os << std::setprecision(17);
  for (std::size_t j = 0; j < ps.size(); ++j) {
    for (int a = 0; a < ps.dim; ++a) os << ps.points[j].x[a] << ' ';
    os << ps.weights[j] << '\n';
  }
}

inline WeightedPointSet read_point_set(std::istream& is) {
  int d = 0;
  std::size_t N = 0;
  if (!(is >> d >> N)) throw std::runtime_error("point set: bad header");
  check_dim(d);
  std::vector<TorusPoint> pts;
  std::vector<double> weights;
  for (std::size_t j = 0; j < N; ++j) {
    std::array<double, kMaxDim> c{0, 0, 0};
    double w = 0.0;
    for (int a = 0; a < d; ++a)
      if (!(is >> c[a])) throw std::runtime_error("point set: bad coordinate");
    if (!(is >> w)) throw std::runtime_error("point set: bad weight");
    pts.push_back(TorusPoint(d, c));
    weights.push_back(w);
  }
  return WeightedPointSet(d, std::move(pts), std::move(weights));
}

// rows: m_1 ... m_d, re, im
inline void write_density_csv(std::ostream& os, const DensityField& f) {
  os << std::setprecision(17);
  for (const auto& [m, c] : f.coeffs) {
    for (int a = 0; a < f.dim; ++a) os << m[a] << ',';
    os << c.real() << ',' << c.imag() << '\n';
  }
}

// columns: m_sq, weight, tail_bound_flag (1 marks the synthetic row carrying
// the beyond-cutoff tail bound)
inline void write_weight_table_csv(std::ostream& os,
                                   const SpectralWeightTable& t) {
  os << "m_sq,weight,tail_bound_flag\n" << std::setprecision(17);
  for (const auto& [msq, w] : t.entries) os << msq << ',' << w << ",0\n";
  os << "-1," << t.tail_bound << ",1\n";
}

}  // namespace discrelab
