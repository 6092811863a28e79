#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace bergflow {

using cplx = std::complex<double>;

/// Complex dimensions 1 and 2 are supported; small vectors and matrices are
/// stored inline with this capacity.
inline constexpr int kMaxDim = 2;

using CVec = Eigen::Matrix<cplx, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using CMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

/// A point of C^n.
using Point = CVec;
using NodeSet = std::vector<Point>;
using NodeSetPtr = std::shared_ptr<const NodeSet>;

inline Point make_point(cplx z) {
  Point p(1);
  p(0) = z;
  return p;
}

inline Point make_point(cplx z1, cplx z2) {
  Point p(2);
  p(0) = z1;
  p(1) = z2;
  return p;
}

inline double norm2(const Point& p) { return p.squaredNorm(); }

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace bergflow
