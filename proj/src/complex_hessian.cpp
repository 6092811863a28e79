#include "bergflow/complex_hessian.hpp"

namespace bergflow {

namespace {

Point shifted(const Point& z, int axis, double delta) {
  Point p = z;
  const int d = axis / 2;
  p(d) += (axis % 2 == 0) ? cplx(delta, 0.0) : cplx(0.0, delta);
  return p;
}

Eigen::MatrixXd real_hessian(const std::function<double(const Point&)>& u, const Point& z, double h) {
  const int axes = 2 * static_cast<int>(z.size());
  Eigen::MatrixXd H(axes, axes);
  const double u0 = u(z);
  for (int a = 0; a < axes; ++a) {
    H(a, a) = (u(shifted(z, a, h)) - 2.0 * u0 + u(shifted(z, a, -h))) / (h * h);
    for (int b = a + 1; b < axes; ++b) {
      const double pp = u(shifted(shifted(z, a, h), b, h));
      const double pm = u(shifted(shifted(z, a, h), b, -h));
      const double mp = u(shifted(shifted(z, a, -h), b, h));
      const double mm = u(shifted(shifted(z, a, -h), b, -h));
      H(a, b) = H(b, a) = (pp - pm - mp + mm) / (4.0 * h * h);
    }
  }
  return H;
}

}  // namespace

Eigen::MatrixXcd complex_hessian(const std::function<double(const Point&)>& u, const Point& z,
                                 double h, bool richardson) {
  Eigen::MatrixXd H = real_hessian(u, z, h);
  if (richardson) H = (4.0 * H - real_hessian(u, z, 2.0 * h)) / 3.0;
  const int n = static_cast<int>(z.size());
  Eigen::MatrixXcd L(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int xi = 2 * i, yi = 2 * i + 1, xj = 2 * j, yj = 2 * j + 1;
      L(i, j) = cplx(0.25 * (H(xi, xj) + H(yi, yj)), 0.25 * (H(xi, yj) - H(yi, xj)));
    }
  }
  return L;
}

Eigen::VectorXcd complex_gradient(const std::function<double(const Point&)>& u, const Point& z,
                                  double h) {
  const int n = static_cast<int>(z.size());
  Eigen::VectorXcd g(n);
  for (int i = 0; i < n; ++i) {
    const double ux = (u(shifted(z, 2 * i, h)) - u(shifted(z, 2 * i, -h))) / (2.0 * h);
    const double uy = (u(shifted(z, 2 * i + 1, h)) - u(shifted(z, 2 * i + 1, -h))) / (2.0 * h);
    g(i) = 0.5 * cplx(ux, -uy);
  }
  return g;
}

double min_eigenvalue(const Eigen::MatrixXcd& hermitian) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace bergflow
