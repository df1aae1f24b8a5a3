#include "codedspline/dense_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "codedspline/errors.hpp"

namespace codedspline::oracle {

double phi0(double t, double s) {
    const double w = std::min(t, s);
    const double m = std::max(t, s);
    return w * w * m / 2.0 - w * w * w / 6.0;
}

double phi0_dx(double x, double s) {
    return x < s ? s * x - x * x / 2.0 : s * s / 2.0;
}

double phi0_dxx(double x, double s) {
    return x < s ? s - x : 0.0;
}

namespace {

struct DenseSystem {
    Eigen::MatrixXd P, Sigma, Linv;
    Eigen::MatrixXd M1;  // (P^T L^-1 P)^-1 P^T L^-1
    Eigen::MatrixXd M2;  // L^-1 (I - P M1)
};

DenseSystem build_system(const std::vector<double>& t, double lambda) {
    const auto n = static_cast<Eigen::Index>(t.size());
    DenseSystem sys;
    sys.P.resize(n, 2);
    sys.Sigma.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        sys.P(i, 0) = 1.0;
        sys.P(i, 1) = t[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < n; ++j)
            sys.Sigma(i, j) =
                phi0(t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>(j)]);
    }
    const Eigen::MatrixXd L =
        sys.Sigma + static_cast<double>(n) * lambda * Eigen::MatrixXd::Identity(n, n);
    sys.Linv = L.inverse();
    const Eigen::Matrix2d PtLiP = sys.P.transpose() * sys.Linv * sys.P;
    sys.M1 = PtLiP.inverse() * sys.P.transpose() * sys.Linv;
    sys.M2 = sys.Linv * (Eigen::MatrixXd::Identity(n, n) - sys.P * sys.M1);
    return sys;
}

}  // namespace

DenseFit dense_fit(const std::vector<double>& points, const std::vector<double>& values,
                   double lambda) {
    if (points.size() < 3) throw TooFewPoints("dense oracle needs n >= 3");
    const DenseSystem sys = build_system(points, lambda);
    const Eigen::VectorXd y =
        Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
    DenseFit f;
    f.knots = points;
    f.coef_poly = sys.M1 * y;
    f.coef_kernel = sys.M2 * y;
    f.lambda = lambda;
    return f;
}

double dense_evaluate(const DenseFit& f, double x, int order) {
    double acc = 0.0;
    for (std::size_t j = 0; j < f.knots.size(); ++j) {
        const double s = f.knots[j];
        const double k = order == 0 ? phi0(x, s) : order == 1 ? phi0_dx(x, s) : phi0_dxx(x, s);
        acc += f.coef_kernel[static_cast<Eigen::Index>(j)] * k;
    }
    switch (order) {
        case 0: return f.coef_poly[0] + f.coef_poly[1] * x + acc;
        case 1: return f.coef_poly[1] + acc;
        default: return acc;
    }
}

Eigen::MatrixXd dense_hat_matrix(const std::vector<double>& points, double lambda) {
    const DenseSystem sys = build_system(points, lambda);
    return sys.P * sys.M1 + sys.Sigma * sys.M2;
}

Eigen::MatrixXd dense_hat_matrix_qform(const std::vector<double>& points, double lambda) {
    const auto n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd P(n, 2), Sigma(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        P(i, 0) = 1.0;
        P(i, 1) = points[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < n; ++j)
            Sigma(i, j) =
                phi0(points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(j)]);
    }
    Eigen::MatrixXd Q(n, n + 2);
    Q << P, Sigma;
    Eigen::MatrixXd Gamma = Eigen::MatrixXd::Zero(n + 2, n + 2);
    Gamma.bottomRightCorner(n, n) = Sigma;
    // the augmented matrix is singular when a knot sits at 0, so solve in the
    // least-squares sense (the fitted values Q theta are still unique)
    const Eigen::MatrixXd A = Q.transpose() * Q + static_cast<double>(n) * lambda * Gamma;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    return Q * cod.solve(Q.transpose());
}

}  // namespace codedspline::oracle
