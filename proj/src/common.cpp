#include "qp/common.hpp"

#include <algorithm>

namespace qp {

std::vector<Interval> merge_cloud(std::vector<double> samples, double eta) {
    std::vector<Interval> out;
    if (samples.empty()) return out;
    std::sort(samples.begin(), samples.end());
    Interval cur{samples[0], samples[0]};
    for (size_t i = 1; i < samples.size(); ++i) {
        if (samples[i] - cur.hi > eta) {
            out.push_back(cur);
            cur = Interval{samples[i], samples[i]};
        } else {
            cur.hi = samples[i];
        }
    }
    out.push_back(cur);
    return out;
}

MatrixXcd orthonormalize(const MatrixXcd& M) {
    Eigen::HouseholderQR<MatrixXcd> qr(M);
    MatrixXcd Q = qr.householderQ() * MatrixXcd::Identity(M.rows(), M.cols());
    return Q;
}

double grassmann_distance(const MatrixXcd& A, const MatrixXcd& B) {
    MatrixXcd Qa = orthonormalize(A), Qb = orthonormalize(B);
    // singular values of Qa^* Qb are cosines of the principal angles
    Eigen::JacobiSVD<MatrixXcd> svd(Qa.adjoint() * Qb);
    double smin = svd.singularValues().minCoeff();
    smin = std::min(1.0, std::max(-1.0, smin));
    return std::acos(smin);
}

}  // namespace qp
