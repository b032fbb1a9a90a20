#pragma once

#include <Eigen/SVD>

namespace evospec {

template <typename Mat>
Mat pinv(const Mat& a, typename Mat::RealScalar rel_cut) {
    using Real = typename Mat::RealScalar;
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const Real smax = s.size() ? s(0) : Real(0);
    Mat sinv = Mat::Zero(s.size(), s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > rel_cut * smax) sinv(i, i) = Real(1) / s(i);
    return svd.matrixV() * sinv * svd.matrixU().adjoint();
}

}  // namespace evospec
