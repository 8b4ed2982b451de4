#pragma once

#include "cmtk/seqcore.hpp"

#include <functional>
#include <vector>

namespace testing_support {

using cmtk::Index;
using cmtk::Rational;

inline cmtk::Sequence<Rational> exact_seq(const std::vector<Rational>& v) {
    cmtk::Vector<Rational> x(static_cast<Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) x(static_cast<Index>(i)) = v[i];
    return cmtk::Sequence<Rational>(x);
}

inline cmtk::Sequence<Rational> exact_seq(Index K, const std::function<Rational(long)>& f) {
    cmtk::Vector<Rational> x(K + 1);
    for (Index k = 0; k <= K; ++k) x(k) = f(static_cast<long>(k));
    return cmtk::Sequence<Rational>(x);
}

inline cmtk::Sequence<double> float_seq(Index K, const std::function<double(double)>& f) {
    Eigen::VectorXd x(K + 1);
    for (Index k = 0; k <= K; ++k) x(k) = f(static_cast<double>(k));
    return cmtk::Sequence<double>(x);
}

inline std::vector<Rational> to_vector(const cmtk::Vector<Rational>& v) {
    return std::vector<Rational>(v.data(), v.data() + v.size());
}

}  // namespace testing_support
