#include "cmtk/seqcore.hpp"

namespace cmtk {

template class Sequence<double>;
template class Sequence<Rational>;
template DifferenceTable<double> difference_table(const Sequence<double>&, Index);
template DifferenceTable<Rational> difference_table(const Sequence<Rational>&, Index);

Sequence<double> to_float(const Sequence<Rational>& a) {
    Eigen::VectorXd v(a.size());
    for (Index k = 0; k < a.size(); ++k) v(k) = to_double(a[k]);
    return Sequence<double>(v, kUnitRoundoff * v.cwiseAbs(), a.step());
}

}  // namespace cmtk
