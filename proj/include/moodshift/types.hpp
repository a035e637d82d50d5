#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace moodshift {

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatF = Mat<float>;
using VecF = Vec<float>;
using MatD = Mat<double>;
using VecD = Vec<double>;

using Index = Eigen::Index;

/// Bad user input: malformed files, out-of-range labels, inconsistent
/// configs. The CLI maps this to exit code 1; anything else is a runtime
/// failure (exit code 2).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace moodshift
