#pragma once

// Matrix-free operator usable with Eigen's iterative solvers (GMRES, CG).

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <complex>
#include <functional>

namespace wcsb {
class LinearOperator;
}

namespace Eigen {
namespace internal {
template <>
struct traits<wcsb::LinearOperator> : public traits<SparseMatrix<std::complex<double>>> {};
}  // namespace internal
}  // namespace Eigen

namespace wcsb {

class LinearOperator : public Eigen::EigenBase<LinearOperator> {
 public:
  using Scalar = std::complex<double>;
  using RealScalar = double;
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic, IsRowMajor = false };
  using Apply = std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>;

  LinearOperator(Eigen::Index n, Apply apply) : n_(n), apply_(std::move(apply)) {}

  Eigen::Index rows() const { return n_; }
  Eigen::Index cols() const { return n_; }

  template <typename Rhs>
  Eigen::Product<LinearOperator, Rhs, Eigen::AliasFreeProduct> operator*(const Eigen::MatrixBase<Rhs>& x) const {
    return Eigen::Product<LinearOperator, Rhs, Eigen::AliasFreeProduct>(*this, x.derived());
  }

  void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const { apply_(x, y); }

 private:
  Eigen::Index n_;
  Apply apply_;
};

}  // namespace wcsb

namespace Eigen {
namespace internal {

template <typename Rhs>
struct generic_product_impl<wcsb::LinearOperator, Rhs, SparseShape, DenseShape, GemvProduct>
    : generic_product_impl_base<wcsb::LinearOperator, Rhs, generic_product_impl<wcsb::LinearOperator, Rhs>> {
  using Scalar = typename Product<wcsb::LinearOperator, Rhs>::Scalar;

  template <typename Dest>
  static void scaleAndAddTo(Dest& dst, const wcsb::LinearOperator& lhs, const Rhs& rhs, const Scalar& alpha) {
    Eigen::VectorXcd x = rhs;
    Eigen::VectorXcd y;
    lhs.apply(x, y);
    dst.noalias() += alpha * y;
  }
};

}  // namespace internal
}  // namespace Eigen
