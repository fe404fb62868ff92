#include <cmath>
#include <sstream>

#include "lculab/qcore.hpp"

namespace lculab {
namespace detail {

class OpNode {
 public:
  virtual ~OpNode() = default;
  virtual std::size_t dim() const = 0;
  virtual CVector act(const CVector& v) const = 0;
  virtual std::shared_ptr<const OpNode> adjoint() const = 0;
  virtual std::string kind() const = 0;
};

using NodePtr = std::shared_ptr<const OpNode>;

namespace {

class DenseNode final : public OpNode {
 public:
  explicit DenseNode(CMatrix m) : m_(std::move(m)) {}
  std::size_t dim() const override { return static_cast<std::size_t>(m_.rows()); }
  CVector act(const CVector& v) const override { return m_ * v; }
  NodePtr adjoint() const override { return std::make_shared<DenseNode>(m_.adjoint()); }
  std::string kind() const override { return "dense"; }
  const CMatrix& matrix() const { return m_; }

 private:
  CMatrix m_;
};

class DiagonalNode final : public OpNode {
 public:
  explicit DiagonalNode(CVector d) : d_(std::move(d)) {}
  std::size_t dim() const override { return static_cast<std::size_t>(d_.size()); }
  CVector act(const CVector& v) const override { return d_.cwiseProduct(v); }
  NodePtr adjoint() const override { return std::make_shared<DiagonalNode>(d_.conjugate()); }
  std::string kind() const override { return "diagonal"; }

 private:
  CVector d_;
};

class ReflectionNode final : public OpNode {
 public:
  ReflectionNode(CVector w, Complex phase) : w_(std::move(w)), phase_(phase) {}
  std::size_t dim() const override { return static_cast<std::size_t>(w_.size()); }
  CVector act(const CVector& v) const override {
    const Complex proj = w_.dot(v);  // conjugates w
    return phase_ * (v - 2.0 * proj * w_);
  }
  NodePtr adjoint() const override {
    return std::make_shared<ReflectionNode>(w_, std::conj(phase_));
  }
  std::string kind() const override { return "reflection"; }

 private:
  CVector w_;
  Complex phase_;
};

class PlaneRotationNode final : public OpNode {
 public:
  PlaneRotationNode(CVector e1, CVector e2, double angle)
      : e1_(std::move(e1)), e2_(std::move(e2)), angle_(angle) {}
  std::size_t dim() const override { return static_cast<std::size_t>(e1_.size()); }
  CVector act(const CVector& v) const override {
    const Complex p1 = e1_.dot(v);
    const Complex p2 = e2_.dot(v);
    const double c = std::cos(angle_);
    const double s = std::sin(angle_);
    CVector out = v;
    out += e1_ * (c * p1 - s * p2 - p1);
    out += e2_ * (s * p1 + c * p2 - p2);
    return out;
  }
  NodePtr adjoint() const override {
    return std::make_shared<PlaneRotationNode>(e1_, e2_, -angle_);
  }
  std::string kind() const override { return "plane_rotation"; }

 private:
  CVector e1_;
  CVector e2_;
  double angle_;
};

class BlockDiagonalNode final : public OpNode {
 public:
  explicit BlockDiagonalNode(std::vector<NodePtr> blocks) : blocks_(std::move(blocks)) {
    for (const auto& b : blocks_) dim_ += b->dim();
  }
  std::size_t dim() const override { return dim_; }
  CVector act(const CVector& v) const override {
    CVector out(v.size());
    Eigen::Index offset = 0;
    for (const auto& b : blocks_) {
      const auto n = static_cast<Eigen::Index>(b->dim());
      out.segment(offset, n) = b->act(v.segment(offset, n));
      offset += n;
    }
    return out;
  }
  NodePtr adjoint() const override {
    std::vector<NodePtr> adj;
    adj.reserve(blocks_.size());
    for (const auto& b : blocks_) adj.push_back(b->adjoint());
    return std::make_shared<BlockDiagonalNode>(std::move(adj));
  }
  std::string kind() const override { return "block_diagonal"; }

 private:
  std::vector<NodePtr> blocks_;
  std::size_t dim_ = 0;
};

class KronNode final : public OpNode {
 public:
  KronNode(NodePtr outer, NodePtr inner) : outer_(std::move(outer)), inner_(std::move(inner)) {}
  std::size_t dim() const override { return outer_->dim() * inner_->dim(); }
  CVector act(const CVector& v) const override {
    const auto no = static_cast<Eigen::Index>(outer_->dim());
    const auto ni = static_cast<Eigen::Index>(inner_->dim());
    // Column i of `x` is the inner block for outer index i.
    CMatrix x = Eigen::Map<const CMatrix>(v.data(), ni, no);
    for (Eigen::Index i = 0; i < no; ++i) x.col(i) = inner_->act(x.col(i));
    for (Eigen::Index j = 0; j < ni; ++j) {
      const CVector row = x.row(j).transpose();
      x.row(j) = outer_->act(row).transpose();
    }
    return Eigen::Map<const CVector>(x.data(), no * ni);
  }
  NodePtr adjoint() const override {
    return std::make_shared<KronNode>(outer_->adjoint(), inner_->adjoint());
  }
  std::string kind() const override { return "kron(" + outer_->kind() + "," + inner_->kind() + ")"; }

 private:
  NodePtr outer_;
  NodePtr inner_;
};

class ProductNode final : public OpNode {
 public:
  explicit ProductNode(std::vector<NodePtr> factors) : factors_(std::move(factors)) {}
  std::size_t dim() const override { return factors_.front()->dim(); }
  CVector act(const CVector& v) const override {
    CVector out = v;
    for (const auto& f : factors_) out = f->act(out);
    return out;
  }
  NodePtr adjoint() const override {
    std::vector<NodePtr> adj(factors_.rbegin(), factors_.rend());
    for (auto& f : adj) f = f->adjoint();
    return std::make_shared<ProductNode>(std::move(adj));
  }
  std::string kind() const override { return "product"; }

 private:
  std::vector<NodePtr> factors_;
};

class AncillaRotationNode final : public OpNode {
 public:
  AncillaRotationNode(RVector c, RVector s) : c_(std::move(c)), s_(std::move(s)) {}
  std::size_t dim() const override { return 2 * static_cast<std::size_t>(c_.size()); }
  CVector act(const CVector& v) const override {
    const auto n = c_.size();
    CVector out(2 * n);
    const auto v0 = v.head(n);
    const auto v1 = v.tail(n);
    out.head(n) = c_.cast<Complex>().cwiseProduct(v0) - s_.cast<Complex>().cwiseProduct(v1);
    out.tail(n) = s_.cast<Complex>().cwiseProduct(v0) + c_.cast<Complex>().cwiseProduct(v1);
    return out;
  }
  NodePtr adjoint() const override { return std::make_shared<AncillaRotationNode>(c_, -s_); }
  std::string kind() const override { return "controlled_ancilla_rotation"; }

 private:
  RVector c_;
  RVector s_;
};

}  // namespace
}  // namespace detail

double unitarity_defect(const CMatrix& m) {
  const CMatrix g = m.adjoint() * m - CMatrix::Identity(m.rows(), m.cols());
  return g.cwiseAbs().maxCoeff();
}

double spectral_norm(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

UnitaryOp UnitaryOp::dense(CMatrix matrix, CostLedger cost) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    fail(ErrorKind::DimMismatch, "unitary matrix must be square and non-empty");
  }
  const double defect = unitarity_defect(matrix);
  if (!(defect <= kUnitaryTol)) {
    std::ostringstream msg;
    msg << "matrix is not unitary: max|U^dag U - I| = " << defect;
    fail(ErrorKind::NotUnitary, msg.str());
  }
  return {std::make_shared<detail::DenseNode>(std::move(matrix)), cost};
}

UnitaryOp UnitaryOp::identity(std::size_t dim) {
  return diagonal(CVector::Ones(static_cast<Eigen::Index>(dim)));
}

UnitaryOp UnitaryOp::diagonal(CVector entries, CostLedger cost) {
  if (entries.size() == 0) fail(ErrorKind::DimMismatch, "empty diagonal");
  for (Eigen::Index k = 0; k < entries.size(); ++k) {
    if (std::abs(std::abs(entries[k]) - 1.0) > kUnitaryTol) {
      fail(ErrorKind::NotUnitary, "diagonal entry with modulus != 1");
    }
  }
  return {std::make_shared<detail::DiagonalNode>(std::move(entries)), cost};
}

UnitaryOp UnitaryOp::reflection(CVector w, Complex phase, CostLedger cost) {
  if (w.size() == 0) fail(ErrorKind::DimMismatch, "empty reflection vector");
  const double n = w.norm();
  if (n > kZeroNorm && std::abs(n - 1.0) > kUnitaryTol) {
    fail(ErrorKind::NotUnitary, "reflection vector must be a unit vector");
  }
  if (std::abs(std::abs(phase) - 1.0) > kUnitaryTol) {
    fail(ErrorKind::NotUnitary, "reflection phase must have modulus 1");
  }
  if (n <= kZeroNorm) w.setZero();
  return {std::make_shared<detail::ReflectionNode>(std::move(w), phase), cost};
}

UnitaryOp UnitaryOp::plane_rotation(CVector e1, CVector e2, double angle, CostLedger cost) {
  if (e1.size() != e2.size() || e1.size() == 0) {
    fail(ErrorKind::DimMismatch, "rotation plane vectors differ in dimension");
  }
  if (std::abs(e1.norm() - 1.0) > kUnitaryTol || std::abs(e2.norm() - 1.0) > kUnitaryTol ||
      std::abs(e1.dot(e2)) > kUnitaryTol) {
    fail(ErrorKind::NotUnitary, "rotation plane vectors must be orthonormal");
  }
  return {std::make_shared<detail::PlaneRotationNode>(std::move(e1), std::move(e2), angle), cost};
}

UnitaryOp UnitaryOp::block_diagonal(std::vector<UnitaryOp> blocks, std::optional<CostLedger> cost) {
  if (blocks.empty()) fail(ErrorKind::DimMismatch, "block diagonal needs at least one block");
  std::vector<detail::NodePtr> nodes;
  CostLedger sum;
  for (const auto& b : blocks) {
    nodes.push_back(b.node_);
    sum += b.cost_;
  }
  return {std::make_shared<detail::BlockDiagonalNode>(std::move(nodes)), cost.value_or(sum)};
}

UnitaryOp UnitaryOp::kron(const UnitaryOp& outer, const UnitaryOp& inner) {
  return {std::make_shared<detail::KronNode>(outer.node_, inner.node_), outer.cost_ + inner.cost_};
}

UnitaryOp UnitaryOp::product(std::vector<UnitaryOp> factors) {
  if (factors.empty()) fail(ErrorKind::DimMismatch, "empty product");
  const std::size_t d = factors.front().dim();
  std::vector<detail::NodePtr> nodes;
  CostLedger sum;
  for (const auto& f : factors) {
    if (f.dim() != d) fail(ErrorKind::DimMismatch, "product factors differ in dimension");
    nodes.push_back(f.node_);
    sum += f.cost_;
  }
  if (nodes.size() == 1) return {nodes.front(), sum};
  return {std::make_shared<detail::ProductNode>(std::move(nodes)), sum};
}

UnitaryOp UnitaryOp::controlled_ancilla_rotation(RVector cosines, RVector sines, CostLedger cost) {
  if (cosines.size() != sines.size() || cosines.size() == 0) {
    fail(ErrorKind::DimMismatch, "rotation tables differ in length");
  }
  for (Eigen::Index k = 0; k < cosines.size(); ++k) {
    const double r = cosines[k] * cosines[k] + sines[k] * sines[k];
    if (std::abs(r - 1.0) > kUnitaryTol) fail(ErrorKind::NotUnitary, "rotation entry with c^2+s^2 != 1");
  }
  return {std::make_shared<detail::AncillaRotationNode>(std::move(cosines), std::move(sines)), cost};
}

std::size_t UnitaryOp::dim() const { return node_->dim(); }

UnitaryOp UnitaryOp::with_cost(CostLedger cost) const { return {node_, cost}; }

std::string UnitaryOp::kind() const { return node_->kind(); }

CVector UnitaryOp::act(const CVector& v) const {
  if (static_cast<std::size_t>(v.size()) != dim()) {
    fail(ErrorKind::DimMismatch, "operator and vector dimensions differ");
  }
  return node_->act(v);
}

CMatrix UnitaryOp::matrix() const {
  if (const auto* d = dynamic_cast<const detail::DenseNode*>(node_.get())) return d->matrix();
  const auto n = static_cast<Eigen::Index>(dim());
  CMatrix out(n, n);
  CVector e = CVector::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    e[k] = 1.0;
    out.col(k) = node_->act(e);
    e[k] = 0.0;
  }
  return out;
}

UnitaryOp UnitaryOp::adjoint() const { return {node_->adjoint(), cost_}; }

}  // namespace lculab
