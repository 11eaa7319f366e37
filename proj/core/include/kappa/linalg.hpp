#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kappa/rational.hpp"

namespace kappa {

using QVector = std::vector<Rational>;
using QMatrix = std::vector<QVector>;  // row major

// Reduced row echelon form in place; returns pivot column per row.
std::vector<int> rref(QMatrix& m);

// Exact solve of A x = b (A given column-wise as `columns`); empty optional if
// b is outside the column span.
std::optional<QVector> solve_columns(const std::vector<QVector>& columns, const QVector& b);

// Coordinates of `target` in span(generators), if any.
inline std::optional<QVector> in_image(const QVector& target,
                                       const std::vector<QVector>& generators) {
  return solve_columns(generators, target);
}

// Basis of the nullspace of A (rows = equations).
std::vector<QVector> nullspace(QMatrix a);

// Sparse vectors over an ordered label type, flattened on demand. Used by the
// verification suites to set up exact membership tests over monomial bases.
template <class Label>
class LinearSystem {
 public:
  int add_label(const Label& l) {
    auto it = index_.find(l);
    if (it != index_.end()) return it->second;
    int id = static_cast<int>(labels_.size());
    labels_.push_back(l);
    index_.emplace(l, id);
    return id;
  }
  int size() const { return static_cast<int>(labels_.size()); }
  const Label& label(int i) const { return labels_.at(static_cast<size_t>(i)); }

  QVector flatten(const std::map<Label, Rational>& v) {
    for (const auto& [l, c] : v) add_label(l);
    QVector r(static_cast<size_t>(size()), Rational(0));
    for (const auto& [l, c] : v) r[static_cast<size_t>(index_.at(l))] = c;
    return r;
  }

  // Re-pad previously flattened vectors after new labels appeared.
  static void pad(std::vector<QVector>& vs, size_t dim) {
    for (auto& v : vs) v.resize(dim, Rational(0));
  }

 private:
  std::vector<Label> labels_;
  std::map<Label, int> index_;
};

}  // namespace kappa
