#pragma once

// Exact rational linear algebra shared by the geometry and group code.

#include "pkit/model.hpp"
#include "pkit/numeric.hpp"

#include <optional>
#include <vector>

namespace pkit::linalg {

using QVec = std::vector<Rational>;
using QMat = std::vector<QVec>; // row-major

/// Reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> rref(QMat &m);
std::size_t rank(QMat m);
std::optional<QMat> inverse(const QMat &m);
QMat transpose(const QMat &m);
/// Basis of {v : m v = 0}.
std::vector<QVec> nullspace(const QMat &m);

Rational dot(const QVec &a, const QVec &b);
ScaledElement dot(const QVec &a, const std::vector<ModelElement> &x);
ScaledElement dot(const QVec &a, const std::vector<ScaledElement> &x);
std::vector<ScaledElement> apply(const QMat &m, const std::vector<ScaledElement> &x);
Integer lcm_den(const QVec &v);

} // namespace pkit::linalg
