#pragma once

#include "slidedict/features.hpp"
#include "slidedict/lasso.hpp"
#include "slidedict/probability.hpp"
#include "slidedict/skeleton.hpp"
#include "slidedict/windowing.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace slidedict {

/// Provenance of one dictionary column.
struct AtomMeta {
  int label = 0;    // index into the dictionary's LabelSet
  int window = 1;   // 1-based window index
  int example = 0;  // 0-based training example within its class
  bool operator==(const AtomMeta&) const = default;
};

/// Time-stamped dictionary. Columns are grouped by window index ascending,
/// then class, then example, so every (class, window, example) appears once.
struct Dictionary {
  Eigen::MatrixXd atoms;  // d x M
  std::vector<AtomMeta> meta;
  LabelSet labels;
  int window_count = 1;

  Eigen::Index dimension() const { return atoms.rows(); }
  Eigen::Index size() const { return atoms.cols(); }
  int class_count() const { return labels.size(); }
};

/// Columns of a dictionary whose window index lies within N of `center`.
struct SlidingView {
  const Dictionary* parent = nullptr;
  int center = 1;
  WindowRange range;
  std::vector<Eigen::Index> columns;

  Eigen::Index size() const { return static_cast<Eigen::Index>(columns.size()); }
  Eigen::MatrixXd matrix() const;
  const AtomMeta& meta(Eigen::Index k) const { return parent->meta[static_cast<std::size_t>(columns[static_cast<std::size_t>(k)])]; }
};

struct ClassErrors {
  Eigen::VectorXd values;  // R_{w,c}, one per class
  int window = 0;
};

Dictionary build_dictionary(std::span<const ActionSequence> train, const WindowSpec& spec);

SlidingView sliding_view(const Dictionary& dict, int w, int half_width);

/// Per-class squared error of reconstructing f with only that class's atoms
/// and coefficients. A class without columns in the view gets ||f||^2.
ClassErrors class_reconstruction_error(const CovDescriptor& f, const SlidingView& view, const SparseCode& code);

inline Eigen::VectorXd dict_probabilities(const ClassErrors& errors, double eps = kDefaultProbabilityFloor) {
  return inverse_error_probabilities(errors.values, eps);
}

}  // namespace slidedict
