#include "slidedict/sparse.hpp"

#include <stdexcept>
#include <string>

namespace slidedict {

Eigen::MatrixXd SlidingView::matrix() const {
  Eigen::MatrixXd out(parent->dimension(), size());
  for (Eigen::Index k = 0; k < size(); ++k) out.col(k) = parent->atoms.col(columns[static_cast<std::size_t>(k)]);
  return out;
}

Dictionary build_dictionary(std::span<const ActionSequence> train, const WindowSpec& spec) {
  spec.validate();
  if (train.empty()) throw std::invalid_argument("build_dictionary: empty training set");
  const auto joints = train.front().joint_count();
  for (const auto& s : train) {
    if (!s.label) throw std::invalid_argument("build_dictionary: unlabeled sequence '" + s.id + "'");
    if (s.joint_count() != joints || !validate_sequence(s).empty())
      throw std::invalid_argument("build_dictionary: sequence '" + s.id + "' is invalid or has a different joint count");
  }

  Dictionary dict;
  dict.labels = LabelSet::from_sequences(train);
  dict.window_count = spec.count;
  const int C = dict.labels.size();

  // descriptors[c][i][w-1]
  std::vector<std::vector<std::vector<Eigen::VectorXd>>> descriptors(static_cast<std::size_t>(C));
  for (const auto& s : train) {
    auto& per_class = descriptors[static_cast<std::size_t>(dict.labels.index_of(*s.label))];
    std::vector<Eigen::VectorXd> windows;
    for (const auto& win : segment(s.frame_count(), spec.count)) {
      std::span<const JointFrame> frames(s.frames.data() + win.start, static_cast<std::size_t>(win.size()));
      windows.push_back(covariance_descriptor(frames, win.index).values);
    }
    per_class.push_back(std::move(windows));
  }

  const Eigen::Index M = static_cast<Eigen::Index>(train.size()) * spec.count;
  dict.atoms.resize(descriptor_dimension(joints), M);
  dict.meta.reserve(static_cast<std::size_t>(M));
  Eigen::Index col = 0;
  for (int w = 1; w <= spec.count; ++w) {
    for (int c = 0; c < C; ++c) {
      const auto& per_class = descriptors[static_cast<std::size_t>(c)];
      for (std::size_t i = 0; i < per_class.size(); ++i) {
        dict.atoms.col(col++) = per_class[i][static_cast<std::size_t>(w - 1)];
        dict.meta.push_back({c, w, static_cast<int>(i)});
      }
    }
  }
  return dict;
}

SlidingView sliding_view(const Dictionary& dict, int w, int half_width) {
  if (w < 1 || w > dict.window_count)
    throw std::out_of_range("sliding_view: window " + std::to_string(w) + " outside [1, " +
                            std::to_string(dict.window_count) + "]");
  SlidingView view;
  view.parent = &dict;
  view.center = w;
  view.range = sliding_range(w, half_width, dict.window_count);
  for (Eigen::Index k = 0; k < dict.size(); ++k)
    if (view.range.contains(dict.meta[static_cast<std::size_t>(k)].window)) view.columns.push_back(k);
  return view;
}

ClassErrors class_reconstruction_error(const CovDescriptor& f, const SlidingView& view, const SparseCode& code) {
  if (code.alpha.size() != view.size())
    throw std::invalid_argument("class_reconstruction_error: code has " + std::to_string(code.alpha.size()) +
                                " coefficients for a view of " + std::to_string(view.size()) + " columns");
  const auto& dict = *view.parent;
  if (f.values.size() != dict.dimension())
    throw std::invalid_argument("class_reconstruction_error: descriptor dimension mismatch");

  const int C = dict.class_count();
  Eigen::MatrixXd recon = Eigen::MatrixXd::Zero(dict.dimension(), C);
  for (Eigen::Index k = 0; k < view.size(); ++k) {
    const double a = code.alpha(k);
    if (a != 0) recon.col(view.meta(k).label) += a * dict.atoms.col(view.columns[static_cast<std::size_t>(k)]);
  }
  ClassErrors out;
  out.window = view.center;
  out.values = (recon.colwise() - f.values).colwise().squaredNorm().transpose();
  return out;
}

}  // namespace slidedict
