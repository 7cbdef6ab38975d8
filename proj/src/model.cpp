#include "slidedict/model.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace slidedict {

void ModelParams::validate() const {
  windows.validate();
  if (!(lasso.lambda > 0)) throw std::invalid_argument("sparse.lambda must be > 0");
  if (!(lasso.tol > 0)) throw std::invalid_argument("sparse.tol must be > 0");
  if (lasso.max_iter < 1) throw std::invalid_argument("sparse.max_iter must be >= 1");
  if (!(eps > 0)) throw std::invalid_argument("sparse.eps must be > 0");
  if (pool_size < 1) throw std::invalid_argument("do3dj.L must be >= 1");
}

Model Model::train(std::span<const ActionSequence> train, const ModelParams& params) {
  params.validate();
  auto dict = build_dictionary(train, params.windows);
  std::vector<Eigen::Index> lengths;
  for (const auto& s : train) lengths.push_back(s.frame_count());
  std::sort(lengths.begin(), lengths.end());
  const auto reference = lengths[(lengths.size() - 1) / 2];
  return Model(std::move(dict), std::vector<ActionSequence>(train.begin(), train.end()), params, reference);
}

Model::Model(Dictionary dict, std::vector<ActionSequence> training, const ModelParams& params,
             Eigen::Index reference_length) {
  params.validate();
  if (training.empty()) throw std::invalid_argument("model needs training sequences");
  if (reference_length < 1) throw std::invalid_argument("model reference length must be >= 1");
  if (dict.window_count != params.windows.count)
    throw std::invalid_argument("dictionary window count disagrees with windows.W");

  auto state = std::make_shared<State>();
  state->params = params;
  state->reference_length = reference_length;
  state->joints = training.front().joint_count();
  const int C = dict.class_count();
  for (const auto& s : training) {
    if (!s.label || dict.labels.index_of(*s.label) < 0)
      throw std::invalid_argument("training sequence '" + s.id + "' has a label outside the dictionary");
    if (s.joint_count() != state->joints) throw std::invalid_argument("training sequences disagree on joint count");
  }
  std::stable_sort(training.begin(), training.end(), [&](const ActionSequence& a, const ActionSequence& b) {
    return dict.labels.index_of(*a.label) < dict.labels.index_of(*b.label);
  });
  state->class_offsets.assign(static_cast<std::size_t>(C) + 1, 0);
  for (const auto& s : training) ++state->class_offsets[static_cast<std::size_t>(dict.labels.index_of(*s.label)) + 1];
  for (int c = 0; c < C; ++c) {
    if (state->class_offsets[static_cast<std::size_t>(c) + 1] == 0)
      throw std::invalid_argument("class '" + dict.labels.classes[static_cast<std::size_t>(c)] +
                                  "' has no training sequences");
    state->class_offsets[static_cast<std::size_t>(c) + 1] += state->class_offsets[static_cast<std::size_t>(c)];
  }
  state->training = std::move(training);
  state->dict = std::move(dict);

  for (int w = 1; w <= state->dict.window_count; ++w) {
    ViewCache cache;
    cache.view = sliding_view(state->dict, w, params.windows.half_width);
    cache.atoms = cache.view.matrix();
    cache.gram = cache.atoms.transpose() * cache.atoms;
    state->views.push_back(std::move(cache));
  }
  state_ = std::move(state);
}

std::span<const ActionSequence> Model::class_training(int label) const {
  const auto begin = state_->class_offsets.at(static_cast<std::size_t>(label));
  const auto end = state_->class_offsets.at(static_cast<std::size_t>(label) + 1);
  return std::span<const ActionSequence>(state_->training).subspan(begin, end - begin);
}

std::vector<Baseline> Model::baselines(const JointFrame& test_first) const {
  if (test_first.rows() != joint_count())
    throw std::invalid_argument("test joint count " + std::to_string(test_first.rows()) + " != model joint count " +
                                std::to_string(joint_count()));
  std::vector<Baseline> out;
  out.reserve(state_->training.size());
  for (const auto& s : state_->training) out.push_back(baseline(test_first, s.frames.front()));
  return out;
}

const SlidingView& Model::view(int w) const {
  if (w < 1 || w > state_->dict.window_count) throw std::out_of_range("window index out of range");
  return state_->views[static_cast<std::size_t>(w - 1)].view;
}

WindowEvidence Model::evaluate_window(std::span<const JointFrame> frames, int w,
                                      std::span<const Baseline> baselines) const {
  if (w < 1 || w > state_->dict.window_count) throw std::out_of_range("window index out of range");
  if (baselines.size() != state_->training.size())
    throw std::invalid_argument("evaluate_window: one baseline per training sequence required");
  const auto& cache = state_->views[static_cast<std::size_t>(w - 1)];
  const auto& params = state_->params;

  WindowEvidence ev;
  const auto descriptor = covariance_descriptor(frames, w);
  if (descriptor.values.size() != state_->dict.dimension())
    throw std::invalid_argument("test joint count does not match the model");
  const Eigen::VectorXd corr = cache.atoms.transpose() * descriptor.values;
  auto code = solve_lasso_gram<double>(cache.gram, corr, descriptor.values.squaredNorm(), params.lasso);
  code.objective = lasso_objective(cache.atoms, descriptor.values, code.alpha, code.lambda);
  ev.errors = class_reconstruction_error(descriptor, cache.view, code);
  ev.p_dict = dict_probabilities(ev.errors, params.eps);

  const int C = class_count();
  ev.scores.window = w;
  ev.scores.pool_size = params.pool_size;
  ev.scores.values.resize(C);
  for (int c = 0; c < C; ++c) {
    const auto begin = state_->class_offsets[static_cast<std::size_t>(c)];
    const auto end = state_->class_offsets[static_cast<std::size_t>(c) + 1];
    ev.scores.values(c) = class_diff_score(frames, class_training(c), w, params.windows,
                                           baselines.subspan(begin, end - begin), params.pool_size);
  }
  ev.p_diff = diff_probabilities(ev.scores, params.eps);
  return ev;
}

}  // namespace slidedict
