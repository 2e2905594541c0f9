#include "dcki/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "dcki/eval.hpp"
#include "dcki/linalg.hpp"
#include "dcki/obfuscation.hpp"
#include "dcki/random.hpp"

namespace dcki {

namespace {

void require_leaks(const AttackScenario& s, Index minimum) {
  require(s.leaked_A.rows() == s.leaked_A_tilde.rows(), ErrorCode::kShapeMismatch,
          "leaked pairs differ in row count");
  require(s.leaked_A.rows() >= minimum, ErrorCode::kTooFewLeaks,
          "need at least " + std::to_string(minimum) + " leaked pairs, have " +
              std::to_string(s.leaked_A.rows()));
}

Matrix center(const Matrix& X, const Vector& mean) {
  return X.rowwise() - mean.transpose();
}

// Half squared error averaged over rows.
double half_mse(const Matrix& pred, const Matrix& target) {
  return 0.5 * (pred - target).squaredNorm() / static_cast<double>(target.rows());
}

struct AdamState {
  Matrix m;
  Matrix v;
  void init(Index rows, Index cols) {
    m = Matrix::Zero(rows, cols);
    v = Matrix::Zero(rows, cols);
  }
};

template <class Param>
void adam_step(Param& param, const Matrix& grad, AdamState& state, const MlpConfig& c,
               double t) {
  state.m = c.beta1 * state.m + (1.0 - c.beta1) * grad;
  state.v = c.beta2 * state.v + (1.0 - c.beta2) * grad.cwiseAbs2();
  const double bc1 = 1.0 - std::pow(c.beta1, t);
  const double bc2 = 1.0 - std::pow(c.beta2, t);
  param.array() -= c.learning_rate * (state.m.array() / bc1) /
                   ((state.v.array() / bc2).sqrt() + c.adam_epsilon);
}

}  // namespace

std::string_view to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::kLr: return "LR";
    case AttackKind::kPinv: return "PINV";
    case AttackKind::kMlp: return "MLP";
  }
  return "unknown";
}

AttackScenario leak_by_label(const AnchorSet& anchor, const Matrix& anchor_tilde,
                             const std::vector<double>& labels,
                             std::optional<Index> eval_per_label, std::uint64_t seed) {
  require(anchor_tilde.rows() == anchor.size() && anchor.y.size() == anchor.size(),
          ErrorCode::kShapeMismatch, "anchor views differ in row count");
  const std::set<double> leak(labels.begin(), labels.end());
  const std::vector<double> present = distinct_labels(anchor.y);
  for (double l : leak) {
    require(std::find(present.begin(), present.end(), l) != present.end(),
            ErrorCode::kLabelNotPresent,
            "label " + std::to_string(l) + " does not occur in the anchor set");
  }

  AttackScenario s;
  std::map<double, std::vector<Index>> rest;
  for (Index i = 0; i < anchor.size(); ++i) {
    if (leak.count(anchor.y(i)))
      s.leaked_indices.push_back(i);
    else
      rest[anchor.y(i)].push_back(i);
  }
  require(!rest.empty(), ErrorCode::kEmptyEvalSet,
          "every anchor label is leaked; nothing left to evaluate");

  CounterRng rng = CounterRng::stream(seed, Purpose::kAttackEval);
  for (const auto& [label, rows] : rest) {
    if (eval_per_label && *eval_per_label < static_cast<Index>(rows.size())) {
      for (Index p : sample_without_replacement(static_cast<Index>(rows.size()),
                                                *eval_per_label, rng))
        s.eval_indices.push_back(rows[static_cast<std::size_t>(p)]);
    } else {
      s.eval_indices.insert(s.eval_indices.end(), rows.begin(), rows.end());
    }
  }
  std::sort(s.eval_indices.begin(), s.eval_indices.end());

  s.leaked_A = select_rows(anchor.A, s.leaked_indices);
  s.leaked_A_tilde = select_rows(anchor_tilde, s.leaked_indices);
  s.eval_A = select_rows(anchor.A, s.eval_indices);
  s.eval_A_tilde = select_rows(anchor_tilde, s.eval_indices);
  s.eval_y = select_rows(anchor.y, s.eval_indices);
  return s;
}

Matrix AffineMap::operator()(const Matrix& X) const {
  require(X.cols() == input_mean.size(), ErrorCode::kDimensionMismatch,
          "reconstructor input width mismatch");
  return (center(X, input_mean) * weights).rowwise() + output_mean.transpose();
}

Matrix MlpNetwork::operator()(const Matrix& X) const {
  require(X.cols() == W1.rows(), ErrorCode::kDimensionMismatch,
          "reconstructor input width mismatch");
  const Matrix H = ((X * W1).rowwise() + b1).cwiseMax(0.0);
  return (H * W2).rowwise() + b2;
}

Matrix Reconstructor::reconstruct(const Matrix& X_tilde) const {
  return std::visit([&](const auto& f) { return f(X_tilde); }, map_);
}

Reconstructor fit_lr(const AttackScenario& s) {
  require_leaks(s, 2);
  AffineMap map;
  map.input_mean = s.leaked_A_tilde.colwise().mean().transpose();
  map.output_mean = s.leaked_A.colwise().mean().transpose();
  map.weights = linalg::pinv(center(s.leaked_A_tilde, map.input_mean)) *
                center(s.leaked_A, map.output_mean);
  return {AttackKind::kLr, std::move(map)};
}

Matrix estimate_forward_map(const AttackScenario& s) {
  require_leaks(s, 2);
  const Vector mean_A = s.leaked_A.colwise().mean().transpose();
  const Vector mean_t = s.leaked_A_tilde.colwise().mean().transpose();
  return linalg::pinv(center(s.leaked_A, mean_A)) * center(s.leaked_A_tilde, mean_t);
}

Reconstructor fit_pinv(const AttackScenario& s) {
  const Matrix F = estimate_forward_map(s);
  AffineMap map;
  map.input_mean = s.leaked_A_tilde.colwise().mean().transpose();
  map.output_mean = s.leaked_A.colwise().mean().transpose();
  map.weights = linalg::pinv(F);
  return {AttackKind::kPinv, std::move(map)};
}

Reconstructor fit_mlp(const AttackScenario& s, const MlpConfig& c, MlpTrace* trace) {
  require_leaks(s, 10);
  require(c.hidden >= 1 && c.max_epochs >= 0 && c.batch_size >= 1,
          ErrorCode::kInvalidArgument, "invalid MLP configuration");
  const Index m = s.leaked_A.rows();
  const Index in = s.leaked_A_tilde.cols();
  const Index out = s.leaked_A.cols();

  CounterRng split_rng = CounterRng::stream(c.seed, Purpose::kMlpSplit);
  const std::vector<Index> perm = random_permutation(m, split_rng);
  const Index n_val = std::clamp<Index>(
      static_cast<Index>(std::floor(c.validation_fraction * static_cast<double>(m))), 1,
      m - 1);
  const std::vector<Index> val_rows(perm.begin(), perm.begin() + n_val);
  const std::vector<Index> train_rows(perm.begin() + n_val, perm.end());
  const Matrix Xv = select_rows(s.leaked_A_tilde, val_rows);
  const Matrix Yv = select_rows(s.leaked_A, val_rows);
  const Matrix Xt = select_rows(s.leaked_A_tilde, train_rows);
  const Matrix Yt = select_rows(s.leaked_A, train_rows);
  const auto n_train = static_cast<Index>(train_rows.size());

  CounterRng init_rng = CounterRng::stream(c.seed, Purpose::kMlpInit);
  auto glorot = [&](Index rows, Index cols) {
    const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Matrix W(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) W(i, j) = init_rng.uniform(-bound, bound);
    return W;
  };
  MlpNetwork net{glorot(in, c.hidden), RowVector::Zero(c.hidden),
                 glorot(c.hidden, out), RowVector::Zero(out)};
  MlpNetwork best = net;
  double best_val = half_mse(net(Xv), Yv);

  AdamState sW1, sb1, sW2, sb2;
  sW1.init(in, c.hidden);
  sb1.init(1, c.hidden);
  sW2.init(c.hidden, out);
  sb2.init(1, out);
  const Index batch = n_train <= c.full_batch_limit ? n_train : c.batch_size;
  CounterRng shuffle_rng = CounterRng::stream(c.seed, Purpose::kMlpShuffle);
  double step = 0.0;
  Index stale = 0;

  for (Index epoch = 0; epoch < c.max_epochs; ++epoch) {
    const std::vector<Index> order = batch < n_train
                                         ? random_permutation(n_train, shuffle_rng)
                                         : std::vector<Index>{};
    for (Index start = 0; start < n_train; start += batch) {
      const Index len = std::min(batch, n_train - start);
      Matrix Xb, Yb;
      if (order.empty()) {
        Xb = Xt;
        Yb = Yt;
      } else {
        const std::vector<Index> rows(order.begin() + start, order.begin() + start + len);
        Xb = select_rows(Xt, rows);
        Yb = select_rows(Yt, rows);
      }
      const Matrix Z1 = (Xb * net.W1).rowwise() + net.b1;
      const Matrix H = Z1.cwiseMax(0.0);
      const Matrix P = (H * net.W2).rowwise() + net.b2;
      const Matrix dP = (P - Yb) / static_cast<double>(len);
      const Matrix gW2 = H.transpose() * dP;
      const Matrix gb2 = dP.colwise().sum();
      const Matrix dH = ((dP * net.W2.transpose()).array() * (Z1.array() > 0.0).cast<double>()).matrix();
      const Matrix gW1 = Xb.transpose() * dH;
      const Matrix gb1 = dH.colwise().sum();
      step += 1.0;
      adam_step(net.W1, gW1, sW1, c, step);
      adam_step(net.b1, gb1, sb1, c, step);
      adam_step(net.W2, gW2, sW2, c, step);
      adam_step(net.b2, gb2, sb2, c, step);
    }
    const double val = half_mse(net(Xv), Yv);
    if (val < best_val - c.tolerance) {
      best_val = val;
      best = net;
      stale = 0;
      if (trace) trace->best_epoch = epoch;
    } else {
      ++stale;
    }
    if (trace) {
      trace->train_loss.push_back(half_mse(net(Xt), Yt));
      trace->validation_loss.push_back(val);
      trace->best_validation_loss.push_back(best_val);
    }
    if (stale >= c.patience) break;
  }
  return {AttackKind::kMlp, std::move(best)};
}

double reconstruction_accuracy(const Reconstructor& reconstructor,
                               const Matrix& eval_A_tilde, const Targets& eval_y,
                               const Predictor& classifier) {
  require(eval_A_tilde.rows() >= 1, ErrorCode::kEmptyEvalSet, "no evaluation rows");
  require(eval_A_tilde.rows() == eval_y.size(), ErrorCode::kShapeMismatch,
          "evaluation rows and labels differ in count");
  return accuracy(classifier(reconstructor.reconstruct(eval_A_tilde)), eval_y);
}

AttackReport select_best(std::vector<AttackOutcome> outcomes) {
  std::stable_sort(outcomes.begin(), outcomes.end(),
                   [](const AttackOutcome& a, const AttackOutcome& b) {
                     return static_cast<int>(a.kind) < static_cast<int>(b.kind);
                   });
  AttackReport report;
  bool found = false;
  for (const auto& o : outcomes) {
    if (!o.score) {
      report.warnings.push_back(std::string(to_string(o.kind)) +
                                " attack failed: " + o.failure);
      continue;
    }
    if (!found || *o.score > report.best_score) {
      report.best = o.kind;
      report.best_score = *o.score;
      found = true;
    }
  }
  require(found, ErrorCode::kAllAttacksFailed, "no reconstruction attack succeeded");
  report.outcomes = std::move(outcomes);
  return report;
}

AttackReport best_attack(const AttackScenario& scenario, const MlpConfig& config,
                         const Predictor& classifier) {
  std::vector<AttackOutcome> outcomes;
  auto attempt = [&](AttackKind kind, auto&& fit) {
    AttackOutcome o;
    o.kind = kind;
    try {
      o.score = reconstruction_accuracy(fit(), scenario.eval_A_tilde, scenario.eval_y,
                                        classifier);
    } catch (const Error& e) {
      o.failure = e.what();
    }
    outcomes.push_back(std::move(o));
  };
  attempt(AttackKind::kLr, [&] { return fit_lr(scenario); });
  attempt(AttackKind::kPinv, [&] { return fit_pinv(scenario); });
  attempt(AttackKind::kMlp, [&] { return fit_mlp(scenario, config); });
  return select_best(std::move(outcomes));
}

AuditResult run_audit(const AuditConfig& config, const Dataset& pool,
                      const Dataset& anchor_source, const Dataset& oracle,
                      std::uint64_t seed) {
  require(pool.rows() >= config.n_per_party, ErrorCode::kInsufficientPool,
          "pool smaller than the party size");
  CounterRng rng = CounterRng::stream(seed, Purpose::kPartition);
  const Dataset party =
      select_rows(pool, sample_without_replacement(pool.rows(), config.n_per_party, rng));

  AuditResult result;
  result.seed = seed;
  Obfuscator f;
  if (config.obfuscator == ObfuscatorKind::kPca) {
    LinearObfuscator pca = fit_pca(party.X, config.d_tilde);
    result.true_projection = pca.projection;
    f = std::move(pca);
  } else {
    f = fit_kpca(party.X, config.d_tilde);
  }

  const AnchorSet anchor = anchor_real_only(anchor_source.X, anchor_source.y, config.n_a, seed);
  const Matrix anchor_tilde = dcki::apply(f, anchor.A);
  const AttackScenario scenario =
      leak_by_label(anchor, anchor_tilde, config.leak_labels, config.eval_per_label, seed);

  const KnnModel classifier =
      fit_knn(oracle.X, oracle.y, std::min(config.oracle_k, oracle.rows()),
              TaskMode::kClassification);
  MlpConfig mlp = config.mlp;
  mlp.seed = seed;
  result.report = best_attack(scenario, mlp, [&](const Matrix& X) {
    return knn_predict(classifier, X);
  });
  result.estimated_forward = estimate_forward_map(scenario);
  return result;
}

}  // namespace dcki
