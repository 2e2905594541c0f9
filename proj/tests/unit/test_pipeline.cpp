#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "dcki/pipeline.hpp"
#include "dcki/synthetic.hpp"
#include "expect_error.hpp"

using namespace dcki;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.K = 3;
  c.n_per_party = 30;
  c.test_total = 60;
  c.d_tilde = 3;
  c.n_a = 60;
  c.n_a_smote = 30;
  c.k_nn = 4;
  c.downstream_k = 3;
  c.methods = all_methods();
  return c;
}

struct Data {
  Dataset pool = make_synthetic({}, 200, 1);
  Dataset anchor_source = make_synthetic({}, 90, 2);
};

std::set<std::vector<double>> row_set(const Matrix& X) {
  std::set<std::vector<double>> out;
  for (Index i = 0; i < X.rows(); ++i) {
    const Eigen::RowVectorXd r = X.row(i);
    out.insert(std::vector<double>(r.data(), r.data() + r.size()));
  }
  return out;
}

}  // namespace

TEST(Methods, NamesRoundTrip) {
  EXPECT_EQ(all_methods().size(), 10u);
  for (Method m : all_methods()) EXPECT_EQ(parse_method(to_string(m)), m);
  EXPECT_EQ(to_string(Method::kNkiTslCenter), "NKI_TSL_Center");
  EXPECT_FALSE(parse_method("NKI_XYZ").has_value());
  EXPECT_EQ(parse_obfuscator("PCA"), ObfuscatorKind::kPca);
  EXPECT_FALSE(parse_obfuscator("UMAP").has_value());
}

TEST(Validate, NamesTheField) {
  auto c = small_config();
  EXPECT_NO_THROW(validate(c));
  c.lambda = 0;
  try {
    validate(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
    EXPECT_NE(std::string(e.what()).find("lambda"), std::string::npos);
  }
  c = small_config();
  c.n_a = 10;
  EXPECT_DCKI_ERROR(validate(c), ErrorCode::kConfig);
  c = small_config();
  c.methods.clear();
  EXPECT_DCKI_ERROR(validate(c), ErrorCode::kConfig);
  c = small_config();
  c.task = TaskMode::kRegression;
  EXPECT_DCKI_ERROR(validate(c), ErrorCode::kConfig);
}

TEST(Partition, SingleParty) {
  const Data d;
  const auto p = partition(d.pool, 1, 50, 20, 3);
  ASSERT_EQ(p.parties.size(), 1u);
  EXPECT_EQ(p.parties[0].X.rows(), 50);
  EXPECT_EQ(p.parties[0].y.size(), 50);
  EXPECT_EQ(p.test.rows(), 20);
}

TEST(Partition, DisjointAndDeterministic) {
  const Data d;
  const auto p = partition(d.pool, 4, 30, 50, 5);
  std::set<std::vector<double>> seen = row_set(p.test.X);
  std::size_t total = seen.size();
  for (const auto& party : p.parties) {
    const auto rows = row_set(party.X);
    total += rows.size();
    seen.insert(rows.begin(), rows.end());
  }
  EXPECT_EQ(total, 170u);
  EXPECT_EQ(seen.size(), 170u);
  const auto q = partition(d.pool, 4, 30, 50, 5);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(p.parties[k].X, q.parties[k].X);
  EXPECT_EQ(p.test.X, q.test.X);
  EXPECT_NE(partition(d.pool, 4, 30, 50, 6).test.X, p.test.X);
  EXPECT_DCKI_ERROR(partition(d.pool, 4, 40, 50, 5), ErrorCode::kInsufficientPool);
}

TEST(RunTrial, BaselinesMatchDirectComputation) {
  const Data d;
  auto c = small_config();
  c.methods = {Method::kCentral, Method::kLocal};
  const auto r = run_trial(c, d.pool, d.anchor_source, 7);
  ASSERT_EQ(r.size(), 2u);
  const auto p = partition(d.pool, 3, 30, 60, 7);
  std::vector<Matrix> xs;
  std::vector<Targets> ys;
  for (const auto& party : p.parties) {
    xs.push_back(party.X);
    ys.push_back(party.y);
  }
  const auto central = fit_knn(vstack(xs), vstack(ys), 3, TaskMode::kClassification);
  ASSERT_EQ(r[0].per_party.size(), 1u);
  EXPECT_EQ(r[0].per_party[0], accuracy(knn_predict(central, p.test.X), p.test.y));
  ASSERT_EQ(r[1].per_party.size(), 3u);
  double mean = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    const auto local = fit_knn(p.parties[k].X, p.parties[k].y, 3, TaskMode::kClassification);
    EXPECT_EQ(r[1].per_party[k], accuracy(knn_predict(local, p.test.X), p.test.y));
    mean += r[1].per_party[k] / 3;
  }
  EXPECT_NEAR(r[1].mean, mean, 1e-15);
}

TEST(RunTrial, AllMethodsBothObfuscators) {
  const Data d;
  for (auto obf : {ObfuscatorKind::kPca, ObfuscatorKind::kKpca}) {
    auto c = small_config();
    c.obfuscator = obf;
    const auto r = run_trial(c, d.pool, d.anchor_source, 11);
    ASSERT_EQ(r.size(), 10u);
    for (const auto& t : r) {
      EXPECT_EQ(t.seed, 11u);
      for (double a : t.per_party) {
        EXPECT_GE(a, 0.0);
        EXPECT_LE(a, 1.0);
      }
      // integrated methods beat chance on separable classes
      if (t.method != Method::kLocal && t.method != Method::kCentral) EXPECT_GT(t.mean, 0.5) << to_string(t.method);
    }
  }
}

TEST(RunTrial, Deterministic) {
  const Data d;
  const auto c = small_config();
  const auto a = run_trial(c, d.pool, d.anchor_source, 4);
  const auto b = run_trial(c, d.pool, d.anchor_source, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].per_party, b[i].per_party);
    EXPECT_EQ(a[i].mean, b[i].mean);
  }
}

TEST(RunTrial, RegressionReportsRmse) {
  Dataset pool = make_synthetic({}, 200, 3);
  Dataset anchor_source = make_synthetic({}, 90, 4);
  pool.y = pool.X.col(0) + 0.5 * pool.X.col(1);
  anchor_source.y = anchor_source.X.col(0) + 0.5 * anchor_source.X.col(1);
  auto c = small_config();
  c.task = TaskMode::kRegression;
  c.balanced = false;
  c.sigma_y = 0.5;
  const auto r = run_trial(c, pool, anchor_source, 1);
  for (const auto& t : r)
    for (double v : t.per_party) {
      EXPECT_TRUE(std::isfinite(v));
      EXPECT_GE(v, 0.0);
    }
}

TEST(RunExperiment, SummaryAndSeeds) {
  const Data d;
  auto c = small_config();
  c.methods = {Method::kLki, Method::kNki};
  c.n_seed = 3;
  c.seed = 10;
  const auto s = run_experiment(c, d.pool, d.anchor_source);
  ASSERT_EQ(s.trials.size(), 6u);
  EXPECT_EQ(s.trials[0].seed, 10u);
  EXPECT_EQ(s.trials[5].seed, 12u);
  for (const auto& m : s.methods) {
    double sum = 0;
    for (const auto& t : s.trials)
      if (t.method == m.method) sum += t.mean;
    EXPECT_NEAR(m.metric.mean, sum / 3, 1e-12);
  }
  const auto threaded = run_experiment(c, d.pool, d.anchor_source, 3);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(threaded.trials[i].per_party, s.trials[i].per_party);
}

TEST(RunExperiment, SingleSeedIsDegenerate) {
  const Data d;
  auto c = small_config();
  c.methods = {Method::kCentral};
  const auto s = run_experiment(c, d.pool, d.anchor_source);
  EXPECT_TRUE(s.methods[0].metric.degenerate);
  EXPECT_EQ(s.methods[0].metric.half_width, 0.0);
}

TEST(RunExperiment, FixedMethodHasZeroSpread) {
  // A single-label pool makes every trial score the same.
  Dataset pool = make_synthetic({}, 150, 5);
  pool.y.setZero();
  const Data d;
  auto c = small_config();
  c.methods = {Method::kCentral};
  c.K = 1;
  c.n_per_party = 100;
  c.test_total = 50;
  c.n_seed = 4;
  const auto s = run_experiment(c, pool, d.anchor_source);
  EXPECT_NEAR(s.methods[0].metric.sd, 0.0, 1e-15);
}

TEST(BenchScaling, InjectedClock) {
  const auto cubic = bench_scaling(Method::kNki, {200, 400, 800}, [](Index n) {
    const double x = static_cast<double>(n) / 100.0;
    return std::pair{x * x * x, 7.0};
  });
  EXPECT_NEAR(cubic.fit_slope, 3.0, 1e-6);
  EXPECT_NEAR(cubic.transform_slope, 0.0, 1e-12);
  EXPECT_TRUE(cubic.warnings.empty());
  const auto tiny = bench_scaling(Method::kLki, {10, 20}, [](Index) { return std::pair{0.5, 0.5}; });
  EXPECT_FALSE(tiny.warnings.empty());
  EXPECT_DCKI_ERROR(bench_scaling(Method::kLki, {10}, [](Index) { return std::pair{1.0, 1.0}; }),
                    ErrorCode::kInvalidArgument);
  EXPECT_DCKI_ERROR(bench_scaling(Method::kLki, {20, 10}, [](Index) { return std::pair{1.0, 1.0}; }),
                    ErrorCode::kInvalidArgument);
  EXPECT_NEAR(loglog_slope(1, 1, 10, 100), 2.0, 1e-14);
}
