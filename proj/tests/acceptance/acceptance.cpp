// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria. Pass criterion numbers as arguments to run a
// subset.

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dcki/attacks.hpp"
#include "dcki/graphs.hpp"
#include "dcki/integrate_kernel.hpp"
#include "dcki/integrate_linear.hpp"
#include "dcki/pipeline.hpp"
#include "dcki/random.hpp"
#include "dcki/synthetic.hpp"
#include "oracles.hpp"
#include "run_twice.hpp"

namespace {

using dcki::CounterRng;
using dcki::Index;
using dcki::Matrix;
using dcki::Purpose;
using dcki::Vector;

struct Verdict {
  bool pass = true;
  std::string detail;
};

Index pick(CounterRng& rng, Index lo, Index hi) {
  return lo + static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(hi - lo + 1)));
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- 1

Verdict lki_optimality() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_gap = -1e300, worst_identity = 0.0;
  for (std::uint64_t inst = 0; inst < 50; ++inst) {
    CounterRng rng = CounterRng::stream(inst, Purpose::kTest, 1);
    const Index n_a = pick(rng, 8, 20), K = pick(rng, 2, 4);
    const Index d_tilde = pick(rng, 2, 4), d_hat = pick(rng, 1, 3);
    std::vector<Matrix> A;
    for (Index k = 0; k < K; ++k) A.push_back(oracle::gaussian(n_a, d_tilde, rng));

    const auto model = dcki::fit_lki(A, d_hat);
    double achieved = 0.0;
    for (Index k = 0; k < K; ++k)
      achieved += (A[k] * model.G[k] - model.Z_star).squaredNorm();

    Matrix P = Matrix::Zero(n_a, n_a);
    for (const auto& a : A) P += oracle::projector(a);
    const double closed = static_cast<double>(K * d_hat) - oracle::sum_largest(P, d_hat);
    worst_identity = std::max(worst_identity, std::abs(achieved - closed));

    double best_random = 1e300;
    for (int t = 0; t < 1000; ++t) {
      const Matrix Z = oracle::orthonormal(n_a, d_hat, rng);
      double obj = 0.0;
      for (const auto& a : A) obj += (a * oracle::lstsq(a, Z) - Z).squaredNorm();
      best_random = std::min(best_random, obj);
    }
    worst_gap = std::max(worst_gap, achieved - best_random);
  }
  const double secs = seconds_since(t0);
  Verdict v;
  v.pass = worst_gap <= 1e-8 && worst_identity <= 1e-8 && secs < 30.0;
  v.detail = "max(obj - best sampled) = " + fmt("%.3e", worst_gap) +
             ", max |obj - (K d_hat - sum sigma^2)| = " + fmt("%.3e", worst_identity) +
             ", " + fmt("%.1f", secs) + " s";
  return v;
}

// ---------------------------------------------------------------- 2

Verdict nki_reduction() {
  double stationarity = 0.0, objective = 0.0, ky_fan = 0.0, residual = 0.0;
  for (std::uint64_t inst = 0; inst < 50; ++inst) {
    CounterRng rng = CounterRng::stream(inst, Purpose::kTest, 2);
    const Index n_a = pick(rng, 8, 20), K = pick(rng, 2, 4);
    const Index d_tilde = pick(rng, 2, 4), d_hat = pick(rng, 1, 3);
    const double gamma = rng.uniform(0.2, 2.0), lambda = rng.uniform(0.1, 2.0);
    std::vector<Matrix> A;
    for (Index k = 0; k < K; ++k) A.push_back(oracle::gaussian(n_a, d_tilde, rng));

    const auto model = dcki::fit_nki(A, {dcki::KernelKind::kRbf, gamma}, lambda, d_hat,
                                     dcki::NkiVariant::kPlain);
    const Matrix& Z = model.Z_star;
    const Matrix I = Matrix::Identity(n_a, n_a);
    Matrix M = Matrix::Zero(n_a, n_a);
    double total = 0.0;
    for (Index k = 0; k < K; ++k) {
      const Matrix Kk = oracle::rbf(A[k], A[k], gamma);
      const Matrix S = (Kk + lambda * I).inverse();
      M += lambda * S;
      const Matrix& G = model.Gamma[k];
      stationarity = std::max(stationarity, (Kk * ((Kk + lambda * I) * G - Z)).norm());
      residual = std::max(residual, (Kk * G - Z + lambda * S * Z).norm());
      total += (Kk * G - Z).squaredNorm() + lambda * (G.transpose() * Kk * G).trace();
    }
    const double trace = (Z.transpose() * M * Z).trace();
    objective = std::max(objective, std::abs(total - trace));
    ky_fan = std::max(ky_fan, std::abs(trace - oracle::sum_smallest(M, d_hat)));
  }
  Verdict v;
  v.pass = stationarity < 1e-8 && objective <= 1e-8 && ky_fan <= 1e-10 && residual <= 1e-8;
  v.detail = "(a) " + fmt("%.2e", stationarity) + " (b) " + fmt("%.2e", objective) +
             " (c) " + fmt("%.2e", ky_fan) + " (d) " + fmt("%.2e", residual);
  return v;
}

// ---------------------------------------------------------------- 3

Verdict graph_solvers() {
  double orth = 0.0, centered = 0.0, gap = -1e300, laplace = 0.0;
  for (std::uint64_t inst = 0; inst < 30; ++inst) {
    CounterRng rng = CounterRng::stream(inst, Purpose::kTest, 3);
    const Index n = pick(rng, 6, 16), d_hat = pick(rng, 1, 3);
    const Matrix M = oracle::random_psd(n, n + 2, rng) + 0.05 * Matrix::Identity(n, n);
    dcki::LaplacianPair pair;
    pair.B = oracle::random_psd(n, pick(rng, 1, n), rng);
    pair.C = oracle::random_psd(n, n + 3, rng) + 0.1 * Matrix::Identity(n, n);
    pair.mu = rng.uniform(0.0, 2.0);

    const Matrix Mp = M / M.trace() + pair.mu * pair.B / pair.B.trace();
    const Matrix ones = Matrix::Ones(1, n);

    const auto g = dcki::solve_graph(M, pair, d_hat);
    orth = std::max(orth, (g.Z_star.transpose() * g.C_used * g.Z_star -
                           Matrix::Identity(d_hat, d_hat)).norm());
    const Matrix C_half_inv = oracle::inv_sqrt(g.C_used);
    const double got_g = (g.Z_star.transpose() * Mp * g.Z_star).trace();

    const auto c = dcki::solve_centered(M, pair, d_hat);
    orth = std::max(orth, (c.Z_star.transpose() * c.C_used * c.Z_star -
                           Matrix::Identity(d_hat, d_hat)).norm());
    centered = std::max(centered, (ones * c.Z_star).norm());
    const double got_c = (c.Z_star.transpose() * Mp * c.Z_star).trace();
    const Matrix T = oracle::mean_zero_basis(n);
    const Matrix Ct_half_inv = oracle::inv_sqrt(T.transpose() * c.C_used * T);

    for (int t = 0; t < 1000; ++t) {
      const Matrix Zg = C_half_inv * oracle::orthonormal(n, d_hat, rng);
      gap = std::max(gap, got_g - (Zg.transpose() * Mp * Zg).trace());
      const Matrix Zc = T * Ct_half_inv * oracle::orthonormal(n - 1, d_hat, rng);
      gap = std::max(gap, got_c - (Zc.transpose() * Mp * Zc).trace());
    }

    const Matrix W = oracle::random_weights(n, rng);
    const Matrix L = dcki::laplacian(W);
    for (int t = 0; t < 10; ++t) {
      const Matrix Z = oracle::gaussian(n, 3, rng);
      const double e = oracle::pairwise_energy(W, Z);
      laplace = std::max(laplace, std::abs((Z.transpose() * L * Z).trace() - e) /
                                      std::max(1.0, std::abs(e)));
    }
  }
  Verdict v;
  v.pass = orth <= 1e-8 && centered <= 1e-10 && gap <= 1e-8 && laplace <= 1e-10;
  v.detail = "|Z'CZ - I| " + fmt("%.2e", orth) + ", |1'Z| " + fmt("%.2e", centered) +
             ", obj - best sampled " + fmt("%.2e", gap) + ", Laplacian identity " +
             fmt("%.2e", laplace);
  return v;
}

// ---------------------------------------------------------------- 4

Verdict alignment() {
  CounterRng rng = CounterRng::stream(4, Purpose::kTest, 4);
  const Index n_a = 40, d_tilde = 3, d_hat = 2, K = 4;
  const Matrix A = oracle::gaussian(n_a, d_tilde, rng);
  const std::vector<Matrix> anchors(K, A);
  dcki::Targets labels(n_a);
  for (Index i = 0; i < n_a; ++i) labels(i) = static_cast<double>(i % 3);
  const Matrix probes = oracle::gaussian(100, d_tilde, rng);

  std::vector<std::pair<std::string, dcki::IntegrationModel>> models;
  models.emplace_back("LKI", dcki::fit_lki(anchors, d_hat));
  const dcki::KernelSpec kernel{dcki::KernelKind::kRbf, 0.5};
  models.emplace_back("NKI", dcki::fit_nki(anchors, kernel, 1.0, d_hat, dcki::NkiVariant::kPlain));
  models.emplace_back("NKI_Center",
                      dcki::fit_nki(anchors, kernel, 1.0, d_hat, dcki::NkiVariant::kCentered));
  auto graph = [&](dcki::GraphKind kind) {
    dcki::GraphSpec s;
    s.kind = kind;
    s.k_nn = 5;
    return s;
  };
  const auto gl = dcki::build_laplacian_pair(anchors, graph(dcki::GraphKind::kGeometric),
                                             std::nullopt, &labels, 1.0);
  const auto tsl = dcki::build_laplacian_pair(
      anchors, graph(dcki::GraphKind::kTargetSimilarity), std::nullopt, &labels, 1.0);
  const auto tdl = dcki::build_laplacian_pair(
      anchors, graph(dcki::GraphKind::kTargetSimilarity),
      graph(dcki::GraphKind::kTargetDissimilarity), &labels, 1.0);
  models.emplace_back("NKI_GL", dcki::fit_nki(anchors, kernel, 1.0, d_hat, dcki::NkiVariant::kGraph, &gl));
  models.emplace_back("NKI_GL_Center", dcki::fit_nki(anchors, kernel, 1.0, d_hat,
                                                     dcki::NkiVariant::kGraphCentered, &gl));
  models.emplace_back("NKI_TSL", dcki::fit_nki(anchors, kernel, 1.0, d_hat, dcki::NkiVariant::kGraph, &tsl));
  models.emplace_back("NKI_TSL_Center", dcki::fit_nki(anchors, kernel, 1.0, d_hat,
                                                      dcki::NkiVariant::kGraphCentered, &tsl));
  models.emplace_back("NKI_TDL", dcki::fit_nki(anchors, kernel, 1.0, d_hat, dcki::NkiVariant::kGraph, &tdl));

  double worst = 0.0;
  std::string worst_name;
  for (const auto& [name, model] : models) {
    const Matrix ref = dcki::integrate(model, 0, probes);
    for (Index k = 1; k < K; ++k) {
      const double diff = (dcki::integrate(model, k, probes) - ref).cwiseAbs().maxCoeff();
      if (diff >= worst) {
        worst = diff;
        worst_name = name;
      }
    }
  }
  Verdict v;
  v.pass = worst <= 1e-10;
  v.detail = std::to_string(models.size()) + " methods, max disagreement " +
             fmt("%.2e", worst) + " (" + worst_name + ")";
  return v;
}

// ------------------------------------------------------- shared synthetic data

dcki::SyntheticSpec synthetic_family() {
  dcki::SyntheticSpec s;
  s.classes = 3;
  s.dim = 20;
  return s;
}

// ---------------------------------------------------------------- 5

Verdict rq1_trend() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto spec = synthetic_family();
  // A large shared test set keeps per-seed evaluation noise below the
  // NKI/LKI gap being compared.
  const dcki::Dataset pool = dcki::make_synthetic(spec, 240 + 1500, 101);
  const dcki::Dataset anchor_source = dcki::make_synthetic(spec, 300, 202);

  dcki::ExperimentConfig c;
  c.K = 4;
  c.n_per_party = 60;
  c.test_total = 1500;
  c.d_tilde = 4;
  c.d_hat = 4;
  c.n_a = 200;
  c.n_a_smote = 60;
  c.balanced = false;  // 200 anchors do not split evenly over 3 classes
  c.k_nn = 10;
  c.obfuscator = dcki::ObfuscatorKind::kKpca;
  c.methods = {dcki::Method::kLki, dcki::Method::kNki, dcki::Method::kNkiTsl};
  c.n_seed = 20;
  c.seed = 0;
  const auto summary = dcki::run_experiment(c, pool, anchor_source, 1);

  int nki_wins = 0;
  for (std::size_t i = 0; i < summary.trials.size(); i += 3) {
    if (summary.trials[i + 1].mean > summary.trials[i].mean) ++nki_wins;
  }
  const double lki = summary.methods[0].metric.mean;
  const double nki = summary.methods[1].metric.mean;
  const double tsl = summary.methods[2].metric.mean;
  const double secs = seconds_since(t0);
  Verdict v;
  v.pass = nki_wins >= 15 && tsl >= nki && secs < 300.0;
  v.detail = "NKI > LKI in " + std::to_string(nki_wins) + "/20 seeds; mean LKI " +
             fmt("%.4f", lki) + ", NKI " + fmt("%.4f", nki) + ", NKI_TSL " +
             fmt("%.4f", tsl) + ", " + fmt("%.1f", secs) + " s";
  return v;
}

// ---------------------------------------------------------------- 6

Verdict rq3_scaling() {
  const auto t0 = std::chrono::steady_clock::now();
  dcki::set_numeric_threads(1);
  const auto spec = synthetic_family();
  const dcki::Dataset pool = dcki::make_synthetic(spec, 600, 103);
  const dcki::Dataset anchor_source = dcki::make_synthetic(spec, 300, 204);

  dcki::ExperimentConfig c;
  c.K = 4;
  c.n_per_party = 60;
  c.test_total = 300;
  c.d_tilde = 4;
  c.n_a_smote = 60;
  c.balanced = false;
  c.obfuscator = dcki::ObfuscatorKind::kKpca;
  c.methods = {dcki::Method::kLki, dcki::Method::kNki};
  c.n_seed = 3;
  c.min_timing_ms = 50.0;
  const auto tables = dcki::bench_scaling(c, pool, anchor_source, {200, 400, 800});
  const auto& lki = tables[0];
  const auto& nki = tables[1];
  const double secs = seconds_since(t0);

  Verdict v;
  v.pass = nki.fit_slope >= 2.2 && nki.fit_slope <= 3.5 && lki.fit_slope >= 0.3 &&
           lki.fit_slope <= 1.3 && nki.transform_slope >= 0.7 &&
           nki.transform_slope <= 1.6 && secs < 600.0;
  v.detail = "NKI fit slope " + fmt("%.3f", nki.fit_slope) + ", LKI fit slope " +
             fmt("%.3f", lki.fit_slope) + ", NKI transform slope " +
             fmt("%.3f", nki.transform_slope) + ", " + fmt("%.1f", secs) + " s";
  for (const auto* t : {&lki, &nki})
    for (const auto& p : t->points)
      v.detail += "\n    " + std::string(dcki::to_string(t->method)) + " n_a=" +
                  std::to_string(p.n_a) + " fit " + fmt("%.3f", p.fit_ms) +
                  " ms, transform " + fmt("%.3f", p.transform_ms) + " ms";
  return v;
}

// ---------------------------------------------------------------- 7

Verdict rq4_attack() {
  const auto spec = synthetic_family();
  const dcki::Dataset pool = dcki::make_synthetic(spec, 300, 105);
  const dcki::Dataset anchor_source = dcki::make_synthetic(spec, 300, 206);
  const dcki::Dataset oracle_set = dcki::make_synthetic(spec, 600, 307);

  dcki::AuditConfig audit;
  audit.d_tilde = 4;
  audit.n_a = 150;
  audit.n_per_party = 100;
  audit.leak_labels = {0};
  audit.eval_per_label = 50;

  int pca_wins = 0;
  double pca_sum = 0.0, kpca_sum = 0.0, forward_err = 0.0;
  std::string winners;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    audit.obfuscator = dcki::ObfuscatorKind::kPca;
    const auto pca = dcki::run_audit(audit, pool, anchor_source, oracle_set, seed);
    audit.obfuscator = dcki::ObfuscatorKind::kKpca;
    const auto kpca = dcki::run_audit(audit, pool, anchor_source, oracle_set, seed);
    if (pca.report.best_score >= kpca.report.best_score) ++pca_wins;
    pca_sum += pca.report.best_score;
    kpca_sum += kpca.report.best_score;
    forward_err = std::max(forward_err, oracle::rel_frobenius(pca.estimated_forward,
                                                              *pca.true_projection));
    winners += std::string(dcki::to_string(pca.report.best)) + (seed < 9 ? "," : "");
  }
  Verdict v;
  v.pass = pca_wins >= 8 && forward_err < 1e-6;
  v.detail = "PCA >= KPCA in " + std::to_string(pca_wins) + "/10 seeds; mean best " +
             fmt("%.4f", pca_sum / 10) + " vs " + fmt("%.4f", kpca_sum / 10) +
             "; PCA winners " + winners + "; max rel |F_hat - P| " +
             fmt("%.2e", forward_err);
  return v;
}

// ---------------------------------------------------------------- 8

Verdict determinism() {
  const auto outcome = acceptance::run_twice_and_compare();
  return {outcome.identical, outcome.detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"LKI global optimality", lki_optimality},
      {"NKI reduction", nki_reduction},
      {"graph/centered solvers", graph_solvers},
      {"alignment property", alignment},
      {"RQ1 trend", rq1_trend},
      {"RQ3 scaling", rq3_scaling},
      {"RQ4 attack trend", rq4_attack},
      {"determinism", determinism},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::stoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!wanted.empty() && !wanted.count(id)) continue;
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("%s criterion %d (%s): %s\n", v.pass ? "PASS" : "FAIL", id,
                criteria[i].first.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
