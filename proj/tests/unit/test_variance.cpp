#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "oracles.hpp"
#include "vpsumm/threads.hpp"
#include "vpsumm/variance.hpp"

using namespace vpsumm;
namespace vt = vpsumm::testing;

namespace {

Corpus single_video_identity(Eigen::Index t) {
  ClipFeatures v;
  v.video_id = "v0";
  v.features = Eigen::MatrixXd::Identity(t, t);
  std::vector<ClipFeatures> videos;
  videos.push_back(std::move(v));
  return make_corpus(std::move(videos), {"g0"});
}

// One clip per video; rows of `features` are the videos.
Corpus one_clip_per_video(const Eigen::MatrixXd& features,
                          const std::vector<std::string>& groups) {
  std::vector<ClipFeatures> videos;
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    ClipFeatures v;
    v.video_id = "v" + std::to_string(i);
    v.features = features.row(i);
    videos.push_back(std::move(v));
  }
  return make_corpus(std::move(videos), groups);
}

struct ThreadGuard {
  int saved = thread_count();
  ~ThreadGuard() { set_thread_count(saved); }
};

}  // namespace

TEST_CASE("same-video operator on two orthonormal clips") {
  const Corpus corpus = single_video_identity(2);
  const GramOperators ops(corpus, Hyperparams{.s = 2});
  const Eigen::VectorXd out = ops.apply_d(Eigen::VectorXd::Ones(2));
  CHECK(out(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(out(1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("same-group operator on two single-clip videos") {
  Eigen::MatrixXd features(2, 2);
  features << 1.0, 0.0, 0.0, 1.0;
  const Corpus corpus = one_clip_per_video(features, {"g0", "g0"});
  const GramOperators ops(corpus, Hyperparams{.s = 1});
  const Eigen::VectorXd out = ops.apply_c(Eigen::VectorXd::Ones(2));
  CHECK(out(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(out(1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("diagonal operator holds squared clip norms") {
  Eigen::MatrixXd features(2, 2);
  features << 3.0, 4.0, 1.0, 0.0;
  const Corpus corpus = one_clip_per_video(features, {"g0", "g1"});
  const GramOperators ops(corpus, Hyperparams{.s = 1});
  CHECK(ops.f_diagonal()(0) == doctest::Approx(25.0));
  CHECK(ops.f_diagonal()(1) == doctest::Approx(1.0));
  const Eigen::VectorXd out = ops.apply_f(Eigen::Vector2d(1.0, 2.0));
  CHECK(out(0) == doctest::Approx(25.0));
  CHECK(out(1) == doctest::Approx(2.0));
}

TEST_CASE("trace hand cases") {
  SUBCASE("inner scatter of two orthonormal clips is 1") {
    const Corpus corpus = single_video_identity(2);
    const GramOperators ops(corpus, Hyperparams{.s = 2});
    CHECK(trace_inner_summary(ops, Eigen::VectorXd::Ones(2)) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("identical clips have zero inner scatter") {
    ClipFeatures v;
    v.video_id = "v0";
    v.features = Eigen::MatrixXd::Ones(3, 2);
    std::vector<ClipFeatures> videos;
    videos.push_back(std::move(v));
    const Corpus corpus = make_corpus(std::move(videos), {"g0"});
    const GramOperators ops(corpus, Hyperparams{.s = 3});
    CHECK(trace_inner_summary(ops, Eigen::VectorXd::Ones(3)) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("one video per group leaves no within-group scatter") {
    Eigen::MatrixXd features(2, 2);
    features << 1.0, 0.0, 0.0, 1.0;
    const Corpus corpus = one_clip_per_video(features, {"g0", "g1"});
    const GramOperators ops(corpus, Hyperparams{.s = 1});
    CHECK(trace_within_group(ops, Eigen::VectorXd::Ones(2)) ==
          doctest::Approx(0.0).epsilon(1e-12));
    // Between-group scatter of orthonormal summaries: 2 * ||e - mean||^2 = 1.
    CHECK(trace_between_group(ops, Eigen::VectorXd::Ones(2)) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("a single group has no between-group scatter") {
    Eigen::MatrixXd features(3, 2);
    features << 1.0, 0.0, 0.0, 1.0, 1.0, 1.0;
    const Corpus corpus = one_clip_per_video(features, {"g0", "g0", "g0"});
    const GramOperators ops(corpus, Hyperparams{.s = 1});
    CHECK(trace_between_group(ops, Eigen::VectorXd::Ones(3)) ==
          doctest::Approx(0.0).epsilon(1e-10));
  }
}

TEST_CASE("traces match their definitional sums on random corpora") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const Corpus corpus = vt::random_corpus(rng, 5, 3, 8, 6, 2);
    const Eigen::Index s = std::uniform_int_distribution<Eigen::Index>(
        1, corpus.min_clips())(rng);
    const GramOperators ops(corpus, Hyperparams{.s = s});
    const Eigen::VectorXd z = vt::random_binary_selection(rng, corpus, s);

    const double inner = trace_inner_summary(ops, z);
    const double within = trace_within_group(ops, z);
    const double between = trace_between_group(ops, z);
    const double scale = 1.0 + std::abs(inner) + std::abs(within) + std::abs(between);
    CHECK(std::abs(inner - vt::oracle_inner_summary(corpus, z, s)) <= 1e-9 * scale);
    CHECK(std::abs(within - vt::oracle_within_group(corpus, z, s)) <= 1e-9 * scale);
    CHECK(std::abs(between - vt::oracle_between_group(corpus, z, s)) <= 1e-9 * scale);
  }
}

TEST_CASE("within and between traces stay definitional for relaxed selections") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const Corpus corpus = vt::random_corpus(rng, 4, 2, 7, 5, 2);
    const Eigen::Index s = 2;
    const GramOperators ops(corpus, Hyperparams{.s = s});
    const Eigen::VectorXd z = vt::random_relaxed_selection(rng, corpus, s);
    CHECK(trace_within_group(ops, z) ==
          doctest::Approx(vt::oracle_within_group(corpus, z, s)).epsilon(1e-9));
    CHECK(trace_between_group(ops, z) ==
          doctest::Approx(vt::oracle_between_group(corpus, z, s)).epsilon(1e-9));
  }
}

TEST_CASE("the three scatter terms telescope for any selection") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    const Corpus corpus = vt::random_corpus(rng, 5, 3, 8, 6, 2);
    const GramOperators ops(corpus, Hyperparams{.s = 2});
    const Eigen::VectorXd z = vt::random_relaxed_selection(rng, corpus, 2);
    const double sum = trace_inner_summary(ops, z) + trace_within_group(ops, z) +
                       trace_between_group(ops, z);
    const double direct = z.dot(ops.apply_f(z)) - z.dot(ops.apply_a(z));
    CHECK(sum == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("matrix-free appliers agree with the dense realizations") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const Corpus corpus = vt::random_corpus(rng, 4, 2, 6, 5, 2);
    const Hyperparams hp{.lambda1 = 0.3, .lambda2 = 0.7, .lambda3 = 0.2, .s = 2};
    const GramOperators ops(corpus, hp);
    const DenseBlocks blocks = dense_blocks(corpus, hp);
    const Eigen::VectorXd z = Eigen::VectorXd::Random(corpus.total_clips);

    const double tol = 1e-10 * (1.0 + z.norm());
    CHECK((ops.apply_f(z) - blocks.f * z).norm() <= tol);
    CHECK((ops.apply_d(z) - blocks.d * z).norm() <= tol);
    CHECK((ops.apply_c(z) - blocks.c * z).norm() <= tol);
    CHECK((ops.apply_a(z) - blocks.a * z).norm() <= tol);
    CHECK((ops.apply_q1(z) - blocks.q1() * z).norm() <= tol);
    CHECK((ops.apply_q2(z) - blocks.q2() * z).norm() <= tol);
    CHECK((ops.apply_q(z) - blocks.q() * z).norm() <= tol);
  }
}

TEST_CASE("both convex pieces are positive semidefinite") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 15; ++trial) {
    const Corpus corpus = vt::random_corpus(rng, 4, 2, 6, 5, 2);
    const Hyperparams hp{.lambda1 = 0.05, .lambda2 = 0.5, .lambda3 = 0.5, .s = 2};
    const DenseBlocks blocks = dense_blocks(corpus, hp);
    for (const Eigen::MatrixXd& m :
         {blocks.f, blocks.d, blocks.c, blocks.a, blocks.q1(), blocks.q2()}) {
      const double scale = m.cwiseAbs().rowwise().sum().maxCoeff();
      CHECK(vt::min_eigenvalue(m) >= -1e-8 * (1.0 + scale));
    }
  }
}

TEST_CASE("fully redundant corpus collapses the objective matrix to zero") {
  // One video, two orthonormal clips, s=1: all four operators coincide, and
  // with l1 + l2 = l2 + l3 the weights cancel exactly.
  const Corpus corpus = single_video_identity(2);
  const Hyperparams hp{.lambda1 = 0.05, .lambda2 = 0.5, .lambda3 = 0.5, .s = 1};
  const Eigen::MatrixXd q = dense_q(corpus, hp);
  CHECK(q.cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("dense realizations refuse oversized corpora") {
  std::mt19937_64 rng(16);
  const Corpus corpus = vt::random_corpus(rng, 3, 2, 6, 4, 2);
  try {
    dense_q(corpus, Hyperparams{.s = 2}, corpus.total_clips - 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CapExceeded);
  }
}

TEST_CASE("dense objective matrix is symmetric") {
  std::mt19937_64 rng(17);
  const Corpus corpus = vt::random_corpus(rng, 4, 2, 6, 5, 2);
  const Eigen::MatrixXd q = dense_q(corpus, Hyperparams{.s = 2});
  CHECK((q - q.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("pair weights follow the region of the clip pair") {
  Eigen::MatrixXd features(3, 2);
  features << 1.0, 0.0, 0.0, 1.0, 1.0, 1.0;
  std::vector<ClipFeatures> videos;
  for (int i = 0; i < 2; ++i) {
    ClipFeatures v;
    v.video_id = "v" + std::to_string(i);
    v.features = features;
    videos.push_back(std::move(v));
  }
  ClipFeatures other;
  other.video_id = "v2";
  other.features = features;
  videos.push_back(std::move(other));
  const Corpus corpus = make_corpus(std::move(videos), {"g0", "g0", "g1"});
  const Hyperparams hp{.lambda1 = 0.05, .lambda2 = 0.5, .lambda3 = 0.25, .s = 2};

  CHECK(pair_weight(corpus, hp, 1, 1) == 0.0);                       // diagonal
  CHECK(pair_weight(corpus, hp, 0, 2) == doctest::Approx(0.05));    // same video
  CHECK(pair_weight(corpus, hp, 0, 3) == doctest::Approx(-0.5));    // same group
  CHECK(pair_weight(corpus, hp, 0, 7) == doctest::Approx(0.25));    // across groups
  CHECK(pair_weight(corpus, hp, 7, 0) == doctest::Approx(0.25));    // symmetric
}

TEST_CASE("objective combines the three scatter terms") {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 20; ++trial) {
    const Corpus corpus = vt::random_corpus(rng, 4, 2, 6, 5, 2);
    const Hyperparams hp{.lambda1 = 0.15, .lambda2 = 0.4, .lambda3 = 0.6, .s = 2};
    const GramOperators ops(corpus, hp);
    const Eigen::VectorXd z = vt::random_relaxed_selection(rng, corpus, 2);
    const double expected = -hp.lambda1 * trace_inner_summary(ops, z) +
                            hp.lambda2 * trace_within_group(ops, z) -
                            hp.lambda3 * trace_between_group(ops, z);
    CHECK(objective(ops, z) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("scatter traces scale quadratically with the features") {
  std::mt19937_64 rng(19);
  Corpus corpus = vt::random_corpus(rng, 3, 2, 5, 4, 2);
  const Eigen::VectorXd z = vt::random_binary_selection(rng, corpus, 2);
  const GramOperators ops(corpus, Hyperparams{.s = 2});
  const double base = trace_inner_summary(ops, z);

  Corpus scaled = corpus;
  for (auto& v : scaled.videos) v.features *= 3.0;
  const GramOperators scaled_ops(scaled, Hyperparams{.s = 2});
  CHECK(trace_inner_summary(scaled_ops, z) == doctest::Approx(9.0 * base).epsilon(1e-10));
}

TEST_CASE("selection state slices view the stacked vector") {
  std::mt19937_64 rng(20);
  const Corpus corpus = vt::random_corpus(rng, 3, 2, 5, 4, 2);
  SelectionState state{Eigen::VectorXd::Zero(corpus.total_clips), corpus.offsets};
  state.slice(1).setConstant(0.25);
  for (Eigen::Index j = corpus.offsets[1]; j < corpus.offsets[2]; ++j) {
    CHECK(state.z[j] == 0.25);
  }
  CHECK(state.z.head(corpus.offsets[1]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sampling distribution normalizes the selection") {
  const Corpus corpus = single_video_identity(4);
  const GramOperators ops(corpus, Hyperparams{.s = 2});
  Eigen::VectorXd z(4);
  z << 1.0, 1.0, 0.0, 0.0;
  const Eigen::VectorXd p = sampling_distribution(ops, z);
  CHECK(p(0) == doctest::Approx(0.5));
  CHECK(p(1) == doctest::Approx(0.5));
  CHECK(p.sum() == doctest::Approx(1.0));
}

TEST_CASE("hyperparameter validation") {
  const Corpus corpus = single_video_identity(3);
  const Hyperparams negative_weight{.lambda1 = -0.1, .s = 1};
  CHECK_THROWS_AS(negative_weight.validate(corpus), Error);
  const Hyperparams zero_s{.s = 0};
  CHECK_THROWS_AS(zero_s.validate(corpus), Error);
  const Hyperparams oversized_s{.s = 4};
  CHECK_THROWS_AS(oversized_s.validate(corpus), Error);
  const Hyperparams keep_all{.s = 3};
  CHECK_NOTHROW(keep_all.validate(corpus));
}

TEST_CASE("operator application rejects mismatched selection length") {
  const Corpus corpus = single_video_identity(3);
  const GramOperators ops(corpus, Hyperparams{.s = 1});
  CHECK_THROWS_AS(ops.apply_q(Eigen::VectorXd::Zero(2)), Error);
}

TEST_CASE("thread count does not change results, bit for bit") {
  ThreadGuard guard;
  std::mt19937_64 rng(21);
  const Corpus corpus = vt::random_corpus(rng, 6, 3, 12, 8, 2);
  const GramOperators ops(corpus, Hyperparams{.s = 2});
  const Eigen::VectorXd z = vt::random_relaxed_selection(rng, corpus, 2);

  set_thread_count(1);
  const Eigen::VectorXd serial = ops.apply_q(z);
  set_thread_count(4);
  const Eigen::VectorXd parallel = ops.apply_q(z);
  CHECK(serial == parallel);
}
