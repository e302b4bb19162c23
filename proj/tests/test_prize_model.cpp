#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "dsirp/errors.hpp"
#include "dsirp/prize_model.hpp"
#include "fixtures.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace dsirp;

TEST(EmpiricalQuantile, Definition) {
  EXPECT_EQ(empirical_quantile(Vector{1, 2, 3, 4}, 0.5), 2.0);
  for (double p : {0.01, 0.5, 0.99}) EXPECT_EQ(empirical_quantile(Vector{7, 7, 7}, p), 7.0);
  EXPECT_EQ(empirical_quantile(Vector{3, 1, 4, 1, 5}, 0.9), 5.0);
  EXPECT_EQ(empirical_quantile(Vector{3, 1, 4, 1, 5}, 0.4), 1.0);
  EXPECT_THROW(empirical_quantile(Vector{}, 0.5), InvalidInput);
  EXPECT_THROW(empirical_quantile(Vector{1}, 1.0), InvalidInput);

  Rng rng(1);
  for (int k = 0; k < 300; ++k) {
    Vector h(static_cast<std::size_t>(rng.uniform_int(1, 60)));
    for (auto& x : h) x = static_cast<double>(rng.uniform_int(0, 12));
    double prev = -1.0;
    for (double p : {0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95}) {
      const double q = empirical_quantile(h, p);
      EXPECT_EQ(q, oracle::sorted_quantile(h, p));
      EXPECT_GE(q, prev);
      prev = q;
    }
  }
}

TEST(Phi1, ReluOfLinearAndPairwiseTerms) {
  QuantileConfig cfg{{0.5}, 1};
  ModelParams w = init_params(cfg, 3);
  const FeatureVector f{1.0, -2.0, 0.5};
  EXPECT_EQ(phi1(4.0, &f, w), 4.0);
  w.w1 = {1.0, 3.0, 0.0};
  EXPECT_EQ(phi1(2.0, &f, w), 0.0);  // 2 + 1 - 6 = -3
  w.w1 = {0.2, -0.1, 0.3};
  w.w2_upper = {0.05, -0.02, 0.4};
  EXPECT_NEAR(phi1(10.0, &f, w), 10.0 + (0.2 * 1.0 - 0.1 * -2.0 + 0.3 * 0.5) +
                                     2.0 * (0.05 * 1.0 * -2.0 - 0.02 * 1.0 * 0.5 + 0.4 * -2.0 * 0.5), 1e-12);
  const ModelParams plain = init_params(cfg, 0);
  EXPECT_EQ(phi1(-1.0, nullptr, plain), 0.0);
  EXPECT_EQ(phi1(3.0, nullptr, plain), 3.0);
  const FeatureVector short_f{1.0};
  EXPECT_THROW(phi1(1.0, &short_f, w), InvalidInput);
}

TEST(ModelParams, SymmetricTriangleAndInitialisation) {
  const QuantileConfig cfg;
  const auto w = init_params(cfg, 8);
  EXPECT_EQ(w.w2_upper.size(), 28u);
  EXPECT_EQ(w.w3.size(), 6u);
  EXPECT_EQ(w.w3[0].size(), 5u);
  EXPECT_DOUBLE_EQ(w.w3[2][3], -1.0 / 30.0);
  EXPECT_DOUBLE_EQ(w.w4[5][0], 1.0 / 30.0);
  auto r = fixtures::random_params(cfg, 8, 3);
  const auto full = r.w2_full();
  for (int a = 0; a < 8; ++a) {
    EXPECT_EQ(full[a][a], 0.0);
    for (int b = 0; b < 8; ++b) EXPECT_EQ(full[a][b], full[b][a]);
  }
  ModelParams copy = r;
  copy.assign(r.flatten());
  EXPECT_EQ(copy, r);
  EXPECT_THROW(QuantileConfig({0.5, 0.4}, 3).validate(), InvalidInput);
  EXPECT_THROW(QuantileConfig({0.5}, 0).validate(), InvalidInput);
}

TEST(PrizeForward, MatchesLiteralEvaluation) {
  for (auto pattern : {DemandPattern::normal, DemandPattern::contextual}) {
    const auto inst = generate_instance(pattern, 5, Penalty::high, 4);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const QuantileConfig cfg{{0.1, 0.5, 0.9}, 4};
      const auto s = fixtures::random_state(inst, seed);
      const auto w = fixtures::random_params(cfg, model_features(inst), seed + 100);
      const auto got = prize_forward(s, inst, w, cfg);
      const auto ref = oracle::literal_prizes(s, inst, w, cfg);
      for (int i = 0; i < inst.n; ++i) EXPECT_NEAR(got[i], ref[i], 1e-9 * (1.0 + std::abs(ref[i])));
    }
  }
}

TEST(PrizeForward, DegenerateCases) {
  const auto inst = generate_instance(DemandPattern::normal, 4, Penalty::low, 5);
  const QuantileConfig cfg;
  auto s = fixtures::random_state(inst, 1);
  ModelParams zero = init_params(cfg, 0);
  for (auto* m : {&zero.w3, &zero.w4})
    for (auto& r : *m) std::fill(r.begin(), r.end(), 0.0);
  EXPECT_EQ(prize_forward(s, inst, zero, cfg), Vector(4, 0.0));

  // Inventory far above any projected demand: only the holding layer acts.
  s.inventory.assign(4, 1e7);
  const auto w = init_params(cfg, 0);
  ModelParams no_hold = w;
  for (auto& r : no_hold.w3) std::fill(r.begin(), r.end(), 0.0);
  EXPECT_EQ(prize_forward(s, inst, no_hold, cfg), Vector(4, 0.0));

  const auto ctx = generate_instance(DemandPattern::contextual, 3, Penalty::low, 1);
  auto cs = fixtures::random_state(ctx, 2);
  cs.context_window.resize(2);
  EXPECT_THROW(prize_forward(cs, ctx, init_params(cfg, 8), cfg), InvalidInput);
}

TEST(PrizeBackward, ZeroCases) {
  const auto inst = generate_instance(DemandPattern::contextual, 4, Penalty::low, 6);
  const QuantileConfig cfg;
  const auto s = fixtures::random_state(inst, 3);
  const auto w = fixtures::random_params(cfg, 8, 4);
  for (double x : prize_backward(s, inst, w, cfg, Vector(4, 0.0)).flatten()) EXPECT_EQ(x, 0.0);

  // All ReLUs inactive: phi1 is zero everywhere, so cum = 0 < inventory and
  // only the holding term with relu(I) is live; with I = 0 nothing is.
  auto dead = w;
  dead.w1.assign(8, 0.0);
  dead.w2_upper.assign(28, 0.0);
  auto empty_hist = s;
  for (auto& row : empty_hist.history) std::fill(row.begin(), row.end(), 0.0);
  empty_hist.inventory.assign(4, 0.0);
  for (double x : prize_backward(empty_hist, inst, dead, cfg, Vector(4, 1.0)).flatten()) EXPECT_EQ(x, 0.0);
}

TEST(PrizeBackward, MatchesFiniteDifferences) {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 20; ++seed) {
    const bool ctx = seed % 2 == 0;
    const auto inst = generate_instance(ctx ? DemandPattern::contextual : DemandPattern::bimodal, 4, Penalty::low,
                                        seed);
    const QuantileConfig cfg{{0.25, 0.5, 0.75}, 3};
    const auto s = fixtures::random_state(inst, seed + 1);
    const auto w = fixtures::random_params(cfg, model_features(inst), seed + 2);
    if (oracle::min_relu_margin(s, inst, w, cfg) < 1e-3) continue;
    Rng rng(seed);
    Vector dtheta(inst.n);
    for (auto& x : dtheta) x = rng.uniform(-1.0, 1.0);
    EXPECT_LE(fixtures::gradient_error(s, inst, w, cfg, dtheta), 1e-5) << "seed " << seed;
    ++checked;
  }
}

TEST(Checkpoint, RoundTripAndSchema) {
  const QuantileConfig cfg{{0.2, 0.8}, 3};
  const auto w = fixtures::random_params(cfg, 8, 9);
  const auto path = std::filesystem::temp_directory_path() / "dsirp_test_ckpt.json";
  save_checkpoint(w, cfg, path);
  const auto back = load_checkpoint(path);
  EXPECT_EQ(back.params, w);
  EXPECT_EQ(back.config, cfg);
  auto j = nlohmann::json::parse(checkpoint_to_json(w, cfg));
  for (const char* key : {"w1", "w2_upper_triangle", "w3", "w4", "P", "H", "schema_version"})
    EXPECT_TRUE(j.contains(key)) << key;
  j["schema_version"] = 99;
  EXPECT_THROW(checkpoint_from_json(j.dump()), SchemaError);
  j = nlohmann::json::parse(checkpoint_to_json(w, cfg));
  j["w3"][0].push_back(1.0);
  EXPECT_THROW(checkpoint_from_json(j.dump()), SchemaError);
}
