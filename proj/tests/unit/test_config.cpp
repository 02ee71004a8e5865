#include <doctest.h>

#include <cstdlib>

#include "npsac/config.hpp"
#include "npsac/error.hpp"
#include "npsac/pipeline.hpp"

using namespace npsac;

TEST_CASE("key-value parsing") {
  const auto kv = KeyValueConfig::parse("# comment\n a = 1 \nb=two # trailing\n\nlist = 0.25, 0.5\nflag = yes\n");
  CHECK(kv.get_int("a", 0) == 1);
  CHECK(kv.get_string("b", "") == "two");
  CHECK(kv.get_doubles("list", {}) == std::vector<double>{0.25, 0.5});
  CHECK(kv.get_bool("flag", false));
  CHECK(kv.get_double("missing", 3.5) == 3.5);
  CHECK_THROWS_AS(kv.get_int("b", 0), Error);
  CHECK_THROWS_AS(KeyValueConfig::parse("no equals sign"), Error);
  CHECK(parse_assignment("x=1=2") == std::pair<std::string, std::string>{"x", "1=2"});
  CHECK_THROWS_AS(parse_assignment("novalue"), Error);
}

TEST_CASE("pipeline config reads every key") {
  auto kv = KeyValueConfig::parse(
      "seed = 3\nout_dir = out\ninput.synth = true\nsynth.n = 50\nnode2vec.p = 1.5\nnode2vec.dim = 16\n"
      "fusion.weights = 1,1,1,1\nfusion.k = 4\nfusion.solver = subspace\ndetect.threshold = 0.2\n"
      "eval.sweep_grid = 0.2:0.4:0.1\nbps.mu = 0.5\n");
  const PipelineConfig c = pipeline_config(kv, "/base");
  CHECK(c.seed == 3);
  CHECK(c.out_dir == std::filesystem::path("/base/out"));
  CHECK(c.use_synth);
  CHECK(c.synth.n_accounts == 50);
  CHECK(c.synth.seed == 3);
  CHECK(c.walks.p == 1.5);
  CHECK(c.skipgram.dim == 16);
  CHECK(c.fusion.weights == std::vector<double>{1, 1, 1, 1});
  CHECK(c.fusion.k == 4);
  CHECK(c.fusion.solver == EigenSolverKind::Subspace);
  CHECK(c.threshold == 0.2);
  CHECK(c.sweep_grid.size() == 3);
  CHECK(c.bps.mu == 0.5);

  kv.set("fusion.wieghts", "1");
  CHECK_THROWS_AS(pipeline_config(kv), Error);
}

TEST_CASE("defaults follow the documented values") {
  const PipelineConfig c = pipeline_config(KeyValueConfig{});
  CHECK(c.walks.p == 0.5);
  CHECK(c.walks.q == 2.0);
  CHECK(c.walks.walks_per_node == 10);
  CHECK(c.walks.walk_length == 15);
  CHECK(c.skipgram.dim == 128);
  CHECK(c.fusion.weights == std::vector<double>{0.25, 0.5, 0.5, 0.25});
  CHECK(c.fusion.k == 32);
  CHECK(c.fusion.relative_ridge == 1e-8);
  CHECK(c.threshold == 0.1);
  CHECK(c.pairs.threshold == 0.8);
  CHECK(c.post_dim == 768);
  CHECK(c.hash_dim == 256);
}

TEST_CASE("environment seed overrides the file") {
  setenv("NPSAC_SEED", "42", 1);
  const PipelineConfig c = pipeline_config(KeyValueConfig::parse("seed = 3\n"));
  unsetenv("NPSAC_SEED");
  CHECK(c.seed == 42);
}
