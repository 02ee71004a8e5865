#include <doctest.h>

#include <sstream>

#include "npsac/error.hpp"
#include "npsac/ingest.hpp"
#include "npsac/pipeline.hpp"
#include "support.hpp"

using namespace npsac;

namespace {

PipelineConfig small_config(const std::filesystem::path& out) {
  PipelineConfig c = pipeline_config(KeyValueConfig::parse(
      "input.synth = true\nsynth.n = 60\nnode2vec.dim = 16\nnode2vec.epochs = 2\nfusion.k = 8\n"
      "eval.gridsearch = true\neval.weight_levels = 0.5,1\n"));
  c.out_dir = out;
  return c;
}

}  // namespace

TEST_CASE("full run writes every artifact") {
  const testing::TempDir dir("pipeline_full");
  const PipelineResult r = run_pipeline(small_config(dir.path()));
  for (const char* f : {"report.json", "pairs.csv", "verdicts.csv", "fused.tsv", "sweep.svg", "views/posts.tsv",
                        "views/net_friend.tsv", "views/net_follower.tsv", "views/profile.tsv", "data/accounts.jsonl"})
    CHECK(std::filesystem::exists(dir / f));
  CHECK(r.report_path == dir / "report.json");
  const auto& rep = r.report;
  CHECK(rep["counts"]["accounts"] == 66);
  CHECK(rep["sweep"].size() == 9);
  CHECK(rep["baselines"].contains("bps"));
  CHECK(rep["baselines"]["concat"]["dim"] == 256 + 16 + 16 + 12);
  for (const char* v : {"posts", "net_f", "net_fl", "pa"}) CHECK(rep["ablation"].contains(v));
  CHECK(rep["gridsearch"].size() == 16);

  const auto tp = rep["confusion"]["tp"].get<std::size_t>();
  const auto fn = rep["confusion"]["fn"].get<std::size_t>();
  CHECK(tp + fn == rep["counts"]["labels"].get<std::size_t>() - rep["counts"]["labels_outside_candidates"].get<std::size_t>());

  const ViewMatrix fused = read_view(dir / "fused.tsv");
  CHECK(fused.dim() == 8);
  CHECK(fused.order == read_view(dir / "views/posts.tsv").order);
}

TEST_CASE("rerun gives a bytewise identical report") {
  const testing::TempDir a("pipeline_rerun_a"), b("pipeline_rerun_b");
  run_pipeline(small_config(a.path()));
  run_pipeline(small_config(b.path()));
  CHECK(read_file(a / "report.json") == read_file(b / "report.json"));
  CHECK(read_file(a / "verdicts.csv") == read_file(b / "verdicts.csv"));
}

TEST_CASE("stage errors name the stage") {
  const testing::TempDir dir("pipeline_errors");
  PipelineConfig c = small_config(dir / "first");
  run_pipeline(c);

  PipelineConfig from_files = pipeline_config(KeyValueConfig{});
  from_files.out_dir = dir / "second";
  from_files.accounts = dir / "first/data/accounts.jsonl";
  from_files.posts = dir / "first/data/posts.jsonl";
  from_files.edges_friend = dir / "first/data/edges_friend.csv";
  from_files.edges_follower = dir / "missing.csv";
  from_files.skipgram.dim = 8;
  from_files.fusion.k = 4;
  try {
    run_pipeline(from_files);
    FAIL("expected a stage error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "view-network");
    CHECK(std::string(e.what()).rfind("[view-network]", 0) == 0);
  }

  from_files.edges_follower = dir / "first/data/edges_follower.csv";
  from_files.fusion.weights = {0, 0, 0, 0};
  try {
    run_pipeline(from_files);
    FAIL("expected a stage error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "fusion-wgcca");
  }

  from_files.fusion.weights = {0.25, 0.5, 0.5, 0.25};
  const PipelineResult ok = run_pipeline(from_files);
  CHECK_FALSE(ok.report.contains("metrics"));  // no labels given
  CHECK(ok.report["counts"]["candidate_pairs"].get<std::size_t>() > 0);
}

TEST_CASE("external post vectors are pooled per account") {
  const testing::TempDir dir("pipeline_external");
  PipelineConfig c = small_config(dir / "synth");
  c.run_gridsearch = false;
  run_pipeline(c);
  const auto accounts = load_accounts(dir / "synth/data/accounts.jsonl");
  const auto posts = load_posts(dir / "synth/data/posts.jsonl", accounts).posts;
  VectorTable t;
  t.dim = 768;
  for (std::size_t i = 0; i < posts.size(); ++i) {
    std::vector<double> v(768, 0.0);
    v[i % 768] = 1.0;
    t.rows[posts[i].post_id] = v;
  }
  std::ostringstream out;
  write_vectors(out, t);
  write_file_atomic(dir / "vectors.tsv", out.str());

  PipelineConfig ext = c;
  ext.use_synth = false;
  ext.out_dir = dir / "ext";
  ext.accounts = dir / "synth/data/accounts.jsonl";
  ext.posts = dir / "synth/data/posts.jsonl";
  ext.edges_friend = dir / "synth/data/edges_friend.csv";
  ext.edges_follower = dir / "synth/data/edges_follower.csv";
  ext.labels = dir / "synth/data/labels.csv";
  ext.embedder = "external";
  ext.vectors = dir / "vectors.tsv";
  const PipelineResult r = run_pipeline(ext);
  CHECK(read_view(dir / "ext/views/posts.tsv").dim() == 768);
  CHECK(r.report.contains("metrics"));

  ext.post_dim = 384;
  ext.out_dir = dir / "ext2";
  CHECK_THROWS_AS(run_pipeline(ext), StageError);
}
