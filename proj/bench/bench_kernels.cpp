// Serial reference kernels against their parallel / indexed counterparts.

#include <benchmark/benchmark.h>

#include <filesystem>
#include <fstream>
#include <memory>

#include "collab/cociting.hpp"
#include "collab/pipeline.hpp"
#include "collab/synth.hpp"

using namespace collab;

namespace {

struct Workload {
  std::filesystem::path dir;
  Dataset dataset;
  std::vector<TopicAssignment> topics;
};

// One synthetic dataset shared by every benchmark.
const Workload& workload() {
  static std::unique_ptr<Workload> w = [] {
    auto out = std::make_unique<Workload>();
    out->dir = std::filesystem::temp_directory_path() / "collab_bench";
    std::filesystem::create_directories(out->dir);
    SynthSpec spec;
    spec.n_focal = 60;
    spec.papers_per_topic = 40;
    spec.multi_topic_fraction = 0.2;
    auto sc = generate(spec);
    const auto file = out->dir / "corpus.jsonl";
    {
      std::ofstream f(file, std::ios::binary);
      write_corpus_jsonl(sc.corpus, f);
    }
    RunConfig cfg;
    cfg.inputs = {{file.string(), "bench"}};
    cfg.seed = 1;
    out->dataset = std::move(load_datasets(cfg).front());
    out->topics = detect_all_topics_serial(out->dataset, cfg);
    return out;
  }();
  return *w;
}

RunConfig config(int workers) {
  RunConfig c;
  c.seed = 1;
  c.workers = workers;
  c.surrogate = true;
  return c;
}

void BM_CoCitingReference(benchmark::State& state) {
  const auto& w = workload();
  for (auto _ : state) {
    for (auto a : w.dataset.focal) benchmark::DoNotOptimize(build_cociting_reference(w.dataset.corpus, a));
  }
}

void BM_CoCitingIndexed(benchmark::State& state) {
  const auto& w = workload();
  for (auto _ : state) {
    for (auto a : w.dataset.focal) benchmark::DoNotOptimize(build_cociting(w.dataset.corpus, a));
  }
}

void BM_DetectTopicsSerial(benchmark::State& state) {
  const auto& w = workload();
  auto cfg = config(1);
  for (auto _ : state) benchmark::DoNotOptimize(detect_all_topics_serial(w.dataset, cfg));
}

void BM_DetectTopicsParallel(benchmark::State& state) {
  const auto& w = workload();
  auto cfg = config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(detect_all_topics(w.dataset, cfg));
}

void BM_AnalyzeSerial(benchmark::State& state) {
  const auto& w = workload();
  auto cfg = config(1);
  for (auto _ : state) benchmark::DoNotOptimize(analyze_all_serial(w.dataset, w.topics, cfg));
}

void BM_AnalyzeParallel(benchmark::State& state) {
  const auto& w = workload();
  auto cfg = config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(analyze_all(w.dataset, w.topics, cfg));
}

}  // namespace

BENCHMARK(BM_CoCitingReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoCitingIndexed)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DetectTopicsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DetectTopicsParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AnalyzeSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AnalyzeParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
