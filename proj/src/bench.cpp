#include "himix/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace himix {

namespace {

std::string format_fraction(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8f", v);
  return buf;
}

}  // namespace

double balance_trial(MixStrategy strategy, const BenchConfig& cfg, RngState seed) {
  const auto scenes = generate_scene_pair(cfg.source, cfg.target, seed);
  return run_pipeline_episode(scenes, cfg.segmenter, strategy, seed, cfg.episode).source_fraction;
}

BalanceStats summarize(const std::vector<TrialRecord>& records, MixStrategy strategy) {
  BalanceStats s;
  for (const auto& r : records) {
    if (r.strategy != strategy)
      continue;
    s.fractions.push_back(r.source_fraction);
    if (s.class_shares.size() < r.class_shares.size())
      s.class_shares.resize(r.class_shares.size(), 0.0);
    for (std::size_t c = 0; c < r.class_shares.size(); ++c)
      s.class_shares[c] += r.class_shares[c];
  }
  if (s.fractions.empty())
    return s;
  const auto n = static_cast<double>(s.fractions.size());
  for (double f : s.fractions) {
    s.mean += f;
    s.mean_abs_deviation += std::abs(f - 0.5);
  }
  s.mean /= n;
  s.mean_abs_deviation /= n;
  for (auto& v : s.class_shares)
    v /= n;
  return s;
}

std::string bench_csv(const std::vector<TrialRecord>& records, int num_classes) {
  std::string out = "trial,strategy,source_fraction";
  for (int c = 0; c < num_classes; ++c)
    out += ",share_c" + std::to_string(c);
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.trial);
    out += ',';
    out += to_string(r.strategy);
    out += ',';
    out += format_fraction(r.source_fraction);
    for (int c = 0; c < num_classes; ++c) {
      out += ',';
      const auto idx = static_cast<std::size_t>(c);
      out += format_fraction(idx < r.class_shares.size() ? r.class_shares[idx] : 0.0);
    }
    out += '\n';
  }
  return out;
}

BenchResult bench_compare(std::size_t trials, const BenchConfig& cfg, RngState master, unsigned parallelism) {
  if (trials == 0)
    throw DataError("bench needs at least one trial");
  cfg.source.check();
  cfg.target.check();
  std::vector<TrialRecord> records(2 * trials);

  auto run_trial = [&](std::size_t t) {
    const RngState seed = derive_rng(master, t);
    const auto scenes = generate_scene_pair(cfg.source, cfg.target, seed);
    for (auto strategy : {MixStrategy::kHimix, MixStrategy::kClassmix}) {
      const auto report = run_pipeline_episode(scenes, cfg.segmenter, strategy, seed, cfg.episode);
      auto& rec = records[2 * t + (strategy == MixStrategy::kHimix ? 0 : 1)];
      rec.trial = t;
      rec.strategy = strategy;
      rec.source_fraction = report.source_fraction;
      rec.class_shares = report.class_source_shares;
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(parallelism, static_cast<unsigned>(trials)));
  if (workers == 1) {
    for (std::size_t t = 0; t < trials; ++t)
      run_trial(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < trials; t = next++) {
          try {
            run_trial(t);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure)
              failure = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool)
      th.join();
    if (failure)
      std::rethrow_exception(failure);
  }

  BenchResult result;
  result.himix = summarize(records, MixStrategy::kHimix);
  result.classmix = summarize(records, MixStrategy::kClassmix);
  int nc = 0;
  for (const auto& r : records)
    nc = std::max(nc, static_cast<int>(r.class_shares.size()));
  result.csv = bench_csv(records, nc);
  result.records = std::move(records);
  return result;
}

unsigned default_parallelism() {
  if (const char* env = std::getenv("HIMIX_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0)
      return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace himix
