#include <gtest/gtest.h>

#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "vrlab/parallel.hpp"

using namespace vrlab;

TEST(ParallelFor, VisitsEveryIndexOnce) {
  for (unsigned workers : {1u, 3u, 8u}) {
    std::vector<int> hits(1001, 0);
    parallel_for(hits.size(), workers, [&](std::size_t i) { ++hits[i]; });
    for (const int h : hits) ASSERT_EQ(h, 1);
  }
}

TEST(ParallelFor, RethrowsWorkerException) {
  EXPECT_THROW(parallel_for(100, 4,
                            [](std::size_t i) {
                              if (i == 57) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

TEST(ParallelFor, EmptyRange) {
  int calls = 0;
  parallel_for(0, 4, [&](std::size_t) { ++calls; });
  EXPECT_EQ(calls, 0);
}

TEST(ResolveWorkers, EnvironmentCap) {
  ::setenv("VRLAB_THREADS", "2", 1);
  EXPECT_EQ(resolve_workers(8), 2u);
  EXPECT_EQ(resolve_workers(1), 1u);
  EXPECT_LE(resolve_workers(0), 2u);
  ::setenv("VRLAB_THREADS", "junk", 1);
  EXPECT_EQ(resolve_workers(8), 8u);
  ::unsetenv("VRLAB_THREADS");
  EXPECT_EQ(resolve_workers(5), 5u);
  EXPECT_GE(resolve_workers(0), 1u);
}
