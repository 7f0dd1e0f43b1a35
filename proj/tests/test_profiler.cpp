#include "doctest.h"
#include "nocsim/profiler.hpp"

using namespace nocsim;

TEST_CASE("record_miss buckets by word and flit") {
  CriticalityHistogram h(8, 2);
  h.record_miss(0, 8);   // word 0, B0
  h.record_miss(24, 8);  // word 3, B1
  h.record_miss(63, 8);  // word 7, T

  CHECK(h.total_misses() == 3);
  CHECK(h.word_counts()[0] == 1);
  CHECK(h.word_counts()[3] == 1);
  CHECK(h.word_counts()[7] == 1);
  CHECK(h.flit_counts()[0] == 1);
  CHECK(h.flit_counts()[1] == 1);
  CHECK(h.flit_counts()[3] == 1);
}

TEST_CASE("histogram consistency invariants hold after every record") {
  CriticalityHistogram h(8, 2);
  for (std::uint32_t off = 0; off < 64; ++off) {
    h.record_miss(off, 8);
    std::uint64_t ws = 0, fs = 0;
    for (auto c : h.word_counts()) ws += c;
    for (auto c : h.flit_counts()) fs += c;
    CHECK(ws == h.total_misses());
    CHECK(fs == h.total_misses());
    for (std::size_t f = 0; f < h.flit_counts().size(); ++f) {
      CHECK(h.flit_counts()[f] ==
            h.word_counts()[2 * f] + h.word_counts()[2 * f + 1]);
    }
  }
}

TEST_CASE("all misses at word 0 report 100/0/0/0") {
  CriticalityHistogram h(8, 2);
  for (int i = 0; i < 10; ++i) h.record_miss(0, 8);
  const auto fp = h.flit_percentages();
  CHECK(fp[0] == doctest::Approx(100.0));
  CHECK(fp[1] == doctest::Approx(0.0));
  CHECK(fp[3] == doctest::Approx(0.0));
}

TEST_CASE("counts {w0:2, w7:2} give the 50/0/0/50 flit row") {
  CriticalityHistogram h(8, 2);
  h.record_miss(0, 8);
  h.record_miss(0, 8);
  h.record_miss(56, 8);
  h.record_miss(56, 8);
  const auto fp = h.flit_percentages();
  CHECK(fp[0] == doctest::Approx(50.0));
  CHECK(fp[1] == doctest::Approx(0.0));
  CHECK(fp[2] == doctest::Approx(0.0));
  CHECK(fp[3] == doctest::Approx(50.0));
}

TEST_CASE("percent rows sum to 100 within rounding") {
  CriticalityHistogram h(8, 2);
  std::uint32_t offs[] = {0, 8, 8, 16, 24, 40, 48, 56, 56, 63};
  for (auto o : offs) h.record_miss(o, 8);
  double sum = 0;
  for (double p : h.flit_percentages()) sum += p;
  CHECK(sum == doctest::Approx(100.0).epsilon(0.0004));
}

TEST_CASE("empty histogram reports no misses, not a division by zero") {
  CriticalityHistogram h(8, 2);
  const std::string table = h.report_table("empty");
  CHECK(table.find("no misses") != std::string::npos);
  const std::string csv = h.report_csv("empty");
  CHECK(csv.find("empty,0.00") != std::string::npos);
}

TEST_CASE("csv header names words, flits and the total") {
  CriticalityHistogram h(8, 2);
  h.record_miss(0, 8);
  const std::string csv = h.report_csv("wl");
  CHECK(csv.rfind("workload,w0,w1,w2,w3,w4,w5,w6,w7,B0,B1,B2,T,total\n", 0) ==
        0);
  CHECK(csv.find(",1\n") != std::string::npos);
}

TEST_CASE("merge adds bucket-wise") {
  CriticalityHistogram a(8, 2), b(8, 2);
  a.record_miss(0, 8);
  b.record_miss(0, 8);
  b.record_miss(63, 8);
  a.merge(b);
  CHECK(a.total_misses() == 3);
  CHECK(a.word_counts()[0] == 2);
  CHECK(a.flit_counts()[3] == 1);
}
