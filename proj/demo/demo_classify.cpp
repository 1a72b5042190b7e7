// Classify a handful of exact characters on the D and G networks: compare
// the algebra predicted by the classification theorems with the numerically
// observed closure of the Harper operator and the represented symmetries.

#include <cstdio>
#include <vector>

#include <nctorus/nctorus.hpp>

using namespace nct;

int main() {
  struct Row {
    const char* lattice;
    const char* a1;
    const char* a2;
    const char* a3;
  };
  const std::vector<Row> rows = {
      {"D", "0", "0", "0"},     {"D", "1/8", "1/8", "0"}, {"D", "1/4", "1/4", "1/4"},
      {"D", "0", "1/3", "1/3"}, {"D", "1/16", "1/16", "1/4"},
      {"G", "0", "0", "0"},     {"G", "1/2", "1/2", "0"}, {"G", "1/8", "0", "0"},
  };

  std::printf("%-2s %-18s %-10s %-12s %-9s %s\n", "", "angles", "case", "predicted",
              "closure", "verdict");
  bool all = true;
  for (const auto& r : rows) {
    const std::array<Rational, 3> a = {Rational::parse(r.a1), Rational::parse(r.a2),
                                       Rational::parse(r.a3)};
    const PointClassification pc = classify_point(r.lattice, a);
    std::printf("%-2s (%5s,%5s,%5s) %-10s %-12s %3d/%-5d %s\n", r.lattice, r.a1, r.a2, r.a3,
                pc.theorem.caseLabel.c_str(), algebra_class_name(pc.theorem.cls).c_str(),
                pc.closureDim, pc.referenceFullDim, pc.agree ? "agree" : "DISAGREE");
    all = all && pc.agree;
  }
  std::printf("\n%s\n", all ? "every observed closure matches its theorem case"
                            : "disagreements found");
  return all ? 0 : 1;
}
