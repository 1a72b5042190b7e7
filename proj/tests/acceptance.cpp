// Acceptance checks for the nctorus library and the nct tool.
//
// Usage: acceptance <path-to-nct-binary>
//
// Each numbered criterion prints exactly one PASS/FAIL line to stdout with
// its wall time; progress notes go to stderr.  The process exits nonzero if
// any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nctorus/nctorus.hpp>

namespace fs = std::filesystem;
using namespace nct;

namespace {

bool g_allPass = true;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(int criterion, bool ok, const std::string& detail, double seconds) {
  std::printf("%s criterion %d: %s (%.1fs)\n", ok ? "PASS" : "FAIL", criterion, detail.c_str(),
              seconds);
  std::fflush(stdout);
  if (!ok) g_allPass = false;
}

void note(const std::string& msg) {
  std::fprintf(stderr, "  %s\n", msg.c_str());
  std::fflush(stderr);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_command(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

double torus_distance(const Character& a, const Character& b) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double d = wrap_pi(a[i] - b[i]);
    s += d * d;
  }
  return std::sqrt(s);
}

// --------------------------------------------------------------------------
// 1. Spot spectrum of the G network at the character (-1, 1, -1).
// --------------------------------------------------------------------------
void criterion1() {
  Timer t;
  bool ok = true;
  std::string detail;
  try {
    const SpectrumPoint sp = spectrum_at(harper_model("G"), {M_PI, 0.0, M_PI});
    const double s5 = std::sqrt(5.0);
    const std::vector<double> expected = {-s5, -1.0, 1.0, s5};
    ok = sp.eigenvalues.size() == expected.size();
    double worst = 0.0;
    for (std::size_t i = 0; ok && i < expected.size(); ++i)
      worst = std::max(worst, std::abs(sp.eigenvalues[i] - expected[i]));
    ok = ok && worst < 1e-12 && t.seconds() < 1.0;
    std::ostringstream os;
    os << "G spectrum at (pi,0,pi) equals {-sqrt5,-1,1,sqrt5}, worst error " << worst;
    detail = os.str();
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  report(1, ok, detail, t.seconds());
}

// --------------------------------------------------------------------------
// 2. D degeneracy scan: the tool flags only points near the three circles,
//    and a coarse-tolerance scan detects every circle sample within one
//    grid spacing.
// --------------------------------------------------------------------------
void criterion2(const std::string& nct, const fs::path& scratch) {
  Timer t;
  bool ok = true;
  std::string detail;
  try {
    const double spacing = 2.0 * M_PI / 64.0;

    // Tool run at the tight tolerance.
    const fs::path out = scratch / "scan_d64";
    const int code = run_command(nct + " bloch scan --lattice D --grid 64 --tol 1e-6" +
                                 " --no-timestamp --out " + out.string() + " >/dev/null 2>&1");
    if (code != 0) throw std::runtime_error("nct bloch scan exited with code " + std::to_string(code));
    int rows = 0;
    double worstDistance = 0.0;
    std::istringstream csv(slurp(out / "bloch_scan.csv"));
    std::string line;
    while (std::getline(csv, line)) {
      if (line.empty() || line[0] == '#' || line.rfind("phi1", 0) == 0) continue;
      const auto pos = line.rfind(',');
      worstDistance = std::max(worstDistance, std::stod(line.substr(pos + 1)));
      ++rows;
    }
    if (rows == 0) throw std::runtime_error("scan flagged no grid points");
    const bool toolOk = worstDistance < 2.0 * spacing;

    // Library scan at tol = two spacings must see every circle sample.
    const HarperModel model = harper_model("D");
    const LocusReport rep = degeneracy_scan(model, 64, 2.0 * spacing, false);
    double worstDetect = 0.0;
    for (int c = 0; c < 3; ++c) {
      for (int k = 0; k < 256; ++k) {
        const double u = 2.0 * M_PI * k / 256.0;
        Character p{};
        p[c % 3] = M_PI;
        p[(c + 1) % 3] = std::fmod(u + M_PI, 2.0 * M_PI);
        p[(c + 2) % 3] = u;
        double best = 1e300;
        for (const auto& f : rep.flagged) best = std::min(best, torus_distance(p, f.angle));
        worstDetect = std::max(worstDetect, best);
      }
    }
    const bool detectOk = worstDetect <= spacing + 1e-9;

    ok = toolOk && detectOk && t.seconds() < 60.0;
    std::ostringstream os;
    os << "D scan: " << rows << " flagged points all within two spacings of the locus"
       << " (worst " << worstDistance << "), 768 circle samples detected within "
       << worstDetect << " <= one spacing " << spacing;
    detail = os.str();
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  report(2, ok, detail, t.seconds());
}

// --------------------------------------------------------------------------
// 3. G ramification scan at grid 48: stable isolated clusters whose
//    multiplicities are triple crossings or double pairs; the cluster count
//    is compared against the expected 4 as a finding.
// --------------------------------------------------------------------------
void criterion3() {
  Timer t;
  bool ok = true;
  std::string detail;
  try {
    const double spacing = 2.0 * M_PI / 48.0;
    const HarperModel model = harper_model("G");
    const LocusReport rep = degeneracy_scan(model, 48, 2.0 * spacing, true);
    bool multOk = !rep.clusters.empty();
    bool convOk = true;
    for (const auto& c : rep.clusters) {
      std::vector<int> m = c.multiplicities;
      std::sort(m.begin(), m.end());
      const bool triple = m == std::vector<int>{1, 3};
      const bool doublePair = m == std::vector<int>{2, 2};
      if (!triple && !doublePair) multOk = false;
      if (!c.converged || c.refinedGap > 1e-10) convOk = false;
    }
    ok = multOk && convOk && t.seconds() < 600.0;
    std::ostringstream os;
    os << rep.clusters.size() << " stable clusters, multiplicities all triple-crossing or"
       << " double-pair; finding: expected 4 clusters, observed " << rep.clusters.size()
       << (rep.clusters.size() == 4 ? " (match)" : " (deviation)");
    detail = os.str();
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  report(3, ok, detail, t.seconds());
}

// --------------------------------------------------------------------------
// 4. Exact symbolic identities: the X3/X6 reductions and the phase
//    identities at random characters.
// --------------------------------------------------------------------------
void criterion4() {
  Timer t;
  bool ok = true;
  std::string detail;
  try {
    const VerifyReport x3 = verify_X3();
    const VerifyReport x6 = verify_X6();
    const VerifyReport ph = verify_phase_identities(42, 100, 1e-12);
    ok = x3.pass && x6.pass && ph.pass && t.seconds() < 10.0;
    std::ostringstream os;
    os << "X3 " << (x3.pass ? "pass" : "fail") << ", X6 " << (x6.pass ? "pass" : "fail")
       << ", phase identities at 100 random characters " << (ph.pass ? "pass" : "fail");
    detail = os.str();
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  report(4, ok, detail, t.seconds());
}

// --------------------------------------------------------------------------
// 5. Classification suite: 26 points covering every D case and every G case,
//    with the observed closure verdict agreeing at each point.
// --------------------------------------------------------------------------
void criterion5() {
  Timer t;
  bool ok = true;
  std::string detail;
  struct Pt {
    const char* lattice;
    const char* a1;
    const char* a2;
    const char* a3;
    const char* expectCase;
  };
  const std::vector<Pt> suite = {
      {"D", "0", "0", "0", "D(i)(a)"},
      {"D", "1/8", "1/8", "0", "D(i)(b)"},
      {"D", "1/8", "0", "1/8", "D(i)(b)"},
      {"D", "0", "1/8", "3/8", "D(i)(b)"},
      {"D", "1/4", "1/4", "1/4", "D(ii)(a)"},
      {"D", "1/4", "0", "0", "D(ii)(b)"},
      {"D", "0", "1/4", "0", "D(ii)(b)"},
      {"D", "0", "0", "1/4", "D(ii)(b)"},
      {"D", "0", "1/3", "1/3", "D(iii)"},
      {"D", "0", "2/3", "2/3", "D(iii)"},
      {"D", "1/3", "0", "2/3", "D(iv)"},
      {"D", "1/3", "2/3", "0", "D(v)"},
      {"D", "2/3", "1/3", "0", "D(v)"},
      {"D", "1/4", "1/4", "1/2", "D(v)"},
      {"D", "1/16", "1/16", "1/4", "D(full)"},
      {"D", "1/8", "1/16", "5/16", "D(full)"},
      {"D", "1/8", "0", "0", "D(full)"},
      {"D", "0", "1/8", "0", "D(full)"},
      {"D", "1/3", "0", "0", "D(full)"},
      {"G", "0", "0", "0", "G(ii)"},
      {"G", "1/8", "1/8", "1/8", "G(i)"},
      {"G", "1/8", "0", "0", "G(i)"},
      {"G", "1/8", "3/8", "1/2", "G(i)"},
      {"G", "1/2", "1/2", "0", "G(iii)"},
      {"G", "1/4", "3/4", "0", "G(iii)"},
      {"G", "1/8", "1/8", "3/4", "G(iii)"},
  };
  int agreeCount = 0;
  int caseCount = 0;
  try {
    for (const auto& p : suite) {
      const std::array<Rational, 3> a = {Rational::parse(p.a1), Rational::parse(p.a2),
                                         Rational::parse(p.a3)};
      const PointClassification pc = classify_point(p.lattice, a);
      const bool caseOk = pc.theorem.caseLabel == p.expectCase;
      if (caseOk) ++caseCount;
      if (pc.agree) ++agreeCount;
      std::ostringstream os;
      os << p.lattice << " (" << p.a1 << "," << p.a2 << "," << p.a3 << ") "
         << pc.theorem.caseLabel << " " << algebra_class_name(pc.numeric) << " "
         << pc.closureDim << "/" << pc.referenceFullDim << " "
         << (pc.agree && caseOk ? "agree" : "MISMATCH");
      note(os.str());
    }
    ok = agreeCount == static_cast<int>(suite.size()) &&
         caseCount == static_cast<int>(suite.size()) && t.seconds() < 900.0;
    std::ostringstream os;
    os << agreeCount << "/" << suite.size()
       << " points: observed closure verdict agrees with the predicted case";
    detail = os.str();
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  report(5, ok, detail, t.seconds());
}

// --------------------------------------------------------------------------
// 6. Fermionic structure of the D case (ii)(a) point: the graph identities,
//    the proper closure and the E12 exclusion.
// --------------------------------------------------------------------------
void criterion6() {
  Timer t;
  bool ok = true;
  std::string detail;
  try {
    const FermionicCheck fc =
        structure_check_fermionic_D({Rational(1, 4), Rational(1, 4), Rational(1, 4)});
    const bool members = fc.resPauli < 1e-8 && fc.resU < 1e-8 && fc.resV < 1e-8 &&
                         fc.resW < 1e-8 && fc.worstGraphResidual < 1e-8;
    const bool proper = fc.closureDim < fc.referenceFullDim;
    const bool exclusion = fc.e12Residual > 0.1;
    ok = fc.pass && members && proper && exclusion && t.seconds() < 60.0;
    std::ostringstream os;
    os << "graph membership residual " << fc.worstGraphResidual << ", proper closure "
       << fc.closureDim << "/" << fc.referenceFullDim << ", E12 exclusion residual "
       << fc.e12Residual;
    detail = os.str();
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  report(6, ok, detail, t.seconds());
}

// --------------------------------------------------------------------------
// 7. Family structure identities for cases (iii), (iv) and (v): the squared
//    generator identities and commutation with the represented torus.
// --------------------------------------------------------------------------
void criterion7() {
  Timer t;
  bool ok = true;
  std::string detail;
  try {
    const struct {
      const char* which;
      std::array<Rational, 3> angles;
    } rows[] = {
        {"iii", {Rational(0), Rational(1, 3), Rational(1, 3)}},
        {"iv", {Rational(1, 3), Rational(0), Rational(2, 3)}},
        {"v", {Rational(1, 3), Rational(2, 3), Rational(0)}},
    };
    double worst = 0.0;
    bool all = true;
    for (const auto& row : rows) {
      const FamilyCheck fc = structure_check_family(row.which, row.angles);
      worst = std::max({worst, fc.resASquare, fc.resBSquare, fc.resCommute});
      if (!(fc.resASquare < 1e-12 && fc.resBSquare < 1e-12 && fc.resCommute < 1e-12 && fc.pass))
        all = false;
      note(std::string("case ") + row.which + ": A^2 " + std::to_string(fc.resASquare) +
           ", B^2 " + std::to_string(fc.resBSquare) + ", commute " +
           std::to_string(fc.resCommute) + (fc.pass ? " pass" : " FAIL"));
    }
    ok = all && t.seconds() < 60.0;
    std::ostringstream os;
    os << "family identities for (iii), (iv), (v) hold with worst residual " << worst;
    detail = os.str();
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  report(7, ok, detail, t.seconds());
}

// --------------------------------------------------------------------------
// 8. P butterfly with denominators up to 13 against a directly assembled
//    Hofstadter-style oracle, flux reflection symmetry, and the band bound.
// --------------------------------------------------------------------------
Eigen::MatrixXcd oracle_p_matrix(int num, int den, const std::array<double, 3>& turns) {
  // Axis-12 P Harper operator assembled from scratch: the first generator is
  // the clock diagonal, the second hops one site down, the third is scalar.
  const int N = den;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(N, N);
  const std::complex<double> hop =
      std::polar(1.0, 2.0 * M_PI * turns[1]);
  for (int j = 0; j < N; ++j) {
    h(j, j) += 2.0 * std::cos(2.0 * M_PI * (double(num) * j / N + turns[0]));
    h(j, j) += 2.0 * std::cos(2.0 * M_PI * turns[2]);
    h(j, (j + N - 1) % N) += hop;
    h((j + N - 1) % N, j) += std::conj(hop);
  }
  return h;
}

void criterion8() {
  Timer t;
  bool ok = true;
  std::string detail;
  try {
    const int maxDen = 13;
    const ButterflyResult res = butterfly("P", 12, maxDen, 8);
    double worstOracle = 0.0;
    double worstMirror = 0.0;
    bool bandOk = true;
    auto concatenated = [](const ButterflyFlux& bf) {
      std::vector<double> v;
      for (const auto& s : bf.samples)
        v.insert(v.end(), s.eigenvalues.begin(), s.eigenvalues.end());
      std::sort(v.begin(), v.end());
      return v;
    };
    for (const auto& bf : res.fluxes) {
      if (bf.flux.den > maxDen) throw std::runtime_error("flux denominator exceeds 13");
      if (bf.bands.size() > static_cast<std::size_t>(bf.flux.den)) bandOk = false;
      const int num = static_cast<int>(((bf.flux.num % bf.flux.den) + bf.flux.den) % bf.flux.den);
      const int den = static_cast<int>(bf.flux.den);
      for (const auto& s : bf.samples) {
        const Eigen::MatrixXcd h = oracle_p_matrix(num, den, s.twistTurns);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
        for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
          worstOracle = std::max(
              worstOracle, std::abs(s.eigenvalues[i] - es.eigenvalues()[static_cast<int>(i)]));
      }
      const Rational mirror = (Rational(1) - bf.flux).mod1();
      for (const auto& other : res.fluxes) {
        if (!(other.flux.mod1() == mirror)) continue;
        const std::vector<double> a = concatenated(bf);
        const std::vector<double> b = concatenated(other);
        if (a.size() != b.size()) throw std::runtime_error("mirror flux sample count mismatch");
        for (std::size_t i = 0; i < a.size(); ++i)
          worstMirror = std::max(worstMirror, std::abs(a[i] - b[i]));
      }
    }
    ok = worstOracle < 1e-10 && worstMirror < 1e-10 && bandOk && t.seconds() < 300.0;
    std::ostringstream os;
    os << res.fluxes.size() << " fluxes: oracle deviation " << worstOracle
       << ", reflection deviation " << worstMirror << ", band count within the flux denominator";
    detail = os.str();
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  report(8, ok, detail, t.seconds());
}

// --------------------------------------------------------------------------
// 9. Randomized representation constructions: commutation and unitarity at
//    1e-12 for 500 draws, and N = 1 representations reproduce the Bloch
//    evaluation.
// --------------------------------------------------------------------------
void criterion9() {
  Timer t;
  bool ok = true;
  std::string detail;
  try {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> turn(0.0, 1.0);
    double worstRep = 0.0;
    int built = 0;
    for (int i = 0; i < 300; ++i) {
      std::uniform_int_distribution<int> Ndist(1, 5);
      const int N = Ndist(rng);
      std::uniform_int_distribution<int> p(0, N - 1);
      const RationalSkew s{N, p(rng), p(rng), p(rng)};
      const TorusRep rep = general_rep(s, twist_from_turns({turn(rng), turn(rng), turn(rng)}));
      const std::array<Rational, 3> angles = {Rational(s.p12, N), Rational(s.p13, N),
                                              Rational(s.p23, N)};
      worstRep = std::max({worstRep, commutation_residual(rep.gen, angles),
                           unitarity_residual(rep.gen)});
      ++built;
    }
    const int axes[3] = {12, 13, 23};
    for (int i = 0; i < 200; ++i) {
      std::uniform_int_distribution<int> Ndist(1, 8);
      const int N = Ndist(rng);
      std::uniform_int_distribution<int> p(0, N - 1);
      std::uniform_int_distribution<int> axpick(0, 2);
      const int axis = axes[axpick(rng)];
      RationalSkew s{N, 0, 0, 0};
      if (axis == 12) s.p12 = p(rng);
      if (axis == 13) s.p13 = p(rng);
      if (axis == 23) s.p23 = p(rng);
      const TorusRep rep = axis_rep(s, axis, twist_from_turns({turn(rng), turn(rng), turn(rng)}));
      const std::array<Rational, 3> angles = {Rational(s.p12, N), Rational(s.p13, N),
                                              Rational(s.p23, N)};
      worstRep = std::max({worstRep, commutation_residual(rep.gen, angles),
                           unitarity_residual(rep.gen)});
      ++built;
    }

    double worstBloch = 0.0;
    const std::array<Rational, 3> zero = {Rational(0), Rational(0), Rational(0)};
    for (const char* lat : {"P", "D", "G"}) {
      const HarperModel model = harper_model(lat);
      for (int i = 0; i < 10; ++i) {
        const std::array<double, 3> turns = {turn(rng), turn(rng), turn(rng)};
        const HarperRep hr = harper_rep(model, zero, twist_from_turns(turns));
        if (hr.rep.dim != 1) throw std::runtime_error("zero-field representation is not scalar");
        const Character angle = {2.0 * M_PI * turns[0], 2.0 * M_PI * turns[1],
                                 2.0 * M_PI * turns[2]};
        worstBloch = std::max(worstBloch,
                              (hr.H - bloch_matrix(model, angle)).norm());
      }
    }
    ok = built == 500 && worstRep < 1e-12 && worstBloch < 1e-12 && t.seconds() < 60.0;
    std::ostringstream os;
    os << built << " randomized representations, worst relation residual " << worstRep
       << "; scalar representations match Bloch evaluation to " << worstBloch;
    detail = os.str();
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  report(9, ok, detail, t.seconds());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-nct-binary>\n");
    return 2;
  }
  const std::string nct = argv[1];
  const fs::path scratch =
      fs::temp_directory_path() / ("nct-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  criterion1();
  criterion2(nct, scratch);
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();

  std::printf("%s\n", g_allPass ? "ALL ACCEPTANCE CRITERIA PASS" : "ACCEPTANCE FAILURES PRESENT");
  return g_allPass ? 0 : 1;
}
