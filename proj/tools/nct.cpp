/// nct: command-line front end of the nctorus library.
///
/// Subcommands
///   lattice show   dump a lattice specification (builtin or from --spec)
///   bloch scan     grid scan of the zero-field spectrum for degeneracies
///   bloch bands    spectra along the standard character path G-X-M-R-G
///   butterfly      flux sweep of the Harper spectrum (Hofstadter butterfly)
///   classify       closure verdicts at exact parameter points vs. the case
///                  analysis; nonzero exit if any point disagrees
///   verify         symbolic identity checks (X3, X6, phase identities)
///
/// Artifacts are deterministic: identical configuration produces byte-wise
/// identical output, except for an optional timestamp (suppressed by
/// --no-timestamp).  Every artifact embeds the configuration and its hash.
/// A run with --out DIR also writes DIR/config.json, which --config accepts
/// to reproduce the run; explicit command-line flags override file values.
///
/// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
/// 4 verification mismatch (failed identity check or classify disagreement).

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <nctorus/nctorus.hpp>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitVerify = 4;

// ---------------------------------------------------------------------------
// Run configuration (mirrors the command-line flags; round-trips via JSON)
// ---------------------------------------------------------------------------

struct RunConfig {
  std::string command;
  std::string lattice = "P";
  std::string specPath;             // --spec
  int grid = 32;
  std::string tol;                  // verbatim text so configs round-trip losslessly
  std::vector<std::string> flux;    // exact rationals "p/N"
  int axis = 12;
  int maxDen = 8;
  int twists = 8;
  std::vector<std::string> points;  // classify points, verbatim
  std::string out;
  unsigned seed = 42;
  bool timestamp = true;
};

nct::JsonValue config_json(const RunConfig& c) {
  using nct::JsonValue;
  JsonValue j = JsonValue::object();
  j.set("command", JsonValue::str(c.command));
  j.set("lattice", JsonValue::str(c.lattice));
  j.set("spec", c.specPath.empty() ? JsonValue::null() : JsonValue::str(c.specPath));
  j.set("grid", JsonValue::integer(c.grid));
  j.set("tol", JsonValue::str(c.tol));
  JsonValue flux = JsonValue::array();
  for (const auto& f : c.flux) flux.push(JsonValue::str(f));
  j.set("flux", std::move(flux));
  j.set("axis", JsonValue::integer(c.axis));
  j.set("maxden", JsonValue::integer(c.maxDen));
  j.set("twists", JsonValue::integer(c.twists));
  JsonValue pts = JsonValue::array();
  for (const auto& p : c.points) pts.push(JsonValue::str(p));
  j.set("points", std::move(pts));
  j.set("out", c.out.empty() ? JsonValue::null() : JsonValue::str(c.out));
  j.set("seed", JsonValue::integer(static_cast<long long>(c.seed)));
  j.set("timestamp", JsonValue::boolean(c.timestamp));
  return j;
}

/// Command-line option handles, used to decide which fields a config file may
/// still fill in (explicit flags always win).
struct OptionRefs {
  CLI::Option* lattice = nullptr;
  CLI::Option* spec = nullptr;
  CLI::Option* grid = nullptr;
  CLI::Option* tol = nullptr;
  CLI::Option* flux = nullptr;
  CLI::Option* axis = nullptr;
  CLI::Option* maxden = nullptr;
  CLI::Option* twists = nullptr;
  CLI::Option* point = nullptr;
  CLI::Option* out = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* noTimestamp = nullptr;
};

void apply_config_file(const std::string& path, const std::string& command, RunConfig& rc,
                       const OptionRefs& o) {
  std::ifstream is(path);
  if (!is) throw nct::config_error("cannot open config file '" + path + "'");
  nlohmann::json root;
  try {
    is >> root;
  } catch (const nlohmann::json::exception& e) {
    throw nct::config_error("config file '" + path + "': " + e.what());
  }
  // Accept both a bare flags object and a full artifact envelope.
  const nlohmann::json& f =
      root.contains("config") && root["config"].is_object() ? root["config"] : root;
  try {
    if (f.contains("command") && f["command"].get<std::string>() != command)
      throw nct::config_error("config file is for command '" +
                              f["command"].get<std::string>() + "', not '" + command + "'");
    auto unseen = [](CLI::Option* opt) { return opt == nullptr || opt->count() == 0; };
    if (unseen(o.lattice) && f.contains("lattice")) rc.lattice = f["lattice"].get<std::string>();
    if (unseen(o.spec) && f.contains("spec") && !f["spec"].is_null())
      rc.specPath = f["spec"].get<std::string>();
    if (unseen(o.grid) && f.contains("grid")) rc.grid = f["grid"].get<int>();
    if (unseen(o.tol) && f.contains("tol")) rc.tol = f["tol"].get<std::string>();
    if (unseen(o.flux) && f.contains("flux"))
      rc.flux = f["flux"].get<std::vector<std::string>>();
    if (unseen(o.axis) && f.contains("axis")) rc.axis = f["axis"].get<int>();
    if (unseen(o.maxden) && f.contains("maxden")) rc.maxDen = f["maxden"].get<int>();
    if (unseen(o.twists) && f.contains("twists")) rc.twists = f["twists"].get<int>();
    if (unseen(o.point) && f.contains("points"))
      rc.points = f["points"].get<std::vector<std::string>>();
    if (unseen(o.out) && f.contains("out") && !f["out"].is_null())
      rc.out = f["out"].get<std::string>();
    if (unseen(o.seed) && f.contains("seed")) rc.seed = f["seed"].get<unsigned>();
    if (unseen(o.noTimestamp) && f.contains("timestamp"))
      rc.timestamp = f["timestamp"].get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw nct::config_error("config file '" + path + "': " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Output plumbing
// ---------------------------------------------------------------------------

class Emitter {
 public:
  explicit Emitter(const RunConfig& rc)
      : rc_(rc), hash_(nct::config_hash(config_json(rc))), toFiles_(!rc.out.empty()) {
    if (toFiles_) {
      std::filesystem::create_directories(rc_.out);
      nct::JsonValue env = nct::artifact_envelope("config", config_json(rc_), rc_.timestamp);
      nct::write_text_file(path("config.json"), env.dump(2) + "\n");
      written_.push_back("config.json");
    }
  }

  const std::string& hash() const { return hash_; }
  bool toFiles() const { return toFiles_; }
  std::string path(const std::string& name) const { return rc_.out + "/" + name; }

  /// JSON artifact: to a file under --out, else to stdout.
  void json(const std::string& kind, const std::string& name, nct::JsonValue result) {
    nct::JsonValue root = nct::artifact_envelope(kind, config_json(rc_), rc_.timestamp);
    root.set("result", std::move(result));
    const std::string text = root.dump(2) + "\n";
    if (toFiles_) {
      nct::write_text_file(path(name), text);
      written_.push_back(name);
    } else {
      std::cout << text;
    }
  }

  /// CSV artifact (only written under --out); headerCols is the column line.
  void csv(const std::string& kind, const std::string& name, const std::string& headerCols,
           const std::string& rows) {
    if (!toFiles_) return;
    std::string text = "# artifact=" + kind + "\n# config_hash=" + hash_ + "\n";
    if (rc_.timestamp) text += "# timestamp=" + nct::iso_utc_now() + "\n";
    text += headerCols + "\n" + rows;
    nct::write_text_file(path(name), text);
    written_.push_back(name);
  }

  /// Human summary line; kept off stdout when the artifact itself goes there.
  void note(const std::string& line) {
    if (toFiles_) std::cout << line << "\n";
    else std::cerr << line << "\n";
  }

  void finish() {
    for (const auto& f : written_) std::cout << "wrote " << path(f) << "\n";
  }

 private:
  const RunConfig& rc_;
  std::string hash_;
  bool toFiles_;
  std::vector<std::string> written_;
};

double parse_positive_double(const std::string& text, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == nullptr || *end != '\0' || !(v > 0.0))
    throw nct::config_error(std::string(what) + " must be a positive number, got '" + text + "'");
  return v;
}

std::array<nct::Rational, 3> parse_rational_triple(const std::string& inner,
                                                   const std::string& what) {
  std::array<nct::Rational, 3> out;
  std::stringstream ss(inner);
  std::string item;
  int n = 0;
  while (std::getline(ss, item, ',')) {
    if (n >= 3) throw nct::config_error(what + " needs exactly 3 entries, got '" + inner + "'");
    out[n++] = nct::Rational::parse(item);
  }
  if (n != 3) throw nct::config_error(what + " needs exactly 3 entries, got '" + inner + "'");
  return out;
}

struct PointArg {
  std::array<nct::Rational, 3> angles{};
  bool hasQ = false;
  std::array<nct::Rational, 3> q{};
};

/// Parse "chi=(a1,a2,a3)[,q=(q1,q2,q3)]" (key is "phi" for the G lattice).
/// Values are exact rational angles in turns; floats are rejected.
PointArg parse_point(const std::string& key, const std::string& textIn) {
  std::string s;
  for (char c : textIn)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  PointArg out;
  bool haveMain = false;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t eq = s.find("=(", pos);
    const std::size_t close = eq == std::string::npos ? std::string::npos : s.find(')', eq);
    if (eq == std::string::npos || close == std::string::npos)
      throw nct::config_error("point syntax: " + key + "=(a1,a2,a3)[,q=(q1,q2,q3)], got '" +
                              textIn + "'");
    const std::string name = s.substr(pos, eq - pos);
    const std::string inner = s.substr(eq + 2, close - eq - 2);
    if (name == key) {
      out.angles = parse_rational_triple(inner, key);
      haveMain = true;
    } else if (name == "q") {
      out.q = parse_rational_triple(inner, "q");
      out.hasQ = true;
    } else {
      throw nct::config_error("unknown point key '" + name + "' (expected '" + key +
                              "' or 'q')");
    }
    pos = close + 1;
    if (pos < s.size()) {
      if (s[pos] != ',')
        throw nct::config_error("point syntax: expected ',' after ')' in '" + textIn + "'");
      ++pos;
    }
  }
  if (!haveMain) throw nct::config_error("point must specify " + key + "=(a1,a2,a3)");
  return out;
}

nct::JsonValue rational_array(const std::array<nct::Rational, 3>& a) {
  nct::JsonValue arr = nct::JsonValue::array();
  for (const auto& r : a) arr.push(nct::JsonValue::str(r.str()));
  return arr;
}

nct::JsonValue double_array(const std::array<double, 3>& a) {
  nct::JsonValue arr = nct::JsonValue::array();
  for (double v : a) arr.push(nct::JsonValue::real(v));
  return arr;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_lattice_show(const RunConfig& rc) {
  nct::LatticeSpec spec;
  if (!rc.specPath.empty()) {
    spec = nct::load_lattice_file(rc.specPath);
  } else {
    spec = nct::builtin_lattice(rc.lattice);
  }
  nct::validate_lattice(spec);
  Emitter em(rc);
  em.json("lattice", "lattice.json", nct::from_nlohmann(nct::lattice_to_json(spec)));
  em.note("lattice " + spec.name + ": " + std::to_string(spec.vertexCount) + " vertices, " +
          std::to_string(spec.edges.size()) + " edges");
  em.finish();
  return 0;
}

int cmd_bloch_scan(const RunConfig& rc) {
  if (!rc.specPath.empty())
    throw nct::config_error("bloch scan works on builtin lattices; use --lattice");
  const nct::HarperModel model = nct::harper_model(rc.lattice);
  const double tol = parse_positive_double(rc.tol, "--tol");
  const nct::LocusReport rep = nct::degeneracy_scan(model, rc.grid, tol, true);
  const bool isD = rc.lattice == "D";

  Emitter em(rc);
  std::ostringstream rows;
  for (const auto& p : rep.flagged) {
    nct::CsvRow row;
    row.add(p.angle[0]).add(p.angle[1]).add(p.angle[2]).add(p.minGap);
    if (isD) row.add(nct::d_locus_distance(p.angle));
    nct::write_csv_row(rows, row);
  }
  em.csv("bloch-scan", "bloch_scan.csv",
         isD ? "phi1,phi2,phi3,min_gap,locus_distance" : "phi1,phi2,phi3,min_gap", rows.str());

  nct::JsonValue clusters = nct::JsonValue::array();
  for (const auto& c : rep.clusters) {
    nct::JsonValue jc = nct::JsonValue::object();
    jc.set("seed", double_array(c.seed));
    jc.set("seed_gap", nct::JsonValue::real(c.seedGap));
    jc.set("refined", double_array(c.refined));
    jc.set("refined_gap", nct::JsonValue::real(c.refinedGap));
    jc.set("converged", nct::JsonValue::boolean(c.converged));
    nct::JsonValue mult = nct::JsonValue::array();
    for (int m : c.multiplicities) mult.push(nct::JsonValue::integer(m));
    jc.set("multiplicities", std::move(mult));
    jc.set("grid_points", nct::JsonValue::integer(c.gridPointCount));
    clusters.push(std::move(jc));
  }
  nct::JsonValue body = nct::JsonValue::object();
  body.set("grid", nct::JsonValue::integer(rep.gridN));
  body.set("tol", nct::JsonValue::real(rep.tol));
  body.set("flagged_count", nct::JsonValue::integer(static_cast<long long>(rep.flagged.size())));
  body.set("cluster_count", nct::JsonValue::integer(static_cast<long long>(rep.clusters.size())));
  body.set("clusters", std::move(clusters));
  em.json("bloch-scan", "bloch_scan.json", std::move(body));
  em.note("flagged " + std::to_string(rep.flagged.size()) + " grid points in " +
          std::to_string(rep.clusters.size()) + " clusters");
  em.finish();
  return 0;
}

int cmd_bloch_bands(const RunConfig& rc) {
  if (!rc.specPath.empty())
    throw nct::config_error("bloch bands works on builtin lattices; use --lattice");
  const nct::HarperModel model = nct::harper_model(rc.lattice);
  if (rc.grid < 2) throw nct::config_error("bloch bands needs --grid >= 2");

  const std::vector<std::pair<std::string, nct::Character>> nodes = {
      {"G", {0.0, 0.0, 0.0}}, {"X", {M_PI, 0.0, 0.0}},    {"M", {M_PI, M_PI, 0.0}},
      {"R", {M_PI, M_PI, M_PI}}, {"G2", {2.0 * M_PI, 2.0 * M_PI, 2.0 * M_PI}}};

  std::ostringstream rows;
  int bandCount = 0;
  double s = 0.0;
  nct::JsonValue nodeList = nct::JsonValue::array();
  for (std::size_t seg = 0; seg + 1 < nodes.size(); ++seg) {
    const nct::Character& a = nodes[seg].second;
    const nct::Character& b = nodes[seg + 1].second;
    const double len = std::sqrt((b[0] - a[0]) * (b[0] - a[0]) + (b[1] - a[1]) * (b[1] - a[1]) +
                                 (b[2] - a[2]) * (b[2] - a[2]));
    nct::JsonValue jn = nct::JsonValue::object();
    jn.set("label", nct::JsonValue::str(nodes[seg].first));
    jn.set("angle", double_array(a));
    jn.set("s", nct::JsonValue::real(s));
    nodeList.push(std::move(jn));
    const int steps = rc.grid;
    const bool last = seg + 2 == nodes.size();
    for (int i = 0; i < steps + (last ? 1 : 0); ++i) {
      const double t = double(i) / steps;
      const nct::Character x = {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]),
                                a[2] + t * (b[2] - a[2])};
      const nct::SpectrumPoint sp = nct::spectrum_at(model, x);
      bandCount = static_cast<int>(sp.eigenvalues.size());
      nct::CsvRow row;
      row.add(s + t * len).add(x[0]).add(x[1]).add(x[2]);
      for (double e : sp.eigenvalues) row.add(e);
      nct::write_csv_row(rows, row);
    }
    s += len;
  }
  {
    nct::JsonValue jn = nct::JsonValue::object();
    jn.set("label", nct::JsonValue::str(nodes.back().first));
    jn.set("angle", double_array(nodes.back().second));
    jn.set("s", nct::JsonValue::real(s));
    nodeList.push(std::move(jn));
  }

  std::string header = "s,phi1,phi2,phi3";
  for (int b = 1; b <= bandCount; ++b) header += ",e" + std::to_string(b);

  Emitter em(rc);
  em.csv("bloch-bands", "bloch_bands.csv", header, rows.str());
  nct::JsonValue body = nct::JsonValue::object();
  body.set("path", std::move(nodeList));
  body.set("samples_per_segment", nct::JsonValue::integer(rc.grid));
  body.set("band_count", nct::JsonValue::integer(bandCount));
  em.json("bloch-bands", "bloch_bands.json", std::move(body));
  em.note("band path G-X-M-R-G with " + std::to_string(rc.grid) + " samples per segment, " +
          std::to_string(bandCount) + " bands");
  em.finish();
  return 0;
}

int cmd_butterfly(const RunConfig& rc) {
  if (!rc.specPath.empty())
    throw nct::config_error("butterfly works on builtin lattices; use --lattice");
  if (rc.axis != 12 && rc.axis != 13 && rc.axis != 23)
    throw nct::config_error("--axis must be one of 12, 13, 23");
  if (rc.twists < 1) throw nct::config_error("--twists must be positive");

  nct::ButterflyResult res;
  if (!rc.flux.empty()) {
    std::vector<nct::Rational> fluxes;
    for (const auto& f : rc.flux) fluxes.push_back(nct::Rational::parse(f).mod1());
    res = nct::butterfly_over(rc.lattice, rc.axis, fluxes, rc.twists);
  } else {
    if (rc.maxDen < 1) throw nct::config_error("--maxden must be positive");
    res = nct::butterfly(rc.lattice, rc.axis, rc.maxDen, rc.twists);
  }

  Emitter em(rc);
  std::ostringstream rows;
  for (const auto& bf : res.fluxes)
    for (const auto& sample : bf.samples)
      for (std::size_t lev = 0; lev < sample.eigenvalues.size(); ++lev) {
        nct::CsvRow row;
        row.add(bf.flux.num).add(bf.flux.den).add(sample.twistIndex)
            .add(static_cast<long long>(lev)).add(sample.eigenvalues[lev]);
        nct::write_csv_row(rows, row);
      }
  em.csv("butterfly", "butterfly.csv", "flux_num,flux_den,twist_index,level,eigenvalue",
         rows.str());

  nct::JsonValue fluxList = nct::JsonValue::array();
  for (const auto& bf : res.fluxes) {
    nct::JsonValue jf = nct::JsonValue::object();
    jf.set("flux", nct::JsonValue::str(bf.flux.str()));
    jf.set("rep", nct::JsonValue::str(bf.kind == nct::RepKind::General ? "general"
                                                                       : "axis-aligned"));
    jf.set("dim", nct::JsonValue::integer(bf.dim));
    jf.set("samples", nct::JsonValue::integer(static_cast<long long>(bf.samples.size())));
    nct::JsonValue bands = nct::JsonValue::array();
    for (const auto& b : bf.bands) {
      nct::JsonValue jb = nct::JsonValue::array();
      jb.push(nct::JsonValue::real(b.lo));
      jb.push(nct::JsonValue::real(b.hi));
      bands.push(std::move(jb));
    }
    jf.set("bands", std::move(bands));
    fluxList.push(std::move(jf));
  }
  nct::JsonValue body = nct::JsonValue::object();
  body.set("lattice", nct::JsonValue::str(res.lattice));
  body.set("axis", nct::JsonValue::integer(res.axis));
  body.set("maxden", nct::JsonValue::integer(res.maxDen));
  body.set("twist_grid", nct::JsonValue::integer(res.twistGrid));
  body.set("flux_count", nct::JsonValue::integer(static_cast<long long>(res.fluxes.size())));
  body.set("fluxes", std::move(fluxList));
  em.json("butterfly", "butterfly.json", std::move(body));
  em.note("butterfly over " + std::to_string(res.fluxes.size()) + " fluxes (axis " +
          std::to_string(res.axis) + ")");
  em.finish();
  return 0;
}

int cmd_classify(const RunConfig& rc) {
  if (rc.lattice != "D" && rc.lattice != "G")
    throw nct::config_error("classification covers the D and G lattices");
  if (rc.points.empty())
    throw nct::config_error("classify needs at least one --point \"" +
                            std::string(rc.lattice == "D" ? "chi" : "phi") +
                            "=(a1,a2,a3)[,q=(q1,q2,q3)]\"");
  const std::string key = rc.lattice == "D" ? "chi" : "phi";
  const nct::HarperModel model = nct::harper_model(rc.lattice);

  nct::ClassifyOptions opt;
  opt.seed = rc.seed;
  opt.tol = parse_positive_double(rc.tol, "--tol");

  Emitter em(rc);
  nct::JsonValue pointList = nct::JsonValue::array();
  bool allAgree = true;
  for (const auto& text : rc.points) {
    const PointArg pa = parse_point(key, text);
    if (pa.hasQ) {
      const std::array<nct::Rational, 3> expect = nct::commutation_angles(model, pa.angles);
      for (int i = 0; i < 3; ++i)
        if (!(pa.q[i].mod1() == expect[i].mod1()))
          throw nct::config_error("point '" + text + "': q" + std::to_string(i + 1) + " is " +
                                  expect[i].mod1().str() + " at these angles, got " +
                                  pa.q[i].mod1().str());
    }
    const nct::PointClassification pc = nct::classify_point(rc.lattice, pa.angles, opt);
    allAgree = allAgree && pc.agree;

    nct::JsonValue jp = nct::JsonValue::object();
    jp.set("lattice", nct::JsonValue::str(pc.lattice));
    jp.set("params", rational_array(pc.angles));
    {
      nct::JsonValue js = nct::JsonValue::object();
      js.set("N", nct::JsonValue::integer(pc.skew.N));
      js.set("p12", nct::JsonValue::integer(pc.skew.p12));
      js.set("p13", nct::JsonValue::integer(pc.skew.p13));
      js.set("p23", nct::JsonValue::integer(pc.skew.p23));
      jp.set("skew", std::move(js));
    }
    jp.set("predicted", nct::JsonValue::str(pc.theorem.caseLabel));
    jp.set("predicted_class", nct::JsonValue::str(nct::algebra_class_name(pc.theorem.cls)));
    jp.set("observed", nct::JsonValue::str(nct::algebra_class_name(pc.numeric)));
    jp.set("closure_dim", nct::JsonValue::integer(pc.closureDim));
    jp.set("reference_full_dim", nct::JsonValue::integer(pc.referenceFullDim));
    jp.set("rep", nct::JsonValue::str(pc.kind == nct::RepKind::General ? "general"
                                                                       : "axis-aligned"));
    jp.set("rep_dim", nct::JsonValue::integer(pc.repDim));
    jp.set("harper_dim", nct::JsonValue::integer(pc.harperDim));
    jp.set("agree", nct::JsonValue::boolean(pc.agree));
    nct::JsonValue samples = nct::JsonValue::array();
    for (const auto& sm : pc.samples) {
      nct::JsonValue js = nct::JsonValue::object();
      js.set("twist", nct::JsonValue::str(sm.label));
      js.set("closure_dim", nct::JsonValue::integer(sm.closureDim));
      js.set("commutative", nct::JsonValue::boolean(sm.commutative));
      samples.push(std::move(js));
    }
    jp.set("twist_samples", std::move(samples));
    pointList.push(std::move(jp));

    em.note(rc.lattice + " (" + pc.angles[0].str() + "," + pc.angles[1].str() + "," +
            pc.angles[2].str() + ") predicted=" + pc.theorem.caseLabel + " [" +
            nct::algebra_class_name(pc.theorem.cls) + "] observed=" +
            nct::algebra_class_name(pc.numeric) + " closure=" + std::to_string(pc.closureDim) +
            "/" + std::to_string(pc.referenceFullDim) +
            " agree=" + (pc.agree ? "true" : "false"));
  }
  nct::JsonValue body = nct::JsonValue::object();
  body.set("all_agree", nct::JsonValue::boolean(allAgree));
  body.set("points", std::move(pointList));
  em.json("classify", "classify.json", std::move(body));
  em.finish();
  return allAgree ? 0 : kExitVerify;
}

int cmd_verify(const RunConfig& rc) {
  const nct::VerifyReport r3 = nct::verify_X3();
  const nct::VerifyReport r6 = nct::verify_X6();
  const nct::VerifyReport rp = nct::verify_phase_identities(rc.seed, 100, 1e-12);

  Emitter em(rc);
  nct::JsonValue checks = nct::JsonValue::array();
  bool allPass = true;
  for (const nct::VerifyReport* r : {&r3, &r6, &rp}) {
    allPass = allPass && r->pass;
    checks.push(nct::from_nlohmann(r->to_json()));
    em.note(r->check + ": " + (r->pass ? "pass" : "fail"));
  }
  nct::JsonValue body = nct::JsonValue::object();
  body.set("all_pass", nct::JsonValue::boolean(allPass));
  body.set("checks", std::move(checks));
  em.json("verify", "verify.json", std::move(body));
  em.finish();
  return allPass ? 0 : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nctorus command-line tool: lattice data, Bloch scans, butterfly sweeps, "
               "classification, and symbolic verification"};
  app.require_subcommand(1);

  RunConfig rc;
  std::string configPath;

  struct Leaf {
    CLI::App* cmd = nullptr;
    std::string name;
    std::string defaultTol = "1e-6";
    OptionRefs refs;
    int (*run)(const RunConfig&) = nullptr;
  };
  std::vector<Leaf> leaves;

  auto addCommon = [&](CLI::App* cmd, OptionRefs& o) {
    o.out = cmd->add_option("--out", rc.out, "output directory for artifacts");
    o.seed = cmd->add_option("--seed", rc.seed, "pseudo-random seed (default 42)");
    o.noTimestamp = cmd->add_flag_callback(
        "--no-timestamp", [&rc] { rc.timestamp = false; },
        "omit the timestamp field so outputs are byte-identical across runs");
    cmd->add_option("--config", configPath,
                    "JSON config file mirroring the flags; explicit flags override");
  };
  auto addLattice = [&](CLI::App* cmd, OptionRefs& o) {
    o.lattice = cmd->add_option("--lattice", rc.lattice, "builtin lattice: P, D or G")
                    ->check(CLI::IsMember({"P", "D", "G"}));
  };

  CLI::App* lat = app.add_subcommand("lattice", "lattice data");
  lat->require_subcommand(1);
  {
    Leaf leaf;
    leaf.cmd = lat->add_subcommand("show", "dump a lattice specification as JSON");
    leaf.name = "lattice show";
    leaf.run = &cmd_lattice_show;
    addLattice(leaf.cmd, leaf.refs);
    leaf.refs.spec =
        leaf.cmd->add_option("--spec", rc.specPath, "lattice specification JSON file");
    addCommon(leaf.cmd, leaf.refs);
    leaves.push_back(leaf);
  }

  CLI::App* bloch = app.add_subcommand("bloch", "zero-field Bloch theory");
  bloch->require_subcommand(1);
  {
    Leaf leaf;
    leaf.cmd = bloch->add_subcommand("scan", "grid scan for spectral degeneracies");
    leaf.name = "bloch scan";
    leaf.run = &cmd_bloch_scan;
    addLattice(leaf.cmd, leaf.refs);
    leaf.refs.grid = leaf.cmd->add_option("--grid", rc.grid, "grid points per angle (default 32)");
    leaf.refs.tol = leaf.cmd->add_option("--tol", rc.tol, "gap threshold for flagging (default 1e-6)");
    addCommon(leaf.cmd, leaf.refs);
    leaves.push_back(leaf);
  }
  {
    Leaf leaf;
    leaf.cmd = bloch->add_subcommand("bands", "spectra along the character path G-X-M-R-G");
    leaf.name = "bloch bands";
    leaf.run = &cmd_bloch_bands;
    addLattice(leaf.cmd, leaf.refs);
    leaf.refs.grid =
        leaf.cmd->add_option("--grid", rc.grid, "samples per path segment (default 32)");
    addCommon(leaf.cmd, leaf.refs);
    leaves.push_back(leaf);
  }

  {
    Leaf leaf;
    leaf.cmd = app.add_subcommand("butterfly", "Harper spectrum flux sweep");
    leaf.name = "butterfly";
    leaf.run = &cmd_butterfly;
    addLattice(leaf.cmd, leaf.refs);
    leaf.refs.flux = leaf.cmd
                         ->add_option("--flux", rc.flux,
                                      "exact fluxes p/N (comma-separated); default is the "
                                      "Farey sequence up to --maxden")
                         ->delimiter(',');
    leaf.refs.axis =
        leaf.cmd->add_option("--axis", rc.axis, "field plane: 12, 13 or 23 (default 12)");
    leaf.refs.maxden =
        leaf.cmd->add_option("--maxden", rc.maxDen, "Farey denominator bound (default 8)");
    leaf.refs.twists =
        leaf.cmd->add_option("--twists", rc.twists, "twist grid per flux (default 8)");
    addCommon(leaf.cmd, leaf.refs);
    leaves.push_back(leaf);
  }

  {
    Leaf leaf;
    leaf.cmd = app.add_subcommand(
        "classify", "closure verdicts at exact parameter points vs. the case analysis");
    leaf.name = "classify";
    leaf.defaultTol = "1e-8";
    leaf.run = &cmd_classify;
    addLattice(leaf.cmd, leaf.refs);
    leaf.refs.point = leaf.cmd->add_option(
        "--point", rc.points,
        "exact parameter point \"chi=(a1,a2,a3)[,q=(q1,q2,q3)]\" (\"phi=...\" for G); "
        "values are rational angles in turns, e.g. 1/2 for phase -1");
    leaf.refs.tol =
        leaf.cmd->add_option("--tol", rc.tol, "closure rank tolerance (default 1e-8)");
    addCommon(leaf.cmd, leaf.refs);
    leaves.push_back(leaf);
  }

  {
    Leaf leaf;
    leaf.cmd = app.add_subcommand("verify", "symbolic identity checks (X3, X6, phase identities)");
    leaf.name = "verify";
    leaf.run = &cmd_verify;
    addCommon(leaf.cmd, leaf.refs);
    leaves.push_back(leaf);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const Leaf* active = nullptr;
  for (const auto& leaf : leaves)
    if (leaf.cmd->parsed() &&
        (leaf.cmd->get_parent() == &app || leaf.cmd->get_parent()->parsed()))
      active = &leaf;
  if (active == nullptr) {
    std::cerr << "config error: no subcommand selected\n";
    return kExitConfig;
  }

  try {
    if (!configPath.empty()) apply_config_file(configPath, active->name, rc, active->refs);
    if (rc.tol.empty()) rc.tol = active->defaultTol;
    rc.command = active->name;
    return active->run(rc);
  } catch (const nct::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nct::verify_error& e) {
    std::cerr << "verification mismatch: " << e.what() << "\n";
    return kExitVerify;
  } catch (const nct::numeric_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
