#include "cli.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "hodisc/error.hpp"
#include "hodisc/genmat.hpp"
#include "hodisc/haar.hpp"
#include "hodisc/io.hpp"
#include "hodisc/netquality.hpp"
#include "hodisc/norms.hpp"
#include "hodisc/parallel.hpp"
#include "hodisc/points.hpp"
#include "hodisc/studies.hpp"

#ifndef HODISC_VERSION
#define HODISC_VERSION "0.0.0"
#endif

namespace hodisc::cli {

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "' for hashing");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256: digest initialisation failed");
  }
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return hex.str();
}

namespace {

std::ifstream open_input(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw ValidationError("cannot open input file '" + path + "'");
  return in;
}

DyadicPointSet load_points(const std::string& path) {
  std::ifstream in = open_input(path, true);
  return read_points(in);
}

GeneratingMatrixSet load_genmat(const std::string& path) {
  std::ifstream in = open_input(path);
  return read_genmat(in);
}

// Collects what a subcommand read and wrote, then emits the sidecar manifest.
class Run {
 public:
  Run(const CLI::App& sub, std::ostream& out) : sub_(sub), out_(out), start_(std::chrono::steady_clock::now()) {}

  void input(const std::string& path) { inputs_.push_back(path); }

  /// Writes `text` to the output path, or to stdout when the path is empty.
  void emit(const std::string& path, const std::string& text, bool binary = false) {
    if (path.empty()) {
      out_ << text;
      return;
    }
    std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
    if (!f) throw ValidationError("cannot open output file '" + path + "'");
    f << text;
    f.close();
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
    outputs_.push_back(path);
    manifest_path_ = path + ".manifest.json";
  }

  void also_output(const std::string& path) { outputs_.push_back(path); }

  void finish() const {
    if (manifest_path_.empty()) return;
    Json params = Json::object();
    for (const CLI::Option* opt : sub_.get_options()) {
      if (opt->count() == 0 || opt->get_name() == "--help") continue;
      const auto& res = opt->results();
      std::string name = opt->get_name();
      while (!name.empty() && name.front() == '-') name.erase(name.begin());
      if (res.empty() || (res.size() == 1 && res[0] == "true" && opt->get_expected_max() == 0))
        params[name] = true;
      else if (res.size() == 1)
        params[name] = res[0];
      else
        params[name] = res;
    }
    Json inputs = Json::object(), outputs = Json::object();
    for (const auto& p : inputs_) inputs[p] = sha256_file(p);
    for (const auto& p : outputs_) outputs[p] = sha256_file(p);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    Json m{{"tool", "hodisc"},
           {"version", HODISC_VERSION},
           {"subcommand", sub_.get_name()},
           {"parameters", params},
           {"threads", thread_count()},
           {"inputs", inputs},
           {"outputs", outputs},
           {"wall_time_seconds", wall}};
    std::ofstream f(manifest_path_);
    if (!f) throw ValidationError("cannot write manifest '" + manifest_path_ + "'");
    f << m.dump(2) << '\n';
  }

 private:
  const CLI::App& sub_;
  std::ostream& out_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> inputs_, outputs_;
  std::string manifest_path_;
};

struct NormArgs {
  std::string kind = "l2";
  std::string method;
  double p = 2, q = 2, s = 0, beta = 2;
  int depth = -1;
  int box_limit = -1;
  int resolution = 256;
  std::vector<double> p_grid;
  std::string arithmetic = "auto";

  void add_to(CLI::App* app, const std::string& kind_flag) {
    app->add_option(kind_flag, kind, "Norm kind: l2, lp, star, bmo, d0, besov, triebel, orlicz")
        ->required();
    app->add_option("--method", method, "L2 route: warnock (default) or parseval");
    app->add_option("--p", p, "Integrability p")->capture_default_str();
    app->add_option("--q", q, "Summability q (Besov, Triebel)")->capture_default_str();
    app->add_option("--s", s, "Smoothness s (Besov, Triebel)")->capture_default_str();
    app->add_option("--beta", beta, "Orlicz exponent beta")->capture_default_str();
    app->add_option("--depth", depth, "BMO test-box depth (default min(J, ceil(ld N)))");
    app->add_option("--box-limit", box_limit, "Haar table box limit J (default: effective precision)");
    app->add_option("--resolution", resolution, "Grid resolution per axis for Lp/Orlicz")
        ->capture_default_str();
    app->add_option("--p-grid", p_grid, "Orlicz p grid (default 2,4,...,4*2^ceil(ld ld N))")
        ->delimiter(',');
    app->add_option("--arithmetic", arithmetic, "auto, exact or float")
        ->check(CLI::IsMember({"auto", "exact", "float"}))
        ->capture_default_str();
  }

  NormSpec spec() const {
    NormSpec sp;
    sp.kind = parse_norm_kind(kind);
    sp.method = method;
    sp.p = p;
    sp.q = q;
    sp.s = s;
    sp.beta = beta;
    if (depth >= 0) sp.depth = depth;
    if (box_limit >= 0) sp.box_limit = box_limit;
    sp.resolution = resolution;
    sp.p_grid = p_grid;
    sp.arithmetic = arithmetic == "exact" ? Arithmetic::exact
                    : arithmetic == "float" ? Arithmetic::floating
                                            : Arithmetic::automatic;
    return sp;
  }
};

int run(CLI::App& app, std::ostream& out, std::ostream& err, int argc, const char* const* argv) {
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores; env HODISC_THREADS)");
  app.set_version_flag("--version", HODISC_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  // genmat
  std::string g_kind, g_out;
  std::size_t g_dim = 1, g_cols = 0, g_rows = 0;
  CLI::App* genmat = app.add_subcommand("genmat", "Write generating matrices");
  genmat->add_option("--kind", g_kind, "identity, tezuka or tezuka-interlaced")->required();
  genmat->add_option("--dim", g_dim, "Dimension d")->required();
  genmat->add_option("--cols", g_cols, "Column count n")->required();
  genmat->add_option("--rows", g_rows, "Row precision q (default n, or 2n when interlaced)");
  genmat->add_option("--out", g_out, "Output file (default stdout)");

  // points
  std::string p_genmat, p_format = "csv", p_out;
  std::size_t p_count = 0;
  std::uint64_t p_start = 0;
  CLI::App* points = app.add_subcommand("points", "Generate sequence points");
  points->add_option("--genmat", p_genmat, "Generating matrix file")->required();
  points->add_option("--count", p_count, "Number of points N")->required();
  points->add_option("--start", p_start, "First sequence index")->capture_default_str();
  points->add_option("--format", p_format, "csv or binary")
      ->check(CLI::IsMember({"csv", "binary"}))
      ->capture_default_str();
  points->add_option("--out", p_out, "Output file (default stdout)");

  // tvalue
  std::string t_genmat, t_out;
  int t_alpha = 1;
  std::size_t t_n = 0, t_nmax = 0;
  int t_t = -1;
  bool t_sequence = false;
  CLI::App* tvalue = app.add_subcommand("tvalue", "Minimal order-alpha t-value");
  tvalue->add_option("--genmat", t_genmat, "Generating matrix file")->required();
  tvalue->add_option("--alpha", t_alpha, "Order 1 or 2")->check(CLI::IsMember({1, 2}))->capture_default_str();
  tvalue->add_option("--n", t_n, "Net size exponent n");
  tvalue->add_flag("--sequence", t_sequence, "Check the sequence property for n <= nmax");
  tvalue->add_option("--nmax", t_nmax, "Largest n for --sequence");
  tvalue->add_option("--t", t_t, "Candidate t for --sequence (default: search the minimum)");
  tvalue->add_option("--out", t_out, "Output file (default stdout)");

  // haar
  std::string h_points, h_out;
  int h_box = -1;
  CLI::App* haar = app.add_subcommand("haar", "Exact Haar coefficient table");
  haar->add_option("--points", h_points, "Point file (csv or binary)")->required();
  haar->add_option("--box-limit", h_box, "Box limit J (default: precision bits)");
  haar->add_option("--out", h_out, "Output CSV (default stdout)");

  // norm
  std::string n_points, n_haar, n_out, n_csv;
  NormArgs n_args;
  CLI::App* norm = app.add_subcommand("norm", "Evaluate a discrepancy norm");
  norm->add_option("--points", n_points, "Point file (csv or binary)")->required();
  norm->add_option("--haar", n_haar, "Precomputed Haar table CSV");
  n_args.add_to(norm, "--kind");
  norm->add_option("--emit-csv", n_csv, "Append a CSV row to this file");
  norm->add_option("--out", n_out, "Output JSON (default stdout)");

  // study
  std::string s_genmat, s_out;
  NormArgs s_args;
  int s_nmin = 4, s_nmax = 12;
  CLI::App* study = app.add_subcommand("study", "Rate-normalised norms over N = 2^nmin..2^nmax");
  study->add_option("--genmat", s_genmat, "Generating matrix file")->required();
  s_args.add_to(study, "--norm");
  study->add_option("--nmin", s_nmin, "Smallest exponent")->capture_default_str();
  study->add_option("--nmax", s_nmax, "Largest exponent")->capture_default_str();
  study->add_option("--out", s_out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* shown = &app;
    for (const CLI::App* sub : app.get_subcommands()) shown = sub;
    err << shown->help();
    return 2;
  }
  if (app.count("--threads") > 0) set_thread_count(threads);

  if (genmat->parsed()) {
    Run r(*genmat, out);
    const auto kind = parse_genmat_kind(g_kind);
    require(g_cols >= 1, "genmat: --cols must be >= 1");
    const auto g = make_generating_matrices(
        kind, g_dim, g_cols, g_rows > 0 ? std::optional<std::size_t>(g_rows) : std::nullopt);
    std::ostringstream s;
    write_genmat(s, g);
    r.emit(g_out, s.str());
    r.finish();
  } else if (points->parsed()) {
    Run r(*points, out);
    r.input(p_genmat);
    const auto g = load_genmat(p_genmat);
    const auto pts = prefix(g, p_count, p_start);
    std::ostringstream s;
    if (p_format == "csv")
      write_points_csv(s, pts);
    else
      write_points_binary(s, pts);
    r.emit(p_out, s.str(), p_format == "binary");
    r.finish();
  } else if (tvalue->parsed()) {
    Run r(*tvalue, out);
    r.input(t_genmat);
    const auto g = load_genmat(t_genmat);
    Json j;
    if (t_sequence) {
      require(t_nmax >= 1, "tvalue: --sequence needs --nmax >= 1");
      if (t_t >= 0) {
        j = to_json(is_order_alpha_sequence_prefix(g, t_nmax, t_alpha, t_t), t_nmax, t_alpha, t_t);
      } else {
        const int t = minimal_sequence_t(g, t_nmax, t_alpha);
        j = to_json(is_order_alpha_sequence_prefix(g, t_nmax, t_alpha, t), t_nmax, t_alpha, t);
        j["minimal"] = true;
      }
    } else {
      require(t_n >= 1, "tvalue: --n must be >= 1");
      j = to_json(minimal_t(g, t_n, t_alpha));
    }
    r.emit(t_out, j.dump(2) + "\n");
    r.finish();
  } else if (haar->parsed()) {
    Run r(*haar, out);
    r.input(h_points);
    const auto pts = load_points(h_points);
    const auto table = build_table(pts, h_box >= 0 ? std::optional<int>(h_box) : std::nullopt);
    std::ostringstream s;
    write_haar_csv(s, table);
    r.emit(h_out, s.str());
    r.finish();
  } else if (norm->parsed()) {
    Run r(*norm, out);
    r.input(n_points);
    const auto pts = load_points(n_points);
    std::optional<HaarTable> table;
    if (!n_haar.empty()) {
      r.input(n_haar);
      std::ifstream in = open_input(n_haar);
      table = read_haar_csv(in);
    }
    NormReport lower;
    const NormSpec spec = n_args.spec();
    const NormReport rep = evaluate_norm(pts, spec, table ? &*table : nullptr, &lower);
    Json j = to_json(rep);
    if (spec.kind == NormKind::triebel_bracket) j = Json{{"lower", to_json(lower)}, {"upper", j}};
    r.emit(n_out, j.dump(2) + "\n");
    if (!n_csv.empty()) {
      const bool fresh = !std::filesystem::exists(n_csv) || std::filesystem::file_size(n_csv) == 0;
      std::ofstream f(n_csv, std::ios::app);
      if (!f) throw ValidationError("cannot open '" + n_csv + "' for appending");
      if (fresh) f << norm_csv_header << '\n';
      if (spec.kind == NormKind::triebel_bracket) f << norm_csv_row(lower) << '\n';
      f << norm_csv_row(rep) << '\n';
      f.close();
      r.also_output(n_csv);
    }
    r.finish();
  } else if (study->parsed()) {
    Run r(*study, out);
    r.input(s_genmat);
    const auto g = load_genmat(s_genmat);
    const auto rows = scaling_study(g, s_args.spec(), dyadic_counts(s_nmin, s_nmax));
    std::ostringstream s;
    write_study_csv(s, rows);
    r.emit(s_out, s.str());
    r.finish();
  }
  return 0;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"hodisc: digital sequences, Haar coefficients and discrepancy norms", "hodisc"};
  try {
    return run(app, out, err, argc, argv);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"hodisc"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace hodisc::cli
