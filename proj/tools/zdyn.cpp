// Command-line front end: ingest zero tables, locate fixed points, build and
// persist backward-orbit branches, fit spirals, emit statistics and figures,
// and run the acceptance suite.

#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "zetadyn/verify.hpp"

namespace fs = std::filesystem;
using namespace zetadyn;
using mp::Complex;
using mp::Real;

namespace {

struct ManifestIo {
  pipeline::RunConfig cfg;
  io::Manifest manifest;
  std::string path;

  explicit ManifestIo(const pipeline::RunConfig& c) : cfg(c), manifest(c.canonical()) {
    fs::create_directories(cfg.output_dir);
    path = cfg.output_dir + "/manifest.json";
    if (fs::exists(path)) {
      io::Manifest prev = io::Manifest::load(path);
      if (prev.config_hash() == manifest.config_hash()) manifest = prev;
      // a differing hash starts a fresh manifest; stale inputs are caught on use
    }
  }

  void require(const std::string& file) {
    io::Manifest prev = fs::exists(path) ? io::Manifest::load(path) : manifest;
    manifest.require_input(file, prev);
  }

  void produced(const std::string& file) { manifest.record_output(file); }
  void save() { manifest.save(path); }
  std::string tag() const {
    return std::string(io::kToolVersion) + " config=" + manifest.config_hash();
  }
};

PrecisionContext ctx_of(const pipeline::RunConfig& cfg) { return PrecisionContext::make(cfg.digits); }

int protect(const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

FunctionSpec parse_kind(const std::string& kind, long L) {
  if (kind == "zeta") return FunctionSpec::zeta();
  if (kind == "iter") return FunctionSpec::zeta_iter(L);
  if (kind == "fixmap") return FunctionSpec::iter_minus_identity(L);
  throw std::invalid_argument("unknown map kind: " + kind);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zeta-dynamics toolkit"};
  app.require_subcommand(1);

  pipeline::RunConfig cfg;
  long workers = 0;
  app.add_option("--workers", workers, "worker threads (0 = hardware)")->capture_default_str();
  if (const char* env = std::getenv("ZETADYN_OUT")) cfg.output_dir = env;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--digits", cfg.digits, "decimal digits of working precision");
    sub->add_option("--out", cfg.output_dir, "output directory")->capture_default_str();
  };

  // ingest-zeros
  auto* s_ingest = app.add_subcommand("ingest-zeros", "refine a plain-text ordinate table");
  add_common(s_ingest);
  s_ingest->add_option("--zeros", cfg.zero_table_path, "ordinate file, one per line")->required();
  long ingest_count = 0;
  s_ingest->add_option("--count", ingest_count, "how many ordinates to ingest (0 = all)");

  // find-psi
  auto* s_psi = app.add_subcommand("find-psi", "fixed points psi_rho_n paired with the zeros");
  add_common(s_psi);
  long n_max = 10;
  s_psi->add_option("--n-max", n_max, "largest n")->capture_default_str();

  // branch
  auto* s_branch = app.add_subcommand("branch", "build one backward-orbit branch");
  add_common(s_branch);
  long branch_n = 1, trivial_2n = 0, cycle_L = 0;
  double bcx = 0, bcy = 0, bside = 0;
  s_branch->add_option("--n", branch_n, "nontrivial zero index (root rho_n)")->capture_default_str();
  s_branch->add_option("--trivial-2n", trivial_2n, "anchor at psi_{-2n} instead of psi_rho_n");
  s_branch->add_option("--cycle-L", cycle_L, "anchor at an L-cycle located in --box-*");
  s_branch->add_option("--box-cx", bcx, "cycle search box center, real");
  s_branch->add_option("--box-cy", bcy, "cycle search box center, imaginary");
  s_branch->add_option("--box-side", bside, "cycle search box side");
  s_branch->add_option("--length", cfg.branch_length, "requested branch length")->capture_default_str();

  // fit
  auto* s_fit = app.add_subcommand("fit", "spiral fits for a stored branch");
  add_common(s_fit);
  std::string branch_file;
  s_fit->add_option("--branch", branch_file, "branch file")->required();
  s_fit->add_option("--c-offset", cfg.c_offset_override, "theta branch constant (0/1, -1 = auto)");

  // deviations
  auto* s_dev = app.add_subcommand("deviations", "deviation statistics for a stored branch");
  add_common(s_dev);
  s_dev->add_option("--branch", branch_file, "branch file")->required();
  long dev_n_index = 1;
  s_dev->add_option("--n-index", dev_n_index, "zero index n for the scaled statistics");
  s_dev->add_option("--beta", cfg.beta, "window size")->capture_default_str();
  s_dev->add_option("--c-offset", cfg.c_offset_override, "theta branch constant (0/1, -1 = auto)");

  // render-quadrant
  auto* s_quad = app.add_subcommand("render-quadrant", "Table-1 quadrant plot");
  add_common(s_quad);
  std::string kind = "zeta";
  long iter_L = 1, res = 96;
  double cx = 0, cy = 0, side = 120, radius = 10, shift_re = 0, shift_im = 0, alpha = 0;
  long max_iter = 40;
  s_quad->add_option("--kind", kind, "zeta | iter | fixmap");
  s_quad->add_option("--L", iter_L, "iterate count for iter/fixmap");
  s_quad->add_option("--cx", cx, "box center, real");
  s_quad->add_option("--cy", cy, "box center, imaginary");
  s_quad->add_option("--side", side, "box side length");
  s_quad->add_option("--res", res, "resolution in pixels");
  s_quad->add_option("--radius", radius, "rich/pale disk radius");
  s_quad->add_option("--shift-re", shift_re, "target shift, real part");
  s_quad->add_option("--shift-im", shift_im, "target shift, imaginary part");
  s_quad->add_option("--overlay-alpha", alpha, "blend over a basin plot (0 = off)");
  s_quad->add_option("--max-iter", max_iter, "basin iterations for the overlay");

  // render-basin
  auto* s_basin = app.add_subcommand("render-basin", "basin-of-attraction plot");
  add_common(s_basin);
  s_basin->add_option("--cx", cx, "box center, real");
  s_basin->add_option("--cy", cy, "box center, imaginary");
  s_basin->add_option("--side", side, "box side length");
  s_basin->add_option("--res", res, "resolution in pixels");
  s_basin->add_option("--max-iter", max_iter, "forward iteration budget");

  // render-everted
  auto* s_evert = app.add_subcommand("render-everted", "log-rescaled branch plot");
  add_common(s_evert);
  s_evert->add_option("--branch", branch_file, "branch file")->required();
  std::string chords = "zeta";
  s_evert->add_option("--chords", chords, "none | zeta | iterl");
  s_evert->add_option("--c-offset", cfg.c_offset_override, "theta branch constant");

  // rotation
  auto* s_rot = app.add_subcommand("rotation", "rotation-invariance discrepancy series");
  add_common(s_rot);
  s_rot->add_option("--branch", branch_file, "branch file")->required();
  double theta = 0.4487989505128276;  // pi / 7
  s_rot->add_option("--theta", theta, "rotation angle")->capture_default_str();

  // find-fixed-point
  auto* s_fp = app.add_subcommand("find-fixed-point", "cycle of zeta^L in a box");
  add_common(s_fp);
  long fp_L = 1;
  s_fp->add_option("--L", fp_L, "cycle length");
  s_fp->add_option("--cx", cx, "box center, real")->required();
  s_fp->add_option("--cy", cy, "box center, imaginary")->required();
  s_fp->add_option("--side", side, "box side")->required();

  // find-trivial
  auto* s_triv = app.add_subcommand("find-trivial", "real fixed point near a trivial zero");
  add_common(s_triv);
  long triv_n = 10;
  s_triv->add_option("--n", triv_n, "psi_{-2n} index (2n >= 20)")->required();

  // verify
  auto* s_verify = app.add_subcommand("verify", "acceptance suite");
  std::string suite = "fast";
  std::string zeros_path = "data/zeta_zeros.txt";
  std::string verify_out = "verify_out";
  s_verify->add_option("--suite", suite, "fast | full")->capture_default_str();
  s_verify->add_option("--zeros", zeros_path, "ordinate table")->capture_default_str();
  s_verify->add_option("--out", verify_out, "artifact directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  if (workers > 0) omp_set_num_threads(static_cast<int>(workers));

  if (s_ingest->parsed()) {
    return protect([&] {
      cfg.validate();
      ManifestIo m(cfg);
      auto ords = io::read_ordinates(cfg.zero_table_path);
      if (ords.empty()) std::cerr << "warning: empty ordinate table\n";
      if (ingest_count > 0 && ingest_count < static_cast<long>(ords.size()))
        ords.resize(ingest_count);
      auto zeros = pipeline::ingest_zeros(ords, ctx_of(cfg));
      std::string out = cfg.output_dir + "/zeros.txt";
      io::write_zero_table(zeros, cfg.digits, out, {m.tag()});
      m.produced(out);
      m.save();
      std::cout << "wrote " << out << " (" << zeros.size() << " zeros)\n";
    });
  }

  if (s_psi->parsed()) {
    return protect([&] {
      cfg.validate();
      ManifestIo m(cfg);
      std::string zeros_file = cfg.output_dir + "/zeros.txt";
      m.require(zeros_file);
      auto zeros = io::read_zero_table(zeros_file);
      auto psi = pipeline::find_psi_table(zeros, n_max, ctx_of(cfg));
      std::string out = cfg.output_dir + "/psi_table.txt";
      io::write_point_table(psi, cfg.digits, out, {m.tag()});
      m.produced(out);
      m.save();
      std::cout << "wrote " << out << " (" << psi.size() << " fixed points)\n";
    });
  }

  if (s_branch->parsed()) {
    return protect([&] {
      cfg.validate();
      ManifestIo m(cfg);
      PrecisionContext ctx = ctx_of(cfg);
      std::string zeros_file = cfg.output_dir + "/zeros.txt";
      m.require(zeros_file);
      auto zeros = io::read_zero_table(zeros_file);
      if (branch_n < 1 || branch_n > static_cast<long>(zeros.size()))
        throw std::invalid_argument("branch: --n outside the ingested zero table");
      orbit::Branch b;
      std::string name;
      if (cycle_L >= 2) {
        if (bside <= 0) throw std::invalid_argument("branch: --cycle-L needs --box-* options");
        auto cyc = rootfind::find_fixed_point(cycle_L, rootfind::Box{ctx.complex(bcx, bcy), bside}, ctx);
        b = pipeline::make_cycle_branch(zeros[branch_n - 1].rho, cyc, cfg.branch_length, ctx);
        name = "branch_rho" + std::to_string(branch_n) + "_cycle" + std::to_string(cycle_L) + ".txt";
      } else if (trivial_2n > 0) {
        Complex psi = rootfind::find_trivial_fixed_point(trivial_2n / 2, ctx);
        b = pipeline::make_branch(zeros[branch_n - 1].rho, psi, cfg.branch_length, ctx);
        name = "branch_rho" + std::to_string(branch_n) + "_trivial" + std::to_string(trivial_2n) + ".txt";
      } else {
        std::string psi_file = cfg.output_dir + "/psi_table.txt";
        m.require(psi_file);
        auto psis = io::read_point_table(psi_file);
        if (branch_n > static_cast<long>(psis.size()))
          throw std::invalid_argument("branch: psi table too short, rerun find-psi");
        b = pipeline::make_branch(zeros[branch_n - 1].rho, psis[branch_n - 1], cfg.branch_length, ctx);
        name = "branch_rho" + std::to_string(branch_n) + "_psi" + std::to_string(branch_n) + ".txt";
      }
      std::string out = cfg.output_dir + "/" + name;
      io::write_branch(b, out, {m.tag()});
      m.produced(out);
      m.save();
      std::cout << "wrote " << out << " (verified length " << b.verified_len << ")\n";
    });
  }

  if (s_fit->parsed()) {
    return protect([&] {
      cfg.validate();
      ManifestIo m(cfg);
      orbit::Branch b = io::read_branch(branch_file);
      auto fit = pipeline::fit_branch(b, cfg.c_offset_override);
      std::string out = cfg.output_dir + "/" + fs::path(branch_file).stem().string() + "_fit.csv";
      std::ofstream os(out);
      os << "# " << m.tag() << "\n";
      os << "model,param,value\n";
      os.precision(17);
      os << "log_linear,m," << fit.linear.m << "\nlog_linear,b," << fit.linear.b << "\n";
      os << "extended,a," << fit.extended.a << "\nextended,b," << fit.extended.b
         << "\nextended,c," << fit.extended.c << "\nextended,d," << fit.extended.d
         << "\nextended,log10_abs_c," << fit.extended.log10_abs_c << "\n";
      if (b.anchor.length() == 1 && mp::abs(b.anchor.elements[0].im()) < 0.5) {
        auto idx = spiralfit::fit_index_linear(b);
        os << "index_linear,m," << idx.m << "\nindex_linear,b," << idx.b << "\n";
      }
      os.close();
      m.produced(out);
      m.save();
      std::cout << "wrote " << out << "\n";
    });
  }

  if (s_dev->parsed()) {
    return protect([&] {
      cfg.validate();
      ManifestIo m(cfg);
      orbit::Branch b = io::read_branch(branch_file);
      long window = std::min<long>(b.length(), cfg.beta + 1);
      auto fit = pipeline::fit_branch(b, cfg.c_offset_override, window);
      auto dev = spiralfit::deviations(b, fit.linear, fit.series, dev_n_index, true);
      std::string out = cfg.output_dir + "/" + fs::path(branch_file).stem().string() + "_dev.csv";
      pipeline::write_stats_csv(fit.series, dev, out, {m.tag()});
      m.produced(out);
      m.save();
      std::printf("mean %.6g max %.6g mean* %.6g max* %.6g -> %s\n", dev.mean, dev.max,
                  dev.mean_scaled, dev.max_scaled, out.c_str());
    });
  }

  if (s_quad->parsed()) {
    return protect([&] {
      ManifestIo m(cfg);
      PrecisionContext rctx = PrecisionContext::make(render::kRenderDigits, 10);
      rootfind::Box box{rctx.complex(cx, cy), side};
      auto img = render::quadrant_plot(parse_kind(kind, iter_L), rctx.complex(shift_re, shift_im),
                                       box, res, radius, rctx);
      std::string out = cfg.output_dir + "/quadrant.ppm";
      if (alpha > 0) {
        auto basin = render::basin_plot(box, res, max_iter, rctx);
        render::write_ppm(render::overlay(basin, img, alpha), out, m.tag());
      } else {
        render::write_ppm(render::colorize(img), out, m.tag());
      }
      m.produced(out);
      m.save();
      std::cout << "wrote " << out << "\n";
    });
  }

  if (s_basin->parsed()) {
    return protect([&] {
      ManifestIo m(cfg);
      PrecisionContext rctx = PrecisionContext::make(render::kRenderDigits, 10);
      auto img = render::basin_plot(rootfind::Box{rctx.complex(cx, cy), side}, res, max_iter, rctx);
      std::string out = cfg.output_dir + "/basin.ppm";
      render::write_ppm(render::colorize(img), out, m.tag());
      m.produced(out);
      m.save();
      std::cout << "wrote " << out << "\n";
    });
  }

  if (s_evert->parsed()) {
    return protect([&] {
      ManifestIo m(cfg);
      orbit::Branch b = io::read_branch(branch_file);
      auto fit = pipeline::fit_branch(b, cfg.c_offset_override);
      render::ChordMode mode = chords == "none"    ? render::ChordMode::None
                               : chords == "iterl" ? render::ChordMode::IterLMap
                                                   : render::ChordMode::ZetaMap;
      auto spec = render::everted_plot(b, fit.series, mode);
      std::string base = cfg.output_dir + "/" + fs::path(branch_file).stem().string() + "_everted";
      render::stats_plot(spec, base);
      m.produced(base + ".ppm");
      m.produced(base + ".csv");
      m.save();
      std::cout << "wrote " << base << ".ppm/.csv\n";
    });
  }

  if (s_rot->parsed()) {
    return protect([&] {
      cfg.validate();
      ManifestIo m(cfg);
      orbit::Branch b = io::read_branch(branch_file);
      PrecisionContext ctx = PrecisionContext::make(std::max(30L, b.digits));
      auto disc = spiralfit::rotation_discrepancy(b, b.anchor.elements[0], theta, ctx);
      std::string out = cfg.output_dir + "/" + fs::path(branch_file).stem().string() + "_rotation.csv";
      std::ofstream os(out);
      os << "# " << m.tag() << "\n";
      os << "k,abs,log_abs,re,im\n";
      os.precision(17);
      for (std::size_t k = 0; k < disc.size(); ++k) {
        Real a = mp::abs(disc[k]);
        os << k << "," << a.to_double() << ","
           << (a.is_zero() ? -1e9 : mp::log(a).to_double()) << "," << disc[k].re().to_double()
           << "," << disc[k].im().to_double() << "\n";
      }
      os.close();
      m.produced(out);
      m.save();
      std::cout << "wrote " << out << "\n";
    });
  }

  if (s_fp->parsed()) {
    return protect([&] {
      PrecisionContext ctx = ctx_of(cfg);
      auto cyc = rootfind::find_fixed_point(fp_L, rootfind::Box{ctx.complex(cx, cy), side}, ctx);
      std::cout << "cycle length " << cyc.length() << (cyc.primitive ? " (primitive)" : " (NOT primitive)")
                << ", residual " << cyc.residual.str(6) << "\n";
      for (const auto& e : cyc.elements)
        std::cout << e.re().str() << " " << e.im().str() << "\n";
    });
  }

  if (s_triv->parsed()) {
    return protect([&] {
      PrecisionContext ctx = ctx_of(cfg);
      Complex psi = rootfind::find_trivial_fixed_point(triv_n, ctx);
      std::cout << psi.re().str() << " " << psi.im().str() << "\n";
    });
  }

  if (s_verify->parsed()) {
    int rc = 0;
    verify::Options vopt{zeros_path, verify_out};
    bool full = suite == "full";
    for (int id : verify::suite_ids(full)) {
      try {
        auto r = verify::run_criterion(id, vopt);
        std::printf("[%s] criterion %d: %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str());
        std::fputs(r.detail.c_str(), stdout);
        if (!r.pass) rc = 1;
      } catch (const std::exception& e) {
        std::printf("[FAIL] criterion %d: exception: %s\n", id, e.what());
        rc = 1;
      }
    }
    return rc;
  }

  return 0;
}
