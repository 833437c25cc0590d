// gaminv: gamma-invariant differential image features from the command line.

#include <cmath>
#include <cstdio>
#include <limits>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gaminv/analytic.hpp"
#include "gaminv/error.hpp"
#include "gaminv/error_metrics.hpp"
#include "gaminv/image_io.hpp"
#include "gaminv/invariant_image.hpp"
#include "gaminv/kernels.hpp"
#include "gaminv/pipeline.hpp"
#include "gaminv/template_matching.hpp"

namespace fs = std::filesystem;
using namespace gaminv;

namespace {

bool is_map_file(const fs::path& p) {
  const std::string bytes = io::read_file(p);
  return bytes.size() >= 4 && bytes.compare(0, 4, "GINV") == 0;
}

// Writes to `path`, or stdout when it is empty or "-".
void emit_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    io::write_file(path, text);
  }
}

struct InvariantFlags {
  std::string kind = "m12g";
  std::string route = "log";
  double sigma_der = 1.0;
  int kernel_size = 7;
  double sigma_pre = 0.0;

  void add(CLI::App* cmd) {
    cmd->add_option("--kind", kind, "m12g or m123g")->capture_default_str();
    cmd->add_option("--route", route, "log or direct")->capture_default_str();
    cmd->add_option("--sigma-der", sigma_der, "derivative scale")->capture_default_str();
    cmd->add_option("--kernel-size", kernel_size, "derivative kernel support")->capture_default_str();
    cmd->add_option("--sigma-pre", sigma_pre, "prefilter scale, 0 disables")->capture_default_str();
  }

  InvariantOptions options(bool eight_bit) const {
    InvariantOptions o;
    o.derivative = {sigma_der, kernel_size};
    o.sigma_pre = sigma_pre;
    o.route = parse_derivative_route(route);
    o.intensity_floor = eight_bit ? 1.0 : std::numeric_limits<double>::min();
    return o;
  }
};

struct GammaFlags {
  std::optional<double> gamma;
  double white = 255.0;
  bool requantize = false;

  void add(CLI::App* cmd, const char* gamma_help) {
    cmd->add_option("--gamma", gamma, gamma_help);
    cmd->add_option("--white", white, "white level kept fixed by the gamma map")->capture_default_str();
    cmd->add_flag("--requantize", requantize, "round gamma-corrected data to 8 bits");
  }

  ScalarField apply(const ScalarField& img) const {
    return gamma ? gamma_correct(img, *gamma, white, requantize) : img;
  }
};

// ---- oracle ---------------------------------------------------------------

struct OracleCmd {
  double a = 3.0, b = 30.0, frequency = 1.0;
  double lo = 0.05, hi = 2.0, exclusion = 1e-3;
  int count = 2000;
  double gamma = 1.0, alpha = 1.0, white = 255.0;
  bool roots = false;
  std::string out;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("oracle", "exact 1-d invariants of a*x*sin(2 pi c x) + b");
    c->add_option("--a", a)->capture_default_str();
    c->add_option("--b", b)->capture_default_str();
    c->add_option("--frequency", frequency)->capture_default_str();
    c->add_option("--lo", lo)->capture_default_str();
    c->add_option("--hi", hi)->capture_default_str();
    c->add_option("--count", count, "grid points before pole exclusion")->capture_default_str();
    c->add_option("--exclusion", exclusion, "distance kept from denominator roots")->capture_default_str();
    c->add_option("--gamma", gamma, "apply p*f^gamma")->capture_default_str();
    c->add_option("--alpha", alpha, "evaluate f(alpha x)")->capture_default_str();
    c->add_option("--white", white)->capture_default_str();
    c->add_flag("--roots", roots, "print the denominator roots instead of the table");
    c->add_option("-o,--out", out, "CSV output, stdout by default");
    c->callback([this] { run(); });
  }

  void run() const {
    if (!(hi > lo) || count < 2) throw InputError("oracle: need hi > lo and count >= 2");
    const auto base = analytic::AnalyticSignal::sine_ramp(a, b, frequency);
    const auto f = base.with_scale(alpha).with_gamma(gamma, white);
    std::ostringstream s;
    s << std::setprecision(17);
    if (roots) {
      s << "root\n";
      for (double r : analytic::denominator_roots(f, lo, hi)) s << r << "\n";
    } else {
      s << "x,f,f1,f2,f3,theta_12g,theta_123g,theta_m12g,theta_m123g\n";
      for (double x : analytic::pole_free_grid(f, lo, hi, count, exclusion)) {
        const analytic::Jet j = f.eval(x);
        s << x << "," << j.value << "," << j.d1 << "," << j.d2 << "," << j.d3 << ","
          << analytic::theta_12g(j) << "," << analytic::theta_123g(j) << ","
          << analytic::theta_m12g(j) << "," << analytic::theta_m123g(j) << "\n";
      }
    }
    emit_text(out, s.str());
  }
};

// ---- kernels --------------------------------------------------------------

struct KernelsCmd {
  double sigma = 1.0;
  int size = 7;
  bool dump = false;
  std::string out;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("kernels", "sampled Gaussian derivative kernels");
    c->add_option("--sigma", sigma)->capture_default_str();
    c->add_option("--size", size, "odd support")->capture_default_str();
    c->add_flag("--dump", dump, "print every tap, one size x size block per kernel");
    c->add_option("-o,--out", out, "output file, stdout by default");
    c->callback([this] { run(); });
  }

  void run() const {
    std::vector<DerivativeOrder> orders{{0, 0}};
    orders.insert(orders.end(), kDerivativeOrders.begin(), kDerivativeOrders.end());
    std::ostringstream s;
    s << std::setprecision(17);
    if (!dump) s << "kernel,sum,max_abs_tap\n";
    for (DerivativeOrder o : orders) {
      const Kernel k = gaussian_kernel(sigma, size, o);
      if (!dump) {
        double m = 0.0;
        for (double t : k.taps()) m = std::max(m, std::abs(t));
        s << order_name(o) << "," << k.sum() << "," << m << "\n";
        continue;
      }
      s << "# " << order_name(o) << " sigma=" << sigma << " size=" << size << " sum=" << k.sum() << "\n";
      for (int oy = -k.radius(); oy <= k.radius(); ++oy) {
        for (int ox = -k.radius(); ox <= k.radius(); ++ox) {
          s << (ox == -k.radius() ? "" : ",") << k.at(ox, oy);
        }
        s << "\n";
      }
      s << "\n";
    }
    emit_text(out, s.str());
  }
};

// ---- gamma ----------------------------------------------------------------

struct GammaCmd {
  std::string input, output;
  double gamma = 0.6, white = 255.0;
  bool requantize = false;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("gamma", "apply I -> p I^gamma with p = white^(1-gamma)");
    c->add_option("-i,--input", input, "PGM, PNG or float map")->required();
    c->add_option("-o,--output", output, "*.ginv keeps floats, anything else writes PGM")->required();
    c->add_option("--gamma", gamma)->capture_default_str();
    c->add_option("--white", white)->capture_default_str();
    c->add_flag("--requantize", requantize, "round to 8 bits");
    c->callback([this] { run(); });
  }

  void run() const {
    const ScalarField out = gamma_correct(io::load_field(input), gamma, white, requantize);
    if (fs::path(output).extension() == ".ginv") {
      io::write_map(output, out);
    } else {
      io::write_pgm(output, io::to_gray(out));
    }
  }
};

// ---- invariant ------------------------------------------------------------

struct InvariantCmd {
  std::string input, output, visual;
  InvariantFlags inv;
  GammaFlags gam;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("invariant", "per-pixel gamma invariant map");
    c->add_option("-i,--input", input, "PGM, PNG or float map")->required();
    c->add_option("-o,--output", output, "float map (GINV)")->required();
    c->add_option("--visual", visual, "PGM with [-1, 1] mapped to [0, 255]");
    inv.add(c);
    gam.add(c, "gamma-correct the input first");
    c->callback([this] { run(); });
  }

  void run() const {
    const bool eight_bit = !is_map_file(input) && (!gam.gamma || gam.requantize);
    const ScalarField img = gam.apply(io::load_field(input));
    const InvariantMap m = compute_invariant(img, parse_invariant_kind(inv.kind), inv.options(eight_bit));
    io::write_map(output, m.values);
    if (!visual.empty()) io::write_pgm(visual, io::visualize(m.values, -1.0, 1.0));
    std::cout << "valid " << m.values.count_valid() << " of " << m.values.size() << " pixels, margin "
              << m.margin() << "\n";
  }
};

// ---- errors ---------------------------------------------------------------

struct ErrorsCmd {
  std::string reference, test, out, abs_out, rp_prefix;
  std::vector<double> thresholds{5.0, 10.0, 20.0};
  InvariantFlags inv;
  GammaFlags gam;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("errors", "absolute/relative invariant error and reliable points");
    c->add_option("-r,--reference", reference, "reference invariant map, or an image")->required();
    c->add_option("-t,--test", test,
                  "test invariant map or image; defaults to the reference image gamma-corrected");
    c->add_option("--thresholds", thresholds, "epsilon values in percent")->capture_default_str();
    c->add_option("-o,--out", out, "CSV output, stdout by default");
    c->add_option("--abs-out", abs_out, "PGM of the absolute error, [0, 2] -> [0, 255]");
    c->add_option("--rp-prefix", rp_prefix, "write <prefix><epsilon>.pgm masks, black = reliable");
    inv.add(c);
    gam.add(c, "gamma applied to image inputs to form the test image");
    c->callback([this] { run(); });
  }

  InvariantMap load(const std::string& path, bool corrected) const {
    const InvariantKind kind = parse_invariant_kind(inv.kind);
    if (is_map_file(path)) {
      InvariantMap m;
      m.kind = kind;
      m.values = io::read_map(path);
      return m;
    }
    const ScalarField img = io::load_image(path);
    const bool eight_bit = !corrected || !gam.gamma || gam.requantize;
    return compute_invariant(corrected ? gam.apply(img) : img, kind, inv.options(eight_bit));
  }

  void run() const {
    const InvariantMap ref = load(reference, false);
    InvariantMap tst;
    if (!test.empty()) {
      tst = load(test, false);
    } else {
      if (!gam.gamma || is_map_file(reference)) {
        throw InputError("errors: without --test the reference must be an image and --gamma is required");
      }
      tst = load(reference, true);
    }
    const ErrorReport rep = evaluate_errors(ref, tst, thresholds);
    std::ostringstream s;
    s << "epsilon,prp,count,n_valid\n";
    for (const ReliablePoints& rp : rep.reliable) {
      s << rp.epsilon << "," << std::fixed << std::setprecision(4) << rp.percentage << std::defaultfloat
        << "," << rp.count << "," << rp.n_valid << "\n";
    }
    s << std::setprecision(10) << "# mean_delta," << rep.mean_abs << "\n# median_delta," << rep.median_abs
      << "\n";
    emit_text(out, s.str());
    if (!abs_out.empty()) io::write_pgm(abs_out, io::visualize(rep.abs_err, 0.0, 2.0));
    if (!rp_prefix.empty()) {
      for (const ReliablePoints& rp : rep.reliable) {
        std::ostringstream name;
        name << rp_prefix << rp.epsilon << ".pgm";
        io::write_pgm(name.str(), io::render_mask(rep.rel_err.width(), rep.rel_err.height(), rp.mask, 0, 255));
      }
    }
  }
};

// ---- match ----------------------------------------------------------------

struct MatchCmd {
  std::string input, target, out, mask_out, surface_out;
  std::vector<int> template_size{6, 8};
  std::string representation = "intensity";
  std::optional<int> surface_x, surface_y;
  InvariantFlags inv;
  GammaFlags gam;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("match", "template matching accuracy between an image and its gamma pair");
    c->add_option("-i,--input", input, "source image; templates are cut from here")->required();
    c->add_option("--target", target, "image searched; defaults to the gamma-corrected source");
    c->add_option("--template-size", template_size, "tn (width) tm (height)")->expected(2)->capture_default_str();
    c->add_option("--representation", representation, "intensity or invariant")->capture_default_str();
    c->add_option("-o,--out", out, "per-anchor CSV");
    c->add_option("--mask-out", mask_out, "PGM of correct positions, white = correct");
    c->add_option("--surface-out", surface_out, "PGM of the score surface for the template at --surface-x/--surface-y");
    c->add_option("--surface-x", surface_x);
    c->add_option("--surface-y", surface_y);
    inv.add(c);
    gam.add(c, "gamma forming the target when --target is absent (default 0.6)");
    c->callback([this] { run(); });
  }

  ScalarField represent(const ScalarField& img, bool eight_bit) const {
    if (representation == "intensity") return prefilter(img, inv.sigma_pre);
    if (representation == "invariant") {
      return compute_invariant(img, parse_invariant_kind(inv.kind), inv.options(eight_bit)).values;
    }
    throw InputError("match: representation must be intensity or invariant");
  }

  void run() const {
    const TemplateSize size{template_size.at(0), template_size.at(1)};
    const ScalarField src = io::load_field(input);
    ScalarField tgt;
    bool tgt_8bit = true;
    if (!target.empty()) {
      tgt = io::load_field(target);
    } else {
      tgt = gamma_correct(src, gam.gamma.value_or(0.6), gam.white, gam.requantize);
      tgt_8bit = gam.requantize;
    }
    const ScalarField a = represent(src, true);
    const ScalarField b = represent(tgt, tgt_8bit);
    const MatchReport rep = correlation_accuracy(a, b, size);

    if (!out.empty()) {
      std::ostringstream s;
      s << "anchor_x,anchor_y,best_x,best_y,score,is_cmcp,degenerate\n" << std::setprecision(12);
      for (const MatchRecord& r : rep.records) {
        s << r.anchor.x << "," << r.anchor.y << "," << r.best.x << "," << r.best.y << "," << r.score << ","
          << int(r.is_cmcp) << "," << int(r.degenerate) << "\n";
      }
      emit_text(out, s.str());
    }
    if (!mask_out.empty()) io::write_pgm(mask_out, io::render_mask(rep.width, rep.height, rep.cmcp_mask, 255, 0));
    if (!surface_out.empty()) {
      if (!surface_x || !surface_y) throw InputError("match: --surface-out needs --surface-x and --surface-y");
      const ScalarField t = cut_template(a, {*surface_x, *surface_y}, size);
      io::write_pgm(surface_out, io::visualize(correlation_surface(b, t), 0.0, 1.0));
    }
    std::cout << "representation," << representation << "\ntemplate," << size.width << "x" << size.height
              << "\nn_valid," << rep.n_valid << "\nn_correct," << rep.n_correct << "\nn_degenerate,"
              << rep.n_degenerate << "\nca," << std::fixed << std::setprecision(4) << rep.ca << "\n";
  }
};

// ---- pipeline -------------------------------------------------------------

struct PipelineCmd {
  std::string config, out;
  std::vector<std::string> synth, images;
  bool dry_run = false, no_images = false, no_match = false, quiet = false;
  std::optional<double> gamma;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("pipeline", "gamma -> invariant -> errors -> matching over a corpus");
    c->add_option("-c,--config", config, "JSON run configuration");
    c->add_option("--synth", synth, "synthetic image kind:seed[:WxH], repeatable");
    c->add_option("--image", images, "image file, repeatable");
    c->add_option("--out", out, "output directory");
    c->add_option("--gamma", gamma);
    c->add_flag("--dry-run", dry_run, "print the plan and write nothing");
    c->add_flag("--no-images", no_images, "write the tables only");
    c->add_flag("--no-match", no_match, "skip template matching");
    c->add_flag("-q,--quiet", quiet);
    c->callback([this] { run(); });
  }

  void run() const {
    RunConfig cfg = config.empty() ? RunConfig{} : load_run_config(config);
    for (const std::string& s : synth) cfg.corpus.push_back(parse_synth_entry(s));
    for (const std::string& p : images) cfg.corpus.push_back({fs::path(p).stem().string(), fs::path(p), std::nullopt});
    if (!out.empty()) cfg.output_dir = out;
    if (gamma) cfg.gamma = *gamma;
    if (no_images) cfg.write_images = false;
    if (no_match) cfg.run_matching = false;
    cfg.validate();
    if (dry_run) {
      print_plan(cfg, std::cout);
      return;
    }
    const PipelineResult r = run_pipeline(cfg, quiet ? nullptr : &std::cerr);
    std::cout << "wrote " << r.written.size() << " files to " << cfg.output_dir.string() << "\n";
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gaminv: gamma-invariant differential image features"};
  app.require_subcommand(1);
  OracleCmd oracle;
  KernelsCmd kernels;
  GammaCmd gamma;
  InvariantCmd invariant;
  ErrorsCmd errors;
  MatchCmd match;
  PipelineCmd pipeline;
  oracle.add(app);
  kernels.add(app);
  gamma.add(app);
  invariant.add(app);
  errors.add(app);
  match.add(app);
  pipeline.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const InputError& e) {
    std::cerr << "gaminv: " << e.what() << "\n";
    return 2;
  } catch (const PoleError& e) {
    std::cerr << "gaminv: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "gaminv: internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
