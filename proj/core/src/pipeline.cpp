#include "gaminv/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gaminv/error.hpp"
#include "gaminv/image_io.hpp"

namespace gaminv {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt_number(double v) {
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

std::string fmt_fixed(double v, int digits) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(digits) << v;
  return ss.str();
}

std::string size_tag(TemplateSize s) {
  return std::to_string(s.width) + "x" + std::to_string(s.height);
}

std::string pre_tag(double sigma) { return "pre" + fmt_number(sigma); }

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double d : v) s += d;
  return s / v.size();
}

// Runs `body`, re-throwing failures with a stage tag and the original category.
template <typename F>
auto stage(const std::string& tag, const std::string& image, F&& body) {
  const std::string prefix = "[" + tag + "] " + image + ": ";
  try {
    return body();
  } catch (const InputError& e) {
    throw InputError(prefix + e.what());
  } catch (const InvariantViolation& e) {
    throw InvariantViolation(prefix + e.what());
  } catch (const std::exception& e) {
    throw InvariantViolation(prefix + e.what());
  }
}

}  // namespace

void RunConfig::validate() const {
  if (!(gamma > 0.0)) throw InputError("gamma must be positive");
  if (!(white > 0.0)) throw InputError("white level must be positive");
  if (!(sigma_pre >= 0.0) || !(sigma_pre_filtered >= 0.0)) {
    throw InputError("prefilter sigmas must be non-negative");
  }
  if (!(sigma_der > 0.0)) throw InputError("sigma_der must be positive");
  if (kernel_size < 3 || kernel_size % 2 == 0) throw InputError("kernel_size must be odd and >= 3");
  if (template_sizes.empty()) throw InputError("at least one template size is required");
  for (const TemplateSize& t : template_sizes) {
    if (t.width < 2 || t.height < 2) throw InputError("template sides must be at least 2");
  }
  if (thresholds.empty()) throw InputError("at least one reliable-point threshold is required");
  for (double e : thresholds) {
    if (!(e > 0.0)) throw InputError("reliable-point thresholds must be positive");
  }
  if (corpus.empty()) throw InputError("no images in the corpus");
  std::set<std::string> names;
  for (const CorpusEntry& e : corpus) {
    if (e.name.empty()) throw InputError("corpus entry without a name");
    if (e.path.has_value() == e.synth.has_value()) {
      throw InputError("corpus entry '" + e.name + "' needs exactly one of path or synth");
    }
    if (!names.insert(e.name).second) throw InputError("duplicate corpus name '" + e.name + "'");
  }
}

std::vector<CorpusEntry> default_corpus(int width, int height, std::uint64_t seed) {
  std::vector<CorpusEntry> out;
  for (SynthKind k : {SynthKind::gaussians, SynthKind::ripple, SynthKind::checker_blur}) {
    SynthSpec s{k, seed, width, height};
    out.push_back({std::string(to_string(k)) + "-" + std::to_string(seed), std::nullopt, s});
  }
  return out;
}

CorpusEntry parse_synth_entry(const std::string& spec, int default_width, int default_height) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.empty() || parts.size() > 3) {
    throw InputError("synthetic image spec must look like kind:seed[:WxH], got '" + spec + "'");
  }
  SynthSpec s;
  s.kind = parse_synth_kind(parts[0]);
  s.width = default_width;
  s.height = default_height;
  try {
    if (parts.size() >= 2) s.seed = std::stoull(parts[1]);
    if (parts.size() == 3) {
      const auto x = parts[2].find('x');
      if (x == std::string::npos) throw InputError("bad size");
      s.width = std::stoi(parts[2].substr(0, x));
      s.height = std::stoi(parts[2].substr(x + 1));
    }
  } catch (const std::exception&) {
    throw InputError("synthetic image spec must look like kind:seed[:WxH], got '" + spec + "'");
  }
  return {std::string(to_string(s.kind)) + "-" + std::to_string(s.seed), std::nullopt, s};
}

RunConfig run_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw InputError("config: top level must be an object");

  static const std::set<std::string> known = {
      "gamma",  "white",          "requantize", "sigma_pre",    "sigma_pre_filtered",
      "sigma_der", "kernel_size", "kind",       "route",        "template_sizes",
      "thresholds", "corpus",     "output_dir", "write_images", "run_matching"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw InputError("config: unknown key '" + key + "'");
  }

  RunConfig cfg;
  try {
    cfg.gamma = j.value("gamma", cfg.gamma);
    cfg.white = j.value("white", cfg.white);
    cfg.requantize = j.value("requantize", cfg.requantize);
    cfg.sigma_pre = j.value("sigma_pre", cfg.sigma_pre);
    cfg.sigma_pre_filtered = j.value("sigma_pre_filtered", cfg.sigma_pre_filtered);
    cfg.sigma_der = j.value("sigma_der", cfg.sigma_der);
    cfg.kernel_size = j.value("kernel_size", cfg.kernel_size);
    if (j.contains("kind")) cfg.kind = parse_invariant_kind(j["kind"].get<std::string>());
    if (j.contains("route")) cfg.route = parse_derivative_route(j["route"].get<std::string>());
    if (j.contains("template_sizes")) {
      cfg.template_sizes.clear();
      for (const json& t : j["template_sizes"]) {
        if (!t.is_array() || t.size() != 2) throw InputError("config: template size must be [tn, tm]");
        cfg.template_sizes.push_back({t[0].get<int>(), t[1].get<int>()});
      }
    }
    if (j.contains("thresholds")) cfg.thresholds = j["thresholds"].get<std::vector<double>>();
    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
    cfg.write_images = j.value("write_images", cfg.write_images);
    cfg.run_matching = j.value("run_matching", cfg.run_matching);
    if (j.contains("corpus")) {
      for (const json& e : j["corpus"]) {
        CorpusEntry entry;
        if (e.contains("path")) {
          entry.path = fs::path(e["path"].get<std::string>());
          entry.name = e.value("name", entry.path->stem().string());
        } else if (e.contains("synth")) {
          SynthSpec s;
          s.kind = parse_synth_kind(e["synth"].get<std::string>());
          s.seed = e.value("seed", s.seed);
          s.width = e.value("width", s.width);
          s.height = e.value("height", s.height);
          entry.synth = s;
          entry.name = e.value("name", std::string(to_string(s.kind)) + "-" + std::to_string(s.seed));
        } else {
          throw InputError("config: corpus entries need 'path' or 'synth'");
        }
        cfg.corpus.push_back(std::move(entry));
      }
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  RunConfig cfg = run_config_from_json(io::read_file(path));
  // Image paths are relative to the config file.
  for (CorpusEntry& e : cfg.corpus) {
    if (e.path && e.path->is_relative()) e.path = path.parent_path() / *e.path;
  }
  return cfg;
}

std::vector<PlannedArtifact> plan_artifacts(const RunConfig& cfg) {
  std::vector<PlannedArtifact> out;
  const fs::path& dir = cfg.output_dir;
  if (cfg.write_images) {
    for (const CorpusEntry& e : cfg.corpus) {
      const fs::path d = dir / e.name;
      out.push_back({d / "0gc.pgm", "input image"});
      out.push_back({d / "sgc.pgm", "gamma corrected image"});
      for (double sp : cfg.sigma_pre_values()) {
        const std::string t = pre_tag(sp);
        out.push_back({d / ("theta_0gc_" + t + ".ginv"), "invariant map, input"});
        out.push_back({d / ("theta_sgc_" + t + ".ginv"), "invariant map, gamma corrected"});
        out.push_back({d / ("theta_0gc_" + t + ".pgm"), "invariant visualisation, input"});
        out.push_back({d / ("theta_sgc_" + t + ".pgm"), "invariant visualisation, gamma corrected"});
        out.push_back({d / ("delta_" + t + ".pgm"), "absolute error"});
        for (double eps : cfg.thresholds) {
          out.push_back({d / ("rp" + fmt_number(eps) + "_" + t + ".pgm"),
                         "reliable points (black)"});
        }
        if (cfg.run_matching) {
          for (const TemplateSize& ts : cfg.template_sizes) {
            for (const char* rep : {"int", "inv"}) {
              out.push_back({d / ("cmcp_" + std::string(rep) + "_" + t + "_" + size_tag(ts) + ".pgm"),
                             "correct maximum correlation positions (white)"});
            }
          }
        }
      }
    }
  }
  out.push_back({dir / "table1.csv", "reliable-point percentages"});
  if (cfg.run_matching) out.push_back({dir / "table2.csv", "correlation accuracies"});
  return out;
}

void print_plan(const RunConfig& cfg, std::ostream& out) {
  out << "gamma " << cfg.gamma << ", white " << cfg.white
      << (cfg.requantize ? ", 8-bit requantised" : ", float") << ", invariant "
      << to_string(cfg.kind) << " (" << to_string(cfg.route) << " route), sigma_der "
      << cfg.sigma_der << ", kernel " << cfg.kernel_size << ", sigma_pre {" << cfg.sigma_pre
      << ", " << cfg.sigma_pre_filtered << "}\n";
  out << "corpus (" << cfg.corpus.size() << "):\n";
  for (const CorpusEntry& e : cfg.corpus) {
    out << "  " << e.name << ": ";
    if (e.path) {
      out << e.path->string();
    } else {
      out << "synthetic " << to_string(e.synth->kind) << " seed " << e.synth->seed << " "
          << e.synth->width << "x" << e.synth->height;
    }
    out << "\n";
  }
  out << "artifacts:\n";
  for (const PlannedArtifact& a : plan_artifacts(cfg)) {
    out << "  " << a.path.string() << "  (" << a.description << ")\n";
  }
}

ScalarField load_corpus_image(const CorpusEntry& entry, bool requantize) {
  ScalarField img = entry.path ? io::load_image(*entry.path)
                               : synth_image(entry.synth->kind, entry.synth->seed,
                                             entry.synth->width, entry.synth->height);
  if (requantize) {
    for (double& v : img.samples()) v = std::clamp(std::round(v), 0.0, 255.0);
  }
  return img;
}

PipelineResult run_pipeline(const RunConfig& cfg, std::ostream* log) {
  cfg.validate();
  PipelineResult result;
  const fs::path& dir = cfg.output_dir;
  auto emit_pgm = [&](const fs::path& p, const io::GrayImage& img) {
    io::write_pgm(p, img);
    result.written.push_back(p);
  };

  InvariantOptions base;
  base.derivative = {cfg.sigma_der, cfg.kernel_size};
  base.route = cfg.route;
  base.intensity_floor = cfg.requantize ? 1.0 : std::numeric_limits<double>::min();

  for (const CorpusEntry& entry : cfg.corpus) {
    const std::string& name = entry.name;
    if (log) *log << "[" << name << "] loading\n";
    const ScalarField plain = stage("load", name, [&] { return load_corpus_image(entry, cfg.requantize); });
    const ScalarField corrected = stage("gamma", name, [&] {
      return gamma_correct(plain, cfg.gamma, cfg.white, cfg.requantize);
    });
    const fs::path d = dir / name;
    if (cfg.write_images) {
      stage("write", name, [&] {
        emit_pgm(d / "0gc.pgm", io::to_gray(plain));
        emit_pgm(d / "sgc.pgm", io::to_gray(corrected));
        return 0;
      });
    }

    std::vector<MatchRow> rows(cfg.template_sizes.size());
    for (std::size_t k = 0; k < rows.size(); ++k) rows[k] = {name, cfg.template_sizes[k]};

    const std::vector<double> sigmas = cfg.sigma_pre_values();
    for (std::size_t si = 0; si < sigmas.size(); ++si) {
      const double sp = sigmas[si];
      const std::string t = pre_tag(sp);
      InvariantOptions opt = base;
      opt.sigma_pre = sp;
      if (log) *log << "[" << name << "] invariants, sigma_pre " << sp << "\n";
      const InvariantMap th0 = stage("invariant", name, [&] { return compute_invariant(plain, cfg.kind, opt); });
      const InvariantMap th1 = stage("invariant", name, [&] { return compute_invariant(corrected, cfg.kind, opt); });

      const ErrorReport rep = stage("errors", name, [&] { return evaluate_errors(th0, th1, cfg.thresholds); });
      ErrorRow row{name, sp, rep.n_valid, {}, rep.mean_abs, rep.median_abs};
      for (const ReliablePoints& rp : rep.reliable) row.prp.push_back(rp.percentage);
      result.errors.push_back(row);

      if (cfg.write_images) {
        stage("write", name, [&] {
          io::write_map(d / ("theta_0gc_" + t + ".ginv"), th0.values);
          result.written.push_back(d / ("theta_0gc_" + t + ".ginv"));
          io::write_map(d / ("theta_sgc_" + t + ".ginv"), th1.values);
          result.written.push_back(d / ("theta_sgc_" + t + ".ginv"));
          emit_pgm(d / ("theta_0gc_" + t + ".pgm"), io::visualize(th0.values, -1.0, 1.0));
          emit_pgm(d / ("theta_sgc_" + t + ".pgm"), io::visualize(th1.values, -1.0, 1.0));
          emit_pgm(d / ("delta_" + t + ".pgm"), io::visualize(rep.abs_err, 0.0, 2.0));
          for (const ReliablePoints& rp : rep.reliable) {
            emit_pgm(d / ("rp" + fmt_number(rp.epsilon) + "_" + t + ".pgm"),
                     io::render_mask(plain.width(), plain.height(), rp.mask, 0, 255));
          }
          return 0;
        });
      }

      if (!cfg.run_matching) continue;
      const ScalarField int0 = stage("match", name, [&] { return prefilter(plain, sp); });
      const ScalarField int1 = stage("match", name, [&] { return prefilter(corrected, sp); });
      for (std::size_t k = 0; k < cfg.template_sizes.size(); ++k) {
        const TemplateSize ts = cfg.template_sizes[k];
        if (log) *log << "[" << name << "] matching " << size_tag(ts) << ", sigma_pre " << sp << "\n";
        const MatchReport mi = stage("match", name, [&] { return correlation_accuracy(int0, int1, ts); });
        const MatchReport mv =
            stage("match", name, [&] { return correlation_accuracy(th0.values, th1.values, ts); });
        (si == 0 ? rows[k].intensity_plain : rows[k].intensity_filtered) = mi.ca;
        (si == 0 ? rows[k].invariant_plain : rows[k].invariant_filtered) = mv.ca;
        if (cfg.write_images) {
          stage("write", name, [&] {
            emit_pgm(d / ("cmcp_int_" + t + "_" + size_tag(ts) + ".pgm"),
                     io::render_mask(mi.width, mi.height, mi.cmcp_mask, 255, 0));
            emit_pgm(d / ("cmcp_inv_" + t + "_" + size_tag(ts) + ".pgm"),
                     io::render_mask(mv.width, mv.height, mv.cmcp_mask, 255, 0));
            return 0;
          });
        }
      }
    }
    if (cfg.run_matching) {
      for (const MatchRow& r : rows) result.matches.push_back(r);
    }
  }

  stage("write", "tables", [&] {
    std::ostringstream t1;
    t1 << "image,sigma_pre,n_valid";
    for (double eps : cfg.thresholds) t1 << ",prp_" << fmt_number(eps);
    t1 << ",mean_delta,median_delta\n";
    for (const ErrorRow& r : result.errors) {
      t1 << r.image << "," << fmt_number(r.sigma_pre) << "," << r.n_valid;
      for (double p : r.prp) t1 << "," << fmt_fixed(p, 2);
      t1 << "," << fmt_fixed(r.mean_abs, 6) << "," << fmt_fixed(r.median_abs, 6) << "\n";
    }
    for (double sp : cfg.sigma_pre_values()) {
      for (const char* agg : {"median", "mean"}) {
        t1 << agg << "," << fmt_number(sp) << ",";
        std::vector<std::vector<double>> cols(cfg.thresholds.size() + 2);
        for (const ErrorRow& r : result.errors) {
          if (r.sigma_pre != sp) continue;
          for (std::size_t i = 0; i < r.prp.size(); ++i) cols[i].push_back(r.prp[i]);
          cols[r.prp.size()].push_back(r.mean_abs);
          cols[r.prp.size() + 1].push_back(r.median_abs);
        }
        for (std::size_t i = 0; i < cols.size(); ++i) {
          const double v = std::string(agg) == "mean" ? mean(cols[i]) : median(cols[i]);
          t1 << "," << fmt_fixed(v, i < cfg.thresholds.size() ? 2 : 6);
        }
        t1 << "\n";
      }
      if (cfg.sigma_pre == cfg.sigma_pre_filtered) break;
    }
    io::write_file(dir / "table1.csv", t1.str());
    result.written.push_back(dir / "table1.csv");

    if (cfg.run_matching) {
      std::ostringstream t2;
      const std::string s0 = fmt_number(cfg.sigma_pre), s1 = fmt_number(cfg.sigma_pre_filtered);
      t2 << "image,template,int_pre" << s0 << ",int_pre" << s1 << ",inv_pre" << s0 << ",inv_pre"
         << s1 << "\n";
      for (const MatchRow& r : result.matches) {
        t2 << r.image << "," << size_tag(r.size) << "," << fmt_fixed(r.intensity_plain, 2) << ","
           << fmt_fixed(r.intensity_filtered, 2) << "," << fmt_fixed(r.invariant_plain, 2) << ","
           << fmt_fixed(r.invariant_filtered, 2) << "\n";
      }
      for (const TemplateSize& ts : cfg.template_sizes) {
        for (const char* agg : {"median", "mean"}) {
          std::vector<double> c[4];
          for (const MatchRow& r : result.matches) {
            if (r.size.width != ts.width || r.size.height != ts.height) continue;
            c[0].push_back(r.intensity_plain);
            c[1].push_back(r.intensity_filtered);
            c[2].push_back(r.invariant_plain);
            c[3].push_back(r.invariant_filtered);
          }
          t2 << agg << "," << size_tag(ts);
          for (auto& col : c) {
            t2 << "," << fmt_fixed(std::string(agg) == "mean" ? mean(col) : median(col), 2);
          }
          t2 << "\n";
        }
      }
      io::write_file(dir / "table2.csv", t2.str());
      result.written.push_back(dir / "table2.csv");
    }
    return 0;
  });

  for (const PlannedArtifact& a : plan_artifacts(cfg)) {
    if (!fs::exists(a.path)) {
      throw InvariantViolation("[write] planned artifact missing: " + a.path.string());
    }
  }
  return result;
}

}  // namespace gaminv
