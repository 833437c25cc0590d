#include "gaminv/template_matching.hpp"

#include <algorithm>
#include <cmath>

#include "gaminv/error.hpp"
#include "gaminv/parallel.hpp"

namespace gaminv {

namespace {

struct WindowStats {
  double mean = 0.0;
  double energy = 0.0;  // sum of squared deviations from the mean
};

WindowStats window_stats(const ScalarField& f, Anchor at, TemplateSize size) {
  const double n = static_cast<double>(size.width) * size.height;
  double sum = 0.0;
  for (int j = 0; j < size.height; ++j) {
    const double* row = f.row(at.y + j).data() + at.x;
    for (int i = 0; i < size.width; ++i) sum += row[i];
  }
  WindowStats s;
  s.mean = sum / n;
  for (int j = 0; j < size.height; ++j) {
    const double* row = f.row(at.y + j).data() + at.x;
    for (int i = 0; i < size.width; ++i) {
      const double d = row[i] - s.mean;
      s.energy += d * d;
    }
  }
  return s;
}

// Template with its mean removed, row-major.
struct CenteredTemplate {
  TemplateSize size;
  std::vector<double> taps;
  double energy = 0.0;
};

CenteredTemplate center(const ScalarField& tmpl) {
  const TemplateSize size{tmpl.width(), tmpl.height()};
  const WindowStats s = window_stats(tmpl, {0, 0}, size);
  CenteredTemplate t{size, {}, s.energy};
  t.taps.reserve(tmpl.size());
  for (double v : tmpl.samples()) t.taps.push_back(v - s.mean);
  return t;
}

// Sum of ((I - mean) - T')^2, abandoned (returning +inf) once the running
// total exceeds `bail`. Terms are non-negative, so partial sums only grow.
double centered_distance(const ScalarField& f, Anchor at, double mean, const CenteredTemplate& t,
                         double bail) {
  double acc = 0.0;
  const int tw = t.size.width;
  for (int j = 0; j < t.size.height; ++j) {
    const double* row = f.row(at.y + j).data() + at.x;
    const double* trow = t.taps.data() + static_cast<std::size_t>(j) * tw;
    for (int i = 0; i < tw; ++i) {
      const double d = (row[i] - mean) - trow[i];
      acc += d * d;
    }
    if (acc > bail) return INFINITY;
  }
  return acc;
}

Correlation score_from(double distance, double energy_img, double energy_tmpl) {
  if (energy_img == 0.0 || energy_tmpl == 0.0) return {0.0, true};
  const double c = distance / std::sqrt(energy_img * energy_tmpl);
  return {std::max(0.0, 1.0 - c), false};
}

// Anchors whose template block lies entirely inside the valid pixels of every field.
struct AnchorRange {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // half-open
  std::vector<std::uint8_t> ok;          // over the full grid, only when masks exist
  int width = 0;

  bool contains(Anchor a) const {
    if (a.x < x0 || a.y < y0 || a.x >= x1 || a.y >= y1) return false;
    return ok.empty() || ok[static_cast<std::size_t>(a.y) * width + a.x] != 0;
  }
  bool empty() const { return x1 <= x0 || y1 <= y0; }
};

AnchorRange anchor_range(std::initializer_list<const ScalarField*> fields, TemplateSize size) {
  const ScalarField& first = **fields.begin();
  int m = 0;
  bool masked = false;
  for (const ScalarField* f : fields) {
    m = std::max(m, f->margin());
    masked = masked || f->has_mask();
  }
  AnchorRange r;
  r.width = first.width();
  r.x0 = m;
  r.y0 = m;
  r.x1 = first.width() - m - size.width + 1;
  r.y1 = first.height() - m - size.height + 1;
  if (masked && !r.empty()) {
    r.ok.assign(first.size(), 0);
    for (int y = r.y0; y < r.y1; ++y) {
      for (int x = r.x0; x < r.x1; ++x) {
        bool all = true;
        for (int j = 0; j < size.height && all; ++j) {
          for (int i = 0; i < size.width && all; ++i) {
            for (const ScalarField* f : fields) all = all && f->is_valid(x + i, y + j);
          }
        }
        r.ok[first.index(x, y)] = all ? 1 : 0;
      }
    }
  }
  return r;
}

// Precomputed mean and energy of every candidate window of the search image.
struct SearchIndex {
  AnchorRange range;
  std::vector<WindowStats> stats;  // indexed like the full grid

  const WindowStats& at(Anchor a) const {
    return stats[static_cast<std::size_t>(a.y) * range.width + a.x];
  }
};

SearchIndex build_index(const ScalarField& img, AnchorRange range, TemplateSize size) {
  SearchIndex idx{std::move(range), {}};
  idx.stats.resize(img.size());
  if (idx.range.empty()) return idx;
  parallel_for(idx.range.y0, idx.range.y1, [&](int y) {
    for (int x = idx.range.x0; x < idx.range.x1; ++x) {
      idx.stats[img.index(x, y)] = window_stats(img, {x, y}, size);
    }
  });
  return idx;
}

LocateResult locate_indexed(const ScalarField& img, const SearchIndex& idx,
                            const CenteredTemplate& t, Anchor true_pos) {
  LocateResult res;
  if (t.energy == 0.0) {
    res.degenerate = true;
    res.best = true_pos;
    return res;
  }

  // Seed with the true position so poor candidates can be abandoned early.
  const WindowStats& ts = idx.at(true_pos);
  double best = score_from(centered_distance(img, true_pos, ts.mean, t, INFINITY), ts.energy,
                           t.energy)
                    .score;
  Anchor best_pos = true_pos;
  int ties = 1;

  for (int y = idx.range.y0; y < idx.range.y1; ++y) {
    for (int x = idx.range.x0; x < idx.range.x1; ++x) {
      const Anchor a{x, y};
      if (a == true_pos || !idx.range.contains(a)) continue;
      const WindowStats& ws = idx.at(a);
      if (ws.energy == 0.0) {
        // Degenerate window scores 0.
        if (best == 0.0) ++ties;
        continue;
      }
      const double denom = std::sqrt(ws.energy * t.energy);
      // Any distance above this gives s < best; the slack absorbs rounding.
      const double bail = best > 0.0 ? (1.0 - best) * denom * (1.0 + 1e-12) : INFINITY;
      const double dist = centered_distance(img, a, ws.mean, t, bail);
      if (std::isinf(dist)) continue;
      const double s = score_from(dist, ws.energy, t.energy).score;
      if (s > best) {
        best = s;
        best_pos = a;
        ties = 1;
      } else if (s == best) {
        ++ties;
      }
    }
  }
  res.best = best_pos;
  res.best_score = best;
  res.is_cmcp = best_pos == true_pos && ties == 1;
  return res;
}

void require_fits(const ScalarField& img, Anchor at, TemplateSize size) {
  if (at.x < 0 || at.y < 0 || at.x + size.width > img.width() ||
      at.y + size.height > img.height()) {
    throw InputError("template does not fit inside the image at the requested anchor");
  }
}

}  // namespace

Correlation correlation_score(const ScalarField& img, const ScalarField& tmpl, Anchor at) {
  const TemplateSize size{tmpl.width(), tmpl.height()};
  require_fits(img, at, size);
  const CenteredTemplate t = center(tmpl);
  const WindowStats ws = window_stats(img, at, size);
  return score_from(centered_distance(img, at, ws.mean, t, INFINITY), ws.energy, t.energy);
}

ScalarField cut_template(const ScalarField& img, Anchor at, TemplateSize size) {
  if (size.width < 1 || size.height < 1) throw InputError("template size must be positive");
  require_fits(img, at, size);
  ScalarField out(size.width, size.height);
  for (int j = 0; j < size.height; ++j) {
    for (int i = 0; i < size.width; ++i) out(i, j) = img(at.x + i, at.y + j);
  }
  return out;
}

LocateResult locate_template(const ScalarField& img, const ScalarField& tmpl, Anchor true_pos) {
  const TemplateSize size{tmpl.width(), tmpl.height()};
  const SearchIndex idx = build_index(img, anchor_range({&img}, size), size);
  if (!idx.range.contains(true_pos)) {
    throw InputError("locate_template: true position is not a valid anchor");
  }
  return locate_indexed(img, idx, center(tmpl), true_pos);
}

MatchReport correlation_accuracy(const ScalarField& source, const ScalarField& target,
                                 TemplateSize size) {
  if (!source.same_shape(target)) throw InputError("correlation_accuracy: sizes differ");
  if (size.width < 1 || size.height < 1) throw InputError("template size must be positive");

  MatchReport rep;
  rep.size = size;
  rep.width = source.width();
  rep.height = source.height();
  rep.cmcp_mask.assign(source.size(), 0);

  const AnchorRange range = anchor_range({&source, &target}, size);
  if (range.empty()) return rep;
  const SearchIndex idx = build_index(target, range, size);

  const int cols = range.x1 - range.x0;
  std::vector<MatchRecord> grid(static_cast<std::size_t>(cols) * (range.y1 - range.y0));
  std::vector<std::uint8_t> used(grid.size(), 0);
  parallel_for(range.y0, range.y1, [&](int y) {
    for (int x = range.x0; x < range.x1; ++x) {
      const Anchor a{x, y};
      if (!range.contains(a)) continue;
      const std::size_t k = static_cast<std::size_t>(y - range.y0) * cols + (x - range.x0);
      const CenteredTemplate t = center(cut_template(source, a, size));
      const LocateResult r = locate_indexed(target, idx, t, a);
      grid[k] = {a, r.best, r.best_score, r.is_cmcp, r.degenerate};
      used[k] = 1;
    }
  });

  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!used[k]) continue;
    const MatchRecord& rec = grid[k];
    rep.records.push_back(rec);
    if (rec.degenerate) {
      ++rep.n_degenerate;
      continue;
    }
    ++rep.n_valid;
    if (rec.is_cmcp) {
      ++rep.n_correct;
      rep.cmcp_mask[source.index(rec.anchor.x, rec.anchor.y)] = 1;
    }
  }
  rep.ca = rep.n_valid == 0 ? 0.0 : 100.0 * rep.n_correct / rep.n_valid;
  return rep;
}

ScalarField correlation_surface(const ScalarField& img, const ScalarField& tmpl) {
  const TemplateSize size{tmpl.width(), tmpl.height()};
  const SearchIndex idx = build_index(img, anchor_range({&img}, size), size);
  const CenteredTemplate t = center(tmpl);
  ScalarField out(img.width(), img.height());
  std::vector<std::uint8_t> mask(out.size(), 0);
  for (int y = idx.range.y0; y < idx.range.y1; ++y) {
    for (int x = idx.range.x0; x < idx.range.x1; ++x) {
      const Anchor a{x, y};
      if (!idx.range.contains(a)) continue;
      const WindowStats& ws = idx.at(a);
      out(x, y) =
          score_from(centered_distance(img, a, ws.mean, t, INFINITY), ws.energy, t.energy).score;
      mask[out.index(x, y)] = 1;
    }
  }
  out.set_mask(std::move(mask));
  return out;
}

}  // namespace gaminv
