#include "sal/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sal/error.hpp"
#include "sal/rng.hpp"

namespace sal {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

struct ShapeSpec {
    bool is_ellipse = true;
    double cx = 0, cy = 0;
    double rx = 1, ry = 1;
    double cos_rot = 1, sin_rot = 0;
    std::vector<double> px, py;  // simple polygon vertices

    bool contains(double x, double y) const {
        if (is_ellipse) {
            const double dx = x - cx, dy = y - cy;
            const double u = (cos_rot * dx + sin_rot * dy) / rx;
            const double v = (-sin_rot * dx + cos_rot * dy) / ry;
            return u * u + v * v <= 1.0;
        }
        // even-odd ray cast
        bool inside = false;
        const size_t n = px.size();
        for (size_t i = 0, j = n - 1; i < n; j = i++) {
            if ((py[i] > y) != (py[j] > y)) {
                const double xi = px[i] + (y - py[i]) * (px[j] - px[i]) / (py[j] - py[i]);
                if (x < xi) inside = !inside;
            }
        }
        return inside;
    }
};

ShapeSpec random_shape(Rng& rng, double cx, double cy, double radius) {
    ShapeSpec s;
    s.cx = cx;
    s.cy = cy;
    s.is_ellipse = rng.coin(0.55);
    if (s.is_ellipse) {
        s.rx = radius * rng.uniform(0.75, 1.25);
        s.ry = radius * rng.uniform(0.75, 1.25);
        const double rot = rng.uniform(0.0, kPi);
        s.cos_rot = std::cos(rot);
        s.sin_rot = std::sin(rot);
    } else {
        const int nv = 3 + static_cast<int>(rng.below(4));
        for (int j = 0; j < nv; ++j) {
            const double theta = 2.0 * kPi * (static_cast<double>(j) + rng.uniform(0.0, 0.55)) /
                                 static_cast<double>(nv);
            const double r = radius * rng.uniform(0.65, 1.3);
            s.px.push_back(cx + r * std::cos(theta));
            s.py.push_back(cy + r * std::sin(theta));
        }
    }
    return s;
}

// Low-frequency value noise: a coarse random lattice interpolated bilinearly.
struct ValueNoise {
    int64_t grid;
    std::vector<double> lattice;

    ValueNoise(Rng& rng, int64_t grid_) : grid(grid_), lattice((grid_ + 1) * (grid_ + 1)) {
        for (auto& v : lattice) v = rng.uniform(-1.0, 1.0);
    }

    double at(double fx, double fy) const {  // fx, fy in [0,1]
        const double gx = fx * static_cast<double>(grid);
        const double gy = fy * static_cast<double>(grid);
        const int64_t x0 = std::min<int64_t>(static_cast<int64_t>(gx), grid - 1);
        const int64_t y0 = std::min<int64_t>(static_cast<int64_t>(gy), grid - 1);
        const double tx = gx - static_cast<double>(x0);
        const double ty = gy - static_cast<double>(y0);
        const double* row0 = lattice.data() + y0 * (grid + 1);
        const double* row1 = row0 + (grid + 1);
        const double top = row0[x0] + tx * (row0[x0 + 1] - row0[x0]);
        const double bot = row1[x0] + tx * (row1[x0 + 1] - row1[x0]);
        return top + ty * (bot - top);
    }
};

struct Blob {
    double cx, cy, rx, ry, strength;
};

SynthSample compose_once(const SynthConfig& cfg, Rng& rng) {
    const int64_t size = cfg.size;
    const int64_t hw = size * size;
    const double fsize = static_cast<double>(size);

    const double base = rng.uniform(0.35, 0.65);
    double tint[3];
    for (double& t : tint) t = rng.uniform(-0.05, 0.05);
    ValueNoise noise(rng, 5);
    const double noise_amp = 0.06 + 0.16 * cfg.clutter_density;
    const double fine_amp = 0.05 * cfg.clutter_density;

    std::vector<Blob> shadows;
    if (rng.coin(cfg.shadow_prob)) {
        const int ns = 1 + static_cast<int>(rng.below(2));
        for (int i = 0; i < ns; ++i) {
            shadows.push_back({rng.uniform(0.1, 0.9) * fsize, rng.uniform(0.1, 0.9) * fsize,
                               rng.uniform(0.15, 0.35) * fsize, rng.uniform(0.15, 0.35) * fsize,
                               rng.uniform(0.2, 0.45)});
        }
    }

    const int n_distract =
        cfg.distractors_min +
        static_cast<int>(rng.below(static_cast<int64_t>(cfg.distractors_max - cfg.distractors_min) + 1));
    std::vector<ShapeSpec> distractors;
    std::vector<double> distract_delta;
    for (int i = 0; i < n_distract; ++i) {
        distractors.push_back(random_shape(rng, rng.uniform(0.1, 0.9) * fsize,
                                           rng.uniform(0.1, 0.9) * fsize,
                                           rng.uniform(0.08, 0.18) * fsize));
        distract_delta.push_back((rng.coin(0.5) ? 1.0 : -1.0) * rng.uniform(0.04, 0.10));
    }

    int n_salient = 1;
    if (rng.coin(0.45)) ++n_salient;
    if (rng.coin(0.2)) ++n_salient;
    std::vector<ShapeSpec> salient;
    const double radius_scale = 1.0 / std::sqrt(static_cast<double>(n_salient));
    for (int i = 0; i < n_salient; ++i) {
        salient.push_back(random_shape(rng, rng.uniform(0.28, 0.72) * fsize,
                                       rng.uniform(0.28, 0.72) * fsize,
                                       rng.uniform(0.16, 0.30) * fsize * radius_scale));
    }
    const double contrast = rng.uniform(cfg.contrast_min, cfg.contrast_max);
    const bool prefer_bright = rng.coin(0.5);

    // background + shadows first, then distractors, salient shapes last
    auto image = Tensor::create({3, size, size});
    auto mask = Tensor::create({size, size});
    std::vector<uint8_t> salient_cov(hw, 0), distract_cov(hw, 0);

    std::vector<double> fine(hw);
    for (auto& v : fine) v = rng.uniform(-0.5, 0.5);

    double bg_sum = 0.0;
    for (int64_t y = 0; y < size; ++y) {
        for (int64_t x = 0; x < size; ++x) {
            const int64_t i = y * size + x;
            const double pcx = static_cast<double>(x) + 0.5;
            const double pcy = static_cast<double>(y) + 0.5;
            double lum = base + noise_amp * noise.at(pcx / fsize, pcy / fsize) + fine_amp * fine[i];
            double shade = 1.0;
            for (const auto& blob : shadows) {
                const double dx = (pcx - blob.cx) / blob.rx;
                const double dy = (pcy - blob.cy) / blob.ry;
                shade *= 1.0 - blob.strength * std::exp(-(dx * dx + dy * dy));
            }
            lum *= shade;
            for (int c = 0; c < 3; ++c) image->values[c * hw + i] = clamp01(lum + tint[c]);
            bg_sum += (image->values[i] + image->values[hw + i] + image->values[2 * hw + i]) / 3.0;
        }
    }
    const double bg_mean = bg_sum / static_cast<double>(hw);

    for (int64_t y = 0; y < size; ++y) {
        for (int64_t x = 0; x < size; ++x) {
            const int64_t i = y * size + x;
            const double pcx = static_cast<double>(x) + 0.5;
            const double pcy = static_cast<double>(y) + 0.5;
            for (size_t d = 0; d < distractors.size(); ++d) {
                if (distractors[d].contains(pcx, pcy)) {
                    distract_cov[i] = 1;
                    for (int c = 0; c < 3; ++c)
                        image->values[c * hw + i] = clamp01(image->values[c * hw + i] + distract_delta[d]);
                    break;
                }
            }
        }
    }

    double sign;
    if (bg_mean + contrast <= 0.95 && bg_mean - contrast >= 0.05) {
        sign = prefer_bright ? 1.0 : -1.0;
    } else {
        sign = bg_mean + contrast <= 0.95 ? 1.0 : -1.0;
    }
    const double fg_base = std::clamp(bg_mean + sign * contrast, 0.02, 0.98);
    double fg_tint[3];
    for (double& t : fg_tint) t = rng.uniform(-0.06, 0.06);

    for (int64_t y = 0; y < size; ++y) {
        for (int64_t x = 0; x < size; ++x) {
            const int64_t i = y * size + x;
            const double pcx = static_cast<double>(x) + 0.5;
            const double pcy = static_cast<double>(y) + 0.5;
            bool hit = false;
            double shade = 0.0;
            for (const auto& s : salient) {
                if (s.contains(pcx, pcy)) {
                    hit = true;
                    shade = 0.05 * (pcx - s.cx) / std::max(s.rx, 1.0);
                    break;
                }
            }
            if (!hit) continue;
            salient_cov[i] = 1;
            mask->values[i] = 1.0;
            for (int c = 0; c < 3; ++c)
                image->values[c * hw + i] = clamp01(fg_base + fg_tint[c] + shade);
        }
    }

    SynthSample out;
    out.sample.image = image;
    out.sample.mask = mask;
    out.salient_coverage = std::move(salient_cov);
    out.distractor_coverage = std::move(distract_cov);
    return out;
}

}  // namespace

SynthSample synth_generate_one(const SynthConfig& cfg, int64_t index) {
    if (cfg.size < 32) throw std::invalid_argument("synth: size must be >= 32");
    if (cfg.distractors_min < 0 || cfg.distractors_max < cfg.distractors_min)
        throw std::invalid_argument("synth: bad distractor count range");
    Rng seeder(cfg.seed);
    uint64_t child = cfg.seed;
    for (int64_t i = 0; i <= index; ++i) child = seeder.fork();
    Rng rng(child);

    const double lo = 0.07, hi = 0.5;  // inner margin of the mask-fraction contract
    for (int attempt = 0; attempt < 64; ++attempt) {
        SynthSample s = compose_once(cfg, rng);
        double fg = 0.0;
        for (double v : s.sample.mask->values) fg += v;
        const double fraction = fg / static_cast<double>(cfg.size * cfg.size);
        if (fraction >= lo && fraction <= hi) {
            char id[16];
            std::snprintf(id, sizeof(id), "%05lld", static_cast<long long>(index));
            s.sample.id = id;
            return s;
        }
    }
    throw NumericError("synth: could not satisfy foreground-fraction bounds for sample " +
                       std::to_string(index));
}

std::vector<Sample> synth_generate(const SynthConfig& cfg) {
    std::vector<Sample> samples;
    samples.reserve(static_cast<size_t>(cfg.count));
    for (int64_t i = 0; i < cfg.count; ++i) samples.push_back(synth_generate_one(cfg, i).sample);
    return samples;
}

}  // namespace sal
