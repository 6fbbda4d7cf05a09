#include "sal/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <stdexcept>

#include "sal/error.hpp"
#include "sal/netpbm.hpp"

namespace fs = std::filesystem;

namespace sal {

TensorPtr downsample_area(const Tensor& map, int64_t factor) {
    if (map.shape.size() != 2) throw std::invalid_argument("downsample_area: expected [H,W]");
    if (factor < 1 || map.shape[0] % factor != 0 || map.shape[1] % factor != 0)
        throw std::invalid_argument("downsample_area: extents not divisible by factor");
    const int64_t h = map.shape[0] / factor, w = map.shape[1] / factor;
    auto out = Tensor::create({h, w});
    const double inv = 1.0 / static_cast<double>(factor * factor);
    for (int64_t y = 0; y < h; ++y) {
        for (int64_t x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int64_t dy = 0; dy < factor; ++dy) {
                const double* row = map.values.data() + (y * factor + dy) * map.shape[1] + x * factor;
                for (int64_t dx = 0; dx < factor; ++dx) acc += row[dx];
            }
            out->values[y * w + x] = acc * inv;
        }
    }
    return out;
}

const TensorPtr& mask_small_of(Sample& sample) {
    if (!sample.mask_small) sample.mask_small = downsample_area(*sample.mask, 8);
    return sample.mask_small;
}

TensorPtr pad_to_multiple(const Tensor& t, int64_t multiple) {
    const bool has_channels = t.shape.size() == 3;
    if (!has_channels && t.shape.size() != 2)
        throw std::invalid_argument("pad_to_multiple: expected [C,H,W] or [H,W]");
    const int64_t c = has_channels ? t.shape[0] : 1;
    const int64_t h = t.shape[has_channels ? 1 : 0];
    const int64_t w = t.shape[has_channels ? 2 : 1];
    const int64_t ph = (h + multiple - 1) / multiple * multiple;
    const int64_t pw = (w + multiple - 1) / multiple * multiple;
    if (ph == h && pw == w) return Tensor::from(t.shape, t.values);
    auto out = Tensor::create(has_channels ? Shape{c, ph, pw} : Shape{ph, pw});
    for (int64_t ci = 0; ci < c; ++ci)
        for (int64_t y = 0; y < h; ++y)
            std::copy_n(t.values.data() + (ci * h + y) * w, w,
                        out->values.data() + (ci * ph + y) * pw);
    return out;
}

std::vector<Sample> load_dataset(const std::string& dir) {
    const fs::path images = fs::path(dir) / "images";
    const fs::path masks = fs::path(dir) / "masks";
    if (!fs::is_directory(images) || !fs::is_directory(masks))
        throw DataError("dataset: expected images/ and masks/ under " + dir);
    std::vector<std::string> ids;
    for (const auto& entry : fs::directory_iterator(images)) {
        if (entry.path().extension() == ".ppm") ids.push_back(entry.path().stem().string());
    }
    std::sort(ids.begin(), ids.end());
    if (ids.empty()) throw DataError("dataset: no .ppm images under " + images.string());
    std::vector<Sample> samples;
    samples.reserve(ids.size());
    for (const auto& id : ids) {
        Sample s;
        s.id = id;
        auto image = read_ppm(read_file((images / (id + ".ppm")).string()));
        const fs::path mask_path = masks / (id + ".pgm");
        if (!fs::exists(mask_path)) throw DataError("dataset: missing mask for id " + id);
        auto mask = read_pgm(read_file(mask_path.string()));
        if (mask->shape[0] != image->shape[1] || mask->shape[1] != image->shape[2])
            throw DataError("dataset: image/mask extent mismatch for id " + id);
        for (auto& v : mask->values) v = v > 0.5 ? 1.0 : 0.0;
        s.image = pad_to_multiple(*image, 8);
        s.mask = pad_to_multiple(*mask, 8);
        samples.push_back(std::move(s));
    }
    return samples;
}

void write_dataset(const std::string& dir, const std::vector<Sample>& samples) {
    const fs::path images = fs::path(dir) / "images";
    const fs::path masks = fs::path(dir) / "masks";
    fs::create_directories(images);
    fs::create_directories(masks);
    for (const auto& s : samples) {
        write_file((images / (s.id + ".ppm")).string(), write_ppm(*s.image));
        write_file((masks / (s.id + ".pgm")).string(), write_pgm(*s.mask));
    }
}

std::vector<std::vector<size_t>> batch_iter(size_t dataset_size, int64_t batch_size, Rng& rng,
                                            bool shuffle) {
    if (dataset_size == 0) throw std::invalid_argument("batch_iter: empty dataset");
    if (batch_size < 1) throw std::invalid_argument("batch_iter: batch size must be >= 1");
    std::vector<size_t> perm(dataset_size);
    for (size_t i = 0; i < dataset_size; ++i) perm[i] = i;
    if (shuffle) {
        for (size_t i = dataset_size - 1; i > 0; --i) {
            const size_t j = static_cast<size_t>(rng.below(static_cast<int64_t>(i) + 1));
            std::swap(perm[i], perm[j]);
        }
    }
    std::vector<std::vector<size_t>> batches;
    for (size_t start = 0; start < dataset_size; start += static_cast<size_t>(batch_size)) {
        const size_t end = std::min(dataset_size, start + static_cast<size_t>(batch_size));
        batches.emplace_back(perm.begin() + static_cast<ptrdiff_t>(start),
                             perm.begin() + static_cast<ptrdiff_t>(end));
    }
    return batches;
}

TensorPtr stack_images(const std::vector<Sample>& samples, const std::vector<size_t>& idx) {
    if (idx.empty()) throw std::invalid_argument("stack_images: empty batch");
    const auto& first = samples[idx[0]].image;
    const int64_t h = first->shape[1], w = first->shape[2];
    auto out = Tensor::create({static_cast<int64_t>(idx.size()), 3, h, w});
    for (size_t b = 0; b < idx.size(); ++b) {
        const auto& img = samples[idx[b]].image;
        if (img->shape != first->shape)
            throw std::invalid_argument("stack_images: batch requires uniform extents");
        std::copy(img->values.begin(), img->values.end(),
                  out->values.begin() + static_cast<ptrdiff_t>(b * img->values.size()));
    }
    return out;
}

TensorPtr stack_masks_small(std::vector<Sample>& samples, const std::vector<size_t>& idx) {
    if (idx.empty()) throw std::invalid_argument("stack_masks_small: empty batch");
    const auto& first = mask_small_of(samples[idx[0]]);
    const int64_t h = first->shape[0], w = first->shape[1];
    auto out = Tensor::create({static_cast<int64_t>(idx.size()), 1, h, w});
    for (size_t b = 0; b < idx.size(); ++b) {
        const auto& m = mask_small_of(samples[idx[b]]);
        if (m->shape != first->shape)
            throw std::invalid_argument("stack_masks_small: batch requires uniform extents");
        std::copy(m->values.begin(), m->values.end(),
                  out->values.begin() + static_cast<ptrdiff_t>(b * m->values.size()));
    }
    return out;
}

}  // namespace sal
