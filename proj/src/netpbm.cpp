#include "sal/netpbm.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "sal/error.hpp"

namespace sal {

namespace {

struct ByteCursor {
    const std::vector<uint8_t>& bytes;
    size_t pos = 0;

    bool eof() const { return pos >= bytes.size(); }
    uint8_t peek() const { return bytes[pos]; }
    uint8_t take() { return bytes[pos++]; }
};

bool is_space(uint8_t c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

// Whitespace and '#' comments are allowed between header tokens.
void skip_separators(ByteCursor& cur) {
    while (!cur.eof()) {
        if (is_space(cur.peek())) {
            cur.take();
        } else if (cur.peek() == '#') {
            while (!cur.eof() && cur.take() != '\n') {
            }
        } else {
            break;
        }
    }
}

int64_t read_header_int(ByteCursor& cur, const char* what) {
    skip_separators(cur);
    if (cur.eof() || cur.peek() < '0' || cur.peek() > '9')
        throw DataError(std::string("netpbm: malformed header, expected ") + what);
    int64_t value = 0;
    while (!cur.eof() && cur.peek() >= '0' && cur.peek() <= '9') {
        value = value * 10 + (cur.take() - '0');
        if (value > 1 << 30) throw DataError("netpbm: header value out of range");
    }
    return value;
}

// Returns the payload offset after validating "P<digit> W H MAXVAL".
size_t parse_header(const std::vector<uint8_t>& bytes, char magic_digit, int64_t& width,
                    int64_t& height) {
    ByteCursor cur{bytes};
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != magic_digit)
        throw DataError(std::string("netpbm: bad magic, expected P") + magic_digit);
    cur.pos = 2;
    width = read_header_int(cur, "width");
    height = read_header_int(cur, "height");
    const int64_t maxval = read_header_int(cur, "maxval");
    if (width <= 0 || height <= 0) throw DataError("netpbm: non-positive image extents");
    if (maxval != 255)
        throw DataError("netpbm: unsupported maxval " + std::to_string(maxval) +
                        " (only 255 is supported)");
    if (cur.eof() || !is_space(cur.peek())) throw DataError("netpbm: missing header terminator");
    cur.take();
    return cur.pos;
}

uint8_t quantize(double v) {
    const double scaled = std::lround(v * 255.0);
    return static_cast<uint8_t>(std::min(255.0, std::max(0.0, scaled)));
}

}  // namespace

TensorPtr read_ppm(const std::vector<uint8_t>& bytes) {
    int64_t w = 0, h = 0;
    const size_t off = parse_header(bytes, '6', w, h);
    const size_t need = static_cast<size_t>(w) * static_cast<size_t>(h) * 3;
    if (bytes.size() - off < need) throw DataError("netpbm: truncated P6 payload");
    auto t = Tensor::create({3, h, w});
    const uint8_t* p = bytes.data() + off;
    const int64_t hw = h * w;
    for (int64_t i = 0; i < hw; ++i) {
        t->values[i] = p[3 * i] / 255.0;
        t->values[hw + i] = p[3 * i + 1] / 255.0;
        t->values[2 * hw + i] = p[3 * i + 2] / 255.0;
    }
    return t;
}

TensorPtr read_pgm(const std::vector<uint8_t>& bytes) {
    int64_t w = 0, h = 0;
    const size_t off = parse_header(bytes, '5', w, h);
    const size_t need = static_cast<size_t>(w) * static_cast<size_t>(h);
    if (bytes.size() - off < need) throw DataError("netpbm: truncated P5 payload");
    auto t = Tensor::create({h, w});
    const uint8_t* p = bytes.data() + off;
    for (int64_t i = 0; i < h * w; ++i) t->values[i] = p[i] / 255.0;
    return t;
}

std::vector<uint8_t> write_ppm(const Tensor& image) {
    if (image.shape.size() != 3 || image.shape[0] != 3)
        throw std::invalid_argument("write_ppm: expected a [3,H,W] tensor, got " +
                                    shape_str(image.shape));
    const int64_t h = image.shape[1], w = image.shape[2], hw = h * w;
    char header[64];
    const int n = std::snprintf(header, sizeof(header), "P6\n%lld %lld\n255\n",
                                static_cast<long long>(w), static_cast<long long>(h));
    std::vector<uint8_t> out(header, header + n);
    out.reserve(out.size() + 3 * hw);
    for (int64_t i = 0; i < hw; ++i) {
        out.push_back(quantize(image.values[i]));
        out.push_back(quantize(image.values[hw + i]));
        out.push_back(quantize(image.values[2 * hw + i]));
    }
    return out;
}

std::vector<uint8_t> write_pgm(const Tensor& map) {
    if (map.shape.size() != 2)
        throw std::invalid_argument("write_pgm: expected an [H,W] tensor, got " +
                                    shape_str(map.shape));
    const int64_t h = map.shape[0], w = map.shape[1];
    char header[64];
    const int n = std::snprintf(header, sizeof(header), "P5\n%lld %lld\n255\n",
                                static_cast<long long>(w), static_cast<long long>(h));
    std::vector<uint8_t> out(header, header + n);
    out.reserve(out.size() + h * w);
    for (double v : map.values) out.push_back(quantize(v));
    return out;
}

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::vector<uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write file: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("failed writing file: " + path);
}

}  // namespace sal
