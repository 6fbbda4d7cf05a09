#include "sal/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <set>
#include <unordered_map>

#include "sal/error.hpp"

namespace sal {

namespace {

constexpr char kMagic[8] = {'S', 'A', 'L', 'C', 'K', 'P', 'T', '1'};

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v & 0xff));
    out.push_back(static_cast<uint8_t>(v >> 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

struct Reader {
    const std::vector<uint8_t>& bytes;
    size_t pos = 0;

    void need(size_t n, const char* what) {
        if (bytes.size() - pos < n)
            throw DataError(std::string("checkpoint: truncated while reading ") + what);
    }
    uint8_t u8(const char* what) {
        need(1, what);
        return bytes[pos++];
    }
    uint16_t u16(const char* what) {
        need(2, what);
        uint16_t v = static_cast<uint16_t>(bytes[pos]) | static_cast<uint16_t>(bytes[pos + 1]) << 8;
        pos += 2;
        return v;
    }
    uint32_t u32(const char* what) {
        need(4, what);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(bytes[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    uint64_t u64(const char* what) {
        need(8, what);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(bytes[pos + i]) << (8 * i);
        pos += 8;
        return v;
    }
};

}  // namespace

std::vector<uint8_t> save_checkpoint(const std::vector<NamedTensor>& tensors, CkptDType dtype) {
    std::set<std::string> names;
    for (const auto& nt : tensors) {
        if (!names.insert(nt.name).second)
            throw std::invalid_argument("checkpoint: duplicate name '" + nt.name + "'");
        if (nt.name.size() > 0xffff)
            throw std::invalid_argument("checkpoint: name too long: " + nt.name);
        if (nt.tensor->shape.size() > 0xff)
            throw std::invalid_argument("checkpoint: rank too large for " + nt.name);
    }
    std::vector<uint8_t> out(kMagic, kMagic + sizeof(kMagic));
    put_u32(out, static_cast<uint32_t>(tensors.size()));
    for (const auto& nt : tensors) {
        put_u16(out, static_cast<uint16_t>(nt.name.size()));
        out.insert(out.end(), nt.name.begin(), nt.name.end());
        out.push_back(static_cast<uint8_t>(nt.tensor->shape.size()));
        for (int64_t e : nt.tensor->shape) put_u32(out, static_cast<uint32_t>(e));
        out.push_back(static_cast<uint8_t>(dtype));
        if (dtype == CkptDType::F64) {
            for (double v : nt.tensor->values) put_u64(out, std::bit_cast<uint64_t>(v));
        } else {
            for (double v : nt.tensor->values)
                put_u32(out, std::bit_cast<uint32_t>(static_cast<float>(v)));
        }
    }
    return out;
}

std::vector<NamedTensor> load_checkpoint(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
        throw DataError("checkpoint: bad magic");
    Reader r{bytes, sizeof(kMagic)};
    const uint32_t count = r.u32("record count");
    std::vector<NamedTensor> records;
    records.reserve(count);
    std::set<std::string> names;
    for (uint32_t i = 0; i < count; ++i) {
        const uint16_t name_len = r.u16("name length");
        r.need(name_len, "name");
        std::string name(reinterpret_cast<const char*>(bytes.data() + r.pos), name_len);
        r.pos += name_len;
        if (!names.insert(name).second)
            throw DataError("checkpoint: duplicate name '" + name + "'");
        const uint8_t rank = r.u8("rank");
        Shape shape(rank);
        for (uint8_t d = 0; d < rank; ++d) shape[d] = static_cast<int64_t>(r.u32("extent"));
        const uint8_t code = r.u8("element type");
        if (code > 1) throw DataError("checkpoint: unknown element type code");
        auto t = Tensor::create(shape);
        const int64_t n = t->numel();
        if (code == static_cast<uint8_t>(CkptDType::F64)) {
            for (int64_t j = 0; j < n; ++j) t->values[j] = std::bit_cast<double>(r.u64("values"));
        } else {
            for (int64_t j = 0; j < n; ++j)
                t->values[j] = static_cast<double>(std::bit_cast<float>(r.u32("values")));
        }
        records.push_back({std::move(name), std::move(t)});
    }
    return records;
}

void load_into_params(const std::vector<NamedTensor>& params,
                      const std::vector<NamedTensor>& records) {
    std::unordered_map<std::string, const NamedTensor*> index;
    for (const auto& r : records) index.emplace(r.name, &r);
    for (const auto& p : params) {
        auto it = index.find(p.name);
        if (it == index.end())
            throw DataError("checkpoint: missing parameter '" + p.name + "'");
        if (it->second->tensor->shape != p.tensor->shape)
            throw DataError("checkpoint: shape mismatch for '" + p.name + "': " +
                            shape_str(it->second->tensor->shape) + " vs expected " +
                            shape_str(p.tensor->shape));
        p.tensor->values = it->second->tensor->values;
    }
}

}  // namespace sal
