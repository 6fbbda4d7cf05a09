#include "sal/ram.hpp"

#include <stdexcept>

#include "sal/ops.hpp"
#include "sal/optim.hpp"

namespace sal {

namespace {
constexpr int64_t kKernel = 5;
constexpr int64_t kPad = 2;
}  // namespace

ConvGruCell::ConvGruCell(int64_t in_c, int64_t hidden_c, Rng& rng)
    : in_channels(in_c), hidden_channels(hidden_c) {
    w_z = xavier_init({hidden_c, in_c, kKernel, kKernel}, rng);
    u_z = xavier_init({hidden_c, hidden_c, kKernel, kKernel}, rng);
    b_z = Tensor::zeros({hidden_c});
    w_r = xavier_init({hidden_c, in_c, kKernel, kKernel}, rng);
    u_r = xavier_init({hidden_c, hidden_c, kKernel, kKernel}, rng);
    b_r = Tensor::zeros({hidden_c});
    w_h = xavier_init({hidden_c, in_c, kKernel, kKernel}, rng);
    u_h = xavier_init({hidden_c, hidden_c, kKernel, kKernel}, rng);
    b_h = Tensor::zeros({hidden_c});
}

void ConvGruCell::append_params(const std::string& prefix, std::vector<NamedTensor>& out) const {
    out.push_back({prefix + ".w_z", w_z});
    out.push_back({prefix + ".u_z", u_z});
    out.push_back({prefix + ".b_z", b_z});
    out.push_back({prefix + ".w_r", w_r});
    out.push_back({prefix + ".u_r", u_r});
    out.push_back({prefix + ".b_r", b_r});
    out.push_back({prefix + ".w_h", w_h});
    out.push_back({prefix + ".u_h", u_h});
    out.push_back({prefix + ".b_h", b_h});
}

TensorPtr convgru_step(const ConvGruCell& cell, const TensorPtr& x_t, const TensorPtr& h_prev) {
    if (x_t->shape.size() != 4 || h_prev->shape.size() != 4)
        throw std::invalid_argument("convgru_step: inputs must be NCHW");
    if (x_t->shape[1] != cell.in_channels || h_prev->shape[1] != cell.hidden_channels)
        throw std::invalid_argument("convgru_step: channel mismatch with cell");
    if (x_t->shape[2] != h_prev->shape[2] || x_t->shape[3] != h_prev->shape[3] ||
        x_t->shape[0] != h_prev->shape[0])
        throw std::invalid_argument("convgru_step: input/hidden extent mismatch");
    auto z = logistic(add(conv2d(x_t, cell.w_z, cell.b_z, 1, kPad),
                          conv2d(h_prev, cell.u_z, nullptr, 1, kPad)));
    auto r = logistic(add(conv2d(x_t, cell.w_r, cell.b_r, 1, kPad),
                          conv2d(h_prev, cell.u_r, nullptr, 1, kPad)));
    auto candidate = tanh_act(add(conv2d(x_t, cell.w_h, cell.b_h, 1, kPad),
                                  conv2d(mul(r, h_prev), cell.u_h, nullptr, 1, kPad)));
    return add(mul(one_minus(z), h_prev), mul(z, candidate));
}

Ram::Ram(int64_t feature_channels, int64_t hidden_channels, Rng& rng)
    : encoder(feature_channels, hidden_channels, rng),
      decoder(hidden_channels, hidden_channels, rng) {
    head_weight = xavier_init({1, hidden_channels, 1, 1}, rng);
    head_bias = Tensor::zeros({1});
}

std::vector<TensorPtr> Ram::rollout(const std::vector<TensorPtr>& features) const {
    if (features.empty()) throw std::invalid_argument("ram_rollout: empty feature sequence");
    const auto& f0 = features[0]->shape;
    auto h_enc = Tensor::zeros({f0[0], encoder.hidden_channels, f0[2], f0[3]});
    auto h_dec = Tensor::zeros({f0[0], decoder.hidden_channels, f0[2], f0[3]});
    std::vector<TensorPtr> preds;
    preds.reserve(features.size());
    for (const auto& f : features) {
        h_enc = convgru_step(encoder, f, h_enc);
        h_dec = convgru_step(decoder, h_enc, h_dec);
        preds.push_back(conv2d(h_dec, head_weight, head_bias));
    }
    return preds;
}

void Ram::append_params(const std::string& prefix, std::vector<NamedTensor>& out) const {
    encoder.append_params(prefix + ".enc", out);
    decoder.append_params(prefix + ".dec", out);
    out.push_back({prefix + ".out.weight", head_weight});
    out.push_back({prefix + ".out.bias", head_bias});
}

}  // namespace sal
