#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sal/gradcheck.hpp"
#include "sal/ops.hpp"
#include "sal/optim.hpp"
#include "sal/rng.hpp"
#include "sal/tensor.hpp"

using namespace sal;

namespace {

TensorPtr randt(Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
    auto t = Tensor::create(std::move(shape));
    for (auto& v : t->values) v = rng.uniform(lo, hi);
    return t;
}

}  // namespace

TEST_CASE("rng: seeded stream is reproducible") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng c(43);
    CHECK(Rng(42).next_u64() != c.next_u64());
}

TEST_CASE("xavier_init: bound for shape [1]") {
    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        auto t = xavier_init({1}, rng);
        CHECK(std::abs(t->values[0]) <= std::sqrt(3.0));
    }
}

TEST_CASE("xavier_init: sample variance matches 2/(fan_in+fan_out)") {
    Rng rng(11);
    // 100k draws via repeated [64,64] inits
    double sum = 0.0, sq = 0.0;
    int64_t n = 0;
    for (int rep = 0; rep < 25; ++rep) {
        auto t = xavier_init({64, 64}, rng);
        for (double v : t->values) {
            sum += v;
            sq += v * v;
            ++n;
        }
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    const double expect = 2.0 / (64.0 + 64.0);
    CHECK(var == doctest::Approx(expect).epsilon(0.10));
}

TEST_CASE("xavier_init: same seed gives bit-identical tensors") {
    Rng a(5), b(5);
    auto t1 = xavier_init({3, 4, 5, 5}, a);
    auto t2 = xavier_init({3, 4, 5, 5}, b);
    CHECK(t1->values == t2->values);
}

TEST_CASE("xavier_init: zero extent rejected") {
    Rng rng(1);
    CHECK_THROWS_AS(xavier_init({0}, rng), std::invalid_argument);
    CHECK_THROWS_AS(xavier_init({}, rng), std::invalid_argument);
}

TEST_CASE("conv2d: all-ones 3x3 against 3x3 kernel gives 9") {
    auto x = Tensor::full({1, 1, 3, 3}, 1.0);
    auto w = Tensor::full({1, 1, 3, 3}, 1.0);
    auto y = conv2d(x, w, nullptr, 1, 0, 1);
    CHECK(y->shape == Shape{1, 1, 1, 1});
    CHECK(y->values[0] == doctest::Approx(9.0));
}

TEST_CASE("conv2d: dilation 2 over a 5x5 all-ones field") {
    auto x = Tensor::full({1, 1, 5, 5}, 1.0);
    auto w = Tensor::full({1, 1, 3, 3}, 1.0);
    auto y = conv2d(x, w, nullptr, 1, 0, 2);
    CHECK(y->shape == Shape{1, 1, 1, 1});
    CHECK(y->values[0] == doctest::Approx(9.0));
}

TEST_CASE("conv2d: matches the loop oracle") {
    Rng rng(3);
    auto x = randt({1, 2, 6, 6}, rng);
    auto w = randt({3, 2, 3, 3}, rng);
    auto b = randt({3}, rng);
    auto y = conv2d(x, w, b, 1, 1, 1);
    auto ref = oracle::conv2d(*x, *w, b->values, 1, 1, 1);
    REQUIRE(y->shape == ref->shape);
    for (int64_t i = 0; i < y->numel(); ++i)
        CHECK(y->values[i] == doctest::Approx(ref->values[i]).epsilon(1e-12));
}

TEST_CASE("conv2d: one-hot center kernel with symmetric padding is identity") {
    Rng rng(9);
    auto x = randt({1, 2, 5, 7}, rng);
    auto w = Tensor::zeros({2, 2, 3, 3});
    // kernel picking out its own channel's center tap
    w->values[(0 * 2 + 0) * 9 + 4] = 1.0;
    w->values[(1 * 2 + 1) * 9 + 4] = 1.0;
    auto y = conv2d(x, w, nullptr, 1, 1, 1);
    REQUIRE(y->shape == x->shape);
    for (int64_t i = 0; i < x->numel(); ++i) CHECK(y->values[i] == x->values[i]);
}

TEST_CASE("conv2d: channel mismatch and empty output rejected") {
    auto x = Tensor::full({1, 2, 4, 4}, 1.0);
    auto w = Tensor::full({1, 3, 3, 3}, 1.0);
    CHECK_THROWS_AS(conv2d(x, w, nullptr), std::invalid_argument);
    auto w2 = Tensor::full({1, 2, 5, 5}, 1.0);
    CHECK_THROWS_AS(conv2d(x, w2, nullptr, 1, 0, 2), std::invalid_argument);
}

TEST_CASE("maxpool2: basics and oracle") {
    auto x = Tensor::from({1, 1, 2, 2}, {1, 2, 3, 4});
    auto y = maxpool2(x);
    CHECK(y->values == std::vector<double>{4});

    auto c = Tensor::full({1, 3, 6, 6}, 0.25);
    auto yc = maxpool2(c);
    CHECK(yc->shape == Shape{1, 3, 3, 3});
    for (double v : yc->values) CHECK(v == 0.25);

    Rng rng(17);
    auto r = randt({1, 1, 8, 8}, rng);
    auto yr = maxpool2(r);
    auto ref = oracle::maxpool2(*r);
    CHECK(yr->values == ref->values);

    auto tiny = Tensor::full({1, 1, 1, 4}, 0.0);
    CHECK_THROWS_AS(maxpool2(tiny), std::invalid_argument);
}

TEST_CASE("maxpool2: backward is one-hot per window") {
    Rng rng(21);
    auto x = randt({1, 1, 4, 4}, rng);
    x->set_trainable(true);
    auto loss = sum(maxpool2(x));
    backward(loss);
    int64_t nonzero = 0;
    for (double g : x->grad) {
        CHECK((g == 0.0 || g == 1.0));
        nonzero += g == 1.0;
    }
    CHECK(nonzero == 4);
}

TEST_CASE("fully_connected: identity, zero weight, and dot-product oracle") {
    auto x = Tensor::from({1, 3}, {1.0, -2.0, 3.0});
    auto eye = Tensor::zeros({3, 3});
    for (int i = 0; i < 3; ++i) eye->values[i * 3 + i] = 1.0;
    auto zero_b = Tensor::zeros({3});
    CHECK(fully_connected(x, eye, zero_b)->values == x->values);

    auto zero_w = Tensor::zeros({3, 3});
    auto b = Tensor::from({3}, {0.5, -0.25, 4.0});
    CHECK(fully_connected(x, zero_w, b)->values == b->values);

    Rng rng(5);
    auto xr = randt({1, 8}, rng);
    auto w = randt({3, 8}, rng);
    auto br = randt({3}, rng);
    auto y = fully_connected(xr, w, br);
    auto ref = oracle::fully_connected(xr->values, w->values, br->values, 8, 3);
    for (int i = 0; i < 3; ++i) CHECK(y->values[i] == doctest::Approx(ref[i]).epsilon(1e-12));

    auto bad = randt({1, 7}, rng);
    CHECK_THROWS_AS(fully_connected(bad, w, br), std::invalid_argument);
}

TEST_CASE("activations: fixed points and derivative vs central difference") {
    auto zero = Tensor::scalar(0.0);
    CHECK(logistic(zero)->values[0] == doctest::Approx(0.5));
    CHECK(tanh_act(zero)->values[0] == doctest::Approx(0.0));
    CHECK(relu(Tensor::scalar(-1.0))->values[0] == 0.0);

    auto err = grad_check([](const TensorPtr& t) { return sum(logistic(t)); },
                          Tensor::scalar(0.3), 1e-5);
    CHECK(err < 1e-6);
}

TEST_CASE("bilinear_resize: constants, midpoints, identity, oracle") {
    auto one = Tensor::full({1, 1, 1, 1}, 0.7);
    auto up = bilinear_resize(one, 4, 5);
    for (double v : up->values) CHECK(v == 0.7);

    auto row = Tensor::from({1, 1, 1, 2}, {0.0, 2.0});
    auto mid = bilinear_resize(row, 1, 3);
    CHECK(mid->values == std::vector<double>{0.0, 1.0, 2.0});

    Rng rng(13);
    auto x = randt({1, 1, 4, 4}, rng);
    auto self_size = bilinear_resize(x, 4, 4);
    for (int64_t i = 0; i < x->numel(); ++i)
        CHECK(std::abs(self_size->values[i] - x->values[i]) < 1e-12);

    auto y = bilinear_resize(x, 7, 7);
    auto plane = Tensor::from({4, 4}, x->values);
    auto ref = oracle::bilinear_resize(*plane, 7, 7);
    for (int64_t i = 0; i < y->numel(); ++i)
        CHECK(y->values[i] == doctest::Approx(ref->values[i]).epsilon(1e-12));

    CHECK_THROWS_AS(bilinear_resize(x, 0, 4), std::invalid_argument);
}

TEST_CASE("backward: sum and quadratic gradients") {
    auto x = Tensor::from({5}, {1, 2, 3, 4, 5}, true);
    backward(sum(x));
    CHECK(x->grad == std::vector<double>(5, 1.0));

    auto x2 = Tensor::from({2}, {1.0, 2.0}, true);
    backward(sum(mul(x2, x2)));
    CHECK(x2->grad[0] == doctest::Approx(2.0));
    CHECK(x2->grad[1] == doctest::Approx(4.0));
}

TEST_CASE("backward: rejects non-scalar loss") {
    auto x = Tensor::from({2}, {1.0, 2.0}, true);
    CHECK_THROWS_AS(backward(add(x, x)), std::invalid_argument);
}

TEST_CASE("backward: fan-out accumulates both branch gradients") {
    auto x = Tensor::from({3}, {1.0, 2.0, 3.0}, true);
    auto branch_a = scale(x, 2.0);
    auto branch_b = mul(x, x);
    backward(add(sum(branch_a), sum(branch_b)));
    for (int i = 0; i < 3; ++i)
        CHECK(x->grad[i] == doctest::Approx(2.0 + 2.0 * x->values[i]));
}

TEST_CASE("backward: repeated calls accumulate additively on leaves") {
    auto x = Tensor::from({2}, {1.0, 1.0}, true);
    auto loss = sum(scale(x, 3.0));
    backward(loss);
    backward(loss);
    CHECK(x->grad == std::vector<double>{6.0, 6.0});
    x->zero_grad();
    backward(loss);
    CHECK(x->grad == std::vector<double>{3.0, 3.0});
}

TEST_CASE("backward: composite conv graph passes grad_check") {
    Rng rng(23);
    auto w = randt({2, 1, 3, 3}, rng);
    auto b = randt({2}, rng);
    auto x = randt({1, 1, 5, 5}, rng);
    auto err_w = grad_check(
        [&](const TensorPtr&) { return mean(logistic(conv2d(x, w, b, 1, 1, 1))); }, w, 1e-5);
    CHECK(err_w < 1e-4);
    w->set_trainable(false);
    auto err_b = grad_check(
        [&](const TensorPtr&) { return mean(logistic(conv2d(x, w, b, 1, 1, 1))); }, b, 1e-5);
    CHECK(err_b < 1e-4);
}

TEST_CASE("adam_step: first step moves by ~lr against unit gradient") {
    auto p = Tensor::full({4}, 1.0);
    p->ensure_grad();
    for (auto& g : p->grad) g = 1.0;
    auto st = AdamState::for_param(*p, 0.1);
    adam_step(*p, st);
    CHECK(st.t == 1);
    for (double v : p->values) CHECK(v == doctest::Approx(0.9).epsilon(1e-6));
}

TEST_CASE("adam_step: zero gradient leaves parameters unchanged") {
    auto p = Tensor::full({3}, 2.5);
    p->ensure_grad();
    auto st = AdamState::for_param(*p, 0.1);
    adam_step(*p, st);
    for (double v : p->values) CHECK(v == 2.5);
}

TEST_CASE("adam_step: missing gradient rejected") {
    auto p = Tensor::full({3}, 1.0);
    auto st = AdamState::for_param(*p, 0.1);
    CHECK_THROWS_AS(adam_step(*p, st), std::invalid_argument);
}

TEST_CASE("adam: identical seeded runs give bit-identical parameters") {
    auto run = []() {
        Rng rng(99);
        auto p = xavier_init({8}, rng);
        p->set_trainable(true);
        auto st = AdamState::for_param(*p, 1e-2);
        for (int step = 0; step < 20; ++step) {
            p->ensure_grad();
            p->zero_grad();
            backward(sum(mul(p, p)));
            adam_step(*p, st);
        }
        return p->values;
    };
    CHECK(run() == run());
}

TEST_CASE("grad_check: exact for linear, catches corrupted backward") {
    auto x = Tensor::from({4}, {0.5, -1.0, 2.0, 0.25});
    auto err = grad_check([](const TensorPtr& t) { return sum(scale(t, 3.0)); }, x, 1e-5);
    CHECK(err < 1e-10);

    // an op whose backward rule is deliberately wrong by a factor of 2
    auto corrupt = [](const TensorPtr& t) {
        auto out = Tensor::create(t->shape);
        for (int64_t i = 0; i < t->numel(); ++i) out->values[i] = 2.0 * t->values[i];
        attach_op(out, {t}, [t](Tensor& self) {
            t->ensure_grad();
            for (int64_t i = 0; i < t->numel(); ++i) t->grad[i] += 4.0 * self.grad[i];
        });
        return sum(out);
    };
    auto y = Tensor::from({3}, {1.0, 2.0, 3.0});
    CHECK(grad_check(corrupt, y, 1e-5) > 1e-4);
}

TEST_CASE("grad_check: built-in op suite passes at 1e-4") {
    for (const auto& r : run_gradcheck_suite("")) {
        INFO(r.op << " max error " << r.max_error);
        CHECK(r.passed);
    }
}

TEST_CASE("tensor: invariants") {
    CHECK_THROWS_AS(Tensor::create({2, 0}), std::invalid_argument);
    CHECK_THROWS_AS(Tensor::from({3}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(Tensor::full({2}, 1.0)->item(), std::invalid_argument);
    auto t = Tensor::scalar(5.0);
    CHECK(t->item() == 5.0);
}
