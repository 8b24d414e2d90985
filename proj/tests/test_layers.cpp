#include <catch2/catch_amalgamated.hpp>

#include "dnajscc/layers.hpp"
#include "support/test_util.hpp"

using namespace dnajscc;
using testsupport::central_diff;
using testsupport::random_tensor;
using testsupport::rel_err;

namespace {

// Scalar objective for gradient checks: fixed random projection of the
// layer's output.
Tensor projection_like(const Tensor& out, std::mt19937_64& rng) {
    return random_tensor(out.shape, rng);
}

double dot(const Tensor& a, const Tensor& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) s += a.data[i] * b.data[i];
    return s;
}

} // namespace

TEST_CASE("conv2d matches the hand-worked example", "[layers]") {
    Conv2d conv("t", 1, 1, 3, 1, 1);
    conv.weight_.value.fill(1.0);
    conv.bias_.value[0] = 0.5;
    Tensor x({1, 1, 3, 3});
    for (int i = 0; i < 9; ++i) x.data[i] = i + 1;
    const Tensor y = conv.forward(x);
    REQUIRE(y.shape == std::vector<int>{1, 1, 3, 3});
    const double want[] = {12.5, 21.5, 16.5, 27.5, 45.5, 33.5, 24.5, 39.5, 28.5};
    for (int i = 0; i < 9; ++i) CHECK(y.data[i] == Catch::Approx(want[i]));
}

TEST_CASE("conv2d agrees with a naive direct convolution", "[layers]") {
    std::mt19937_64 rng(101);
    for (const auto& [in_c, out_c, k, stride, pad, h, w] :
         {std::tuple{3, 4, 3, 1, 1, 8, 8}, std::tuple{2, 5, 3, 2, 1, 9, 7},
          std::tuple{1, 2, 4, 2, 1, 6, 6}}) {
        Conv2d conv("t", in_c, out_c, k, stride, pad);
        conv.init(rng);
        const Tensor x = random_tensor({2, in_c, h, w}, rng);
        const Tensor got = conv.forward(x);
        const Tensor want =
            testsupport::naive_conv2d(x, conv.weight_.value, conv.bias_.value, k, stride, pad);
        REQUIRE(got.shape == want.shape);
        for (std::size_t i = 0; i < got.data.size(); ++i)
            CHECK(got.data[i] == Catch::Approx(want.data[i]).margin(1e-10));
    }
}

TEST_CASE("transposed conv matches the hand-worked example", "[layers]") {
    ConvTranspose2d tc("t", 1, 1, 3, 2, 1);
    for (int i = 0; i < 9; ++i) tc.weight_.value.data[i] = i + 1;
    tc.bias_.value[0] = 0.0;
    Tensor x({1, 1, 2, 2});
    x.data = {1, 2, 3, 4};
    const Tensor y = tc.forward(x);
    REQUIRE(y.shape == std::vector<int>{1, 1, 3, 3});
    const double want[] = {5, 14, 10, 14, 36, 24, 15, 34, 20};
    for (int i = 0; i < 9; ++i) CHECK(y.data[i] == Catch::Approx(want[i]));
}

TEST_CASE("transposed conv is the adjoint of conv", "[layers]") {
    // <conv(x), y> == <x, tconv(y)> when they share the same kernel and the
    // tconv bias is zero; this pins the geometry mapping.
    std::mt19937_64 rng(77);
    Conv2d conv("c", 2, 3, 3, 2, 1);
    conv.init(rng);
    conv.bias_.value.zero();
    ConvTranspose2d tc("t", 3, 2, 3, 2, 1);
    // conv weight (out,in*k*k) reinterpreted as tconv weight (in=3 -> out=2)
    for (int oc = 0; oc < 3; ++oc)
        for (int ic = 0; ic < 2; ++ic)
            for (int t = 0; t < 9; ++t)
                tc.weight_.value.data[(static_cast<std::size_t>(oc) * 2 + ic) * 9 + t] =
                    conv.weight_.value.data[(static_cast<std::size_t>(oc) * 2 + ic) * 9 + t];
    tc.bias_.value.zero();

    // 7x7 input: the only extent near 8 whose stride-2 conv covers every
    // row, so conv and tconv are exact adjoints of one another.
    const Tensor x = random_tensor({1, 2, 7, 7}, rng);
    const Tensor cx = conv.forward(x);
    const Tensor y = random_tensor(cx.shape, rng);
    const Tensor ty = tc.forward(y);
    REQUIRE(ty.shape == x.shape);
    CHECK(dot(cx, y) == Catch::Approx(dot(x, ty)).epsilon(1e-10));
}

TEST_CASE("batch norm training statistics match the frozen case", "[layers]") {
    BatchNorm2d bn("t", 1);
    bn.gamma_.value[0] = 2.0;
    bn.beta_.value[0] = 0.5;
    Tensor x({4, 1, 1, 1});
    x.data = {1, 2, 3, 4};
    const Tensor y = bn.forward(x, /*training=*/true);
    const double want[] = {-2.18327084, -0.39442361, 1.39442361, 3.18327084};
    for (int i = 0; i < 4; ++i) CHECK(y.data[i] == Catch::Approx(want[i]).margin(1e-7));
    CHECK(bn.running_mean_.value[0] == Catch::Approx(0.25));
    CHECK(bn.running_var_.value[0] == Catch::Approx(1.0666666666666667));
}

TEST_CASE("batch norm evaluation uses running averages", "[layers]") {
    BatchNorm2d bn("t", 1);
    std::mt19937_64 rng(5);
    // Drive the running stats with a few training batches, then check that
    // evaluation normalizes with the stored averages, not the batch.
    for (int it = 0; it < 50; ++it) {
        Tensor x = random_tensor({8, 1, 2, 2}, rng, 2.0, 4.0);
        bn.forward(x, true);
    }
    Tensor probe({1, 1, 1, 1});
    probe.data = {bn.running_mean_.value[0]};
    const Tensor y = bn.forward(probe, /*training=*/false);
    CHECK(y.data[0] == Catch::Approx(0.0).margin(1e-9)); // gamma*(0)+beta with beta=0
    const double rm = bn.running_mean_.value[0];
    bn.forward(probe, false);
    CHECK(bn.running_mean_.value[0] == rm); // evaluation must not touch the buffers
}

TEST_CASE("layer gradients agree with finite differences", "[layers]") {
    std::mt19937_64 rng(900);
    const double tol = 1e-6;

    SECTION("conv2d") {
        Conv2d conv("t", 2, 3, 3, 2, 1);
        conv.init(rng);
        Tensor x = random_tensor({2, 2, 6, 6}, rng);
        Tensor proj = projection_like(conv.forward(x), rng);
        auto loss = [&] { return dot(conv.forward(x), proj); };

        conv.weight_.grad.zero();
        conv.bias_.grad.zero();
        conv.forward(x);
        const Tensor dx = conv.backward(proj);
        for (std::size_t i : {std::size_t{0}, std::size_t{17}, std::size_t{143}}) {
            CHECK(rel_err(dx.data[i], central_diff(loss, x.data[i])) < tol);
        }
        for (std::size_t i : {std::size_t{0}, std::size_t{25}, std::size_t{53}})
            CHECK(rel_err(conv.weight_.grad.data[i], central_diff(loss, conv.weight_.value.data[i])) < tol);
        CHECK(rel_err(conv.bias_.grad[1], central_diff(loss, conv.bias_.value.data[1])) < tol);
    }

    SECTION("transposed conv") {
        ConvTranspose2d tc("t", 3, 2, 4, 2, 1);
        tc.init(rng);
        Tensor x = random_tensor({2, 3, 4, 4}, rng);
        Tensor proj = projection_like(tc.forward(x), rng);
        auto loss = [&] { return dot(tc.forward(x), proj); };

        tc.weight_.grad.zero();
        tc.bias_.grad.zero();
        tc.forward(x);
        const Tensor dx = tc.backward(proj);
        for (std::size_t i : {std::size_t{3}, std::size_t{40}, std::size_t{90}})
            CHECK(rel_err(dx.data[i], central_diff(loss, x.data[i])) < tol);
        for (std::size_t i : {std::size_t{1}, std::size_t{30}, std::size_t{80}})
            CHECK(rel_err(tc.weight_.grad.data[i], central_diff(loss, tc.weight_.value.data[i])) < tol);
        CHECK(rel_err(tc.bias_.grad[0], central_diff(loss, tc.bias_.value.data[0])) < tol);
    }

    SECTION("batch norm in training mode") {
        BatchNorm2d bn("t", 2);
        std::uniform_real_distribution<double> u(0.5, 1.5);
        bn.gamma_.value[0] = u(rng);
        bn.gamma_.value[1] = u(rng);
        Tensor x = random_tensor({3, 2, 2, 2}, rng);
        Tensor proj = projection_like(bn.forward(x, true), rng);
        auto loss = [&] { return dot(bn.forward(x, true), proj); };

        bn.gamma_.grad.zero();
        bn.beta_.grad.zero();
        bn.forward(x, true);
        const Tensor dx = bn.backward(proj);
        for (std::size_t i : {std::size_t{0}, std::size_t{9}, std::size_t{23}})
            CHECK(rel_err(dx.data[i], central_diff(loss, x.data[i])) < 1e-5);
        CHECK(rel_err(bn.gamma_.grad[0], central_diff(loss, bn.gamma_.value.data[0])) < tol);
        CHECK(rel_err(bn.beta_.grad[1], central_diff(loss, bn.beta_.value.data[1])) < tol);
    }

    SECTION("prelu") {
        PReLU pr("t");
        Tensor x = random_tensor({2, 8}, rng);
        Tensor proj = projection_like(pr.forward(x), rng);
        auto loss = [&] { return dot(pr.forward(x), proj); };

        pr.slope_.grad.zero();
        pr.forward(x);
        const Tensor dx = pr.backward(proj);
        for (std::size_t i = 0; i < x.data.size(); ++i)
            CHECK(rel_err(dx.data[i], central_diff(loss, x.data[i])) < tol);
        CHECK(rel_err(pr.slope_.grad[0], central_diff(loss, pr.slope_.value.data[0])) < tol);
    }

    SECTION("copy-merging 1-d conv") {
        Conv1dMerge merge("t", 3);
        merge.init(rng);
        Tensor x = random_tensor({2, 3, 10}, rng);
        Tensor proj = projection_like(merge.forward(x), rng);
        auto loss = [&] { return dot(merge.forward(x), proj); };

        merge.weight_.grad.zero();
        merge.bias_.grad.zero();
        merge.forward(x);
        const Tensor dx = merge.backward(proj);
        for (std::size_t i : {std::size_t{0}, std::size_t{15}, std::size_t{59}})
            CHECK(rel_err(dx.data[i], central_diff(loss, x.data[i])) < tol);
        for (std::size_t i = 0; i < 9; ++i)
            CHECK(rel_err(merge.weight_.grad.data[i], central_diff(loss, merge.weight_.value.data[i])) < tol);
        CHECK(rel_err(merge.bias_.grad[0], central_diff(loss, merge.bias_.value.data[0])) < tol);
    }
}

TEST_CASE("fan-in initialization stays inside its bound", "[layers]") {
    std::mt19937_64 rng(3);
    Conv2d conv("t", 4, 8, 3, 1, 1);
    conv.init(rng);
    const double bound = 1.0 / std::sqrt(4.0 * 3 * 3);
    for (double v : conv.weight_.value.data) {
        CHECK(v <= bound);
        CHECK(v >= -bound);
    }
    double mn = 1e9, mx = -1e9;
    for (double v : conv.weight_.value.data) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    CHECK(mx > 0.5 * bound);  // actually spans the interval
    CHECK(mn < -0.5 * bound);
}
