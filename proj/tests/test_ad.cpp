#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "f2n/ad/adam.hpp"
#include "f2n/ad/backward.hpp"
#include "f2n/ad/ops.hpp"
#include "f2n/rng.hpp"
#include "fd_check.hpp"

using namespace f2n;
using namespace f2n::ad;

namespace {

std::vector<double> random_values(std::size_t n, Rng& rng, double lo = 0.3, double hi = 1.7) {
    std::vector<double> v(n);
    for (double& e : v) e = rng.uniform(lo, hi);
    return v;
}

// Scalarizes an op output by dotting with a fixed random vector, so the FD
// check exercises the whole Jacobian, then audits d loss / d x.
void audit_unary(const char* name, const std::function<Tensor(const Tensor&)>& op, Shape in_shape,
                 Rng& rng, double lo = 0.3, double hi = 1.7, double tol = 1e-4) {
    CAPTURE(name);
    auto xv = random_values(static_cast<std::size_t>(numel(in_shape)), rng, lo, hi);
    Tensor probe = op(Tensor::leaf(in_shape, xv));
    auto rvec = random_values(static_cast<std::size_t>(probe.size()), rng, -1.0, 1.0);
    Tensor r = Tensor::leaf(probe.shape(), rvec);

    auto loss_of = [&](const std::vector<double>& vals) {
        Tensor x = Tensor::leaf(in_shape, vals);
        return sum(mul(op(x), r)).item();
    };
    Tensor x = Tensor::leaf(in_shape, xv, true);
    Tensor loss = sum(mul(op(x), r));
    auto analytic = backward(loss, {x})[0].values();
    auto numeric = fd::gradient(loss_of, xv);
    CHECK(fd::max_rel_err(analytic, numeric) < tol);
}

}  // namespace

TEST_CASE("forward op examples") {
    Tensor a = Tensor::leaf({2}, {-1.0, 0.5});
    CHECK(abs(a).values() == std::vector<double>{1.0, 0.5});

    Tensor x = Tensor::full({1, 3, 3}, 1.0);
    Tensor w = Tensor::full({1, 1, 3, 3}, 1.0);
    Tensor y = conv2d(x, w, 1, 0);
    CHECK(y.shape() == Shape{1, 1, 1});
    CHECK(y.at(0) == doctest::Approx(9.0));

    Tensor l = leaky_relu(Tensor::leaf({2}, {-1.0, 2.0}), 0.2);
    CHECK(l.values() == std::vector<double>{-0.2, 2.0});
}

TEST_CASE("simple derivatives") {
    Tensor x = Tensor::scalar(3.0, true);
    Tensor y = square(x);
    CHECK(backward(y, {x})[0].item() == doctest::Approx(6.0));

    // d2(x^3)/dx2 at 2 via backward-of-backward.
    Tensor z = Tensor::scalar(2.0, true);
    Tensor cubed = mul(mul(z, z), z);
    Tensor g1 = backward(cubed, {z}, /*create_graph=*/true)[0];
    CHECK(g1.item() == doctest::Approx(12.0));  // 3x^2
    Tensor g2 = backward(g1, {z})[0];
    CHECK(g2.item() == doctest::Approx(12.0));  // 6x
}

TEST_CASE("fan-out accumulates path contributions") {
    Tensor x = Tensor::leaf({3}, {1.0, 2.0, 3.0}, true);
    Tensor y = add(mul(x, x), x);  // y = x^2 + x, dy/dx = 2x + 1
    Tensor g = backward(sum(y), {x})[0];
    CHECK(g.values()[0] == doctest::Approx(3.0));
    CHECK(g.values()[1] == doctest::Approx(5.0));
    CHECK(g.values()[2] == doctest::Approx(7.0));
}

TEST_CASE("finite-difference audit of every forward op") {
    Rng rng(20240);
    Shape img{2, 5, 6};

    audit_unary("affine", [](const Tensor& x) { return affine(x, 1.7, -0.3); }, img, rng);
    audit_unary("abs", [](const Tensor& x) { return abs(x); }, img, rng);
    audit_unary("square", [](const Tensor& x) { return square(x); }, img, rng);
    audit_unary("sqrt", [](const Tensor& x) { return sqrt(x); }, img, rng);
    audit_unary("recip", [](const Tensor& x) { return recip(x); }, img, rng);
    audit_unary("sigmoid", [](const Tensor& x) { return sigmoid(x); }, img, rng, -2.0, 2.0);
    audit_unary("softplus", [](const Tensor& x) { return softplus(x); }, img, rng, -2.0, 2.0);
    audit_unary("leaky_relu", [](const Tensor& x) { return leaky_relu(x, 0.2); }, img, rng);
    audit_unary("sum", [](const Tensor& x) { return sum(x); }, img, rng);
    audit_unary("mean", [](const Tensor& x) { return mean(x); }, img, rng);
    audit_unary("broadcast_scalar",
                [](const Tensor& x) { return broadcast_scalar(sum(x), {2, 3}); }, Shape{}, rng);
    audit_unary("sum_channels", [](const Tensor& x) { return sum_channels(x); }, img, rng);
    audit_unary("bcast_channels", [](const Tensor& x) { return bcast_channels(x, 3); },
                Shape{1, 4, 4}, rng);
    audit_unary("broadcast_bias", [](const Tensor& x) { return broadcast_bias(x, 3, 4); },
                Shape{2}, rng);
    audit_unary("sum_spatial", [](const Tensor& x) { return sum_spatial(x); }, img, rng);
    audit_unary("slice_channels", [](const Tensor& x) { return slice_channels(x, 1, 2); }, img,
                rng);
    audit_unary("crop2d", [](const Tensor& x) { return crop2d(x, 1, 2, 3, 3); }, img, rng);
    audit_unary("pad2d", [](const Tensor& x) { return pad2d(x, 1, 0, 2, 1); }, img, rng);
    audit_unary("nearest_upsample", [](const Tensor& x) { return nearest_upsample(x, 2); }, img,
                rng);
    audit_unary("sum_pool", [](const Tensor& x) { return sum_pool(x, 2); }, Shape{2, 4, 6}, rng);
    audit_unary("avg_pool", [](const Tensor& x) { return avg_pool(x, 2); }, Shape{2, 4, 6}, rng);

    // Binary ops: audit each operand slot.
    Tensor other = Tensor::leaf(img, random_values(60, rng));
    audit_unary("add.lhs", [&](const Tensor& x) { return add(x, other); }, img, rng);
    audit_unary("sub.rhs", [&](const Tensor& x) { return sub(other, x); }, img, rng);
    audit_unary("mul.lhs", [&](const Tensor& x) { return mul(x, other); }, img, rng);
    Tensor map1 = Tensor::leaf({1, 5, 6}, random_values(30, rng));
    audit_unary("mul_broadcast.x", [&](const Tensor& x) { return mul_broadcast(x, map1); }, img,
                rng);
    audit_unary("mul_broadcast.m", [&](const Tensor& m) {
        return mul_broadcast(other, m);
    }, Shape{1, 5, 6}, rng);
    audit_unary("concat.lhs", [&](const Tensor& x) { return concat_channels(x, other); }, img,
                rng);
    audit_unary("concat.rhs", [&](const Tensor& x) { return concat_channels(other, x); }, img,
                rng);
}

TEST_CASE("conv2d gradients vs finite differences") {
    Rng rng(77);
    // 4x4 input, as well as a strided/padded configuration.
    struct Cfg {
        Shape xs, ws;
        int stride, pad;
    };
    for (const Cfg& cfg : {Cfg{{1, 4, 4}, {1, 1, 3, 3}, 1, 0}, Cfg{{2, 5, 5}, {3, 2, 3, 3}, 1, 1},
                           Cfg{{2, 6, 6}, {2, 2, 4, 4}, 2, 1}}) {
        auto xv = random_values(static_cast<std::size_t>(numel(cfg.xs)), rng);
        auto wv = random_values(static_cast<std::size_t>(numel(cfg.ws)), rng, -0.8, 0.8);
        Tensor x = Tensor::leaf(cfg.xs, xv, true);
        Tensor w = Tensor::leaf(cfg.ws, wv, true);
        Tensor y = conv2d(x, w, cfg.stride, cfg.pad);
        auto rvec = random_values(static_cast<std::size_t>(y.size()), rng, -1.0, 1.0);
        Tensor r = Tensor::leaf(y.shape(), rvec);
        Tensor loss = sum(mul(y, r));
        auto grads = backward(loss, {x, w});

        auto loss_x = [&](const std::vector<double>& vals) {
            return sum(mul(conv2d(Tensor::leaf(cfg.xs, vals), Tensor::leaf(cfg.ws, wv), cfg.stride,
                                  cfg.pad),
                           r))
                .item();
        };
        auto loss_w = [&](const std::vector<double>& vals) {
            return sum(mul(conv2d(Tensor::leaf(cfg.xs, xv), Tensor::leaf(cfg.ws, vals), cfg.stride,
                                  cfg.pad),
                           r))
                .item();
        };
        CHECK(fd::max_rel_err(grads[0].values(), fd::gradient(loss_x, xv)) < 1e-4);
        CHECK(fd::max_rel_err(grads[1].values(), fd::gradient(loss_w, wv)) < 1e-4);
    }
}

TEST_CASE("conv gradient kernels are themselves differentiable") {
    Rng rng(123);
    Shape xs{2, 5, 5}, ws{2, 2, 3, 3};
    auto xv = random_values(50, rng);
    auto wv = random_values(36, rng, -0.8, 0.8);
    Tensor w = Tensor::leaf(ws, wv, true);
    Tensor gshape_probe = conv2d(Tensor::leaf(xs, xv), Tensor::leaf(ws, wv), 1, 1);
    auto gv = random_values(static_cast<std::size_t>(gshape_probe.size()), rng, -1.0, 1.0);
    Tensor g = Tensor::leaf(gshape_probe.shape(), gv);

    // d/dw of sum(input_grad(g, w) * r)
    Tensor ig = conv2d_input_grad(g, w, 1, 1, 5, 5);
    auto rv = random_values(static_cast<std::size_t>(ig.size()), rng, -1.0, 1.0);
    Tensor r = Tensor::leaf(ig.shape(), rv);
    auto analytic = backward(sum(mul(ig, r)), {w})[0].values();
    auto loss_w = [&](const std::vector<double>& vals) {
        return sum(mul(conv2d_input_grad(g, Tensor::leaf(ws, vals), 1, 1, 5, 5), r)).item();
    };
    CHECK(fd::max_rel_err(analytic, fd::gradient(loss_w, wv)) < 1e-4);

    // d/dx of sum(weight_grad(x, g) * rw)
    Tensor x = Tensor::leaf(xs, xv, true);
    Tensor wg = conv2d_weight_grad(x, g, 1, 1, 3, 3);
    auto rwv = random_values(static_cast<std::size_t>(wg.size()), rng, -1.0, 1.0);
    Tensor rw = Tensor::leaf(wg.shape(), rwv);
    auto analytic_x = backward(sum(mul(wg, rw)), {x})[0].values();
    auto loss_x = [&](const std::vector<double>& vals) {
        return sum(mul(conv2d_weight_grad(Tensor::leaf(xs, vals), g, 1, 1, 3, 3), rw)).item();
    };
    CHECK(fd::max_rel_err(analytic_x, fd::gradient(loss_x, xv)) < 1e-4);
}

TEST_CASE("hessian-vector product vs finite differences of the gradient") {
    Rng rng(9001);
    Shape ws{2, 2, 3, 3};
    Shape xs{2, 4, 4};
    auto xv = random_values(32, rng);
    auto wv = random_values(36, rng, -0.6, 0.6);
    auto vv = random_values(36, rng, -1.0, 1.0);
    Tensor x = Tensor::leaf(xs, xv);
    Tensor v = Tensor::leaf(ws, vv);

    auto first_grad = [&](const std::vector<double>& wvals) {
        Tensor w = Tensor::leaf(ws, wvals, true);
        Tensor loss = mean(square(leaky_relu(conv2d(x, w, 1, 1), 0.2)));
        return backward(loss, {w})[0].values();
    };

    Tensor w = Tensor::leaf(ws, wv, true);
    Tensor loss = mean(square(leaky_relu(conv2d(x, w, 1, 1), 0.2)));
    Tensor g = backward(loss, {w}, /*create_graph=*/true)[0];
    CHECK(g.requires_grad());
    Tensor hvp = backward(sum(mul(g, v)), {w})[0];

    const double step = 1e-5;
    std::vector<double> wp(wv), wm(wv);
    for (std::size_t i = 0; i < wv.size(); ++i) {
        wp[i] += step * vv[i];
        wm[i] -= step * vv[i];
    }
    auto gp = first_grad(wp);
    auto gm = first_grad(wm);
    std::vector<double> numeric(wv.size());
    for (std::size_t i = 0; i < wv.size(); ++i) numeric[i] = (gp[i] - gm[i]) / (2.0 * step);
    CHECK(fd::max_rel_err(hvp.values(), numeric, 1e-5) < 1e-3);
}

TEST_CASE("first-order mode returns constant gradients") {
    Tensor x = Tensor::scalar(2.0, true);
    Tensor g = backward(mul(mul(x, x), x), {x}, /*create_graph=*/false)[0];
    CHECK_FALSE(g.requires_grad());
}

TEST_CASE("unreachable parameter yields flagged zero gradient") {
    Tensor x = Tensor::scalar(1.5, true);
    Tensor orphan = Tensor::leaf({2}, {1.0, 2.0}, true);
    std::vector<bool> reached;
    auto grads = backward(square(x), {x, orphan}, false, &reached);
    CHECK(reached[0]);
    CHECK_FALSE(reached[1]);
    CHECK(grads[1].values() == std::vector<double>{0.0, 0.0});
}

TEST_CASE("errors: shape mismatch and non-finite values") {
    Tensor a = Tensor::leaf({2}, {1.0, 2.0});
    Tensor b = Tensor::leaf({3}, {1.0, 2.0, 3.0});
    CHECK_THROWS_AS(add(a, b), TensorError);
    CHECK_THROWS_AS(sqrt(Tensor::leaf({1}, {-1.0})), TensorError);
    CHECK_THROWS_AS(recip(Tensor::leaf({1}, {0.0})), TensorError);
    CHECK_THROWS_AS(backward(Tensor::leaf({2}, {1.0, 2.0}, true), {a}), TensorError);
}

TEST_CASE("deterministic forward and backward") {
    auto run = [] {
        Rng rng(5150);
        Tensor x = Tensor::leaf({2, 4, 4}, random_values(32, rng), true);
        Tensor w = Tensor::leaf({2, 2, 3, 3}, random_values(36, rng, -0.5, 0.5), true);
        Tensor loss = mean(abs(sigmoid(conv2d(x, w, 1, 1))));
        auto grads = backward(loss, {x, w});
        std::vector<double> out = {loss.item()};
        out.insert(out.end(), grads[0].values().begin(), grads[0].values().end());
        out.insert(out.end(), grads[1].values().begin(), grads[1].values().end());
        return out;
    };
    CHECK(run() == run());
}

TEST_CASE("adam examples") {
    AdamConfig cfg;
    cfg.lr = 0.1;
    cfg.beta1 = 0.5;
    cfg.beta2 = 0.999;

    SUBCASE("first step moves by about -lr*sign(g)") {
        ParamSet p;
        p.add("w", Tensor::leaf({2}, {1.0, -2.0}, true));
        AdamState st = AdamState::init_for(p);
        std::vector<Tensor> g{Tensor::leaf({2}, {0.3, -0.7})};
        ParamSet q = adam_step(p, g, st, cfg);
        CHECK(q.at(0).values()[0] == doctest::Approx(1.0 - 0.1).epsilon(1e-4));
        CHECK(q.at(0).values()[1] == doctest::Approx(-2.0 + 0.1).epsilon(1e-4));
        CHECK(st.t == 1);
    }

    SUBCASE("zero gradient leaves parameters unchanged") {
        ParamSet p;
        p.add("w", Tensor::leaf({3}, {0.5, -0.25, 4.0}, true));
        AdamState st = AdamState::init_for(p);
        ParamSet q = adam_step(p, {Tensor::zeros({3})}, st, cfg);
        CHECK(q.at(0).values() == p.at(0).values());
    }

    SUBCASE("two steps on f(t)=t^2 decrease f, matching a scalar reference") {
        // Independent scalar Adam, written straight from the update equations.
        double theta = 1.0, m = 0.0, v = 0.0;
        std::vector<double> ref;
        for (int t = 1; t <= 2; ++t) {
            double grad = 2.0 * theta;
            m = cfg.beta1 * m + (1 - cfg.beta1) * grad;
            v = cfg.beta2 * v + (1 - cfg.beta2) * grad * grad;
            double mhat = m / (1 - std::pow(cfg.beta1, t));
            double vhat = v / (1 - std::pow(cfg.beta2, t));
            theta -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
            ref.push_back(theta);
        }

        ParamSet p;
        p.add("t", Tensor::leaf({1}, {1.0}, true));
        AdamState st = AdamState::init_for(p);
        double prev_f = 1.0;
        for (int t = 0; t < 2; ++t) {
            Tensor th = Tensor::leaf({1}, p.at(0).values(), true);
            Tensor f = sum(square(th));
            auto g = backward(f, {th});
            p = adam_step(p, g, st, AdamConfig{cfg.lr, cfg.beta1, cfg.beta2, cfg.eps});
            CHECK(p.at(0).values()[0] == doctest::Approx(ref[static_cast<std::size_t>(t)])
                                             .epsilon(1e-12));
            double cur_f = p.at(0).values()[0] * p.at(0).values()[0];
            CHECK(cur_f < prev_f);
            prev_f = cur_f;
        }
    }
}

TEST_CASE("param set basics") {
    ParamSet p;
    p.add("a", Tensor::leaf({2}, {1.0, 2.0}, true));
    p.add("b", Tensor::scalar(3.0, true));
    CHECK(p.num_values() == 3);
    CHECK(p.get("a").size() == 2);
    CHECK_THROWS_AS(p.get("missing"), TensorError);
    CHECK_THROWS_AS(p.add("a", Tensor::scalar(0.0)), TensorError);
    std::uint64_t before = p.checksum();
    ParamSet q = p.clone(true);
    CHECK(q.checksum() == before);
}
