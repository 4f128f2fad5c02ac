#include "doctest.h"

#include <cmath>
#include <functional>

#include "dnl/errors.hpp"
#include "dnl/layers.hpp"
#include "dnl/optim.hpp"
#include "dnl/rng.hpp"

using namespace dnl;

namespace {

Tensor tensor_of(std::size_t r, std::size_t c, std::initializer_list<double> vals) {
    Tensor t(r, c);
    std::copy(vals.begin(), vals.end(), t.data.begin());
    return t;
}

Tensor random_tensor(std::size_t r, std::size_t c, RandomStream& rng, double sigma = 0.1) {
    Tensor t(r, c);
    for (double& v : t.data) v = rng.gaussian() * sigma;
    return t;
}

/// Central finite differences of `loss` w.r.t. every entry of `param`,
/// compared against `analytic` with a floored relative error.
void check_gradient(Tensor& param, const Tensor& analytic,
                    const std::function<double()>& loss, double h = 1e-6,
                    double tol = 1e-4) {
    REQUIRE(analytic.rows == param.rows);
    REQUIRE(analytic.cols == param.cols);
    for (std::size_t i = 0; i < param.data.size(); ++i) {
        const double saved = param.data[i];
        param.data[i] = saved + h;
        const double up = loss();
        param.data[i] = saved - h;
        const double down = loss();
        param.data[i] = saved;
        const double fd = (up - down) / (2.0 * h);
        const double a = analytic.data[i];
        const double rel = std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1e-4});
        CHECK(rel < tol);
    }
}

}  // namespace

TEST_CASE("linear_forward hand examples") {
    {
        const Tensor x = tensor_of(1, 2, {1, 2});
        const Tensor w = tensor_of(2, 2, {1, 0, 0, 1});
        const Tensor b = tensor_of(1, 2, {0, 0});
        const Tensor y = linear_forward(x, w, b);
        CHECK(y.at(0, 0) == 1.0);
        CHECK(y.at(0, 1) == 2.0);
    }
    {
        const Tensor x = tensor_of(1, 2, {1, 1});
        const Tensor w = tensor_of(2, 1, {2, 3});
        const Tensor b = tensor_of(1, 1, {1});
        CHECK(linear_forward(x, w, b).at(0, 0) == 6.0);
    }
    {
        const Tensor x(3, 2);  // zero input
        const Tensor w = tensor_of(2, 1, {4, 7});
        const Tensor b = tensor_of(1, 1, {5});
        const Tensor y = linear_forward(x, w, b);
        for (std::size_t i = 0; i < 3; ++i) CHECK(y.at(i, 0) == 5.0);
    }
    CHECK_THROWS_AS(linear_forward(Tensor(1, 3), Tensor(2, 2), Tensor(1, 2)), ContractViolation);
}

TEST_CASE("gin_aggregate hand examples") {
    {
        const Tensor h = tensor_of(1, 1, {4});
        CHECK(gin_aggregate(h, {}, 0.0).at(0, 0) == 4.0);  // isolated node
    }
    {
        const Tensor h = tensor_of(2, 1, {1, 2});
        const std::vector<GraphEdge> edges = {{0, 1, 1.0}};
        const Tensor out = gin_aggregate(h, edges, 0.0);
        CHECK(out.at(0, 0) == 3.0);
        CHECK(out.at(1, 0) == 3.0);
    }
    {
        const Tensor h = tensor_of(2, 1, {1, 2});
        const std::vector<GraphEdge> zero_edge = {{0, 1, 0.0}};
        const Tensor with_edge = gin_aggregate(h, zero_edge, 0.0);
        const Tensor without = gin_aggregate(h, {}, 0.0);
        CHECK(with_edge == without);  // weight-0 edge is bit-identical to no edge
    }
    const std::vector<GraphEdge> bad = {{0, 5, 1.0}};
    CHECK_THROWS_AS(gin_aggregate(Tensor(2, 1), bad, 0.0), ContractViolation);
}

TEST_CASE("gin_aggregate respects eps and is permutation-equivariant") {
    const Tensor h = tensor_of(2, 1, {1, 2});
    const std::vector<GraphEdge> edges = {{0, 1, 0.5}};
    const Tensor out = gin_aggregate(h, edges, 0.25);
    CHECK(out.at(0, 0) == doctest::Approx(1.25 * 1 + 0.5 * 2));
    CHECK(out.at(1, 0) == doctest::Approx(1.25 * 2 + 0.5 * 1));

    RandomStream rng(3);
    const std::size_t n = 6;
    Tensor big = random_tensor(n, 4, rng, 1.0);
    std::vector<GraphEdge> es = {{0, 3, 0.7}, {1, 4, 0.2}, {2, 5, 0.9}, {0, 5, 0.4}};
    const Tensor base = gin_aggregate(big, es, 0.0);

    // relabel nodes by the permutation p
    const std::vector<std::size_t> p = {3, 0, 5, 1, 4, 2};
    Tensor permuted(n, 4);
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t j = 0; j < 4; ++j) permuted.at(p[v], j) = big.at(v, j);
    }
    std::vector<GraphEdge> pes;
    for (const GraphEdge& e : es) pes.push_back({p[e.fp_node_id], p[e.wap_node_id], e.weight});
    const Tensor out_p = gin_aggregate(permuted, pes, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(out_p.at(p[v], j) == doctest::Approx(base.at(v, j)).epsilon(1e-12));
        }
    }
}

TEST_CASE("mean_readout sums per-group means") {
    {
        const Tensor h = tensor_of(2, 2, {1, 3, 3, 1});
        const Tensor out = mean_readout(h, {{0, 1}});
        CHECK(out.at(0, 0) == 2.0);
        CHECK(out.at(0, 1) == 2.0);
    }
    {
        const Tensor h = tensor_of(2, 2, {2, 0, 0, 4});
        const Tensor out = mean_readout(h, {{0}, {1}});
        CHECK(out.at(0, 0) == 2.0);
        CHECK(out.at(0, 1) == 4.0);
    }
    {
        const Tensor h(3, 2);
        const Tensor out = mean_readout(h, {{0, 1, 2}});
        CHECK(out.at(0, 0) == 0.0);
        CHECK(out.at(0, 1) == 0.0);
    }
    {
        // empty group contributes a zero vector
        const Tensor h = tensor_of(1, 2, {5, 7});
        const Tensor out = mean_readout(h, {{0}, {}});
        CHECK(out.at(0, 0) == 5.0);
        CHECK(out.at(0, 1) == 7.0);
    }
}

TEST_CASE("mean_readout is permutation-invariant within groups") {
    RandomStream rng(5);
    Tensor h = random_tensor(6, 3, rng, 1.0);
    const Tensor a = mean_readout(h, {{0, 1, 2}, {3, 4, 5}});
    const Tensor b = mean_readout(h, {{2, 0, 1}, {5, 3, 4}});
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(a.at(0, j) == doctest::Approx(b.at(0, j)).epsilon(1e-12));
    }
}

TEST_CASE("mse_loss hand examples") {
    const Tensor t22 = tensor_of(2, 2, {0, 0, 0, 0});
    CHECK(mse_loss(t22, t22) == 0.0);
    CHECK(mse_loss(tensor_of(1, 2, {1, 0}), tensor_of(1, 2, {0, 0})) == 0.5);
    CHECK(mse_loss(tensor_of(2, 2, {1, 1, 0, 0}), t22) == 0.5);
    CHECK_THROWS_AS(mse_loss(Tensor(1, 2), Tensor(2, 2)), ContractViolation);

    RandomStream rng(6);
    for (int i = 0; i < 50; ++i) {
        const Tensor p = random_tensor(3, 2, rng, 1.0);
        const Tensor q = random_tensor(3, 2, rng, 1.0);
        CHECK(mse_loss(p, q) >= 0.0);
    }
    const Tensor p = random_tensor(3, 2, rng, 1.0);
    CHECK(mse_loss(p, p) == 0.0);
}

TEST_CASE("layer gradients match finite differences") {
    RandomStream rng(8);

    SUBCASE("linear") {
        Tensor x = random_tensor(4, 3, rng);
        Tensor w = random_tensor(3, 2, rng);
        Tensor b = random_tensor(1, 2, rng);
        const Tensor target = random_tensor(4, 2, rng);
        const auto loss = [&] { return mse_loss(linear_forward(x, w, b), target); };

        const Tensor y = linear_forward(x, w, b);
        const Tensor dy = mse_loss_backward(y, target);
        const LinearGrads g = linear_backward(x, w, dy);
        check_gradient(w, g.dw, loss);
        check_gradient(b, g.db, loss);
        check_gradient(x, g.dx, loss);
    }

    SUBCASE("relu") {
        Tensor x = random_tensor(4, 3, rng, 0.5);
        const Tensor target = random_tensor(4, 3, rng);
        const auto loss = [&] { return mse_loss(relu(x), target); };
        const Tensor dy = mse_loss_backward(relu(x), target);
        const Tensor dx = relu_backward(x, dy);
        check_gradient(x, dx, loss);
    }

    SUBCASE("embedding") {
        Tensor table = random_tensor(5, 3, rng);
        const std::vector<std::size_t> ids = {1, 4, 1, 0};
        const Tensor target = random_tensor(4, 3, rng);
        const auto loss = [&] { return mse_loss(embedding_forward(table, ids), target); };
        const Tensor dy = mse_loss_backward(embedding_forward(table, ids), target);
        Tensor dtable(5, 3);
        embedding_backward(ids, dy, dtable);
        check_gradient(table, dtable, loss);
    }

    SUBCASE("gin aggregation") {
        Tensor h = random_tensor(5, 3, rng);
        const std::vector<GraphEdge> edges = {{0, 3, 0.8}, {1, 3, 0.1}, {2, 4, 0.9}, {0, 4, 0.5}};
        const Tensor target = random_tensor(5, 3, rng);
        const auto loss = [&] { return mse_loss(gin_aggregate(h, edges, 0.0), target); };
        const Tensor dy = mse_loss_backward(gin_aggregate(h, edges, 0.0), target);
        const Tensor dh = gin_aggregate_backward(dy, edges, 0.0);
        check_gradient(h, dh, loss);
    }

    SUBCASE("mean readout") {
        Tensor h = random_tensor(5, 3, rng);
        const std::vector<std::vector<std::size_t>> groups = {{0, 1, 2}, {3, 4}};
        const Tensor target = random_tensor(1, 3, rng);
        const auto loss = [&] { return mse_loss(mean_readout(h, groups), target); };
        const Tensor dy = mse_loss_backward(mean_readout(h, groups), target);
        const Tensor dh = mean_readout_backward(dy, groups, 5);
        check_gradient(h, dh, loss);
    }

    SUBCASE("closed-form scalar: d/dw of (xw - y)^2") {
        Tensor x = tensor_of(1, 1, {3.0});
        Tensor w = tensor_of(1, 1, {0.7});
        Tensor b = tensor_of(1, 1, {0.0});
        const Tensor y = tensor_of(1, 1, {1.0});
        const Tensor pred = linear_forward(x, w, b);
        const Tensor dy = mse_loss_backward(pred, y);
        const LinearGrads g = linear_backward(x, w, dy);
        // d/dw (xw - y)^2 = 2 x (xw - y) = 2 * 3 * 1.1
        CHECK(g.dw.at(0, 0) == doctest::Approx(6.6).epsilon(1e-12));
    }

    SUBCASE("zero loss gives zero gradients") {
        Tensor x = random_tensor(2, 2, rng);
        Tensor w = random_tensor(2, 2, rng);
        Tensor b = random_tensor(1, 2, rng);
        const Tensor pred = linear_forward(x, w, b);
        const Tensor dy = mse_loss_backward(pred, pred);
        const LinearGrads g = linear_backward(x, w, dy);
        for (double v : g.dw.data) CHECK(v == 0.0);
        for (double v : g.db.data) CHECK(v == 0.0);
    }
}

TEST_CASE("adam: zero gradient leaves parameters unchanged, step counts up") {
    Tensor p = tensor_of(1, 2, {1.0, -2.0});
    std::vector<Tensor*> params = {&p};
    AdamState st = AdamState::create(params, 0.01);
    const std::vector<Tensor> grads = {Tensor(1, 2)};
    adam_step(params, grads, st);
    CHECK(st.step == 1);
    CHECK(p.at(0, 0) == 1.0);
    CHECK(p.at(0, 1) == -2.0);
}

TEST_CASE("adam: first step with unit gradient moves by about lr") {
    Tensor p = tensor_of(1, 1, {0.5});
    std::vector<Tensor*> params = {&p};
    AdamState st = AdamState::create(params, 0.01);
    const std::vector<Tensor> grads = {tensor_of(1, 1, {1.0})};
    adam_step(params, grads, st);
    // m_hat = v_hat = 1 after bias correction at t=1, so the move is
    // lr / (1 + eps)
    CHECK(p.at(0, 0) == doctest::Approx(0.5 - 0.01 / (1.0 + 1e-8)).epsilon(1e-12));
}

TEST_CASE("adam: identical runs give bit-identical trajectories") {
    RandomStream rng(12);
    const Tensor init = random_tensor(3, 3, rng);
    const auto run = [&](Tensor start) {
        std::vector<Tensor*> params = {&start};
        AdamState st = AdamState::create(params, 0.01);
        RandomStream grads_rng(77);
        for (int i = 0; i < 25; ++i) {
            const std::vector<Tensor> grads = {random_tensor(3, 3, grads_rng)};
            adam_step(params, grads, st);
        }
        return start;
    };
    CHECK(run(init) == run(init));
}

TEST_CASE("adam: vanishing learning rate leaves parameters fixed") {
    Tensor p = tensor_of(1, 1, {0.25});
    std::vector<Tensor*> params = {&p};
    AdamState st = AdamState::create(params, 1e-300);
    const std::vector<Tensor> grads = {tensor_of(1, 1, {0.37})};
    adam_step(params, grads, st);
    CHECK(p.at(0, 0) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("clip_global_norm") {
    std::vector<Tensor> grads = {tensor_of(1, 2, {3.0, 0.0}), tensor_of(1, 1, {4.0})};
    const double norm = clip_global_norm(grads, 5.0);
    CHECK(norm == doctest::Approx(5.0));
    CHECK(grads[0].at(0, 0) == doctest::Approx(3.0));  // at the limit, untouched

    std::vector<Tensor> big = {tensor_of(1, 2, {6.0, 0.0}), tensor_of(1, 1, {8.0})};
    CHECK(clip_global_norm(big, 5.0) == doctest::Approx(10.0));
    CHECK(big[0].at(0, 0) == doctest::Approx(3.0));
    CHECK(big[1].at(0, 0) == doctest::Approx(4.0));
}

TEST_CASE("plateau scheduler follows the documented protocol") {
    SUBCASE("improving losses keep the initial rate") {
        PlateauScheduler sched(0.01);
        for (double loss : {5.0, 4.0, 3.0, 2.0, 1.0}) sched.step(loss);
        CHECK(sched.lr() == 0.01);
    }

    SUBCASE("three non-improving epochs cut the rate by 10") {
        PlateauScheduler sched(0.01);
        sched.step(5.0);  // first observation improves on +inf
        CHECK(sched.lr() == 0.01);
        sched.step(5.0);
        CHECK(sched.lr() == 0.01);
        sched.step(5.0);
        CHECK(sched.lr() == 0.01);
        sched.step(5.0);  // third non-improving epoch
        CHECK(sched.lr() == doctest::Approx(0.001));
        CHECK(sched.epochs_since_improvement() == 0);
    }

    SUBCASE("rate never drops below the minimum") {
        PlateauScheduler sched(0.01);
        sched.step(5.0);
        for (int i = 0; i < 30; ++i) sched.step(5.0);
        CHECK(sched.lr() == 0.0001);
    }

    SUBCASE("counter stays within [0, patience]") {
        PlateauScheduler sched(0.01);
        sched.step(5.0);
        for (int i = 0; i < 10; ++i) {
            sched.step(5.0);
            CHECK(sched.epochs_since_improvement() >= 0);
            CHECK(sched.epochs_since_improvement() <= 3);
        }
    }
}
