#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>

#include "gradcheck.hpp"
#include "tw/adam.hpp"
#include "tw/autodiff.hpp"
#include "tw/checkpoint.hpp"
#include "tw/rng.hpp"

using namespace tw;
using namespace tw::ad;
using gradcheck::check_op_gradients;
using gradcheck::random_mat;

namespace {
constexpr double kGradTol = 1e-4;
}

TEST_CASE("elementwise op values") {
    Tape tape;
    SUBCASE("elu") {
        Mat in(1, 4);
        in.a = {0.0, 2.5, -1.0, -40.0};
        Var out = tape.elu(constant(in));
        CHECK(out->value.a[0] == 0.0);
        CHECK(out->value.a[1] == 2.5);
        CHECK(out->value.a[2] == doctest::Approx(std::expm1(-1.0)));
        CHECK(out->value.a[3] == doctest::Approx(-1.0));  // asymptote
    }
    SUBCASE("log and exp invert each other") {
        Mat in(2, 2);
        in.a = {0.5, 1.0, 2.0, 7.5};
        Var out = tape.log(tape.exp(constant(in)));
        for (int i = 0; i < 4; ++i) {
            CHECK(out->value.a[i] == doctest::Approx(in.a[i]));
        }
    }
}

TEST_CASE("softmax_masked") {
    Tape tape;
    SUBCASE("uniform logits give uniform probabilities") {
        Mat logits(4, 1);
        logits.fill(1.0);
        Var p = tape.softmax_masked(constant(logits), {1, 1, 1, 1});
        for (int i = 0; i < 4; ++i) {
            CHECK(p->value.a[i] == doctest::Approx(0.25));
        }
    }
    SUBCASE("masked entries get exactly zero and the rest sum to 1") {
        Rng rng(3);
        for (int trial = 0; trial < 20; ++trial) {
            const int n = 2 + static_cast<int>(rng.below(8));
            Mat logits = random_mat(n, 1, rng, -30.0, 30.0);
            std::vector<std::uint8_t> valid(n, 0);
            valid[rng.below(n)] = 1;  // ensure at least one
            for (int i = 0; i < n; ++i) {
                if (rng.uniform() < 0.5) {
                    valid[i] = 1;
                }
            }
            Var p = tape.softmax_masked(constant(logits), valid);
            double sum = 0.0;
            for (int i = 0; i < n; ++i) {
                if (!valid[i]) {
                    CHECK(p->value.a[i] == 0.0);
                }
                sum += p->value.a[i];
            }
            CHECK(std::abs(sum - 1.0) <= 1e-12);
        }
    }
    SUBCASE("all-masked input throws") {
        Mat logits(3, 1);
        CHECK_THROWS_AS(tape.softmax_masked(constant(logits), {0, 0, 0}), std::invalid_argument);
    }
    SUBCASE("shape mismatch throws") {
        Mat logits(3, 1);
        CHECK_THROWS_AS(tape.softmax_masked(constant(logits), {1, 1}), std::invalid_argument);
    }
}

TEST_CASE("basic backward identities") {
    SUBCASE("loss = sum(W) gives all-ones gradient") {
        Tape tape;
        Rng rng(1);
        Var w = parameter(random_mat(3, 4, rng));
        Var loss = tape.sum_all(w);
        tape.backward(loss);
        for (int i = 0; i < w->grad.size(); ++i) {
            CHECK(w->grad.a[i] == 1.0);
        }
    }
    SUBCASE("loss = |W|^2 gives 2W") {
        Tape tape;
        Rng rng(2);
        Var w = parameter(random_mat(2, 5, rng));
        Var loss = tape.sum_all(tape.mul(w, w));
        tape.backward(loss);
        for (int i = 0; i < w->grad.size(); ++i) {
            CHECK(w->grad.a[i] == doctest::Approx(2.0 * w->value.a[i]));
        }
    }
    SUBCASE("repeated backward accumulates into leaves") {
        Tape tape;
        Var w = parameter(Mat::scalar(3.0));
        Var loss = tape.scale(w, 2.0);
        tape.backward(loss);
        CHECK(w->grad.a[0] == 2.0);
        tape.backward(loss);
        CHECK(w->grad.a[0] == 4.0);
    }
    SUBCASE("composition: d/dx sum(x * exp(x)) = exp(x)(1 + x)") {
        Tape tape;
        Rng rng(5);
        Var x = parameter(random_mat(1, 6, rng));
        Var loss = tape.sum_all(tape.mul(x, tape.exp(x)));
        tape.backward(loss);
        for (int i = 0; i < 6; ++i) {
            const double xi = x->value.a[i];
            CHECK(x->grad.a[i] == doctest::Approx(std::exp(xi) * (1.0 + xi)));
        }
    }
}

TEST_CASE("backward argument validation") {
    Tape tape;
    Rng rng(7);
    Var w = parameter(random_mat(2, 2, rng));
    Var out = tape.scale(w, 1.0);
    CHECK_THROWS_AS(tape.backward(out), std::invalid_argument);  // not scalar
    CHECK_THROWS_AS(tape.backward(w), std::invalid_argument);    // leaf, not on tape
    Tape other;
    Var foreign = other.sum_all(w);
    CHECK_THROWS_AS(tape.backward(foreign), std::invalid_argument);
}

TEST_CASE("shape checks") {
    Tape tape;
    Var a = constant(Mat(2, 3));
    Var b = constant(Mat(2, 2));
    CHECK_THROWS_AS(tape.matmul(a, a), std::invalid_argument);
    CHECK_THROWS_AS(tape.add(a, b), std::invalid_argument);
    CHECK_THROWS_AS(tape.mul(a, b), std::invalid_argument);
    CHECK_THROWS_AS(tape.add_row(a, b), std::invalid_argument);
    CHECK_THROWS_AS(tape.gather_rows(a, {5}), std::invalid_argument);
}

TEST_CASE("every primitive matches central finite differences") {
    Rng rng(2024);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const int m = 1 + static_cast<int>(rng.below(4));
        const int k = 1 + static_cast<int>(rng.below(4));
        const int n = 1 + static_cast<int>(rng.below(4));
        const std::uint64_t ws = rng.next_u64();

        auto one = [&](const gradcheck::OpBuilder& op, std::vector<Mat> ins) {
            worst = std::max(worst, check_op_gradients(op, std::move(ins), ws));
        };

        one([](Tape& t, const auto& in) { return t.matmul(in[0], in[1]); },
            {random_mat(m, k, rng), random_mat(k, n, rng)});
        one([](Tape& t, const auto& in) { return t.add(in[0], in[1]); },
            {random_mat(m, n, rng), random_mat(m, n, rng)});
        one([](Tape& t, const auto& in) { return t.add_row(in[0], in[1]); },
            {random_mat(m, n, rng), random_mat(1, n, rng)});
        one([](Tape& t, const auto& in) { return t.sub(in[0], in[1]); },
            {random_mat(m, n, rng), random_mat(m, n, rng)});
        one([](Tape& t, const auto& in) { return t.mul(in[0], in[1]); },
            {random_mat(m, n, rng), random_mat(m, n, rng)});
        one([](Tape& t, const auto& in) { return t.scale(in[0], -1.7); }, {random_mat(m, n, rng)});
        one([](Tape& t, const auto& in) { return t.transpose(in[0]); }, {random_mat(m, n, rng)});
        one([](Tape& t, const auto& in) { return t.row_sum(in[0]); }, {random_mat(m, n, rng)});
        one([](Tape& t, const auto& in) { return t.sum_all(in[0]); }, {random_mat(m, n, rng)});
        one([](Tape& t, const auto& in) { return t.mean_rows(in[0]); }, {random_mat(m, n, rng)});
        one([](Tape& t, const auto& in) { return t.elu(in[0]); }, {random_mat(m, n, rng)});
        one([](Tape& t, const auto& in) { return t.exp(in[0]); }, {random_mat(m, n, rng)});
        one([](Tape& t, const auto& in) { return t.log(in[0]); },
            {random_mat(m, n, rng, 0.2, 4.0)});
        one([](Tape& t, const auto& in) { return t.gather_rows(in[0], {0, 0}); },
            {random_mat(m, n, rng)});

        const int sn = 2 + static_cast<int>(rng.below(6));
        std::vector<std::uint8_t> valid(sn, 0);
        valid[rng.below(sn)] = 1;
        for (int i = 0; i < sn; ++i) {
            if (rng.uniform() < 0.6) {
                valid[i] = 1;
            }
        }
        one([valid](Tape& t, const auto& in) { return t.softmax_masked(in[0], valid); },
            {random_mat(sn, 1, rng)});
        one([valid](Tape& t, const auto& in) { return t.entropy_masked(in[0], valid); },
            {random_mat(sn, 1, rng)});
    }
    CHECK(worst <= kGradTol);
    MESSAGE("worst primitive gradient error: ", worst);
}

TEST_CASE("adam") {
    SUBCASE("first step moves by about lr under unit gradient") {
        Var p = parameter(Mat::scalar(1.0));
        p->grad.a[0] = 1.0;
        Adam adam({0.008, 0.9, 0.999, 1e-8});
        adam.step({p});
        CHECK(p->value.a[0] == doctest::Approx(1.0 - 0.008).epsilon(1e-6));
        CHECK(p->grad.a[0] == 0.0);  // grads cleared by the step
    }
    SUBCASE("zero gradient leaves the parameter unchanged") {
        Var p = parameter(Mat::scalar(2.5));
        Adam adam;
        adam.step({p});
        CHECK(p->value.a[0] == 2.5);
    }
    SUBCASE("descends x^2 from 1 to below 0.5 in 100 steps") {
        Var x = parameter(Mat::scalar(1.0));
        Adam adam({0.008, 0.9, 0.999, 1e-8});
        for (int i = 0; i < 100; ++i) {
            Tape tape;
            Var loss = tape.mul(x, x);
            tape.backward(loss);
            adam.step({x});
        }
        CHECK(std::abs(x->value.a[0]) < 0.5);
    }
}

TEST_CASE("checkpoint round trip is bit exact") {
    namespace fs = std::filesystem;
    const std::string path = (fs::temp_directory_path() / "twsolve_ckpt_test.bin").string();

    NamedParams params;
    Rng rng(99);
    Mat odd(2, 3);
    odd.a = {0.0, -0.0, 1e-301, 3.141592653589793, -2.5e300, 1.0 / 3.0};
    params.emplace_back("layer.w", parameter(random_mat(4, 4, rng)));
    params.emplace_back("layer.b", parameter(odd));
    save_checkpoint(path, params);

    const NamedParams loaded = load_checkpoint(path);
    REQUIRE(loaded.size() == params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        CHECK(loaded[i].first == params[i].first);
        REQUIRE(loaded[i].second->value.same_shape(params[i].second->value));
        for (int k = 0; k < params[i].second->value.size(); ++k) {
            const double a = params[i].second->value.a[k];
            const double b = loaded[i].second->value.a[k];
            CHECK(std::memcmp(&a, &b, sizeof(double)) == 0);
        }
    }

    SUBCASE("load_checkpoint_into validates names and shapes") {
        NamedParams renamed;
        renamed.emplace_back("other.w", parameter(Mat(4, 4)));
        renamed.emplace_back("layer.b", parameter(Mat(2, 3)));
        CHECK_THROWS(load_checkpoint_into(path, renamed));

        NamedParams reshaped;
        reshaped.emplace_back("layer.w", parameter(Mat(4, 4)));
        reshaped.emplace_back("layer.b", parameter(Mat(3, 2)));
        CHECK_THROWS(load_checkpoint_into(path, reshaped));
    }
    fs::remove(path);
}
