#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "dsmqr/oracle.hpp"
#include "dsmqr/solver.hpp"

using namespace dsmqr;

TEST_CASE("reference_qr identity and hand-checked column") {
    Matrix eye = Matrix::identity(4);
    const QrFactors f = reference_qr(eye);
    CHECK(max_abs_diff(f.Q, eye) < 1e-15);
    CHECK(max_abs_diff(f.R, eye) < 1e-15);

    Matrix b(2, 2);
    b(0, 0) = 3.0;
    b(1, 0) = 4.0;
    b(1, 1) = 5.0;
    const QrFactors g = reference_qr(b);
    CHECK(g.Q(0, 0) == Catch::Approx(0.6).margin(1e-15));
    CHECK(g.Q(1, 0) == Catch::Approx(0.8).margin(1e-15));
    CHECK(g.R(0, 0) == Catch::Approx(5.0).margin(1e-14));
}

TEST_CASE("reference_qr agrees with the Householder path") {
    for (int N = 3; N <= 41; N += 2) {
        const Matrix b = build_B(N, N - 1);
        const QrFactors mgs = reference_qr(b);
        const QrFactors hh = qr_positive(b);
        REQUIRE(max_abs_diff(mgs.Q, hh.Q) <= 1e-11);
        REQUIRE(max_abs_diff(mgs.R, hh.R) <= 1e-11);

        const Matrix qtq = gram_matrix(mgs.Q);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) REQUIRE(std::abs(qtq(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-13);
    }
}

TEST_CASE("reference_qr detects rank deficiency") {
    Matrix b(2, 2);
    b(0, 0) = 1.0;
    b(0, 1) = 1.0;
    b(1, 0) = 1.0;
    b(1, 1) = 1.0;
    CHECK_THROWS_AS(reference_qr(b), std::runtime_error);
}

TEST_CASE("reference_singular_values on easy inputs") {
    Matrix d(3, 3);
    d(0, 0) = -2.0;
    d(1, 1) = 0.5;
    d(2, 2) = 1.0;
    const std::vector<double> sv = reference_singular_values(d);
    REQUIRE(sv.size() == 3);
    CHECK(sv[0] == Catch::Approx(2.0).margin(1e-13));
    CHECK(sv[1] == Catch::Approx(1.0).margin(1e-13));
    CHECK(sv[2] == Catch::Approx(0.5).margin(1e-13));

    const QrFactors orth = analytic_qr(9);
    for (double s : reference_singular_values(orth.Q)) CHECK(s == Catch::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("singular values of the DSM-QR matrix hit the closed-form extremes") {
    for (double R : {1.5, 1.1}) {
        for (int N : {5, 11, 21}) {
            const DiskParams p(1.0, R, N);
            const PointLayout lay = build_layout(ConformalMapSpec::disk(), N, N, 1.0, R);
            const CollocationSystem sys = assemble(Method::DsmQr, p, ConformalMapSpec::disk(), lay,
                                                   std::vector<double>(N, 0.0));
            const std::vector<double> sv = reference_singular_values(sys.G);
            CHECK(sv.front() == Catch::Approx(double(N)).epsilon(1e-12));
            CHECK(sv.back() ==
                  Catch::Approx(N / 2.0 * (1.0 + std::pow(p.kappa, N - 2))).epsilon(1e-12));
        }
    }
}

TEST_CASE("squared singular values sum to the squared Frobenius norm") {
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int rep = 0; rep < 5; ++rep) {
        Matrix g(20, 10);
        for (double& v : g.data) v = dist(gen);
        double sum = 0.0;
        for (double s : reference_singular_values(g)) sum += s * s;
        const double f2 = frobenius_norm(g) * frobenius_norm(g);
        REQUIRE(std::abs(sum - f2) <= 1e-10 * f2);
    }
}

TEST_CASE("brute-force Gram matches the closed form") {
    {
        const DiskParams p(1.0, 1.5, 3);  // kappa = 2/3
        const Matrix g = brute_force_gram(p);
        CHECK(g(0, 0) == Catch::Approx(9.0).epsilon(1e-13));
        CHECK(g(1, 1) == Catch::Approx(6.25).epsilon(1e-13));
        CHECK(g(2, 2) == Catch::Approx(6.25).epsilon(1e-13));
    }
    for (double R : {1.5, 1.1}) {
        for (int N = 3; N <= 21; N += 2) {
            const DiskParams p(1.0, R, N);
            const Matrix g = brute_force_gram(p);
            const std::vector<double> diag = gram_diagonal_closed_form(p);
            for (int i = 0; i < N; ++i) {
                REQUIRE(std::abs(g(i, i) - diag[i]) <= 1e-10 * N * N);
                REQUIRE(diag[i] > 0.0);  // unique existence
                for (int j = 0; j < N; ++j)
                    if (i != j) REQUIRE(std::abs(g(i, j)) <= 1e-10 * N * N);
            }
        }
    }
}

TEST_CASE("trig sums match their case values") {
    CHECK(trig_sum(TrigSumKind::Cos, 7, 0, 7) == Catch::Approx(7.0).margin(1e-12));
    CHECK(trig_sum(TrigSumKind::SinCos, 3, 5, 7) == Catch::Approx(0.0).margin(1e-12));
    CHECK(trig_sum(TrigSumKind::SinSin, 1, 1, 5) == Catch::Approx(2.5).margin(1e-12));

    for (int N = 3; N <= 15; ++N)
        for (int m = -N; m <= N; ++m)
            for (int n = -N; n <= N; ++n)
                for (TrigSumKind kind : {TrigSumKind::Sin, TrigSumKind::Cos, TrigSumKind::CosCos,
                                         TrigSumKind::SinSin, TrigSumKind::SinCos})
                    REQUIRE(std::abs(trig_sum(kind, m, n, N) - trig_sum_expected(kind, m, n, N)) <=
                            1e-10 * N);
}

TEST_CASE("jacobi_eigenvalues on a known symmetric matrix") {
    // eigenvalues of [[2,1],[1,2]] are 1 and 3
    Matrix a(2, 2);
    a(0, 0) = 2.0;
    a(0, 1) = 1.0;
    a(1, 0) = 1.0;
    a(1, 1) = 2.0;
    std::vector<double> e = jacobi_eigenvalues(a);
    std::sort(e.begin(), e.end());
    CHECK(e[0] == Catch::Approx(1.0).margin(1e-13));
    CHECK(e[1] == Catch::Approx(3.0).margin(1e-13));
}
