#include <cmath>

#include <doctest.h>

#include "ginspectra/eig.hpp"
#include "ginspectra/ensembles.hpp"
#include "ginspectra/rng.hpp"

using namespace ginspectra;

TEST_CASE("stream seeding is deterministic and well separated") {
    RngStream a(42, 7);
    RngStream b(42, 7);
    RngStream c(42, 8);
    const ComplexMatrix ma = sample_ginue(16, a);
    const ComplexMatrix mb = sample_ginue(16, b);
    const ComplexMatrix mc = sample_ginue(16, c);
    CHECK((ma - mb).cwiseAbs().maxCoeff() == 0.0);
    CHECK((ma - mc).cwiseAbs().maxCoeff() != 0.0);

    CHECK(derive_stream_seed(42, 7) == a.derived_seed());
    CHECK(derive_stream_seed(42, 7) != derive_stream_seed(42, 8));
    CHECK(derive_stream_seed(42, 7) != derive_stream_seed(43, 7));
}

TEST_CASE("ginoe entries are real, ginue entries are complex") {
    RngStream rng(5, 1);
    const ComplexMatrix o = sample_ginoe(32, rng);
    for (int j = 0; j < 32; ++j)
        for (int i = 0; i < 32; ++i) CHECK(o(i, j).imag() == 0.0);

    RngStream rng2(5, 2);
    const ComplexMatrix u = sample_ginue(32, rng2);
    int nonzero_imag = 0;
    for (int j = 0; j < 32; ++j)
        for (int i = 0; i < 32; ++i)
            if (u(i, j).imag() != 0.0) ++nonzero_imag;
    CHECK(nonzero_imag == 32 * 32);
}

TEST_CASE("poisson diagonals have their diagonal as exact spectrum") {
    RngStream rng(77, 1);
    const ComplexMatrix d = sample_poisson_diagonal(40, PoissonKind::Complex2D, rng);
    for (int j = 0; j < 40; ++j)
        for (int i = 0; i < 40; ++i)
            if (i != j) CHECK(d(i, j) == Complex(0.0, 0.0));
    const Spectrum s = compute_spectrum(d);
    CHECK(s.residual_bound == 0.0);
    CHECK(s.certified);
    // Unsorted shortcut spectrum is the diagonal itself, bit for bit.
    for (int i = 0; i < 40; ++i) CHECK(s.eigenvalues[i] == d(i, i));

    RngStream rng2(77, 2);
    const ComplexMatrix r = sample_poisson_diagonal(40, PoissonKind::Real1D, rng2);
    for (int i = 0; i < 40; ++i) CHECK(r(i, i).imag() == 0.0);
}

TEST_CASE("crossover endpoints") {
    CrossoverSpec spec;
    spec.model = MatrixModel::MM2;
    spec.n = 24;
    spec.alpha = 0.0;
    RngStream rng(12, 3);
    const ComplexMatrix h = sample_crossover(spec, rng);
    RngStream rng2(12, 3);
    const ComplexMatrix d =
        sample_poisson_diagonal(24, PoissonKind::Complex2D, rng2);
    CHECK((h - d).cwiseAbs().maxCoeff() == 0.0);  // α = 0 is the pure diagonal

    // Large α: the GinUE part dominates; compare against the same streams.
    spec.alpha = 1e9;
    RngStream rng3(12, 3);
    const ComplexMatrix mixed = sample_crossover(spec, rng3);
    RngStream rng4(12, 3);
    sample_poisson_diagonal(24, PoissonKind::Complex2D, rng4);  // skip H0 draws
    const ComplexMatrix v = sample_ginue(24, rng4);
    CHECK((mixed - v).norm() <= 1e-8 * v.norm());

    // MM1 uses a real diagonal.
    CrossoverSpec mm1;
    mm1.model = MatrixModel::MM1;
    mm1.n = 24;
    mm1.alpha = 0.0;
    RngStream rng5(12, 4);
    const ComplexMatrix h1 = sample_crossover(mm1, rng5);
    for (int i = 0; i < 24; ++i) CHECK(h1(i, i).imag() == 0.0);
}

TEST_CASE("crossover normalization keeps the scale bounded") {
    CrossoverSpec spec;
    spec.model = MatrixModel::MM1;
    spec.n = 64;
    spec.alpha = 1.0;
    RngStream rng(9, 9);
    const ComplexMatrix h = sample_crossover(spec, rng);
    // Off-diagonal entries are αV/√(1+α²) = V/√2 at α = 1.
    double sumsq = 0.0;
    int count = 0;
    for (int j = 0; j < 64; ++j)
        for (int i = 0; i < 64; ++i)
            if (i != j) {
                sumsq += std::norm(h(i, j));
                ++count;
            }
    const double var = sumsq / count;  // E|V_ij/√2|² = 2/2 = 1
    CHECK(std::abs(var - 1.0) < 0.1);
}

TEST_CASE("entry statistics are standard normal") {
    RngStream rng(2026, 1);
    double sum = 0.0, sumsq = 0.0;
    const int reps = 500;
    const int n = 32;
    for (int rep = 0; rep < reps; ++rep) {
        const ComplexMatrix m = sample_ginue(n, rng);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                sum += m(i, j).real() + m(i, j).imag();
                sumsq += m(i, j).real() * m(i, j).real() +
                         m(i, j).imag() * m(i, j).imag();
            }
    }
    const double draws = 2.0 * reps * n * n;  // ~1e6 scalars
    CHECK(std::abs(sum / draws) < 0.01);
    CHECK(std::abs(sumsq / draws - 1.0) < 0.01);
}

TEST_CASE("validation bounds") {
    CrossoverSpec bad;
    bad.model = MatrixModel::MM1;
    bad.n = 1;
    bad.alpha = 0.5;
    CHECK_THROWS_AS(validate(bad), ValidationError);
    bad.n = 8193;
    CHECK_THROWS_AS(validate(bad), ValidationError);
    bad.n = 16;
    bad.alpha = -0.25;
    CHECK_THROWS_AS(validate(bad), ValidationError);
    bad.alpha = std::nan("");
    CHECK_THROWS_AS(validate(bad), ValidationError);
    bad.alpha = 3.5;
    CHECK_NOTHROW(validate(bad));

    RngStream rng(1, 1);
    CHECK_THROWS_AS(sample_ginue(0, rng), ValidationError);
    CHECK_THROWS_AS(sample_ginue(1, rng), ValidationError);
    CHECK_THROWS_AS(sample_ginoe(9000, rng), ValidationError);
}
