#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <set>

#include "stripent/errors.hpp"
#include "stripent/transfer.hpp"

using namespace stripent;

namespace {

uint64_t column_mask(const std::vector<int>& col) {
    uint64_t m = 0;
    for (size_t y = 0; y < col.size(); ++y)
        if (col[y] == 1) m |= 1ULL << y;
    return m;
}

} // namespace

TEST_CASE("column enumeration small cases") {
    SftSpec hs = hard_square();
    ColumnSet c1 = enumerate_columns(hs, 1);
    CHECK(c1.count() == 2);

    ColumnSet c3 = enumerate_columns(hs, 3);
    REQUIRE(c3.count() == 5);
    std::set<uint64_t> masks;
    for (const auto& c : c3.columns) masks.insert(column_mask(c));
    CHECK(masks == std::set<uint64_t>{0b000, 0b100, 0b010, 0b001, 0b101});
    // canonical order: bottom row most significant
    CHECK(column_mask(c3.columns[0]) == 0b000);
    CHECK(column_mask(c3.columns[1]) == 0b100); // 001 read bottom-first
    CHECK(column_mask(c3.columns[2]) == 0b010);
    CHECK(column_mask(c3.columns[3]) == 0b001);
    CHECK(column_mask(c3.columns[4]) == 0b101);

    CHECK(enumerate_columns(hs, 10).count() == 144);
}

TEST_CASE("fibonacci law up to n=20") {
    SftSpec hs = hard_square();
    long long a = 2, b = 3;
    CHECK(enumerate_columns(hs, 1).count() == a);
    CHECK(enumerate_columns(hs, 2).count() == b);
    for (int n = 3; n <= 20; ++n) {
        long long c = a + b;
        REQUIRE(enumerate_columns(hs, n).count() == c);
        a = b;
        b = c;
    }
}

TEST_CASE("transfer matrices n=1,2") {
    SftSpec hs = hard_square();
    TransferMatrix b1 = build_transfer(hs, 1);
    REQUIRE(b1.dim == 2);
    CHECK(b1.symmetric);
    CHECK(b1.entry(0, 0) == 1.0);
    CHECK(b1.entry(0, 1) == 1.0);
    CHECK(b1.entry(1, 0) == 1.0);
    CHECK(b1.entry(1, 1) == 0.0);

    TransferMatrix b2 = build_transfer(hs, 2);
    REQUIRE(b2.dim == 3);
    double expect[3][3] = {{1, 1, 1}, {1, 0, 1}, {1, 1, 0}};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) CHECK(b2.entry(r, c) == expect[r][c]);
}

TEST_CASE("all-ones weights give 0-1 entries") {
    SftSpec hs = hard_square();
    TransferMatrix m = build_transfer(hs, 5);
    for (double v : m.val) CHECK((v == 0.0 || v == 1.0));
}

TEST_CASE("recursive builder equals direct builder") {
    SftSpec hs = hard_square();
    for (int n = 1; n <= 10; ++n) {
        RecursiveTransfer rec = build_transfer_recursive_hardsquare(n);
        ColumnSet cols = enumerate_columns(hs, n);
        TransferMatrix direct = build_transfer(hs, cols);
        REQUIRE(rec.matrix.dim == direct.dim);
        std::vector<int> perm(direct.dim, -1);
        for (int i = 0; i < direct.dim; ++i) {
            uint64_t mask = column_mask(cols.columns[i]);
            for (int j = 0; j < rec.matrix.dim; ++j)
                if (rec.column_masks[j] == mask) perm[i] = j;
            REQUIRE(perm[i] >= 0);
        }
        for (int r = 0; r < direct.dim; ++r)
            for (int c = 0; c < direct.dim; ++c)
                REQUIRE(direct.entry(r, c) == rec.matrix.entry(perm[r], perm[c]));
    }
}

TEST_CASE("weighted counts, exact small values") {
    SftSpec hs = hard_square();
    CHECK(weighted_count(hs, 1, 2).value() == 3.0);
    CHECK(weighted_count(hs, 2, 2).value() == 7.0);
    CHECK(weighted_count(hs, 1, 1).value() == 2.0); // sum of column weights
    CHECK(weighted_count(hs, 3, 1).value() == 5.0);
    CHECK(weighted_count(hs, 2, 2).exact);
}

TEST_CASE("weighted count equals brute force for hard squares") {
    SftSpec hs = hard_square();
    for (int n = 1; n <= 4; ++n)
        for (int m = 1; m <= 4; ++m) {
            CountResult c = weighted_count(hs, n, m);
            REQUIRE(c.exact);
            REQUIRE(c.value() == brute_force_weighted_count(hs, m, n));
        }
}

TEST_CASE("log weighted count subadditive in n") {
    SftSpec hs = hard_square();
    for (int m = 1; m <= 8; ++m)
        for (int a = 1; a <= 4; ++a)
            for (int b = 1; b <= 8 - a && a + b <= 8; ++b) {
                double lab = weighted_count(hs, a + b, m).log_value;
                double la = weighted_count(hs, a, m).log_value;
                double lb = weighted_count(hs, b, m).log_value;
                REQUIRE(lab <= la + lb + 1e-9);
            }
}

TEST_CASE("full shift weighted count is exponential") {
    SftSpec fs = full_shift(3);
    CHECK(weighted_count(fs, 2, 2).value() == 81.0);
}

TEST_CASE("counts beyond double range switch to the log domain") {
    SftSpec fs = full_shift(4);
    CountResult c = weighted_count(fs, 2, 400); // 4^800
    CHECK_FALSE(c.has_linear);
    CHECK(c.log_value == doctest::Approx(800.0 * std::log(4.0)).epsilon(1e-9));
    CHECK(std::isinf(c.value()));
}

TEST_CASE("matrix export format") {
    SftSpec hs = hard_square();
    std::string text = export_matrix(build_transfer(hs, 1));
    CHECK(text.find("2\n") != std::string::npos);
    CHECK(text.find("0 0 1\n") != std::string::npos);
    CHECK(text.find("\n1 1 ") == std::string::npos); // the (1,1) entry is absent
}

TEST_CASE("binary fast path agrees with the per-row rule") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        SftSpec s;
        s.name = "bin";
        s.symbols = {"a", "b"};
        s.weight = {1.0, 1.0 + (trial % 3)};
        s.h_table = {1, static_cast<uint8_t>(rng() % 2), static_cast<uint8_t>(rng() % 2),
                     static_cast<uint8_t>(rng() % 2)};
        s.v_table = {1, static_cast<uint8_t>(rng() % 2), static_cast<uint8_t>(rng() % 2),
                     static_cast<uint8_t>(rng() % 2)};
        ColumnSet cols = enumerate_columns(s, 5);
        TransferMatrix m = build_transfer(s, cols);
        for (int r = 0; r < m.dim; ++r)
            for (int c = 0; c < m.dim; ++c) {
                bool ok = true;
                for (int y = 0; y < 5; ++y)
                    if (!s.h_allowed(cols.columns[r][y], cols.columns[c][y])) ok = false;
                REQUIRE((m.entry(r, c) != 0.0) == ok);
            }
    }
}

TEST_CASE("column cap resource guard") {
    SftSpec fs = full_shift(4);
    setenv("STRIPENT_MAX_COLUMNS", "10", 1);
    CHECK_THROWS_AS(enumerate_columns(fs, 4), ResourceError);
    unsetenv("STRIPENT_MAX_COLUMNS");
    CHECK(enumerate_columns(fs, 4).count() == 256);
}
