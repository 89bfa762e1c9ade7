#include <gtest/gtest.h>

#include <chrono>
#include <random>
#include <set>
#include <sstream>

#include "cacluster/ca_core.hpp"

using namespace cacluster;

namespace {

// Cell-by-cell evaluation straight from the definition.
std::string naive_step(std::uint32_t rule, const std::string& cells) {
    const int n = static_cast<int>(cells.size());
    auto at = [&](int i) { return i < 0 || i >= n ? 0 : cells[i] - '0'; };
    std::string out(cells.size(), '0');
    for (int i = 0; i < n; ++i) {
        int rmt = at(i - 2) * 16 + at(i - 1) * 8 + at(i) * 4 + at(i + 1) * 2 + at(i + 2);
        out[i] = ((rule >> rmt) & 1) ? '1' : '0';
    }
    return out;
}

std::string bits_of(std::uint64_t v, unsigned n) {
    std::string s(n, '0');
    for (unsigned i = 0; i < n; ++i) s[i] = ((v >> (n - 1 - i)) & 1) ? '1' : '0';
    return s;
}

constexpr std::uint32_t kSampleRule = 267422991;
constexpr std::uint32_t kIdentity = 4042322160u;

} // namespace

TEST(Rule, DecimalRendersAsTableString) {
    EXPECT_EQ(rule_from_decimal(kSampleRule).to_table_string(), "00001111111100001000110100001111");
    EXPECT_EQ(rule_from_decimal(0).to_table_string(), std::string(32, '0'));
    EXPECT_EQ(rule_from_decimal(4294967295u).to_table_string(), std::string(32, '1'));
}

TEST(Rule, TableStringRoundTrip) {
    std::mt19937 gen(7);
    for (int i = 0; i < 200; ++i) {
        std::uint32_t d = gen();
        Rule r = rule_from_decimal(d);
        EXPECT_EQ(r.decimal(), d);
        EXPECT_EQ(Rule::from_table_string(r.to_table_string()).decimal(), d);
        auto t = r.table();
        for (unsigned k = 0; k < 32; ++k) EXPECT_EQ(t[k], ((d >> k) & 1) != 0);
    }
}

TEST(Rule, NeighbourhoodEvaluation) {
    Rule r = rule_from_decimal(kSampleRule);
    EXPECT_FALSE(r(0, 0, 1, 0, 0));
    EXPECT_TRUE(r(0, 0, 0, 0, 0));
}

TEST(Rule, IdentityKeepsMiddleBit) {
    for (unsigned k = 0; k < 32; ++k) EXPECT_EQ(Rule::identity().next_state(k), Rmt(k).middle_bit());
    EXPECT_EQ(Rule::identity().decimal(), kIdentity);
}

TEST(Rmt, RejectsOutOfRange) {
    EXPECT_THROW(Rmt(32), InvalidArgument);
    EXPECT_EQ(Rmt(4).middle_bit(), true);
    EXPECT_EQ(Rmt(27).middle_bit(), false);
}

TEST(Configuration, DecimalViewReadsLeftToRight) {
    auto c = Configuration::from_string("01000");
    EXPECT_EQ(c.decimal(), 8u);
    EXPECT_EQ(c.cells(), 5u);
    EXPECT_TRUE(c.cell(1));
    EXPECT_EQ(Configuration(5, 8).to_string(), "01000");
    EXPECT_THROW(Configuration(5, 32), InvalidArgument);
    EXPECT_THROW(Configuration(0, 0), InvalidArgument);
    EXPECT_THROW(Configuration(65, 0), InvalidArgument);
    EXPECT_NO_THROW(Configuration(64, ~std::uint64_t{0}));
}

TEST(Step, NullBoundaryExamples) {
    Rule r = rule_from_decimal(kSampleRule);
    EXPECT_EQ(step(r, Configuration::from_string("00000")).to_string(), "11111");
    EXPECT_EQ(step(r, Configuration::from_string("00001")).to_string(), "11110");
    EXPECT_EQ(naive_step(kSampleRule, "00001"), "11110");
}

TEST(Step, MatchesCellByCellOracle) {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 300; ++trial) {
        auto rule = static_cast<std::uint32_t>(gen());
        unsigned n = 1 + gen() % 64;
        std::uint64_t v = gen() & cell_mask(n);
        Configuration c(n, v);
        auto next = step(rule_from_decimal(rule), c);
        EXPECT_EQ(next.cells(), n);
        EXPECT_EQ(next.to_string(), naive_step(rule, c.to_string())) << "rule " << rule << " n " << n;
    }
}

TEST(Reversible, Examples) {
    EXPECT_TRUE(is_reversible(rule_from_decimal(kSampleRule), 5));
    for (unsigned n = 1; n <= 12; ++n) EXPECT_TRUE(is_reversible(Rule::identity(), n));
    EXPECT_FALSE(is_reversible(rule_from_decimal(0), 5));
}

TEST(Reversible, AgreesWithSuccessorSetOracle) {
    std::mt19937 gen(3);
    std::vector<std::uint32_t> rules = {kSampleRule, kIdentity, 4042321935u, 252702735u, 0u, 4294967295u};
    for (int i = 0; i < 40; ++i) rules.push_back(gen());
    for (auto d : rules)
        for (unsigned n = 1; n <= 9; ++n) {
            std::set<std::string> seen;
            for (std::uint64_t v = 0; v < (1u << n); ++v) seen.insert(naive_step(d, bits_of(v, n)));
            EXPECT_EQ(is_reversible(rule_from_decimal(d), n), seen.size() == (1u << n)) << d << " n=" << n;
        }
}

TEST(Reversible, CapacityLimit) {
    EXPECT_THROW(is_reversible(Rule::identity(), 25), CapacityError);
    EXPECT_THROW(is_reversible(Rule::identity(), 20, EngineLimits{16}), CapacityError);
    EXPECT_THROW(is_reversible(Rule::identity(), 33, EngineLimits{40}), CapacityError);
    EXPECT_THROW(is_reversible(Rule::identity(), 0), InvalidArgument);
}

TEST(Cycles, FiveCellSampleMembership) {
    auto part = decompose_cycles(rule_from_decimal(kSampleRule), 5);
    EXPECT_EQ(part.coverage(), Coverage::Full);
    EXPECT_EQ(*part.cycle_of(1), *part.cycle_of(9));
    EXPECT_EQ(*part.cycle_of(1), *part.cycle_of(12));
    EXPECT_EQ(*part.cycle_of(4), *part.cycle_of(25));
    EXPECT_EQ(*part.cycle_of(4), *part.cycle_of(26));
    EXPECT_NE(*part.cycle_of(1), *part.cycle_of(4));
    EXPECT_NE(*part.cycle_of(2), *part.cycle_of(1));
    EXPECT_NE(*part.cycle_of(2), *part.cycle_of(4));
}

TEST(Cycles, IdentityGivesFixedPoints) {
    auto part = decompose_cycles(Rule::identity(), 4);
    ASSERT_EQ(part.size(), 16u);
    for (std::size_t i = 0; i < 16; ++i) {
        ASSERT_EQ(part.cycle(i).size(), 1u);
        EXPECT_EQ(part.cycle(i)[0], i);
    }
}

TEST(Cycles, FiftySixCyclesAtThirteen) {
    EXPECT_EQ(decompose_cycles(rule_from_decimal(4042321935u), 13).size(), 56u);
}

TEST(Cycles, PartitionInvariants) {
    for (std::uint32_t d : {kSampleRule, 4042321935u, 252702735u, 1263225675u, 252691440u})
        for (unsigned n = 5; n <= 12; ++n) {
            Rule r = rule_from_decimal(d);
            if (!is_reversible(r, n)) {
                EXPECT_THROW(decompose_cycles(r, n), IrreversibleError);
                continue;
            }
            auto part = decompose_cycles(r, n);
            Stepper st(r);
            std::vector<int> hits(1u << n, 0);
            std::size_t total = 0;
            std::uint64_t prev_min = 0;
            for (std::size_t i = 0; i < part.size(); ++i) {
                auto c = part.cycle(i);
                total += c.size();
                EXPECT_EQ(c[0], *std::min_element(c.begin(), c.end()));
                if (i > 0) {
                    EXPECT_GT(c[0], prev_min);
                }
                prev_min = c[0];
                for (std::size_t j = 0; j < c.size(); ++j) {
                    ++hits[c[j]];
                    EXPECT_EQ(st(c[j], n), c[(j + 1) % c.size()]);
                    EXPECT_EQ(*part.cycle_of(c[j]), i);
                }
            }
            EXPECT_EQ(total, 1u << n);
            for (int h : hits) EXPECT_EQ(h, 1);
        }
}

TEST(Cycles, IrreversibleRuleIsReported) {
    try {
        decompose_cycles(rule_from_decimal(0), 5);
        FAIL() << "expected IrreversibleError";
    } catch (const IrreversibleError& e) {
        EXPECT_EQ(e.cells(), 5u);
    }
    std::vector<std::uint64_t> seeds{3};
    EXPECT_THROW(orbit_membership(rule_from_decimal(0), 5, std::span<const std::uint64_t>(seeds)),
                 IrreversibleError);
}

TEST(Cycles, DumpFormat) {
    std::ostringstream os;
    decompose_cycles(rule_from_decimal(kSampleRule), 5).dump(os);
    EXPECT_EQ(os.str(),
              "0 31 8 21 15 20 14 17 10 23 12 18 1 30 9 16 11 22 13 19\n"
              "2 29 3 28\n"
              "4 26 7 24 5 27 6 25\n");
}

TEST(Orbits, SeedsShareCycle) {
    std::vector<std::uint64_t> seeds{1, 9};
    auto part = orbit_membership(rule_from_decimal(kSampleRule), 5, std::span<const std::uint64_t>(seeds));
    EXPECT_EQ(part.coverage(), Coverage::Partial);
    ASSERT_EQ(part.size(), 1u);
    EXPECT_EQ(*part.cycle_of(1), *part.cycle_of(9));
    EXPECT_FALSE(part.cycle_of(2).has_value());
}

TEST(Orbits, EmptySeedList) {
    std::vector<std::uint64_t> seeds;
    auto part = orbit_membership(rule_from_decimal(kSampleRule), 5, std::span<const std::uint64_t>(seeds));
    EXPECT_TRUE(part.empty());
}

TEST(Orbits, ThreeSeedsThreeCycles) {
    std::vector<Configuration> seeds{Configuration(5, 1), Configuration(5, 2), Configuration(5, 4)};
    auto part = orbit_membership(rule_from_decimal(kSampleRule), 5, std::span<const Configuration>(seeds));
    ASSERT_EQ(part.size(), 3u);
    auto full = decompose_cycles(rule_from_decimal(kSampleRule), 5);
    for (auto s : {1u, 2u, 4u}) {
        auto c = part.cycle(*part.cycle_of(s));
        auto f = full.cycle(*full.cycle_of(s));
        EXPECT_TRUE(std::equal(c.begin(), c.end(), f.begin(), f.end()));
    }
}

TEST(Orbits, AgreeWithFullDecomposition) {
    std::mt19937_64 gen(5);
    for (std::uint32_t d : {4042321935u, 252702735u, 1263225675u, kSampleRule})
        for (unsigned n = 6; n <= 13; ++n) {
            Rule r = rule_from_decimal(d);
            if (!is_reversible(r, n)) continue;
            auto full = decompose_cycles(r, n);
            std::vector<std::uint64_t> seeds;
            for (int i = 0; i < 25; ++i) seeds.push_back(gen() & cell_mask(n));
            auto part = orbit_membership(r, n, std::span<const std::uint64_t>(seeds));
            for (auto a : seeds)
                for (auto b : seeds)
                    EXPECT_EQ(*part.cycle_of(a) == *part.cycle_of(b), *full.cycle_of(a) == *full.cycle_of(b));
            for (auto s : seeds) {
                auto c = part.cycle(*part.cycle_of(s));
                auto f = full.cycle(*full.cycle_of(s));
                EXPECT_TRUE(std::equal(c.begin(), c.end(), f.begin(), f.end()));
            }
        }
}

TEST(Orbits, RejectsOversizedSeed) {
    std::vector<std::uint64_t> seeds{32};
    EXPECT_THROW(orbit_membership(Rule::identity(), 5, std::span<const std::uint64_t>(seeds)), InvalidArgument);
}

TEST(Stepper, WideConfigurationsUseEveryChunk) {
    // 64 cells: every lookup window, including the top one, is exercised.
    std::mt19937_64 gen(17);
    for (int i = 0; i < 50; ++i) {
        auto d = static_cast<std::uint32_t>(gen());
        Configuration c(64, gen());
        EXPECT_EQ(Stepper(rule_from_decimal(d))(c).to_string(), naive_step(d, c.to_string()));
    }
}
