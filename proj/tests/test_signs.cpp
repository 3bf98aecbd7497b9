#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "xresp/signs.hpp"

using namespace xresp;

namespace {

const SessionWindow kShort{0, 20};  // 20-second toy session

DayTrades make_day(std::initializer_list<double> prices) {
    DayTrades d;
    d.day = Date{2008, 1, 7};
    int sec = 0;
    for (double p : prices) d.trades.push_back({sec++, 1, p, 100});
    return d;
}

PerTradeSignSeries series_with(std::initializer_list<std::int8_t> signs) {
    PerTradeSignSeries s;
    s.day = Date{2008, 1, 7};
    int seq = 1;
    for (std::int8_t v : signs) s.entries.push_back({0, seq++, v});
    return s;
}

}  // namespace

TEST_CASE("tick rule: up move sets +1, unchanged inherits") {
    auto signs = classify_per_trade(make_day({10.00, 10.01, 10.01}));
    REQUIRE(signs.entries.size() == 3);
    CHECK(signs.entries[0].sign == 0);  // unset: no prior reference
    CHECK(signs.entries[1].sign == 1);
    CHECK(signs.entries[2].sign == 1);
}

TEST_CASE("tick rule: down move sets -1") {
    auto signs = classify_per_trade(make_day({10.00, 9.99}));
    CHECK(signs.entries[1].sign == -1);
}

TEST_CASE("tick rule: leading run at unchanged price stays unset") {
    auto signs = classify_per_trade(make_day({10.00, 10.00, 10.00, 10.01}));
    CHECK(signs.entries[0].sign == 0);
    CHECK(signs.entries[1].sign == 0);
    CHECK(signs.entries[2].sign == 0);
    CHECK(signs.entries[3].sign == 1);
}

TEST_CASE("tick rule spans second boundaries within a day") {
    DayTrades d;
    d.day = Date{2008, 1, 7};
    d.trades.push_back({0, 1, 10.00, 1});
    d.trades.push_back({5, 1, 10.02, 1});
    d.trades.push_back({9, 1, 10.02, 1});
    auto signs = classify_per_trade(d);
    CHECK(signs.entries[1].sign == 1);
    CHECK(signs.entries[2].sign == 1);
}

TEST_CASE("number aggregation follows the sign of the sum") {
    auto agg = aggregate_number(series_with({1, 1, -1}), kShort);
    CHECK(agg.values[0] == 1);

    auto balanced = aggregate_number(series_with({1, -1}), kShort);
    CHECK(balanced.values[0] == 0);

    auto none = aggregate_number(PerTradeSignSeries{Date{2008, 1, 7}, {}}, kShort);
    for (auto v : none.values) CHECK(v == 0);
}

TEST_CASE("unset per-trade signs contribute zero to aggregation") {
    auto agg = aggregate_number(series_with({0, 0, 1}), kShort);
    CHECK(agg.values[0] == 1);
    auto only_unset = aggregate_number(series_with({0, 0}), kShort);
    CHECK(only_unset.values[0] == 0);
}

TEST_CASE("volume aggregation follows the volume imbalance") {
    DayTrades d;
    d.day = Date{2008, 1, 7};
    d.trades.push_back({0, 1, 10.0, 100});
    d.trades.push_back({0, 2, 10.0, 300});
    PerTradeSignSeries s;
    s.day = d.day;
    s.entries = {{0, 1, 1}, {0, 2, -1}};
    auto agg = aggregate_volume(s, d, kShort);
    CHECK(agg.values[0] == -1);  // sgn(100 - 300)

    d.trades[1].volume = 100;
    auto balanced = aggregate_volume(s, d, kShort);
    CHECK(balanced.values[0] == 0);
}

TEST_CASE("single-trade seconds agree across aggregation conventions") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> sign(0, 1);
    std::uniform_int_distribution<std::int64_t> vol(1, 1000);
    DayTrades d;
    d.day = Date{2008, 1, 7};
    PerTradeSignSeries s;
    s.day = d.day;
    for (int t = 0; t < 20; ++t) {
        d.trades.push_back({t, 1, 10.0, vol(rng)});
        s.entries.push_back({t, 1, static_cast<std::int8_t>(sign(rng) == 0 ? -1 : 1)});
    }
    auto num = aggregate_number(s, kShort);
    auto volagg = aggregate_volume(s, d, kShort);
    for (std::size_t t = 0; t < num.values.size(); ++t) CHECK(num.values[t] == volagg.values[t]);
}

TEST_CASE("per-trade accuracy: identity and full flip") {
    DayTrades d = make_day({10.00, 10.01, 10.00, 10.02});
    auto theo = classify_per_trade(d);

    PerTradeSignSeries ref;
    ref.day = d.day;
    for (const auto& e : theo.entries)
        if (e.sign != 0) ref.entries.push_back(e);

    auto rep = accuracy_per_trade({&theo, 1}, {&ref, 1});
    CHECK(rep.n_identified == 3);
    CHECK(rep.accuracy == 1.0);

    for (auto& e : ref.entries) e.sign = static_cast<std::int8_t>(-e.sign);
    auto flipped = accuracy_per_trade({&theo, 1}, {&ref, 1});
    CHECK(flipped.accuracy == 0.0);
}

TEST_CASE("per-trade accuracy: unknown reference key is a consistency error") {
    DayTrades d = make_day({10.00, 10.01});
    auto theo = classify_per_trade(d);
    PerTradeSignSeries ref;
    ref.day = d.day;
    ref.entries.push_back({15, 1, 1});  // no such trade
    CHECK_THROWS_AS(accuracy_per_trade({&theo, 1}, {&ref, 1}), DataError);
}

TEST_CASE("per-second accuracy excludes all-zero seconds") {
    SignSeries theo{Date{2008, 1, 7}, {0, 1, -1, 0}, SignConvention::number_imbalance};
    SignSeries rn{Date{2008, 1, 7}, {0, 1, 1, 0}, SignConvention::number_imbalance};
    SignSeries rv{Date{2008, 1, 7}, {0, 1, -1, 1}, SignConvention::volume_imbalance};
    auto rep = accuracy_per_second({&theo, 1}, {&rn, 1}, {&rv, 1});
    // Second 0 is zero in all three and excluded; second 3 is not (rv = 1).
    CHECK(rep.vs_number.excluded_all_zero == 1);
    CHECK(rep.vs_number.n_identified == 3);
    CHECK(rep.vs_number.n_matches == 2);  // t=1 matches, t=2 differs, t=3 matches (0 == 0)
    CHECK(rep.vs_volume.n_matches == 2);  // t=1, t=2 match; t=3 differs
    CHECK(rep.vs_number.n_zero_signs == 2);
    CHECK(rep.vs_volume.n_zero_signs == 1);
    CHECK(rep.n_zero_theoretical == 2);
}

TEST_CASE("per-second accuracy identical series") {
    SignSeries s{Date{2008, 1, 7}, {1, -1, 1, -1}, SignConvention::number_imbalance};
    SignSeries sv = s;
    sv.convention = SignConvention::volume_imbalance;
    auto rep = accuracy_per_second({&s, 1}, {&s, 1}, {&sv, 1});
    CHECK(rep.vs_number.accuracy == 1.0);
    CHECK(rep.vs_volume.accuracy == 1.0);
}

TEST_CASE("per-second accuracy rejects length mismatch") {
    SignSeries a{Date{2008, 1, 7}, {1, -1}, SignConvention::number_imbalance};
    SignSeries b{Date{2008, 1, 7}, {1, -1, 0}, SignConvention::number_imbalance};
    CHECK_THROWS_AS(accuracy_per_second({&a, 1}, {&b, 1}, {&b, 1}), DataError);
}

TEST_CASE("gap persistence counts same and different boundaries") {
    SignSeries s{Date{2008, 1, 7}, {1, 0, 0, 1}, SignConvention::number_imbalance};
    auto gp = gap_persistence({&s, 1});
    REQUIRE(gp.populated(2));
    CHECK(gp.same_count[2] == 1);
    CHECK(gp.diff_count[2] == 0);
    CHECK(gp.p_same(2) == 1.0);

    SignSeries t{Date{2008, 1, 7}, {1, 0, -1}, SignConvention::number_imbalance};
    auto gp2 = gap_persistence({&t, 1});
    REQUIRE(gp2.populated(1));
    CHECK(gp2.diff_count[1] == 1);
}

TEST_CASE("gap persistence never pairs across days and ignores edge runs") {
    // Leading and trailing zero runs have only one bounding sign.
    SignSeries s{Date{2008, 1, 7}, {0, 0, 1, 0}, SignConvention::number_imbalance};
    auto gp = gap_persistence({&s, 1});
    CHECK(gp.same_count.empty());

    std::vector<SignSeries> days{
        {Date{2008, 1, 7}, {1, 0, 0, 0}, SignConvention::number_imbalance},
        {Date{2008, 1, 8}, {0, 1, 0, 0}, SignConvention::number_imbalance}};
    GapPersistence gp2 = gap_persistence(days);
    CHECK(gp2.same_count.empty());  // runs touch a day edge on each side
}

TEST_CASE("p_same + p_diff = 1 on every populated bin") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> sign(-1, 1);
    std::vector<SignSeries> days;
    Date day{2008, 2, 1};
    for (int d = 0; d < 10; ++d, day = next_day(day)) {
        SignSeries s;
        s.day = day;
        s.convention = SignConvention::number_imbalance;
        s.values.resize(500);
        for (auto& v : s.values) v = static_cast<std::int8_t>(sign(rng));
        days.push_back(std::move(s));
    }
    auto gp = gap_persistence(days);
    bool any = false;
    for (std::size_t tau0 = 1; tau0 < gp.same_count.size(); ++tau0) {
        if (!gp.populated(tau0)) continue;
        any = true;
        CHECK(gp.p_same(tau0) + gp.p_diff(tau0) == 1.0);
    }
    CHECK(any);
}

TEST_CASE("gap persistence merge is associative per bin") {
    SignSeries a{Date{2008, 1, 7}, {1, 0, 1, 0, -1}, SignConvention::number_imbalance};
    SignSeries b{Date{2008, 1, 8}, {-1, 0, 0, -1}, SignConvention::number_imbalance};
    auto ga = gap_persistence({&a, 1});
    auto gb = gap_persistence({&b, 1});
    ga.merge(gb);
    auto both = gap_persistence(std::vector<SignSeries>{a, b});
    REQUIRE(ga.same_count.size() == both.same_count.size());
    for (std::size_t k = 0; k < ga.same_count.size(); ++k) {
        CHECK(ga.same_count[k] == both.same_count[k]);
        CHECK(ga.diff_count[k] == both.diff_count[k]);
    }
}

TEST_CASE("gap persistence requires the number-imbalance convention") {
    SignSeries s{Date{2008, 1, 7}, {1, 0, 1}, SignConvention::volume_imbalance};
    CHECK_THROWS_AS(gap_persistence({&s, 1}), DataError);
}

TEST_CASE("reference sign CSV parsing") {
    SessionWindow w{};
    std::string csv =
        "day,time,seq,sign\n"
        "2008-01-07,09:40:00,1,B\n"
        "2008-01-07,09:40:00,2,S\n"
        "2008-01-07,09:39:59,1,B\n";  // outside the window: dropped
    auto ref = parse_reference_signs(csv, w);
    REQUIRE(ref.size() == 1);
    REQUIRE(ref[0].entries.size() == 2);
    CHECK(ref[0].entries[0].sign == 1);
    CHECK(ref[0].entries[1].sign == -1);

    CHECK_THROWS_AS(parse_reference_signs("day,time,seq,sign\n2008-01-07,10:00:00,1,X\n", w),
                    ParseError);
}

TEST_CASE("aggregate_reference uses trade volumes and validates keys") {
    SessionWindow w{0, 10};
    DayTrades d;
    d.day = Date{2008, 1, 7};
    d.trades.push_back({2, 1, 10.0, 100});
    d.trades.push_back({2, 2, 10.0, 300});
    PerTradeSignSeries ref;
    ref.day = d.day;
    ref.entries = {{2, 1, 1}, {2, 2, -1}};
    auto agg = aggregate_reference(ref, d, w);
    CHECK(agg.number.values[2] == 0);   // +1 - 1
    CHECK(agg.volume.values[2] == -1);  // 100 - 300

    ref.entries.push_back({5, 1, 1});
    CHECK_THROWS_AS(aggregate_reference(ref, d, w), DataError);
}
