#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "xresp/ingest.hpp"
#include "xresp/pipeline.hpp"

using namespace xresp;

namespace {
const SessionWindow kWindow{};  // 09:40:00 .. 15:50:00
}

TEST_CASE("session window defaults") {
    CHECK(kWindow.length() == 22200);
    CHECK(kWindow.contains(parse_time_of_day("09:40:00")));
    CHECK_FALSE(kWindow.contains(parse_time_of_day("15:50:00")));  // half-open
    CHECK_FALSE(kWindow.contains(parse_time_of_day("09:39:59")));
}

TEST_CASE("parse_trades basics") {
    std::string csv =
        "day,time,price,volume\n"
        "2008-01-07,09:40:00,10.00,100\n"
        "2008-01-07,09:40:00,10.01,50\n"
        "2008-01-07,09:40:02,10.02,200\n";
    auto days = parse_trades(csv, kWindow);
    REQUIRE(days.size() == 1);
    REQUIRE(days[0].trades.size() == 3);
    CHECK(days[0].day == Date{2008, 1, 7});
    // Two trades in the same second get seq 1, 2 in file order.
    CHECK(days[0].trades[0].seq == 1);
    CHECK(days[0].trades[1].seq == 2);
    CHECK(days[0].trades[2].seq == 1);
    CHECK(days[0].trades[2].second == 2);
}

TEST_CASE("parse_trades rejects nonpositive price") {
    std::string csv = "day,time,price,volume\n2008-01-07,10:00:00,0,100\n";
    CHECK_THROWS_AS(parse_trades(csv, kWindow), ParseError);
}

TEST_CASE("parse_trades rejects zero volume") {
    std::string csv = "day,time,price,volume\n2008-01-07,10:00:00,10.0,0\n";
    CHECK_THROWS_AS(parse_trades(csv, kWindow), ParseError);
}

TEST_CASE("parse_trades drops rows outside the session") {
    std::string csv =
        "day,time,price,volume\n"
        "2008-01-07,09:39:59,10.00,1\n"
        "2008-01-07,09:39:58,10.00,1\n"
        "2008-01-07,09:39:57,10.00,1\n";
    CHECK(parse_trades(csv, kWindow).empty());
}

TEST_CASE("parse_trades rejects non-monotone times within a day") {
    std::string csv =
        "day,time,price,volume\n"
        "2008-01-07,10:00:05,10.00,1\n"
        "2008-01-07,10:00:04,10.00,1\n";
    CHECK_THROWS_AS(parse_trades(csv, kWindow), ParseError);
}

TEST_CASE("parse_trades accepts CRLF and malformed lines carry line numbers") {
    std::string csv = "day,time,price,volume\r\n2008-01-07,10:00:00,10.0,100\r\n";
    CHECK(parse_trades(csv, kWindow).size() == 1);
    std::string bad = "day,time,price,volume\n2008-01-07,10:00:00,abc,100\n";
    try {
        parse_trades(bad, kWindow);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("parse_quotes rejects crossed quotes") {
    std::string csv = "day,time,bid,ask\n2008-01-07,10:00:00,10.00,9.99\n";
    CHECK_THROWS_AS(parse_quotes(csv, kWindow), ParseError);
}

TEST_CASE("quote exactly at the close is dropped") {
    std::string csv =
        "day,time,bid,ask\n"
        "2008-01-07,15:49:59,10.00,10.02\n"
        "2008-01-07,15:50:00,10.00,10.02\n";
    auto days = parse_quotes(csv, kWindow);
    REQUIRE(days.size() == 1);
    CHECK(days[0].quotes.size() == 1);
}

TEST_CASE("midpoint carry-forward") {
    std::string csv = "day,time,bid,ask\n2008-01-07,09:40:00,10.00,10.02\n";
    auto days = parse_quotes(csv, kWindow);
    MidpointSeries m = build_midpoints(days[0], kWindow);
    CHECK(m.first_defined == 0);
    CHECK(m.values[0] == 10.01);
    CHECK(m.values[22199] == 10.01);
}

TEST_CASE("midpoint updates at quote seconds only") {
    std::string csv =
        "day,time,bid,ask\n"
        "2008-01-07,09:40:00,10.00,10.02\n"
        "2008-01-07,09:40:05,10.02,10.04\n";
    auto days = parse_quotes(csv, kWindow);
    MidpointSeries m = build_midpoints(days[0], kWindow);
    CHECK(m.values[4] == 10.01);
    CHECK(m.values[5] == 10.03);
}

TEST_CASE("seconds before the first quote are undefined") {
    std::string csv = "day,time,bid,ask\n2008-01-07,09:41:40,10.00,10.02\n";
    auto days = parse_quotes(csv, kWindow);
    MidpointSeries m = build_midpoints(days[0], kWindow);
    CHECK(m.first_defined == 100);
    CHECK_FALSE(is_defined(m.values[50]));
    CHECK(is_defined(m.values[100]));
}

TEST_CASE("single quote at 09:40:05 gives first_defined 5") {
    std::string csv = "day,time,bid,ask\n2008-01-07,09:40:05,10.00,10.02\n";
    auto days = parse_quotes(csv, kWindow);
    CHECK(build_midpoints(days[0], kWindow).first_defined == 5);
}

TEST_CASE("zero-spread quotes are accepted with midpoint equal to bid") {
    std::string csv = "day,time,bid,ask\n2008-01-07,10:00:00,10.00,10.00\n";
    auto days = parse_quotes(csv, kWindow);
    MidpointSeries m = build_midpoints(days[0], kWindow);
    CHECK(m.values[m.first_defined] == 10.00);
}

TEST_CASE("midpoints are piecewise constant between quote seconds") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> sec(0, 22199);
    std::uniform_real_distribution<double> px(10.0, 20.0);
    std::vector<int> quote_seconds;
    DayQuotes dq;
    dq.day = Date{2008, 3, 4};
    std::vector<int> secs;
    for (int k = 0; k < 30; ++k) secs.push_back(sec(rng));
    std::sort(secs.begin(), secs.end());
    for (int s : secs) {
        double bid = px(rng);
        dq.quotes.push_back({s, bid, bid + 0.02});
        quote_seconds.push_back(s);
    }
    MidpointSeries m = build_midpoints(dq, kWindow);
    for (int t = m.first_defined + 1; t < kWindow.length(); ++t) {
        bool has_quote =
            std::find(quote_seconds.begin(), quote_seconds.end(), t) != quote_seconds.end();
        if (!has_quote)
            CHECK(m.values[static_cast<std::size_t>(t)] ==
                  m.values[static_cast<std::size_t>(t - 1)]);
    }
}

TEST_CASE("batch midpoints skip empty days with a warning") {
    std::vector<DayQuotes> days(2);
    days[0].day = Date{2008, 1, 7};
    days[0].quotes.push_back({0, 10.0, 10.02});
    days[1].day = Date{2008, 1, 8};  // no quotes
    std::vector<std::string> warnings;
    auto out = build_midpoints(days, kWindow, &warnings);
    CHECK(out.size() == 1);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("2008-01-08") != std::string::npos);
}

TEST_CASE("common_days intersects, orders, errors on empty") {
    Date mon{2008, 1, 7}, tue{2008, 1, 8}, wed{2008, 1, 9};
    std::vector<Date> a{mon, tue}, b{tue, wed};
    auto c = common_days(a, b);
    REQUIRE(c.size() == 1);
    CHECK(c[0] == tue);

    auto cc = common_days(a, a);
    CHECK(cc == a);

    std::vector<Date> d{wed};
    std::vector<Date> e{mon};
    CHECK_THROWS_AS(common_days(d, e), DataError);
}

TEST_CASE("common_days is commutative and idempotent") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> day(1, 28);
    for (int round = 0; round < 20; ++round) {
        std::vector<Date> a, b;
        for (int k = 0; k < 10; ++k) a.push_back(Date{2008, 1, day(rng)});
        for (int k = 0; k < 10; ++k) b.push_back(Date{2008, 1, day(rng)});
        std::vector<Date> ab, ba;
        try {
            ab = common_days(a, b);
        } catch (const DataError&) {
            CHECK_THROWS_AS(common_days(b, a), DataError);
            continue;
        }
        ba = common_days(b, a);
        CHECK(ab == ba);
        CHECK(common_days(ab, ab) == ab);
    }
}

TEST_CASE("trade and quote round-trip through the CSV schema") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> sec(0, 22199);
    std::uniform_real_distribution<double> px(1.0, 500.0);
    std::uniform_int_distribution<std::int64_t> vol(1, 100000);

    std::vector<DayTrades> trades(2);
    std::vector<DayQuotes> quotes(2);
    Date day{2008, 5, 1};
    for (int d = 0; d < 2; ++d, day = next_day(day)) {
        trades[d].day = day;
        quotes[d].day = day;
        std::vector<int> secs;
        for (int k = 0; k < 50; ++k) secs.push_back(sec(rng));
        std::sort(secs.begin(), secs.end());
        int prev = -1, seq = 0;
        for (int s : secs) {
            seq = (s == prev) ? seq + 1 : 1;
            prev = s;
            trades[d].trades.push_back({s, seq, px(rng), vol(rng)});
            double bid = px(rng);
            quotes[d].quotes.push_back({s, bid, bid + 0.02});
        }
    }

    auto trades2 = parse_trades(serialize_trades(trades, kWindow), kWindow);
    REQUIRE(trades2.size() == trades.size());
    for (std::size_t d = 0; d < trades.size(); ++d) {
        REQUIRE(trades2[d].trades.size() == trades[d].trades.size());
        CHECK(trades2[d].day == trades[d].day);
        for (std::size_t k = 0; k < trades[d].trades.size(); ++k) {
            CHECK(trades2[d].trades[k].second == trades[d].trades[k].second);
            CHECK(trades2[d].trades[k].seq == trades[d].trades[k].seq);
            CHECK(trades2[d].trades[k].price == trades[d].trades[k].price);
            CHECK(trades2[d].trades[k].volume == trades[d].trades[k].volume);
        }
    }

    auto quotes2 = parse_quotes(serialize_quotes(quotes, kWindow), kWindow);
    REQUIRE(quotes2.size() == quotes.size());
    for (std::size_t d = 0; d < quotes.size(); ++d) {
        REQUIRE(quotes2[d].quotes.size() == quotes[d].quotes.size());
        for (std::size_t k = 0; k < quotes[d].quotes.size(); ++k) {
            CHECK(quotes2[d].quotes[k].second == quotes[d].quotes[k].second);
            CHECK(quotes2[d].quotes[k].bid == quotes[d].quotes[k].bid);
            CHECK(quotes2[d].quotes[k].ask == quotes[d].quotes[k].ask);
        }
    }
}

TEST_CASE("sector metadata CSV and TOML forms") {
    SectorMeta csv = load_sector_meta("symbol,sector\nAAA,Tech\nBBB,Energy\nCCC,Tech\n");
    REQUIRE(csv.entries.size() == 3);
    CHECK(*csv.sector_of("BBB") == "Energy");
    CHECK(csv.sector_of("ZZZ") == nullptr);

    SectorMeta toml = load_sector_meta("AAA = \"Tech\"\nBBB = \"Energy\"\n");
    REQUIRE(toml.entries.size() == 2);
    CHECK(*toml.sector_of("AAA") == "Tech");
}

TEST_CASE("active days require a trade and a quote") {
    std::vector<DayTrades> trades(2);
    trades[0].day = Date{2008, 1, 7};
    trades[0].trades.push_back({0, 1, 10.0, 1});
    trades[1].day = Date{2008, 1, 8};
    trades[1].trades.push_back({0, 1, 10.0, 1});
    std::vector<DayQuotes> quotes(1);
    quotes[0].day = Date{2008, 1, 7};
    quotes[0].quotes.push_back({0, 10.0, 10.02});
    auto days = active_days(trades, quotes);
    REQUIRE(days.size() == 1);
    CHECK(days[0] == Date{2008, 1, 7});
}
