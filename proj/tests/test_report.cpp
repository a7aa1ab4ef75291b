#include <doctest.h>

#include <map>
#include <string>

#include <json.hpp>

#include "srdcnn/report.hpp"

using namespace srdcnn;

TEST_CASE("published constants carry the reference values") {
    CHECK(published_accuracy("ItalyPowerDemand", "SRDCNN") == 0.9546);
    CHECK(published_accuracy("ItalyPowerDemand", "DTW-R1-1NN") == 0.9226);
    CHECK(published_accuracy("Coffee", "SRDCNN") == 1.0);
    CHECK(published_accuracy("Coffee", "DTW-R1-1NN") == 0.9889);
    CHECK(published_accuracy("ChlorineConcentration", "MLP") == 0.8699);
    CHECK_FALSE(published_accuracy("Coffee", "HDCNN").has_value());
    CHECK_FALSE(published_accuracy("NoSuchSet", "SRDCNN").has_value());
    CHECK(published_results().size() == 13 * 5);
    for (const PublishedEntry& e : published_results()) {
        CHECK(std::string(e.citation).find("Table 3") != std::string::npos);
    }
}

TEST_CASE("best-count tally reproduces the published totals") {
    std::map<std::string, int> best;
    for (const char* dataset : published_datasets()) {
        double top = -1.0;
        std::string winner;
        for (const char* method : published_methods()) {
            const double acc = *published_accuracy(dataset, method);
            if (acc > top) {
                top = acc;
                winner = method;
            }
        }
        ++best[winner];
    }
    CHECK(best["SRDCNN"] == 6);
    CHECK(best["COTE"] == 4);
    CHECK(best["BOSS"] == 2);
    CHECK(best["MLP"] == 1);
    CHECK(best["DTW-R1-1NN"] == 0);
}

TEST_CASE("dataset names resolve case-insensitively") {
    CHECK(canonical_dataset_name("coffee") == std::string("Coffee"));
    CHECK(canonical_dataset_name("ITALYPOWERDEMAND") == std::string("ItalyPowerDemand"));
    CHECK_FALSE(canonical_dataset_name("espresso").has_value());
}

TEST_CASE("report json mixes published and measured rows") {
    const MeasuredResult mine{"ItalyPowerDemand", "SRDCNN", 0.91};
    const auto doc = nlohmann::json::parse(render_report_json({&mine, 1}));
    REQUIRE(doc.is_array());
    CHECK(doc.size() == 13 * 5 + 1);

    std::size_t published_rows = 0, measured_rows = 0;
    for (const auto& row : doc) {
        CHECK(row.contains("dataset"));
        CHECK(row.contains("method"));
        CHECK(row.contains("accuracy"));
        CHECK(row.contains("citation"));
        const std::string source = row.at("source");
        if (source == "published") {
            ++published_rows;
        } else {
            CHECK(source == "measured");
            ++measured_rows;
        }
    }
    CHECK(published_rows == 13 * 5);
    CHECK(measured_rows == 1);
}

TEST_CASE("text table stars the best published method and dashes missing cells") {
    const MeasuredResult mine{"ItalyPowerDemand", "SRDCNN", 0.9123};
    const std::string table = render_text_table({&mine, 1});

    CHECK(table.find("0.9546") != std::string::npos); // published SRDCNN on Italy
    CHECK(table.find("0.9703*") != std::string::npos); // COTE wins the Italy row
    CHECK(table.find("0.9123") != std::string::npos); // the measured value
    CHECK(table.find("—") != std::string::npos); // unmeasured cells
    CHECK(table.find("best count") != std::string::npos);

    // the tally row ends the table with the published counts
    const std::size_t tally_pos = table.rfind("best count");
    const std::string tally = table.substr(tally_pos);
    CHECK(tally.find('6') != std::string::npos);
    CHECK(tally.find('4') != std::string::npos);

    // a 0 never stands in for a missing measurement
    CHECK(table.find("0.0000") == std::string::npos);
}
