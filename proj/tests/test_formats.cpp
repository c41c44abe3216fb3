#include <gtest/gtest.h>

#include <sstream>

#include "commands.hpp"
#include "fixtures.hpp"
#include "formats.hpp"
#include "hypack/errors.hpp"
#include "hypack/packing.hpp"

using namespace hypack;

TEST(Formats, RealsRoundTripExactly) {
    for (double v : {0.1, -1.0 / 3.0, 1e-300, 0.9142946128874595}) EXPECT_EQ(std::stod(cli::format_real(v)), v);
}

TEST(Formats, Rationals) {
    EXPECT_EQ(cli::parse_rational("2/6"), mpq_class(1, 3));
    EXPECT_EQ(cli::parse_rational("3"), mpq_class(3));
    EXPECT_THROW(cli::parse_rational("1/0"), DomainError);
    EXPECT_THROW(cli::parse_rational("x"), DomainError);
}

TEST(Formats, PackingRoundTrip) {
    const PeriodicPacking p = build_tight_packing_index2(8);
    std::stringstream ss;
    cli::write_metadata(ss, "test", 1, {{"k", "8"}});
    cli::write_packing(ss, p);
    const PeriodicPacking q = cli::read_packing(ss);
    EXPECT_EQ(q.radius, p.radius);
    EXPECT_EQ(q.centers, p.centers);
    EXPECT_EQ(q.stabilizers, p.stabilizers);
    EXPECT_EQ(q.domain.vertices, p.domain.vertices);
    ASSERT_EQ(q.generators.size(), p.generators.size());
    for (std::size_t i = 0; i < p.generators.size(); ++i) EXPECT_EQ(q.generators[i].matrix(), p.generators[i].matrix());
    EXPECT_EQ(periodic_density(q).value, periodic_density(p).value);
}

TEST(Formats, WeightsAndQuotientRoundTrip) {
    const CylinderWeights w = fixtures::no_three_ones();
    std::stringstream ss;
    cli::write_weights(ss, w);
    const CylinderWeights v = cli::read_weights(ss);
    EXPECT_EQ(v.vertex_w, w.vertex_w);
    EXPECT_EQ(v.edge_w, w.edge_w);
    EXPECT_EQ(v.exact, w.exact);

    const QuotientSystem q = build_quotient(w);
    std::stringstream qs;
    cli::write_quotient(qs, q);
    const QuotientSystem r = cli::read_quotient(qs);
    EXPECT_EQ(r.labels, q.labels);
    EXPECT_EQ(r.perms, q.perms);
}

TEST(Formats, ColoringRoundTrip) {
    const FreeGroupEmbedding emb = default_free_group({0.3, 0.2});
    const PackingColoring c = encode({{0.05, 0.1}, {-0.4, 0.3}}, 0.1, emb, 1);
    std::stringstream ss;
    cli::write_coloring(ss, c);
    const PackingColoring d = cli::read_coloring(ss);
    EXPECT_EQ(d.radius, c.radius);
    EXPECT_EQ(d.window, c.window);
    EXPECT_EQ(d.values, c.values);
    EXPECT_NEAR(d.embedding.basepoint.x, 0.3, 0.0);
}

TEST(Formats, RejectsWrongTagAndTruncation) {
    std::stringstream wrong("hypack-weights 1\nn 1\n");
    EXPECT_THROW(cli::read_packing(wrong), std::exception);
    std::stringstream trunc("hypack-weights 1\nn 1\nr 0\n");
    EXPECT_THROW(cli::read_weights(trunc), std::exception);
}

TEST(Commands, TightCsvHeaderAndRows) {
    std::stringstream ss;
    cli::cmd_tight(9, ss);
    std::string line, last;
    bool header = false;
    int rows = 0;
    while (std::getline(ss, line)) {
        if (line.rfind("k,", 0) == 0) header = true;
        else if (!line.empty() && line[0] != '#') ++rows;
    }
    EXPECT_TRUE(header);
    EXPECT_EQ(rows, 3);
}

TEST(Commands, ApproxReportsValidOutputs) {
    std::stringstream q, l, log;
    const cli::ApproxReport rep =
        cli::cmd_approx(weights_from_bernoulli(std::vector<mpq_class>{mpq_class(1, 3), mpq_class(2, 3)}, 1, 1),
                        mpq_class(1, 10), q, l, log);
    EXPECT_TRUE(rep.quotient_valid);
    EXPECT_TRUE(rep.lambda_valid);
    EXPECT_TRUE(rep.support_preserved);
    EXPECT_EQ(cli::read_quotient(q).size(), rep.approx.quotient.size());
}
