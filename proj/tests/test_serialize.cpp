#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "hypergauss/serialize.hpp"
#include "test_util.hpp"

using namespace hypergauss;
using hgtest::ccd;

TEST(Json, CcdLabels) {
  const CCDNumber z = ccd(2, {{0, 1.5}, {3, -2.0}}, {{1, 0.25}});
  const json j = to_json(z);
  EXPECT_EQ(j.size(), 4u);
  EXPECT_EQ(j["i0"]["re"], 1.5);
  EXPECT_EQ(j["i1"]["im"], 0.25);
  EXPECT_EQ(j["i3"]["re"], -2.0);
  EXPECT_EQ(j.dump(), R"({"i0":{"im":0.0,"re":1.5},"i1":{"im":0.25,"re":0.0},"i2":{"im":0.0,"re":0.0},"i3":{"im":0.0,"re":-2.0}})");
  EXPECT_EQ(ccd_from_json(j, 2), z);
}

TEST(Json, AdmissibilityReport) {
  const json j = to_json(check_alpha(hgtest::one_block(2, hgtest::complexified(), Matrix::identity(1))));
  EXPECT_TRUE(j["pass"].get<bool>());
  ASSERT_EQ(j["blocks"].size(), 1u);
  EXPECT_EQ(j["blocks"][0]["block"], 1);
  EXPECT_NEAR(j["blocks"][0]["q"]["im"].get<double>(), 1.0, 1e-15);
}

TEST(Kernel, CsvHeaderAndRows) {
  GridSpec g;
  g.axes = {Axis{1.0, 2}, Axis{1.0, 2}};
  Field f(g, 1, Domain::space);
  f.set(3, ccd(1, {{0, 0.5}, {1, -1.0}}, {{1, 2.0}}));
  std::ostringstream os;
  write_kernel_csv(os, f);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "x1,x2,re_i0,re_i1,im_i0,im_i1");
  std::getline(is, line);
  EXPECT_EQ(line, "-1,-1,0,0,0,0");
  std::getline(is, line);
  std::getline(is, line);
  std::getline(is, line);
  EXPECT_EQ(line, "0,0,0.5,-1,0,2");
}

TEST(Kernel, BinaryRoundTrip) {
  GridSpec g;
  g.t = 0.75;
  g.axes = {Axis{3.0, 8}, Axis{2.0, 4}};
  Field f(g, 2, Domain::space);
  std::mt19937_64 rng(701);
  for (std::size_t k = 0; k < f.size(); ++k) f.set(k, hgtest::rand_ccd(2, rng));
  std::stringstream ss;
  write_kernel_binary(ss, f);
  const std::string bytes = ss.str();
  const auto nl = bytes.find('\n');
  const json header = json::parse(bytes.substr(0, nl));
  EXPECT_EQ(header["format"], "hgk-1");
  EXPECT_EQ(header["endian"], "little");
  EXPECT_EQ(header["payload_bytes"], f.raw().size() * 8);
  EXPECT_EQ(bytes.size() - nl - 1, f.raw().size() * 8);
  const Field back = read_kernel_binary(ss);
  EXPECT_EQ(back.grid(), g);
  EXPECT_EQ(back.level(), 2);
  ASSERT_EQ(back.raw().size(), f.raw().size());
  for (std::size_t k = 0; k < f.raw().size(); ++k) EXPECT_EQ(back.raw()[k], f.raw()[k]);
}

TEST(Kernel, BinaryRejectsTruncation) {
  GridSpec g;
  g.axes = {Axis{1.0, 4}};
  Field f(g, 0, Domain::space);
  std::stringstream ss;
  write_kernel_binary(ss, f);
  std::string bytes = ss.str();
  bytes.pop_back();
  std::istringstream cut(bytes);
  EXPECT_THROW(read_kernel_binary(cut), InvalidInput);
  std::istringstream junk("not a header\n");
  EXPECT_THROW(read_kernel_binary(junk), InvalidInput);
}
