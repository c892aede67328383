#include <cmath>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "arcknot/error.hpp"
#include "arcknot/results.hpp"

using namespace arcknot;

namespace {

ResultTable sample() {
  ResultTable t;
  t.columns = {"n", "value", "curve", "gap"};
  t.add_row({std::int64_t{16}, 6.257892135485564, std::string("ellipse(2,1)"), 1.0 / 3.0});
  t.add_row({std::int64_t{32}, 1e-300, std::string("plain"), std::numeric_limits<double>::infinity()});
  t.add_row({std::int64_t{64}, 16.0, std::string("say \"hi\""), std::nan("")});
  return t;
}

}  // namespace

TEST(Csv, FormatsTwelveDigits) {
  std::ostringstream os;
  sample().write_csv(os);
  EXPECT_EQ(os.str(),
            "n,value,curve,gap\n"
            "16,6.25789213549,\"ellipse(2,1)\",0.333333333333\n"
            "32,1e-300,plain,inf\n"
            "64,16,\"say \"\"hi\"\"\",nan\n");
}

TEST(Csv, RoundTripIsByteIdentical) {
  std::ostringstream first;
  sample().write_csv(first);
  std::istringstream in(first.str());
  std::ostringstream second;
  ResultTable::read_csv(in).write_csv(second);
  EXPECT_EQ(first.str(), second.str());
}

TEST(Json, RoundTripIsByteIdentical) {
  std::ostringstream first;
  sample().write_json(first);
  std::istringstream in(first.str());
  const ResultTable back = ResultTable::read_json(in);
  EXPECT_EQ(back.columns, sample().columns);
  std::ostringstream second;
  back.write_json(second);
  EXPECT_EQ(first.str(), second.str());
  EXPECT_NE(first.str().find("\"gap\": \"inf\""), std::string::npos);
}

TEST(Csv, RejectsRaggedRows) {
  std::istringstream in("a,b\n1,2\n3\n");
  EXPECT_THROW(ResultTable::read_csv(in), PreconditionError);
}

TEST(Table, ColumnLookup) {
  const ResultTable t = sample();
  EXPECT_DOUBLE_EQ(t.number(0, "value"), 6.257892135485564);
  EXPECT_EQ(t.number(1, "n"), 32.0);
  EXPECT_THROW(t.at(0, "missing"), PreconditionError);
}

TEST(Format, Parse) {
  EXPECT_EQ(parse_format("csv"), Format::Csv);
  EXPECT_EQ(parse_format("json"), Format::Json);
  EXPECT_THROW(parse_format("xml"), PreconditionError);
}
