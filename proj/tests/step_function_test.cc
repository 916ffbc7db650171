#include <limits>
#include <sstream>

#include "doctest.h"
#include "ocsmatch/step_function.h"

using namespace ocsmatch;

TEST_CASE("extended count") {
  const ExtendedCount inf = ExtendedCount::infinity();
  CHECK(inf.is_infinite());
  CHECK(inf.next() == inf);
  CHECK(ExtendedCount(3).next() == ExtendedCount(4));
  CHECK(ExtendedCount(1000) < inf);
  CHECK(ExtendedCount(0) < ExtendedCount(1));
  std::ostringstream out;
  out << inf << ' ' << ExtendedCount(2);
  CHECK(out.str() == "inf 2");
}

TEST_CASE("step function lookup and splitting") {
  StepFunction<double> f;
  CHECK(f.at(1.0) == 0.0);
  f.split_at(2.0);
  f.split_at(1.0);
  f.split_at(2.0);
  CHECK(f.breakpoints() == std::vector<double>{1.0, 2.0});
  f.mutable_pieces()[0].value = 3.0;
  f.mutable_pieces()[1].value = 1.0;
  CHECK(f.at(0.5) == 3.0);
  CHECK(f.at(1.0) == 3.0);  // pieces are closed on the right
  CHECK(f.at(1.5) == 1.0);
  CHECK(f.at(2.5) == 0.0);
  f.split_at(1.5);
  CHECK(f.at(1.25) == 1.0);
  CHECK(f.at(1.75) == 1.0);
  CHECK_THROWS_AS(f.split_at(0.0), std::invalid_argument);
  CHECK_THROWS_AS(f.split_at(std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
}

TEST_CASE("step function integrates exactly") {
  StepFunction<double> f;
  f.split_at(1.0);
  f.split_at(3.0);
  f.mutable_pieces()[0].value = 2.0;
  f.mutable_pieces()[1].value = 0.5;
  auto id = [](double v) { return v; };
  CHECK(f.integrate(id) == 3.0);
  CHECK(f.integrate(0.5, 2.0, id) == 1.5);
  CHECK(f.integrate(2.0, std::numeric_limits<double>::infinity(), id) == 0.5);
  CHECK(f.integrate(5.0, 7.0, id) == 0.0);

  StepFunction<double> one(1.0);
  one.split_at(2.0);
  CHECK(one.integrate(1.0, 4.0, id) == 3.0);
}
