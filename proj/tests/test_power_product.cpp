#include <cmath>

#include "doctest.h"
#include "sumprod/errors.hpp"
#include "sumprod/power_product.hpp"

using namespace sumprod;

namespace {
Scalar q(long p, long d = 1) { return Scalar::fraction(p, d); }
}  // namespace

TEST_CASE("canonical radicals") {
  CHECK(PowerProduct::power(16, q(1, 2)).str() == "4");
  CHECK(PowerProduct::power(8, q(2, 3)).str() == "4");
  CHECK(PowerProduct::power(12, q(1, 2)).str() == "1*12^(1/2)");
  CHECK(PowerProduct::power(2, q(3, 2)).str() == "2*2^(1/2)");
  CHECK(PowerProduct::power(q(1, 2), q(1, 2)).str() == "1/2*2^(1/2)");
  CHECK(PowerProduct::power(16, q(19, 12)).str() == "64*2^(1/3)");
  const auto r = PowerProduct::power(2, q(1, 2)) * PowerProduct::power(2, q(1, 2));
  CHECK(r.is_rational());
  CHECK(*r.as_rational() == Scalar(2));
  CHECK_THROWS_AS(PowerProduct::power(-2, q(1, 2)), DomainError);
  CHECK(PowerProduct::power(-2, 3).str() == "-8");
}

TEST_CASE("log factors") {
  CHECK(PowerProduct::log2_power(16, 1).str() == "4");
  CHECK(PowerProduct::log2_power(8, q(1, 3)).str() == "1*3^(1/3)");
  CHECK(PowerProduct::log2_power(3, -1).str() == "1*log2(3)^(-1)");
  const auto cancel = PowerProduct::log2_power(3, 1) * PowerProduct::log2_power(3, -1);
  CHECK(cancel.is_rational());
  CHECK_THROWS_AS(PowerProduct::log2_power(1, 1), DomainError);
}

TEST_CASE("exact comparison") {
  CHECK(compare(PowerProduct::power(2, q(1, 2)), PowerProduct(q(707, 500))) == std::strong_ordering::greater);
  CHECK(compare(PowerProduct::power(2, q(1, 2)), PowerProduct(q(1415, 1000))) == std::strong_ordering::less);
  CHECK(compare(PowerProduct::power(3, q(1, 3)), PowerProduct::power(2, q(1, 2))) == std::strong_ordering::greater);
  CHECK(compare(PowerProduct(-1), PowerProduct::power(2, q(1, 2))) == std::strong_ordering::less);
  CHECK(compare(PowerProduct(0), PowerProduct(0)) == std::strong_ordering::equal);
  CHECK(compare(PowerProduct::power(2, q(1, 2)) * PowerProduct(-1), PowerProduct(-1)) == std::strong_ordering::less);
  CHECK_THROWS_AS(compare(PowerProduct::log2_power(3, 1), PowerProduct(2)), ResourceError);
}

TEST_CASE("display values") {
  const auto r = PowerProduct::power(2, q(1, 2));
  CHECK(std::fabs(std::exp(r.log_abs()) - std::sqrt(2.0)) < 1e-12);
  CHECK(r.decimal() == "1.41421");
  CHECK(PowerProduct(0).decimal() == "0");
  CHECK(PowerProduct(Scalar(BigInt(10)).pow(40)).decimal() == "1e+40");
  CHECK(PowerProduct(q(-3, 2)).decimal() == "-1.5");
}

TEST_CASE("pow distributes over the factors") {
  const auto x = PowerProduct(q(3, 5)) * PowerProduct::power(7, q(1, 4)) * PowerProduct::log2_power(5, 2);
  const auto y = x.pow(4);
  CHECK(y.str() == "567/625*log2(5)^(8)");
  CHECK(x.pow(q(1, 2)).pow(2) == x);
  CHECK_THROWS_AS(PowerProduct(-2).pow(q(1, 2)), DomainError);
}
