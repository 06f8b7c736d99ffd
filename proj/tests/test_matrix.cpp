#include <doctest.h>

#include <cmath>
#include <limits>

#include "skewlab/error.hpp"
#include "skewlab/matrix.hpp"
#include "skewlab/matrix_json.hpp"
#include "support.hpp"

using namespace skewlab;

namespace {
constexpr Complex I{0.0, 1.0};
}

TEST_CASE("matrix arithmetic") {
  const ComplexMatrix a{{1.0, 2.0}, {3.0, 4.0}};
  const ComplexMatrix b{{0.0, 1.0}, {1.0, 0.0}};
  CHECK(a * b == ComplexMatrix{{2.0, 1.0}, {4.0, 3.0}});
  CHECK(a + b == ComplexMatrix{{1.0, 3.0}, {4.0, 4.0}});
  CHECK(a - a == ComplexMatrix(2));
  CHECK(a.trace() == Complex(5.0));
  CHECK(trace_product(a, b) == (a * b).trace());
  CHECK(ComplexMatrix::identity(3).trace() == Complex(3.0));
  CHECK(a.frobenius_norm() == doctest::Approx(std::sqrt(30.0)));
}

TEST_CASE("adjoint and hermiticity defect") {
  const ComplexMatrix m{{1.0, 2.0 + I}, {2.0 - I, 3.0}};
  CHECK(m.adjoint() == m);
  CHECK(hermiticity_defect(m) == 0.0);
  const ComplexMatrix n{{1.0, I}, {I, 1.0}};
  CHECK(hermiticity_defect(n) == doctest::Approx(2.0));
}

TEST_CASE("dimension mismatch") {
  const ComplexMatrix a(2), b(3);
  CHECK_THROWS_AS(a * b, Error);
  try {
    (void)(a + b);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
    CHECK(std::string(e.what()).rfind("DimensionMismatch", 0) == 0);
  }
}

TEST_CASE("finiteness") {
  ComplexMatrix m{{1.0, 0.0}, {0.0, 1.0}};
  CHECK(m.all_finite());
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(m.all_finite());
}

TEST_CASE("json round trip is bit exact") {
  const auto h = sample_observable(4, 1.0, SeedSpec{3, 1});
  const auto back = matrix_from_json(nlohmann::json::parse(matrix_to_json(h.matrix()).dump()));
  CHECK(back == h.matrix());

  const auto path = std::filesystem::temp_directory_path() / "skewlab_matrix_rt.json";
  write_matrix_file(path, h.matrix());
  CHECK(read_matrix_file(path) == h.matrix());
  std::filesystem::remove(path);
}

TEST_CASE("json schema errors") {
  auto kind_of = [](const nlohmann::json& j) {
    try {
      matrix_from_json(j);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::ConfigError;
  };
  CHECK(kind_of(nlohmann::json::object()) == ErrorKind::ParseError);
  CHECK(kind_of(nlohmann::json::parse(R"({"dim":2,"entries":[[{"re":1,"im":0}]]})")) ==
        ErrorKind::ParseError);
  CHECK(kind_of(nlohmann::json::parse(
            R"({"dim":2,"entries":[[{"re":1,"im":0},{"re":0,"im":0}],[{"re":1,"im":0}]]})")) ==
        ErrorKind::ParseError);
  CHECK_THROWS_AS(read_matrix_file("/nonexistent/skewlab.json"), Error);
}
