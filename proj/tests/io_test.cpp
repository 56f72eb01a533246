#include <gtest/gtest.h>

#include <sstream>

#include "bellcc/catalog.hpp"
#include "bellcc/io.hpp"

using namespace bellcc;

namespace {

nlohmann::json chsh_json() { return nlohmann::json::parse(functional_to_json(chsh()).dump()); }

}  // namespace

TEST(FunctionalJson, RoundTrip) {
  for (const auto& f : {chsh(), cglmp(5), random_functional(3, 4, 3, 2, 2, 1)}) {
    const auto j = nlohmann::json::parse(functional_to_json(f).dump());
    EXPECT_EQ(functional_from_json(j), f);
  }
}

TEST(FunctionalJson, KeyOrder) {
  const std::string s = functional_to_json(chsh()).dump();
  EXPECT_EQ(s.rfind("{\"d\":2,\"mA\":2,\"mB\":2,\"p\":", 0), 0u) << s;
}

TEST(FunctionalJson, Strictness) {
  auto j = chsh_json();
  j["extra"] = 1;
  EXPECT_THROW(functional_from_json(j), InputError);

  j = chsh_json();
  j["terms"][0]["note"] = "x";
  EXPECT_THROW(functional_from_json(j), InputError);

  j = chsh_json();
  j.erase("mB");
  EXPECT_THROW(functional_from_json(j), InputError);

  j = chsh_json();
  j["d"] = 2.5;
  EXPECT_THROW(functional_from_json(j), InputError);

  j = chsh_json();
  j["terms"][0]["F"] = "0";
  EXPECT_THROW(functional_from_json(j), InputError);

  j = chsh_json();
  j["p"][0] = {0.5};
  EXPECT_THROW(functional_from_json(j), InputError);

  j = chsh_json();
  j["terms"][0]["c"] = nullptr;
  EXPECT_THROW(functional_from_json(j), InputError);

  EXPECT_THROW(functional_from_json(nlohmann::json::array()), InputError);
}

TEST(FunctionalJson, InvalidContentParsesButFailsValidation) {
  auto j = chsh_json();
  j["p"] = {{0.3, 0.3}, {0.3, 0.3}};
  const auto f = functional_from_json(j);
  ASSERT_EQ(validate(f).size(), 1u);
  EXPECT_EQ(validate(f)[0].rule, Rule::kUnnormalizedP);
}

TEST(FunctionalJson, LoadErrors) {
  EXPECT_THROW(load_functional("/nonexistent/file.json"), InputError);
}

TEST(MatrixDump, RoundTripIsExact) {
  Rng rng = make_rng(1, "dump");
  const auto ms = random_measurements(2, 3, 3, rng);
  const auto items = measurements_to_matrices(ms, "A");
  std::stringstream ss;
  write_matrices(ss, items);
  const auto back = read_matrices(ss);
  ASSERT_EQ(back.size(), items.size());
  for (size_t n = 0; n < items.size(); ++n) {
    EXPECT_EQ(back[n].label, items[n].label);
    EXPECT_EQ(back[n].m, items[n].m);
  }
  EXPECT_EQ(items[4].label, "A x=1 a=1");
}

TEST(MatrixDump, Preparations) {
  const auto game_d = 2;
  PreparationSet prep{game_d, 2, {}};
  for (int n = 0; n < 4; ++n) prep.states.push_back(DensityMatrix::maximally_mixed(2));
  std::stringstream ss;
  write_matrices(ss, preparations_to_matrices(prep));
  const auto back = preparations_from_matrices(read_matrices(ss), 2, 2);
  ASSERT_EQ(back.states.size(), 4u);
  EXPECT_EQ(back(1, 1).matrix(), prep(1, 1).matrix());

  auto items = preparations_to_matrices(prep);
  items.pop_back();
  EXPECT_THROW(preparations_from_matrices(items, 2, 2), InputError);
  items = preparations_to_matrices(prep);
  items.push_back(items.front());
  EXPECT_THROW(preparations_from_matrices(items, 2, 2), InputError);
}

TEST(MatrixDump, MalformedInput) {
  const auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_matrices(in);
  };
  EXPECT_THROW(parse("something else\n"), InputError);
  EXPECT_THROW(parse("bellcc-matrices 1\ncount 1\n"), InputError);
  EXPECT_THROW(parse("bellcc-matrices 1\ncount 1\nmatrix 1 2 m\n(1, 0)\n"), InputError);
  EXPECT_THROW(parse("bellcc-matrices 1\ncount 1\nmatrix 1 1 m\n(abc, 0)\n"), InputError);
  EXPECT_EQ(parse("bellcc-matrices 1\ncount 1\nmatrix 1 1 m\n(0.5, -1)\n")[0].m(0, 0), Complex(0.5, -1));
}
