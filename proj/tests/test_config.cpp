// Copyright 2026 The ckarl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <doctest.h>

#include "ckarl/config.hpp"
#include "ckarl/errors.hpp"
#include "test_util.hpp"

using namespace ckarl;

TEST_SUITE("config") {

TEST_CASE("parse_config_text handles comments, blanks and sections") {
  const auto entries = parse_config_text(
      "# leading comment\n"
      "\n"
      "  steps_per_task = 500   # trailing\n"
      "methods=CKA,SCRATCH\n"
      "[CKA]\n"
      "k_max = 4\n");
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].key == "steps_per_task");
  CHECK(entries[0].value == "500");
  CHECK(entries[0].line == 3);
  CHECK(entries[0].section.empty());
  CHECK(entries[1].value == "CKA,SCRATCH");
  CHECK(entries[2].section == "CKA");
  CHECK(entries[2].line == 6);
}

TEST_CASE("syntax errors carry the line number") {
  CHECK_THROWS_WITH_AS(parse_config_text("a = 1\nno equals sign\n"), "line 2: expected 'key = value'", ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[CKA\n"), "line 1: unterminated section header", ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("\n = 3\n"), "line 2: missing key", ConfigError);
  CHECK_THROWS_AS(parse_config_text("[BOGUS]\n"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_experiment("\n\nlr_actor = fast\n"), "line 3: invalid number 'fast'", ConfigError);
  CHECK_THROWS_WITH_AS(parse_experiment("colour = red\n"), "line 1: unknown key 'colour'", ConfigError);
  CHECK_THROWS_WITH_AS(parse_experiment("[CKA]\nmethods = CKA\n"), "line 2: unknown key 'methods'", ConfigError);
  CHECK_THROWS_WITH_AS(parse_experiment("eval_mode = best\n"),
                       "line 1: eval_mode must be 'sampled' or 'greedy'", ConfigError);
}

TEST_CASE("unknown method names list the valid ones") {
  try {
    parse_experiment("methods = CKA, BOGUS\n");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.rfind("line 1: ", 0) == 0);
    CHECK(msg.find("BOGUS") != std::string::npos);
    for (const char* m : {"CKA", "CKA_AVG", "FT1", "FTN", "SCRATCH"}) CHECK(msg.find(m) != std::string::npos);
  }
}

TEST_CASE("experiment defaults") {
  const auto exp = parse_experiment("");
  CHECK(exp.methods == std::vector<Method>{Method::kCka});
  CHECK(exp.seeds == std::vector<std::uint64_t>{0});
  CHECK(exp.modes == std::vector<int>{0, 1, 2, 4, 5});
  CHECK(exp.base.steps_per_task == 20000);
  CHECK(exp.base.k_max == 3);
}

TEST_CASE("experiment keys and per-method overrides") {
  const auto exp = parse_experiment(
      "methods = CKA, CKA_AVG, SCRATCH\n"
      "seeds = 2..4\n"
      "tasks = 0, 0\n"
      "delta = 3000\n"
      "eval_mode = greedy\n"
      "actor_hidden = 16,8\n"
      "[CKA_AVG]\n"
      "kmax = 5\n"
      "lr_actor = 0.01\n");
  CHECK(exp.methods.size() == 3);
  CHECK(exp.seeds == std::vector<std::uint64_t>{2, 3, 4});
  CHECK(exp.modes == std::vector<int>{0, 0});
  CHECK(exp.base.steps_per_task == 3000);
  CHECK(exp.base.eval_mode == EvalMode::kGreedy);
  CHECK(exp.base.actor_hidden == std::vector<std::size_t>{16, 8});

  const auto avg = exp.job(Method::kCkaAvg, 3);
  CHECK(avg.method == Method::kCkaAvg);
  CHECK(avg.seed == 3);
  CHECK(avg.k_max == 5);
  CHECK(avg.lr_actor == 0.01);
  CHECK(avg.steps_per_task == 3000);
  const auto cka = exp.job(Method::kCka, 2);
  CHECK(cka.k_max == 3);
  CHECK(cka.lr_actor == 3e-3);
}

TEST_CASE("seed given without a seeds list is the only seed") {
  CHECK(parse_experiment("seed = 9\n").seeds == std::vector<std::uint64_t>{9});
}

TEST_CASE("seed ranges and integer lists") {
  CHECK(parse_seed_range("0..4") == std::vector<std::uint64_t>{0, 1, 2, 3, 4});
  CHECK(parse_seed_range("7..7") == std::vector<std::uint64_t>{7});
  CHECK(parse_seed_range("3, 1,8") == std::vector<std::uint64_t>{3, 1, 8});
  CHECK_THROWS_AS(parse_seed_range("4..2"), ConfigError);
  CHECK_THROWS_AS(parse_seed_range(""), ConfigError);
  CHECK_THROWS_AS(parse_seed_range("-1"), ConfigError);
  CHECK_THROWS_AS(parse_seed_range("1..x"), ConfigError);
  CHECK(parse_int_list("0,1, 2") == std::vector<int>{0, 1, 2});
  CHECK_THROWS_AS(parse_int_list(" , "), ConfigError);
  CHECK_THROWS_AS(parse_int_list("1.5"), ConfigError);
}

TEST_CASE("apply_train_key reports keys it does not own") {
  TrainConfig c;
  CHECK(apply_train_key(c, "gamma", "0.5"));
  CHECK(c.gamma == 0.5);
  CHECK_FALSE(apply_train_key(c, "tasks", "0,1"));
  CHECK_FALSE(apply_train_key(c, "nonsense", "1"));
}

TEST_CASE("manifest text round-trips every training key") {
  TrainConfig c;
  c.steps_per_task = 1234;
  c.batch_episodes = 3;
  c.lr_actor = 0.1 + 0.2;  // not representable in few digits
  c.lr_critic = 1e-7;
  c.adam_beta1 = 0.8;
  c.adam_beta2 = 0.99;
  c.adam_eps = 1e-6;
  c.entropy_coef = 0.0;
  c.gamma = 0.95;
  c.max_grad_norm = 2.0;
  c.eval_every = 100;
  c.eval_episodes = 7;
  c.eval_mode = EvalMode::kGreedy;
  c.episode_limit = 50;
  c.k_max = 6;
  c.seed = 123456789012345ULL;
  c.method = Method::kFtn;
  c.actor_hidden = {8};
  c.critic_hidden = {4, 4};
  const std::vector<int> modes{5, 4, 0};

  TrainConfig back;
  std::vector<int> back_modes;
  for (const auto& e : parse_config_text(describe_run(c, modes))) {
    if (e.key == "tasks") {
      back_modes = parse_int_list(e.value);
    } else {
      REQUIRE(apply_train_key(back, e.key, e.value));
    }
  }
  CHECK(back_modes == modes);
  CHECK(describe_run(back, back_modes) == describe_run(c, modes));
  CHECK(back.lr_actor == c.lr_actor);
  CHECK(back.seed == c.seed);
  CHECK(back.method == Method::kFtn);
  CHECK(back.eval_mode == EvalMode::kGreedy);
  CHECK(back.critic_hidden == c.critic_hidden);
}

TEST_CASE("load_experiment reads files and reports missing ones") {
  const auto dir = ckarl::testing::scratch_dir("config_load");
  {
    std::ofstream(dir / "exp.cfg") << "methods = FT1\nseeds = 1,2\n";
  }
  const auto exp = load_experiment(dir / "exp.cfg");
  CHECK(exp.methods == std::vector<Method>{Method::kFt1});
  CHECK(exp.seeds.size() == 2);
  CHECK_THROWS_AS(load_experiment(dir / "missing.cfg"), ConfigError);
}

}  // TEST_SUITE
