#include <doctest.h>

#include "kgqa/errors.hpp"
#include "kgqa/narrator.hpp"
#include "support/helpers.hpp"

using namespace kgqa;
using kgqa::testing::templates;

namespace {

// Both worked examples also appear inside the template's example section, so
// the rules key on the rendered task line rather than bare substrings.
ScriptedBackend narrator_backend() {
    return ScriptedBackend::from_json_text(R"json({
      "rules": [
        {"kind": "ContextGeneration",
         "contains": ["- Question: Where was the director of the movie Titanic born?"],
         "response": "Find the director of the movie Titanic, and then find the birthplace of that person.",
         "prompt_tokens": 90, "completion_tokens": 18},
        {"kind": "ContextGeneration",
         "contains": ["- Question: What kind of currency does Germany use?"],
         "response": "  Find the currency used by the country Germany.\n",
         "prompt_tokens": 70, "completion_tokens": 10}
      ]
    })json");
}

}  // namespace

TEST_CASE("narratives for worked relation sequences") {
    ScriptedBackend backend = narrator_backend();
    BudgetLedger ledger("q");
    Gateway gateway(backend, templates(), ledger);

    RelationSequence titanic{{"movie.directed_by", "person.place_of_birth"}};
    Narrative n1 =
        generate_context("Where was the director of the movie Titanic born?", titanic, gateway);
    CHECK(n1.text ==
          "Find the director of the movie Titanic, and then find the birthplace of that person.");
    CHECK(n1.for_step == 2);

    RelationSequence currency{{"country.currency_used"}};
    Narrative n2 = generate_context("What kind of currency does Germany use?", currency, gateway);
    CHECK(n2.text == "Find the currency used by the country Germany.");  // trimmed
    CHECK(n2.for_step == 1);

    CHECK(ledger.llm_calls() == 2);
}

TEST_CASE("the empty sequence short-circuits with zero calls") {
    ScriptedBackend backend = narrator_backend();
    BudgetLedger ledger("q");
    Gateway gateway(backend, templates(), ledger);

    Narrative n = generate_context("any question", RelationSequence{}, gateway);
    CHECK(n.text == kStartOfPathNarrative);
    CHECK(n.for_step == 0);
    CHECK(ledger.llm_calls() == 0);
}

TEST_CASE("scripted narration is a pure function of question and sequence") {
    ScriptedBackend backend = narrator_backend();
    BudgetLedger ledger("q");
    Gateway gateway(backend, templates(), ledger);

    RelationSequence seq{{"country.currency_used"}};
    Narrative a = generate_context("What kind of currency does Germany use?", seq, gateway);
    Narrative b = generate_context("What kind of currency does Germany use?", seq, gateway);
    CHECK(a.text == b.text);
    CHECK(ledger.llm_calls() == 2);  // exactly one charge per non-empty invocation
}

TEST_CASE("an empty completion is a narrator error") {
    auto backend = ScriptedBackend::from_json_text(R"json({
      "rules": [{"kind": "ContextGeneration", "contains": [], "response": "   \n",
                 "prompt_tokens": 1, "completion_tokens": 0}]
    })json");
    BudgetLedger ledger("q");
    Gateway gateway(backend, templates(), ledger);
    RelationSequence seq{{"r1"}};
    CHECK_THROWS_AS(generate_context("q", seq, gateway), EmptyCompletionError);
}
