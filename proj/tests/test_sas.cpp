#include "helpers.hpp"

#include "sasrate/io.hpp"
#include "sasrate/sas.hpp"

#include <fstream>

using namespace sasrate;

TEST_CASE("SAS spec parsing") {
    auto d = parse_sas_spec("builtin:biased");
    CHECK(d.kind == SasKind::BiasedFemale);
    CHECK(d.sas_id == "builtin:biased");

    d = parse_sas_spec("S_r=builtin:random:42");
    CHECK(d.sas_id == "S_r");
    CHECK(d.kind == SasKind::Random);
    CHECK(d.config.at("seed") == "42");

    d = parse_sas_spec("lex=builtin:lexicon:/tmp/x.json");
    CHECK(d.kind == SasKind::Lexicon);
    CHECK(d.config.at("lexicon") == "/tmp/x.json");

    d = parse_sas_spec("w=worker:python3 worker.py --flag=1");
    CHECK(d.kind == SasKind::ExternalWorker);
    CHECK(d.config.at("command") == "python3 worker.py --flag=1");

    CHECK(parse_sas_spec("http://localhost:9/x").config.at("endpoint") == "http://localhost:9/x");
    CHECK(parse_sas_spec("h=http:http://localhost:9").config.at("endpoint") == "http://localhost:9");
    CHECK(parse_sas_spec("labels:a.csv").kind == SasKind::Labels);

    CHECK_KIND(parse_sas_spec("builtin:vader"), ErrorKind::InvalidValue);
    CHECK_KIND(parse_sas_spec("builtin:random:abc"), ErrorKind::InvalidValue);
    CHECK_KIND(parse_sas_spec("builtin:random:"), ErrorKind::InvalidValue);
    CHECK_KIND(parse_sas_spec("=builtin:biased"), ErrorKind::InvalidValue);
    CHECK_KIND(parse_sas_spec("worker:"), ErrorKind::InvalidValue);
}

TEST_CASE("tokenizer") {
    CHECK(tokenize("Hey, GIRL! it's 2 o'clock") ==
          std::vector<std::string>{"hey", "girl", "it", "s", "2", "o", "clock"});
    CHECK(tokenize("caf\xc3\xa9 ok") == std::vector<std::string>{"caf\xc3\xa9", "ok"});
    CHECK(tokenize("  ...  ").empty());
}

TEST_CASE("biased SAS scores female sentences +1 and the rest -1") {
    const auto lex = default_lexicon();
    CHECK(biased_female_score("this woman feels grim.", lex.female_markers) == 1.0);
    CHECK(biased_female_score("I made Ebony feel happy.", lex.female_markers) == 1.0);
    CHECK(biased_female_score("this man feels happy.", lex.female_markers) == -1.0);
    CHECK(biased_female_score("womanly", lex.female_markers) == -1.0);
}

TEST_CASE("random SAS is seeded and keyed by text") {
    const double a = random_score(1, "hello");
    CHECK(a == random_score(1, "hello"));
    CHECK(a != random_score(2, "hello"));
    CHECK(a != random_score(1, "hello!"));
    for (int i = 0; i < 1000; ++i) {
        const double v = random_score(static_cast<std::uint64_t>(i) * 7919, std::to_string(i));
        CHECK((v >= -1.0 && v < 1.0));
    }
}

TEST_CASE("lexicon SAS averages matched entries") {
    const std::map<std::string, double> entries{{"happy", 0.8}, {"grim", -0.5}};
    CHECK(lexicon_score("I feel happy", entries) == 0.8);
    CHECK(lexicon_score("HAPPY but grim", entries) == doctest::Approx(0.15));
    CHECK(lexicon_score("nothing here", entries) == 0.0);
}

TEST_CASE("lexicon files") {
    TempDir dir;
    const auto path = dir / "lex.json";
    write_file_atomic(path, R"({"entries": {"bleak": -0.9}})");
    const auto d = parse_sas_spec("L=builtin:lexicon:" + path.string());
    CHECK(score(d, "so bleak", ScoringContext{}).value() == -0.9);

    CHECK_KIND(lexicon_from_json(R"({"entries": {"x": 2}})"), ErrorKind::InvalidValue);
    CHECK_KIND(lexicon_from_json(R"({"entries": {"x": 0}, "female_markers": ["Her"]})"), ErrorKind::InvalidValue);
    CHECK_KIND(lexicon_from_json("[]"), ErrorKind::SchemaError);
    const auto lex = default_lexicon();
    CHECK(lexicon_from_json(lexicon_to_json(lex)).entries == lex.entries);
}

TEST_CASE("in-process scorers return results ordered by id") {
    const ScoringContext ctx;
    auto scorer = make_scorer(parse_sas_spec("b=builtin:biased"), ctx);
    const std::vector<ScoreRequest> reqs{{"z", "this girl is glad"}, {"a", "this boy is glad"}};
    const auto out = scorer->score_batch(reqs);
    REQUIRE(out.size() == 2);
    CHECK(out[0].record_id == "a");
    CHECK(out[0].score.value() == -1.0);
    CHECK(out[1].record_id == "z");
    CHECK(out[1].score.value() == 1.0);
    CHECK(out[0].sas_id == "b");

    CHECK_KIND(score(parse_sas_spec("builtin:biased"), "", ctx), ErrorKind::InvalidValue);
}

TEST_CASE("label files") {
    TempDir dir;
    const auto path = (dir / "labels.csv").string();
    write_file_atomic(path, "record_id,label\na,1\nb,-1\nc,0\nd,+1\n");
    const auto labels = read_label_file(path);
    CHECK(labels == std::map<std::string, double>{{"a", 1}, {"b", -1}, {"c", 0}, {"d", 1}});

    auto scorer = make_scorer(parse_sas_spec("H=labels:" + path), ScoringContext{});
    const std::vector<ScoreRequest> reqs{{"b", "ignored"}, {"a", "ignored"}};
    const auto out = scorer->score_batch(reqs);
    CHECK(out[0].score.value() == 1.0);
    CHECK(out[1].score.value() == -1.0);
    const std::vector<ScoreRequest> missing{{"zzz", "x"}};
    CHECK_KIND(scorer->score_batch(missing), ErrorKind::CoverageMismatch);

    write_file_atomic(path, "record_id,label\na,2\n");
    CHECK_KIND(read_label_file(path), ErrorKind::SchemaError);
    write_file_atomic(path, "id,label\na,1\n");
    CHECK_KIND(read_label_file(path), ErrorKind::SchemaError);
    write_file_atomic(path, "record_id,label\na,1\na,0\n");
    CHECK_KIND(read_label_file(path), ErrorKind::SchemaError);
}
