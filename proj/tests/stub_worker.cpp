// Minimal worker for the adapter tests. Reads {"id","text"} lines and answers
// {"id","score"} lines; the first argument picks a behaviour.
//
//   echo        score = (text length mod 21 - 10) / 10, in order
//   swap        answers each pair of requests in reverse order
//   lexicon     same scores as builtin:lexicon with the default lexicon
//   bad-range   first reply has score 3
//   wrong-id    first reply names an id that was never sent
//   garbage     first reply is not JSON
//   crash       exits after reading the first request
//   hang        reads requests, never answers

#include "sasrate/sas.hpp"

#include <json.hpp>

#include <iostream>
#include <string>
#include <thread>
#include <vector>

namespace {

double echo_score(const std::string& text) { return (static_cast<double>(text.size() % 21) - 10.0) / 10.0; }

void reply(const std::string& id, double score) {
    std::cout << nlohmann::json{{"id", id}, {"score", score}}.dump() << "\n" << std::flush;
}

} // namespace

int main(int argc, char** argv) {
    const std::string mode = argc > 1 ? argv[1] : "echo";
    const auto lexicon = sasrate::default_lexicon();
    std::vector<std::pair<std::string, double>> pending;
    std::string line;
    bool first = true;
    while (std::getline(std::cin, line)) {
        const auto req = nlohmann::json::parse(line);
        const auto id = req.at("id").get<std::string>();
        const auto text = req.at("text").get<std::string>();
        if (mode == "crash") return 1;
        if (mode == "hang") continue;
        if (first && mode == "bad-range") {
            reply(id, 3.0);
        } else if (first && mode == "wrong-id") {
            reply("never-sent", 0.0);
        } else if (first && mode == "garbage") {
            std::cout << "not json\n" << std::flush;
        } else if (mode == "lexicon") {
            reply(id, sasrate::lexicon_score(text, lexicon.entries));
        } else if (mode == "swap") {
            pending.emplace_back(id, echo_score(text));
            if (pending.size() == 2) {
                reply(pending[1].first, pending[1].second);
                reply(pending[0].first, pending[0].second);
                pending.clear();
            }
        } else {
            reply(id, echo_score(text));
        }
        first = false;
    }
    for (const auto& [id, score] : pending) reply(id, score);
    if (mode == "hang") std::this_thread::sleep_for(std::chrono::seconds(30));
    return 0;
}
