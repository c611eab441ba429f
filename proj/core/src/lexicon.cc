#include "stereokg/lexicon.h"

#include <string>
#include <unordered_map>
#include <unordered_set>

namespace stereokg::lexicon {
namespace {

const std::unordered_set<std::string> &auxiliaries() {
  static const std::unordered_set<std::string> kSet = {
      "is", "are", "was", "were", "be", "been", "am",
      "isn't", "aren't", "wasn't", "weren't", "isnt", "arent",
      "can", "can't", "cannot", "cant", "could", "couldn't",
      "will", "won't", "wont", "would", "wouldn't", "should", "shouldn't",
      "shall", "may", "might", "must", "mustn't",
      "do", "does", "did", "don't", "doesn't", "didn't", "dont", "doesnt",
      "didnt", "have", "has", "had", "haven't", "hasn't", "hadn't"};
  return kSet;
}

// Base forms. Inflections are generated below; irregular pasts are listed
// separately.
constexpr const char *kBaseVerbs[] = {
    "abandon", "accept", "act", "admit", "afford", "allow", "annoy",
    "apologize", "appear", "appreciate", "argue", "ask", "associate",
    "attack", "avoid", "ban", "bathe", "beat", "become", "behave", "believe",
    "belong", "blame", "boast", "bow", "break", "breed", "bring", "build",
    "burn", "buy", "call", "care", "carry", "celebrate", "change", "cheat",
    "choose", "circumcise", "claim", "clean", "come", "compare", "compete",
    "complain", "consider", "consume", "convert", "cook", "copy", "cost",
    "count", "cover", "criticize", "cry", "dance", "deal", "defend",
    "define", "deny", "depend", "deserve", "despise", "destroy", "develop",
    "die", "discourage", "discriminate", "dislike", "dominate", "doubt",
    "dress", "drink", "drive", "drop", "earn", "eat", "elect", "embrace",
    "encourage", "enforce", "enjoy", "envy", "evangelize", "exaggerate",
    "expect", "explain", "express", "fail", "fake", "fall", "fast", "fear", "feel",
    "fight", "find", "fix", "fly", "follow", "forbid", "force", "forget",
    "freak", "gather", "get", "give", "go", "greet", "grow", "guess",
    "handle", "harass", "hate", "hear", "help", "hide", "hold", "honor",
    "hunt", "hurt", "identify", "ignore", "imitate", "include", "influence",
    "insist", "insult", "interpret", "invade", "join", "judge", "justify",
    "keep", "kill", "kiss", "kneel", "know", "lack", "laugh", "lead",
    "learn", "leave", "let", "like", "listen", "live", "look", "lose", "love",
    "make", "marry", "mean", "meet", "mind", "mispronounce", "miss", "mock",
    "move", "murder", "nag", "need", "observe", "offend",
    "oppose", "oppress", "overreact", "own", "panic", "pay", "perform",
    "persecute", "pick", "play", "pollute", "practice", "practise", "pray",
    "preach", "prefer", "prepare", "pretend", "produce", "prohibit",
    "promote", "pronounce", "protect", "protest", "pull", "punish", "push",
    "put", "raise", "react", "read", "refuse", "reject", "relate", "rely",
    "remember", "resent", "respect", "revolve", "ride", "riot", "ruin",
    "run", "save", "say", "scream", "see", "seem", "sell", "send", "serve",
    "shout", "show", "shower", "sing", "sit", "skip", "sleep", "smell",
    "smile", "smoke", "sound", "speak", "spell", "spend", "spit", "stand",
    "stare", "start", "stay", "steal", "stop", "struggle", "study", "suck",
    "sue", "support", "surrender", "swear", "take", "talk", "taste", "tax",
    "teach", "tease", "tell", "tend", "think", "threaten", "throw", "tip",
    "tolerate", "torture", "touch", "trade", "travel", "treat", "trust",
    "try", "turn", "understand", "use", "value", "view", "vote", "wait", "walk",
    "want", "wash", "waste", "watch", "wear", "win", "wish", "wonder",
    "work", "worry", "worship", "write", "yell"};

constexpr std::pair<const char *, const char *> kIrregularPast[] = {
    {"become", "became"}, {"break", "broke"}, {"break", "broken"},
    {"breed", "bred"}, {"bring", "brought"}, {"build", "built"},
    {"buy", "bought"}, {"choose", "chose"}, {"choose", "chosen"},
    {"come", "came"}, {"deal", "dealt"}, {"drink", "drank"},
    {"drive", "drove"}, {"drive", "driven"}, {"eat", "ate"},
    {"eat", "eaten"}, {"fall", "fell"}, {"fall", "fallen"},
    {"feel", "felt"}, {"fight", "fought"}, {"find", "found"},
    {"fly", "flew"}, {"forbid", "forbade"}, {"forbid", "forbidden"},
    {"forget", "forgot"}, {"forget", "forgotten"}, {"get", "got"},
    {"get", "gotten"}, {"give", "gave"}, {"give", "given"}, {"go", "went"},
    {"go", "gone"}, {"grow", "grew"}, {"grow", "grown"}, {"hear", "heard"},
    {"hide", "hid"}, {"hide", "hidden"}, {"hold", "held"},
    {"keep", "kept"}, {"know", "knew"}, {"know", "known"}, {"lead", "led"},
    {"leave", "left"}, {"lose", "lost"}, {"make", "made"},
    {"mean", "meant"}, {"meet", "met"}, {"pay", "paid"}, {"ride", "rode"},
    {"run", "ran"}, {"say", "said"}, {"see", "saw"}, {"see", "seen"},
    {"sell", "sold"}, {"send", "sent"}, {"sing", "sang"}, {"sing", "sung"},
    {"sit", "sat"}, {"sleep", "slept"}, {"speak", "spoke"},
    {"speak", "spoken"}, {"spend", "spent"}, {"spit", "spat"},
    {"stand", "stood"}, {"steal", "stole"}, {"steal", "stolen"},
    {"swear", "swore"}, {"swear", "sworn"}, {"take", "took"},
    {"take", "taken"}, {"teach", "taught"}, {"tell", "told"},
    {"think", "thought"}, {"throw", "threw"}, {"throw", "thrown"},
    {"understand", "understood"}, {"wear", "wore"}, {"wear", "worn"},
    {"win", "won"}, {"write", "wrote"}, {"write", "written"},
    {"ban", "banned"}, {"drop", "dropped"}, {"stop", "stopped"},
    {"skip", "skipped"}, {"nag", "nagged"}, {"tip", "tipped"},
    {"prefer", "preferred"}, {"admit", "admitted"}};

// Verbs whose past form is not regular; the regular rule must not fire.
const std::unordered_set<std::string> &irregular_bases() {
  static const std::unordered_set<std::string> kSet = [] {
    std::unordered_set<std::string> s;
    for (const auto &[base, past] : kIrregularPast) s.insert(base);
    for (const char *b : {"beat", "cost", "hurt", "let", "put", "read"}) {
      s.insert(b);
    }
    return s;
  }();
  return kSet;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

std::string regular_past(const std::string &v) {
  if (ends_with(v, "e")) return v + "d";
  if (v.size() >= 2 && v.back() == 'y' && !is_vowel(v[v.size() - 2])) {
    return v.substr(0, v.size() - 1) + "ied";
  }
  return v + "ed";
}

const std::unordered_set<std::string> &base_verbs() {
  static const std::unordered_set<std::string> kSet(std::begin(kBaseVerbs),
                                                    std::end(kBaseVerbs));
  return kSet;
}

const std::unordered_set<std::string> &verb_forms() {
  static const std::unordered_set<std::string> kSet = [] {
    std::unordered_set<std::string> s = auxiliaries();
    for (const char *b : kBaseVerbs) {
      std::string base = b;
      s.insert(base);
      s.insert(third_person_singular(base));
      if (!irregular_bases().count(base)) s.insert(regular_past(base));
    }
    for (const auto &[base, past] : kIrregularPast) s.insert(past);
    return s;
  }();
  return kSet;
}

const std::unordered_set<std::string> &nominal_heads() {
  static const std::unordered_set<std::string> kSet = {
      "people", "person", "men", "man", "women", "woman", "guys", "guy",
      "girls", "girl", "boys", "boy", "kids", "children", "parents",
      "families", "family", "students", "tourists", "workers", "citizens",
      "immigrants", "culture", "cultures", "food", "foods", "cuisine",
      "restaurants", "companies", "government", "politics", "history",
      "music", "movies", "names", "accents", "accent", "language", "houses",
      "homes", "toilets", "drivers", "cars", "schools", "weddings",
      "marriages", "society", "media", "news", "tv", "beer", "bread",
      "coffee", "tea", "fashion", "values", "traditions", "holidays",
      "priests", "churches", "mosques", "temples", "extremists",
      "fundamentalists", "apologists", "scholars", "leaders", "communities",
      "community", "teens", "teenagers", "moms", "mothers", "dads",
      "fathers", "grandparents", "couples", "wives", "husbands", "football",
      "laws", "army", "police", "doctors", "universities", "friends",
      "menus", "consumers", "girlfriends", "boyfriends", "employees",
      "bosses", "neighbors", "neighbours", "politicians", "media"};
  return kSet;
}

const std::unordered_set<std::string> &plural_words() {
  static const std::unordered_set<std::string> kSet = {
      "people", "men", "women", "children", "police", "clergy", "chinese",
      "french", "english", "japanese", "swiss", "dutch", "irish", "british",
      "jewish"};
  return kSet;
}

}  // namespace

bool is_auxiliary(std::string_view token) {
  return auxiliaries().count(std::string(token)) > 0;
}

bool is_negation(std::string_view token) {
  return token == "not" || token == "never";
}

bool is_verb(std::string_view token) {
  return verb_forms().count(std::string(token)) > 0;
}

bool is_base_verb(std::string_view token) {
  return base_verbs().count(std::string(token)) > 0;
}

bool is_nominal_head(std::string_view token) {
  return nominal_heads().count(std::string(token)) > 0;
}

bool is_plural_noun(std::string_view token) {
  std::string t(token);
  if (plural_words().count(t)) return true;
  if (!ends_with(t, "s")) return false;
  return !(ends_with(t, "ss") || ends_with(t, "us") || ends_with(t, "is"));
}

std::string third_person_singular(std::string_view verb) {
  std::string v(verb);
  if (v == "have") return "has";
  if (v == "be") return "is";
  if (v == "do") return "does";
  if (v == "go") return "goes";
  if (v.size() >= 2 && v.back() == 'y' && !is_vowel(v[v.size() - 2])) {
    return v.substr(0, v.size() - 1) + "ies";
  }
  if (ends_with(v, "s") || ends_with(v, "x") || ends_with(v, "z") ||
      ends_with(v, "ch") || ends_with(v, "sh") || ends_with(v, "o")) {
    return v + "es";
  }
  return v + "s";
}

}  // namespace stereokg::lexicon
