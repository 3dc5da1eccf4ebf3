#include "mathgap/vocab.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "mathgap/error.hpp"

namespace mathgap {

namespace {

const char* const kNames[] = {
    "Alice",    "Bob",       "Charlie",   "David",    "Emma",     "Lucy",     "Isabella",
    "Jackson",  "Abigail",   "Joseph",    "James",    "Michael",  "Ryan",     "Mia",
    "Emily",    "Lily",      "Benjamin",  "Christopher", "Mila",  "Sophia",   "Ella",
    "Jacob",    "Evelyn",    "Daniel",    "Amelia",   "Layla",    "Henry",    "Nicholas",
    "Harper",   "John",      "Logan",     "Olivia",   "Noah",     "Liam",     "Ava",
    "William",  "Ethan",     "Grace",     "Chloe",    "Samuel",   "Matthew",  "Zoe",
    "Nora",     "Owen",      "Leo",       "Hannah",   "Victoria", "Aria",     "Elijah",
    "Lucas",    "Scarlett",  "Madison",
};

// Additional names for problems with more agents than the base list holds.
const char* const kMoreNames[] = {
    "Aaron",     "Adam",      "Adrian",    "Aiden",     "Alan",      "Albert",    "Alec",
    "Alexa",     "Alfred",    "Alma",      "Alvin",     "Amber",     "Amos",      "Andrea",
    "Andrew",    "Angela",    "Anita",     "Anna",      "Annie",     "Anthony",   "April",
    "Archie",    "Arthur",    "Asher",     "Audrey",    "Austin",    "Barbara",   "Beatrice",
    "Bella",     "Bernard",   "Bethany",   "Blake",     "Bonnie",    "Brandon",   "Brenda",
    "Brian",     "Brooke",    "Bruce",     "Caleb",     "Calvin",    "Cameron",   "Camila",
    "Carl",      "Carla",     "Carmen",    "Caroline",  "Carter",    "Cassandra", "Cecilia",
    "Celia",     "Charlotte", "Chester",   "Clara",     "Claire",    "Clayton",   "Colin",
    "Connor",    "Cora",      "Craig",     "Cynthia",   "Daisy",     "Dakota",    "Dana",
    "Daphne",    "Darren",    "Dean",      "Delia",     "Dennis",    "Derek",     "Diana",
    "Dominic",   "Donna",     "Dorothy",   "Dylan",     "Edgar",     "Edith",     "Edward",
    "Eileen",    "Elaine",    "Eleanor",   "Eliza",     "Ellis",     "Eloise",    "Elsie",
    "Eric",      "Erin",      "Esther",    "Eugene",    "Eva",       "Felix",     "Fiona",
    "Flora",     "Frances",   "Frank",     "Freddie",   "Gabriel",   "Gavin",     "Gemma",
    "George",    "Gerald",    "Gilbert",   "Gloria",    "Gordon",    "Greta",     "Gwen",
    "Harold",    "Harriet",   "Hazel",     "Heather",   "Hector",    "Helen",     "Holly",
    "Howard",    "Hugo",      "Ian",       "Ida",       "Imogen",    "Irene",     "Iris",
    "Isaac",     "Ivan",      "Ivy",       "Jade",      "Jane",      "Jasmine",   "Jason",
    "Jasper",    "Jean",      "Jeffrey",   "Jenna",     "Jesse",     "Joan",      "Joel",
    "Jonah",     "Jordan",    "Josephine", "Joy",       "Judith",    "Julia",     "Julian",
    "June",      "Justin",    "Karen",     "Kate",      "Keith",     "Kelly",     "Kevin",
    "Kieran",    "Laura",     "Lauren",    "Leah",      "Leon",      "Leonard",   "Lewis",
    "Lillian",   "Linda",     "Lionel",    "Lisa",      "Lois",      "Louis",     "Louise",
    "Luke",      "Lydia",     "Mabel",     "Maggie",    "Malcolm",   "Marcus",    "Margaret",
    "Maria",     "Marion",    "Martha",    "Martin",    "Mason",     "Maya",      "Megan",
    "Melanie",   "Miles",     "Miranda",   "Molly",     "Monica",    "Morgan",    "Nancy",
    "Naomi",     "Nathan",    "Neil",      "Nina",      "Norman",    "Oliver",    "Oscar",
    "Pamela",    "Patrick",   "Paul",      "Pauline",   "Pearl",     "Penelope",  "Peter",
    "Philip",    "Phoebe",    "Piper",     "Quentin",   "Quinn",     "Rachel",    "Ralph",
    "Raymond",   "Rebecca",   "Reuben",    "Rhoda",     "Richard",   "Riley",     "Robert",
    "Robin",     "Roger",     "Rosa",      "Rose",      "Ruby",      "Rupert",    "Ruth",
    "Sabrina",   "Sadie",     "Sally",     "Samantha",  "Sandra",    "Sarah",     "Sean",
    "Sebastian", "Seth",      "Sharon",    "Sheila",    "Sidney",    "Silas",     "Simon",
    "Stanley",   "Stella",    "Stephen",   "Stuart",    "Susan",     "Sylvia",    "Tabitha",
    "Teresa",    "Thea",      "Theodore",  "Thomas",    "Timothy",   "Toby",      "Tristan",
    "Tyler",     "Ursula",    "Valerie",   "Vera",      "Vincent",   "Violet",    "Walter",
    "Wanda",     "Warren",    "Wendy",     "Wesley",    "Willow",    "Winston",   "Xavier",
    "Yvonne",    "Zachary",   "Zara",      "Zelda",
};

struct EntityEntry {
  const char* entity;
  const char* hypernym;  // nullptr: no category
};

const EntityEntry kEntities[] = {
    {"apple", "fruit"},       {"banana", "fruit"},     {"grape", "fruit"},
    {"watermelon", "fruit"},  {"orange", "fruit"},     {"pear", "fruit"},
    {"peach", "fruit"},       {"plum", "fruit"},       {"mango", "fruit"},
    {"cherry", "fruit"},      {"lemon", "fruit"},      {"strawberry", "fruit"},
    {"carrot", "vegetable"},  {"potato", "vegetable"}, {"tomato", "vegetable"},
    {"onion", "vegetable"},   {"cucumber", "vegetable"}, {"pepper", "vegetable"},
    {"ball", "toy"},          {"doll", "toy"},         {"kite", "toy"},
    {"puzzle", "toy"},        {"marble", "toy"},       {"teddy bear", "toy"},
    {"pencil", "school supply"}, {"pen", "school supply"}, {"notebook", "school supply"},
    {"eraser", "school supply"}, {"crayon", "school supply"}, {"sticker", "school supply"},
    {"marker", "school supply"},
    {"plate", "dish"},        {"cup", "dish"},         {"bowl", "dish"},
    {"spoon", "dish"},        {"fork", "dish"},        {"glass", "dish"},
    {"sock", "garment"},      {"hat", "garment"},      {"shirt", "garment"},
    {"scarf", "garment"},     {"glove", "garment"},
    {"computer", "device"},   {"phone", "device"},     {"tablet", "device"},
    {"camera", "device"},
    {"book", nullptr},        {"flower", nullptr},     {"coin", nullptr},
    {"stamp", nullptr},       {"shell", nullptr},
};

const char* const kAttributes[] = {"red",   "blue",  "green", "yellow",
                                   "purple", "white", "small", "big"};

const char* const kUnits[] = {"box", "bag", "basket", "crate", "pack", "bundle", "carton", "bucket"};

void check_list(const std::vector<std::string>& list, const char* what) {
  if (list.empty()) throw Error(ErrorCode::InvalidArgument, std::string(what) + " list is empty");
  std::set<std::string> seen;
  for (const auto& w : list) {
    if (w.empty()) throw Error(ErrorCode::InvalidArgument, std::string(what) + " list has an empty entry");
    if (!seen.insert(w).second) {
      throw Error(ErrorCode::InvalidArgument, std::string(what) + " list repeats '" + w + "'");
    }
  }
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

Vocab Vocab::defaults() {
  Vocab v;
  for (const char* n : kNames) v.agents.emplace_back(n);
  v.extended_agents = v.agents;
  for (const char* n : kMoreNames) v.extended_agents.emplace_back(n);
  for (const auto& e : kEntities) {
    v.entities.emplace_back(e.entity);
    if (e.hypernym) v.hypernyms.emplace(e.entity, e.hypernym);
  }
  for (const char* a : kAttributes) v.attributes.emplace_back(a);
  for (const char* u : kUnits) v.units.emplace_back(u);
  return v;
}

void Vocab::validate() const {
  check_list(agents, "agent");
  if (!extended_agents.empty()) check_list(extended_agents, "extended agent");
  check_list(entities, "entity");
  check_list(attributes, "attribute");
  check_list(units, "unit");
}

std::map<std::string, std::vector<std::string>> Vocab::categories() const {
  std::map<std::string, std::vector<std::string>> groups;
  for (const auto& e : entities) {
    if (auto it = hypernyms.find(e); it != hypernyms.end()) groups[it->second].push_back(e);
  }
  std::erase_if(groups, [](const auto& kv) { return kv.second.size() < 2; });
  return groups;
}

const std::vector<std::string>& Vocab::agents_for(std::size_t needed) const {
  if (needed <= agents.size()) return agents;
  if (needed <= extended_agents.size()) return extended_agents;
  throw Error(ErrorCode::VocabularyExhausted,
              "problem needs " + std::to_string(needed) + " distinct agent names but only " +
                  std::to_string(std::max(agents.size(), extended_agents.size())) +
                  " are available");
}

std::vector<std::string> load_word_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open word list " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(std::move(line));
    if (line.empty() || line.front() == '#') continue;
    words.push_back(std::move(line));
  }
  return words;
}

std::map<std::string, std::string> load_hypernyms(const std::filesystem::path& path) {
  std::map<std::string, std::string> out;
  std::size_t lineno = 0;
  for (const auto& line : load_word_list(path)) {
    ++lineno;
    const auto bar = line.find('|');
    if (bar == std::string::npos) {
      throw Error(ErrorCode::Parse, path.string() + ": expected 'entity|category' in entry " +
                                        std::to_string(lineno));
    }
    out[trim(line.substr(0, bar))] = trim(line.substr(bar + 1));
  }
  return out;
}

}  // namespace mathgap
