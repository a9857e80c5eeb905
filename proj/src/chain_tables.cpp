#include "lrc/chains.hpp"

namespace lrc {

const std::vector<std::string>& block_patterns() {
  static const std::vector<std::string> p{
      "234",    "243",    "324",    "423",    "342",    "432",                                  //
      "2434",   "3234",   "3243",   "4234",   "4243",   "3423",  "3424", "4323", "4324", "4342",  //
      "32434",  "42434",  "34234",  "34243",  "43234",  "43243", "43423", "43424",              //
      "342434", "432434", "434234", "434243",                                                   //
      "4342434"};
  return p;
}

namespace {

ChainFamily family(std::string label, std::initializer_list<const char*> chains) {
  ChainFamily f{std::move(label), {}};
  for (const char* c : chains) f.members.push_back(WeakChain::parse(c));
  return f;
}

}  // namespace

const std::vector<ChainFamily>& labelled_families() {
  static const std::vector<ChainFamily> f{
      family("A", {"<342||342|000||111>", "<342||342|000||121>", "<342||342|000||131>", "<342||342|000||141>",
                   "<342||342|000||151>"}),
      family("B", {"<342||3424|000||1314>"}),
      family("C", {"<432||324|000||112>", "<432||324|000||113>", "<432||324|000||115>", "<432||324|000||117>",
                   "<432||324|000||118>"}),
      family("D", {"<432||342|000||131>", "<432||342|000||141>", "<432||342|000||151>"}),
      family("E", {"<432||432|000||111>", "<432||432|000||211>", "<432||432|000||311>", "<432||432|000||411>",
                   "<432||432|000||511>"}),
      family("F", {"<432||4324|000||1112>", "<432||4324|000||2113>", "<432||4324|000||3115>",
                   "<432||4324|000||4117>", "<432||4324|000||5118>"}),
      family("G", {"<432||3424|000||1415>"}),
      family("H", {"<432||4342|000||2131>", "<432||4342|000||3141>", "<432||4342|000||4151>"}),
      family("I", {"<432||43424|000||31415>"}),
      family("J", {"<4324||324|0001||112>", "<4324||324|0001||113>", "<4324||324|0002||115>",
                   "<4324||324|0003||117>", "<4324||324|0003||118>"}),
      family("K", {"<4324||4324|0002||3115>"}),
      family("L", {"<4324||3424|0002||1415>"}),
      family("M", {"<4324||43424|0002||31415>"}),
      family("N", {"<3424||3424|0001||1314>"}),
      family("O", {"<4342||342|0010||131>", "<4342||342|0010||141>", "<4342||342|0010||151>"}),
      family("P", {"<4342||3424|0010||1415>"}),
      family("Q", {"<4342||3424|0010||1314>", "<4342||3424|0010||1516>"}),
      family("R", {"<4342||4342|0010||3141>"}),
      family("S", {"<4342||43424|0010||31415>"}),
      family("T", {"<43424||3424|00102||1415>"}),
      family("U", {"<342||423|000||112>"}),
      family("V", {"<342||3423|000||1112>"}),
      family("W", {"<342||3424|000||1213>", "<342||3424|000||1415>", "<342||3424|000||1517>"}),
      family("X", {"<324||243|000||112>"}),
      family("Y", {"<324||324|000||111>", "<324||324|000||112>", "<324||324|000||113>", "<324||324|000||114>",
                   "<324||324|000||115>"}),
      family("Z", {"<324||3424|000||1213>"}),
      family("Gamma", {"<432||324|000||114>", "<432||324|000||116>"}),
      family("Delta", {"<432||342|000||121>", "<432||342|000||161>"}),
      family("Theta", {"<432||3424|000||1213>", "<432||3424|000||1314>", "<432||3424|000||1516>"}),
      family("Lambda", {"<423||234|000||112>"}),
      family("Xi", {"<243||243|000||111>"}),
      family("Pi", {"<234||234|000||111>", "<234||234|000||112>"}),
      family("Sigma", {"<243||234|000||112>"}),
  };
  return f;
}

std::vector<WeakChain> excluded_two_chains() {
  return {WeakChain::parse("<342||423|000||112>"), WeakChain::parse("<342||3423|000||1112>"),
          WeakChain::parse("<324||243|000||112>")};
}

const std::vector<std::pair<std::string, std::string>>& reference_transfer_arrows() {
  static const std::vector<std::pair<std::string, std::string>> a{
      {"A", "A"}, {"A", "B"}, {"A", "U"}, {"A", "V"}, {"A", "W"}, {"B", "N"}, {"C", "X"}, {"C", "Y"},
      {"C", "Z"}, {"D", "A"}, {"D", "B"}, {"D", "W"}, {"Delta", "A"}, {"E", "C"}, {"E", "D"}, {"E", "Delta"},
      {"E", "E"}, {"E", "F"}, {"E", "G"}, {"E", "H"}, {"E", "I"}, {"E", "Theta"}, {"F", "J"}, {"F", "K"},
      {"F", "L"}, {"F", "M"}, {"G", "N"}, {"Gamma", "Y"}, {"H", "D"}, {"H", "H"}, {"H", "P"}, {"H", "Q"},
      {"H", "S"}, {"I", "T"}, {"J", "Y"}, {"J", "Z"}, {"K", "J"}, {"K", "K"}, {"K", "L"}, {"K", "M"},
      {"L", "N"}, {"Lambda", "Pi"}, {"M", "T"}, {"N", "N"}, {"O", "A"}, {"O", "B"}, {"O", "W"}, {"P", "N"},
      {"Pi", "Pi"}, {"R", "O"}, {"R", "P"}, {"R", "R"}, {"R", "S"}, {"S", "T"}, {"Sigma", "Pi"}, {"T", "N"},
      {"U", "Lambda"}, {"X", "Xi"}, {"Xi", "Sigma"}, {"Xi", "Xi"}, {"Y", "Y"}, {"Y", "Z"}, {"Z", "N"}};
  return a;
}

}  // namespace lrc
