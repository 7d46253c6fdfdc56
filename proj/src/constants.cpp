#include "halnum/constants.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "halnum/errors.hpp"

namespace halnum {

FrozenConstants FrozenConstants::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open constants file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw config_error("constants file is not valid JSON: " +
                       std::string(e.what()));
  }
  FrozenConstants c;
  auto get = [&](const char* name) -> double {
    if (!j.contains(name) || !j.at(name).is_number())
      throw config_error(std::string("constants file missing numeric field ") +
                         name);
    const double v = j.at(name).get<double>();
    if (!(v > 0.0))
      throw config_error(std::string("constant must be positive: ") + name);
    return v;
  };
  c.C_MV = get("C_MV");
  c.C_TRIV = get("C_TRIV");
  c.C_DEC = get("C_DEC");
  c.C_SHARP = get("C_SHARP");
  c.C_I1 = get("C_I1");
  c.C_I2 = get("C_I2");
  c.C_PER = get("C_PER");
  c.C_THM = get("C_THM");
  c.C_SM = get("C_SM");
  c.C_LX = get("C_LX");
  c.C_LOGSUM = get("C_LOGSUM");
  c.C_AUX = get("C_AUX");
  return c;
}

std::string file_hash_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open file for hashing: " + path);
  std::uint64_t h = 0xCBF29CE484222325ULL;
  char buf[4096];
  while (in) {
    in.read(buf, sizeof(buf));
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001B3ULL;
    }
  }
  std::ostringstream os;
  os << std::hex;
  for (int shift = 60; shift >= 0; shift -= 4)
    os << "0123456789abcdef"[(h >> shift) & 0xF];
  return os.str();
}

}  // namespace halnum
