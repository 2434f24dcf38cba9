#include <string>

#include "doctest.h"
#include "plrs/sha256.hpp"

using namespace plrs;

TEST_CASE("sha256 FIPS vectors") {
  CHECK(Sha256::hex_digest("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(Sha256::hex_digest("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(Sha256::hex_digest("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("sha256 long input") {
  const std::string a_million(1000000, 'a');
  CHECK(Sha256::hex_digest(a_million) ==
        "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
}

TEST_CASE("sha256 block-boundary lengths") {
  // 55, 56 and 64 bytes exercise the padding paths.
  const std::string x55(55, 'x');
  const std::string x56(56, 'x');
  const std::string x64(64, 'x');
  CHECK(Sha256::hex_digest(x55) != Sha256::hex_digest(x56));
  CHECK(Sha256::hex_digest(x56) != Sha256::hex_digest(x64));
  // Incremental updates agree with one-shot hashing.
  Sha256 h;
  h.update(x64.substr(0, 30));
  h.update(x64.substr(30));
  const auto d = h.digest();
  Sha256 h2;
  h2.update(x64);
  CHECK(d == h2.digest());
}
