#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>

#include "taletailor/corpus/extracts.hpp"

namespace tt_test {

inline std::filesystem::path test_data_dir() { return TT_TEST_DATA_DIR; }
inline std::filesystem::path repo_data_dir() { return TT_REPO_DATA_DIR; }

/// An httplib server on an ephemeral localhost port, stopped on destruction.
class LocalServer {
 public:
  explicit LocalServer(const std::function<void(httplib::Server&)>& mount) {
    mount(server_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    if (port_ <= 0) throw std::runtime_error("cannot bind a localhost port");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }
  LocalServer(const LocalServer&) = delete;
  LocalServer& operator=(const LocalServer&) = delete;

  int port() const { return port_; }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

/// Strictly positive probability vector of length n.
inline std::vector<double> random_distribution(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(1e-3, 1.0);
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& x : p) total += (x = u(rng));
  for (auto& x : p) x /= total;
  return p;
}

/// A small fairy-tale corpus for the built-in generator.
inline std::vector<taletailor::corpus::CleanExtract> toy_corpus() {
  const std::vector<std::string> stories = {
      "Once upon a time there lived a kind king. The king had a beautiful daughter. "
      "The daughter loved the golden sun.",
      "Once upon a time a poor miller lived by the river. The miller had a clever cat. "
      "The cat helped the miller find gold.",
      "A little red hen found a grain of wheat. The hen planted the wheat. "
      "The wheat grew tall and golden.",
      "The fox saw a crow in a tree. The crow held a piece of cheese. "
      "The fox praised the crow and the crow sang.",
      "In a dark forest lived a wicked witch. The witch had a house of bread. "
      "Two brave children found the house.",
  };
  std::vector<taletailor::corpus::CleanExtract> out;
  for (const auto& s : stories) out.push_back(taletailor::corpus::make_extract("", s));
  return out;
}

}  // namespace tt_test
