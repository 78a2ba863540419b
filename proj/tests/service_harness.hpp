#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>

#include "httplib.h"

#include "helios/fixtures.hpp"
#include "helios/mesh.hpp"
#include "helios/scene_json.hpp"
#include "helios/service.hpp"

// An in-process service on an ephemeral localhost port.
namespace harness {

using helios::Json;

class LiveService {
 public:
  explicit LiveService(const std::filesystem::path& data_dir, int threads = 1) {
    helios::ServiceConfig cfg;
    cfg.data_dir = data_dir;
    cfg.threads = threads;
    service_ = std::make_unique<helios::Service>(cfg);
    service_->mount(server_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    if (port_ <= 0) throw std::runtime_error("cannot bind a local port");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LiveService() {
    server_.stop();
    thread_.join();
  }

  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(600, 0);
    return c;
  }
  int port() const { return port_; }

 private:
  httplib::Server server_;
  std::unique_ptr<helios::Service> service_;
  int port_ = 0;
  std::thread thread_;
};

// Fixture scene with its meshes inlined, ready for POST /scenes.
inline Json inline_meshes(const helios::fixtures::Fixture& f) {
  Json doc = f.scene;
  for (auto& obj : doc["objects"]) {
    const std::string file = obj["obj_path"].get<std::string>();
    for (const auto& [name, mesh] : f.meshes)
      if (name + ".obj" == file) obj["obj_text"] = helios::to_obj(mesh);
    obj.erase("obj_path");
  }
  return doc;
}

inline Json body_of(const httplib::Result& r) { return Json::parse(r->body); }

// Polls GET /jobs/{id} until the job leaves queued/running.
inline Json wait_for_job(httplib::Client& c, const std::string& id, double timeout_s = 1200) {
  const auto t0 = std::chrono::steady_clock::now();
  for (;;) {
    auto r = c.Get("/jobs/" + id);
    if (!r) throw std::runtime_error("no response polling job " + id);
    Json j = Json::parse(r->body);
    const std::string st = j.value("state", "");
    if (st != "queued" && st != "running") return j;
    if (std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() > timeout_s)
      throw std::runtime_error("job " + id + " timed out");
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
}

}  // namespace harness
