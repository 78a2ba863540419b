#pragma once

#include <filesystem>
#include <memory>
#include <string>

namespace httplib {
class Server;
}

namespace helios {

struct ServiceConfig {
  std::filesystem::path data_dir = "helios-data";
  int threads = 0;  // engine workers per job
  std::string cors_origin = "*";
};

/// JSON API over a local data directory:
///
///   <data_dir>/scenes/<id>/rev-<n>.json     immutable scene revisions
///   <data_dir>/scenes/<id>/meshes/obj-<k>.obj  meshes, shared by all revisions
///   <data_dir>/jobs/<id>/job.json           parameters and final state
///   <data_dir>/jobs/<id>/report.csv, heatmap.csv
///
/// Jobs run one at a time on a background thread against the scene revision
/// they were created for.
class Service {
 public:
  explicit Service(ServiceConfig cfg);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  void mount(httplib::Server& server);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Blocks serving on host:port until the process is stopped.
int serve(const ServiceConfig& cfg, const std::string& host, int port);

}  // namespace helios
