#include "helios/service.hpp"

#include <atomic>
#include <condition_variable>
#include <deque>
#include <list>
#include <map>
#include <mutex>
#include <thread>

#include "httplib.h"

#include "helios/error.hpp"
#include "helios/report_io.hpp"
#include "helios/run.hpp"

namespace helios {
namespace fs = std::filesystem;

namespace {

struct HttpError {
  int status;
  std::string message;
  std::string field;
};

[[noreturn]] void fail(int status, std::string message, std::string field = {}) {
  throw HttpError{status, std::move(message), std::move(field)};
}

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void write_atomic(const fs::path& file, const std::string& content) {
  const fs::path tmp = file.string() + ".tmp";
  write_file(tmp, content);
  fs::rename(tmp, file);
}

int parse_revision(const std::string& text) {
  try {
    std::size_t pos = 0;
    const int r = std::stoi(text, &pos);
    if (pos == text.size() && r > 0) return r;
  } catch (const std::exception&) {
  }
  fail(422, "revision must be a positive integer", "revision");
}

std::optional<int> suffix_number(const std::string& name, const std::string& prefix, const std::string& suffix = "") {
  if (name.size() <= prefix.size() + suffix.size() || name.rfind(prefix, 0) != 0) return std::nullopt;
  if (!suffix.empty() && name.substr(name.size() - suffix.size()) != suffix) return std::nullopt;
  const std::string digits = name.substr(prefix.size(), name.size() - prefix.size() - suffix.size());
  if (digits.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
  return std::stoi(digits);
}

enum class JobState { Queued, Running, Done, Failed };

const char* to_string(JobState s) {
  switch (s) {
    case JobState::Queued: return "queued";
    case JobState::Running: return "running";
    case JobState::Done: return "done";
    case JobState::Failed: return "failed";
  }
  return "failed";
}

}  // namespace

struct Service::Impl {
  ServiceConfig cfg;

  struct SceneEntry {
    std::mutex write;  // serializes PATCHes of one scene
    std::atomic<int> latest{0};
  };
  struct Job {
    std::string id, scene_id;
    int revision = 0;
    Json params;
    RunRequest request;
    std::shared_ptr<const Scene> scene;
    std::mutex mu;
    JobState state = JobState::Queued;
    std::atomic<double> progress{0.0};
    std::string error;
    double loss_fraction = 0.0;
    std::size_t instants = 0;
  };

  std::mutex mu;  // guards the maps and counters below
  std::map<std::string, std::shared_ptr<SceneEntry>> scenes;
  std::map<std::string, std::shared_ptr<Job>> jobs;
  int next_scene = 1, next_job = 1;

  std::mutex build_mu;  // guards meshes and the scene cache
  MeshCache meshes;
  std::list<std::pair<std::string, std::shared_ptr<const Scene>>> scene_cache;  // most recent first

  std::mutex queue_mu;
  std::condition_variable queue_cv;
  std::deque<std::shared_ptr<Job>> queue;
  bool stopping = false;
  std::thread worker;

  explicit Impl(ServiceConfig c) : cfg(std::move(c)) {
    fs::create_directories(cfg.data_dir / "scenes");
    fs::create_directories(cfg.data_dir / "jobs");
    recover();
    worker = std::thread([this] { run_jobs(); });
  }

  ~Impl() {
    {
      std::lock_guard lock(queue_mu);
      stopping = true;
    }
    queue_cv.notify_all();
    worker.join();
  }

  fs::path scene_dir(const std::string& id) const { return cfg.data_dir / "scenes" / id; }
  fs::path revision_file(const std::string& id, int rev) const {
    return scene_dir(id) / ("rev-" + std::to_string(rev) + ".json");
  }
  fs::path job_dir(const std::string& id) const { return cfg.data_dir / "jobs" / id; }

  void recover() {
    for (const auto& d : fs::directory_iterator(cfg.data_dir / "scenes")) {
      const std::string id = d.path().filename().string();
      int latest = 0;
      for (const auto& f : fs::directory_iterator(d.path()))
        if (auto n = suffix_number(f.path().filename().string(), "rev-", ".json")) latest = std::max(latest, *n);
      if (latest == 0) continue;
      auto e = std::make_shared<SceneEntry>();
      e->latest = latest;
      scenes[id] = e;
      if (auto n = suffix_number(id, "s")) next_scene = std::max(next_scene, *n + 1);
    }
    for (const auto& d : fs::directory_iterator(cfg.data_dir / "jobs")) {
      const std::string id = d.path().filename().string();
      if (auto n = suffix_number(id, "j")) next_job = std::max(next_job, *n + 1);
      const fs::path meta = d.path() / "job.json";
      if (!fs::exists(meta)) continue;
      Json j = Json::parse(read_text_file(meta), nullptr, false);
      if (j.is_discarded()) continue;
      auto job = std::make_shared<Job>();
      job->id = id;
      job->scene_id = j.value("scene", "");
      job->revision = j.value("revision", 0);
      job->params = j.value("params", Json::object());
      const std::string st = j.value("state", "failed");
      job->state = st == "done" ? JobState::Done : JobState::Failed;
      job->error = st == "done" || st == "failed" ? j.value("error", "") : "interrupted by a service restart";
      job->progress = job->state == JobState::Done ? 1.0 : 0.0;
      job->loss_fraction = j.value("loss_fraction", 0.0);
      job->instants = j.value("instants", std::size_t{0});
      jobs[id] = job;
    }
  }

  std::shared_ptr<SceneEntry> entry(const std::string& id) {
    std::lock_guard lock(mu);
    auto it = scenes.find(id);
    if (it == scenes.end()) fail(404, "unknown scene '" + id + "'");
    return it->second;
  }

  Json read_revision(const std::string& id, int rev) {
    const fs::path file = revision_file(id, rev);
    if (!fs::exists(file)) fail(404, "scene '" + id + "' has no revision " + std::to_string(rev));
    return Json::parse(read_text_file(file));
  }

  std::shared_ptr<const Scene> scene_at(const std::string& id, int rev) {
    const std::string key = id + "@" + std::to_string(rev);
    const Json doc = read_revision(id, rev);
    std::lock_guard lock(build_mu);
    for (auto it = scene_cache.begin(); it != scene_cache.end(); ++it) {
      if (it->first == key) {
        scene_cache.splice(scene_cache.begin(), scene_cache, it);
        return it->second;
      }
    }
    auto scene = std::make_shared<const Scene>(scene_from_json(doc, scene_dir(id), &meshes));
    scene_cache.emplace_front(key, scene);
    if (scene_cache.size() > 8) scene_cache.pop_back();
    return scene;
  }

  int requested_revision(const httplib::Request& req, const SceneEntry& e) {
    return req.has_param("revision") ? parse_revision(req.get_param_value("revision")) : e.latest.load();
  }

  // POST /scenes
  void create_scene(const httplib::Request& req, httplib::Response& res) {
    Json doc = parse_json(req.body, "request body");
    if (!doc.is_object()) fail(422, "scene must be a JSON object");
    std::string id;
    {
      std::lock_guard lock(mu);
      id = "s" + std::to_string(next_scene++);
    }
    const fs::path dir = scene_dir(id);
    fs::create_directories(dir / "meshes");
    try {
      if (doc.contains("objects") && doc["objects"].is_array()) {
        std::size_t k = 0;
        for (auto& obj : doc["objects"]) {
          const std::string path = "objects[" + std::to_string(k) + "]";
          if (!obj.is_object()) throw InputError(path + " must be an object", path);
          const std::string rel = "meshes/obj-" + std::to_string(k++) + ".obj";
          if (obj.contains("obj_text")) {
            if (!obj["obj_text"].is_string()) throw InputError(path + ".obj_text must be a string", path + ".obj_text");
            write_file(dir / rel, obj["obj_text"].get<std::string>());
          } else if (obj.contains("obj_path") && obj["obj_path"].is_string()) {
            const fs::path src = obj["obj_path"].get<std::string>();
            if (!fs::is_regular_file(src)) throw InputError("OBJ file not found: " + src.string(), path + ".obj_path");
            fs::copy_file(src, dir / rel, fs::copy_options::overwrite_existing);
          } else {
            throw InputError(path + " needs obj_text or obj_path", path + ".obj_path");
          }
          obj.erase("obj_text");
          obj["obj_path"] = rel;
        }
      }
      doc["version"] = doc.value("version", kSceneVersion);
      std::lock_guard lock(build_mu);
      (void)scene_from_json(doc, dir, &meshes);
    } catch (...) {
      fs::remove_all(dir);
      throw;
    }
    write_atomic(revision_file(id, 1), doc.dump(2));
    auto e = std::make_shared<SceneEntry>();
    e->latest = 1;
    {
      std::lock_guard lock(mu);
      scenes[id] = e;
    }
    send_json(res, 201, {{"id", id}, {"revision", 1}});
  }

  // GET /scenes/{id}
  void get_scene(const httplib::Request& req, httplib::Response& res, const std::string& id) {
    auto e = entry(id);
    const int rev = requested_revision(req, *e);
    send_json(res, 200, {{"id", id}, {"revision", rev}, {"latest_revision", e->latest.load()}, {"scene", read_revision(id, rev)}});
  }

  // PATCH /scenes/{id}/objects/{oid} and /generators/{gid}
  void patch(const httplib::Request& req, httplib::Response& res, const std::string& id, const std::string& kind,
             const std::string& item) {
    auto e = entry(id);
    const Json body = parse_json(req.body, "request body");
    if (!body.is_object()) fail(422, "patch must be a JSON object");

    std::lock_guard write_lock(e->write);
    const int rev = e->latest;
    Json doc = read_revision(id, rev);
    Json* target = nullptr;
    const char* list = kind == "objects" ? "objects" : "generators";
    if (doc.contains(list))
      for (auto& x : doc[list])
        if (x.value("id", "") == item) target = &x;
    if (!target) fail(404, std::string(kind == "objects" ? "object" : "generator") + " '" + item + "' not found");

    if (kind == "objects") {
      static const std::map<std::string, std::string> keys = {
          {"translation_m", "translation_m"}, {"translation", "translation_m"}, {"rotation_deg", "rotation_deg"},
          {"rotation", "rotation_deg"},       {"scale", "scale"},               {"visible", "visible"}};
      for (const auto& [k, v] : body.items()) {
        auto it = keys.find(k);
        if (it == keys.end()) fail(422, "unknown object field '" + k + "'", k);
        (*target)[it->second] = v;
      }
      (void)transform_from_json(*target, "");
      if (!(*target)["visible"].is_boolean()) fail(422, "visible must be a boolean", "visible");
    } else {
      for (const auto& [k, v] : body.items()) {
        if (k == "id") fail(422, "generator id cannot be changed", "id");
        (*target)[k] = v;
      }
      (void)generator_from_json(*target, "");
    }
    {
      std::lock_guard lock(build_mu);
      (void)scene_from_json(doc, scene_dir(id), &meshes);
    }
    write_atomic(revision_file(id, rev + 1), doc.dump(2));
    e->latest = rev + 1;
    send_json(res, 200, {{"id", id}, {"revision", rev + 1}});
  }

  // GET /scenes/{id}/shadows?at=...&generator=...
  void shadows(const httplib::Request& req, httplib::Response& res, const std::string& id) {
    auto e = entry(id);
    const int rev = requested_revision(req, *e);
    if (!req.has_param("at")) fail(422, "query parameter 'at' is required", "at");
    Instant at;
    try {
      at = parse_instant(req.get_param_value("at"));
    } catch (const InputError& err) {
      fail(422, err.what(), "at");
    }
    const auto scene = scene_at(id, rev);
    EngineOptions opt;
    opt.keep_masks = true;
    if (req.has_param("generator")) {
      opt.generator = req.get_param_value("generator");
      bool known = false;
      for (const auto& g : scene->generators) known = known || g.id == *opt.generator;
      if (!known) fail(404, "unknown generator '" + *opt.generator + "'");
    }
    const InstantResult r = simulate_instant(*scene, WeatherSource::clear_sky(), at, opt);
    if (!r.daylight) fail(409, "sun below horizon");
    Json body = instant_json(r);
    body["scene"] = id;
    body["revision"] = rev;
    send_json(res, 200, body);
  }

  Json job_json(Job& job) {
    std::lock_guard lock(job.mu);
    Json j{{"id", job.id},
           {"scene", job.scene_id},
           {"revision", job.revision},
           {"params", job.params},
           {"state", to_string(job.state)},
           {"progress", job.progress.load()}};
    if (job.state == JobState::Done) {
      j["loss_fraction"] = job.loss_fraction;
      j["instants"] = job.instants;
      j["report"] = "/jobs/" + job.id + "/report";
      j["heatmap"] = "/jobs/" + job.id + "/heatmap";
    }
    if (job.state == JobState::Failed) j["error"] = job.error;
    return j;
  }

  void persist(Job& job) { write_atomic(job_dir(job.id) / "job.json", job_json(job).dump(2)); }

  // POST /scenes/{id}/jobs
  void create_job(const httplib::Request& req, httplib::Response& res, const std::string& id) {
    auto e = entry(id);
    Json params = parse_json(req.body, "request body");
    if (!params.is_object()) fail(422, "job parameters must be a JSON object");
    int rev = e->latest;
    if (params.contains("revision")) {
      if (!params["revision"].is_number_integer() || params["revision"].get<int>() < 1)
        fail(422, "revision must be a positive integer", "revision");
      rev = params["revision"].get<int>();
    }
    auto job = std::make_shared<Job>();
    job->request = run_request_from_json(params);
    job->scene = scene_at(id, rev);  // snapshot: later PATCHes create new revisions
    job->scene_id = id;
    job->revision = rev;
    params.erase("weather_csv");  // large; not echoed back
    params["revision"] = rev;
    job->params = params;
    {
      std::lock_guard lock(mu);
      job->id = "j" + std::to_string(next_job++);
      jobs[job->id] = job;
    }
    fs::create_directories(job_dir(job->id));
    persist(*job);
    {
      std::lock_guard lock(queue_mu);
      queue.push_back(job);
    }
    queue_cv.notify_one();
    send_json(res, 202, job_json(*job));
  }

  std::shared_ptr<Job> find_job(const std::string& jid) {
    std::lock_guard lock(mu);
    auto it = jobs.find(jid);
    if (it == jobs.end()) fail(404, "unknown job '" + jid + "'");
    return it->second;
  }

  void job_file(httplib::Response& res, const std::string& jid, const char* name) {
    auto job = find_job(jid);
    {
      std::lock_guard lock(job->mu);
      if (job->state != JobState::Done) fail(409, "job '" + jid + "' is " + to_string(job->state));
    }
    res.status = 200;
    res.set_content(read_text_file(job_dir(jid) / name), "text/csv");
  }

  void run_jobs() {
    for (;;) {
      std::shared_ptr<Job> job;
      {
        std::unique_lock lock(queue_mu);
        queue_cv.wait(lock, [&] { return stopping || !queue.empty(); });
        if (stopping) return;
        job = queue.front();
        queue.pop_front();
      }
      {
        std::lock_guard lock(job->mu);
        job->state = JobState::Running;
      }
      try {
        RunRequest rq = job->request;
        if (rq.threads <= 0) rq.threads = cfg.threads;
        const RunOutput out = run_simulation(*job->scene, rq, [&](double p) { job->progress = p; });
        write_file(job_dir(job->id) / "report.csv", out.report_csv);
        write_file(job_dir(job->id) / "heatmap.csv", out.heatmap_csv);
        std::lock_guard lock(job->mu);
        job->loss_fraction = out.loss_fraction;
        job->instants = out.instants;
        job->progress = 1.0;
        job->state = JobState::Done;
      } catch (const std::exception& ex) {
        std::lock_guard lock(job->mu);
        job->error = ex.what();
        job->state = JobState::Failed;
      }
      job->scene.reset();
      persist(*job);
    }
  }

  template <class F>
  void guarded(httplib::Response& res, F&& f) {
    try {
      f();
    } catch (const HttpError& e) {
      Json body{{"error", e.message}};
      if (!e.field.empty()) body["field"] = e.field;
      send_json(res, e.status, body);
    } catch (const InputError& e) {
      Json body{{"error", e.what()}};
      if (!e.field().empty()) body["field"] = e.field();
      send_json(res, 422, body);
    } catch (const DomainError& e) {
      send_json(res, 409, {{"error", e.what()}});
    } catch (const std::exception& e) {
      send_json(res, 500, {{"error", e.what()}});
    }
  }
};

Service::Service(ServiceConfig cfg) : impl_(std::make_unique<Impl>(std::move(cfg))) {}
Service::~Service() = default;

void Service::mount(httplib::Server& server) {
  Impl* s = impl_.get();
  server.set_default_headers({{"Access-Control-Allow-Origin", s->cfg.cors_origin},
                              {"Access-Control-Allow-Methods", "GET, POST, PATCH, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server.Post("/scenes", [s](const httplib::Request& req, httplib::Response& res) {
    s->guarded(res, [&] { s->create_scene(req, res); });
  });
  server.Get(R"(/scenes/([^/]+))", [s](const httplib::Request& req, httplib::Response& res) {
    s->guarded(res, [&] { s->get_scene(req, res, req.matches[1]); });
  });
  server.Patch(R"(/scenes/([^/]+)/(objects|generators)/([^/]+))", [s](const httplib::Request& req, httplib::Response& res) {
    s->guarded(res, [&] { s->patch(req, res, req.matches[1], req.matches[2], req.matches[3]); });
  });
  server.Get(R"(/scenes/([^/]+)/shadows)", [s](const httplib::Request& req, httplib::Response& res) {
    s->guarded(res, [&] { s->shadows(req, res, req.matches[1]); });
  });
  server.Post(R"(/scenes/([^/]+)/jobs)", [s](const httplib::Request& req, httplib::Response& res) {
    s->guarded(res, [&] { s->create_job(req, res, req.matches[1]); });
  });
  server.Get(R"(/jobs/([^/]+))", [s](const httplib::Request& req, httplib::Response& res) {
    s->guarded(res, [&] { send_json(res, 200, s->job_json(*s->find_job(req.matches[1]))); });
  });
  server.Get(R"(/jobs/([^/]+)/report)", [s](const httplib::Request& req, httplib::Response& res) {
    s->guarded(res, [&] { s->job_file(res, req.matches[1], "report.csv"); });
  });
  server.Get(R"(/jobs/([^/]+)/heatmap)", [s](const httplib::Request& req, httplib::Response& res) {
    s->guarded(res, [&] { s->job_file(res, req.matches[1], "heatmap.csv"); });
  });
}

int serve(const ServiceConfig& cfg, const std::string& host, int port) {
  Service service(cfg);
  httplib::Server server;
  service.mount(server);
  if (!server.listen(host, port)) throw InputError("cannot listen on " + host + ":" + std::to_string(port), "port");
  return 0;
}

}  // namespace helios
