#include <charconv>

#include <httplib.h>

#include "fuzzyvis/service.hpp"

namespace fuzzyvis {

namespace {

using nlohmann::json;

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

std::size_t size_param(const httplib::Request& req, const char* key, std::size_t fallback) {
  if (!req.has_param(key)) return fallback;
  const auto text = req.get_param_value(key);
  std::size_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size())
    throw Error(ErrorCode::InvalidParams,
                std::string("query parameter '") + key + "' must be a non-negative integer", {key});
  return value;
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidParams, std::string("request body is not valid JSON: ") + e.what(),
                {"$"}, static_cast<long>(e.byte));
  }
}

/// Runs a handler and turns any failure into the JSON error envelope.
template <class Fn>
void guarded(httplib::Response& res, bool concept_route, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    send(res, http_status(e.code(), concept_route), error_json(e));
  } catch (const std::exception&) {
    send(res, 500,
         {{"error", {{"code", "Internal"}, {"message", "internal server error"}, {"details", json::array()}}}});
  }
}

}  // namespace

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;

  explicit Impl(Service& s) : service(s) { routes(); }

  void routes() {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type, X-Fuzzy-Family");
      res.status = 204;
    });

    server.Post("/instances", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, false, [&] {
        auto result = service.create_instance(CreateRequest::from_json(parse_body(req)));
        json body{{"instance_id", result.instance_id}, {"warnings", result.warnings}, {"job", nullptr}};
        if (result.job)
          body["job"] = {{"job_id", result.job->job_id}, {"state", to_string(result.job->state)}};
        send(res, 201, body);
      });
    });

    server.Get("/instances", [this](const httplib::Request&, httplib::Response& res) {
      guarded(res, false, [&] { send(res, 200, service.list_json()); });
    });

    server.Get(R"(/instances/([^/]+)/concepts/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, true, [&] { send(res, 200, service.concept_json(req.matches[1].str(), req.matches[2].str())); });
    });

    server.Get(R"(/instances/([^/]+)/search)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, false, [&] {
        send(res, 200,
             service.search_json(req.matches[1].str(), req.get_param_value("q"), size_param(req, "limit", 10)));
      });
    });

    server.Get(R"(/instances/([^/]+)/neighborhood/(.+))",
               [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, true, [&] {
                   send(res, 200,
                        service.neighborhood_json(req.matches[1].str(), req.matches[2].str(),
                                                  size_param(req, "depth", 2)));
                 });
               });

    server.Post(R"(/instances/([^/]+)/query)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, false, [&] {
        std::optional<Family> family;
        if (req.has_header("X-Fuzzy-Family")) family = parse_family(req.get_header_value("X-Fuzzy-Family"));
        send(res, 200, service.query_json(req.matches[1].str(), parse_body(req), size_param(req, "k", 10), family));
      });
    });

    server.Get(R"(/jobs/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, false, [&] {
        auto j = service.job(req.matches[1].str());
        send(res, 200,
             {{"job_id", j.job_id}, {"instance_id", j.instance_id}, {"state", to_string(j.state)}, {"detail", j.detail}});
      });
    });

    server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
      if (!res.body.empty()) return;
      send(res, res.status,
           {{"error",
             {{"code", res.status == 404 ? "NotFound" : "HttpError"},
              {"message", "no route for " + req.method + " " + req.path},
              {"details", json::array()}}}});
    });
  }
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {}
HttpServer::~HttpServer() { stop(); }

bool HttpServer::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }
int HttpServer::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }
bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }
void HttpServer::stop() { impl_->server.stop(); }
void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace fuzzyvis
