#pragma once

#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "covsim/data_io.hpp"
#include "covsim/error.hpp"
#include "covsim/scenario.hpp"
#include "covsim/scenario_store.hpp"

namespace covsim {

inline int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::validation:
    case ErrorCode::input: return 400;
    case ErrorCode::not_found: return 404;
    case ErrorCode::history_violation: return 409;
    case ErrorCode::out_of_range:
    case ErrorCode::horizon_exceeded:
    case ErrorCode::empty_curve: return 422;
    case ErrorCode::io: return 500;
  }
  return 500;
}

inline json error_to_json(const Error& e) {
  json details = json::array();
  for (const auto& d : e.details()) details.push_back({{"field", d.field}, {"message", d.message}});
  return {{"code", to_string(e.code())}, {"message", e.what()}, {"details", details}};
}

/// HTTP/JSON front end over a ScenarioStore. All routes live under /v1.
class Gateway {
 public:
  explicit Gateway(ScenarioStore& store) : store_(store) {}

  void install(httplib::Server& server) {
    server.Get("/v1/health", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"status":"ok"})", "application/json");
    });

    server.Post("/v1/scenarios", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      detail::ConfigReader keys;
      keys.reject_unknown(body, "", {"config", "inputs"});
      keys.sink.throw_if_any(ErrorCode::validation, "invalid request");
      LoadedConfig loaded = parse_config(body.value("config", json::object()));
      const std::string inputs = body.value("inputs", std::string("default"));
      const Scenario s = store_.create(std::move(loaded.config), inputs);
      res.status = 201;
      reply(res, {{"id", s.id}, {"config", loaded.echo}});
    }));

    server.Get("/v1/scenarios", wrap([this](const httplib::Request&, httplib::Response& res) {
      reply(res, {{"scenarios", tree()}});
    }));

    server.Post(R"(/v1/scenarios/([^/]+)/run)", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      const auto result = store_.run(id);
      reply(res, {{"id", id}, {"status", "complete"}, {"horizon", result->horizon()}});
    }));

    server.Post(R"(/v1/scenarios/([^/]+)/branch)", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      const json body = parse_body(req);
      const Scenario parent = store_.get(id);
      DiagnosticSink sink;
      detail::ConfigReader keys;
      keys.reject_unknown(body, "", {"branch_day", "actions"});
      sink.merge(keys.sink.items());
      if (!body.contains("branch_day") || !body["branch_day"].is_number_integer())
        sink.add("branch_day", "must be an integer");
      std::vector<DecisionAction> actions;
      if (body.contains("actions")) {
        if (!body["actions"].is_array()) {
          sink.add("actions", "must be an array");
        } else {
          for (std::size_t i = 0; i < body["actions"].size(); ++i)
            if (auto a = action_from_json(body["actions"][i], parent.config.measure_defaults,
                                          "actions[" + std::to_string(i) + "]", sink))
              actions.push_back(*a);
        }
      }
      sink.throw_if_any(ErrorCode::validation, "invalid branch request");
      const Scenario child = store_.branch(id, body["branch_day"].get<Day>(), actions);
      res.status = 201;
      reply(res, node(child));
    }));

    server.Get(R"(/v1/scenarios/([^/]+)/frames/([^/]+))",
               wrap([this](const httplib::Request& req, httplib::Response& res) {
                 const std::string id = req.matches[1];
                 const auto day = detail::parse_number<Day>(std::string(req.matches[2]));
                 if (!day) throw Error(ErrorCode::out_of_range, "day must be an integer", {{"day", "not an integer"}});
                 const Metric metric = require_metric(req.has_param("metric") ? req.get_param_value("metric") : "active_sick");
                 const auto result = store_.run(id);
                 const MapFrame f = frame(*result, *day, metric);
                 json values = json::array();
                 for (const auto& e : f.entries)
                   values.push_back({{"fips", e.fips}, {"value", e.value}, {"normalized", e.normalized}});
                 reply(res, {{"id", id}, {"day", f.day}, {"metric", to_string(f.metric)}, {"values", values}});
               }));

    server.Get(R"(/v1/scenarios/([^/]+)/series)", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      const Metric metric = require_metric(req.has_param("metric") ? req.get_param_value("metric") : "active_sick");
      std::vector<std::string> counties;
      if (req.has_param("counties")) {
        std::stringstream ss(req.get_param_value("counties"));
        std::string item;
        while (std::getline(ss, item, ','))
          if (!item.empty()) counties.push_back(item);
      }
      const auto result = store_.run(id);
      json out = json::array();
      for (const auto& s : series(*result, counties, metric)) out.push_back({{"fips", s.fips}, {"values", s.values}});
      reply(res, {{"id", id}, {"metric", to_string(metric)}, {"series", out}});
    }));

    server.Get(R"(/v1/scenarios/([^/]+)/summary)", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      json body = summary_to_json(summary(*store_.run(id)));
      body["id"] = id;
      reply(res, body);
    }));

    server.Get(R"(/v1/scenarios/([^/]+)/export\.csv)",
               wrap([this](const httplib::Request& req, httplib::Response& res) {
                 res.set_content(export_csv(*store_.run(req.matches[1])), "text/csv");
               }));

    server.Get("/v1/inputs/geometry", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const std::string name = req.has_param("inputs") ? req.get_param_value("inputs") : "default";
      const auto bundle = store_.inputs(name);
      if (!bundle->geometry) throw Error(ErrorCode::not_found, "no geometry loaded for '" + name + "'");
      res.set_content(*bundle->geometry, "application/geo+json");
    }));
  }

  /// Every scenario with its parent, children, branch day and action timeline.
  json tree() const {
    const auto all = store_.list();
    json nodes = json::array();
    for (const auto& s : all) {
      json n = node(s);
      json children = json::array();
      for (const auto& other : all)
        if (other.parent_id == s.id) children.push_back(other.id);
      n["children"] = children;
      nodes.push_back(std::move(n));
    }
    return nodes;
  }

 private:
  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  static Handler wrap(Handler inner) {
    return [inner = std::move(inner)](const httplib::Request& req, httplib::Response& res) {
      try {
        inner(req, res);
      } catch (const Error& e) {
        res.status = http_status(e.code());
        res.set_content(error_to_json(e).dump(), "application/json");
      } catch (const std::exception& e) {
        res.status = 500;
        res.set_content(json{{"code", "internal"}, {"message", e.what()}, {"details", json::array()}}.dump(),
                        "application/json");
      }
    };
  }

  static json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    try {
      json body = json::parse(req.body);
      if (!body.is_object()) throw Error(ErrorCode::validation, "request body must be a JSON object", {{"", "must be an object"}});
      return body;
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::validation, std::string("malformed JSON body: ") + e.what(), {{"", "malformed JSON"}});
    }
  }

  static void reply(httplib::Response& res, const json& body) { res.set_content(body.dump(), "application/json"); }

  json node(const Scenario& s) const {
    json actions = json::array();
    for (const auto& a : s.config.actions) actions.push_back(action_to_json(a));
    return {{"id", s.id},
            {"parent_id", s.parent_id ? json(*s.parent_id) : json(nullptr)},
            {"branch_day", s.branch_day},
            {"horizon", s.config.disease.horizon},
            {"actions", actions},
            {"status", store_.is_complete(s.id) ? "complete" : "pending"}};
  }

  ScenarioStore& store_;
};

}  // namespace covsim
