#include "attackscore/api_service.hpp"

#include <map>
#include <mutex>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "attackscore/assessment.hpp"
#include "attackscore/assessment_io.hpp"
#include "attackscore/io.hpp"

namespace attackscore {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kJson = "application/json";

ApiError api_error(int status, std::string code, std::string message, std::string field = {})
{
    return ApiError{status, std::move(code), std::move(message), std::move(field)};
}

struct ApiFailure {
    ApiError error;
};

json parse_body(const httplib::Request& req)
{
    try {
        auto body = json::parse(req.body);
        if (!body.is_object()) {
            throw ApiFailure{api_error(400, "bad_request", "request body must be a JSON object")};
        }
        return body;
    } catch (const json::parse_error& e) {
        throw ApiFailure{api_error(400, "bad_request",
                                   "malformed JSON at byte " + std::to_string(e.byte))};
    }
}

std::string body_string(const json& body, const char* key, bool required, std::string path = {})
{
    const auto field = path + key;
    auto it = body.find(key);
    if (it == body.end()) {
        if (required) throw ApiFailure{api_error(422, "validation", "missing field " + field, field)};
        return {};
    }
    if (!it->is_string()) {
        throw ApiFailure{api_error(422, "validation", "field " + field + " must be a string", field)};
    }
    return it->get<std::string>();
}

Status body_status(const json& body, std::string path = {})
{
    const auto text = body_string(body, "status", true, path);
    auto status = parse_status(text);
    if (!status) {
        throw ApiFailure{api_error(422, "validation",
                                   "status must be success or failure, got '" + text + "'",
                                   path + "status")};
    }
    return *status;
}

}  // namespace

const std::vector<std::string_view>& api_error_codes()
{
    static const std::vector<std::string_view> codes{
        "bad_request", "validation",     "not_found", "unknown_tactic", "unknown_assessment",
        "already_exists", "no_results", "locked",    "internal"};
    return codes;
}

ApiError to_api_error(const Error& error)
{
    switch (error.code()) {
    case ErrorCode::UnknownTactic:
        return api_error(404, "unknown_tactic", error.what(), error.field());
    case ErrorCode::NoResults:
        return api_error(409, "no_results", error.what());
    case ErrorCode::Locked:
        return api_error(409, "locked", error.what());
    case ErrorCode::NotInCatalog:
    case ErrorCode::TacticMismatch:
    case ErrorCode::OutOfOrder:
    case ErrorCode::InvalidArgument:
    case ErrorCode::MalformedId:
    case ErrorCode::UnknownSeverity:
        return api_error(422, "validation", error.what(), error.field());
    case ErrorCode::Parse:
        return api_error(400, "bad_request", error.what());
    default:
        return api_error(500, "internal", error.what());
    }
}

struct ApiService::Impl {
    LabeledCatalog catalog;
    ScoringConstants consts;
    ServiceOptions options;
    std::string fingerprint;
    httplib::Server server;

    std::mutex locks_mutex;
    std::map<std::string, std::unique_ptr<std::mutex>> locks;

    Impl(LabeledCatalog c, ScoringConstants k, ServiceOptions o)
        : catalog(std::move(c)), consts(std::move(k)), options(std::move(o)),
          fingerprint(consts.fingerprint())
    {
        routes();
    }

    std::mutex& lock_for(const std::string& id)
    {
        std::lock_guard guard(locks_mutex);
        auto& slot = locks[id];
        if (!slot) slot = std::make_unique<std::mutex>();
        return *slot;
    }

    std::filesystem::path path_for(std::string_view id) const
    {
        return options.data_dir / (std::string(id) + ".assessment");
    }

    Assessment load(const std::string& id) const
    {
        const auto path = path_for(id);
        if (!is_assessment_id(id) || !std::filesystem::exists(path)) {
            throw ApiFailure{api_error(404, "unknown_assessment", "no assessment " + id)};
        }
        return read_assessment(path);
    }

    void send_json(httplib::Response& res, int status, json body) const
    {
        res.status = status;
        res.set_content(body.dump(2) + "\n", kJson);
    }

    void send_error(httplib::Response& res, const ApiError& e) const
    {
        json err{{"code", e.code}, {"message", e.message}};
        if (!e.field.empty()) err["field"] = e.field;
        send_json(res, e.status, json{{"error", err}, {"constants_fingerprint", fingerprint}});
    }

    template <typename Fn>
    httplib::Server::Handler guarded(Fn fn)
    {
        return [this, fn](const httplib::Request& req, httplib::Response& res) {
            try {
                fn(req, res);
            } catch (const ApiFailure& f) {
                send_error(res, f.error);
            } catch (const Error& e) {
                send_error(res, to_api_error(e));
            } catch (const std::exception& e) {
                send_error(res, api_error(500, "internal", e.what()));
            }
        };
    }

    OutputFormat format_param(const httplib::Request& req) const
    {
        if (!req.has_param("format")) return OutputFormat::Structured;
        auto f = parse_output_format(req.get_param_value("format"));
        if (!f) {
            throw ApiFailure{api_error(422, "validation", "format must be text, structured or layer",
                                       "format")};
        }
        return *f;
    }

    void send_scorecard(httplib::Response& res, const Scorecard& card, OutputFormat format,
                        bool ephemeral) const
    {
        res.status = 200;
        if (ephemeral) res.set_header("X-Ephemeral", "true");
        if (format == OutputFormat::Structured && ephemeral) {
            auto doc = scorecard_to_json(card);
            doc["ephemeral"] = true;
            res.set_content(doc.dump(2) + "\n", kJson);
            return;
        }
        res.set_content(render(card, catalog, format, options.layer),
                        format == OutputFormat::Text ? "text/plain; charset=utf-8" : kJson);
    }

    json technique_json(const LabeledTechnique& lt) const
    {
        const auto& label = lt.label;
        return json{
            {"id", lt.technique.id},
            {"name", lt.technique.name},
            {"tactics", lt.technique.tactic_refs},
            {"is_subtechnique", lt.technique.is_subtechnique},
            {"impact", to_string(label.impact)},
            {"exploitability", to_string(label.exploitability)},
            {"label_source", to_string(label.source)},
            {"rationale", label.rationale},
            {"expected_score",
             {{"success", protection_score(label.exploitability, label.impact, Status::Success, consts).percent},
              {"failure", protection_score(label.exploitability, label.impact, Status::Failure, consts).percent}}}};
    }

    void routes()
    {
        server.set_post_routing_handler([this](const httplib::Request&, httplib::Response& res) {
            res.set_header("X-Constants-Fingerprint", fingerprint);
        });
        server.set_error_handler([this](const httplib::Request& req, httplib::Response& res) {
            if (res.body.empty()) {
                const int status = res.status;
                send_error(res, api_error(status, status == 404 ? "not_found" : "bad_request",
                                          "no route for " + req.method + " " + req.path));
            }
        });

        server.Get("/healthz", guarded([this](const httplib::Request&, httplib::Response& res) {
            const auto& s = catalog.stats();
            send_json(res, 200,
                      json{{"status", "ok"},
                           {"catalog",
                            {{"techniques", s.total},
                             {"tactics", catalog.tactics().size()},
                             {"labeled", s.labeled},
                             {"defaulted", s.defaulted},
                             {"excluded", s.excluded}}},
                           {"constants_fingerprint", fingerprint}});
        }));

        server.Get("/catalog/tactics", guarded([this](const httplib::Request&, httplib::Response& res) {
            json tactics = json::array();
            for (const auto& t : catalog.tactics()) {
                tactics.push_back({{"id", t.id},
                                   {"shortname", t.shortname},
                                   {"name", t.display_name},
                                   {"techniques", techniques_in_tactic(catalog, t.shortname).size()}});
            }
            send_json(res, 200, json{{"tactics", tactics}, {"constants_fingerprint", fingerprint}});
        }));

        server.Get("/catalog/techniques",
                   guarded([this](const httplib::Request& req, httplib::Response& res) {
                       json list = json::array();
                       json body;
                       if (req.has_param("tactic")) {
                           const auto tactic = req.get_param_value("tactic");
                           for (const auto& lt : techniques_in_tactic(catalog, tactic)) {
                               list.push_back(technique_json(lt));
                           }
                           body["tactic"] = tactic;
                       } else {
                           for (const auto& lt : catalog.techniques()) list.push_back(technique_json(lt));
                       }
                       body["techniques"] = std::move(list);
                       body["constants_fingerprint"] = fingerprint;
                       send_json(res, 200, std::move(body));
                   }));

        server.Post("/assessments", guarded([this](const httplib::Request& req, httplib::Response& res) {
            const auto body = parse_body(req);
            const auto target = body_string(body, "target_name", true);
            auto id = body_string(body, "id", false);
            if (id.empty()) id = generate_assessment_id();
            if (!is_assessment_id(id)) {
                throw ApiFailure{api_error(422, "validation", "invalid assessment id", "id")};
            }
            Timestamp created = now_utc();
            if (auto text = body_string(body, "created_at", false); !text.empty()) {
                auto t = parse_utc(text);
                if (!t) throw ApiFailure{api_error(422, "validation", "invalid created_at", "created_at")};
                created = *t;
            }

            std::lock_guard guard(lock_for(id));
            io::FileLock file_lock(path_for(id));
            if (std::filesystem::exists(path_for(id))) {
                throw ApiFailure{api_error(409, "already_exists", "assessment " + id + " exists", "id")};
            }
            write_assessment(path_for(id), new_assessment(target, created, id));
            send_json(res, 201, json{{"id", id}, {"constants_fingerprint", fingerprint}});
        }));

        server.Get(R"(/assessments/([A-Za-z0-9._-]+))",
                   guarded([this](const httplib::Request& req, httplib::Response& res) {
                       res.status = 200;
                       res.set_content(save_assessment(load(req.matches[1])), kJson);
                   }));

        server.Post(R"(/assessments/([A-Za-z0-9._-]+)/results)",
                    guarded([this](const httplib::Request& req, httplib::Response& res) {
                        const std::string id = req.matches[1];
                        const auto body = parse_body(req);
                        TechniqueExecution ex;
                        ex.technique_id = body_string(body, "technique_id", true);
                        ex.tactic = body_string(body, "tactic", true);
                        ex.status = body_status(body);
                        ex.note = body_string(body, "note", false);
                        ex.observed_at = now_utc();
                        if (auto text = body_string(body, "observed_at", false); !text.empty()) {
                            auto t = parse_utc(text);
                            if (!t) {
                                throw ApiFailure{api_error(422, "validation", "invalid observed_at",
                                                           "observed_at")};
                            }
                            ex.observed_at = *t;
                        }

                        std::lock_guard guard(lock_for(id));
                        load(id);  // 404 before a lock file is created
                        io::FileLock file_lock(path_for(id));
                        auto updated = record(load(id), std::move(ex), catalog);
                        write_assessment(path_for(id), updated);
                        send_json(res, 201,
                                  json{{"id", id},
                                       {"executions", updated.executions.size()},
                                       {"constants_fingerprint", fingerprint}});
                    }));

        server.Get(R"(/assessments/([A-Za-z0-9._-]+)/scorecard)",
                   guarded([this](const httplib::Request& req, httplib::Response& res) {
                       const auto format = format_param(req);
                       const auto card = compute_scorecard(load(req.matches[1]), catalog, consts);
                       send_scorecard(res, card, format, false);
                   }));

        server.Post(R"(/assessments/([A-Za-z0-9._-]+)/what-if)",
                    guarded([this](const httplib::Request& req, httplib::Response& res) {
                        const auto format = format_param(req);
                        const auto body = parse_body(req);
                        std::vector<ResultOverride> overrides;
                        if (auto it = body.find("overrides"); it != body.end()) {
                            if (!it->is_array()) {
                                throw ApiFailure{api_error(422, "validation",
                                                           "overrides must be an array", "overrides")};
                            }
                            for (std::size_t k = 0; k < it->size(); ++k) {
                                const auto path = "overrides[" + std::to_string(k) + "].";
                                const auto& o = (*it)[k];
                                if (!o.is_object()) {
                                    throw ApiFailure{api_error(422, "validation",
                                                               path + " must be an object", path)};
                                }
                                overrides.push_back({body_string(o, "technique_id", true, path),
                                                     body_string(o, "tactic", true, path),
                                                     body_status(o, path)});
                            }
                        }
                        const auto card = what_if(load(req.matches[1]), overrides, catalog, consts);
                        send_scorecard(res, card, format, true);
                    }));
    }
};

ApiService::ApiService(LabeledCatalog catalog, ScoringConstants consts, ServiceOptions options)
{
    std::filesystem::create_directories(options.data_dir);
    impl_ = std::make_unique<Impl>(std::move(catalog), std::move(consts), std::move(options));
}

ApiService::~ApiService() = default;

int ApiService::bind(const std::string& host, int port)
{
    const int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                                : (impl_->server.bind_to_port(host, port) ? port : -1);
    if (bound < 0) {
        throw Error(ErrorCode::Io, "cannot bind " + host + ":" + std::to_string(port));
    }
    return bound;
}

void ApiService::run()
{
    impl_->server.listen_after_bind();
}

void ApiService::stop()
{
    impl_->server.stop();
}

std::filesystem::path ApiService::assessment_path(std::string_view id) const
{
    return impl_->path_for(id);
}

}  // namespace attackscore
