#include "pdnet/service.hpp"

#include "pdnet/discovery.hpp"

namespace pdnet {

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(2) + "\n", "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
    send_json(res, status, json{{"error", message}});
}

}  // namespace

DiscoveryService::DiscoveryService(std::filesystem::path snapshot_path)
    : path_(std::move(snapshot_path)) {
    snap_ = std::make_shared<const NetworkSnapshot>(load_network(path_));
    install_routes();
}

void DiscoveryService::reload() {
    auto fresh = std::make_shared<const NetworkSnapshot>(load_network(path_));
    std::lock_guard<std::mutex> lock(mu_);
    snap_ = std::move(fresh);
}

std::shared_ptr<const NetworkSnapshot> DiscoveryService::snapshot() const {
    std::lock_guard<std::mutex> lock(mu_);
    return snap_;
}

bool DiscoveryService::listen(const std::string& host, int port) {
    return server_.listen(host, port);
}

int DiscoveryService::bind_any_port(const std::string& host) {
    return server_.bind_to_any_port(host);
}

bool DiscoveryService::listen_after_bind() { return server_.listen_after_bind(); }

void DiscoveryService::stop() { server_.stop(); }

void DiscoveryService::install_routes() {
    server_.Get("/stats", [this](const httplib::Request&, httplib::Response& res) {
        auto snap = snapshot();
        NetworkStats stats =
            snap->has_stats ? snap->stats : compute_stats(snap->network, {});
        send_json(res, 200, to_json(stats));
    });

    server_.Get("/datasets", [this](const httplib::Request& req, httplib::Response& res) {
        auto snap = snapshot();
        QueryFilter filter;
        Predicate predicate = Predicate::contains;
        if (req.has_param("predicate")) {
            std::string p = req.get_param_value("predicate");
            if (p == "equals") {
                predicate = Predicate::equals;
            } else if (p != "contains") {
                return send_error(res, 400, "predicate must be contains or equals");
            }
        }
        for (const auto& [field, value] : req.params) {
            if (field == "predicate") continue;
            filter.clauses.push_back({field, predicate, value});
        }
        try {
            json rows = json::array();
            for (const auto& d : query_datasets(snap->network, filter)) rows.push_back(to_json(d));
            send_json(res, 200, rows);
        } catch (const QueryError& e) {
            send_error(res, 400, e.what());
        }
    });

    server_.Get(R"(/datasets/([^/]+)/similar)",
                [this](const httplib::Request& req, httplib::Response& res) {
                    auto snap = snapshot();
                    RwrParams params;
                    try {
                        if (req.has_param("k")) params.top_k = std::stoul(req.get_param_value("k"));
                        if (req.has_param("c")) {
                            params.restart_prob = std::stod(req.get_param_value("c"));
                            if (params.restart_prob <= 0.0 || params.restart_prob >= 1.0)
                                return send_error(res, 400, "c must be in (0, 1)");
                        }
                    } catch (const std::exception&) {
                        return send_error(res, 400, "k and c must be numeric");
                    }
                    try {
                        json rows = json::array();
                        for (const auto& s : similar_datasets(snap->network, req.matches[1], params)) {
                            rows.push_back(json{
                                {"entity_id", s.entity_id},
                                {"canonical_name",
                                 snap->network.entities().at(s.entity_id).canonical_name},
                                {"score", s.score}});
                        }
                        send_json(res, 200, rows);
                    } catch (const NotFound& e) {
                        send_error(res, 404, e.what());
                    }
                });

    server_.Get(R"(/datasets/([^/]+))", [this](const httplib::Request& req,
                                               httplib::Response& res) {
        auto snap = snapshot();
        auto it = snap->network.entities().find(req.matches[1]);
        if (it == snap->network.entities().end())
            return send_error(res, 404, "unknown entity: " + std::string(req.matches[1]));
        send_json(res, 200, to_json(it->second));
    });

    server_.Get(R"(/papers/([^/]+)/datasets)", [this](const httplib::Request& req,
                                                      httplib::Response& res) {
        auto snap = snapshot();
        std::string paper_id = req.matches[1];
        if (!snap->network.papers().count(paper_id))
            return send_error(res, 404, "unknown paper: " + paper_id);
        std::set<std::string> entity_ids;
        for (const auto& edge : snap->network.edges())
            if (edge.paper_id == paper_id) entity_ids.insert(edge.entity_id);
        json rows = json::array();
        for (const auto& id : entity_ids) rows.push_back(to_json(snap->network.entities().at(id)));
        send_json(res, 200, rows);
    });

    server_.Post("/admin/reload", [this](const httplib::Request&, httplib::Response& res) {
        try {
            reload();
            send_json(res, 200, json{{"reloaded", true}});
        } catch (const std::exception& e) {
            send_error(res, 500, e.what());
        }
    });
}

}  // namespace pdnet
